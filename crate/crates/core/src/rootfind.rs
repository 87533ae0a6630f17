//! Splitting the trailing coefficient into linear factors and turning them
//! into reported roots.
//!
//! Factors are recovered on a generic line u = p + t q: each simple
//! rational root of the restriction pins a hyperplane through its gradient;
//! multiple roots use the gradient restriction deflated by (t - t_j)^(m-1).
//! Every candidate factor is confirmed by exact division before it is
//! believed, so the re-expansion identity holds unconditionally on output.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::gcp::{gcp, inferred_supports, simplex_support, GcpProblem, GcpResult};
use crate::geom::support::{Support, SupportTuple};
use crate::poly::MultiPoly;
use crate::resultant::ResultantConfig;
use crate::rng::Rng;
use crate::univar::{uni_roots, UniPoly};

/// A linear factor of the trailing coefficient: the vector of coefficients
/// indexed by the points of A (first nonzero entry normalized to 1), with
/// its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFactor {
    pub coeffs: Vec<FieldElem>,
    pub multiplicity: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootStatus {
    /// Exact residual zero and every coordinate nonzero.
    Verified,
    /// No torus chart for this factor (vanishing leading coordinate, a zero
    /// coordinate, or a tag support without the simplex pattern).
    Boundary,
    /// Torus coordinates exist but the residual is nonzero: the factor
    /// witnesses excess structure rather than an honest root.
    Unverified,
}

impl RootStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RootStatus::Verified => "verified",
            RootStatus::Boundary => "boundary",
            RootStatus::Unverified => "unverified",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RecoveredRoot {
    /// The projective coefficient vector [c_e | e in A].
    pub projective: Vec<FieldElem>,
    /// Torus coordinates (c_{e_i} / c_0), when A contains 0 and all e_i and
    /// the coordinate of 0 is nonzero.
    pub torus: Option<Vec<FieldElem>>,
    pub multiplicity: u32,
    pub status: RootStatus,
}

/// Number of fresh lines tried before the remaining polynomial is returned
/// as a nonsplit remainder.
const LINE_RETRIES: u32 = 8;

fn line_params(field: FieldCtx, r: usize, attempt: u32, seed: u64) -> (Vec<FieldElem>, Vec<FieldElem>) {
    if attempt == 0 {
        let p = (0..r).map(|i| field.from_i64(i as i64 + 1)).collect();
        let q = (0..r).map(|i| field.from_i64((i as i64 + 2) * (i as i64 + 2))).collect();
        (p, q)
    } else {
        let mut rng = Rng::derive(seed, "split-line", attempt as u64);
        let draw = |rng: &mut Rng| field.from_i64(rng.below(1 << 20) as i64 + 1);
        let p = (0..r).map(|_| draw(&mut rng)).collect();
        let q = (0..r).map(|_| draw(&mut rng)).collect();
        (p, q)
    }
}

/// Restrict a polynomial to the line u = p + t q, as a dense univariate
/// polynomial in t.
fn restrict_to_line(
    f: &MultiPoly,
    p: &[FieldElem],
    q: &[FieldElem],
) -> UniPoly {
    let field = f.field();
    let one_poly = |c: &FieldElem, d: &FieldElem| UniPoly::new(vec![c.clone(), d.clone()], field);
    let mut acc = UniPoly::zero(field);
    for (exp, coeff) in f.terms() {
        let mut term = UniPoly::new(vec![coeff.clone()], field);
        for (i, &e) in exp.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let lin = one_poly(&p[i], &q[i]);
            for _ in 0..e {
                term = term.mul(&lin);
            }
        }
        acc = acc.sub(&term.mul(&UniPoly::new(vec![field.from_i64(-1)], field)));
    }
    acc
}

fn normalize_first_nonzero(v: &[FieldElem]) -> Option<Vec<FieldElem>> {
    let lead = v.iter().find(|c| !c.is_zero())?;
    let inv = lead.inv().ok()?;
    Some(v.iter().map(|c| c.mul(&inv)).collect())
}

/// Split a homogeneous polynomial in the u-variables into linear factors
/// plus a nonsplit remainder. Returns (factors, remainder, scalar) with
///     input = scalar * product of factors^multiplicity * remainder
/// holding exactly; the remainder is monic and carries every irreducible
/// factor of degree >= 2 (over Q) or factor without base-field roots.
pub fn split_linear(
    f_a: &MultiPoly,
    seed: u64,
) -> Result<(Vec<LinearFactor>, MultiPoly, FieldElem)> {
    if f_a.is_zero() {
        return Err(Error::Precondition("cannot split the zero polynomial".into()));
    }
    let field = f_a.field();
    let u_vars = f_a.vars().to_vec();
    let r = u_vars.len();
    let deg = f_a.total_degree();
    if !f_a.is_homogeneous_on(&u_vars, deg)? {
        return Err(Error::Precondition("trailing coefficient must be homogeneous".into()));
    }

    let mut work = f_a.clone();
    let mut factors: Vec<LinearFactor> = Vec::new();

    'line: for attempt in 0..LINE_RETRIES {
        if work.total_degree() == 0 {
            break;
        }
        let (p, q) = line_params(field, r, attempt, seed);
        // The line direction must avoid the hypersurface, so no factor is
        // pushed to infinity.
        if work.eval(&q)?.is_zero() {
            continue 'line;
        }
        loop {
            if work.total_degree() == 0 {
                break 'line;
            }
            let phi = restrict_to_line(&work, &p, &q);
            if phi.degree() < work.total_degree() as usize {
                continue 'line;
            }
            let (troots, _) = uni_roots(&phi)?;
            let mut extracted = false;
            for (tj, mu) in &troots {
                let point: Vec<FieldElem> =
                    p.iter().zip(&q).map(|(pi, qi)| pi.add(&qi.mul(tj))).collect();
                let grad: Vec<FieldElem> = u_vars
                    .iter()
                    .map(|v| work.derivative(v).and_then(|d| d.eval(&point)))
                    .collect::<Result<_>>()?;
                let coeffs = if *mu == 1 {
                    match normalize_first_nonzero(&grad) {
                        Some(c) => c,
                        None => continue 'line, // gradient vanished: bad line
                    }
                } else {
                    // Deflate the gradient restriction by (t - t_j)^(mu-1);
                    // its value at t_j is proportional to the factor.
                    let mut c = Vec::with_capacity(r);
                    let mut ok = true;
                    for v in &u_vars {
                        let h = restrict_to_line(&work.derivative(v)?, &p, &q);
                        let mut cur = h;
                        let mut divisible = true;
                        for _ in 0..mu - 1 {
                            let lin =
                                UniPoly::new(vec![tj.neg(), field.one()], field);
                            let (quot, rem) = cur.divmod(&lin);
                            if !rem.is_zero() {
                                divisible = false;
                                break;
                            }
                            cur = quot;
                        }
                        if !divisible {
                            ok = false;
                            break;
                        }
                        c.push(cur.eval(tj));
                    }
                    if !ok {
                        continue 'line;
                    }
                    match normalize_first_nonzero(&c) {
                        Some(c) => c,
                        None => continue 'line,
                    }
                };
                // Confirm by exact division, as many times as it divides.
                let factor_poly = {
                    let mut acc = MultiPoly::zero(u_vars.clone(), field);
                    for (i, v) in u_vars.iter().enumerate() {
                        if coeffs[i].is_zero() {
                            continue;
                        }
                        let var = MultiPoly::var(u_vars.clone(), v, field)?;
                        acc = acc.add(&var.scale(&coeffs[i]))?;
                    }
                    acc
                };
                let mut mult = 0u32;
                while let Ok(quot) = work.divexact(&factor_poly) {
                    work = quot;
                    mult += 1;
                }
                if mult > 0 {
                    match factors.iter_mut().find(|f| f.coeffs == coeffs) {
                        Some(f) => f.multiplicity += mult,
                        None => factors.push(LinearFactor { coeffs, multiplicity: mult }),
                    }
                    extracted = true;
                }
            }
            if !extracted {
                continue 'line;
            }
        }
    }

    // Remainder and the removed scalar; then verify the re-expansion.
    let (remainder, _) = work.normalize_monic();
    let mut expansion = remainder.clone();
    for f in &factors {
        let mut lin = MultiPoly::zero(u_vars.clone(), field);
        for (i, v) in u_vars.iter().enumerate() {
            if f.coeffs[i].is_zero() {
                continue;
            }
            lin = lin.add(&MultiPoly::var(u_vars.clone(), v, field)?.scale(&f.coeffs[i]))?;
        }
        for _ in 0..f.multiplicity {
            expansion = expansion.mul(&lin)?;
        }
    }
    let scalar = match (f_a.leading_term(), expansion.leading_term()) {
        (Some((_, a)), Some((_, b))) => a.div(b)?,
        _ => field.one(),
    };
    if &expansion.scale(&scalar) != f_a {
        return Err(Error::Precondition(
            "internal error: factor re-expansion does not reproduce the input".into(),
        ));
    }
    factors.sort_by(|a, b| {
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            let ord = x.cmp_canonical(y);
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        std::cmp::Ordering::Equal
    });
    Ok((factors, remainder, scalar))
}

/// Turn factors into root reports. When A contains the origin and all unit
/// vectors, ratios against the origin coordinate give torus coordinates.
pub fn roots_from_factors(factors: &[LinearFactor], a: &Support) -> Vec<RecoveredRoot> {
    let n = a.ambient_dim();
    let origin_idx = a.points().iter().position(|p| p.iter().all(|&c| c == 0));
    let unit_idx: Vec<Option<usize>> = (0..n)
        .map(|i| {
            a.points().iter().position(|p| {
                p.iter().enumerate().all(|(j, &c)| if j == i { c == 1 } else { c == 0 })
            })
        })
        .collect();
    let simplex_like = origin_idx.is_some() && unit_idx.iter().all(|o| o.is_some());
    factors
        .iter()
        .map(|f| {
            let torus = if simplex_like {
                let c0 = &f.coeffs[origin_idx.unwrap()];
                if c0.is_zero() {
                    None
                } else {
                    let inv = c0.inv().expect("nonzero");
                    let coords: Vec<FieldElem> = unit_idx
                        .iter()
                        .map(|&i| f.coeffs[i.unwrap()].mul(&inv))
                        .collect();
                    // A zero ratio puts the point outside the torus chart:
                    // report it projectively only.
                    if coords.iter().any(|c| c.is_zero()) {
                        None
                    } else {
                        Some(coords)
                    }
                }
            } else {
                None
            };
            let status = if torus.is_some() { RootStatus::Unverified } else { RootStatus::Boundary };
            RecoveredRoot {
                projective: f.coeffs.clone(),
                torus,
                multiplicity: f.multiplicity,
                status,
            }
        })
        .collect()
}

/// Which tag support the solver should use.
#[derive(Clone, Debug)]
pub enum TagChoice {
    Simplex,
    Cube,
    /// Search the simplex-product catalog for a compatible support; fall
    /// back to the simplex when nothing matches.
    Auto,
    Explicit(Support),
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub tag: TagChoice,
    pub fill: Option<SupportTuple>,
    pub supports: Option<SupportTuple>,
    pub config: ResultantConfig,
    pub emit_h: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tag: TagChoice::Simplex,
            fill: None,
            supports: None,
            config: ResultantConfig::default(),
            emit_h: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub mixed_volume: BigInt,
    pub trailing_power: u32,
    pub chow_vanishes: bool,
    pub tag_support: Support,
    pub factors: Vec<LinearFactor>,
    pub scalar: FieldElem,
    pub toric_perturbation: MultiPoly,
    pub remainder: MultiPoly,
    pub roots: Vec<RecoveredRoot>,
    pub fill_used: SupportTuple,
    pub gcp: GcpResult,
    pub emit_h: bool,
    pub seed: u64,
}

/// Full pipeline: fill, perturbed resultant, factor split, root recovery,
/// exact residual checks.
pub fn solve(
    system: &[MultiPoly],
    x_vars: &[String],
    field: FieldCtx,
    options: &SolveOptions,
) -> Result<SolveReport> {
    if system.is_empty() || system.len() != x_vars.len() {
        return Err(Error::Precondition("need a square system".into()));
    }
    let n = x_vars.len();
    let supports = match &options.supports {
        Some(e) => {
            let actual = inferred_supports(system, x_vars)?;
            for i in 0..n {
                if !actual.entry(i).is_subset_of(e.entry(i)) {
                    return Err(Error::Precondition(format!(
                        "declared support {i} does not contain the polynomial's monomials"
                    )));
                }
            }
            e.clone()
        }
        None => inferred_supports(system, x_vars)?,
    };
    let tag_support = match &options.tag {
        TagChoice::Simplex => simplex_support(n),
        TagChoice::Cube => crate::gcp::cube_support(n),
        TagChoice::Auto => {
            let hulls = supports.sum_all()?;
            crate::gcp::twisted_chow_support(&hulls)?.unwrap_or_else(|| simplex_support(n))
        }
        TagChoice::Explicit(a) => a.clone(),
    };
    let problem = GcpProblem {
        system: system.to_vec(),
        x_vars: x_vars.to_vec(),
        supports,
        chow_support: tag_support.clone(),
        fill: options.fill.clone(),
        field,
    };
    let gcp_result = gcp(&problem, &options.config)?;
    let (factors, remainder, scalar) =
        split_linear(&gcp_result.toric_perturbation, options.config.seed)?;

    // Multiplicity accounting: factors plus remainder exhaust M(E).
    let mult_sum: u32 = factors.iter().map(|f| f.multiplicity).sum();
    let rem_deg = remainder.total_degree();
    if BigInt::from(mult_sum) + BigInt::from(rem_deg) != gcp_result.mixed_volume {
        return Err(Error::Precondition(
            "internal error: factor multiplicities do not sum to the mixed volume".into(),
        ));
    }

    let mut roots = roots_from_factors(&factors, &tag_support);
    for root in roots.iter_mut() {
        if let Some(coords) = &root.torus {
            let residual_zero = system
                .iter()
                .map(|f| f.eval(coords))
                .collect::<Result<Vec<_>>>()?
                .iter()
                .all(|v| v.is_zero());
            root.status =
                if residual_zero { RootStatus::Verified } else { RootStatus::Unverified };
        }
    }

    Ok(SolveReport {
        mixed_volume: gcp_result.mixed_volume.clone(),
        trailing_power: gcp_result.trailing_power,
        chow_vanishes: gcp_result.trailing_power > 0,
        tag_support,
        factors,
        scalar,
        toric_perturbation: gcp_result.toric_perturbation.clone(),
        remainder,
        roots,
        fill_used: gcp_result.fill_used.clone(),
        gcp: gcp_result,
        emit_h: options.emit_h,
        seed: options.config.seed,
    })
}

impl SolveReport {
    pub fn to_json(&self) -> Value {
        let factors: Vec<Value> = self
            .factors
            .iter()
            .map(|f| {
                json!({
                    "coeffs": f.coeffs.iter().map(|c| c.to_coeff_string()).collect::<Vec<_>>(),
                    "multiplicity": f.multiplicity,
                })
            })
            .collect();
        let roots: Vec<Value> = self
            .roots
            .iter()
            .map(|r| {
                json!({
                    "projective": r.projective.iter().map(|c| c.to_coeff_string()).collect::<Vec<_>>(),
                    "torus": r.torus.as_ref().map(|t| {
                        t.iter().map(|c| c.to_coeff_string()).collect::<Vec<_>>()
                    }),
                    "multiplicity": r.multiplicity,
                    "status": r.status.as_str(),
                })
            })
            .collect();
        let mut out = json!({
            "mixed_volume": self.mixed_volume.to_string(),
            "k": self.trailing_power,
            "chow_vanishes": self.chow_vanishes,
            "A": self.tag_support.to_json(),
            "fill": self.fill_used.entries().iter().map(|s| s.to_json()).collect::<Vec<_>>(),
            "F_A": self.toric_perturbation.to_json(),
            "scalar": self.scalar.to_coeff_string(),
            "factors": factors,
            "roots": roots,
            "remainder": self.remainder.to_json(),
            "seed": self.seed,
        });
        if self.emit_h {
            out["H"] = self.gcp.h.to_json();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly_from_int_terms;

    fn q() -> FieldCtx {
        FieldCtx::Q
    }

    fn upoly(vars: &[&str], terms: &[(i64, &[u32])]) -> MultiPoly {
        poly_from_int_terms(vars, q(), terms)
    }

    #[test]
    fn simple_product_splits() {
        // (u0 + u1)(u0 + 2 u1)
        let f = upoly(&["u0", "u1"], &[(1, &[2, 0]), (3, &[1, 1]), (2, &[0, 2])]);
        let (factors, rem, _) = split_linear(&f, 0).unwrap();
        assert_eq!(factors.len(), 2);
        assert!(rem.is_one_constant());
        let coeff_sets: Vec<Vec<String>> = factors
            .iter()
            .map(|f| f.coeffs.iter().map(|c| c.to_coeff_string()).collect())
            .collect();
        assert!(coeff_sets.contains(&vec!["1".to_string(), "1".to_string()]));
        assert!(coeff_sets.contains(&vec!["1".to_string(), "2".to_string()]));
    }

    #[test]
    fn repeated_factor_multiplicity() {
        // (u0 + u1)^2
        let f = upoly(&["u0", "u1"], &[(1, &[2, 0]), (2, &[1, 1]), (1, &[0, 2])]);
        let (factors, rem, _) = split_linear(&f, 0).unwrap();
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].multiplicity, 2);
        assert!(rem.is_one_constant());
        // (u0+u1)^3 (u0 - u1)
        let cube = upoly(
            &["u0", "u1"],
            &[(1, &[4, 0]), (2, &[3, 1]), (0, &[2, 2]), (-2, &[1, 3]), (-1, &[0, 4])],
        );
        let (factors, rem, _) = split_linear(&cube, 0).unwrap();
        let mut mults: Vec<u32> = factors.iter().map(|f| f.multiplicity).collect();
        mults.sort();
        assert_eq!(mults, vec![1, 3]);
        assert!(rem.is_one_constant());
    }

    #[test]
    fn irreducible_quadratic_stays_in_remainder() {
        // u0^2 + u1^2 over Q: no rational linear factors
        let f = upoly(&["u0", "u1"], &[(1, &[2, 0]), (1, &[0, 2])]);
        let (factors, rem, _) = split_linear(&f, 0).unwrap();
        assert!(factors.is_empty());
        assert_eq!(rem, f);
        // over GF(5) it splits: u0^2 + u1^2 = (u0 + 2u1)(u0 + 3u1)
        let f5 = poly_from_int_terms(&["u0", "u1"], FieldCtx::Gf(5), &[(1, &[2, 0]), (1, &[0, 2])]);
        let (factors5, rem5, _) = split_linear(&f5, 0).unwrap();
        // oracle: try all normalized linear forms over GF(5)
        let field = FieldCtx::Gf(5);
        let mut expected = Vec::new();
        for c in 0..5 {
            let lin = poly_from_int_terms(&["u0", "u1"], field, &[(1, &[1, 0]), (c, &[0, 1])]);
            if f5.divexact(&lin).is_ok() {
                expected.push(c);
            }
        }
        assert_eq!(expected, vec![2, 3]);
        assert_eq!(factors5.len(), 2);
        assert!(rem5.is_one_constant());
    }

    #[test]
    fn torus_coordinates_from_ratios() {
        // factor u0 + 3 u1 + 2 u2 with A the standard simplex: u1 is the
        // point (0,1) (the y-monomial), u2 is (1,0), so the root is (2, 3).
        let a = simplex_support(2);
        let factors = vec![LinearFactor {
            coeffs: vec![q().from_i64(1), q().from_i64(3), q().from_i64(2)],
            multiplicity: 1,
        }];
        let roots = roots_from_factors(&factors, &a);
        assert_eq!(roots.len(), 1);
        let t = roots[0].torus.as_ref().unwrap();
        assert_eq!(t[0].to_coeff_string(), "2");
        assert_eq!(t[1].to_coeff_string(), "3");
        // factor with zero origin coordinate: projective only
        let boundary = vec![LinearFactor {
            coeffs: vec![q().from_i64(0), q().from_i64(1), q().from_i64(-1)],
            multiplicity: 1,
        }];
        let roots = roots_from_factors(&boundary, &a);
        assert!(roots[0].torus.is_none());
        assert_eq!(roots[0].status, RootStatus::Boundary);
    }

    #[test]
    fn lone_origin_factor_is_projective_only() {
        // factor u0 alone: the point at infinity [1:0:0]
        let a = simplex_support(2);
        let factors = vec![LinearFactor {
            coeffs: vec![q().from_i64(1), q().from_i64(0), q().from_i64(0)],
            multiplicity: 1,
        }];
        let roots = roots_from_factors(&factors, &a);
        assert!(roots[0].torus.is_none());
        assert_eq!(roots[0].status, RootStatus::Boundary);
    }

    #[test]
    fn boundary_root_surfaces_with_vanishing_chow() {
        // x + 2xy and x + 3xy with declared supports {(0,1),(1,0),(1,1)}:
        // the u-resultant vanishes identically and the only recovered point
        // lies on the boundary of the compactification (x-coordinate 0).
        let field = q();
        let xy = ["x", "y"];
        let s1 = poly_from_int_terms(&xy, field, &[(1, &[1, 0]), (2, &[1, 1])]);
        let s2 = poly_from_int_terms(&xy, field, &[(1, &[1, 0]), (3, &[1, 1])]);
        let tri = Support::new(2, vec![vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap();
        let declared = SupportTuple::new(vec![tri.clone(), tri]).unwrap();
        let x_vars: Vec<String> = vec!["x".into(), "y".into()];
        let options = SolveOptions { supports: Some(declared), ..Default::default() };
        let report = solve(&[s1, s2], &x_vars, field, &options).unwrap();
        assert_eq!(report.mixed_volume, BigInt::from(1));
        assert!(report.chow_vanishes);
        assert_eq!(report.roots.len(), 1);
        assert!(report.roots[0].torus.is_none());
        assert_eq!(report.roots[0].status, RootStatus::Boundary);
        let proj: Vec<String> =
            report.roots[0].projective.iter().map(|c| c.to_coeff_string()).collect();
        // the x-ratio (last coordinate, point (1,0)) is zero
        assert_eq!(proj[2], "0");
    }

    #[test]
    fn solve_demo_system_end_to_end() {
        // x and y appear up to x^3 y; the zero set is two isolated points
        // plus the line x = -1.
        let field = q();
        let vars = ["x", "y"];
        let f1 = poly_from_int_terms(
            &vars,
            field,
            &[
                (1, &[0, 0]),
                (2, &[1, 0]),
                (-2, &[2, 1]),
                (-5, &[1, 1]),
                (1, &[2, 0]),
                (3, &[3, 1]),
            ],
        );
        let f2 = poly_from_int_terms(
            &vars,
            field,
            &[
                (2, &[0, 0]),
                (6, &[1, 0]),
                (-6, &[2, 1]),
                (-11, &[1, 1]),
                (4, &[2, 0]),
                (5, &[3, 1]),
            ],
        );
        let x_vars: Vec<String> = vec!["x".into(), "y".into()];
        let fill = SupportTuple::new(vec![
            Support::new(2, vec![vec![0, 0], vec![3, 1]]).unwrap(),
            Support::new(2, vec![vec![1, 1], vec![2, 0]]).unwrap(),
        ])
        .unwrap();
        let options = SolveOptions { fill: Some(fill), ..Default::default() };
        let report = solve(&[f1, f2], &x_vars, field, &options).unwrap();
        assert_eq!(report.mixed_volume, BigInt::from(4));
        assert_eq!(report.trailing_power, 1);
        assert!(report.chow_vanishes);
        assert_eq!(report.factors.len(), 4);
        assert!(report.remainder.is_one_constant());
        // all four roots are exact zeros of F; two have x = -1
        let mut torus_roots: Vec<(String, String)> = report
            .roots
            .iter()
            .map(|r| {
                assert_eq!(r.status, RootStatus::Verified);
                let t = r.torus.as_ref().unwrap();
                (t[0].to_coeff_string(), t[1].to_coeff_string())
            })
            .collect();
        torus_roots.sort();
        assert_eq!(
            torus_roots,
            vec![
                ("-1".to_string(), "1".to_string()),
                ("-1".to_string(), "1/4".to_string()),
                ("1".to_string(), "1".to_string()),
                ("1/7".to_string(), "7/4".to_string()),
            ]
        );
        // determinism of the serialized report
        let j1 = serde_json::to_string(&report.to_json()).unwrap();
        let report2 = solve(
            &[
                poly_from_int_terms(
                    &vars,
                    field,
                    &[
                        (1, &[0, 0]),
                        (2, &[1, 0]),
                        (-2, &[2, 1]),
                        (-5, &[1, 1]),
                        (1, &[2, 0]),
                        (3, &[3, 1]),
                    ],
                ),
                poly_from_int_terms(
                    &vars,
                    field,
                    &[
                        (2, &[0, 0]),
                        (6, &[1, 0]),
                        (-6, &[2, 1]),
                        (-11, &[1, 1]),
                        (4, &[2, 0]),
                        (5, &[3, 1]),
                    ],
                ),
            ],
            &x_vars,
            field,
            &SolveOptions {
                fill: Some(
                    SupportTuple::new(vec![
                        Support::new(2, vec![vec![0, 0], vec![3, 1]]).unwrap(),
                        Support::new(2, vec![vec![1, 1], vec![2, 0]]).unwrap(),
                    ])
                    .unwrap(),
                ),
                ..Default::default()
            },
        )
        .unwrap();
        let j2 = serde_json::to_string(&report2.to_json()).unwrap();
        assert_eq!(j1, j2);
    }

    #[test]
    fn univariate_system_through_the_pipeline() {
        // n = 1 degrades to univariate root finding: x^2 - 5x + 6
        let field = q();
        let f = poly_from_int_terms(&["x"], field, &[(1, &[2]), (-5, &[1]), (6, &[0])]);
        let report =
            solve(&[f], &["x".to_string()], field, &SolveOptions::default()).unwrap();
        assert_eq!(report.mixed_volume, BigInt::from(2));
        assert_eq!(report.trailing_power, 0);
        let mut roots: Vec<String> = report
            .roots
            .iter()
            .map(|r| {
                assert_eq!(r.status, RootStatus::Verified);
                r.torus.as_ref().unwrap()[0].to_coeff_string()
            })
            .collect();
        roots.sort();
        assert_eq!(roots, vec!["2", "3"]);
    }

    #[test]
    fn auto_tag_choice_uses_compatible_product() {
        // On the semi-mixed 3x3 system the automatic tag choice finds the
        // reflected-simplex pattern, the form does not vanish, and the
        // projective root comes out directly.
        let field = q();
        let vars = ["x", "y", "z"];
        let mk = |c3: i64, c4: i64| {
            poly_from_int_terms(
                &vars,
                field,
                &[(1, &[0, 1, 1]), (1, &[1, 0, 1]), (c3, &[1, 1, 0]), (c4, &[1, 1, 1])],
            )
        };
        let system = vec![mk(2, 3), mk(4, 9), mk(8, 27)];
        let x_vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let options = SolveOptions { tag: TagChoice::Auto, ..Default::default() };
        let report = solve(&system, &x_vars, field, &options).unwrap();
        let expect_a = Support::new(
            3,
            vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0], vec![1, 1, 1]],
        )
        .unwrap();
        assert_eq!(report.tag_support, expect_a);
        assert_eq!(report.trailing_power, 0, "twisted form does not vanish");
        assert_eq!(report.roots.len(), 1);
        let proj: Vec<String> =
            report.roots[0].projective.iter().map(|c| c.to_coeff_string()).collect();
        assert_eq!(proj, vec!["1", "-1", "0", "0"]);
    }

    #[test]
    fn planted_roots_recovered_over_gf101() {
        // Random sparse bilinear systems with a planted torus root: the
        // planted root's coefficient vector appears among the factors.
        let field = FieldCtx::Gf(101);
        let mut rng = Rng::new(2024);
        let mut done = 0;
        let mut attempts = 0;
        while done < 12 && attempts < 100 {
            attempts += 1;
            let zx = rng.below(100) + 1;
            let zy = rng.below(100) + 1;
            let zeta = [field.from_i64(zx as i64), field.from_i64(zy as i64)];
            let mk = |rng: &mut Rng| {
                // a + b x + c y + d x y vanishing at zeta
                let b = field.from_i64(rng.below(101) as i64);
                let c = field.from_i64(rng.below(101) as i64);
                let d = field.from_i64(rng.below(101) as i64);
                let a = b
                    .mul(&zeta[0])
                    .add(&c.mul(&zeta[1]))
                    .add(&d.mul(&zeta[0]).mul(&zeta[1]))
                    .neg();
                let terms = vec![
                    (vec![0u32, 0], a),
                    (vec![1, 0], b),
                    (vec![0, 1], c),
                    (vec![1, 1], d),
                ];
                MultiPoly::from_terms(vec!["x".into(), "y".into()], field, terms).unwrap()
            };
            let f1 = mk(&mut rng);
            let f2 = mk(&mut rng);
            if f1.num_terms() < 2 || f2.num_terms() < 2 {
                continue;
            }
            let x_vars: Vec<String> = vec!["x".into(), "y".into()];
            let report = match solve(&[f1, f2], &x_vars, field, &SolveOptions::default()) {
                Ok(r) => r,
                Err(Error::Precondition(_)) => continue, // degenerate draw
                Err(e) => panic!("unexpected error {e}"),
            };
            // planted root must appear among verified torus roots
            let hit = report.roots.iter().any(|r| {
                r.torus.as_ref().is_some_and(|t| t[0] == zeta[0] && t[1] == zeta[1])
            });
            assert!(hit, "planted root ({zx},{zy}) missing");
            done += 1;
        }
        assert!(done >= 12);
    }
}
