//! The perturbed sparse u-resultant pipeline: build the all-ones system F*
//! from a fill, form F - sF*, take the resultant against a fully symbolic
//! tag polynomial g = sum of u_e x^e, and slice out the trailing
//! s-coefficient. The trailing coefficient is homogeneous of degree M(E) in
//! the u_e and splits into linear factors, one per root (with excess
//! components contributing isolated witness points).

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::fill::{fills, irreducible_fill, FillOutcome};
use crate::geom::hull::hull_facets;
use crate::geom::subdivision::mixed_volume_seeded;
use crate::geom::support::{Point, Support, SupportTuple};
use crate::poly::MultiPoly;
use crate::resultant::{toric_resultant, toric_resultant_raw, ResultantConfig, ResultantProblem};

/// Inputs of the perturbed-resultant computation.
#[derive(Clone, Debug)]
pub struct GcpProblem {
    /// The n polynomials, in a ring whose variables are exactly `x_vars`.
    pub system: Vec<MultiPoly>,
    pub x_vars: Vec<String>,
    /// Declared supports E (entrywise supersets of the actual monomials).
    pub supports: SupportTuple,
    /// The tag support A (at least two points, nonnegative coordinates).
    pub chow_support: Support,
    /// A fill of E; computed greedily when absent.
    pub fill: Option<SupportTuple>,
    pub field: FieldCtx,
}

#[derive(Clone, Debug)]
pub struct GcpResult {
    /// The full perturbed resultant in the u and s variables, monic.
    pub h: MultiPoly,
    /// Least power of s with a nonzero coefficient in h.
    pub trailing_power: u32,
    /// Trailing coefficient of h, normalized monic (in the u variables).
    pub toric_perturbation: MultiPoly,
    /// Leading coefficient the normalization removed from the trailing
    /// coefficient of `h`.
    pub scalar: FieldElem,
    /// Constant (s^0) coefficient of h, normalized monic; zero iff the
    /// trailing power is positive.
    pub chow_constant: MultiPoly,
    pub mixed_volume: BigInt,
    /// u-variable names, aligned with the sorted points of `chow_support`.
    pub u_vars: Vec<String>,
    pub fill_used: SupportTuple,
}

pub fn u_var_names(a: &Support) -> Vec<String> {
    (0..a.len()).map(|i| format!("u{i}")).collect()
}

fn check_reserved_names(x_vars: &[String], u_count: usize) -> Result<()> {
    for v in x_vars {
        if v == "s" || (v.starts_with('u') && v[1..].parse::<usize>().is_ok()) {
            return Err(Error::Precondition(format!(
                "variable name {v} is reserved for tags"
            )));
        }
    }
    let _ = u_count;
    Ok(())
}

/// The all-ones perturbation system: f_i - s * sum of x^e over the fill
/// entry D_i. Output ring is x_vars + ["s"].
pub fn perturb_system(
    system: &[MultiPoly],
    x_vars: &[String],
    fill: &SupportTuple,
    declared: &SupportTuple,
) -> Result<Vec<MultiPoly>> {
    if system.len() != fill.len() || fill.len() != declared.len() {
        return Err(Error::Precondition("system/fill/support length mismatch".into()));
    }
    let field = system[0].field();
    let mut ring: Vec<String> = x_vars.to_vec();
    ring.push("s".into());
    let s_var = MultiPoly::var(ring.clone(), "s", field)?;
    let mut out = Vec::with_capacity(system.len());
    for (i, f) in system.iter().enumerate() {
        if !fill.entry(i).is_subset_of(declared.entry(i)) {
            return Err(Error::Precondition(format!(
                "fill entry {i} is not contained in the declared support"
            )));
        }
        let mut star = MultiPoly::zero(ring.clone(), field);
        for p in fill.entry(i).points() {
            let exp = point_to_exponents(p, x_vars.len(), 1)?;
            star = star.add(&MultiPoly::monomial(ring.clone(), exp, field.one())?)?;
        }
        let f_ext = f.extend_vars(&ring)?;
        out.push(f_ext.sub(&s_var.mul(&star)?)?);
    }
    Ok(out)
}

fn point_to_exponents(p: &[i64], nx: usize, extra: usize) -> Result<Vec<u32>> {
    let mut exp = vec![0u32; nx + extra];
    for (j, &c) in p.iter().enumerate() {
        if c < 0 {
            return Err(Error::Precondition(format!(
                "support point {p:?} has a negative coordinate; cannot form a monomial"
            )));
        }
        exp[j] = c as u32;
    }
    Ok(exp)
}

/// The symbolic tag polynomial g = sum over A of u_e x^e, in the ring
/// x_vars + u_vars (+ optionally s appended by the caller).
fn tag_polynomial(a: &Support, ring: &[String], x_count: usize, field: FieldCtx) -> Result<MultiPoly> {
    let mut g = MultiPoly::zero(ring.to_vec(), field);
    for (i, p) in a.points().iter().enumerate() {
        let mut exp = vec![0u32; ring.len()];
        for (j, &c) in p.iter().enumerate() {
            if c < 0 {
                return Err(Error::Precondition(
                    "tag support has negative coordinates".into(),
                ));
            }
            exp[j] = c as u32;
        }
        exp[x_count + i] = 1;
        g = g.add(&MultiPoly::monomial(ring.to_vec(), exp, field.one())?)?;
    }
    Ok(g)
}

/// Perturbed resultant pipeline. Returns the full H (monic), trailing
/// power k, the normalized trailing coefficient, and the constant term.
pub fn gcp(problem: &GcpProblem, cfg: &ResultantConfig) -> Result<GcpResult> {
    let n = problem.x_vars.len();
    if problem.system.len() != n || problem.supports.len() != n {
        return Err(Error::Precondition("need an n x n system with n supports".into()));
    }
    if problem.chow_support.len() < 2 {
        return Err(Error::Precondition("tag support needs at least two points".into()));
    }
    let field = problem.field;
    let u_vars = u_var_names(&problem.chow_support);
    check_reserved_names(&problem.x_vars, u_vars.len())?;

    let mv = mixed_volume_seeded(&problem.supports, cfg.seed)?;
    if mv.is_zero() {
        return Err(Error::Precondition("mixed volume of the supports is zero".into()));
    }

    // Fill: verify a supplied one, or search greedily.
    let fill_used = match &problem.fill {
        Some(d) => {
            match fills(d, &problem.supports)? {
                FillOutcome::Fills(_) => d.clone(),
                FillOutcome::Refuted { failing_w } => {
                    return Err(Error::Precondition(format!(
                        "supplied tuple does not fill the supports (fails at w = {failing_w:?})"
                    )))
                }
            }
        }
        None => irreducible_fill(&problem.supports)?,
    };

    // Ring: x variables, then tag variables u_e (sorted point order), then s.
    let mut ring = problem.x_vars.clone();
    ring.extend(u_vars.iter().cloned());
    ring.push("s".into());

    let perturbed = perturb_system(&problem.system, &problem.x_vars, &fill_used, &problem.supports)?;
    let mut polys: Vec<MultiPoly> =
        perturbed.iter().map(|f| f.extend_vars(&ring)).collect::<Result<_>>()?;
    polys.push(tag_polynomial(&problem.chow_support, &ring, n, field)?);

    let mut entries = problem.supports.entries().to_vec();
    entries.push(problem.chow_support.clone());
    let supports = SupportTuple::new(entries)?;

    let rp = ResultantProblem { supports: &supports, polys: &polys, x_vars: &problem.x_vars };

    // The s-degree of the perturbed resultant is known in advance: the sum
    // over i of the mixed volumes with E_i replaced by A. A lifting that
    // slips a spurious factor past the quotient is caught here and retried.
    let mut expected_s_deg = BigInt::zero();
    for i in 0..n {
        let mut entries_i = problem.supports.entries().to_vec();
        entries_i[i] = problem.chow_support.clone();
        expected_s_deg += mixed_volume_seeded(&SupportTuple::new(entries_i)?, cfg.seed)?;
    }

    let mut h = None;
    for round in 0..cfg.max_retries.max(1) {
        let round_cfg = ResultantConfig {
            seed: cfg.seed.wrapping_add((round as u64) << 32),
            ..cfg.clone()
        };
        let (h_raw, _) = toric_resultant_raw(&rp, &round_cfg)?;
        if h_raw.is_zero() {
            return Err(Error::Precondition(
                "perturbed resultant vanished identically; inputs violate the hypotheses".into(),
            ));
        }
        if BigInt::from(h_raw.degree_in("s")?) == expected_s_deg {
            h = Some(h_raw.normalize_monic().0);
            break;
        }
    }
    let h = h.ok_or(Error::RetriesExhausted {
        stage: "perturbed resultant with the expected s-degree",
        last_seed: cfg.seed,
    })?;

    let s_deg = h.degree_in("s")?;
    let mut trailing_power = 0u32;
    let mut trailing = MultiPoly::zero(u_vars.clone(), field);
    for k in 0..=s_deg {
        let c = h.coefficient_of("s", k)?;
        if !c.is_zero() {
            trailing_power = k;
            trailing = c;
            break;
        }
    }
    // Degree and homogeneity of the trailing coefficient, checked on every
    // run.
    let mv_u32 = u32::try_from(&mv).map_err(|_| Error::Unsupported("huge mixed volume".into()))?;
    if !trailing.is_homogeneous_on(&u_vars, mv_u32)? {
        return Err(Error::Precondition(
            "trailing coefficient is not homogeneous of degree M(E); internal error".into(),
        ));
    }
    let (toric_perturbation, scalar) = trailing.normalize_monic();
    let chow_constant = h.coefficient_of("s", 0)?.normalize_monic().0;

    Ok(GcpResult {
        h,
        trailing_power,
        toric_perturbation,
        scalar,
        chow_constant,
        mixed_volume: mv,
        u_vars,
        fill_used,
    })
}

/// The specialized sparse u-resultant Res(F, g) in the u variables, monic;
/// identically zero exactly when the system has excess roots in the
/// relevant toric compactification. No fill is involved.
pub fn chow_form(
    system: &[MultiPoly],
    x_vars: &[String],
    declared: &SupportTuple,
    a: &Support,
    cfg: &ResultantConfig,
) -> Result<MultiPoly> {
    let n = x_vars.len();
    if system.len() != n || declared.len() != n {
        return Err(Error::Precondition("need an n x n system with n supports".into()));
    }
    if a.len() < 2 {
        return Err(Error::Precondition("tag support needs at least two points".into()));
    }
    let field = system[0].field();
    let u_vars = u_var_names(a);
    check_reserved_names(x_vars, u_vars.len())?;
    let mut ring = x_vars.to_vec();
    ring.extend(u_vars.iter().cloned());
    let mut polys: Vec<MultiPoly> =
        system.iter().map(|f| f.extend_vars(&ring)).collect::<Result<_>>()?;
    polys.push(tag_polynomial(a, &ring, n, field)?);
    let mut entries = declared.entries().to_vec();
    entries.push(a.clone());
    let supports = SupportTuple::new(entries)?;
    let rp = ResultantProblem { supports: &supports, polys: &polys, x_vars };
    Ok(toric_resultant(&rp, cfg)?.poly)
}

/// Fan refinement test: true when every normal cone of Q is a union of
/// normal cones of P, checked cone by cone. For each vertex cone of P the
/// minimizing vertex of Q at the sum of the cone's extreme rays must be
/// unique and must stay minimizing at every single ray.
pub fn is_compatible(p_vertices: &Support, q_vertices: &Support) -> Result<bool> {
    let n = p_vertices.ambient_dim();
    if q_vertices.ambient_dim() != n {
        return Err(Error::Precondition("ambient dimension mismatch".into()));
    }
    if p_vertices.dim()? < n || q_vertices.dim()? < n {
        return Err(Error::Precondition("compatibility needs full-dimensional hulls".into()));
    }
    let facets = hull_facets(p_vertices.points(), n)?;
    // Vertices of P: points whose facet-normal sum pins them uniquely.
    for v in p_vertices.points() {
        let rays: Vec<&Vec<i64>> = facets
            .iter()
            .filter(|f| f.points.contains(v))
            .map(|f| &f.normal)
            .collect();
        if rays.is_empty() {
            continue; // interior point
        }
        let mut w = vec![0i64; n];
        for r in &rays {
            for (a, b) in w.iter_mut().zip(r.iter()) {
                *a += *b;
            }
        }
        let vface = p_vertices.face(&w);
        if vface.len() != 1 {
            continue; // not a vertex of P
        }
        // Interior direction of the cone: Q must have a unique minimizer...
        let qmin = q_vertices.face(&w);
        if qmin.len() != 1 {
            return Ok(false);
        }
        let q = &qmin.points()[0];
        // ...that stays minimizing along every extreme ray.
        for r in &rays {
            if !q_vertices.face(r).contains(q) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Set partitions of {0,..,n-1} as restricted growth strings, ordered by
/// number of blocks (coarsest first) then lexicographically.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == n {
            out.push(acc.clone());
            return;
        }
        let max = acc.iter().copied().max().map_or(0, |m| m + 1);
        for b in 0..=max {
            acc.push(b);
            rec(n, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut out);
    out.sort_by_key(|rgs| (rgs.iter().copied().max().unwrap_or(0), rgs.clone()));
    out
}

/// Candidate tag supports: vertex sets of products of (possibly reflected)
/// standard simplices over the blocks of a coordinate partition, translated
/// into the nonnegative orthant. The full simplex comes first and the unit
/// cube (product of 1-simplices) appears among the finest partitions.
pub fn simplex_product_catalog(n: usize) -> Vec<Support> {
    let mut out: Vec<Support> = Vec::new();
    for rgs in set_partitions(n) {
        let blocks = rgs.iter().copied().max().unwrap_or(0) + 1;
        let mut block_members: Vec<Vec<usize>> = vec![Vec::new(); blocks];
        for (i, &b) in rgs.iter().enumerate() {
            block_members[b].push(i);
        }
        for orient_mask in 0u32..(1 << blocks) {
            // vertex set: product over blocks of {0} U {±e_i}
            let mut points: Vec<Point> = vec![vec![0i64; n]];
            for (b, members) in block_members.iter().enumerate() {
                let sign: i64 = if orient_mask & (1 << b) == 0 { 1 } else { -1 };
                let mut next = Vec::with_capacity(points.len() * (members.len() + 1));
                for base in &points {
                    next.push(base.clone());
                    for &i in members {
                        let mut p = base.clone();
                        p[i] += sign;
                        next.push(p);
                    }
                }
                points = next;
            }
            // translate into the nonnegative orthant
            let mut shift = vec![0i64; n];
            for j in 0..n {
                let min = points.iter().map(|p| p[j]).min().unwrap_or(0);
                if min < 0 {
                    shift[j] = -min;
                }
            }
            for p in points.iter_mut() {
                for j in 0..n {
                    p[j] += shift[j];
                }
            }
            if let Ok(s) = Support::new(n, points) {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// First catalog entry whose hull's normal fan is refined by the fan of the
/// given polytope; `None` (with the catalog exhausted) when there is no
/// compatible simplex product in the catalog.
pub fn twisted_chow_support(p_vertices: &Support) -> Result<Option<Support>> {
    let n = p_vertices.ambient_dim();
    for candidate in simplex_product_catalog(n) {
        if is_compatible(p_vertices, &candidate)? {
            return Ok(Some(candidate));
        }
    }
    Ok(None)
}

/// Supports of the system polynomials (their monomial exponent sets).
pub fn inferred_supports(system: &[MultiPoly], x_vars: &[String]) -> Result<SupportTuple> {
    let n = x_vars.len();
    let entries = system
        .iter()
        .map(|f| {
            let pts = f
                .coefficients_on(x_vars)?
                .into_iter()
                .map(|(e, _)| e.iter().map(|&x| x as i64).collect())
                .collect();
            Support::new(n, pts)
        })
        .collect::<Result<Vec<_>>>()?;
    SupportTuple::new(entries)
}

/// The standard simplex vertex set {0, e_1, ..., e_n}.
pub fn simplex_support(n: usize) -> Support {
    let mut pts: Vec<Point> = vec![vec![0; n]];
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        pts.push(e);
    }
    Support::new(n, pts).expect("simplex")
}

/// The unit cube vertex set {0,1}^n.
pub fn cube_support(n: usize) -> Support {
    let pts: Vec<Point> = (0..1u32 << n)
        .map(|mask| (0..n).map(|i| ((mask >> i) & 1) as i64).collect())
        .collect();
    Support::new(n, pts).expect("cube")
}
