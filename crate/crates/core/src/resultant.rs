//! Toric (sparse) resultants of n+1 polynomials with given supports, via a
//! subdivision-based square matrix and exact quotient extraction.
//!
//! The matrix rows and columns are indexed by the lattice points of a
//! generically shifted Minkowski sum. Each point p receives a row content
//! (i, a): the cell of a fine coherent mixed subdivision containing p - delta
//! determines i as the smallest entry index whose summand in that cell is a
//! single point a, and the row holds the coefficients of x^(p-a) * f_i. With
//! that content rule the rows assigned to the last (generic) polynomial are
//! exactly as many as the mixed volume of the other supports, and
//!     det M = +- Res * det M'
//! where M' is the principal minor on the points lying in no fully mixed
//! cell. The quotient is carried out by exact division; any degenerate
//! choice of lifting or shift is detected and retried with fresh randomness.

use crate::error::{Error, Result};
use crate::field::{next_prime_above, FieldCtx, FieldElem};
use crate::geom::subdivision::{
    mixed_subdivision_with_retries, mixed_volume_seeded, MixedSubdivision,
};
use crate::geom::support::{Point, Support, SupportTuple};
use crate::matrix::{det_fraction_free, det_scalar_block};
use crate::par;
use crate::poly::MultiPoly;
use crate::rng::Rng;

#[derive(Clone, Debug)]
pub struct ResultantConfig {
    pub seed: u64,
    pub max_retries: u32,
    /// Refuse matrices with more rows than this; the tool is desk-scale.
    pub row_cap: usize,
}

impl Default for ResultantConfig {
    fn default() -> Self {
        ResultantConfig { seed: 0, max_retries: 8, row_cap: 2000 }
    }
}

impl ResultantConfig {
    pub fn with_seed(seed: u64) -> Self {
        ResultantConfig { seed, ..Default::default() }
    }
}

/// The inputs shared by every resultant-shaped computation: n+1 supports in
/// Z^n, n+1 polynomials whose x-support is contained in them, and the names
/// of the x-variables inside the polynomials' common ring. Remaining ring
/// variables ("tags": the u_e, s, or symbolic coefficients) survive into
/// the resultant.
pub struct ResultantProblem<'a> {
    pub supports: &'a SupportTuple,
    pub polys: &'a [MultiPoly],
    pub x_vars: &'a [String],
}

#[derive(Clone, Debug)]
pub struct CeMatrix {
    /// Lattice points of (sum of hulls) + delta, lexicographically sorted;
    /// they index both rows and columns.
    pub points: Vec<Point>,
    /// Per row: the entry index i and point a of its content.
    pub row_content: Vec<(usize, Point)>,
    /// Per row: whether its cell is fully mixed (one vertex summand, all
    /// other summands edges). Non-mixed rows form the denominator minor.
    pub in_mixed_cell: Vec<bool>,
    /// Dense square matrix over the tag ring.
    pub entries: Vec<Vec<MultiPoly>>,
    /// delta = delta_num / delta_den, entrywise.
    pub delta_num: Vec<i64>,
    pub delta_den: i64,
    pub lifting_seed: u64,
    pub tag_vars: Vec<String>,
    pub field: FieldCtx,
}

#[derive(Clone, Debug)]
pub struct ResultantValue {
    /// The resultant in the tag variables, normalized so the grlex-leading
    /// coefficient is 1 (the resultant is defined up to a constant).
    pub poly: MultiPoly,
    pub supports_used: SupportTuple,
}

/// Outcome of one construction attempt that may be cured by fresh
/// randomness.
enum Attempt<T> {
    Done(T),
    RetryDelta,
}

fn validate_problem(p: &ResultantProblem) -> Result<(usize, Vec<String>, FieldCtx)> {
    let n = p.x_vars.len();
    if p.supports.ambient_dim() != n {
        return Err(Error::Precondition("supports and x-variables disagree on n".into()));
    }
    if p.supports.len() != n + 1 || p.polys.len() != n + 1 {
        return Err(Error::Precondition(format!(
            "need n+1 supports and polynomials in dimension n={n}"
        )));
    }
    let ring_vars = p.polys[0].vars().to_vec();
    let field = p.polys[0].field();
    for q in p.polys {
        if q.vars() != ring_vars.as_slice() || q.field() != field {
            return Err(Error::IncompatibleRings("polynomials in different rings".into()));
        }
        if q.is_zero() {
            return Err(Error::Precondition("zero polynomial in resultant input".into()));
        }
    }
    for v in p.x_vars {
        if !ring_vars.contains(v) {
            return Err(Error::Precondition(format!("x-variable {v} not in the ring")));
        }
    }
    // Declared supports must contain the actual monomials.
    for (i, q) in p.polys.iter().enumerate() {
        for (xexp, _) in q.coefficients_on(p.x_vars)? {
            let pt: Point = xexp.iter().map(|&e| e as i64).collect();
            if !p.supports.entry(i).contains(&pt) {
                return Err(Error::Precondition(format!(
                    "monomial {pt:?} of polynomial {i} outside its declared support"
                )));
            }
        }
    }
    let tag_vars: Vec<String> =
        ring_vars.iter().filter(|v| !p.x_vars.contains(v)).cloned().collect();
    Ok((n, tag_vars, field))
}

/// Coefficients of each polynomial on the x-variables, as tag-ring
/// polynomials indexed by support point.
fn coefficient_tables(
    p: &ResultantProblem,
    tag_vars: &[String],
) -> Result<Vec<Vec<(Point, MultiPoly)>>> {
    p.polys
        .iter()
        .map(|q| {
            q.coefficients_on(p.x_vars)?
                .into_iter()
                .map(|(xexp, c)| {
                    let pt: Point = xexp.iter().map(|&e| e as i64).collect();
                    Ok((pt, c.extend_vars(tag_vars)?))
                })
                .collect()
        })
        .collect()
}

struct DeltaShift {
    num: Vec<i64>,
    den: i64,
}

impl DeltaShift {
    /// Variant 0: coordinates j/q for a prime q above every coordinate
    /// span; other variants use fresh numerators from the seeded stream.
    fn new(sum_cloud: &Support, n: usize, seed: u64, variant: u32) -> Self {
        let span = (0..n)
            .map(|j| {
                let lo = sum_cloud.points().iter().map(|p| p[j]).min().unwrap_or(0);
                let hi = sum_cloud.points().iter().map(|p| p[j]).max().unwrap_or(0);
                hi - lo
            })
            .max()
            .unwrap_or(1)
            .max(n as i64);
        let q = next_prime_above(span as u64 + 1) as i64;
        if variant == 0 {
            DeltaShift { num: (1..=n as i64).collect(), den: q }
        } else {
            let mut rng = Rng::derive(seed, "delta", variant as u64);
            let num = (0..n).map(|_| rng.below(q as u64 - 1) as i64 + 1).collect();
            DeltaShift { num, den: q }
        }
    }
}

/// Lattice points p with p - delta inside the polytope described by the
/// facet inequalities of `cloud`'s hull.
fn shifted_lattice_points(
    cloud: &Support,
    delta: &DeltaShift,
    n: usize,
) -> Result<Vec<Point>> {
    let facets = crate::geom::hull::hull_facets(cloud.points(), n)?;
    let q = delta.den as i128;
    let lo: Vec<i64> = (0..n)
        .map(|j| cloud.points().iter().map(|p| p[j]).min().unwrap())
        .collect();
    let hi: Vec<i64> = (0..n)
        .map(|j| cloud.points().iter().map(|p| p[j]).max().unwrap())
        .collect();
    let mut out = Vec::new();
    let mut cursor: Vec<i64> = lo.iter().zip(&delta.num).map(|(&l, _)| l).collect();
    'outer: loop {
        // test p = cursor: for all facets, <N, p - delta> >= min_value
        let inside = facets.iter().all(|f| {
            let npd: i128 = f
                .normal
                .iter()
                .zip(&cursor)
                .map(|(&a, &b)| a as i128 * b as i128)
                .sum();
            let ndelta: i128 = f
                .normal
                .iter()
                .zip(&delta.num)
                .map(|(&a, &b)| a as i128 * b as i128)
                .sum();
            q * npd - ndelta >= q * f.min_value
        });
        if inside {
            out.push(cursor.clone());
        }
        // advance cursor over the bounding box (+1 slack for the shift)
        for j in (0..n).rev() {
            cursor[j] += 1;
            if cursor[j] <= hi[j] + 1 {
                continue 'outer;
            }
            cursor[j] = lo[j];
        }
        break;
    }
    out.sort();
    Ok(out)
}

/// Facet descriptions of every cell, precomputed for containment queries.
struct CellGeometry {
    facets: Vec<Vec<crate::geom::hull::Facet>>,
    singleton: Vec<(usize, Point)>,
    mixed: Vec<bool>,
}

fn cell_geometry(sub: &MixedSubdivision, n: usize) -> Result<CellGeometry> {
    let facets = sub
        .cells
        .iter()
        .map(|c| crate::geom::hull::hull_facets(c.cell.points(), n))
        .collect::<Result<Vec<_>>>()?;
    let mut singleton = Vec::with_capacity(sub.cells.len());
    let mut mixed = Vec::with_capacity(sub.cells.len());
    for c in &sub.cells {
        let i = c
            .cell_type
            .iter()
            .position(|&d| d == 0)
            .expect("every cell of an (n+1)-tuple subdivision has a vertex summand");
        singleton.push((i, c.summands[i].points()[0].clone()));
        let vertex_count = c.cell_type.iter().filter(|&&d| d == 0).count();
        mixed.push(vertex_count == 1);
    }
    Ok(CellGeometry { facets, singleton, mixed })
}

/// Locate p - delta strictly inside a cell; `None` signals a boundary hit
/// (degenerate delta).
fn locate_cell(geo: &CellGeometry, p: &[i64], delta: &DeltaShift) -> Option<usize> {
    let q = delta.den as i128;
    for (ci, facets) in geo.facets.iter().enumerate() {
        let mut strictly_inside = true;
        let mut on_boundary = false;
        for f in facets {
            let npd: i128 =
                f.normal.iter().zip(p).map(|(&a, &b)| a as i128 * b as i128).sum();
            let ndelta: i128 = f
                .normal
                .iter()
                .zip(&delta.num)
                .map(|(&a, &b)| a as i128 * b as i128)
                .sum();
            let lhs = q * npd - ndelta - q * f.min_value;
            if lhs < 0 {
                strictly_inside = false;
                on_boundary = false;
                break;
            }
            if lhs == 0 {
                on_boundary = true;
            }
        }
        if strictly_inside {
            if on_boundary {
                return None;
            }
            return Some(ci);
        }
    }
    None
}

fn build_matrix(
    problem: &ResultantProblem,
    tables: &[Vec<(Point, MultiPoly)>],
    sub: &MixedSubdivision,
    delta: &DeltaShift,
    tag_vars: &[String],
    field: FieldCtx,
    cfg: &ResultantConfig,
) -> Result<Attempt<CeMatrix>> {
    let n = problem.x_vars.len();
    let cloud = problem.supports.sum_all()?;
    let points = shifted_lattice_points(&cloud, delta, n)?;
    if points.is_empty() {
        return Err(Error::Precondition("no lattice points in the shifted sum".into()));
    }
    if points.len() > cfg.row_cap {
        return Err(Error::Unsupported(format!(
            "matrix would have {} rows (cap {})",
            points.len(),
            cfg.row_cap
        )));
    }
    let geo = cell_geometry(sub, n)?;
    let mut row_content = Vec::with_capacity(points.len());
    let mut in_mixed_cell = Vec::with_capacity(points.len());
    for p in &points {
        match locate_cell(&geo, p, delta) {
            None => return Ok(Attempt::RetryDelta),
            Some(ci) => {
                row_content.push(geo.singleton[ci].clone());
                in_mixed_cell.push(geo.mixed[ci]);
            }
        }
    }
    let zero = MultiPoly::zero(tag_vars.to_vec(), field);
    let mut entries = vec![vec![zero; points.len()]; points.len()];
    for (ri, p) in points.iter().enumerate() {
        let (i, a) = &row_content[ri];
        for (e, coeff) in &tables[*i] {
            let col_pt: Point =
                p.iter().zip(a).zip(e).map(|((&pp, &aa), &ee)| pp - aa + ee).collect();
            match points.binary_search(&col_pt) {
                Ok(ci) => entries[ri][ci] = coeff.clone(),
                // The translated support escaped the point set: the shift
                // was unlucky.
                Err(_) => return Ok(Attempt::RetryDelta),
            }
        }
    }
    Ok(Attempt::Done(CeMatrix {
        points,
        row_content,
        in_mixed_cell,
        entries,
        delta_num: delta.num.clone(),
        delta_den: delta.den,
        lifting_seed: cfg.seed,
        tag_vars: tag_vars.to_vec(),
        field,
    }))
}

/// Interpolate the polynomial of degree <= points.len()-1 in `var` through
/// the given (abscissa, value) pairs, values living in the tag ring.
fn lagrange_in_var(
    var: &str,
    samples: &[(FieldElem, MultiPoly)],
    tag_vars: &[String],
    field: FieldCtx,
) -> Result<MultiPoly> {
    let s = MultiPoly::var(tag_vars.to_vec(), var, field)?;
    let mut acc = MultiPoly::zero(tag_vars.to_vec(), field);
    for (j, (xj, vj)) in samples.iter().enumerate() {
        if vj.is_zero() {
            continue;
        }
        let mut basis = MultiPoly::one(tag_vars.to_vec(), field);
        let mut denom = field.one();
        for (m, (xm, _)) in samples.iter().enumerate() {
            if m == j {
                continue;
            }
            basis = basis.mul(&s.sub(&MultiPoly::constant(tag_vars.to_vec(), xm.clone()))?)?;
            denom = denom.mul(&xj.sub(xm));
        }
        acc = acc.add(&vj.mul(&basis)?.scale(&denom.inv()?))?;
    }
    Ok(acc)
}

/// Exact determinant of a tag-ring matrix, exploiting structure: rows that
/// are constant (or become constant once s is specialized) are eliminated
/// with field arithmetic; a genuinely multivariate matrix falls back to
/// Bareiss.
pub fn ce_det(m: &[Vec<MultiPoly>], tag_vars: &[String], field: FieldCtx) -> Result<MultiPoly> {
    let n = m.len();
    if n == 0 {
        return Ok(MultiPoly::one(tag_vars.to_vec(), field));
    }
    let s_name = "s";
    let has_s = tag_vars.iter().any(|v| v == s_name);
    let row_uses_s = |row: &[MultiPoly]| -> bool {
        has_s && row.iter().any(|e| e.degree_in(s_name).map(|d| d > 0).unwrap_or(false))
    };
    let row_uses_other = |row: &[MultiPoly]| -> bool {
        row.iter().any(|e| {
            e.terms().iter().any(|(exp, _)| {
                exp.iter().enumerate().any(|(vi, &d)| d > 0 && tag_vars[vi] != s_name)
            })
        })
    };

    let mut s_rows = Vec::new(); // rows in K[s] only
    let mut const_rows = Vec::new();
    let mut sym_rows = Vec::new(); // rows using non-s variables
    for (i, row) in m.iter().enumerate() {
        let us = row_uses_s(row);
        let uo = row_uses_other(row);
        match (us, uo) {
            (true, true) => {
                // Mixed rows: no structure to exploit; whole-matrix Bareiss.
                if n > 12 {
                    return Err(Error::Unsupported(
                        "matrix mixes interpolation variable into symbolic rows".into(),
                    ));
                }
                return det_fraction_free(m);
            }
            (true, false) => s_rows.push(i),
            (false, false) => const_rows.push(i),
            (false, true) => sym_rows.push(i),
        }
    }

    // Row reordering (scalar-destined rows first) and its sign.
    let order: Vec<usize> = const_rows
        .iter()
        .chain(&s_rows)
        .chain(&sym_rows)
        .copied()
        .collect();
    let mut sign_flip = false;
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = order[cur];
            len += 1;
        }
        if len % 2 == 0 {
            sign_flip = !sign_flip;
        }
    }

    let scalar_count = const_rows.len() + s_rows.len();
    let symbolic: Vec<Vec<MultiPoly>> = sym_rows.iter().map(|&i| m[i].clone()).collect();

    let det = if s_rows.is_empty() {
        // No interpolation: specialize nothing.
        let scalars: Vec<Vec<FieldElem>> = const_rows
            .iter()
            .map(|&i| {
                m[i].iter()
                    .map(|e| e.constant_value().expect("constant row"))
                    .collect()
            })
            .collect();
        det_scalar_block(&scalars, &symbolic, tag_vars, field)?
    } else {
        // Interpolate in s.
        let degree_bound: u32 = s_rows
            .iter()
            .map(|&i| m[i].iter().map(|e| e.degree_in(s_name).unwrap_or(0)).max().unwrap_or(0))
            .sum();
        if let FieldCtx::Gf(p) = field {
            if u64::from(degree_bound) + 1 > p {
                return Err(Error::Unsupported(
                    "field too small for determinant interpolation".into(),
                ));
            }
        }
        let xs: Vec<FieldElem> =
            (0..=degree_bound as i64).map(|v| field.from_i64(v)).collect();
        let values: Vec<Result<MultiPoly>> = par::map_slice(&xs, |x| {
            let mut scalars: Vec<Vec<FieldElem>> = Vec::with_capacity(scalar_count);
            for &i in &const_rows {
                scalars.push(
                    m[i].iter().map(|e| e.constant_value().expect("constant row")).collect(),
                );
            }
            for &i in &s_rows {
                let row: Vec<FieldElem> = m[i]
                    .iter()
                    .map(|e| {
                        e.substitute(s_name, x)
                            .and_then(|p| {
                                p.constant_value().ok_or_else(|| {
                                    Error::Precondition("specialization not constant".into())
                                })
                            })
                    })
                    .collect::<Result<_>>()?;
                scalars.push(row);
            }
            det_scalar_block(&scalars, &symbolic, tag_vars, field)
        });
        let mut samples = Vec::with_capacity(xs.len());
        for (x, v) in xs.into_iter().zip(values) {
            samples.push((x, v?));
        }
        lagrange_in_var(s_name, &samples, tag_vars, field)?
    };
    Ok(if sign_flip { det.neg() } else { det })
}

/// Build the resultant matrix for the given problem, retrying liftings and
/// shifts until every lattice point falls strictly inside a cell.
pub fn ce_matrix(problem: &ResultantProblem, cfg: &ResultantConfig) -> Result<CeMatrix> {
    let (n, tag_vars, field) = validate_problem(problem)?;
    // Positivity hypothesis: the first n supports must have positive mixed
    // volume, otherwise the quotient construction degenerates.
    let first_n = SupportTuple::new(problem.supports.entries()[..n].to_vec())?;
    let mv = mixed_volume_seeded(&first_n, cfg.seed)?;
    if mv == num_bigint::BigInt::from(0) {
        return Err(Error::Precondition("mixed volume of the first n supports is zero".into()));
    }
    let tables = coefficient_tables(problem, &tag_vars)?;
    let cloud = problem.supports.sum_all()?;
    let mut last_seed = cfg.seed;
    for attempt in 0..cfg.max_retries {
        let sub = match mixed_subdivision_with_retries(
            problem.supports,
            cfg.seed.wrapping_add(attempt as u64),
            4,
        ) {
            Ok(s) => s,
            Err(Error::RetriesExhausted { last_seed: ls, .. }) => {
                last_seed = ls;
                continue;
            }
            Err(e) => return Err(e),
        };
        for delta_try in 0..4u32 {
            let variant = if delta_try == 0 { 0 } else { attempt * 3 + delta_try };
            let delta = DeltaShift::new(&cloud, n, cfg.seed, variant);
            match build_matrix(problem, &tables, &sub, &delta, &tag_vars, field, cfg)? {
                Attempt::Done(mat) => return Ok(mat),
                Attempt::RetryDelta => continue,
            }
        }
    }
    Err(Error::RetriesExhausted { stage: "resultant matrix construction", last_seed })
}

/// The toric resultant: det M / det M', normalized monic. A zero numerator
/// with nonzero denominator certifies a vanishing resultant.
pub fn toric_resultant(
    problem: &ResultantProblem,
    cfg: &ResultantConfig,
) -> Result<ResultantValue> {
    let (raw, _) = toric_resultant_raw(problem, cfg)?;
    Ok(ResultantValue {
        poly: raw.normalize_monic().0,
        supports_used: problem.supports.clone(),
    })
}

/// The quotient before scalar normalization, plus the matrix that produced
/// it. Consumers that slice coefficients (the perturbation pipeline) keep
/// the consistent unnormalized scale.
pub fn toric_resultant_raw(
    problem: &ResultantProblem,
    cfg: &ResultantConfig,
) -> Result<(MultiPoly, CeMatrix)> {
    let (n, tag_vars, field) = validate_problem(problem)?;
    let first_n = SupportTuple::new(problem.supports.entries()[..n].to_vec())?;
    let mv = mixed_volume_seeded(&first_n, cfg.seed)?;
    if mv == num_bigint::BigInt::from(0) {
        return Err(Error::Precondition("mixed volume of the first n supports is zero".into()));
    }
    let tables = coefficient_tables(problem, &tag_vars)?;
    let cloud = problem.supports.sum_all()?;
    let mut last_seed = cfg.seed;
    // A vanishing verdict (zero determinant, nonzero minor) is only trusted
    // once a second, independently lifted matrix reproduces it.
    let mut zero_witness: Option<(MultiPoly, CeMatrix)> = None;
    let mut zero_verdicts = 0u32;
    for attempt in 0..cfg.max_retries {
        let sub = match mixed_subdivision_with_retries(
            problem.supports,
            cfg.seed.wrapping_add(attempt as u64),
            4,
        ) {
            Ok(s) => s,
            Err(Error::RetriesExhausted { last_seed: ls, .. }) => {
                last_seed = ls;
                continue;
            }
            Err(e) => return Err(e),
        };
        'delta: for delta_try in 0..4u32 {
            let variant = if delta_try == 0 { 0 } else { attempt * 3 + delta_try };
            let delta = DeltaShift::new(&cloud, n, cfg.seed, variant);
            let mat = match build_matrix(problem, &tables, &sub, &delta, &tag_vars, field, cfg)? {
                Attempt::Done(mat) => mat,
                Attempt::RetryDelta => continue 'delta,
            };
            // Denominator: principal minor on points outside mixed cells.
            let keep: Vec<usize> = (0..mat.points.len())
                .filter(|&i| !mat.in_mixed_cell[i])
                .collect();
            let minor: Vec<Vec<MultiPoly>> = keep
                .iter()
                .map(|&r| keep.iter().map(|&c| mat.entries[r][c].clone()).collect())
                .collect();
            let det_minor = ce_det(&minor, &tag_vars, field)?;
            if det_minor.is_zero() {
                continue 'delta; // another shift can cure a singular minor
            }
            let det_full = ce_det(&mat.entries, &tag_vars, field)?;
            if det_full.is_zero() {
                zero_verdicts += 1;
                if zero_verdicts >= 2 || cfg.max_retries == 1 {
                    return Ok((MultiPoly::zero(tag_vars, field), mat));
                }
                zero_witness = Some((MultiPoly::zero(tag_vars.clone(), field), mat));
                break 'delta; // confirm with a fresh lifting
            }
            match det_full.divexact(&det_minor) {
                Ok(q) => return Ok((q, mat)),
                Err(Error::NotDivisible) => continue 'delta,
                Err(e) => return Err(e),
            }
        }
    }
    if let Some(zero) = zero_witness {
        // Only one usable matrix existed; its verdict stands.
        return Ok(zero);
    }
    Err(Error::RetriesExhausted {
        stage: "resultant quotient (unlucky specialization; supply symbolic tags)",
        last_seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly_from_int_terms;

    fn sup(n: usize, pts: &[&[i64]]) -> Support {
        Support::new(n, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    /// Generic 2x2 linear system plus a linear tag polynomial: the
    /// resultant is the 3x3 coefficient determinant.
    #[test]
    fn linear_system_gives_coefficient_determinant() {
        let field = FieldCtx::Q;
        let triangle = sup(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        let supports =
            SupportTuple::new(vec![triangle.clone(), triangle.clone(), triangle]).unwrap();
        // f1 = 3 + 2x + 5y, f2 = 1 + 7x + 4y, g = u0 + u1 x + u2 y
        let vars = ["x", "y", "u0", "u1", "u2"];
        let f1 = poly_from_int_terms(
            &vars,
            field,
            &[(3, &[0, 0, 0, 0, 0]), (2, &[1, 0, 0, 0, 0]), (5, &[0, 1, 0, 0, 0])],
        );
        let f2 = poly_from_int_terms(
            &vars,
            field,
            &[(1, &[0, 0, 0, 0, 0]), (7, &[1, 0, 0, 0, 0]), (4, &[0, 1, 0, 0, 0])],
        );
        let g = poly_from_int_terms(
            &vars,
            field,
            &[(1, &[0, 0, 1, 0, 0]), (1, &[1, 0, 0, 1, 0]), (1, &[0, 1, 0, 0, 1])],
        );
        let x_vars: Vec<String> = vec!["x".into(), "y".into()];
        let polys = [f1, f2, g];
        let problem =
            ResultantProblem { supports: &supports, polys: &polys, x_vars: &x_vars };
        let mat = ce_matrix(&problem, &ResultantConfig::default()).unwrap();
        assert_eq!(mat.points.len(), 3);
        let res = toric_resultant(&problem, &ResultantConfig::default()).unwrap();
        // Oracle: cofactor determinant of the coefficient matrix
        // [[3,2,5],[1,7,4],[u0,u1,u2]].
        let tag: Vec<String> = vec!["u0".into(), "u1".into(), "u2".into()];
        let c = |v: i64| {
            MultiPoly::constant(tag.clone(), field.from_i64(v))
        };
        let u = |i: usize| MultiPoly::var(tag.clone(), ["u0", "u1", "u2"][i], field).unwrap();
        let m = vec![
            vec![c(3), c(2), c(5)],
            vec![c(1), c(7), c(4)],
            vec![u(0), u(1), u(2)],
        ];
        let oracle = crate::matrix::det_cofactor(&m).unwrap();
        assert!(res.poly.proportional_to(&oracle));
    }

    /// Planted common root makes the specialized resultant vanish.
    #[test]
    fn vanishing_on_planted_root() {
        let field = FieldCtx::Gf(101);
        let square = sup(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let tri = sup(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        let supports = SupportTuple::new(vec![square.clone(), square, tri]).unwrap();
        let vars = ["x", "y"];
        // roots at (2, 3): build f = (stuff) vanishing there
        // f(x,y) = a + bx + cy + dxy with a = -(2b + 3c + 6d)
        let mk = |b: i64, c: i64, d: i64| {
            let a = -(2 * b + 3 * c + 6 * d);
            poly_from_int_terms(
                &vars,
                field,
                &[(a, &[0, 0]), (b, &[1, 0]), (c, &[0, 1]), (d, &[1, 1])],
            )
        };
        let f1 = mk(1, 4, 7);
        let f2 = mk(5, 2, 9);
        let g = mk(3, 8, 0); // also vanishes at (2,3); supported on the triangle
        let x_vars: Vec<String> = vec!["x".into(), "y".into()];
        let polys = [f1, f2, g];
        let problem =
            ResultantProblem { supports: &supports, polys: &polys, x_vars: &x_vars };
        let res = toric_resultant(&problem, &ResultantConfig::default()).unwrap();
        assert!(res.poly.is_zero());
    }

    /// Without a common root the specialized resultant should not vanish.
    #[test]
    fn nonvanishing_generic_specialization() {
        let field = FieldCtx::Gf(101);
        let square = sup(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let tri = sup(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        let supports = SupportTuple::new(vec![square.clone(), square, tri]).unwrap();
        let vars = ["x", "y"];
        let f1 = poly_from_int_terms(
            &vars,
            field,
            &[(1, &[0, 0]), (2, &[1, 0]), (3, &[0, 1]), (4, &[1, 1])],
        );
        let f2 = poly_from_int_terms(
            &vars,
            field,
            &[(7, &[0, 0]), (1, &[1, 0]), (5, &[0, 1]), (2, &[1, 1])],
        );
        let g = poly_from_int_terms(&vars, field, &[(11, &[0, 0]), (3, &[1, 0]), (1, &[0, 1])]);
        let x_vars: Vec<String> = vec!["x".into(), "y".into()];
        let polys = [f1, f2, g];
        let problem =
            ResultantProblem { supports: &supports, polys: &polys, x_vars: &x_vars };
        let res = toric_resultant(&problem, &ResultantConfig::default()).unwrap();
        assert!(!res.poly.is_zero());
    }

    /// Rows with content pointing at the last (generic) polynomial are
    /// exactly as many as the mixed volume of the other supports.
    #[test]
    fn generic_row_count_is_mixed_volume() {
        let field = FieldCtx::Q;
        let square = sup(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let tri = sup(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        let supports =
            SupportTuple::new(vec![square.clone(), square.clone(), tri.clone()]).unwrap();
        let vars = ["x", "y", "u0", "u1", "u2"];
        let f = poly_from_int_terms(
            &vars,
            field,
            &[
                (1, &[0, 0, 0, 0, 0]),
                (2, &[1, 0, 0, 0, 0]),
                (3, &[0, 1, 0, 0, 0]),
                (4, &[1, 1, 0, 0, 0]),
            ],
        );
        let f2 = poly_from_int_terms(
            &vars,
            field,
            &[
                (5, &[0, 0, 0, 0, 0]),
                (1, &[1, 0, 0, 0, 0]),
                (2, &[0, 1, 0, 0, 0]),
                (7, &[1, 1, 0, 0, 0]),
            ],
        );
        let g = poly_from_int_terms(
            &vars,
            field,
            &[(1, &[0, 0, 1, 0, 0]), (1, &[1, 0, 0, 1, 0]), (1, &[0, 1, 0, 0, 1])],
        );
        let x_vars: Vec<String> = vec!["x".into(), "y".into()];
        let polys = [f, f2, g];
        let problem =
            ResultantProblem { supports: &supports, polys: &polys, x_vars: &x_vars };
        let mat = ce_matrix(&problem, &ResultantConfig::default()).unwrap();
        let generic_rows =
            mat.row_content.iter().filter(|(i, _)| *i == 2).count();
        let mv = crate::geom::subdivision::mixed_volume(
            &SupportTuple::new(vec![
                sup(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]),
                sup(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]),
            ])
            .unwrap(),
        )
        .unwrap();
        assert_eq!(num_bigint::BigInt::from(generic_rows), mv);
        // row support patterns match translated supports
        for (ri, (i, _)) in mat.row_content.iter().enumerate() {
            let nonzero = mat.entries[ri].iter().filter(|e| !e.is_zero()).count();
            assert_eq!(nonzero, problem.polys[*i].num_terms());
        }
    }

    /// The determinant helper agrees with plain Bareiss when a row mixes
    /// the interpolation variable with other tags.
    #[test]
    fn mixed_variable_determinant_falls_back() {
        let field = FieldCtx::Q;
        let tag: Vec<String> = vec!["u0".into(), "s".into()];
        let m = vec![
            vec![
                poly_from_int_terms(&["u0", "s"], field, &[(1, &[0, 1])]),
                poly_from_int_terms(&["u0", "s"], field, &[(1, &[1, 0])]),
            ],
            vec![
                poly_from_int_terms(&["u0", "s"], field, &[(1, &[0, 0])]),
                poly_from_int_terms(&["u0", "s"], field, &[(1, &[1, 1]), (2, &[0, 0])]),
            ],
        ];
        let got = ce_det(&m, &tag, field).unwrap();
        let expect = crate::matrix::det_fraction_free(&m).unwrap();
        assert_eq!(got, expect);
    }

    /// n = 1: the classical resultant of two univariate polynomials.
    #[test]
    fn univariate_resultant() {
        let field = FieldCtx::Q;
        let seg = sup(1, &[&[0], &[1]]);
        let supports = SupportTuple::new(vec![seg.clone(), seg]).unwrap();
        let vars = ["x"];
        // common root at 2: resultant vanishes
        let f = poly_from_int_terms(&vars, field, &[(1, &[1]), (-2, &[0])]);
        let g = poly_from_int_terms(&vars, field, &[(2, &[1]), (-4, &[0])]);
        let x_vars: Vec<String> = vec!["x".into()];
        let polys = [f.clone(), g];
        let problem =
            ResultantProblem { supports: &supports, polys: &polys, x_vars: &x_vars };
        let res = toric_resultant(&problem, &ResultantConfig::default()).unwrap();
        assert!(res.poly.is_zero());
        // no common root: nonzero
        let h = poly_from_int_terms(&vars, field, &[(1, &[1]), (-3, &[0])]);
        let polys2 = [f, h];
        let problem2 =
            ResultantProblem { supports: &problem.supports.clone(), polys: &polys2, x_vars: &x_vars };
        let res2 = toric_resultant(&problem2, &ResultantConfig::default()).unwrap();
        assert!(!res2.poly.is_zero());
    }

    #[test]
    fn row_cap_refuses_large_matrices() {
        let field = FieldCtx::Q;
        let square = sup(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let tri = sup(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        let supports = SupportTuple::new(vec![square.clone(), square, tri]).unwrap();
        let vars = ["x", "y"];
        let f1 = poly_from_int_terms(
            &vars,
            field,
            &[(1, &[0, 0]), (2, &[1, 0]), (3, &[0, 1]), (4, &[1, 1])],
        );
        let f2 = poly_from_int_terms(
            &vars,
            field,
            &[(7, &[0, 0]), (1, &[1, 0]), (5, &[0, 1]), (2, &[1, 1])],
        );
        let g = poly_from_int_terms(&vars, field, &[(1, &[0, 0]), (3, &[1, 0]), (1, &[0, 1])]);
        let x_vars: Vec<String> = vec!["x".into(), "y".into()];
        let polys = [f1, f2, g];
        let problem =
            ResultantProblem { supports: &supports, polys: &polys, x_vars: &x_vars };
        let cfg = ResultantConfig { row_cap: 2, ..Default::default() };
        assert!(matches!(ce_matrix(&problem, &cfg), Err(Error::Unsupported(_))));
    }

    /// Independent classical oracle in dimension one: the resultant of a
    /// cubic against a symbolic linear polynomial equals the Sylvester
    /// determinant, up to the usual constant.
    #[test]
    fn univariate_matches_sylvester() {
        use crate::matrix::det_cofactor;
        use crate::rng::Rng;
        let field = FieldCtx::Q;
        let mut rng = Rng::new(31);
        for _ in 0..10 {
            let c: Vec<i64> = (0..4)
                .map(|i| {
                    let v = rng.below(9) as i64 - 4;
                    if v == 0 && (i == 0 || i == 3) {
                        1
                    } else {
                        v
                    }
                })
                .collect();
            let vars = ["x", "u0", "u1"];
            let f = poly_from_int_terms(
                &vars,
                field,
                &[
                    (c[0], &[0, 0, 0]),
                    (c[1], &[1, 0, 0]),
                    (c[2], &[2, 0, 0]),
                    (c[3], &[3, 0, 0]),
                ],
            );
            let g = poly_from_int_terms(&vars, field, &[(1, &[0, 1, 0]), (1, &[1, 0, 1])]);
            let supports = SupportTuple::new(vec![
                sup(1, &[&[0], &[1], &[2], &[3]]),
                sup(1, &[&[0], &[1]]),
            ])
            .unwrap();
            let x_vars: Vec<String> = vec!["x".into()];
            let polys = [f, g];
            let problem =
                ResultantProblem { supports: &supports, polys: &polys, x_vars: &x_vars };
            let res = toric_resultant(&problem, &ResultantConfig::default()).unwrap();
            // Sylvester matrix of (c3 x^3 + .. + c0, u1 x + u0)
            let tag: Vec<String> = vec!["u0".into(), "u1".into()];
            let cc = |v: i64| MultiPoly::constant(tag.clone(), field.from_i64(v));
            let u0 = MultiPoly::var(tag.clone(), "u0", field).unwrap();
            let u1 = MultiPoly::var(tag.clone(), "u1", field).unwrap();
            let z = || cc(0);
            let sylvester = vec![
                vec![cc(c[3]), cc(c[2]), cc(c[1]), cc(c[0])],
                vec![u1.clone(), u0.clone(), z(), z()],
                vec![z(), u1.clone(), u0.clone(), z()],
                vec![z(), z(), u1.clone(), u0.clone()],
            ];
            let oracle = det_cofactor(&sylvester).unwrap();
            let res_in_tag = res.poly.restrict_vars(&tag).unwrap();
            assert!(
                res_in_tag.proportional_to(&oracle),
                "coefficients {c:?}: {res_in_tag} vs {oracle}"
            );
        }
    }

    /// Two different seeds give the same normalized resultant.
    #[test]
    fn seed_independence() {
        let field = FieldCtx::Q;
        let square = sup(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let tri = sup(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        let supports = SupportTuple::new(vec![square.clone(), square, tri]).unwrap();
        let vars = ["x", "y", "u0", "u1", "u2"];
        let f1 = poly_from_int_terms(
            &vars,
            field,
            &[
                (1, &[0, 0, 0, 0, 0]),
                (2, &[1, 0, 0, 0, 0]),
                (3, &[0, 1, 0, 0, 0]),
                (4, &[1, 1, 0, 0, 0]),
            ],
        );
        let f2 = poly_from_int_terms(
            &vars,
            field,
            &[
                (5, &[0, 0, 0, 0, 0]),
                (1, &[1, 0, 0, 0, 0]),
                (2, &[0, 1, 0, 0, 0]),
                (7, &[1, 1, 0, 0, 0]),
            ],
        );
        let g = poly_from_int_terms(
            &vars,
            field,
            &[(1, &[0, 0, 1, 0, 0]), (1, &[1, 0, 0, 1, 0]), (1, &[0, 1, 0, 0, 1])],
        );
        let x_vars: Vec<String> = vec!["x".into(), "y".into()];
        let polys = [f1, f2, g];
        let problem =
            ResultantProblem { supports: &supports, polys: &polys, x_vars: &x_vars };
        let r1 = toric_resultant(&problem, &ResultantConfig::with_seed(0)).unwrap();
        let r2 = toric_resultant(&problem, &ResultantConfig::with_seed(12345)).unwrap();
        assert_eq!(r1.poly, r2.poly);
    }
}
