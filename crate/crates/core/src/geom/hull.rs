//! Exact convex-hull primitives in low ambient dimension: volumes via a
//! placing triangulation, facet enumeration by supporting-hyperplane search,
//! and one inner-normal representative per proper face of a polytope.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::geom::support::{gcd_i128, integer_rank, Point, Support};

/// Hull and fan enumeration is promised (and capped) for ambient dimension
/// at most 4; higher-dimensional sublattice work is out of scope.
pub const MAX_HULL_DIM: usize = 4;

fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            let mut acc = 0i128;
            for j in 0..n {
                if m[0][j] == 0 {
                    continue;
                }
                let minor: Vec<Vec<i128>> = (1..n)
                    .map(|i| (0..n).filter(|&c| c != j).map(|c| m[i][c]).collect())
                    .collect();
                let term = m[0][j] * det_i128(&minor);
                acc += if j % 2 == 0 { term } else { -term };
            }
            acc
        }
    }
}

fn simplex_det(points: &[&Point]) -> i128 {
    let base = points[0];
    let m: Vec<Vec<i128>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(&a, &b)| (a - b) as i128).collect())
        .collect();
    det_i128(&m)
}

/// n! times the Euclidean volume of the convex hull, as an exact integer.
/// Works in any ambient dimension; the public volume cap is enforced by the
/// callers that promise it.
pub fn normalized_volume(points: &[Point], n: usize) -> Result<i128> {
    if points.is_empty() {
        return Err(Error::Precondition("volume of an empty set".into()));
    }
    let simplices = placing_triangulation(points, n);
    let mut acc: i128 = 0;
    for s in &simplices {
        let refs: Vec<&Point> = s.iter().map(|&i| &points[i]).collect();
        acc += simplex_det(&refs).abs();
    }
    Ok(acc)
}

/// Incremental (beneath-beyond) triangulation of the convex hull. Returns
/// index (n+1)-tuples of full-dimensional simplices; empty when the point
/// set is not full-dimensional.
fn placing_triangulation(points: &[Point], n: usize) -> Vec<Vec<usize>> {
    // Greedy affinely independent start.
    let mut start: Vec<usize> = Vec::new();
    for (i, _) in points.iter().enumerate() {
        let mut cand = start.clone();
        cand.push(i);
        let base = &points[cand[0]];
        let diffs: Vec<Vec<i64>> = cand[1..]
            .iter()
            .map(|&j| points[j].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        if integer_rank(&diffs) == cand.len() - 1 {
            start = cand;
        }
        if start.len() == n + 1 {
            break;
        }
    }
    if start.len() < n + 1 {
        return Vec::new();
    }
    let mut simplices: Vec<Vec<usize>> = vec![start.clone()];
    for (i, p) in points.iter().enumerate() {
        if start.contains(&i) {
            continue;
        }
        // Boundary facets: (n)-subsets appearing in exactly one simplex.
        let mut facet_count: Vec<(Vec<usize>, usize, usize)> = Vec::new();
        for (si, s) in simplices.iter().enumerate() {
            for drop in 0..s.len() {
                let mut f: Vec<usize> = s.iter().copied().filter(|&v| v != s[drop]).collect();
                f.sort_unstable();
                match facet_count.iter_mut().find(|(g, _, _)| *g == f) {
                    Some((_, cnt, _)) => *cnt += 1,
                    None => facet_count.push((f, 1, si * (n + 1) + drop)),
                }
            }
        }
        let mut new_simplices = Vec::new();
        for (f, cnt, tag) in &facet_count {
            if *cnt != 1 {
                continue;
            }
            let (si, drop) = (tag / (n + 1), tag % (n + 1));
            let opposite = simplices[si][drop];
            let mut with_p: Vec<&Point> = f.iter().map(|&v| &points[v]).collect();
            with_p.push(p);
            let sign_p = simplex_det(&with_p).signum();
            if sign_p == 0 {
                continue;
            }
            let mut with_o: Vec<&Point> = f.iter().map(|&v| &points[v]).collect();
            with_o.push(&points[opposite]);
            let sign_o = simplex_det(&with_o).signum();
            if sign_p == -sign_o {
                let mut s = f.clone();
                s.push(i);
                new_simplices.push(s);
            }
        }
        simplices.extend(new_simplices);
    }
    simplices
}

/// Euclidean volume of the convex hull as an exact rational (0 when the
/// configuration is lower-dimensional). Capped at ambient dimension 4.
pub fn volume(s: &Support) -> Result<BigRational> {
    let n = s.ambient_dim();
    if n > MAX_HULL_DIM {
        return Err(Error::Unsupported(format!("ambient dimension {n} > {MAX_HULL_DIM}")));
    }
    if s.is_empty() {
        return Err(Error::Precondition("volume of an empty support".into()));
    }
    let nv = normalized_volume(s.points(), n)?;
    let mut fact: i128 = 1;
    for k in 2..=n as i128 {
        fact *= k;
    }
    Ok(BigRational::new(BigInt::from(nv), BigInt::from(fact)))
}

/// A facet of the convex hull: primitive inner normal, its minimum value,
/// and the input points lying on the facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub min_value: i128,
    pub points: Vec<Point>,
}

fn dot(w: &[i64], p: &[i64]) -> i128 {
    w.iter().zip(p).map(|(&a, &b)| a as i128 * b as i128).sum()
}

fn primitive(mut v: Vec<i128>) -> Result<Vec<i64>> {
    let mut g: i128 = 0;
    for &x in &v {
        g = gcd_i128(g, x);
        if g == 1 {
            break;
        }
    }
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
    v.into_iter()
        .map(|x| i64::try_from(x).map_err(|_| Error::Unsupported("facet normal overflow".into())))
        .collect()
}

/// Drop points that are the midpoint of two other points of the set; such
/// points are never hull vertices, which shrinks the facet search space.
fn midpoint_filter(points: &[Point]) -> Vec<Point> {
    let mut current: Vec<Point> = points.to_vec();
    current.sort();
    for _ in 0..2 {
        let keep: Vec<Point> = current
            .iter()
            .filter(|p| {
                !current.iter().any(|q| {
                    if q == *p {
                        return false;
                    }
                    // r = 2p - q must be a distinct member of the set
                    let r: Point = p.iter().zip(q.iter()).map(|(&a, &b)| 2 * a - b).collect();
                    r != **q && current.binary_search(&r).is_ok()
                })
            })
            .cloned()
            .collect();
        if keep.len() == current.len() {
            break;
        }
        current = keep;
    }
    current
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > m {
        return out;
    }
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] + (k - i) < m {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All facets of the convex hull of a full-dimensional point set, by
/// exhaustive supporting-hyperplane search over the hull-candidate points.
pub fn hull_facets(points: &[Point], n: usize) -> Result<Vec<Facet>> {
    if n > MAX_HULL_DIM {
        return Err(Error::Unsupported(format!("ambient dimension {n} > {MAX_HULL_DIM}")));
    }
    if points.is_empty() {
        return Err(Error::Precondition("facets of an empty set".into()));
    }
    if n == 1 {
        let lo = points.iter().map(|p| p[0]).min().unwrap();
        let hi = points.iter().map(|p| p[0]).max().unwrap();
        if lo == hi {
            return Err(Error::Precondition("degenerate (0-dimensional) polytope".into()));
        }
        return Ok(vec![
            Facet { normal: vec![1], min_value: lo as i128, points: vec![vec![lo]] },
            Facet { normal: vec![-1], min_value: -(hi as i128), points: vec![vec![hi]] },
        ]);
    }
    let cloud = midpoint_filter(points);
    let mut facets: Vec<Facet> = Vec::new();
    for combo in combinations(cloud.len(), n) {
        let base = &cloud[combo[0]];
        let diffs: Vec<Vec<i128>> = combo[1..]
            .iter()
            .map(|&j| cloud[j].iter().zip(base).map(|(&a, &b)| (a - b) as i128).collect())
            .collect();
        // Generalized cross product: cofactors of the difference matrix.
        let mut normal: Vec<i128> = Vec::with_capacity(n);
        for j in 0..n {
            let minor: Vec<Vec<i128>> = diffs
                .iter()
                .map(|r| (0..n).filter(|&c| c != j).map(|c| r[c]).collect())
                .collect();
            let d = det_i128(&minor);
            normal.push(if j % 2 == 0 { d } else { -d });
        }
        if normal.iter().all(|&x| x == 0) {
            continue; // subset not spanning a hyperplane
        }
        let mut w = primitive(normal)?;
        let v0 = dot(&w, base);
        let mut min = v0;
        let mut max = v0;
        for p in &cloud {
            let d = dot(&w, p);
            min = min.min(d);
            max = max.max(d);
        }
        if v0 == min && v0 < max {
            // inner normal already
        } else if v0 == max && v0 > min {
            for x in w.iter_mut() {
                *x = -*x;
            }
        } else {
            continue; // points on both sides: not a facet
        }
        let value = points.iter().map(|p| dot(&w, p)).min().unwrap();
        if facets.iter().any(|f| f.normal == w) {
            continue;
        }
        let face_points: Vec<Point> =
            points.iter().filter(|p| dot(&w, p) == value).cloned().collect();
        facets.push(Facet { normal: w, min_value: value, points: face_points });
    }
    facets.sort_by(|a, b| a.normal.cmp(&b.normal));
    Ok(facets)
}

/// Exactly one integer inner normal in the relative interior of the normal
/// cone of every proper nonzero face (facets down to vertices) of the
/// convex hull of the summed configuration.
pub fn proper_face_normals(points: &[Point], n: usize) -> Result<Vec<Vec<i64>>> {
    if n > MAX_HULL_DIM {
        return Err(Error::Unsupported(format!("ambient dimension {n} > {MAX_HULL_DIM}")));
    }
    let sup = Support::new(n, points.to_vec())?;
    if sup.dim()? < n {
        return Err(Error::Precondition(
            "degenerate sum polytope: not full-dimensional".into(),
        ));
    }
    let cloud = midpoint_filter(points);
    let facets = hull_facets(&cloud, n)?;
    // Face lattice by closing the facet point sets under intersection.
    let mut faces: Vec<Vec<Point>> = facets.iter().map(|f| f.points.clone()).collect();
    for f in faces.iter_mut() {
        f.sort();
    }
    let mut i = 0;
    while i < faces.len() {
        for fac in &facets {
            let inter: Vec<Point> =
                faces[i].iter().filter(|p| fac.points.contains(p)).cloned().collect();
            if inter.is_empty() || faces.contains(&inter) {
                continue;
            }
            faces.push(inter);
        }
        i += 1;
    }
    let mut reps: Vec<Vec<i64>> = Vec::with_capacity(faces.len());
    for face in &faces {
        // Sum of the normals of all facets containing the face lies in the
        // relative interior of its normal cone.
        let mut w = vec![0i64; n];
        for fac in &facets {
            if face.iter().all(|p| fac.points.contains(p)) {
                for (a, b) in w.iter_mut().zip(&fac.normal) {
                    *a += b;
                }
            }
        }
        debug_assert_eq!(
            Support::new(n, cloud.clone())?.face(&w).points(),
            face.as_slice()
        );
        reps.push(w);
    }
    reps.sort();
    reps.dedup();
    Ok(reps)
}

/// Face representatives for a tuple of supports: one inner normal per
/// proper face of the convex hull of their Minkowski sum.
pub fn normal_face_reps(supports: &[&Support]) -> Result<Vec<Vec<i64>>> {
    let sum = Support::minkowski_sum(supports)?;
    if sum.is_empty() {
        return Err(Error::Precondition("empty Minkowski sum".into()));
    }
    proper_face_normals(sum.points(), sum.ambient_dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn pts(raw: &[&[i64]]) -> Vec<Point> {
        raw.iter().map(|p| p.to_vec()).collect()
    }

    #[test]
    fn unit_cube_volume() {
        let cube: Vec<Point> = (0..8)
            .map(|k| vec![(k & 1) as i64, ((k >> 1) & 1) as i64, ((k >> 2) & 1) as i64])
            .collect();
        let s = Support::new(3, cube).unwrap();
        assert_eq!(volume(&s).unwrap(), BigRational::from_integer(1.into()));
    }

    #[test]
    fn standard_simplex_volume() {
        for n in 1..=4usize {
            let mut p: Vec<Point> = vec![vec![0; n]];
            for i in 0..n {
                let mut e = vec![0; n];
                e[i] = 1;
                p.push(e);
            }
            let s = Support::new(n, p).unwrap();
            let v = volume(&s).unwrap();
            let mut fact = 1i64;
            for k in 2..=n as i64 {
                fact *= k;
            }
            assert_eq!(v, BigRational::new(1.into(), fact.into()));
        }
    }

    #[test]
    fn shoelace_cross_check_2d() {
        // Quadrilateral (0,0),(2,0),(3,1),(1,1): shoelace area 2.
        let s = Support::new(
            2,
            pts(&[&[0, 0], &[1, 0], &[2, 1], &[1, 1], &[2, 0], &[3, 1]]),
        )
        .unwrap();
        let v = volume(&s).unwrap();
        // independent oracle: shoelace over the hull boundary walked by angle
        let hull = [[0i64, 0], [2, 0], [3, 1], [1, 1]];
        let mut two_a = 0i64;
        for i in 0..hull.len() {
            let [x1, y1] = hull[i];
            let [x2, y2] = hull[(i + 1) % hull.len()];
            two_a += x1 * y2 - x2 * y1;
        }
        assert_eq!(v.to_f64().unwrap(), (two_a.abs() as f64) / 2.0);
        assert_eq!(v, BigRational::from_integer(2.into()));
    }

    #[test]
    fn volume_of_flat_configuration_is_zero() {
        let s = Support::new(2, pts(&[&[0, 0], &[1, 1], &[3, 3]])).unwrap();
        assert_eq!(volume(&s).unwrap(), BigRational::from_integer(0.into()));
    }

    #[test]
    fn square_facets_and_face_reps() {
        let sq = pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let facets = hull_facets(&sq, 2).unwrap();
        assert_eq!(facets.len(), 4);
        let reps = proper_face_normals(&sq, 2).unwrap();
        // 4 facets + 4 vertices
        assert_eq!(reps.len(), 8);
    }

    #[test]
    fn triangle_face_reps() {
        let tri = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        let reps = proper_face_normals(&tri, 2).unwrap();
        assert_eq!(reps.len(), 6);
    }

    /// Independent oracle: 2D convex hull by monotone chain, exact integer
    /// arithmetic.
    fn monotone_chain_hull(points: &[Point]) -> Vec<Point> {
        let mut pts: Vec<Point> = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.len() < 3 {
            return pts;
        }
        let cross = |o: &Point, a: &Point, b: &Point| -> i64 {
            (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
        };
        let mut lower: Vec<Point> = Vec::new();
        for p in &pts {
            while lower.len() >= 2
                && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0
            {
                lower.pop();
            }
            lower.push(p.clone());
        }
        let mut upper: Vec<Point> = Vec::new();
        for p in pts.iter().rev() {
            while upper.len() >= 2
                && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0
            {
                upper.pop();
            }
            upper.push(p.clone());
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        lower
    }

    #[test]
    fn summed_demo_supports_match_hull_oracle() {
        // Pointwise sum of the two demo supports and the standard triangle:
        // its hull vertices agree with the monotone-chain oracle.
        let demo = pts(&[&[0, 0], &[1, 0], &[2, 1], &[1, 1], &[2, 0], &[3, 1]]);
        let tri = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        let a = Support::new(2, demo.clone()).unwrap();
        let t = Support::new(2, tri).unwrap();
        let cloud = Support::minkowski_sum(&[&a, &a, &t]).unwrap();
        let oracle: Vec<Point> = {
            let mut h = monotone_chain_hull(cloud.points());
            h.sort();
            h
        };
        // vertices from the facet machinery: singleton faces
        let mut vertices: Vec<Point> = Vec::new();
        for w in proper_face_normals(cloud.points(), 2).unwrap() {
            let face = cloud.face(&w);
            if face.len() == 1 {
                vertices.push(face.points()[0].clone());
            }
        }
        vertices.sort();
        vertices.dedup();
        assert_eq!(vertices, oracle);
    }

    #[test]
    fn degenerate_sum_errors() {
        let seg = pts(&[&[0, 0], &[1, 0]]);
        assert!(proper_face_normals(&seg, 2).is_err());
    }

    #[test]
    fn face_reps_of_summed_supports() {
        let a = Support::new(2, pts(&[&[0, 0], &[1, 0]])).unwrap();
        let b = Support::new(2, pts(&[&[0, 0], &[0, 1]])).unwrap();
        // sum is the unit square: 8 proper faces
        assert_eq!(normal_face_reps(&[&a, &b]).unwrap().len(), 8);
        // a segment alone is degenerate
        assert!(normal_face_reps(&[&a]).is_err());
    }

    #[test]
    fn cube_face_reps() {
        let cube: Vec<Point> = (0..8)
            .map(|k| vec![(k & 1) as i64, ((k >> 1) & 1) as i64, ((k >> 2) & 1) as i64])
            .collect();
        let reps = proper_face_normals(&cube, 3).unwrap();
        // 6 facets + 12 edges + 8 vertices
        assert_eq!(reps.len(), 26);
    }
}
