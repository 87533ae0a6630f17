//! Finite sets of lattice points and tuples of them.

use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type Point = Vec<i64>;

/// A finite (possibly empty) set of lattice points in Z^n, kept sorted and
/// deduplicated. Empty supports are legal values; operations that need
/// points say so.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Support {
    ambient: usize,
    points: Vec<Point>,
}

impl Support {
    pub fn new(ambient: usize, mut points: Vec<Point>) -> Result<Self> {
        for p in &points {
            if p.len() != ambient {
                return Err(Error::Precondition(format!(
                    "point of dimension {} in Z^{}",
                    p.len(),
                    ambient
                )));
            }
        }
        points.sort();
        points.dedup();
        Ok(Support { ambient, points })
    }

    pub fn empty(ambient: usize) -> Self {
        Support { ambient, points: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).is_ok()
    }

    pub fn is_subset_of(&self, other: &Support) -> bool {
        self.points.iter().all(|p| other.contains(p))
    }

    pub fn without_point(&self, p: &[i64]) -> Support {
        let points = self.points.iter().filter(|q| q.as_slice() != p).cloned().collect();
        Support { ambient: self.ambient, points }
    }

    /// Affine dimension: the rank of the differences from one base point.
    pub fn dim(&self) -> Result<usize> {
        if self.is_empty() {
            return Err(Error::Precondition("dimension of an empty support".into()));
        }
        let base = &self.points[0];
        let diffs: Vec<Vec<i64>> = self.points[1..]
            .iter()
            .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        Ok(integer_rank(&diffs))
    }

    /// The subset minimizing the inner product with `w` (the face of the
    /// configuration in inner-normal direction `w`). `w = 0` returns the
    /// whole set. Scaling `w` by a positive constant does not change the
    /// result, so integer vectors lose no generality over rational ones.
    pub fn face(&self, w: &[i64]) -> Support {
        if self.is_empty() {
            return self.clone();
        }
        let dot = |p: &Point| -> i128 {
            p.iter().zip(w).map(|(&a, &b)| a as i128 * b as i128).sum()
        };
        let min = self.points.iter().map(&dot).min().unwrap();
        let points = self.points.iter().filter(|p| dot(p) == min).cloned().collect();
        Support { ambient: self.ambient, points }
    }

    pub fn translate(&self, v: &[i64]) -> Support {
        let points = self
            .points
            .iter()
            .map(|p| p.iter().zip(v).map(|(a, b)| a + b).collect())
            .collect();
        Support { ambient: self.ambient, points }
    }

    /// Pointwise Minkowski sum of several supports (deduplicated, convex
    /// hull NOT taken). The sum with an empty support is empty.
    pub fn minkowski_sum(supports: &[&Support]) -> Result<Support> {
        let ambient = match supports.first() {
            Some(s) => s.ambient,
            None => return Err(Error::Precondition("sum of zero supports".into())),
        };
        for s in supports {
            if s.ambient != ambient {
                return Err(Error::Precondition("mismatched ambient dimensions".into()));
            }
        }
        if supports.iter().any(|s| s.is_empty()) {
            return Ok(Support::empty(ambient));
        }
        let mut acc: Vec<Point> = vec![vec![0; ambient]];
        for s in supports {
            let mut next = Vec::with_capacity(acc.len() * s.points.len());
            for a in &acc {
                for p in &s.points {
                    next.push(a.iter().zip(p).map(|(x, y)| x + y).collect());
                }
            }
            next.sort();
            next.dedup();
            acc = next;
        }
        Ok(Support { ambient, points: acc })
    }

    pub fn to_json(&self) -> Value {
        json!(self.points)
    }

    pub fn from_json(v: &Value, ambient: usize) -> Result<Support> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Precondition("support must be an array of points".into()))?;
        let mut points = Vec::with_capacity(arr.len());
        for p in arr {
            let coords: Vec<i64> = p
                .as_array()
                .ok_or_else(|| Error::Precondition("point must be an array".into()))?
                .iter()
                .map(|x| {
                    x.as_i64()
                        .ok_or_else(|| Error::Precondition("coordinates must be integers".into()))
                })
                .collect::<Result<_>>()?;
            points.push(coords);
        }
        Support::new(ambient, points)
    }
}

/// An ordered tuple of supports sharing one ambient dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportTuple {
    entries: Vec<Support>,
    ambient: usize,
}

impl SupportTuple {
    pub fn new(entries: Vec<Support>) -> Result<Self> {
        let ambient = match entries.first() {
            Some(s) => s.ambient_dim(),
            None => return Err(Error::Precondition("empty support tuple".into())),
        };
        for s in &entries {
            if s.ambient_dim() != ambient {
                return Err(Error::Precondition("mismatched ambient dimensions".into()));
            }
        }
        Ok(SupportTuple { entries, ambient })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Support] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &Support {
        &self.entries[i]
    }

    /// Indices (0-based) of the nonempty entries.
    pub fn support_indices(&self) -> Vec<usize> {
        (0..self.entries.len()).filter(|&i| !self.entries[i].is_empty()).collect()
    }

    /// The tuple of faces (entrywise) in direction `w`.
    pub fn face(&self, w: &[i64]) -> SupportTuple {
        SupportTuple {
            entries: self.entries.iter().map(|s| s.face(w)).collect(),
            ambient: self.ambient,
        }
    }

    /// Entrywise intersection with another tuple of equal length.
    pub fn intersect(&self, other: &SupportTuple) -> Result<SupportTuple> {
        if self.len() != other.len() || self.ambient != other.ambient {
            return Err(Error::Precondition("tuple shape mismatch".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| {
                let pts = a.points().iter().filter(|p| b.contains(p)).cloned().collect();
                Support { ambient: self.ambient, points: pts }
            })
            .collect();
        Ok(SupportTuple { entries, ambient: self.ambient })
    }

    /// Pointwise Minkowski sum of a subset of entries.
    pub fn sum_of(&self, indices: &[usize]) -> Result<Support> {
        let refs: Vec<&Support> = indices.iter().map(|&i| &self.entries[i]).collect();
        Support::minkowski_sum(&refs)
    }

    /// Pointwise Minkowski sum of all entries.
    pub fn sum_all(&self) -> Result<Support> {
        let refs: Vec<&Support> = self.entries.iter().collect();
        Support::minkowski_sum(&refs)
    }
}

/// Rank of a set of integer vectors, by fraction-free elimination in i128.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<i128>> =
        rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let pivot = (row..m.len()).find(|&r| m[r][col] != 0);
        let pivot = match pivot {
            Some(p) => p,
            None => continue,
        };
        m.swap(row, pivot);
        for r in row + 1..m.len() {
            if m[r][col] == 0 {
                continue;
            }
            let (a, b) = (m[row][col], m[r][col]);
            let g = gcd_i128(a, b);
            let (fa, fb) = (a / g, b / g);
            for c in col..cols {
                m[r][c] = m[r][c] * fa - m[row][c] * fb;
            }
        }
        rank += 1;
        row += 1;
        if row == m.len() {
            break;
        }
    }
    rank
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    if a == 0 {
        1
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sup(n: usize, pts: &[&[i64]]) -> Support {
        Support::new(n, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn dim_examples() {
        assert_eq!(sup(2, &[&[0, 0]]).dim().unwrap(), 0);
        assert_eq!(sup(2, &[&[0, 0], &[1, 1], &[2, 2]]).dim().unwrap(), 1);
        // vertex set {0,1}^3
        let cube: Vec<Vec<i64>> = (0..8)
            .map(|k| vec![(k & 1) as i64, ((k >> 1) & 1) as i64, ((k >> 2) & 1) as i64])
            .collect();
        assert_eq!(Support::new(3, cube).unwrap().dim().unwrap(), 3);
        assert!(Support::empty(2).dim().is_err());
    }

    #[test]
    fn face_examples() {
        let s = sup(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(s.face(&[0, -1]), sup(2, &[&[0, 1]]));
        // both endpoints minimal along an edge normal
        let e = sup(2, &[&[0, 0], &[2, 3]]);
        assert_eq!(e.face(&[3, -2]), e);
        let square = sup(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(square.face(&[1, 1]), sup(2, &[&[0, 0]]));
        assert_eq!(square.face(&[0, 0]), square);
    }

    #[test]
    fn minkowski_sums() {
        let a = sup(2, &[&[1, 2]]);
        let b = sup(2, &[&[3, 4]]);
        assert_eq!(Support::minkowski_sum(&[&a, &b]).unwrap(), sup(2, &[&[4, 6]]));
        // two non-parallel segments form a parallelogram
        let s1 = sup(2, &[&[0, 0], &[1, 0]]);
        let s2 = sup(2, &[&[0, 0], &[0, 1]]);
        let sum = Support::minkowski_sum(&[&s1, &s2]).unwrap();
        assert_eq!(sum, sup(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]));
        // empty absorbs
        let e = Support::empty(2);
        assert!(Support::minkowski_sum(&[&s1, &e]).unwrap().is_empty());
    }

    #[test]
    fn json_round_trip() {
        let s = sup(2, &[&[0, 0], &[3, 1]]);
        let j = s.to_json();
        assert_eq!(Support::from_json(&j, 2).unwrap(), s);
    }
}
