//! Coherent fine mixed subdivisions induced by random integer liftings, and
//! the mixed volume they compute.
//!
//! A candidate cell is a choice, for every tuple entry, of an affinely
//! independent point subset; the candidate is a cell of the lifted
//! subdivision iff the (unique) linear form agreeing with the liftings on
//! those subsets lies strictly below every other lifted point. Cells are
//! verified exactly in integer arithmetic, and the subdivision is accepted
//! only when its cells tile the whole Minkowski sum (volumes add up),
//! retrying with fresh liftings otherwise.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geom::hull::normalized_volume;
use crate::geom::support::{Point, Support, SupportTuple};
use crate::par;
use crate::rng::Rng;

/// Integer liftings are drawn uniformly from [0, 2^16).
const LIFT_BOUND: u64 = 1 << 16;
/// Default number of fresh-lifting attempts before giving up.
pub const DEFAULT_LIFT_RETRIES: u32 = 16;

#[derive(Clone, Debug)]
pub struct MixedCell {
    /// One sub-support per tuple entry; their Minkowski sum is the cell.
    pub summands: Vec<Support>,
    /// The cell itself (pointwise sum of the summands).
    pub cell: Support,
    /// Dimensions of the summands; they add up to the ambient dimension.
    pub cell_type: Vec<usize>,
    /// Normalized volume (n! times Euclidean volume), a positive integer.
    pub volume: i128,
}

impl MixedCell {
    /// A cell of type (1,1,...,1) over the first `n` entries contributes to
    /// the mixed volume of an n-tuple.
    pub fn is_fully_mixed(&self) -> bool {
        self.cell_type.iter().all(|&d| d == 1)
    }
}

#[derive(Clone, Debug)]
pub struct MixedSubdivision {
    pub cells: Vec<MixedCell>,
    /// Lifting values, aligned with each entry's point order.
    pub liftings: Vec<Vec<i64>>,
    pub tuple: SupportTuple,
}

impl MixedSubdivision {
    pub fn total_volume(&self) -> i128 {
        self.cells.iter().map(|c| c.volume).sum()
    }

    /// Mixed-volume contribution of the type-(1,...,1) cells. Each such
    /// cell is a parallelepiped of edge vectors, whose lattice volume is
    /// its normalized volume divided by n!.
    pub fn mixed_cell_volume(&self) -> i128 {
        let n = self.tuple.ambient_dim();
        let mut fact: i128 = 1;
        for k in 2..=n as i128 {
            fact *= k;
        }
        let total: i128 = self.cells.iter().filter(|c| c.is_fully_mixed()).map(|c| c.volume).sum();
        debug_assert_eq!(total % fact, 0);
        total / fact
    }
}

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

/// All ways to write `total` as an ordered sum of `parts` nonnegative
/// integers bounded entrywise by `caps`.
fn compositions(total: usize, caps: &[usize]) -> Vec<Vec<usize>> {
    fn rec(total: usize, caps: &[usize], acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if caps.len() == 1 {
            if total <= caps[0] {
                let mut v = acc.clone();
                v.push(total);
                out.push(v);
            }
            return;
        }
        for d in 0..=total.min(caps[0]) {
            acc.push(d);
            rec(total - d, &caps[1..], acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if !caps.is_empty() {
        rec(total, caps, &mut Vec::new(), &mut out);
    }
    out
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k > m {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
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

/// Outcome of testing one candidate: not a cell, a verified cell, or a tie
/// (some lifted point lies exactly on the supporting hyperplane), which
/// makes the lifting unusable for a fine subdivision.
enum Candidate {
    No,
    Cell(MixedCell),
    Tie,
}

/// Check whether the chosen subsets support a lower face of the lifted sum,
/// i.e. some w agrees with the liftings on every chosen subset and is
/// strictly smaller everywhere else.
fn test_candidate(
    tuple: &SupportTuple,
    liftings: &[Vec<i64>],
    subsets: &[Vec<usize>],
) -> Result<Candidate> {
    let n = tuple.ambient_dim();
    // Equations <w, b_j - b_0> = -(lift(b_j) - lift(b_0)), stacked.
    let mut rows: Vec<Vec<i128>> = Vec::with_capacity(n);
    let mut rhs: Vec<i128> = Vec::with_capacity(n);
    for (i, subset) in subsets.iter().enumerate() {
        let pts = tuple.entry(i).points();
        let b0 = &pts[subset[0]];
        let l0 = liftings[i][subset[0]];
        for &j in &subset[1..] {
            rows.push(pts[j].iter().zip(b0).map(|(&a, &b)| (a - b) as i128).collect());
            rhs.push(-((liftings[i][j] - l0) as i128));
        }
    }
    debug_assert_eq!(rows.len(), n);
    let d = det_i128(&rows);
    if d == 0 {
        return Ok(Candidate::No); // jointly dependent: cannot be a cell
    }
    // Cramer solution w = v / d.
    let mut v: Vec<i128> = Vec::with_capacity(n);
    for j in 0..n {
        let mut m = rows.clone();
        for (r, row) in m.iter_mut().enumerate() {
            row[j] = rhs[r];
        }
        v.push(det_i128(&m));
    }
    let (v, d) = if d < 0 { (v.into_iter().map(|x| -x).collect::<Vec<_>>(), -d) } else { (v, d) };
    // Strict minimality of <（w,1), (p, lift(p))> on every chosen subset.
    for (i, subset) in subsets.iter().enumerate() {
        let pts = tuple.entry(i).points();
        let b0 = &pts[subset[0]];
        let l0 = liftings[i][subset[0]] as i128;
        for (j, p) in pts.iter().enumerate() {
            if subset.contains(&j) {
                continue;
            }
            let lhs: i128 = p
                .iter()
                .zip(b0)
                .zip(&v)
                .map(|((&a, &b), &vk)| (a - b) as i128 * vk)
                .sum::<i128>()
                + d * (liftings[i][j] as i128 - l0);
            if lhs < 0 {
                return Ok(Candidate::No);
            }
            if lhs == 0 {
                return Ok(Candidate::Tie);
            }
        }
    }
    // Verified cell: assemble summands and volume.
    let mut summands = Vec::with_capacity(subsets.len());
    for (i, subset) in subsets.iter().enumerate() {
        let pts = tuple.entry(i).points();
        let chosen: Vec<Point> = subset.iter().map(|&j| pts[j].clone()).collect();
        summands.push(Support::new(n, chosen)?);
    }
    let refs: Vec<&Support> = summands.iter().collect();
    let cell = Support::minkowski_sum(&refs)?;
    let volume = normalized_volume(cell.points(), n)?;
    let cell_type: Vec<usize> = subsets.iter().map(|s| s.len() - 1).collect();
    Ok(Candidate::Cell(MixedCell { summands, cell, cell_type, volume }))
}

fn try_liftings(tuple: &SupportTuple, liftings: &[Vec<i64>]) -> Result<Option<MixedSubdivision>> {
    let n = tuple.ambient_dim();
    let k = tuple.len();
    let caps: Vec<usize> = (0..k)
        .map(|i| {
            let s = tuple.entry(i);
            s.dim().unwrap_or(0).min(n)
        })
        .collect();
    // Candidate = one point subset per entry, sizes d_i + 1 with sum(d) = n.
    let mut candidates: Vec<Vec<Vec<usize>>> = Vec::new();
    for ty in compositions(n, &caps) {
        let per_entry: Vec<Vec<Vec<usize>>> =
            (0..k).map(|i| combinations(tuple.entry(i).len(), ty[i] + 1)).collect();
        let mut stack: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
        for choices in &per_entry {
            let mut next = Vec::with_capacity(stack.len() * choices.len());
            for partial in &stack {
                for c in choices {
                    let mut v = partial.clone();
                    v.push(c.clone());
                    next.push(v);
                }
            }
            stack = next;
        }
        candidates.extend(stack);
    }

    let results = par::map_slice(&candidates, |subsets| test_candidate(tuple, liftings, subsets));
    let mut cells = Vec::new();
    for r in results {
        match r? {
            Candidate::No => {}
            Candidate::Tie => return Ok(None),
            Candidate::Cell(c) => cells.push(c),
        }
    }
    // The cells must tile the Minkowski sum exactly.
    let total: i128 = cells.iter().map(|c| c.volume).sum();
    let hull_total = normalized_volume(tuple.sum_all()?.points(), n)?;
    if total != hull_total {
        return Ok(None);
    }
    Ok(Some(MixedSubdivision {
        cells,
        liftings: liftings.to_vec(),
        tuple: tuple.clone(),
    }))
}

/// A fine coherent mixed subdivision from seeded pseudo-random liftings,
/// retrying with fresh liftings until all cells are fine.
pub fn mixed_subdivision(tuple: &SupportTuple, seed: u64) -> Result<MixedSubdivision> {
    mixed_subdivision_with_retries(tuple, seed, DEFAULT_LIFT_RETRIES)
}

pub fn mixed_subdivision_with_retries(
    tuple: &SupportTuple,
    seed: u64,
    retries: u32,
) -> Result<MixedSubdivision> {
    let n = tuple.ambient_dim();
    for s in tuple.entries() {
        if s.is_empty() {
            return Err(Error::Precondition("empty support in tuple".into()));
        }
    }
    let sum = tuple.sum_all()?;
    if sum.dim()? < n {
        return Err(Error::Precondition(
            "sum polytope is not full-dimensional".into(),
        ));
    }
    let mut last_seed = seed;
    for attempt in 0..retries {
        let mut rng = Rng::derive(seed, "lifting", attempt as u64);
        let liftings: Vec<Vec<i64>> = tuple
            .entries()
            .iter()
            .map(|s| (0..s.len()).map(|_| rng.below(LIFT_BOUND) as i64).collect())
            .collect();
        last_seed = rng.state();
        if let Some(sub) = try_liftings(tuple, &liftings)? {
            return Ok(sub);
        }
    }
    Err(Error::RetriesExhausted { stage: "degenerate liftings", last_seed })
}

/// Normalized mixed volume of an n-tuple in dimension n, via the fully
/// mixed cells of a fine coherent subdivision (unit simplex tuple gives 1).
pub fn mixed_volume(tuple: &SupportTuple) -> Result<BigInt> {
    mixed_volume_seeded(tuple, 0)
}

pub fn mixed_volume_seeded(tuple: &SupportTuple, seed: u64) -> Result<BigInt> {
    let n = tuple.ambient_dim();
    if tuple.len() != n {
        return Err(Error::Precondition(format!(
            "mixed volume needs an n-tuple in dimension n (got {} supports in Z^{})",
            tuple.len(),
            n
        )));
    }
    for s in tuple.entries() {
        if s.is_empty() {
            return Err(Error::Precondition("empty support in tuple".into()));
        }
    }
    let sum = tuple.sum_all()?;
    if sum.dim()? < n {
        return Ok(BigInt::zero()); // all cells would be lower-dimensional
    }
    let sub = mixed_subdivision_seedable(tuple, seed)?;
    Ok(BigInt::from(sub.mixed_cell_volume()))
}

fn mixed_subdivision_seedable(tuple: &SupportTuple, seed: u64) -> Result<MixedSubdivision> {
    mixed_subdivision_with_retries(tuple, seed, DEFAULT_LIFT_RETRIES)
}

/// Independent route to the mixed volume: the alternating sum of Euclidean
/// volumes of the subset Minkowski sums,
/// sum over nonempty S of (-1)^(n-|S|) vol(sum of hulls in S).
pub fn mixed_volume_inclusion_exclusion(tuple: &SupportTuple) -> Result<BigInt> {
    let n = tuple.ambient_dim();
    if tuple.len() != n {
        return Err(Error::Precondition("mixed volume needs an n-tuple".into()));
    }
    for s in tuple.entries() {
        if s.is_empty() {
            return Err(Error::Precondition("empty support in tuple".into()));
        }
    }
    let mut acc = num_rational::BigRational::zero();
    for mask in 1u32..(1 << n) {
        let indices: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sum = tuple.sum_of(&indices)?;
        let v = crate::geom::hull::volume(&sum)?;
        if (n - indices.len()) % 2 == 0 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    if !acc.denom().eq(&BigInt::from(1)) {
        return Err(Error::Precondition("inclusion-exclusion did not produce an integer".into()));
    }
    Ok(acc.numer().clone())
}
