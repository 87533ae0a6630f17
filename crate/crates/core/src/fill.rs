//! Essential subsets, the face criterion for fills, and greedy
//! irreducible-fill search.
//!
//! A sub-tuple D of E (entrywise) fills E when both have the same mixed
//! volume; the criterion checked here replaces the mixed-volume comparison
//! by finitely many face conditions: for one inner normal w per proper face
//! of the summed polytope, the indices where D meets the face tuple E^w
//! must contain a subset essential for E^w.

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geom::hull::proper_face_normals;
use crate::geom::subdivision::mixed_volume;
use crate::geom::support::SupportTuple;
use crate::par;

/// A nonempty index set J (0-based) is essential for the tuple C iff
/// every C_j with j in J is nonempty, the points indexed by J sum to a
/// configuration of dimension |J| - 1, and every nonempty proper subset J'
/// sums to dimension at least |J'|.
pub fn is_essential(tuple: &SupportTuple, j_set: &[usize]) -> Result<bool> {
    let k = tuple.len();
    if j_set.is_empty() {
        return Err(Error::Precondition("essential subsets are nonempty".into()));
    }
    let mut j: Vec<usize> = j_set.to_vec();
    j.sort_unstable();
    j.dedup();
    if j.len() != j_set.len() || j.iter().any(|&i| i >= k) {
        return Err(Error::Precondition("index set not inside [n]".into()));
    }
    // (0) all entries indexed by J are nonempty
    if j.iter().any(|&i| tuple.entry(i).is_empty()) {
        return Ok(false);
    }
    // (1) dim of the sum over J is exactly |J| - 1
    let sum = tuple.sum_of(&j)?;
    if sum.dim()? != j.len() - 1 {
        return Ok(false);
    }
    // (2) every nonempty proper subset has dimension >= its size
    let m = j.len();
    for mask in 1u32..(1 << m) - 1 {
        let sub: Vec<usize> =
            (0..m).filter(|&b| mask & (1 << b) != 0).map(|b| j[b]).collect();
        let d = tuple.sum_of(&sub)?.dim()?;
        if d < sub.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All essential subsets, by exhaustive enumeration over nonempty index
/// sets, in increasing size then lexicographic order.
pub fn essential_subsets(tuple: &SupportTuple) -> Result<Vec<Vec<usize>>> {
    let k = tuple.len();
    if k > 16 {
        return Err(Error::Unsupported("tuple too long for subset enumeration".into()));
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << k) {
        let j: Vec<usize> = (0..k).filter(|&b| mask & (1 << b) != 0).collect();
        if is_essential(tuple, &j)? {
            out.push(j);
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    Ok(out)
}

/// Witness that a face condition of the criterion holds: the essential
/// subset found for the face in direction `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceWitness {
    pub w: Vec<i64>,
    pub essential: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct FillCertificate {
    pub d: SupportTuple,
    pub e: SupportTuple,
    pub mixed_volume: BigInt,
    pub witnesses: Vec<FaceWitness>,
    pub irreducible: bool,
}

#[derive(Clone, Debug)]
pub enum FillOutcome {
    Fills(Vec<FaceWitness>),
    Refuted { failing_w: Vec<i64> },
}

/// Precomputed face data of E, reused across many candidate sub-tuples D
/// (the greedy search re-checks the criterion after every removal).
pub struct FillCriterion {
    e: SupportTuple,
    pub mixed_volume: BigInt,
    reps: Vec<Vec<i64>>,
    faces: Vec<SupportTuple>,
    essentials: Vec<Vec<Vec<usize>>>,
}

impl FillCriterion {
    pub fn new(e: &SupportTuple) -> Result<Self> {
        for s in e.entries() {
            if s.is_empty() {
                return Err(Error::Precondition("empty support in tuple".into()));
            }
        }
        let mv = mixed_volume(e)?;
        if mv.is_zero() {
            return Err(Error::Precondition("unfilled hypothesis M(E)>0 violated".into()));
        }
        let sum = e.sum_all()?;
        let reps = proper_face_normals(sum.points(), e.ambient_dim())?;
        let faces: Vec<SupportTuple> = par::map_slice(&reps, |w| e.face(w));
        let essentials: Vec<Vec<Vec<usize>>> = faces
            .iter()
            .map(essential_subsets)
            .collect::<Result<_>>()?;
        Ok(FillCriterion { e: e.clone(), mixed_volume: mv, reps, faces, essentials })
    }

    /// Run the criterion for a sub-tuple D of E.
    pub fn check(&self, d: &SupportTuple) -> Result<FillOutcome> {
        if d.len() != self.e.len() {
            return Err(Error::Precondition("tuple length mismatch".into()));
        }
        for (ds, es) in d.entries().iter().zip(self.e.entries()) {
            if !ds.is_subset_of(es) {
                return Err(Error::Precondition("candidate is not an entrywise subset".into()));
            }
        }
        let verdicts: Vec<Option<FaceWitness>> = par::map_range(self.reps.len(), |fi| {
            let face = &self.faces[fi];
            let meets: Vec<bool> = (0..d.len())
                .map(|i| {
                    d.entry(i)
                        .points()
                        .iter()
                        .any(|p| face.entry(i).contains(p))
                })
                .collect();
            self.essentials[fi]
                .iter()
                .find(|j| j.iter().all(|&i| meets[i]))
                .map(|j| FaceWitness { w: self.reps[fi].clone(), essential: j.clone() })
        });
        let mut witnesses = Vec::with_capacity(verdicts.len());
        for (fi, v) in verdicts.into_iter().enumerate() {
            match v {
                Some(w) => witnesses.push(w),
                None => return Ok(FillOutcome::Refuted { failing_w: self.reps[fi].clone() }),
            }
        }
        Ok(FillOutcome::Fills(witnesses))
    }
}

/// Criterion check of "D fills E". Requires M(E) > 0 and D entrywise
/// contained in E.
pub fn fills(d: &SupportTuple, e: &SupportTuple) -> Result<FillOutcome> {
    FillCriterion::new(e)?.check(d)
}

/// Full certificate: criterion witnesses plus an irreducibility check
/// (every single-point deletion of D must refute the criterion).
pub fn fill_certificate(d: &SupportTuple, e: &SupportTuple) -> Result<FillCertificate> {
    let crit = FillCriterion::new(e)?;
    match crit.check(d)? {
        FillOutcome::Refuted { failing_w } => Err(Error::Precondition(format!(
            "candidate does not fill: criterion fails at w = {failing_w:?}"
        ))),
        FillOutcome::Fills(witnesses) => {
            let irreducible = is_irreducible(&crit, d)?;
            Ok(FillCertificate {
                d: d.clone(),
                e: e.clone(),
                mixed_volume: crit.mixed_volume.clone(),
                witnesses,
                irreducible,
            })
        }
    }
}

fn is_irreducible(crit: &FillCriterion, d: &SupportTuple) -> Result<bool> {
    for i in 0..d.len() {
        for p in d.entry(i).points() {
            if d.entry(i).len() == 1 {
                // removing the last point of an entry is not a legal fill
                continue;
            }
            let mut entries = d.entries().to_vec();
            entries[i] = entries[i].without_point(p);
            let candidate = SupportTuple::new(entries)?;
            if matches!(crit.check(&candidate)?, FillOutcome::Fills(_)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Greedy irreducible fill: start from D = E and drop points (entry order,
/// then lexicographic point order) while the criterion still holds. The
/// result is an irreducible fill, though not a canonical one.
pub fn irreducible_fill(e: &SupportTuple) -> Result<SupportTuple> {
    let crit = FillCriterion::new(e)?;
    let mut d = e.clone();
    loop {
        let mut changed = false;
        'scan: for i in 0..d.len() {
            let points: Vec<Vec<i64>> = d.entry(i).points().to_vec();
            for p in &points {
                if d.entry(i).len() == 1 {
                    continue;
                }
                let mut entries = d.entries().to_vec();
                entries[i] = entries[i].without_point(p);
                let candidate = SupportTuple::new(entries)?;
                if matches!(crit.check(&candidate)?, FillOutcome::Fills(_)) {
                    d = candidate;
                    changed = true;
                    continue 'scan;
                }
            }
        }
        if !changed {
            return Ok(d);
        }
    }
}

impl FillCertificate {
    /// Certificate as JSON. Witness indices are 1-based, matching the usual
    /// 1..n index convention for equations.
    pub fn to_json(&self) -> Value {
        json!({
            "fills": true,
            "mixed_volume": self.mixed_volume.to_string(),
            "irreducible": self.irreducible,
            "D": self.d.entries().iter().map(|s| s.to_json()).collect::<Vec<_>>(),
            "E": self.e.entries().iter().map(|s| s.to_json()).collect::<Vec<_>>(),
            "witnesses": self.witnesses.iter().map(|fw| json!({
                "w": fw.w,
                "essential": fw.essential.iter().map(|i| i + 1).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}
