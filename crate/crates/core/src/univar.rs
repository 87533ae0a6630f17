//! Univariate root extraction over Q and GF(p).
//!
//! Over Q we report every rational root with multiplicity (rational root
//! search on the primitive integer form). Over GF(p) we report every root in
//! the field, by exhaustive evaluation for small p and by equal-degree
//! splitting of gcd(f, x^p - x) for larger p. Whatever does not split into
//! linear factors over the base field is returned as a monic remainder.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::poly::MultiPoly;
use crate::rng::Rng;

/// Threshold below which GF(p) roots are found by trying every element.
const EXHAUSTIVE_PRIME_BOUND: u64 = 1024;

/// Dense univariate polynomial over the coefficient field.
/// `coeffs[i]` is the coefficient of t^i; the vector carries no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    pub coeffs: Vec<FieldElem>,
    pub field: FieldCtx,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<FieldElem>, field: FieldCtx) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs, field }
    }

    pub fn zero(field: FieldCtx) -> Self {
        UniPoly { coeffs: Vec::new(), field }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> FieldElem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().inv().expect("nonzero leading coefficient");
        UniPoly::new(self.coeffs.iter().map(|c| c.mul(&inv)).collect(), self.field)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UniPoly::new(out, self.field)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero());
            let b = other.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero());
            out.push(a.sub(&b));
        }
        UniPoly::new(out, self.field)
    }

    /// Quotient and remainder on division by a nonzero polynomial.
    pub fn divmod(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.degree() < d.degree() || self.is_zero() {
            return (UniPoly::zero(self.field), self.clone());
        }
        let dl_inv = d.leading().inv().expect("nonzero divisor");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); rem.len() - d.coeffs.len() + 1];
        for k in (0..quot.len()).rev() {
            let lead = rem[k + d.coeffs.len() - 1].clone();
            if lead.is_zero() {
                continue;
            }
            let q = lead.mul(&dl_inv);
            quot[k] = q.clone();
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].sub(&q.mul(dc));
            }
        }
        (UniPoly::new(quot, self.field), UniPoly::new(rem, self.field))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Synthetic division by (t - r); returns the quotient when the
    /// remainder is zero.
    fn deflate_at(&self, r: &FieldElem) -> Option<UniPoly> {
        if self.is_zero() {
            return None;
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() - 1];
        let mut carry = self.field.zero();
        for i in (0..self.coeffs.len()).rev() {
            let v = self.coeffs[i].add(&carry.mul(r));
            if i == 0 {
                if !v.is_zero() {
                    return None;
                }
            } else {
                out[i - 1] = v.clone();
                carry = v;
            }
        }
        Some(UniPoly::new(out, self.field))
    }

    /// self^e modulo m, by square and multiply.
    pub fn pow_mod(&self, e: u64, m: &UniPoly) -> UniPoly {
        let mut base = self.divmod(m).1;
        let mut acc = UniPoly::new(vec![self.field.one()], self.field);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).divmod(m).1;
            }
            base = base.mul(&base).divmod(m).1;
            e >>= 1;
        }
        acc
    }

    /// Convert back to a `MultiPoly` in the given ring and variable.
    pub fn to_multipoly(&self, vars: &[String], var: &str) -> Result<MultiPoly> {
        let idx = vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| Error::Precondition(format!("unknown variable {var}")))?;
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut e = vec![0u32; vars.len()];
            e[idx] = i as u32;
            terms.push((e, c.clone()));
        }
        MultiPoly::from_terms(vars.to_vec(), self.field, terms)
    }
}

/// Extract the dense univariate form of a `MultiPoly` that uses at most one
/// variable. Returns the polynomial and the name of the variable in use
/// (`None` when constant).
pub fn as_univariate(p: &MultiPoly) -> Result<(UniPoly, Option<String>)> {
    let mut used: Option<usize> = None;
    for (e, _) in p.terms() {
        for (i, &ei) in e.iter().enumerate() {
            if ei > 0 {
                match used {
                    None => used = Some(i),
                    Some(j) if j == i => {}
                    Some(_) => {
                        return Err(Error::Precondition("polynomial is not univariate".into()))
                    }
                }
            }
        }
    }
    let field = p.field();
    match used {
        None => {
            let c = p.constant_value().expect("constant");
            Ok((UniPoly::new(vec![c], field), None))
        }
        Some(i) => {
            let deg = p.terms().iter().map(|(e, _)| e[i]).max().unwrap_or(0) as usize;
            let mut coeffs = vec![field.zero(); deg + 1];
            for (e, c) in p.terms() {
                coeffs[e[i] as usize] = c.clone();
            }
            Ok((UniPoly::new(coeffs, field), Some(p.vars()[i].clone())))
        }
    }
}

/// All roots in the base field with multiplicities, plus the monic product
/// of the irreducible factors of degree >= 2.
///
/// The identity `p = leading * prod (t - r_i)^{m_i} * remainder` holds
/// exactly for the returned data.
pub fn univ_roots(p: &MultiPoly) -> Result<(Vec<(FieldElem, u32)>, MultiPoly)> {
    if p.is_zero() {
        return Err(Error::Precondition("zero polynomial has no root data".into()));
    }
    let (uni, var) = as_univariate(p)?;
    let (roots, rem) = uni_roots(&uni)?;
    let rem_mp = match &var {
        Some(v) => rem.to_multipoly(p.vars(), v)?,
        None => MultiPoly::one(p.vars().to_vec(), p.field()),
    };
    Ok((roots, rem_mp))
}

/// Root extraction on the dense representation.
pub fn uni_roots(f: &UniPoly) -> Result<(Vec<(FieldElem, u32)>, UniPoly)> {
    if f.is_zero() {
        return Err(Error::Precondition("zero polynomial has no root data".into()));
    }
    let field = f.field;
    let mut work = f.clone();
    let mut roots: Vec<(FieldElem, u32)> = Vec::new();

    // Root at zero first: strip powers of t.
    let zero_mult = work.coeffs.iter().take_while(|c| c.is_zero()).count() as u32;
    if zero_mult > 0 {
        work = UniPoly::new(work.coeffs[zero_mult as usize..].to_vec(), field);
        roots.push((field.zero(), zero_mult));
    }

    let candidates: Vec<FieldElem> = match field {
        FieldCtx::Q => rational_root_candidates(&work)?,
        FieldCtx::Gf(p) if p < EXHAUSTIVE_PRIME_BOUND => {
            (1..p).map(|v| FieldElem::Gf { val: v, p }).collect()
        }
        FieldCtx::Gf(p) => gf_distinct_roots(&work, p)?,
    };

    for cand in candidates {
        if work.degree() == 0 {
            break;
        }
        let mut mult = 0u32;
        while let Some(q) = work.deflate_at(&cand) {
            work = q;
            mult += 1;
        }
        if mult > 0 {
            roots.push((cand, mult));
        }
    }

    roots.sort_by(|a, b| a.0.cmp_canonical(&b.0));
    Ok((roots, work.monic()))
}

/// Candidate rational roots p/q with p dividing the trailing and q the
/// leading coefficient of the primitive integer form.
fn rational_root_candidates(f: &UniPoly) -> Result<Vec<FieldElem>> {
    if f.degree() == 0 {
        return Ok(Vec::new());
    }
    // Clear denominators and content.
    let mut denom_lcm = BigInt::one();
    for c in &f.coeffs {
        let r = c.as_rational().expect("Q coefficients");
        denom_lcm = denom_lcm.lcm(r.denom());
    }
    let ints: Vec<BigInt> = f
        .coeffs
        .iter()
        .map(|c| {
            let r = c.as_rational().unwrap();
            r.numer() * (&denom_lcm / r.denom())
        })
        .collect();
    let mut content = BigInt::zero();
    for v in &ints {
        content = content.gcd(v);
    }
    let ints: Vec<BigInt> = ints.iter().map(|v| v / &content).collect();
    let trailing = ints.first().expect("nonzero").abs();
    let leading = ints.last().expect("nonzero").abs();
    let dt = divisors(&trailing)?;
    let dl = divisors(&leading)?;
    let mut out = Vec::new();
    for num in &dt {
        for den in &dl {
            if num.gcd(den).is_one() {
                let pos = num_rational::BigRational::new(num.clone(), den.clone());
                out.push(FieldElem::Q(-pos.clone()));
                out.push(FieldElem::Q(pos));
            }
        }
    }
    out.sort_by(|a, b| a.cmp_canonical(b));
    out.dedup();
    Ok(out)
}

/// All positive divisors via trial-division factorization. Errors when a
/// cofactor is too large to certify, rather than silently missing roots.
fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    if n.is_zero() {
        return Err(Error::Precondition("divisors of zero".into()));
    }
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut rest = n.abs();
    let mut d = BigInt::from(2u8);
    while &d * &d <= rest && d < BigInt::from(1_000_000u32) {
        let mut e = 0u32;
        while (&rest % &d).is_zero() {
            rest /= &d;
            e += 1;
        }
        if e > 0 {
            primes.push((d.clone(), e));
        }
        d += 1u8;
    }
    if !rest.is_one() {
        match u64::try_from(&rest) {
            Ok(v) if crate::field::is_prime_u64(v) => primes.push((rest.clone(), 1)),
            _ => {
                if &d * &d > rest {
                    // Below the trial bound squared: the cofactor is prime.
                    primes.push((rest.clone(), 1));
                } else {
                    return Err(Error::Unsupported(
                        "coefficient too large for rational root search".into(),
                    ));
                }
            }
        }
    }
    let mut out = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for v in &out {
            let mut acc = v.clone();
            next.push(acc.clone());
            for _ in 0..e {
                acc = &acc * &p;
                next.push(acc.clone());
            }
        }
        out = next;
        if out.len() > 200_000 {
            return Err(Error::Unsupported("too many divisor candidates".into()));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Distinct roots in GF(p) for large p: split gcd(f, x^p - x) into linear
/// factors by equal-degree (Cantor-Zassenhaus) splitting.
fn gf_distinct_roots(f: &UniPoly, p: u64) -> Result<Vec<FieldElem>> {
    let field = FieldCtx::Gf(p);
    if f.degree() == 0 {
        return Ok(Vec::new());
    }
    let fm = f.monic();
    let x = UniPoly::new(vec![field.zero(), field.one()], field);
    // x^p mod f, then gcd with f keeps exactly the distinct linear factors.
    let xp = x.pow_mod(p, &fm);
    let lin = fm.gcd(&xp.sub(&x));
    let mut rng = Rng::derive(p, "edf", fm.degree() as u64);
    let mut roots = Vec::new();
    let mut stack = vec![lin];
    let mut guard = 0u32;
    while let Some(g) = stack.pop() {
        if g.degree() == 0 {
            continue;
        }
        if g.degree() == 1 {
            // monic t + c0  =>  root -c0
            roots.push(g.coeffs[0].neg());
            continue;
        }
        guard += 1;
        if guard > 10_000 {
            return Err(Error::RetriesExhausted { stage: "equal-degree splitting", last_seed: rng.state() });
        }
        let a = field.from_i64(rng.below(p) as i64);
        let shifted = UniPoly::new(vec![a, field.one()], field);
        let h = shifted.pow_mod((p - 1) / 2, &g);
        let h1 = h.sub(&UniPoly::new(vec![field.one()], field));
        let d = g.gcd(&h1);
        if d.degree() == 0 || d.degree() == g.degree() {
            stack.push(g);
            continue;
        }
        let (q, _) = g.divmod(&d);
        stack.push(d);
        stack.push(q);
    }
    Ok(roots)
}
