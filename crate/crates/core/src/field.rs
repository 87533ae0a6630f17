//! Exact field arithmetic over Q and over prime fields GF(p).
//!
//! Rationals are kept in lowest terms with positive denominator (the
//! `num-rational` canonical form), prime-field values as canonical
//! representatives in `[0, p)`. No operation ever rounds.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Which coefficient field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldCtx {
    /// The rationals.
    Q,
    /// The prime field GF(p). `p` must be prime; arithmetic does not check
    /// primality, but constructors outside test code do.
    Gf(u64),
}

impl FieldCtx {
    pub fn zero(&self) -> FieldElem {
        match self {
            FieldCtx::Q => FieldElem::Q(BigRational::zero()),
            FieldCtx::Gf(p) => FieldElem::Gf { val: 0, p: *p },
        }
    }

    pub fn one(&self) -> FieldElem {
        match self {
            FieldCtx::Q => FieldElem::Q(BigRational::one()),
            FieldCtx::Gf(p) => FieldElem::Gf { val: 1 % *p, p: *p },
        }
    }

    pub fn from_i64(&self, v: i64) -> FieldElem {
        match self {
            FieldCtx::Q => FieldElem::Q(BigRational::from_integer(BigInt::from(v))),
            FieldCtx::Gf(p) => {
                let r = v.rem_euclid(*p as i64) as u64;
                FieldElem::Gf { val: r, p: *p }
            }
        }
    }

    /// Parse a coefficient string: `"a"` or `"a/b"` over Q, a canonical
    /// residue over GF(p).
    pub fn parse(&self, s: &str) -> Result<FieldElem> {
        match self {
            FieldCtx::Q => {
                let (num, den) = match s.split_once('/') {
                    Some((a, b)) => (a, b),
                    None => (s, "1"),
                };
                let n = BigInt::from_str(num.trim())
                    .map_err(|_| Error::Precondition(format!("bad rational literal {s:?}")))?;
                let d = BigInt::from_str(den.trim())
                    .map_err(|_| Error::Precondition(format!("bad rational literal {s:?}")))?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(FieldElem::Q(BigRational::new(n, d)))
            }
            FieldCtx::Gf(p) => {
                let n = BigInt::from_str(s.trim())
                    .map_err(|_| Error::Precondition(format!("bad residue literal {s:?}")))?;
                let m = BigInt::from(*p);
                let r = ((n % &m) + &m) % &m;
                let (_, digits) = r.to_u64_digits();
                Ok(FieldElem::Gf { val: digits.first().copied().unwrap_or(0), p: *p })
            }
        }
    }
}

/// An element of Q or of GF(p), tagged with its field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Q(BigRational),
    Gf { val: u64, p: u64 },
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

impl FieldElem {
    pub fn ctx(&self) -> FieldCtx {
        match self {
            FieldElem::Q(_) => FieldCtx::Q,
            FieldElem::Gf { p, .. } => FieldCtx::Gf(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Q(r) => r.is_zero(),
            FieldElem::Gf { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Q(r) => r.is_one(),
            FieldElem::Gf { val, p } => *val == 1 % *p,
        }
    }

    fn same_field(&self, other: &FieldElem) -> Result<()> {
        if self.ctx() == other.ctx() {
            Ok(())
        } else {
            Err(Error::IncompatibleRings(format!("{:?} vs {:?}", self.ctx(), other.ctx())))
        }
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        self.same_field(other).expect("field mismatch");
        match (self, other) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a + b),
            (FieldElem::Gf { val: a, p }, FieldElem::Gf { val: b, .. }) => {
                FieldElem::Gf { val: (a + b) % p, p: *p }
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldElem {
        match self {
            FieldElem::Q(a) => FieldElem::Q(-a),
            FieldElem::Gf { val, p } => FieldElem::Gf { val: (p - val) % p, p: *p },
        }
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        self.same_field(other).expect("field mismatch");
        match (self, other) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a * b),
            (FieldElem::Gf { val: a, p }, FieldElem::Gf { val: b, .. }) => {
                FieldElem::Gf { val: mul_mod(*a, *b, *p), p: *p }
            }
            _ => unreachable!(),
        }
    }

    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldElem::Q(a) => FieldElem::Q(a.recip()),
            // p is prime, so Fermat inversion is exact.
            FieldElem::Gf { val, p } => FieldElem::Gf { val: pow_mod(*val, p - 2, *p), p: *p },
        })
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> FieldElem {
        let mut acc = self.ctx().one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Render as the JSON coefficient string form: `a` or `a/b` over Q,
    /// the canonical residue over GF(p).
    pub fn to_coeff_string(&self) -> String {
        match self {
            FieldElem::Q(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            FieldElem::Gf { val, .. } => val.to_string(),
        }
    }

    /// Exact rational value, if this is a Q element with small enough parts.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElem::Q(r) => Some(r),
            _ => None,
        }
    }

    /// A total order used only for canonical tie-breaking (term ordering
    /// never depends on it; printing does not either). Q compares by value,
    /// GF(p) by representative.
    pub fn cmp_canonical(&self, other: &FieldElem) -> std::cmp::Ordering {
        match (self, other) {
            (FieldElem::Q(a), FieldElem::Q(b)) => a.cmp(b),
            (FieldElem::Gf { val: a, .. }, FieldElem::Gf { val: b, .. }) => a.cmp(b),
            (FieldElem::Q(_), _) => std::cmp::Ordering::Less,
            (_, FieldElem::Q(_)) => std::cmp::Ordering::Greater,
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_coeff_string())
    }
}

/// True for probable primes; exact for all u64 via deterministic
/// Miller-Rabin witnesses.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // These witnesses are known to be deterministic for all n < 2^64.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime_above(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime_u64(c) {
        c += 1;
    }
    c
}

/// Sign of a rational as -1, 0, or 1 (for exact geometry predicates).
pub fn rational_sign(r: &BigRational) -> i32 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        let ctx = FieldCtx::Q;
        let a = ctx.parse("-5/15").unwrap();
        assert_eq!(a.to_coeff_string(), "-1/3");
        let b = ctx.parse("7").unwrap();
        assert_eq!(a.mul(&b).to_coeff_string(), "-7/3");
    }

    #[test]
    fn gf_inverse() {
        let ctx = FieldCtx::Gf(101);
        for v in 1..101 {
            let x = ctx.from_i64(v);
            assert!(x.mul(&x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn gf_parse_negative() {
        let ctx = FieldCtx::Gf(7);
        assert_eq!(ctx.parse("-1").unwrap(), ctx.from_i64(6));
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(101));
        assert!(!is_prime_u64(100));
        assert_eq!(next_prime_above(7), 11);
        assert_eq!(next_prime_above(2), 3);
    }
}
