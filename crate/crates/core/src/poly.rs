//! Sparse multivariate polynomials over an exact field.
//!
//! Terms are kept sorted in descending graded-lexicographic order on the
//! declared variable list, with no zero coefficients stored, so two equal
//! polynomials are structurally equal and print identically.

use std::cmp::Ordering;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

pub type Exponents = Vec<u32>;

/// Graded-lex comparison of exponent vectors (equal lengths assumed).
pub fn cmp_grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    field: FieldCtx,
    /// Sorted descending by `cmp_grlex`; coefficients nonzero.
    terms: Vec<(Exponents, FieldElem)>,
}

impl MultiPoly {
    pub fn zero(vars: Vec<String>, field: FieldCtx) -> Self {
        MultiPoly { vars, field, terms: Vec::new() }
    }

    pub fn constant(vars: Vec<String>, c: FieldElem) -> Self {
        let field = c.ctx();
        let mut p = MultiPoly::zero(vars, field);
        if !c.is_zero() {
            let exp = vec![0u32; p.vars.len()];
            p.terms.push((exp, c));
        }
        p
    }

    pub fn one(vars: Vec<String>, field: FieldCtx) -> Self {
        MultiPoly::constant(vars, field.one())
    }

    /// Single monomial `c * x^exp`.
    pub fn monomial(vars: Vec<String>, exp: Exponents, c: FieldElem) -> Result<Self> {
        if exp.len() != vars.len() {
            return Err(Error::Precondition("exponent length != variable count".into()));
        }
        let field = c.ctx();
        let mut p = MultiPoly::zero(vars, field);
        if !c.is_zero() {
            p.terms.push((exp, c));
        }
        Ok(p)
    }

    /// The variable `name` as a polynomial in the given ring.
    pub fn var(vars: Vec<String>, name: &str, field: FieldCtx) -> Result<Self> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Precondition(format!("unknown variable {name}")))?;
        let mut exp = vec![0u32; vars.len()];
        exp[i] = 1;
        MultiPoly::monomial(vars, exp, field.one())
    }

    /// Build from an unsorted term list, combining duplicates.
    pub fn from_terms(
        vars: Vec<String>,
        field: FieldCtx,
        terms: Vec<(Exponents, FieldElem)>,
    ) -> Result<Self> {
        for (e, c) in &terms {
            if e.len() != vars.len() {
                return Err(Error::Precondition("exponent length != variable count".into()));
            }
            if c.ctx() != field {
                return Err(Error::IncompatibleRings("coefficient field mismatch".into()));
            }
        }
        let mut p = MultiPoly { vars, field, terms };
        p.normalize();
        Ok(p)
    }

    fn normalize(&mut self) {
        self.terms.sort_by(|a, b| cmp_grlex(&b.0, &a.0));
        let mut out: Vec<(Exponents, FieldElem)> = Vec::with_capacity(self.terms.len());
        for (e, c) in self.terms.drain(..) {
            if let Some(last) = out.last_mut() {
                if last.0 == e {
                    last.1 = last.1.add(&c);
                    continue;
                }
            }
            out.push((e, c));
        }
        out.retain(|(_, c)| !c.is_zero());
        self.terms = out;
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn field(&self) -> FieldCtx {
        self.field
    }

    pub fn terms(&self) -> &[(Exponents, FieldElem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the polynomial is the constant 1.
    pub fn is_one_constant(&self) -> bool {
        self.terms.len() == 1
            && self.terms[0].0.iter().all(|&e| e == 0)
            && self.terms[0].1.is_one()
    }

    /// The constant value, if the polynomial is constant (zero included).
    pub fn constant_value(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return Some(self.field.zero());
        }
        if self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0) {
            return Some(self.terms[0].1.clone());
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, var: &str) -> Result<u32> {
        let i = self.var_index(var)?;
        Ok(self.terms.iter().map(|(e, _)| e[i]).max().unwrap_or(0))
    }

    pub fn var_index(&self, var: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| Error::Precondition(format!("unknown variable {var}")))
    }

    /// Leading term in descending grlex order.
    pub fn leading_term(&self) -> Option<(&Exponents, &FieldElem)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    pub fn same_ring(&self, other: &MultiPoly) -> Result<()> {
        if self.vars != other.vars || self.field != other.field {
            return Err(Error::IncompatibleRings(format!(
                "{:?} vs {:?}",
                self.vars, other.vars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_ring(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        MultiPoly::from_terms(self.vars.clone(), self.field, terms)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect();
        MultiPoly { vars: self.vars.clone(), field: self.field, terms }
    }

    pub fn scale(&self, c: &FieldElem) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.vars.clone(), self.field);
        }
        let terms = self.terms.iter().map(|(e, k)| (e.clone(), k.mul(c))).collect();
        MultiPoly { vars: self.vars.clone(), field: self.field, terms }
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_ring(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                terms.push((e, ca.mul(cb)));
            }
        }
        MultiPoly::from_terms(self.vars.clone(), self.field, terms)
    }

    /// Exact quotient `self / divisor`. Fails with `NotDivisible` when the
    /// remainder is nonzero; callers in the resultant pipeline treat that as
    /// a retry trigger.
    pub fn divexact(&self, divisor: &MultiPoly) -> Result<MultiPoly> {
        self.same_ring(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (lde, ldc) = divisor.leading_term().expect("nonzero divisor");
        let lde = lde.clone();
        let ldc = ldc.clone();
        let ldc_inv = ldc.inv()?;
        let mut rem = self.clone();
        let mut quot_terms: Vec<(Exponents, FieldElem)> = Vec::new();
        while let Some((re, rc)) = rem.leading_term() {
            // Leading term of the remaining part must be divisible by the
            // divisor's leading term; otherwise the division is not exact.
            let mut qe = Vec::with_capacity(re.len());
            for (a, b) in re.iter().zip(&lde) {
                if a < b {
                    return Err(Error::NotDivisible);
                }
                qe.push(a - b);
            }
            let qc = rc.mul(&ldc_inv);
            let qmono = MultiPoly::monomial(self.vars.clone(), qe.clone(), qc.clone())?;
            rem = rem.sub(&qmono.mul(divisor)?)?;
            quot_terms.push((qe, qc));
        }
        MultiPoly::from_terms(self.vars.clone(), self.field, quot_terms)
    }

    /// Full evaluation at a point (one value per variable).
    pub fn eval(&self, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.vars.len() {
            return Err(Error::Precondition("evaluation point has wrong arity".into()));
        }
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &ei) in point.iter().zip(e) {
                if ei > 0 {
                    t = t.mul(&xi.pow(ei));
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Substitute a constant for one variable; the variable stays in the
    /// ring (its exponents become zero).
    pub fn substitute(&self, var: &str, value: &FieldElem) -> Result<MultiPoly> {
        let i = self.var_index(var)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let pow = e2[i];
            e2[i] = 0;
            terms.push((e2, c.mul(&value.pow(pow))));
        }
        MultiPoly::from_terms(self.vars.clone(), self.field, terms)
    }

    /// Partial derivative with respect to one variable.
    pub fn derivative(&self, var: &str) -> Result<MultiPoly> {
        let i = self.var_index(var)?;
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            terms.push((e2, c.mul(&self.field.from_i64(e[i] as i64))));
        }
        MultiPoly::from_terms(self.vars.clone(), self.field, terms)
    }

    /// Group terms by their exponents on `group_vars`, returning for each
    /// distinct exponent pattern the cofactor polynomial in the remaining
    /// variables. Used to read coefficient matrices off a polynomial.
    pub fn coefficients_on(&self, group_vars: &[String]) -> Result<Vec<(Vec<u32>, MultiPoly)>> {
        let idx: Vec<usize> =
            group_vars.iter().map(|v| self.var_index(v)).collect::<Result<_>>()?;
        let rest: Vec<usize> =
            (0..self.vars.len()).filter(|i| !idx.contains(i)).collect();
        let rest_vars: Vec<String> = rest.iter().map(|&i| self.vars[i].clone()).collect();
        let mut buckets: Vec<(Vec<u32>, Vec<(Exponents, FieldElem)>)> = Vec::new();
        for (e, c) in &self.terms {
            let key: Vec<u32> = idx.iter().map(|&i| e[i]).collect();
            let sub: Exponents = rest.iter().map(|&i| e[i]).collect();
            match buckets.iter_mut().find(|(k, _)| *k == key) {
                Some((_, v)) => v.push((sub, c.clone())),
                None => buckets.push((key, vec![(sub, c.clone())])),
            }
        }
        buckets.sort_by(|a, b| cmp_grlex(&b.0, &a.0));
        buckets
            .into_iter()
            .map(|(k, terms)| {
                Ok((k, MultiPoly::from_terms(rest_vars.clone(), self.field, terms)?))
            })
            .collect()
    }

    /// Coefficient of `var^power` as a polynomial in the remaining variables.
    pub fn coefficient_of(&self, var: &str, power: u32) -> Result<MultiPoly> {
        let i = self.var_index(var)?;
        let rest: Vec<usize> = (0..self.vars.len()).filter(|&j| j != i).collect();
        let rest_vars: Vec<String> = rest.iter().map(|&j| self.vars[j].clone()).collect();
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            if e[i] == power {
                terms.push((rest.iter().map(|&j| e[j]).collect(), c.clone()));
            }
        }
        MultiPoly::from_terms(rest_vars, self.field, terms)
    }

    /// Re-embed into a ring with more variables (a superset, any order).
    pub fn extend_vars(&self, new_vars: &[String]) -> Result<MultiPoly> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                new_vars
                    .iter()
                    .position(|w| w == v)
                    .ok_or_else(|| Error::Precondition(format!("variable {v} missing")))
            })
            .collect::<Result<_>>()?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let mut e2 = vec![0u32; new_vars.len()];
            for (j, &ei) in e.iter().enumerate() {
                e2[map[j]] = ei;
            }
            terms.push((e2, c.clone()));
        }
        MultiPoly::from_terms(new_vars.to_vec(), self.field, terms)
    }

    /// Project onto a subset of variables; errors when a dropped variable
    /// actually occurs.
    pub fn restrict_vars(&self, keep: &[String]) -> Result<MultiPoly> {
        let mut map = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            map.push(keep.iter().position(|w| w == v));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let mut e2 = vec![0u32; keep.len()];
            for (j, &ei) in e.iter().enumerate() {
                match map[j] {
                    Some(t) => e2[t] = ei,
                    None if ei > 0 => {
                        return Err(Error::Precondition(format!(
                            "variable {} in use, cannot drop",
                            self.vars[j]
                        )))
                    }
                    None => {}
                }
            }
            terms.push((e2, c.clone()));
        }
        MultiPoly::from_terms(keep.to_vec(), self.field, terms)
    }

    /// True when every term has total degree `d` on the given variables.
    pub fn is_homogeneous_on(&self, group_vars: &[String], d: u32) -> Result<bool> {
        let idx: Vec<usize> =
            group_vars.iter().map(|v| self.var_index(v)).collect::<Result<_>>()?;
        Ok(self
            .terms
            .iter()
            .all(|(e, _)| idx.iter().map(|&i| e[i] as u64).sum::<u64>() == d as u64))
    }

    /// Divide by the leading (grlex-first) coefficient. Returns the monic
    /// polynomial and the scalar that was removed.
    pub fn normalize_monic(&self) -> (MultiPoly, FieldElem) {
        match self.leading_term() {
            None => (self.clone(), self.field.one()),
            Some((_, c)) => {
                let c = c.clone();
                let inv = c.inv().expect("nonzero leading coefficient");
                (self.scale(&inv), c)
            }
        }
    }

    /// `self == c * other` for some nonzero constant `c`.
    pub fn proportional_to(&self, other: &MultiPoly) -> bool {
        if self.same_ring(other).is_err() {
            return false;
        }
        self.normalize_monic().0 == other.normalize_monic().0
    }

    /// The exponent vectors with nonzero coefficients, as lattice points.
    pub fn support_points(&self) -> Vec<Vec<i64>> {
        let mut pts: Vec<Vec<i64>> = self
            .terms
            .iter()
            .map(|(e, _)| e.iter().map(|&x| x as i64).collect())
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }

    // --- JSON (the wire format used by the CLI) ---

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| json!({ "exp": e, "coeff": c.to_coeff_string() }))
            .collect();
        json!({ "vars": self.vars, "terms": terms })
    }

    pub fn from_json(v: &Value, field: FieldCtx) -> Result<MultiPoly> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Precondition("polynomial must be an object".into()))?;
        let vars: Vec<String> = obj
            .get("vars")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Precondition("polynomial needs \"vars\"".into()))?
            .iter()
            .map(|x| {
                x.as_str()
                    .map(str::to_owned)
                    .ok_or_else(|| Error::Precondition("variable names must be strings".into()))
            })
            .collect::<Result<_>>()?;
        let raw_terms = obj
            .get("terms")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Precondition("polynomial needs \"terms\"".into()))?;
        let mut terms = Vec::with_capacity(raw_terms.len());
        for t in raw_terms {
            let exp: Vec<u32> = t
                .get("exp")
                .and_then(|x| x.as_array())
                .ok_or_else(|| Error::Precondition("term needs \"exp\"".into()))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|u| u as u32)
                        .ok_or_else(|| Error::Precondition("exponents must be nonnegative".into()))
                })
                .collect::<Result<_>>()?;
            let coeff = t
                .get("coeff")
                .and_then(|x| x.as_str())
                .ok_or_else(|| Error::Precondition("term needs string \"coeff\"".into()))?;
            terms.push((exp, field.parse(coeff)?));
        }
        MultiPoly::from_terms(vars, field, terms)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c.to_coeff_string())?;
            for (v, &ei) in self.vars.iter().zip(e) {
                match ei {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{ei}")?,
                }
            }
        }
        Ok(())
    }
}

/// Parse a compact term list like `[(coeff, [exps]), ...]` used heavily in
/// tests: builds the polynomial over the given variables and field.
pub fn poly_from_int_terms(
    vars: &[&str],
    field: FieldCtx,
    terms: &[(i64, &[u32])],
) -> MultiPoly {
    let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    let terms: Vec<(Exponents, FieldElem)> = terms
        .iter()
        .map(|(c, e)| (e.to_vec(), field.from_i64(*c)))
        .collect();
    MultiPoly::from_terms(vars, field, terms).expect("well-formed term list")
}
