//! The JSON problem-file format consumed by the command-line front end.
//!
//! ```json
//! {
//!   "n": 2,
//!   "field": "Q",                       // or {"GFp": 101}
//!   "polynomials": [ { "vars": ["x","y"], "terms": [...] } ],
//!   "supports": [ [[0,0],[1,0]], ... ], // optional, inferred when absent
//!   "A": [[0,0],[1,0],[0,1]],           // optional tag support
//!   "fill": [ [[0,0],[3,1]], ... ],     // optional fill candidate
//!   "seed": 0                            // optional
//! }
//! ```
//!
//! Polynomials must all live in one ring; its first n variables are the
//! torus variables, and any further variables are symbolic tags that
//! survive into resultants.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{is_prime_u64, FieldCtx};
use crate::geom::support::{Support, SupportTuple};
use crate::poly::MultiPoly;

#[derive(Clone, Debug)]
pub struct ProblemFile {
    pub n: usize,
    pub field: FieldCtx,
    pub polynomials: Vec<MultiPoly>,
    pub x_vars: Vec<String>,
    pub supports: Option<SupportTuple>,
    pub tag_support: Option<Support>,
    pub fill: Option<SupportTuple>,
    pub seed: u64,
}

pub fn parse_field(v: &Value) -> Result<FieldCtx> {
    if let Some(s) = v.as_str() {
        if s == "Q" {
            return Ok(FieldCtx::Q);
        }
        return Err(Error::Precondition(format!("unknown field {s:?}")));
    }
    if let Some(obj) = v.as_object() {
        if let Some(p) = obj.get("GFp").and_then(|x| x.as_u64()) {
            return field_from_prime(p);
        }
    }
    Err(Error::Precondition("field must be \"Q\" or {\"GFp\": p}".into()))
}

pub fn field_from_prime(p: u64) -> Result<FieldCtx> {
    if !is_prime_u64(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    Ok(FieldCtx::Gf(p))
}

fn parse_support_list(v: &Value, n: usize) -> Result<SupportTuple> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Precondition("expected an array of supports".into()))?;
    let entries = arr
        .iter()
        .map(|s| Support::from_json(s, n))
        .collect::<Result<Vec<_>>>()?;
    SupportTuple::new(entries)
}

impl ProblemFile {
    pub fn from_json(v: &Value) -> Result<ProblemFile> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Precondition("problem file must be a JSON object".into()))?;
        let n = obj
            .get("n")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Precondition("problem file needs \"n\"".into()))?
            as usize;
        if n == 0 {
            return Err(Error::Precondition("n must be positive".into()));
        }
        let field = match obj.get("field") {
            Some(f) => parse_field(f)?,
            None => FieldCtx::Q,
        };
        let polynomials: Vec<MultiPoly> = match obj.get("polynomials") {
            Some(Value::Array(raw)) => raw
                .iter()
                .map(|p| MultiPoly::from_json(p, field))
                .collect::<Result<_>>()?,
            Some(_) => {
                return Err(Error::Precondition("\"polynomials\" must be an array".into()))
            }
            None => Vec::new(),
        };
        let x_vars: Vec<String> = if let Some(first) = polynomials.first() {
            if first.vars().len() < n {
                return Err(Error::Precondition(format!(
                    "polynomials declare {} variables, need at least n = {n}",
                    first.vars().len()
                )));
            }
            for p in &polynomials {
                if p.vars() != first.vars() {
                    return Err(Error::Precondition(
                        "all polynomials must share one variable list".into(),
                    ));
                }
            }
            first.vars()[..n].to_vec()
        } else {
            (0..n).map(|i| format!("x{i}")).collect()
        };
        let supports = match obj.get("supports") {
            Some(Value::Null) | None => None,
            Some(s) => Some(parse_support_list(s, n)?),
        };
        let tag_support = match obj.get("A") {
            Some(Value::Null) | None => None,
            Some(a) => Some(Support::from_json(a, n)?),
        };
        let fill = match obj.get("fill") {
            Some(Value::Null) | None => None,
            Some(f) => Some(parse_support_list(f, n)?),
        };
        let seed = obj.get("seed").and_then(|x| x.as_u64()).unwrap_or(0);
        // Declared supports must contain the polynomials' monomials (on the
        // x-variables; tag variables do not participate).
        if let Some(e) = &supports {
            for (i, p) in polynomials.iter().enumerate().take(e.len()) {
                for (xexp, _) in p.coefficients_on(&x_vars)? {
                    let pt: Vec<i64> = xexp.iter().map(|&x| x as i64).collect();
                    if !e.entry(i).contains(&pt) {
                        return Err(Error::Precondition(format!(
                            "polynomial {i} has monomials outside its declared support"
                        )));
                    }
                }
            }
        }
        Ok(ProblemFile {
            n,
            field,
            polynomials,
            x_vars,
            supports,
            tag_support,
            fill,
            seed,
        })
    }

    /// The supports to use: declared ones, or the polynomials' own
    /// monomial sets.
    pub fn effective_supports(&self) -> Result<SupportTuple> {
        match &self.supports {
            Some(e) => Ok(e.clone()),
            None => {
                if self.polynomials.is_empty() {
                    return Err(Error::Precondition(
                        "no supports given and no polynomials to infer them from".into(),
                    ));
                }
                let xonly = self
                    .polynomials
                    .iter()
                    .map(|p| p.restrict_vars(&self.x_vars))
                    .collect::<Result<Vec<_>>>();
                match xonly {
                    Ok(ps) => crate::gcp::inferred_supports(&ps, &self.x_vars),
                    // polynomials carry tag variables: project supports
                    Err(_) => {
                        let entries = self
                            .polynomials
                            .iter()
                            .map(|p| {
                                let pts = p
                                    .coefficients_on(&self.x_vars)?
                                    .into_iter()
                                    .map(|(e, _)| e.iter().map(|&x| x as i64).collect())
                                    .collect();
                                Support::new(self.n, pts)
                            })
                            .collect::<Result<Vec<_>>>()?;
                        SupportTuple::new(entries)
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn parse_minimal_problem() {
        let v = json!({
            "n": 2,
            "field": "Q",
            "polynomials": [
                {"vars": ["x", "y"], "terms": [
                    {"exp": [1, 0], "coeff": "1"},
                    {"exp": [0, 0], "coeff": "-2"}
                ]},
                {"vars": ["x", "y"], "terms": [
                    {"exp": [0, 1], "coeff": "1"},
                    {"exp": [0, 0], "coeff": "-3"}
                ]}
            ],
            "seed": 7
        });
        let pf = ProblemFile::from_json(&v).unwrap();
        assert_eq!(pf.n, 2);
        assert_eq!(pf.seed, 7);
        assert_eq!(pf.x_vars, vec!["x".to_string(), "y".to_string()]);
        let e = pf.effective_supports().unwrap();
        assert_eq!(e.entry(0).len(), 2);
    }

    #[test]
    fn parse_supports_only() {
        let v = json!({
            "n": 2,
            "supports": [
                [[0,0],[2,0],[0,3],[2,3]],
                [[0,0],[5,0],[0,7],[5,7]]
            ]
        });
        let pf = ProblemFile::from_json(&v).unwrap();
        assert!(pf.polynomials.is_empty());
        assert_eq!(pf.effective_supports().unwrap().len(), 2);
    }

    #[test]
    fn reject_monomials_outside_declared_support() {
        let v = json!({
            "n": 1,
            "polynomials": [
                {"vars": ["x"], "terms": [{"exp": [2], "coeff": "1"}]}
            ],
            "supports": [[[0],[1]]]
        });
        assert!(ProblemFile::from_json(&v).is_err());
    }

    #[test]
    fn gfp_field_parses_and_rejects_composites() {
        assert!(parse_field(&json!({"GFp": 101})).is_ok());
        assert!(parse_field(&json!({"GFp": 100})).is_err());
    }
}
