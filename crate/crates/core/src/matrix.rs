//! Exact determinants of polynomial matrices.
//!
//! `det_fraction_free` is Bareiss elimination: every division along the way
//! is exact, so the result is computed entirely inside the coefficient ring.
//! `det_scalar_block` exploits matrices in which most rows are constants,
//! eliminating those rows with plain field arithmetic before handing the
//! small symbolic remainder to Bareiss.

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::poly::MultiPoly;

fn check_square_same_ring(m: &[Vec<MultiPoly>]) -> Result<()> {
    let n = m.len();
    for row in m {
        if row.len() != n {
            return Err(Error::Precondition("matrix is not square".into()));
        }
    }
    if n == 0 {
        return Ok(());
    }
    let first = &m[0][0];
    for row in m {
        for e in row {
            first.same_ring(e)?;
        }
    }
    Ok(())
}

/// Exact determinant by Bareiss (fraction-free) elimination.
///
/// The empty matrix yields the constant 1 (empty product convention), in the
/// trivial ring over Q.
pub fn det_fraction_free(m: &[Vec<MultiPoly>]) -> Result<MultiPoly> {
    check_square_same_ring(m)?;
    let n = m.len();
    if n == 0 {
        return Ok(MultiPoly::one(Vec::new(), FieldCtx::Q));
    }
    let vars = m[0][0].vars().to_vec();
    let field = m[0][0].field();
    let mut a: Vec<Vec<MultiPoly>> = m.to_vec();
    let mut sign_flip = false;
    let mut prev = MultiPoly::one(vars.clone(), field);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return Ok(MultiPoly::zero(vars, field)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[k][k].mul(&a[i][j])?.sub(&a[i][k].mul(&a[k][j])?)?;
                // Bareiss guarantees this division is exact.
                a[i][j] = t.divexact(&prev)?;
            }
            a[i][k] = MultiPoly::zero(vars.clone(), field);
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if sign_flip { det.neg() } else { det })
}

/// Determinant by cofactor expansion along the first row. Exponential; used
/// as an independent check and for very small matrices.
pub fn det_cofactor(m: &[Vec<MultiPoly>]) -> Result<MultiPoly> {
    check_square_same_ring(m)?;
    let n = m.len();
    if n == 0 {
        return Ok(MultiPoly::one(Vec::new(), FieldCtx::Q));
    }
    let vars = m[0][0].vars().to_vec();
    let field = m[0][0].field();
    if n == 1 {
        return Ok(m[0][0].clone());
    }
    let mut acc = MultiPoly::zero(vars, field);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPoly>> = (1..n)
            .map(|i| {
                (0..n)
                    .filter(|&c| c != j)
                    .map(|c| m[i][c].clone())
                    .collect()
            })
            .collect();
        let term = m[0][j].mul(&det_cofactor(&minor)?)?;
        acc = if j % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
    }
    Ok(acc)
}

/// Determinant of a matrix over the coefficient field, by ordinary Gaussian
/// elimination (exact, since the field arithmetic is exact).
pub fn det_field(m: &[Vec<FieldElem>], field: FieldCtx) -> FieldElem {
    let n = m.len();
    if n == 0 {
        return field.one();
    }
    let mut a: Vec<Vec<FieldElem>> = m.to_vec();
    let mut det = field.one();
    for k in 0..n {
        let pivot = match (k..n).find(|&r| !a[r][k].is_zero()) {
            Some(r) => r,
            None => return field.zero(),
        };
        if pivot != k {
            a.swap(k, pivot);
            det = det.neg();
        }
        det = det.mul(&a[k][k]);
        let inv = a[k][k].inv().expect("nonzero pivot");
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].mul(&inv);
            for j in k..n {
                let d = f.mul(&a[k][j]);
                a[i][j] = a[i][j].sub(&d);
            }
        }
    }
    det
}

/// Determinant of the matrix whose first rows are `scalar_rows` (entries in
/// the coefficient field) and whose last rows are `sym_rows` (polynomial
/// entries). The scalar rows are eliminated with field arithmetic; what is
/// left is a small symbolic block handled by Bareiss.
pub fn det_scalar_block(
    scalar_rows: &[Vec<FieldElem>],
    sym_rows: &[Vec<MultiPoly>],
    vars: &[String],
    field: FieldCtx,
) -> Result<MultiPoly> {
    let n = scalar_rows.len() + sym_rows.len();
    for r in scalar_rows {
        if r.len() != n {
            return Err(Error::Precondition("matrix is not square".into()));
        }
    }
    for r in sym_rows {
        if r.len() != n {
            return Err(Error::Precondition("matrix is not square".into()));
        }
    }
    if n == 0 {
        return Ok(MultiPoly::one(vars.to_vec(), field));
    }
    let mut scal: Vec<Vec<FieldElem>> = scalar_rows.to_vec();
    let mut sym: Vec<Vec<MultiPoly>> = sym_rows.to_vec();
    let mut pivot_cols: Vec<usize> = Vec::with_capacity(scal.len());
    let mut det_scalar = field.one();

    for i in 0..scal.len() {
        let col = (0..n).find(|j| !pivot_cols.contains(j) && !scal[i][*j].is_zero());
        let col = match col {
            Some(c) => c,
            // A scalar row became identically zero: singular matrix.
            None => return Ok(MultiPoly::zero(vars.to_vec(), field)),
        };
        let pivot = scal[i][col].clone();
        det_scalar = det_scalar.mul(&pivot);
        let inv = pivot.inv().expect("nonzero pivot");
        for r in i + 1..scal.len() {
            if scal[r][col].is_zero() {
                continue;
            }
            let f = scal[r][col].mul(&inv);
            for j in 0..n {
                let d = f.mul(&scal[i][j]);
                scal[r][j] = scal[r][j].sub(&d);
            }
        }
        for r in 0..sym.len() {
            if sym[r][col].is_zero() {
                continue;
            }
            let f = sym[r][col].scale(&inv);
            for j in 0..n {
                if scal[i][j].is_zero() {
                    continue;
                }
                let d = f.scale(&scal[i][j]);
                sym[r][j] = sym[r][j].sub(&d)?;
            }
        }
        pivot_cols.push(col);
    }

    // Residual block: symbolic rows on the columns not used as pivots.
    let rest_cols: Vec<usize> = (0..n).filter(|j| !pivot_cols.contains(j)).collect();
    let block: Vec<Vec<MultiPoly>> = sym
        .iter()
        .map(|row| rest_cols.iter().map(|&j| row[j].clone()).collect())
        .collect();
    let block_det = if block.is_empty() {
        MultiPoly::one(vars.to_vec(), field)
    } else if block.len() <= 4 {
        det_cofactor(&block)?
    } else {
        det_fraction_free(&block)?
    };

    // Sign of the column permutation (pivot columns first, then the rest).
    let mut perm: Vec<usize> = pivot_cols.clone();
    perm.extend(rest_cols.iter().copied());
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
            cur = perm[cur];
            len += 1;
        }
        if len % 2 == 0 {
            sign_flip = !sign_flip;
        }
    }

    let mut out = block_det.scale(&det_scalar);
    if sign_flip {
        out = out.neg();
    }
    Ok(out)
}
