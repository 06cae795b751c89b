use num_rational::BigRational;
use num_traits::One;

use super::{Coeff, HomogPoly, Space};
use crate::error::{Error, Result};

/// Dense square matrix of polynomial entries.
pub type PolyMatrix<C> = Vec<Vec<HomogPoly<C>>>;

/// Sylvester matrix of `f = sum f[i] t^{p-i}` and `g = sum g[i] t^{q-i}`
/// (coefficients listed from the leading one down).
pub fn sylvester_matrix<C: Coeff>(f: &[HomogPoly<C>], g: &[HomogPoly<C>]) -> Result<PolyMatrix<C>> {
    if f.len() < 2 || g.len() < 2 {
        return Err(Error::Invalid("Sylvester matrix needs degree >= 1 in both inputs".into()));
    }
    if f.iter().all(|c| c.is_zero()) || g.iter().all(|c| c.is_zero()) {
        return Err(Error::Invalid("zero polynomial in Sylvester matrix".into()));
    }
    let p = f.len() - 1;
    let q = g.len() - 1;
    let n = p + q;
    let nv = f[0].nvars();
    let space = f[0].space();
    let zero = |d: u32| HomogPoly::zero(nv, d, space);
    let mut m = Vec::with_capacity(n);
    for r in 0..q {
        let mut row: Vec<_> = (0..n).map(|_| zero(f[0].degree())).collect();
        for (i, c) in f.iter().enumerate() {
            row[r + i] = c.clone();
        }
        m.push(row);
    }
    for r in 0..p {
        let mut row: Vec<_> = (0..n).map(|_| zero(g[0].degree())).collect();
        for (i, c) in g.iter().enumerate() {
            row[r + i] = c.clone();
        }
        m.push(row);
    }
    Ok(m)
}

fn check_square<C: Coeff>(m: &PolyMatrix<C>) -> Result<usize> {
    let n = m.len();
    for row in m {
        if row.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: row.len() });
        }
    }
    Ok(n)
}

/// Fraction-free (Bareiss) determinant over exact rational polynomials.
pub fn bareiss_det(m: &PolyMatrix<BigRational>) -> Result<HomogPoly<BigRational>> {
    let n = check_square(m)?;
    if n == 0 {
        return Err(Error::Invalid("empty matrix".into()));
    }
    let nv = m[0][0].nvars();
    let space = m[0][0].space();
    let mut a = m.clone();
    let mut sign = false;
    let mut prev = HomogPoly::constant(nv, BigRational::one(), space);
    for k in 0..n - 1 {
        let piv = (k..n).find(|&i| !a[i][k].is_zero());
        let p = match piv {
            Some(p) => p,
            None => return Ok(HomogPoly::zero(nv, 0, space)),
        };
        if p != k {
            a.swap(p, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.exact_divide(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if sign { det.neg() } else { det })
}

/// Laplace expansion along the first row. Exponential cost; used as an oracle.
pub fn cofactor_det<C: Coeff>(m: &PolyMatrix<C>) -> Result<HomogPoly<C>> {
    let n = check_square(m)?;
    if n == 0 {
        return Err(Error::Invalid("empty matrix".into()));
    }
    let cols: Vec<usize> = (0..n).collect();
    Ok(laplace(m, 0, &cols))
}

fn laplace<C: Coeff>(m: &PolyMatrix<C>, row: usize, cols: &[usize]) -> HomogPoly<C> {
    let nv = m[0][0].nvars();
    let space: Space = m[0][0].space();
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut acc = HomogPoly::zero(nv, 0, space);
    for (idx, &c) in cols.iter().enumerate() {
        if m[row][c].is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = laplace(m, row + 1, &rest);
        let term = m[row][c].mul(&minor);
        acc = if idx % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    if acc.is_zero() {
        return HomogPoly::zero(nv, 0, space);
    }
    acc
}
