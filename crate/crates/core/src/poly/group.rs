use num_complex::Complex64;
use num_rational::BigRational;

use super::{Coeff, HomogPoly};
use crate::error::{Error, Result};

/// Square invertible matrix acting on points, dual points and polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement<C: Coeff> {
    n: usize,
    entries: Vec<C>,
    det_hint: Option<C>,
}

pub type ExactGroup = GroupElement<BigRational>;
pub type FloatGroup = GroupElement<Complex64>;

impl<C: Coeff> GroupElement<C> {
    /// Row-major entries; fails on a singular matrix.
    pub fn new(n: usize, entries: Vec<C>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: entries.len() });
        }
        let mut g = GroupElement { n, entries, det_hint: None };
        let det = g.compute_det();
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        g.det_hint = Some(det);
        Ok(g)
    }

    pub fn from_rows(rows: &[Vec<C>]) -> Result<Self> {
        let n = rows.len();
        Self::new(n, rows.iter().flat_map(|r| r.iter().cloned()).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&vec![C::one(); n]).unwrap()
    }

    pub fn diag(d: &[C]) -> Result<Self> {
        let n = d.len();
        let mut e = vec![C::zero(); n * n];
        for i in 0..n {
            e[i * n + i] = d[i].clone();
        }
        Self::new(n, e)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> Vec<C> {
        self.entries[i * self.n..(i + 1) * self.n].to_vec()
    }

    pub fn entries(&self) -> &[C] {
        &self.entries
    }

    pub fn det(&self) -> C {
        self.det_hint.clone().unwrap_or_else(|| self.compute_det())
    }

    fn compute_det(&self) -> C {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = C::one();
        for k in 0..n {
            let p = match pivot_row(&a, n, k) {
                Some(p) => p,
                None => return C::zero(),
            };
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let piv = a[k * n + k].clone();
            det = det * piv.clone();
            for i in k + 1..n {
                let f = a[i * n + k].clone() / piv.clone();
                if f.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = a[i * n + j].clone() - f.clone() * a[k * n + j].clone();
                    a[i * n + j] = v;
                }
            }
        }
        det
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut e = vec![C::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    e[i * n + j] = e[i * n + j].clone() + a.clone() * other.get(k, j).clone();
                }
            }
        }
        let det_hint = match (&self.det_hint, &other.det_hint) {
            (Some(a), Some(b)) => Some(a.clone() * b.clone()),
            _ => None,
        };
        GroupElement { n, entries: e, det_hint }
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut e = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                e.push(self.get(j, i).clone());
            }
        }
        GroupElement { n, entries: e, det_hint: self.det_hint.clone() }
    }

    pub fn inverse(&self) -> Self {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut inv = Self::identity(n).entries;
        for k in 0..n {
            let p = pivot_row(&a, n, k).expect("GroupElement invariant: invertible");
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                    inv.swap(k * n + j, p * n + j);
                }
            }
            let piv = a[k * n + k].clone();
            for j in 0..n {
                a[k * n + j] = a[k * n + j].clone() / piv.clone();
                inv[k * n + j] = inv[k * n + j].clone() / piv.clone();
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = a[i * n + k].clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a[i * n + j] = a[i * n + j].clone() - f.clone() * a[k * n + j].clone();
                    inv[i * n + j] = inv[i * n + j].clone() - f.clone() * inv[k * n + j].clone();
                }
            }
        }
        GroupElement { n, entries: inv, det_hint: self.det_hint.clone().map(|d| C::one() / d) }
    }

    /// Cofactor matrix `det(g) * g^{-T}`, so that `(g u) x (g v) = cof(g) (u x v)`.
    pub fn cofactor(&self) -> Self {
        let d = self.det();
        let it = self.inverse().transpose();
        GroupElement {
            n: self.n,
            entries: it.entries.into_iter().map(|c| c * d.clone()).collect(),
            det_hint: None,
        }
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(C::zero(), |acc, j| acc + self.get(i, j).clone() * v[j].clone())
            })
            .collect()
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = self.clone();
        out.entries.iter_mut().for_each(|e| *e = e.clone() * s.clone());
        out.det_hint = None;
        out
    }

    pub fn to_float(&self) -> FloatGroup {
        GroupElement {
            n: self.n,
            entries: self.entries.iter().map(|c| c.to_complex()).collect(),
            det_hint: self.det_hint.as_ref().map(|c| c.to_complex()),
        }
    }

    /// `F∘σ^{-1}`: the polynomial cutting out `σ·X_F`.
    pub fn act_on_point_poly(&self, f: &HomogPoly<C>) -> Result<HomogPoly<C>> {
        f.substitute(&self.inverse())
    }

    /// `Δ∘σ^T`: the action on polynomials in dual coordinates.
    pub fn act_on_dual_poly(&self, delta: &HomogPoly<C>) -> Result<HomogPoly<C>> {
        delta.substitute(&self.transpose())
    }

    /// `(σ^{-1})^T a`: the action on a dual vector.
    pub fn act_on_dual_vector(&self, a: &[C]) -> Vec<C> {
        self.inverse().transpose().apply(a)
    }
}

impl FloatGroup {
    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Rescales so that `|det| = 1`.
    pub fn unimodular(&self) -> Self {
        let d = self.det().norm();
        let s = d.powf(-1.0 / self.n as f64);
        self.scale(&Complex64::new(s, 0.0))
    }
}

fn pivot_row<C: Coeff>(a: &[C], n: usize, k: usize) -> Option<usize> {
    if C::EXACT {
        (k..n).find(|&i| !a[i * n + k].is_zero())
    } else {
        (k..n)
            .filter(|&i| !a[i * n + k].is_zero())
            .max_by(|&i, &j| {
                a[i * n + k]
                    .norm_sq_f64()
                    .partial_cmp(&a[j * n + k].norm_sq_f64())
                    .unwrap()
            })
    }
}
