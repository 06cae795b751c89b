//! Fixed-size complex 3-vectors and 3×3 matrices.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::poly::{Coeff, GroupElement};

pub type C = Complex64;
pub type Mat3 = [[C; 3]; 3];

pub trait Identity {
    fn identity() -> Self;
}

impl Identity for Mat3 {
    fn identity() -> Self {
        let mut m = [[C::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = C::one();
        }
        m
    }
}

pub fn mat_vec(m: &Mat3, v: &[C; 3]) -> [C; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[C::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    out
}

pub fn transpose(a: &Mat3) -> Mat3 {
    let mut out = [[C::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn det(a: &Mat3) -> C {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// Cofactor matrix `det(a) a^{-T}`; satisfies `(a u) x (a v) = cof(a) (u x v)`.
pub fn cofactor(a: &Mat3) -> Mat3 {
    let mut out = [[C::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (i1, i2) = ((i + 1) % 3, (i + 2) % 3);
            let (j1, j2) = ((j + 1) % 3, (j + 2) % 3);
            out[i][j] = a[i1][j1] * a[i2][j2] - a[i1][j2] * a[i2][j1];
        }
    }
    out
}

pub fn inverse(a: &Mat3) -> Mat3 {
    let d = det(a);
    let c = cofactor(a);
    let mut out = [[C::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = c[j][i] / d;
        }
    }
    out
}

pub fn cross(u: &[C; 3], v: &[C; 3]) -> [C; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

/// Hermitian pairing `sum u_i conj(v_i)`.
pub fn herm(u: &[C; 3], v: &[C; 3]) -> C {
    u[0] * v[0].conj() + u[1] * v[1].conj() + u[2] * v[2].conj()
}

pub fn norm_sq(u: &[C; 3]) -> f64 {
    u[0].norm_sqr() + u[1].norm_sqr() + u[2].norm_sqr()
}

pub fn to_mat3<K: Coeff>(g: &GroupElement<K>) -> Mat3 {
    assert_eq!(g.dim(), 3, "expected a 3x3 group element");
    let mut out = [[C::zero(); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = g.get(i, j).to_complex();
        }
    }
    out
}

pub fn from_mat3(m: &Mat3) -> GroupElement<C> {
    let rows: Vec<Vec<C>> = m.iter().map(|r| r.to_vec()).collect();
    GroupElement::from_rows(&rows).expect("invertible matrix")
}
