//! Pointwise quantities on the curve: Bergman potentials, the Gauss map,
//! `ψ_F` and Fubini–Study densities.

use std::f64::consts::PI;

use super::linalg::{cofactor, cross, det, herm, inverse, mat_mul, mat_vec, norm_sq, transpose, Mat3, C};
use super::sampler::{CurveSample, QuadratureGrid};
use crate::error::{Error, Result};
use crate::poly::FloatPoly;

/// `φ_σ(z) = log(|σz|^2 / |z|^2)`.
pub fn bergman_potential(sigma: &Mat3, z: &[C; 3]) -> f64 {
    (norm_sq(&mat_vec(sigma, z)) / norm_sq(z)).ln()
}

/// `φ̂_σ(a) = log(|σ·a|^2 / |a|^2)` with the dual action `σ·a = σ^{-T} a`.
pub fn dual_bergman_potential(sigma: &Mat3, a: &[C; 3]) -> f64 {
    let sa = mat_vec(&transpose(&inverse(sigma)), a);
    (norm_sq(&sa) / norm_sq(a)).ln()
}

/// `ρ_F(z) = ∇F(z)`, a lift of the tangent line at `z`.
pub fn gauss_map(f: &FloatPoly, z: &[C; 3]) -> Result<[C; 3]> {
    let g = [
        f.partial(0).eval_complex(z),
        f.partial(1).eval_complex(z),
        f.partial(2).eval_complex(z),
    ];
    if norm_sq(&g) == 0.0 {
        return Err(Error::NotSmooth("gradient vanishes at sample".into()));
    }
    Ok(g)
}

/// `ψ_F(z) = log(|∇F(z)|^2 / |z|^{2(d-1)})`.
pub fn psi_f(f: &FloatPoly, z: &[C; 3]) -> Result<f64> {
    let g = gauss_map(f, z)?;
    Ok(psi_from_gradient(&g, z, f.degree()))
}

pub(crate) fn psi_from_gradient(g: &[C; 3], z: &[C; 3], d: u32) -> f64 {
    norm_sq(g).ln() - (d as f64 - 1.0) * norm_sq(z).ln()
}

/// Fubini–Study density of the holomorphic curve `x ↦ v(x)` with respect to
/// `dA_x`, from a point and its derivative:
/// `(|v|^2 |v'|^2 - |<v', v>|^2) / (π |v|^4)`.
pub fn fs_density(v: &[C; 3], vp: &[C; 3]) -> f64 {
    let a = norm_sq(v);
    let g = a * norm_sq(vp) - herm(vp, v).norm_sqr();
    g / (PI * a * a)
}

/// `ω_σ / ω` at a sample, using the Gram-determinant form of the density.
pub fn fs_density_ratio(grid: &QuadratureGrid, sigma: &Mat3, s: &CurveSample) -> f64 {
    let z = grid.z_lift(s);
    let zp = grid.z_prime(s);
    fs_density(&mat_vec(sigma, &z), &mat_vec(sigma, &zp)) / fs_density(&z, &zp)
}

/// Precomputed data for evaluating densities of `x ↦ A·lift(x)`.
#[derive(Clone, Copy, Debug)]
pub struct Frame {
    pub a: Mat3,
    pub cof: Mat3,
    pub det_abs2: f64,
}

impl Frame {
    pub fn new(a: Mat3) -> Self {
        Frame { a, cof: cofactor(&a), det_abs2: det(&a).norm_sqr() }
    }

    /// Frame for `σ` acting after the grid's coordinate frame.
    pub fn for_sigma(grid: &QuadratureGrid, sigma: &Mat3) -> Self {
        Frame::new(mat_mul(sigma, grid.frame()))
    }
}

/// Local quantities along the curve for one frame. Cross products are taken
/// before the matrix is applied, so nearly parallel images of `Z` and `Z'`
/// do not cancel.
#[derive(Clone, Copy, Debug)]
pub struct Local {
    /// `|AZ|^2`
    pub a: f64,
    /// `|cof(A)(Z x Z')|^2`, proportional to `|σ^{-T}∇F|^2`.
    pub b: f64,
    /// `∂_x log |AZ|^2`
    pub dlog_a: C,
    /// `∂_x log b`
    pub dlog_b: C,
    /// Fubini–Study density of `AZ`.
    pub rho: f64,
    /// Density of the dual curve pulled back through the Gauss map.
    pub rho_hat: f64,
}

impl Local {
    pub fn eval(frame: &Frame, s: &CurveSample) -> Self {
        let z = s.frame_lift();
        let zp = s.frame_lift_prime();
        let zpp = s.frame_lift_second();
        let v = mat_vec(&frame.a, &z);
        let vp = mat_vec(&frame.a, &zp);
        let n = cross(&z, &zp);
        let np = cross(&z, &zpp);
        let h = mat_vec(&frame.cof, &n);
        let hp = mat_vec(&frame.cof, &np);
        let a = norm_sq(&v);
        let b = norm_sq(&h);
        // det(Z, Z', Z'') in frame coordinates is ±w''.
        let dzz = frame.det_abs2 * s.wpp.norm_sqr();
        Local {
            a,
            b,
            dlog_a: herm(&vp, &v) / a,
            dlog_b: herm(&hp, &h) / b,
            rho: b / (PI * a * a),
            rho_hat: dzz * a / (PI * b * b),
        }
    }

    /// Ricci form density `2ρ - ρ̂` of the induced metric.
    pub fn ricci(&self) -> f64 {
        2.0 * self.rho - self.rho_hat
    }
}
