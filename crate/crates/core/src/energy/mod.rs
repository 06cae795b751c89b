//! Energy functionals of a smooth plane curve restricted to Bergman metrics.
//!
//! All integrals are over the curve `X` with the Fubini–Study form `ω` and
//! `V = ∫_X ω = d`. For `σ ∈ SL(3, C)` the Bergman potential is
//! `φ_σ = log(|σz|^2/|z|^2)` and `ω_σ = ω + dd^c φ_σ`; `u = log(ω_σ/ω)`.
//!
//! - `J = (1/2V) ∫ dφ ∧ d^c φ`, `I = (1/V) ∫ φ (ω - ω_σ)`,
//!   `F⁰ = J - (1/V) ∫ φ ω`
//! - `ν = (1/V) ∫ u ω_σ - (3 - d)(I - J) + (1/V) ∫ ψ_F (ω_σ - ω)`
//! - `E₁ = (1/V) ∫ u (Ric ω + Ric ω_σ)`, evaluated through
//!   `(1/V)[2 ∫ u Ric ω + ∫ |∇u|^2 ω]`.
//!
//! Derivatives of `u` and the Ricci densities are analytic: they only need
//! the second implicit derivative of the fiber coordinate.

pub mod linalg;
pub mod pointwise;
pub mod roots;
pub mod sampler;
pub mod verify;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use linalg::{Mat3, C};
pub use pointwise::{
    bergman_potential, dual_bergman_potential, fs_density, fs_density_ratio, gauss_map, psi_f, Frame, Local,
};
pub use sampler::{AdaptiveOptions, CurveSample, Integral, QuadratureGrid};

use crate::error::{Error, Result};
use linalg::{mat_vec, Identity};
use pointwise::psi_from_gradient;

/// Energies of `φ_σ` for one `σ`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnergyValues {
    pub j: f64,
    pub i: f64,
    pub f0: f64,
    pub nu: f64,
    /// Liouville energy from the integration-by-parts form.
    pub e1: f64,
    /// Liouville energy from its defining integral `∫ u (Ric ω + Ric ω_σ)/V`.
    pub e1_direct: f64,
    /// `(1/V) ∫ ψ_F (ω_σ - ω)`.
    pub psi_bar: f64,
    /// `(1/V) ∫ φ ω`.
    pub phi_mean: f64,
    /// `∫ ω` and `∫ ω_σ`, both `d` in exact arithmetic.
    pub volume: f64,
    pub volume_sigma: f64,
    /// Combined quadrature error estimate for the energies.
    pub grid_error: f64,
    pub leaves: usize,
    pub excluded_area: f64,
}

const NCOMP: usize = 12;

/// Per-sample integrand shared by [`energies`] and the tests.
pub fn energy_integrand(grid: &QuadratureGrid, e: &Frame, s_frame: &Frame, s: &CurveSample, out: &mut [f64]) {
    let le = Local::eval(e, s);
    let ls = Local::eval(s_frame, s);
    let phi = (ls.a / le.a).ln();
    let phix = ls.dlog_a - le.dlog_a;
    let u = (ls.rho / le.rho).ln();
    let ux = (ls.dlog_b - 2.0 * ls.dlog_a) - (le.dlog_b - 2.0 * le.dlog_a);
    let z = grid.z_lift(s);
    let psi = psi_from_gradient(&grid.gradient_at(&z), &z, grid.degree() as u32);
    let ric_e = le.ricci();
    let ric_s = ls.ricci();
    out[0] = le.rho;
    out[1] = ls.rho;
    out[2] = phi * le.rho;
    out[3] = phi * ls.rho;
    out[4] = phix.norm_sqr() / PI;
    out[5] = u * ls.rho;
    out[6] = psi * (ls.rho - le.rho);
    out[7] = u * ric_e;
    out[8] = ux.norm_sqr() / PI;
    out[9] = u * ric_s;
    out[10] = ric_e;
    out[11] = ric_s;
}

/// Evaluates the energy functionals of `φ_σ` on the grid's curve.
pub fn energies(grid: &QuadratureGrid, sigma: &Mat3) -> Result<EnergyValues> {
    let e = Frame::new(*grid.frame());
    let sf = Frame::for_sigma(grid, sigma);
    let int = grid.integrate(NCOMP, |s, out| energy_integrand(grid, &e, &sf, s, out));
    if int.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonConvergence("non-finite energy integrand".into()));
    }
    let c = &int.values;
    let err = &int.errors;
    let d = grid.degree() as f64;
    let v = d;
    let i = (c[2] - c[3]) / v;
    let j = c[4] / (2.0 * v);
    let phi_mean = c[2] / v;
    let f0 = j - phi_mean;
    let psi_bar = c[6] / v;
    let nu = c[5] / v - (3.0 - d) * (i - j) + psi_bar;
    let e1 = (2.0 * c[7] + c[8]) / v;
    let e1_direct = (c[7] + c[9]) / v;
    let quad = err.iter().sum::<f64>() / v;
    let grid_error = quad + (c[0] - d).abs() + (c[1] - d).abs();
    Ok(EnergyValues {
        j,
        i,
        f0,
        nu,
        e1,
        e1_direct,
        psi_bar,
        phi_mean,
        volume: c[0],
        volume_sigma: c[1],
        grid_error,
        leaves: int.leaves,
        excluded_area: int.excluded_area,
    })
}

/// Scalar integral with its error estimate.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Scalar {
    pub value: f64,
    pub error: f64,
}

/// Integrates a scalar density given as a function of the sample.
pub fn integrate_scalar<F>(grid: &QuadratureGrid, density: F) -> Scalar
where
    F: Fn(&CurveSample) -> f64 + Sync,
{
    let r = grid.integrate(1, |s, out| out[0] = density(s));
    Scalar { value: r.values[0], error: r.errors[0] }
}

/// `∫_X ω`, which should equal `d`.
pub fn volume(grid: &QuadratureGrid) -> Scalar {
    let e = Frame::new(*grid.frame());
    integrate_scalar(grid, |s| Local::eval(&e, s).rho)
}

/// `∫_X Ric(ω)`, which should equal `d(3 - d)`.
pub fn ricci_integral(grid: &QuadratureGrid) -> Scalar {
    let e = Frame::new(*grid.frame());
    integrate_scalar(grid, |s| Local::eval(&e, s).ricci())
}

/// `∫_X ρ_F^* ω̂`, the degree of the dual curve `d(d - 1)`. The density is
/// the Fubini–Study density of `x ↦ ∇F(Z(x))`, with derivative
/// `Hess F(Z) Z'`.
pub fn dual_degree_check(grid: &QuadratureGrid) -> Scalar {
    let hess: Vec<Vec<_>> = grid.gradient_polys().iter().map(|g| g.gradient()).collect();
    integrate_scalar(grid, |s| {
        let z = grid.z_lift(s);
        let zp = grid.z_prime(s);
        let g = grid.gradient_at(&z);
        let mut gp = [C::new(0.0, 0.0); 3];
        for i in 0..3 {
            for j in 0..3 {
                gp[i] += hess[i][j].eval_complex(&z) * zp[j];
            }
        }
        fs_density(&g, &gp)
    })
}

/// `Ψ_B([f]) = ∫_{X_f} (ψ_f - log ‖f‖^2) ω` on a grid built for `f`.
pub fn psi_b(grid: &QuadratureGrid) -> Scalar {
    let e = Frame::new(*grid.frame());
    let log_norm = grid.polynomial().fs_norm_sq().ln();
    let d = grid.degree() as u32;
    integrate_scalar(grid, |s| {
        let z = grid.z_lift(s);
        let psi = psi_from_gradient(&grid.gradient_at(&z), &z, d);
        (psi - log_norm) * Local::eval(&e, s).rho
    })
}

/// `Ψ_B([σ·F])` computed on the grid of `F` by pulling back along `σ`:
/// `∇(σ·F)(σz) = σ^{-T} ∇F(z)`, so the moved polynomial is never evaluated
/// and nearly degenerate images keep full precision.
pub fn psi_b_pullback(grid: &QuadratureGrid, sigma: &Mat3) -> Result<Scalar> {
    let g = linalg::from_mat3(sigma);
    let log_norm = g.act_on_point_poly(grid.polynomial())?.fs_norm_sq().ln();
    let inv_t = linalg::transpose(&linalg::inverse(sigma));
    let frame = Frame::for_sigma(grid, sigma);
    let d = grid.degree() as u32;
    Ok(integrate_scalar(grid, |s| {
        let z = grid.z_lift(s);
        let grad = mat_vec(&inv_t, &grid.gradient_at(&z));
        (psi_from_gradient(&grad, &mat_vec(sigma, &z), d) - log_norm) * Local::eval(&frame, s).rho
    }))
}

pub fn identity() -> Mat3 {
    Mat3::identity()
}
