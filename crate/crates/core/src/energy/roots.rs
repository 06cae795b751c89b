//! Roots of small complex univariate polynomials.

use nalgebra::DMatrix;
use num_complex::Complex64;

const MAX_ITERS: usize = 300;

/// Roots of `sum coeffs[j] w^j` (lowest degree first, nonzero leading
/// coefficient). Aberth–Ehrlich iteration, Newton polishing, and a
/// companion-matrix eigenvalue fallback when the iteration stalls.
pub fn poly_roots(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    if lead.norm() == 0.0 || !coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        return None;
    }
    match d {
        0 => return Some(vec![]),
        1 => return Some(vec![-coeffs[0] / lead]),
        2 => return Some(quadratic(coeffs)),
        _ => {}
    }
    let mut roots = aberth(coeffs).or_else(|| companion(coeffs))?;
    for r in roots.iter_mut() {
        polish(coeffs, r);
    }
    Some(roots)
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn quadratic(c: &[Complex64]) -> Vec<Complex64> {
    let (a, b, cc) = (c[2], c[1], c[0]);
    let disc = (b * b - 4.0 * a * cc).sqrt();
    // Pick the sign that avoids cancellation.
    let q = if (b.conj() * disc).re >= 0.0 { -0.5 * (b + disc) } else { -0.5 * (b - disc) };
    if q.norm() == 0.0 {
        return vec![Complex64::new(0.0, 0.0); 2];
    }
    vec![q / a, cc / q]
}

fn aberth(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    let radius = (0..d)
        .map(|j| (coeffs[j] / lead).norm().powf(1.0 / (d - j) as f64))
        .fold(0.0_f64, f64::max)
        .max(1e-12);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4))
        .collect();
    aberth_from(coeffs, &mut z).then_some(z)
}

/// Aberth–Ehrlich iteration from the given starting points; true on convergence.
pub fn aberth_from(coeffs: &[Complex64], z: &mut [Complex64]) -> bool {
    let d = z.len();
    let mut done = vec![false; d];
    for _ in 0..MAX_ITERS {
        for k in 0..d {
            if done[k] {
                continue;
            }
            let (p, dp) = horner(coeffs, z[k]);
            if p.norm() == 0.0 {
                done[k] = true;
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != k {
                    s += 1.0 / (z[k] - z[j]);
                }
            }
            let step = ratio / (1.0 - ratio * s);
            if !step.re.is_finite() || !step.im.is_finite() {
                return false;
            }
            z[k] -= step;
            if step.norm() <= 1e-14 * z[k].norm().max(1e-300) {
                done[k] = true;
            }
        }
        if done.iter().all(|&x| x) {
            return true;
        }
    }
    false
}

fn companion(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    companion_eigenvalues(coeffs).or_else(|| {
        // QR can stall on cyclic companion matrices such as that of w^d + 1;
        // an off-axis translation breaks the symmetry.
        let s = Complex64::new(0.3, 0.2);
        let shifted = translate(coeffs, s);
        companion_eigenvalues(&shifted).map(|r| r.into_iter().map(|z| z + s).collect())
    })
}

fn companion_eigenvalues(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -coeffs[i] / lead;
    }
    let ev = m.try_schur(f64::EPSILON, 1000)?.eigenvalues()?;
    Some(ev.iter().copied().collect())
}

/// Coefficients of `p(u + s)`, by repeated synthetic division.
fn translate(coeffs: &[Complex64], s: Complex64) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let next = c[j + 1];
            c[j] += s * next;
        }
    }
    c
}

fn polish(coeffs: &[Complex64], r: &mut Complex64) {
    for _ in 0..3 {
        let (p, dp) = horner(coeffs, *r);
        if dp.norm() == 0.0 {
            return;
        }
        let step = p / dp;
        let cand = *r - step;
        if horner(coeffs, cand).0.norm() < p.norm() {
            *r = cand;
        } else {
            return;
        }
    }
}
