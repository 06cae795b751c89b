//! Dual curves of plane curves and generic binary eliminants.
//!
//! The dual discriminant is obtained by restricting `F` to the symbolic line
//! `a·z = 0`, taking the discriminant of the resulting binary form, and
//! removing the extraneous power of the chart variable.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::poly::{bareiss_det, sylvester_matrix, AnyPoly, ExactPoly, HomogPoly, PolyFile, Space};

pub const MAX_DUAL_DEGREE: u32 = 4;
pub const MAX_GENERIC_DEGREE: u32 = 5;

/// A plane curve `F = 0` with exact coefficients.
#[derive(Clone, Debug)]
pub struct PlaneCurve {
    pub f: ExactPoly,
    pub certificate: Option<SmoothnessCertificate>,
}

impl PlaneCurve {
    pub fn new(f: ExactPoly) -> Result<Self> {
        if f.nvars() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, got: f.nvars() });
        }
        if f.space() != Space::Point {
            return Err(Error::Invalid("curve polynomial must be in point variables".into()));
        }
        if f.degree() < 2 || f.is_zero() {
            return Err(Error::Invalid("curve degree must be at least 2".into()));
        }
        Ok(PlaneCurve { f, certificate: None })
    }

    pub fn degree(&self) -> u32 {
        self.f.degree()
    }

    /// Runs [`smoothness_check`] and stores the certificate.
    pub fn certified(mut self) -> Result<Self> {
        let cert = smoothness_check(&self.f)?;
        if !cert.smooth {
            return Err(Error::NotSmooth(format!(
                "gradient vanishes near {:?}",
                cert.singular_points.first()
            )));
        }
        self.certificate = Some(cert);
        Ok(self)
    }

    pub fn fermat(d: u32) -> Self {
        let one = BigRational::one();
        let terms = (0..3).map(|i| {
            let mut e = vec![0; 3];
            e[i] = d;
            (one.clone(), e)
        });
        PlaneCurve::new(HomogPoly::from_terms(3, Space::Point, terms).unwrap()).unwrap()
    }

    /// `z0 z2 - z1^2`, the image of the conic Veronese map.
    pub fn veronese_conic() -> Self {
        let f = crate::poly::exact_poly(3, Space::Point, &[("1", &[1, 0, 1]), ("-1", &[0, 2, 0])]);
        PlaneCurve::new(f).unwrap()
    }
}

/// Evidence that `F` has no singular point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SmoothnessCertificate {
    pub smooth: bool,
    pub method: String,
    /// Smallest value of `|∇F(z)| / (‖F‖ |z|^{d-1})` reached by the local searches.
    pub min_normalized_gradient: f64,
    pub singular_tolerance: f64,
    pub smooth_tolerance: f64,
    pub starts: usize,
    /// Approximate singular points as `[re, im]` triples.
    pub singular_points: Vec<[[f64; 2]; 3]>,
}

const SINGULAR_TOL: f64 = 1e-10;
const SMOOTH_TOL: f64 = 1e-4;
const STARTS_PER_CHART: usize = 300;

/// Searches each affine chart `z_k = 1` for common zeros of the gradient by
/// damped Gauss–Newton from seeded starting points. A singular point is
/// reported when the normalized gradient drops below `1e-10`; the curve is
/// certified smooth when every search stays above `1e-4`; anything between is
/// inconclusive and returned as an error.
pub fn smoothness_check(f: &ExactPoly) -> Result<SmoothnessCertificate> {
    let d = f.degree();
    let ff = f.to_float();
    let norm = ff.fs_norm_sq().sqrt();
    let grad: Vec<_> = ff.gradient();
    let hess: Vec<Vec<_>> = grad.iter().map(|g| g.gradient()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let mut min_g = f64::INFINITY;
    let mut singular = Vec::new();
    let normalized = |z: &[Complex64; 3]| -> f64 {
        let zn: f64 = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let g: f64 = grad.iter().map(|p| p.eval_complex(z).norm_sqr()).sum::<f64>().sqrt();
        g / (norm * zn.powi(d as i32 - 1))
    };
    for k in 0..3 {
        let free: Vec<usize> = (0..3).filter(|&i| i != k).collect();
        for _ in 0..STARTS_PER_CHART {
            let mut x = [
                Complex64::new(rng.gen_range(-1.2..1.2), rng.gen_range(-1.2..1.2)),
                Complex64::new(rng.gen_range(-1.2..1.2), rng.gen_range(-1.2..1.2)),
            ];
            let point = |x: &[Complex64; 2]| {
                let mut z = [Complex64::zero(); 3];
                z[k] = Complex64::one();
                z[free[0]] = x[0];
                z[free[1]] = x[1];
                z
            };
            let mut best = normalized(&point(&x));
            for _ in 0..60 {
                let z = point(&x);
                let r: Vec<Complex64> = grad.iter().map(|p| p.eval_complex(&z)).collect();
                let jac: Vec<[Complex64; 2]> = (0..3)
                    .map(|i| [hess[i][free[0]].eval_complex(&z), hess[i][free[1]].eval_complex(&z)])
                    .collect();
                // Normal equations J^H J dx = -J^H r, with Levenberg damping.
                let mut a = [[Complex64::zero(); 2]; 2];
                let mut b = [Complex64::zero(); 2];
                for i in 0..3 {
                    for p in 0..2 {
                        b[p] -= jac[i][p].conj() * r[i];
                        for q in 0..2 {
                            a[p][q] += jac[i][p].conj() * jac[i][q];
                        }
                    }
                }
                let damp = 1e-12 * (a[0][0].re + a[1][1].re + 1e-300);
                a[0][0] += damp;
                a[1][1] += damp;
                let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
                if det.norm() == 0.0 {
                    break;
                }
                let dx = [
                    (b[0] * a[1][1] - a[0][1] * b[1]) / det,
                    (a[0][0] * b[1] - a[1][0] * b[0]) / det,
                ];
                let mut step = 1.0;
                let mut improved = false;
                for _ in 0..20 {
                    let cand = [x[0] + dx[0] * step, x[1] + dx[1] * step];
                    let v = normalized(&point(&cand));
                    if v < best {
                        best = v;
                        x = cand;
                        improved = true;
                        break;
                    }
                    step *= 0.5;
                }
                if !improved || best < SINGULAR_TOL * 1e-3 {
                    break;
                }
            }
            min_g = min_g.min(best);
            if best < SINGULAR_TOL {
                let z = point(&x);
                singular.push([
                    [z[0].re, z[0].im],
                    [z[1].re, z[1].im],
                    [z[2].re, z[2].im],
                ]);
            }
        }
    }
    let cert = SmoothnessCertificate {
        smooth: singular.is_empty(),
        method: format!(
            "damped Gauss-Newton on grad F = 0 in the three affine charts, {STARTS_PER_CHART} seeded starts each"
        ),
        min_normalized_gradient: min_g,
        singular_tolerance: SINGULAR_TOL,
        smooth_tolerance: SMOOTH_TOL,
        starts: 3 * STARTS_PER_CHART,
        singular_points: singular,
    };
    if cert.smooth && min_g < SMOOTH_TOL {
        return Err(Error::NotSmooth(format!(
            "inconclusive: normalized gradient reaches {min_g:.3e}"
        )));
    }
    Ok(cert)
}

/// Restriction of `F` to the line `a·z = 0`, solved for `z_k` and multiplied
/// by `a_k^d`. Returns the coefficients of `s^{d-i} u^i`, each a degree-`d`
/// polynomial in the dual variables `a`.
pub fn restrict_to_line(f: &ExactPoly, chart: usize) -> Result<Vec<ExactPoly>> {
    if chart > 2 {
        return Err(Error::Invalid(format!("chart {chart} out of range")));
    }
    let d = f.degree();
    let free: Vec<usize> = (0..3).filter(|&i| i != chart).collect();
    // Variables: a0, a1, a2, s, u.
    let v = |i: usize| HomogPoly::<BigRational>::var(5, i, Space::Dual);
    let mut forms = vec![HomogPoly::zero(5, 2, Space::Dual); 3];
    forms[free[0]] = v(chart).mul(&v(3));
    forms[free[1]] = v(chart).mul(&v(4));
    forms[chart] = v(free[0]).mul(&v(3)).add(&v(free[1]).mul(&v(4))).neg();
    let g = f.substitute_forms(&forms);
    let mut coeffs = vec![HomogPoly::zero(3, d, Space::Dual); d as usize + 1];
    for (m, c) in g.terms() {
        let i = m.0[4] as usize;
        let mut part = HomogPoly::zero(3, d, Space::Dual);
        part.add_term(crate::poly::Monomial(m.0[..3].to_vec()), c.clone());
        coeffs[i] = coeffs[i].add(&part);
    }
    Ok(coeffs)
}

/// `Res_t(g(t,1), g_t(t,1)) / lc(g)` for `g = sum coeffs[i] s^{d-i} u^i`.
pub fn binary_discriminant(coeffs: &[ExactPoly]) -> Result<ExactPoly> {
    let d = coeffs.len().saturating_sub(1);
    if d < 2 {
        return Err(Error::Invalid("binary discriminant needs degree >= 2".into()));
    }
    if coeffs[0].is_zero() {
        return Err(Error::InexactDivision);
    }
    let deriv: Vec<ExactPoly> = coeffs[..d]
        .iter()
        .enumerate()
        .map(|(i, c)| c.scale(&BigRational::from_integer(((d - i) as i64).into())))
        .collect();
    let m = sylvester_matrix(coeffs, &deriv)?;
    let res = bareiss_det(&m)?;
    res.exact_divide(&coeffs[0])
}

/// The dual curve's defining polynomial.
#[derive(Clone, Debug)]
pub struct DualDiscriminant {
    pub delta: ExactPoly,
    pub source_degree: u32,
    pub chart: usize,
    pub stripped: Vec<u32>,
}

/// Computes `Δ_F` with canonical scalar normalization. Requires a certified
/// curve of degree `2..=4`.
pub fn plane_dual_discriminant(curve: &PlaneCurve) -> Result<DualDiscriminant> {
    if curve.certificate.as_ref().map(|c| c.smooth) != Some(true) {
        return Err(Error::NotSmooth("smoothness not certified".into()));
    }
    plane_dual_discriminant_unchecked(&curve.f, &[2, 1, 0])
}

/// Same as [`plane_dual_discriminant`] without the smoothness precondition,
/// trying the given charts in order.
pub fn plane_dual_discriminant_unchecked(f: &ExactPoly, charts: &[usize]) -> Result<DualDiscriminant> {
    let d = f.degree();
    if !(2..=MAX_DUAL_DEGREE).contains(&d) {
        return Err(Error::CapExceeded { what: "dual discriminant", degree: d, min: 2, max: MAX_DUAL_DEGREE });
    }
    let mut last = Error::InexactDivision;
    for &k in charts {
        let g = restrict_to_line(f, k)?;
        let disc = match binary_discriminant(&g) {
            Ok(p) => p,
            Err(Error::InexactDivision) => {
                last = Error::InexactDivision;
                continue;
            }
            Err(e) => return Err(e),
        };
        if disc.is_zero() {
            last = Error::Invalid("discriminant vanishes identically (curve not reduced?)".into());
            continue;
        }
        let (stripped, mc) = disc.strip_monomial_content();
        let expected = d * (d - 1);
        if stripped.degree() != expected {
            return Err(Error::DegreeMismatch { expected, got: stripped.degree() });
        }
        return Ok(DualDiscriminant { delta: stripped.canonical(), source_degree: d, chart: k, stripped: mc.0 });
    }
    Err(last)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EliminantKind {
    Resultant,
    Discriminant,
}

/// Resultant or discriminant of generic binary forms of degree `form_degree`.
#[derive(Clone, Debug)]
pub struct GenericEliminant {
    pub poly: ExactPoly,
    pub kind: EliminantKind,
    pub form_degree: u32,
}

/// `Res(sum c_i s^{d-i} u^i, sum e_i s^{d-i} u^i)` in the variables
/// `c_0..c_d, e_0..e_d`.
pub fn generic_binary_resultant(d: u32) -> Result<GenericEliminant> {
    if !(1..=MAX_GENERIC_DEGREE).contains(&d) {
        return Err(Error::CapExceeded { what: "generic resultant", degree: d, min: 1, max: MAX_GENERIC_DEGREE });
    }
    let n = 2 * (d as usize + 1);
    let v = |i: usize| HomogPoly::<BigRational>::var(n, i, Space::Dual);
    let f: Vec<_> = (0..=d as usize).map(v).collect();
    let g: Vec<_> = (0..=d as usize).map(|i| v(d as usize + 1 + i)).collect();
    let m = sylvester_matrix(&f, &g)?;
    let poly = bareiss_det(&m)?.canonical();
    Ok(GenericEliminant { poly, kind: EliminantKind::Resultant, form_degree: d })
}

/// Discriminant of `sum a_i s^{d-i} u^i`, degree `2(d-1)` in `a`.
pub fn generic_binary_discriminant(d: u32) -> Result<GenericEliminant> {
    if !(2..=MAX_GENERIC_DEGREE).contains(&d) {
        return Err(Error::CapExceeded { what: "generic discriminant", degree: d, min: 2, max: MAX_GENERIC_DEGREE });
    }
    let n = d as usize + 1;
    let coeffs: Vec<_> = (0..n).map(|i| HomogPoly::<BigRational>::var(n, i, Space::Dual)).collect();
    let poly = binary_discriminant(&coeffs)?.canonical();
    Ok(GenericEliminant { poly, kind: EliminantKind::Discriminant, form_degree: d })
}

/// Content-addressed store for computed eliminants under `dir/<sha256>.json`.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub kind: String,
    pub degree: u32,
    pub input_sha256: String,
    pub created_unix: u64,
    pub poly: PolyFile,
    /// Chart and stripped monomial content, for dual discriminants.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<(usize, Vec<u32>)>,
}

impl Cache {
    pub fn new(dir: impl AsRef<Path>) -> Self {
        Cache { dir: dir.as_ref().to_path_buf() }
    }

    pub fn key(kind: &str, input: &str) -> String {
        let mut h = Sha256::new();
        h.update(kind.as_bytes());
        h.update(b"\n");
        h.update(input.as_bytes());
        hex::encode(h.finalize())
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Option<CacheEntry> {
        let s = std::fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str(&s).ok()
    }

    pub fn store(&self, entry: &CacheEntry) -> Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let path = self.path(&entry.input_sha256);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        std::fs::write(&tmp, serde_json::to_string_pretty(entry)?)?;
        std::fs::rename(tmp, path)?;
        Ok(())
    }

    fn get_or_compute(
        &self,
        kind: &str,
        degree: u32,
        input: &str,
        compute: impl FnOnce() -> Result<(ExactPoly, Option<(usize, Vec<u32>)>)>,
    ) -> Result<(ExactPoly, Option<(usize, Vec<u32>)>, bool)> {
        let key = Self::key(kind, input);
        if let Some(e) = self.load(&key) {
            if let Ok(AnyPoly::Exact(p)) = AnyPoly::from_file(&e.poly) {
                return Ok((p, e.chart, true));
            }
        }
        let (p, chart) = compute()?;
        let created_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        self.store(&CacheEntry {
            kind: kind.into(),
            degree,
            input_sha256: key,
            created_unix,
            poly: p.to_file(),
            chart: chart.clone(),
        })?;
        Ok((p, chart, false))
    }

    /// Cached [`plane_dual_discriminant`]; the flag reports a cache hit.
    pub fn dual_discriminant(&self, curve: &PlaneCurve) -> Result<(DualDiscriminant, bool)> {
        let input = serde_json::to_string(&curve.f.canonical().to_file())?;
        let (delta, meta, hit) = self.get_or_compute("dual-discriminant", curve.degree(), &input, || {
            let dd = plane_dual_discriminant(curve)?;
            Ok((dd.delta, Some((dd.chart, dd.stripped))))
        })?;
        let (chart, stripped) = meta.unwrap_or((2, vec![]));
        Ok((DualDiscriminant { delta, source_degree: curve.degree(), chart, stripped }, hit))
    }

    pub fn generic(&self, kind: EliminantKind, d: u32) -> Result<(GenericEliminant, bool)> {
        let name = match kind {
            EliminantKind::Resultant => "generic-resultant",
            EliminantKind::Discriminant => "generic-discriminant",
        };
        let (poly, _, hit) = self.get_or_compute(name, d, &d.to_string(), || match kind {
            EliminantKind::Resultant => generic_binary_resultant(d).map(|g| (g.poly, None)),
            EliminantKind::Discriminant => generic_binary_discriminant(d).map(|g| (g.poly, None)),
        })?;
        Ok((GenericEliminant { poly, kind, form_degree: d }, hit))
    }
}
