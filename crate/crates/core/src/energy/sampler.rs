//! Quadrature on a smooth plane curve seen as a degree-`d` cover of the
//! projective line.
//!
//! After a coordinate frame `M` is fixed so that `[0:0:1]` is off the curve,
//! points are lifted as `Z = M·(1, x, w)` over the disc `|x| <= 1` (chart 0)
//! and `Z = M·(y, 1, w)` over `|y| <= 1` (chart 1), where `w` runs over the
//! `d` roots of the fiber polynomial. Each chart is cut into polar cells with
//! tensor Gauss–Legendre nodes. Integration is globally adaptive: a cell's
//! error is the difference between its own rule and the sum over its four
//! children, and the worst cells are split until the total falls below the
//! tolerance. This handles the integrable `1/|x - b|` behaviour of the fiber
//! densities at branch points without cutting discs out of the domain.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::linalg::{mat_vec, Identity, Mat3, C};
use super::roots::poly_roots;
use crate::elimination::PlaneCurve;
use crate::error::{Error, Result};
use crate::poly::{FloatPoly, GroupElement};

/// Nodes per direction in each cell.
pub const GAUSS_ORDER: usize = 5;
const MAX_FRAME_ATTEMPTS: usize = 10;
/// Leading fiber coefficient must be at least this fraction of the largest one.
const FRAME_LEAD_RATIO: f64 = 0.05;

/// One point of the curve over a base node.
#[derive(Clone, Copy, Debug)]
pub struct CurveSample {
    pub chart: u8,
    /// Base coordinate (`x` in chart 0, `y` in chart 1).
    pub x: C,
    pub w: C,
    pub wp: C,
    pub wpp: C,
    /// Quadrature weight against the Lebesgue area element of the base chart.
    pub weight: f64,
}

impl CurveSample {
    /// Lift in frame coordinates, before applying `M`.
    pub fn frame_lift(&self) -> [C; 3] {
        match self.chart {
            0 => [C::one(), self.x, self.w],
            _ => [self.x, C::one(), self.w],
        }
    }

    pub fn frame_lift_prime(&self) -> [C; 3] {
        match self.chart {
            0 => [C::zero(), C::one(), self.wp],
            _ => [C::one(), C::zero(), self.wp],
        }
    }

    pub fn frame_lift_second(&self) -> [C; 3] {
        [C::zero(), C::zero(), self.wpp]
    }
}

/// Cell of the dyadic polar mesh.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellKey {
    pub chart: u8,
    pub level: u8,
    pub ir: u64,
    pub it: u64,
}

#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    f: FloatPoly,
    grad: Vec<FloatPoly>,
    degree: usize,
    frame: Mat3,
    /// `fiber[chart][j]` holds the coefficients (ascending in the base
    /// coordinate) of `w^j` in the fiber polynomial.
    fiber: [Vec<Vec<C>>; 2],
    n_r: u32,
    n_t: u32,
    resolution: u32,
    seed: u64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    pub options: AdaptiveOptions,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct AdaptiveOptions {
    /// Target for the summed, magnitude-scaled error estimate.
    pub tolerance: f64,
    pub max_leaves: usize,
    pub max_depth: u8,
    pub batch: usize,
}

/// Result of [`QuadratureGrid::integrate`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Integral {
    pub values: Vec<f64>,
    /// Per-component sum over leaves of |children - parent|.
    pub errors: Vec<f64>,
    /// Coordinate area of cells that hit the depth limit unresolved.
    pub excluded_area: f64,
    pub leaves: usize,
    pub dropped_samples: usize,
    pub converged: bool,
}

impl QuadratureGrid {
    /// Builds the sampler for a smooth curve. `resolution` sets the base mesh
    /// (about `resolution/16` angular panels per chart) and the leaf budget.
    pub fn build(curve: &PlaneCurve, resolution: u32, seed: u64) -> Result<Self> {
        Self::build_float(&curve.f.to_float(), resolution, seed)
    }

    pub fn build_float(f: &FloatPoly, resolution: u32, seed: u64) -> Result<Self> {
        if f.nvars() != 3 || f.degree() < 2 {
            return Err(Error::Invalid("sampler needs a plane curve of degree >= 2".into()));
        }
        let resolution = resolution.max(16);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // A seeded generic frame keeps branch points away from coordinate
        // points, where diagonal families concentrate the metric.
        let mut frame = Mat3::identity();
        let mut found = None;
        for _ in 0..MAX_FRAME_ATTEMPTS {
            frame = rational_rotation(&mut rng);
            if let Some(fiber) = fiber_polys(f, &frame) {
                found = Some(fiber);
                break;
            }
        }
        let fiber = found.ok_or_else(|| {
            Error::NonConvergence("projection degenerate after 10 coordinate changes".into())
        })?;
        let (nodes, weights) = gauss_legendre(GAUSS_ORDER);
        let grad = f.gradient();
        Ok(QuadratureGrid {
            f: f.clone(),
            grad,
            degree: f.degree() as usize,
            frame,
            fiber,
            n_r: (resolution / 64).max(2),
            n_t: (resolution / 16).max(8),
            resolution,
            seed,
            nodes,
            weights,
            options: AdaptiveOptions {
                tolerance: 1e-7,
                max_leaves: 64 * resolution as usize,
                max_depth: 40,
                batch: 64,
            },
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn polynomial(&self) -> &FloatPoly {
        &self.f
    }

    pub fn gradient_polys(&self) -> &[FloatPoly] {
        &self.grad
    }

    /// Coordinate frame `M` with `Z = M·(frame lift)`.
    pub fn frame(&self) -> &Mat3 {
        &self.frame
    }

    pub fn z_lift(&self, s: &CurveSample) -> [C; 3] {
        mat_vec(&self.frame, &s.frame_lift())
    }

    pub fn z_prime(&self, s: &CurveSample) -> [C; 3] {
        mat_vec(&self.frame, &s.frame_lift_prime())
    }

    pub fn z_second(&self, s: &CurveSample) -> [C; 3] {
        mat_vec(&self.frame, &s.frame_lift_second())
    }

    pub fn base_cells(&self) -> Vec<CellKey> {
        let mut out = Vec::new();
        for chart in 0..2u8 {
            for ir in 0..self.n_r as u64 {
                for it in 0..self.n_t as u64 {
                    out.push(CellKey { chart, level: 0, ir, it });
                }
            }
        }
        out
    }

    fn bounds(&self, k: &CellKey) -> (f64, f64, f64, f64) {
        let sr = (self.n_r as u64) << k.level;
        let st = (self.n_t as u64) << k.level;
        let r0 = k.ir as f64 / sr as f64;
        let r1 = (k.ir + 1) as f64 / sr as f64;
        let t0 = 2.0 * PI * k.it as f64 / st as f64;
        let t1 = 2.0 * PI * (k.it + 1) as f64 / st as f64;
        (r0, r1, t0, t1)
    }

    pub fn cell_area(&self, k: &CellKey) -> f64 {
        let (r0, r1, t0, t1) = self.bounds(k);
        0.5 * (r1 * r1 - r0 * r0) * (t1 - t0)
    }

    fn children(k: &CellKey) -> [CellKey; 4] {
        let l = k.level + 1;
        [
            CellKey { chart: k.chart, level: l, ir: 2 * k.ir, it: 2 * k.it },
            CellKey { chart: k.chart, level: l, ir: 2 * k.ir, it: 2 * k.it + 1 },
            CellKey { chart: k.chart, level: l, ir: 2 * k.ir + 1, it: 2 * k.it },
            CellKey { chart: k.chart, level: l, ir: 2 * k.ir + 1, it: 2 * k.it + 1 },
        ]
    }

    /// Fiber over one base point, with first and second implicit derivatives.
    pub fn fiber_samples(&self, chart: u8, x: C, weight: f64, out: &mut Vec<CurveSample>) -> bool {
        let polys = &self.fiber[chart as usize];
        let d = self.degree;
        let mut c = vec![C::zero(); d + 1];
        let mut cx = vec![C::zero(); d + 1];
        let mut cxx = vec![C::zero(); d + 1];
        for j in 0..=d {
            let (v, v1, v2) = horner2(&polys[j], x);
            c[j] = v;
            cx[j] = v1;
            cxx[j] = v2;
        }
        let roots = match poly_roots(&c) {
            Some(r) => r,
            None => return false,
        };
        for w in roots {
            // G = sum c_j w^j; derivatives in x and w.
            let mut gw = C::zero();
            let mut gww = C::zero();
            let mut gx = C::zero();
            let mut gxw = C::zero();
            let mut gxx = C::zero();
            let mut wp_pow = C::one(); // w^j
            for j in 0..=d {
                gx += cx[j] * wp_pow;
                gxx += cxx[j] * wp_pow;
                wp_pow *= w;
            }
            let mut wj = C::one(); // w^{j-1}
            for j in 1..=d {
                gw += c[j] * wj * j as f64;
                gxw += cx[j] * wj * j as f64;
                wj *= w;
            }
            let mut wj2 = C::one(); // w^{j-2}
            for j in 2..=d {
                gww += c[j] * wj2 * (j * (j - 1)) as f64;
                wj2 *= w;
            }
            if gw.norm() == 0.0 {
                return false;
            }
            let wp = -gx / gw;
            let wpp = -(gxx + 2.0 * gxw * wp + gww * wp * wp) / gw;
            if !(wp.re.is_finite() && wp.im.is_finite() && wpp.re.is_finite() && wpp.im.is_finite()) {
                return false;
            }
            out.push(CurveSample { chart, x, w, wp, wpp, weight });
        }
        true
    }

    /// All samples of a cell; the count of base points whose fiber failed
    /// is returned alongside.
    pub fn cell_samples(&self, k: &CellKey) -> (Vec<CurveSample>, usize) {
        let (r0, r1, t0, t1) = self.bounds(k);
        let hr = 0.5 * (r1 - r0);
        let ht = 0.5 * (t1 - t0);
        let mut out = Vec::with_capacity(self.nodes.len().pow(2) * self.degree);
        let mut dropped = 0;
        for (a, wa) in self.nodes.iter().zip(&self.weights) {
            let r = r0 + hr * (a + 1.0);
            for (b, wb) in self.nodes.iter().zip(&self.weights) {
                let t = t0 + ht * (b + 1.0);
                let x = C::from_polar(r, t);
                let weight = wa * wb * hr * ht * r;
                if !self.fiber_samples(k.chart, x, weight, &mut out) {
                    dropped += 1;
                }
            }
        }
        (out, dropped)
    }

    /// Non-adaptive rule on the base mesh, for diagnostics.
    pub fn base_samples(&self) -> Vec<CurveSample> {
        let mut out = Vec::new();
        for k in self.base_cells() {
            out.extend(self.cell_samples(&k).0);
        }
        out
    }

    /// Integrates a vector-valued density (against the base area element,
    /// summed over the fiber) to the grid's tolerance.
    pub fn integrate<F>(&self, ncomp: usize, density: F) -> Integral
    where
        F: Fn(&CurveSample, &mut [f64]) + Sync,
    {
        self.integrate_with(ncomp, &density, self.options)
    }

    pub fn integrate_with<F>(&self, ncomp: usize, density: &F, opts: AdaptiveOptions) -> Integral
    where
        F: Fn(&CurveSample, &mut [f64]) + Sync,
    {
        let eval = |k: &CellKey| -> (Vec<f64>, usize) {
            let (samples, dropped) = self.cell_samples(k);
            let mut acc = vec![0.0; ncomp];
            let mut tmp = vec![0.0; ncomp];
            for s in &samples {
                tmp.iter_mut().for_each(|v| *v = 0.0);
                density(s, &mut tmp);
                for (a, t) in acc.iter_mut().zip(&tmp) {
                    *a += s.weight * t;
                }
            }
            (acc, dropped)
        };
        let make_leaf = |key: CellKey, coarse: Vec<f64>| -> (Leaf, usize) {
            let kids = Self::children(&key);
            let mut fine = vec![0.0; ncomp];
            let mut child_vals = Vec::with_capacity(4);
            let mut dropped = 0;
            for c in &kids {
                let (v, dr) = eval(c);
                dropped += dr;
                for (f, x) in fine.iter_mut().zip(&v) {
                    *f += x;
                }
                child_vals.push(v);
            }
            let diff: Vec<f64> = fine.iter().zip(&coarse).map(|(f, c)| (f - c).abs()).collect();
            (Leaf { key, fine, diff, child_vals, err: 0.0 }, dropped)
        };

        let base = self.base_cells();
        let first: Vec<(Leaf, usize)> = base
            .par_iter()
            .map(|k| {
                let (c, d0) = eval(k);
                let (leaf, d1) = make_leaf(*k, c);
                (leaf, d0 + d1)
            })
            .collect();
        let mut dropped = 0;
        let mut totals = vec![0.0; ncomp];
        for (l, d) in &first {
            dropped += d;
            for (t, v) in totals.iter_mut().zip(&l.fine) {
                *t += v;
            }
        }
        let scales: Vec<f64> = totals.iter().map(|t| t.abs().max(1.0)).collect();
        let score = |l: &Leaf| l.diff.iter().zip(&scales).map(|(d, s)| d / s).sum::<f64>();

        let mut heap = BinaryHeap::new();
        let mut done: Vec<Leaf> = Vec::new();
        let mut total_err = 0.0;
        for (mut l, _) in first {
            l.err = score(&l);
            total_err += l.err;
            heap.push(l);
        }
        let mut excluded_area = 0.0;
        let mut nleaves = heap.len();
        while total_err > opts.tolerance && nleaves < opts.max_leaves {
            let mut batch = Vec::with_capacity(opts.batch);
            while batch.len() < opts.batch {
                match heap.pop() {
                    Some(l) if l.key.level >= opts.max_depth => {
                        excluded_area += self.cell_area(&l.key);
                        done.push(l);
                    }
                    Some(l) => batch.push(l),
                    None => break,
                }
            }
            if batch.is_empty() {
                break;
            }
            let split: Vec<(Vec<Leaf>, usize)> = batch
                .par_iter()
                .map(|l| {
                    let kids = Self::children(&l.key);
                    let mut out = Vec::with_capacity(4);
                    let mut dr = 0;
                    for (c, v) in kids.iter().zip(&l.child_vals) {
                        let (leaf, d) = make_leaf(*c, v.clone());
                        dr += d;
                        out.push(leaf);
                    }
                    (out, dr)
                })
                .collect();
            for l in &batch {
                total_err -= l.err;
            }
            nleaves -= batch.len();
            for (kids, dr) in split {
                dropped += dr;
                for mut k in kids {
                    k.err = score(&k);
                    total_err += k.err;
                    nleaves += 1;
                    heap.push(k);
                }
            }
            total_err = total_err.max(0.0);
        }
        let converged = total_err <= opts.tolerance;
        done.extend(heap.into_vec());
        done.sort_by_key(|l| l.key);
        let values = pairwise_sum(&done, ncomp, |l| &l.fine);
        let errors = pairwise_sum(&done, ncomp, |l| &l.diff);
        Integral { values, errors, excluded_area, leaves: done.len(), dropped_samples: dropped, converged }
    }

    /// `|∇F(Z)|^2` at a sample.
    pub fn grad_norm_sq(&self, z: &[C; 3]) -> f64 {
        self.grad.iter().map(|g| g.eval_complex(z).norm_sqr()).sum()
    }

    pub fn gradient_at(&self, z: &[C; 3]) -> [C; 3] {
        [self.grad[0].eval_complex(z), self.grad[1].eval_complex(z), self.grad[2].eval_complex(z)]
    }
}

struct Leaf {
    key: CellKey,
    fine: Vec<f64>,
    diff: Vec<f64>,
    child_vals: Vec<Vec<f64>>,
    err: f64,
}

impl PartialEq for Leaf {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Leaf {}
impl PartialOrd for Leaf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Leaf {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err).then_with(|| other.key.cmp(&self.key))
    }
}

fn pairwise_sum<T>(items: &[T], ncomp: usize, get: impl Fn(&T) -> &Vec<f64> + Copy) -> Vec<f64> {
    if items.len() <= 8 {
        let mut acc = vec![0.0; ncomp];
        for it in items {
            for (a, v) in acc.iter_mut().zip(get(it)) {
                *a += v;
            }
        }
        return acc;
    }
    let (l, r) = items.split_at(items.len() / 2);
    let a = pairwise_sum(l, ncomp, get);
    let b = pairwise_sum(r, ncomp, get);
    a.iter().zip(&b).map(|(x, y)| x + y).collect()
}

/// Value, first and second derivative of an ascending coefficient vector.
fn horner2(p: &[C], x: C) -> (C, C, C) {
    let mut v = C::zero();
    let mut d1 = C::zero();
    let mut d2 = C::zero();
    for c in p.iter().rev() {
        d2 = d2 * x + 2.0 * d1;
        d1 = d1 * x + v;
        v = v * x + c;
    }
    (v, d1, d2)
}

fn fiber_polys(f: &FloatPoly, m: &Mat3) -> Option<[Vec<Vec<C>>; 2]> {
    let rows: Vec<Vec<C>> = m.iter().map(|r| r.to_vec()).collect();
    let g = GroupElement::from_rows(&rows).ok()?;
    let fm: FloatPoly = f.substitute(&g).ok()?;
    let d = f.degree() as usize;
    let mut out = [vec![vec![C::zero(); d + 1]; d + 1], vec![vec![C::zero(); d + 1]; d + 1]];
    let mut maxc = 0.0_f64;
    for (mono, c) in fm.terms() {
        let e = &mono.0;
        let j = e[2] as usize;
        out[0][j][e[1] as usize] += c;
        out[1][j][e[0] as usize] += c;
        maxc = maxc.max(c.norm());
    }
    let lead = out[0][d][0].norm();
    if lead < FRAME_LEAD_RATIO * maxc {
        return None;
    }
    Some(out)
}

/// Orthogonal matrix with rational entries, via the Cayley transform of a
/// random rational skew matrix.
fn rational_rotation(rng: &mut ChaCha8Rng) -> Mat3 {
    let mut s = [[BigRational::zero(), BigRational::zero(), BigRational::zero()], [BigRational::zero(), BigRational::zero(), BigRational::zero()], [BigRational::zero(), BigRational::zero(), BigRational::zero()]];
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let v = BigRational::new(rng.gen_range(-12i64..=12).into(), 8.into());
        s[i][j] = v.clone();
        s[j][i] = -v;
    }
    let id = |i: usize, j: usize| if i == j { BigRational::one() } else { BigRational::zero() };
    let plus: Vec<Vec<BigRational>> = (0..3).map(|i| (0..3).map(|j| id(i, j) + &s[i][j]).collect()).collect();
    let minus: Vec<Vec<BigRational>> = (0..3).map(|i| (0..3).map(|j| id(i, j) - &s[i][j]).collect()).collect();
    let p = GroupElement::from_rows(&plus).expect("I + S is invertible for skew S");
    let q = GroupElement::from_rows(&minus).unwrap().mul(&p.inverse());
    let mut out = [[C::zero(); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = crate::poly::Coeff::to_complex(q.get(i, j));
        }
    }
    out
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, z);
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, dp)
}
