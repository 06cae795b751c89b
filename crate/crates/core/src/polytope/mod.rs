//! Weight polytopes, one-parameter subgroups and the slopes they predict.
//!
//! For `λ(t) = diag(t^{m_0}, ..., t^{m_N})` with `sum m_i = 0`:
//! - dual polynomials transform by `Δ ↦ Δ∘λᵀ`, so `a^α` picks up `t^{<α,m>}`
//!   and its weight is `α`;
//! - point polynomials transform by `F ↦ F∘λ⁻¹`, so `z^β` picks up
//!   `t^{-<β,m>}` and its weight is `-β`.
//!
//! With these signs `log ‖λ(t)·v‖^2 = w_λ(v) log|t|^2 + O(1)` as `t → 0`,
//! where `w_λ(v)` is the minimum of `<x, m>` over the weight polytope.

pub mod lp;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::elimination::{EliminantKind, GenericEliminant};
use crate::error::{Error, Result};
use crate::poly::{rat_to_f64, rat_to_string, ExactPoly, FloatGroup, HomogPoly, Space};
pub use lp::{point_in_hull, verify_certificate, Membership};

type Q = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ActionKind {
    OnPoints,
    OnDual,
}

impl ActionKind {
    pub fn of_space(space: Space) -> Self {
        match space {
            Space::Point => ActionKind::OnPoints,
            Space::Dual => ActionKind::OnDual,
        }
    }
}

/// `λ(t) = diag(t^{m_i})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneParamSubgroup {
    pub m: Vec<i64>,
}

impl OneParamSubgroup {
    pub fn new(m: Vec<i64>) -> Result<Self> {
        if m.iter().sum::<i64>() != 0 {
            return Err(Error::Invalid(format!("one-parameter subgroup exponents {m:?} do not sum to zero")));
        }
        Ok(OneParamSubgroup { m })
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    /// `λ(t)` for real `t > 0`.
    pub fn at(&self, t: f64) -> FloatGroup {
        let d: Vec<_> = self.m.iter().map(|&e| num_complex::Complex64::new(t.powi(e as i32), 0.0)).collect();
        FloatGroup::diag(&d).expect("t > 0")
    }

    fn as_rational(&self) -> Vec<Q> {
        self.m.iter().map(|&e| Q::from_integer(e.into())).collect()
    }
}

/// Exponent vectors with the sign of the action.
pub fn support_weights(p: &ExactPoly, kind: ActionKind) -> Vec<Vec<i64>> {
    let sign = match kind {
        ActionKind::OnDual => 1,
        ActionKind::OnPoints => -1,
    };
    let mut out: Vec<Vec<i64>> =
        p.terms().keys().map(|m| m.0.iter().map(|&e| sign * e as i64).collect()).collect();
    out.sort();
    out.dedup();
    out
}

/// Support of a generic eliminant in the character lattice of `SL(d+1)`.
/// A resultant in `c_0..c_d, e_0..e_d` is folded onto `d+1` coordinates by
/// adding the two exponent blocks.
pub fn eliminant_support(g: &GenericEliminant, kind: ActionKind) -> Vec<Vec<i64>> {
    let raw = support_weights(&g.poly, kind);
    match g.kind {
        EliminantKind::Discriminant => raw,
        EliminantKind::Resultant => {
            let k = g.form_degree as usize + 1;
            let mut out: Vec<Vec<i64>> = raw.iter().map(|w| (0..k).map(|i| w[i] + w[i + k]).collect()).collect();
            out.sort();
            out.dedup();
            out
        }
    }
}

/// Convex hull of a finite set of lattice points, with its extreme points.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightPolytope {
    pub action: ActionKind,
    pub points: Vec<Vec<Q>>,
    /// Indices into `points`, ascending.
    pub vertices: Vec<usize>,
    /// Whether the coordinate mean has been subtracted.
    pub projected: bool,
}

impl WeightPolytope {
    pub fn from_points(points: &[Vec<i64>], action: ActionKind) -> Result<Self> {
        let pts: Vec<Vec<Q>> =
            points.iter().map(|p| p.iter().map(|&x| Q::from_integer(x.into())).collect()).collect();
        Self::from_rational(pts, action, false)
    }

    pub fn from_rational(mut points: Vec<Vec<Q>>, action: ActionKind, projected: bool) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        points.sort();
        points.dedup();
        let vertices = extreme_points(&points)?;
        Ok(WeightPolytope { action, points, vertices, projected })
    }

    /// Newton polytope of `p` under the action its space dictates.
    pub fn of_poly(p: &ExactPoly) -> Result<Self> {
        Self::of_poly_as(p, ActionKind::of_space(p.space()))
    }

    pub fn of_poly_as(p: &ExactPoly, kind: ActionKind) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::EmptyPolynomial);
        }
        Self::from_points(&support_weights(p, kind), kind)
    }

    pub fn of_eliminant(g: &GenericEliminant, kind: ActionKind) -> Result<Self> {
        if g.poly.is_zero() {
            return Err(Error::EmptyPolynomial);
        }
        Self::from_points(&eliminant_support(g, kind), kind)
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn vertex_points(&self) -> Vec<Vec<Q>> {
        self.vertices.iter().map(|&i| self.points[i].clone()).collect()
    }

    /// Subtracts the coordinate mean from every point. Linear functionals
    /// with `sum m_i = 0` are unchanged.
    pub fn traceless(&self) -> Self {
        if self.projected {
            return self.clone();
        }
        let n = Q::from_integer((self.dim() as i64).into());
        let points: Vec<Vec<Q>> = self
            .points
            .iter()
            .map(|p| {
                let mean = p.iter().fold(Q::zero(), |a, x| a + x) / &n;
                p.iter().map(|x| x - &mean).collect()
            })
            .collect();
        Self::from_rational(points, self.action, true).expect("nonempty")
    }

    /// `c·P`.
    pub fn scaled(&self, c: &Q) -> Self {
        let points = self.points.iter().map(|p| p.iter().map(|x| x * c).collect()).collect();
        WeightPolytope { points, ..self.clone() }
    }

    /// `w_λ = min <x, m>` over the vertices.
    pub fn weight_of(&self, lambda: &OneParamSubgroup) -> Result<Q> {
        if lambda.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: lambda.dim() });
        }
        let m = lambda.as_rational();
        Ok(self.vertices.iter().map(|&i| dot(&self.points[i], &m)).min().expect("nonempty"))
    }

    /// Same minimum taken over every support point.
    pub fn weight_of_all_points(&self, lambda: &OneParamSubgroup) -> Result<Q> {
        if lambda.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: lambda.dim() });
        }
        let m = lambda.as_rational();
        Ok(self.points.iter().map(|p| dot(p, &m)).min().expect("nonempty"))
    }

    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        let mut pts = Vec::new();
        for a in self.vertex_points() {
            for b in other.vertex_points() {
                pts.push(a.iter().zip(&b).map(|(x, y)| x + y).collect());
            }
        }
        Self::from_rational(pts, self.action, self.projected && other.projected)
    }

    pub fn contains(&self, q: &[Q]) -> Result<Membership> {
        point_in_hull(&self.vertex_points(), q)
    }

    pub fn report(&self) -> PolytopeReport {
        let s = |p: &Vec<Q>| p.iter().map(rat_to_string).collect();
        PolytopeReport {
            action: self.action,
            points: self.points.iter().map(s).collect(),
            vertices: self.vertex_points().iter().map(s).collect(),
            projected: self.projected,
        }
    }
}

/// JSON form of a polytope; coordinates are exact rationals as strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolytopeReport {
    pub action: ActionKind,
    pub points: Vec<Vec<String>>,
    pub vertices: Vec<Vec<String>>,
    pub projected: bool,
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

fn extreme_points(points: &[Vec<Q>]) -> Result<Vec<usize>> {
    if points.len() <= 2 {
        return Ok((0..points.len()).collect());
    }
    let mut out = Vec::new();
    for i in 0..points.len() {
        let others: Vec<Vec<Q>> =
            points.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
        if !point_in_hull(&others, &points[i])?.is_inside() {
            out.push(i);
        }
    }
    Ok(out)
}

/// Verdict for one scaled vertex.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexVerdict {
    pub vertex: Vec<Q>,
    pub scaled: Vec<Q>,
    pub membership: Membership,
    pub certificate_ok: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InclusionReport {
    pub c: Q,
    pub inside: bool,
    pub projected: bool,
    /// Vertices of the target polytope the witnesses refer to.
    pub target_vertices: Vec<Vec<Q>>,
    pub verdicts: Vec<VertexVerdict>,
}

impl InclusionReport {
    pub fn certificates_ok(&self) -> bool {
        self.verdicts.iter().all(|v| v.certificate_ok)
    }

    /// Witness parameters on a segment target: the weight on the second
    /// vertex for each scaled vertex that lies inside.
    pub fn segment_parameters(&self) -> Option<Vec<Q>> {
        if self.target_vertices.len() != 2 {
            return None;
        }
        self.verdicts
            .iter()
            .map(|v| match &v.membership {
                Membership::Inside(w) => {
                    Some(w.iter().find(|(i, _)| *i == 1).map(|(_, x)| x.clone()).unwrap_or_else(Q::zero))
                }
                Membership::Outside(_) => None,
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let s = |p: &Vec<Q>| p.iter().map(rat_to_string).collect::<Vec<_>>();
        serde_json::json!({
            "c": rat_to_string(&self.c),
            "inside": self.inside,
            "projected": self.projected,
            "target_vertices": self.target_vertices.iter().map(s).collect::<Vec<_>>(),
            "verdicts": self.verdicts.iter().map(|v| {
                let cert = match &v.membership {
                    Membership::Inside(w) => serde_json::json!({
                        "witness": w.iter().map(|(i, x)| serde_json::json!([i, rat_to_string(x)])).collect::<Vec<_>>()
                    }),
                    Membership::Outside(h) => serde_json::json!({ "separator": s(h) }),
                };
                serde_json::json!({
                    "vertex": s(&v.vertex),
                    "scaled": s(&v.scaled),
                    "certificate": cert,
                    "certificate_ok": v.certificate_ok,
                })
            }).collect::<Vec<_>>(),
        })
    }
}

/// Decides `c·P ⊆ Q` after traceless projection of both, one LP per
/// vertex of `P`. A separator for an outside vertex is a functional `h`
/// whose direction destabilizes.
pub fn scaled_inclusion(p: &WeightPolytope, c: &Q, q: &WeightPolytope) -> Result<InclusionReport> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { expected: q.dim(), got: p.dim() });
    }
    let p = p.traceless();
    let q = q.traceless();
    let target = q.vertex_points();
    let mut verdicts = Vec::new();
    for v in p.vertex_points() {
        let scaled: Vec<Q> = v.iter().map(|x| x * c).collect();
        let membership = point_in_hull(&target, &scaled)?;
        let certificate_ok = verify_certificate(&target, &scaled, &membership);
        verdicts.push(VertexVerdict { vertex: v, scaled, membership, certificate_ok });
    }
    let inside = verdicts.iter().all(|v| v.membership.is_inside());
    Ok(InclusionReport { c: c.clone(), inside, projected: true, target_vertices: target, verdicts })
}

/// Least-squares fit of `value` against `log|t|^2`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
}

pub fn measure_slope(samples: &[(f64, f64)]) -> Result<SlopeFit> {
    if samples.len() < 2 {
        return Err(Error::Invalid("slope fit needs at least two t values".into()));
    }
    if samples.iter().any(|(t, v)| !t.is_finite() || *t <= 0.0 || !v.is_finite()) {
        return Err(Error::NonConvergence("non-finite value in slope sweep".into()));
    }
    let xs: Vec<f64> = samples.iter().map(|(t, _)| (t * t).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = samples.iter().map(|(_, v)| v).sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Invalid("t grid has a single distinct |t|".into()));
    }
    let sxy: f64 = xs.iter().zip(samples).map(|(x, (_, v))| (x - mx) * (v - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs.iter().zip(samples).map(|(x, (_, v))| (v - intercept - slope * x).powi(2)).sum::<f64>() / n).sqrt();
    Ok(SlopeFit { slope, intercept, residual })
}

/// `log(‖λ(t)·P‖^2 / ‖P‖^2)` with the action `P`'s space dictates.
pub fn log_norm_ratio(p: &ExactPoly, g: &FloatGroup) -> Result<f64> {
    let f = p.to_float();
    let moved = match p.space() {
        Space::Point => g.act_on_point_poly(&f)?,
        Space::Dual => g.act_on_dual_poly(&f)?,
    };
    Ok((moved.fs_norm_sq() / f.fs_norm_sq()).ln())
}

/// Symbolic-norm slope sweep along `λ` over the given `t` values.
pub fn symbolic_slope(p: &ExactPoly, lambda: &OneParamSubgroup, t_grid: &[f64]) -> Result<SlopeFit> {
    let samples: Result<Vec<(f64, f64)>> =
        t_grid.iter().map(|&t| Ok((t, log_norm_ratio(p, &lambda.at(t))?))).collect();
    measure_slope(&samples?)
}

/// An exact slope prediction, optionally paired with a measurement.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SlopePrediction {
    pub tag: String,
    pub predicted: Q,
    pub measured: Option<f64>,
    pub fit_residual: Option<f64>,
}

impl SlopePrediction {
    pub fn predicted_f64(&self) -> f64 {
        rat_to_f64(&self.predicted)
    }

    /// `|measured - predicted| <= rel·max(1, |predicted|)`.
    pub fn matches(&self, rel: f64) -> bool {
        match self.measured {
            Some(m) => (m - self.predicted_f64()).abs() <= rel * self.predicted_f64().abs().max(1.0),
            None => false,
        }
    }
}

/// Predicted slope in `log|t|^2` of `4d·ν - d·E₁` along `λ` for a plane
/// curve: `w_λ(N(Δ_F)) - 2 (deg Δ / d) w_λ(N(F))`.
pub fn predict_energy_slope(f: &ExactPoly, delta: &ExactPoly, lambda: &OneParamSubgroup) -> Result<SlopePrediction> {
    let wd = WeightPolytope::of_poly_as(delta, ActionKind::OnDual)?.weight_of(lambda)?;
    let wf = WeightPolytope::of_poly_as(f, ActionKind::OnPoints)?.weight_of(lambda)?;
    let ratio = Q::new((2 * delta.degree() as i64).into(), (f.degree() as i64).into());
    Ok(SlopePrediction { tag: "4d*nu - d*E1".into(), predicted: wd - ratio * wf, measured: None, fit_residual: None })
}

/// `w_λ` of a polynomial under its own action.
pub fn weight_of_poly(p: &ExactPoly, lambda: &OneParamSubgroup) -> Result<Q> {
    WeightPolytope::of_poly(p)?.weight_of(lambda)
}

/// Geometric grid `t_k = t_max · ratio^k`, `k = 0..n`.
pub fn geometric_grid(t_max: f64, t_min: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![t_max];
    }
    let r = (t_min / t_max).powf(1.0 / (n - 1) as f64);
    (0..n).map(|k| t_max * r.powi(k as i32)).collect()
}

/// Helper for tests and examples: the unit exponent vector polytope of a
/// single monomial.
pub fn monomial_polytope(e: &[u32], space: Space) -> Result<WeightPolytope> {
    let mut p = HomogPoly::zero(e.len(), e.iter().sum(), space);
    p.add_term(crate::poly::Monomial(e.to_vec()), Q::one());
    WeightPolytope::of_poly(&p)
}
