//! Sparse homogeneous polynomials over exact rationals or complex doubles.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose order is graded
//! lexicographic, so the last entry is the leading term and iteration order
//! is canonical.

mod coeff;
mod det;
mod group;
mod json;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use coeff::{parse_rat, rat, rat_to_f64, rat_to_string, Coeff};
pub use det::{bareiss_det, cofactor_det, sylvester_matrix, PolyMatrix};
pub use group::{ExactGroup, FloatGroup, GroupElement};
pub use json::{AnyPoly, PolyFile, TermFile};

pub type ExactPoly = HomogPoly<BigRational>;
pub type FloatPoly = HomogPoly<Complex64>;

/// Which projective space the variables coordinatize.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Point,
    Dual,
}

/// Exponent vector. Ordered by total degree, then lexicographically with
/// the first variable most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when every exponent of `other` is at most ours.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }

    /// Product of the factorials of the exponents.
    pub fn factorial_product(&self) -> BigInt {
        let mut p = BigInt::one();
        for &a in &self.0 {
            for k in 2..=a {
                p *= k;
            }
        }
        p
    }

    pub fn factorial_product_f64(&self) -> f64 {
        self.0
            .iter()
            .map(|&a| (2..=a).map(|k| k as f64).product::<f64>())
            .product()
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Homogeneous polynomial in `nvars` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogPoly<C: Coeff> {
    nvars: usize,
    degree: u32,
    space: Space,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> HomogPoly<C> {
    pub fn zero(nvars: usize, degree: u32, space: Space) -> Self {
        HomogPoly { nvars, degree, space, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C, space: Space) -> Self {
        let mut p = Self::zero(nvars, 0, space);
        p.add_term(Monomial(vec![0; nvars]), c);
        p
    }

    pub fn var(nvars: usize, i: usize, space: Space) -> Self {
        let mut p = Self::zero(nvars, 1, space);
        p.add_term(Monomial::unit(nvars, i), C::one());
        p
    }

    /// Linear form `sum_i coeffs[i] * x_i`.
    pub fn linear(coeffs: &[C], space: Space) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n, 1, space);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::unit(n, i), c.clone());
        }
        p
    }

    /// Builds from `(coefficient, exponents)` pairs; all exponents must share
    /// the same total degree.
    pub fn from_terms<I>(nvars: usize, space: Space, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (C, Vec<u32>)>,
    {
        let mut degree = None;
        let mut p = Self::zero(nvars, 0, space);
        for (c, e) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, got: e.len() });
            }
            let m = Monomial(e);
            let dm = m.degree();
            match degree {
                None => degree = Some(dm),
                Some(d) if d != dm => return Err(Error::DegreeMismatch { expected: d, got: dm }),
                _ => {}
            }
            p.add_term(m, c);
        }
        p.degree = degree.unwrap_or(0);
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn with_space(mut self, space: Space) -> Self {
        self.space = space;
        self
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, C> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> C {
        self.terms.get(&Monomial(e.to_vec())).cloned().unwrap_or_else(C::zero)
    }

    /// Graded-lex leading term.
    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    /// Adds `c * x^m`, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        if self.terms.is_empty() {
            self.degree = m.degree();
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "adding polynomials of different degree");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars, self.degree, self.space);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.clone() * s.clone();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = Self::zero(self.nvars, self.degree + other.degree, self.space);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out.degree = self.degree + other.degree;
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, C::one(), self.space);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &[C]) -> Result<C> {
        if x.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: x.len() });
        }
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &a) in x.iter().zip(&m.0) {
                for _ in 0..a {
                    t = t * xi.clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.nvars);
        let mut out = Self::zero(self.nvars, self.degree.saturating_sub(1), self.space);
        for (m, c) in &self.terms {
            let a = m.0[i];
            if a == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[i] -= 1;
            out.add_term(Monomial(e), c.clone() * C::from_i64(a as i64));
        }
        out.degree = self.degree.saturating_sub(1);
        out
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    /// `P∘M`, i.e. each variable `x_i` replaced by `sum_j M[i][j] x_j`.
    pub fn substitute(&self, m: &GroupElement<C>) -> Result<Self> {
        if m.dim() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: m.dim() });
        }
        let forms: Vec<Self> = (0..self.nvars)
            .map(|i| Self::linear(&m.row(i), self.space))
            .collect();
        Ok(self.substitute_forms(&forms))
    }

    /// Replaces `x_i` by the given polynomials (all of the same degree).
    pub fn substitute_forms(&self, forms: &[Self]) -> Self {
        assert_eq!(forms.len(), self.nvars);
        let nv = forms[0].nvars;
        let fdeg = forms[0].degree;
        let space = forms[0].space;
        let mut powers: Vec<Vec<Self>> = forms
            .iter()
            .map(|f| vec![Self::constant(nv, C::one(), space)].into_iter().chain(std::iter::once(f.clone())).collect())
            .collect();
        let mut out = Self::zero(nv, fdeg * self.degree, space);
        for (m, c) in &self.terms {
            let mut t = Self::constant(nv, c.clone(), space);
            for (i, &a) in m.0.iter().enumerate() {
                while powers[i].len() <= a as usize {
                    let next = powers[i].last().unwrap().mul(&forms[i]);
                    powers[i].push(next);
                }
                if a > 0 {
                    t = t.mul(&powers[i][a as usize]);
                }
            }
            for (mm, cc) in t.terms {
                out.add_term(mm, cc);
            }
        }
        out.degree = fdeg * self.degree;
        out
    }

    /// Fubini–Study weighted coefficient norm `sum |c|^2 / prod(alpha_i!)`.
    pub fn fs_norm_sq(&self) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| c.norm_sq_f64() / m.factorial_product_f64())
            .sum()
    }

    pub fn to_float(&self) -> FloatPoly {
        HomogPoly {
            nvars: self.nvars,
            degree: self.degree,
            space: self.space,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.to_complex())).collect(),
        }
    }

    /// Evaluates at complex arguments regardless of coefficient kind.
    pub fn eval_complex(&self, x: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_complex();
            for (xi, &a) in x.iter().zip(&m.0) {
                for _ in 0..a {
                    t *= xi;
                }
            }
            acc += t;
        }
        acc
    }

    /// Largest `m` with `x^m` dividing every term (componentwise min).
    pub fn monomial_content(&self) -> Monomial {
        let mut e = vec![u32::MAX; self.nvars];
        for m in self.terms.keys() {
            for (a, b) in e.iter_mut().zip(&m.0) {
                *a = (*a).min(*b);
            }
        }
        if self.terms.is_empty() {
            e.iter_mut().for_each(|a| *a = 0);
        }
        Monomial(e)
    }

    /// Divides out the monomial content.
    pub fn strip_monomial_content(&self) -> (Self, Monomial) {
        let mc = self.monomial_content();
        let mut out = Self::zero(self.nvars, self.degree - mc.degree(), self.space);
        for (m, c) in &self.terms {
            out.add_term(m.checked_div(&mc).unwrap(), c.clone());
        }
        out.degree = self.degree - mc.degree();
        (out, mc)
    }
}

impl HomogPoly<BigRational> {
    /// Exact quotient `self / q`, or [`Error::InexactDivision`].
    pub fn exact_divide(&self, q: &Self) -> Result<Self> {
        let (lm, lc) = match q.leading() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::Invalid("division by zero polynomial".into())),
        };
        if self.is_zero() {
            return Ok(Self::zero(self.nvars, self.degree.saturating_sub(q.degree), self.space));
        }
        if self.degree < q.degree {
            return Err(Error::InexactDivision);
        }
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars, self.degree - q.degree, self.space);
        while let Some((m, c)) = rem.leading() {
            let qm = m.checked_div(&lm).ok_or(Error::InexactDivision)?;
            let qc = c / &lc;
            for (mm, cc) in &q.terms {
                rem.add_term(qm.mul(mm), -(cc * &qc));
            }
            quot.add_term(qm, qc);
        }
        quot.degree = self.degree - q.degree;
        Ok(quot)
    }

    /// Canonical representative of the scalar class: primitive integer
    /// coefficients with a positive leading coefficient.
    pub fn canonical(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut lcm = BigInt::one();
        let mut gcd = BigInt::zero();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
            gcd = gcd.gcd(c.numer());
        }
        let mut s = BigRational::new(lcm, gcd);
        if self.leading().unwrap().1.is_negative() {
            s = -s;
        }
        self.scale(&s)
    }

    /// Exact FS norm squared.
    pub fn fs_norm_sq_exact(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            acc += c * c / BigRational::from_integer(m.factorial_product());
        }
        acc
    }
}

impl HomogPoly<Complex64> {
    /// Rescales so the FS norm is one.
    pub fn normalized(&self) -> Self {
        let n = self.fs_norm_sq().sqrt();
        self.scale(&Complex64::new(1.0 / n, 0.0))
    }
}

impl<C: Coeff> fmt::Display for HomogPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let var = if self.space == Space::Point { 'z' } else { 'a' };
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c.display())?;
            for (i, &a) in m.0.iter().enumerate() {
                match a {
                    0 => {}
                    1 => write!(f, "*{var}{i}")?,
                    _ => write!(f, "*{var}{i}^{a}")?,
                }
            }
        }
        Ok(())
    }
}

/// Parses a compact term list such as `[("1", [2,0,0]), ("-4", [1,0,1])]`
/// into an exact polynomial. Handy in tests and examples.
pub fn exact_poly(nvars: usize, space: Space, terms: &[(&str, &[u32])]) -> ExactPoly {
    HomogPoly::from_terms(
        nvars,
        space,
        terms
            .iter()
            .map(|(c, e)| (parse_rat(c).expect("bad rational literal"), e.to_vec())),
    )
    .expect("inconsistent term degrees")
}
