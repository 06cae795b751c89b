use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{parse_rat, rat_to_string, Coeff, ExactPoly, FloatPoly, HomogPoly, Space};
use crate::error::{Error, Result};

/// On-disk polynomial format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyFile {
    pub vars: usize,
    pub degree: u32,
    pub space: Space,
    pub terms: Vec<TermFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermFile {
    pub c: serde_json::Value,
    pub e: Vec<u32>,
}

/// A polynomial of either coefficient kind, as read from disk.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPoly {
    Exact(ExactPoly),
    Float(FloatPoly),
}

impl AnyPoly {
    pub fn from_json(s: &str) -> Result<Self> {
        let f: PolyFile = serde_json::from_str(s)?;
        Self::from_file(&f)
    }

    pub fn from_file(f: &PolyFile) -> Result<Self> {
        let exact = match f.terms.first().map(|t| &t.c) {
            None | Some(serde_json::Value::String(_)) => true,
            Some(serde_json::Value::Array(_)) => false,
            Some(serde_json::Value::Number(_)) => true,
            Some(v) => return Err(Error::Parse(format!("unsupported coefficient {v}"))),
        };
        let check = |e: &Vec<u32>| -> Result<()> {
            if e.len() != f.vars {
                return Err(Error::Parse(format!("exponent {e:?} has wrong length")));
            }
            if e.iter().sum::<u32>() != f.degree {
                return Err(Error::Parse(format!("exponent {e:?} has wrong degree")));
            }
            Ok(())
        };
        if exact {
            let mut terms = Vec::with_capacity(f.terms.len());
            for t in &f.terms {
                check(&t.e)?;
                let c = match &t.c {
                    serde_json::Value::String(s) => parse_rat(s),
                    serde_json::Value::Number(n) => n.as_i64().and_then(|v| parse_rat(&v.to_string())),
                    _ => None,
                }
                .ok_or_else(|| Error::Parse(format!("bad exact coefficient {}", t.c)))?;
                terms.push((c, t.e.clone()));
            }
            let mut p = HomogPoly::from_terms(f.vars, f.space, terms)?;
            if p.is_zero() {
                p = HomogPoly::zero(f.vars, f.degree, f.space);
            }
            Ok(AnyPoly::Exact(p))
        } else {
            let mut terms = Vec::with_capacity(f.terms.len());
            for t in &f.terms {
                check(&t.e)?;
                let c: [f64; 2] = serde_json::from_value(t.c.clone())
                    .map_err(|_| Error::Parse(format!("bad float coefficient {}", t.c)))?;
                terms.push((Complex64::new(c[0], c[1]), t.e.clone()));
            }
            let mut p = HomogPoly::from_terms(f.vars, f.space, terms)?;
            if p.is_zero() {
                p = HomogPoly::zero(f.vars, f.degree, f.space);
            }
            Ok(AnyPoly::Float(p))
        }
    }

    pub fn to_file(&self) -> PolyFile {
        match self {
            AnyPoly::Exact(p) => p.to_file(),
            AnyPoly::Float(p) => p.to_file(),
        }
    }

    pub fn into_exact(self) -> Result<ExactPoly> {
        match self {
            AnyPoly::Exact(p) => Ok(p),
            AnyPoly::Float(_) => Err(Error::FloatCoefficients),
        }
    }

    pub fn to_float(&self) -> FloatPoly {
        match self {
            AnyPoly::Exact(p) => p.to_float(),
            AnyPoly::Float(p) => p.clone(),
        }
    }
}

trait CoeffJson {
    fn to_json(&self) -> serde_json::Value;
}

impl CoeffJson for BigRational {
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(rat_to_string(self))
    }
}

impl CoeffJson for Complex64 {
    fn to_json(&self) -> serde_json::Value {
        serde_json::json!([self.re, self.im])
    }
}

#[allow(private_bounds)]
impl<C: Coeff + CoeffJson> HomogPoly<C> {
    /// Serializable form with terms in descending graded-lex order.
    pub fn to_file(&self) -> PolyFile {
        PolyFile {
            vars: self.nvars(),
            degree: self.degree(),
            space: self.space(),
            terms: self
                .terms()
                .iter()
                .rev()
                .map(|(m, c)| TermFile { c: c.to_json(), e: m.0.clone() })
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("polynomial serializes")
    }
}
