//! Puiseux series of the curve along a tropism.
//!
//! A branch with tropism v is written x_i = t^{v_i} y_i(t) with
//! x_1 = c_1 t^{v_1} a single term; the series y_i have integer exponents,
//! so the ramification of the branch is carried by v_1.

mod certify;
mod leading;
mod series;
mod sym;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::geometry::PrimitiveVector;
use crate::homotopy::HomotopyError;
use crate::polycore::coeff::exact_is_real;
use crate::polycore::{to_c64, Exact};
use crate::tropical::TropicalError;

pub use certify::{certify, sample_curve, Certification, CurveSample};
pub use leading::{leading_terms, transformed_initial_system, LeadingTerms};
pub use series::extend_series;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PuiseuxError {
    #[error("tropism needs a positive first coordinate, got {0}")]
    NonPositiveFirst(PrimitiveVector),
    #[error("winding number must be at least 1")]
    ZeroWinding,
    #[error("direction has {found} entries, the system has {expected} variables")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("pinned variable x{0} does not exist")]
    BadPin(usize),
    #[error("pinned value must be nonzero")]
    ZeroPin,
    #[error("initial system is not square after reduction: {equations} equations in {unknowns} unknowns")]
    NotSquare { equations: usize, unknowns: usize },
    #[error("initial system has no solution with all coordinates nonzero; the direction may hide a tropism in a larger cone (try the end game)")]
    NoTorusSolution,
    #[error("singular leading root; ramification beyond one level unsupported")]
    SingularLeadingRoot,
    #[error("inconsistent coefficient equations at relative order {0}; not a tropism")]
    Inconsistent(usize),
    #[error("a leading coefficient resolved to zero; not a tropism")]
    ZeroLeading,
    #[error("sample count must be at least 2")]
    TooFewSamples,
    #[error("malformed expansion: {0}")]
    Malformed(String),
    #[error(transparent)]
    Tropical(#[from] TropicalError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
}

/// Leading exponents of a branch together with its winding number.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tropism {
    pub direction: PrimitiveVector,
    pub winding: u32,
}

impl Tropism {
    pub fn new(direction: PrimitiveVector, winding: u32) -> Result<Self, PuiseuxError> {
        if direction.first() <= 0 {
            return Err(PuiseuxError::NonPositiveFirst(direction));
        }
        if winding == 0 {
            return Err(PuiseuxError::ZeroWinding);
        }
        Ok(Tropism { direction, winding })
    }
}

/// A series coefficient: exact Gaussian rational or double precision.
#[derive(Clone, Debug, PartialEq)]
pub enum Coefficient {
    Exact(Exact),
    Float(Complex64),
}

impl Coefficient {
    pub fn to_c64(&self) -> Complex64 {
        match self {
            Coefficient::Exact(e) => to_c64(e),
            Coefficient::Float(z) => *z,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coefficient::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Exact(e) => e.is_zero(),
            Coefficient::Float(z) => *z == Complex64::new(0.0, 0.0),
        }
    }

    /// `[num, den]` for a real rational, `[[num, den], [num, den]]` for a
    /// complex one, `[re, im]` for a float.
    pub fn to_json(&self) -> Value {
        fn big(x: &BigInt) -> Value {
            x.to_i64().map(Value::from).unwrap_or_else(|| Value::from(x.to_string()))
        }
        fn ratio(q: &BigRational) -> Value {
            json!([big(q.numer()), big(q.denom())])
        }
        match self {
            Coefficient::Exact(e) if exact_is_real(e) => ratio(&e.re),
            Coefficient::Exact(e) => json!([ratio(&e.re), ratio(&e.im)]),
            Coefficient::Float(z) => json!([z.re, z.im]),
        }
    }

    /// Inverse of [`Coefficient::to_json`]; integers mark exact values.
    pub fn from_json(v: &Value) -> Result<Self, PuiseuxError> {
        let bad = || PuiseuxError::Malformed(format!("coefficient {v}"));
        fn big(x: &Value) -> Option<BigInt> {
            match x {
                Value::Number(n) => n.as_i64().map(BigInt::from),
                Value::String(s) => s.parse().ok(),
                _ => None,
            }
        }
        fn ratio(x: &Value) -> Option<BigRational> {
            let a = x.as_array().filter(|a| a.len() == 2)?;
            let (n, d) = (big(&a[0])?, big(&a[1])?);
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        let a = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
        if let Some(q) = ratio(v) {
            return Ok(Coefficient::Exact(Exact::new(q, BigRational::zero())));
        }
        if let (Some(re), Some(im)) = (ratio(&a[0]), ratio(&a[1])) {
            return Ok(Coefficient::Exact(Exact::new(re, im)));
        }
        match (a[0].as_f64(), a[1].as_f64()) {
            (Some(re), Some(im)) => Ok(Coefficient::Float(Complex64::new(re, im))),
            _ => Err(bad()),
        }
    }
}

/// Which leading coefficient was fixed, and to what.
#[derive(Clone, Debug, PartialEq)]
pub struct Pin {
    /// 0-based variable index.
    pub var: usize,
    pub value: Exact,
}

impl Pin {
    pub fn new(var: usize, value: Exact) -> Result<Self, PuiseuxError> {
        if value.is_zero() {
            return Err(PuiseuxError::ZeroPin);
        }
        Ok(Pin { var, value })
    }
}

/// Truncated series x_i(t) = Σ c t^e per coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct PuiseuxExpansion {
    pub tropism: Tropism,
    pub normalization: Pin,
    /// Per coordinate, (exponent, coefficient) with strictly increasing
    /// exponents and zero coefficients omitted.
    pub coords: Vec<Vec<(i64, Coefficient)>>,
    /// Largest exponent kept (the leading term is always kept).
    pub order: i64,
}

impl PuiseuxExpansion {
    pub fn nvars(&self) -> usize {
        self.coords.len()
    }

    pub fn is_exact(&self) -> bool {
        self.coords.iter().flatten().all(|(_, c)| c.is_exact())
    }

    /// Coefficient of t^e in coordinate i (0-based).
    pub fn coefficient(&self, i: usize, e: i64) -> Option<&Coefficient> {
        self.coords[i].iter().find(|(k, _)| *k == e).map(|(_, c)| c)
    }

    /// Keep the first `terms` terms of every coordinate.
    pub fn truncated(&self, terms: usize) -> PuiseuxExpansion {
        let mut e = self.clone();
        for c in e.coords.iter_mut() {
            c.truncate(terms.max(1));
        }
        e
    }

    pub fn eval(&self, t: f64) -> Vec<Complex64> {
        self.coords
            .iter()
            .map(|terms| terms.iter().map(|(e, c)| c.to_c64() * t.powi(*e as i32)).sum())
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let coords: Vec<Value> = self
            .coords
            .iter()
            .map(|terms| Value::Array(terms.iter().map(|(e, c)| json!([e, c.to_json()])).collect()))
            .collect();
        json!({
            "tropism": self.tropism.direction.entries(),
            "winding": self.tropism.winding,
            "normalization": { "var": self.normalization.var + 1, "value": Coefficient::Exact(self.normalization.value.clone()).to_json() },
            "coords": coords,
            "order": self.order,
        })
    }

    /// Read back the output of [`PuiseuxExpansion::to_json`].
    pub fn from_json(v: &Value) -> Result<Self, PuiseuxError> {
        let bad = |what: &str| PuiseuxError::Malformed(what.to_string());
        let ints = |x: &Value| -> Option<Vec<i64>> { x.as_array()?.iter().map(Value::as_i64).collect() };
        let direction = v.get("tropism").and_then(ints).ok_or_else(|| bad("tropism"))?;
        let direction = PrimitiveVector::new(direction).map_err(|e| PuiseuxError::Malformed(e.to_string()))?;
        let winding = v.get("winding").and_then(Value::as_u64).ok_or_else(|| bad("winding"))?;
        let tropism = Tropism::new(direction, winding as u32)?;
        let norm = v.get("normalization").ok_or_else(|| bad("normalization"))?;
        let var = norm.get("var").and_then(Value::as_u64).filter(|&k| k >= 1).ok_or_else(|| bad("normalization var"))?;
        let value = match Coefficient::from_json(norm.get("value").ok_or_else(|| bad("normalization value"))?)? {
            Coefficient::Exact(e) => e,
            Coefficient::Float(_) => return Err(bad("normalization value must be exact")),
        };
        let normalization = Pin::new(var as usize - 1, value)?;
        let mut coords = Vec::new();
        for c in v.get("coords").and_then(Value::as_array).ok_or_else(|| bad("coords"))? {
            let mut terms = Vec::new();
            for t in c.as_array().ok_or_else(|| bad("coords"))? {
                let pair = t.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("term"))?;
                let e = pair[0].as_i64().ok_or_else(|| bad("exponent"))?;
                terms.push((e, Coefficient::from_json(&pair[1])?));
            }
            if terms.is_empty() || terms.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(bad("exponents must be nonempty and increasing"));
            }
            coords.push(terms);
        }
        if coords.len() != tropism.direction.len() {
            return Err(PuiseuxError::DimensionMismatch { expected: tropism.direction.len(), found: coords.len() });
        }
        let order = v.get("order").and_then(Value::as_i64).ok_or_else(|| bad("order"))?;
        Ok(PuiseuxExpansion { tropism, normalization, coords, order })
    }
}
