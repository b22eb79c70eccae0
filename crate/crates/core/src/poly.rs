//! Polynomials `P` meant to be composed with the cosine, `r -> P(cos r)`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients in ascending powers, with trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CosPolynomial<T = f64> {
    coeffs: Vec<T>,
}

/// Exact rational coefficients.
pub type ExactCosPolynomial = CosPolynomial<BigRational>;

fn from_count<T: Num>(i: usize) -> T {
    (0..i).fold(T::zero(), |acc, _| acc + T::one())
}

impl<T: Clone + Num> CosPolynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        CosPolynomial { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `x`, i.e. `cos r` itself.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn leading(&self) -> &T {
        self.coeffs.last().expect("never empty")
    }

    pub fn eval(&self, x: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(T::zero());
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * from_count::<T>(i))
                .collect(),
        )
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn map<U: Clone + Num, F: Fn(&T) -> U>(&self, f: F) -> CosPolynomial<U> {
        CosPolynomial::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Clone + Num> Add for &CosPolynomial<T> {
    type Output = CosPolynomial<T>;
    fn add(self, rhs: Self) -> CosPolynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CosPolynomial::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                    let b = rhs.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                    a + b
                })
                .collect(),
        )
    }
}

impl<T: Clone + Num> Sub for &CosPolynomial<T> {
    type Output = CosPolynomial<T>;
    fn sub(self, rhs: Self) -> CosPolynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CosPolynomial::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                    let b = rhs.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                    a - b
                })
                .collect(),
        )
    }
}

impl<T: Clone + Num> Mul for &CosPolynomial<T> {
    type Output = CosPolynomial<T>;
    fn mul(self, rhs: Self) -> CosPolynomial<T> {
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        CosPolynomial::new(out)
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl CosPolynomial<f64> {
    /// Compensated Horner evaluation, as accurate as plain Horner in doubled
    /// working precision. Needed for high-degree multiple-angle polynomials
    /// whose coefficients cancel heavily.
    pub fn eval_compensated(&self, x: f64) -> f64 {
        let c = &self.coeffs;
        let mut s = c[c.len() - 1];
        let mut err = 0.0;
        for &ci in c.iter().rev().skip(1) {
            let (p, pe) = two_prod(s, x);
            let (t, se) = two_sum(p, ci);
            s = t;
            err = err * x + (pe + se);
        }
        s + err
    }

    /// `P(cos r)`.
    pub fn value_at_radius(&self, r: f64) -> f64 {
        self.eval_compensated(r.cos())
    }

    /// `d/dr P(cos r) = -sin r P'(cos r)`.
    pub fn slope_at_radius(&self, r: f64) -> f64 {
        -r.sin() * self.derivative().eval(r.cos())
    }

    /// `d^2/dr^2 P(cos r) = sin^2 r P''(cos r) - cos r P'(cos r)`.
    pub fn curvature_at_radius(&self, r: f64) -> f64 {
        let d1 = self.derivative();
        let d2 = d1.derivative();
        let (s, c) = r.sin_cos();
        s * s * d2.eval(c) - c * d1.eval(c)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: CosPolynomial<f64> = serde_json::from_str(s)?;
        if p.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        Ok(CosPolynomial::new(p.coeffs))
    }
}

impl CosPolynomial<BigRational> {
    pub fn to_f64(&self) -> CosPolynomial<f64> {
        self.map(|c| c.to_f64().unwrap_or(f64::NAN))
    }

    /// `P(1)`, i.e. the value at `r = 0`.
    pub fn coefficient_sum(&self) -> BigRational {
        self.coeffs.iter().fold(BigRational::zero(), |acc, c| acc + c)
    }

    /// Coefficients as `p/q` strings.
    pub fn exact_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    /// JSON `{coeffs: [...], exact: [...]}`, floats plus exact rationals.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "coeffs": self.to_f64().coeffs,
            "exact": self.exact_strings(),
        })
    }
}

impl CosPolynomial<BigInt> {
    pub fn to_f64(&self) -> CosPolynomial<f64> {
        self.map(|c| c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn to_rational(&self) -> ExactCosPolynomial {
        self.map(|c| BigRational::from_integer(c.clone()))
    }
}

impl<T: fmt::Display + Clone + Num> fmt::Display for CosPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() && self.coeffs.len() > 1 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => f.write_str("x")?,
                1 => write!(f, "({c})x")?,
                _ if c.is_one() => write!(f, "x^{i}")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        Ok(())
    }
}
