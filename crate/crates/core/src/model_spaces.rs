//! Catalog of flat space and the rank-one symmetric spaces.
//!
//! Compact spaces are normalized to diameter `pi`, so the curvature operator
//! along a unit geodesic has eigenvalues `1` and `1/4`. Hyperbolic spaces carry
//! the dual normalization (`-1` and `-1/4`); real hyperbolic space has constant
//! curvature `-1`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    Flat,
    Sphere,
    RealHyperbolic,
    ComplexProjective,
    ComplexHyperbolic,
    QuaternionicProjective,
    QuaternionicHyperbolic,
    OctonionicProjective,
    OctonionicHyperbolic,
}

impl Family {
    /// Real dimension of the base field.
    pub fn field_dimension(self) -> u32 {
        match self {
            Family::Flat | Family::Sphere | Family::RealHyperbolic => 1,
            Family::ComplexProjective | Family::ComplexHyperbolic => 2,
            Family::QuaternionicProjective | Family::QuaternionicHyperbolic => 4,
            Family::OctonionicProjective | Family::OctonionicHyperbolic => 8,
        }
    }

    pub fn is_compact(self) -> bool {
        matches!(
            self,
            Family::Sphere
                | Family::ComplexProjective
                | Family::QuaternionicProjective
                | Family::OctonionicProjective
        )
    }

    pub fn is_hyperbolic(self) -> bool {
        matches!(
            self,
            Family::RealHyperbolic
                | Family::ComplexHyperbolic
                | Family::QuaternionicHyperbolic
                | Family::OctonionicHyperbolic
        )
    }

    fn prefix(self) -> &'static str {
        match self {
            Family::Flat => "flat",
            Family::Sphere => "sphere",
            Family::RealHyperbolic => "rhn",
            Family::ComplexProjective => "cpn",
            Family::ComplexHyperbolic => "chn",
            Family::QuaternionicProjective => "hpn",
            Family::QuaternionicHyperbolic => "qhn",
            Family::OctonionicProjective => "op2",
            Family::OctonionicHyperbolic => "oh2",
        }
    }
}

/// A flat or rank-one symmetric model space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ModelSpace {
    family: Family,
    m: u32,
}

impl ModelSpace {
    /// `m` is the dimension over the base field; for the octonionic planes it must be 2.
    pub fn new(family: Family, m: u32) -> Result<Self> {
        let ok = match family {
            Family::Flat | Family::Sphere | Family::RealHyperbolic => m >= 2,
            Family::OctonionicProjective | Family::OctonionicHyperbolic => m == 2,
            _ => m >= 1,
        };
        if !ok {
            return Err(Error::InvalidSpace(format!("{family:?} with m = {m}")));
        }
        Ok(ModelSpace { family, m })
    }

    pub fn flat(n: u32) -> Result<Self> {
        Self::new(Family::Flat, n)
    }
    pub fn sphere(n: u32) -> Result<Self> {
        Self::new(Family::Sphere, n)
    }
    pub fn complex_projective(m: u32) -> Result<Self> {
        Self::new(Family::ComplexProjective, m)
    }
    pub fn quaternionic_projective(m: u32) -> Result<Self> {
        Self::new(Family::QuaternionicProjective, m)
    }
    pub fn octonionic_plane() -> Self {
        ModelSpace { family: Family::OctonionicProjective, m: 2 }
    }
    pub fn real_hyperbolic(n: u32) -> Result<Self> {
        Self::new(Family::RealHyperbolic, n)
    }
    pub fn complex_hyperbolic(m: u32) -> Result<Self> {
        Self::new(Family::ComplexHyperbolic, m)
    }
    pub fn quaternionic_hyperbolic(m: u32) -> Result<Self> {
        Self::new(Family::QuaternionicHyperbolic, m)
    }
    pub fn octonionic_hyperbolic_plane() -> Self {
        ModelSpace { family: Family::OctonionicHyperbolic, m: 2 }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Real dimension.
    pub fn n(&self) -> u32 {
        self.family.field_dimension() * self.m
    }

    pub fn is_compact(&self) -> bool {
        self.family.is_compact()
    }

    /// `Some(pi)` for compact spaces, `None` when geodesics never refocus.
    pub fn diameter(&self) -> Option<f64> {
        self.is_compact().then_some(PI)
    }

    /// Every compact rank-one symmetric space of real dimension `2..=max_n`.
    pub fn compact_catalog(max_n: u32) -> Vec<ModelSpace> {
        let mut out = Vec::new();
        for n in 2..=max_n {
            out.push(ModelSpace { family: Family::Sphere, m: n });
        }
        for m in (1..).take_while(|m| 2 * m <= max_n) {
            out.push(ModelSpace { family: Family::ComplexProjective, m });
        }
        for m in (1..).take_while(|m| 4 * m <= max_n) {
            out.push(ModelSpace { family: Family::QuaternionicProjective, m });
        }
        if max_n >= 16 {
            out.push(Self::octonionic_plane());
        }
        out
    }

    /// Noncompact duals of [`ModelSpace::compact_catalog`], plus flat spaces.
    pub fn noncompact_catalog(max_n: u32) -> Vec<ModelSpace> {
        let mut out = Vec::new();
        for n in 2..=max_n {
            out.push(ModelSpace { family: Family::Flat, m: n });
            out.push(ModelSpace { family: Family::RealHyperbolic, m: n });
        }
        for m in (1..).take_while(|m| 2 * m <= max_n) {
            out.push(ModelSpace { family: Family::ComplexHyperbolic, m });
        }
        for m in (1..).take_while(|m| 4 * m <= max_n) {
            out.push(ModelSpace { family: Family::QuaternionicHyperbolic, m });
        }
        if max_n >= 16 {
            out.push(Self::octonionic_hyperbolic_plane());
        }
        out
    }

    /// Eigenvalues of `R(., gamma') gamma'` on the normal space of a unit geodesic.
    pub fn curvature_spectrum(&self) -> CurvatureSpectrum {
        let d = self.family.field_dimension() as usize;
        let n = self.n() as usize;
        let one = Rational64::from_integer(1);
        let quarter = Rational64::new(1, 4);
        let entries = match self.family {
            Family::Flat => vec![(Rational64::zero(), n - 1)],
            Family::Sphere => vec![(one, n - 1)],
            Family::RealHyperbolic => vec![(-one, n - 1)],
            f => {
                let (strong, weak) = if f.is_compact() { (one, quarter) } else { (-one, -quarter) };
                vec![(strong, d - 1), (weak, n - d)]
            }
        };
        CurvatureSpectrum::new(entries.into_iter().filter(|&(_, k)| k > 0).collect())
    }

    /// `r^(n-1) omega(r)` from the closed-form tables.
    pub fn closed_form_density(&self, r: f64) -> Result<f64> {
        let upper = self.diameter().unwrap_or(f64::INFINITY);
        if !(r > 0.0 && r < upper) {
            let domain = if self.is_compact() { "(0, pi)" } else { "(0, inf)" };
            return Err(Error::Domain { r, domain: domain.into() });
        }
        let n = self.n() as i32;
        let d = self.family.field_dimension() as i32;
        let m = self.m as i32;
        let value = match self.family {
            Family::Flat => r.powi(n - 1),
            Family::Sphere => r.sin().powi(n - 1),
            Family::RealHyperbolic => r.sinh().powi(n - 1),
            Family::OctonionicProjective => 16.0 * r.sin().powi(7) * (1.0 - r.cos()).powi(4),
            Family::OctonionicHyperbolic => r.sinh().powi(7) * (2.0 * (r / 2.0).sinh()).powi(8),
            Family::ComplexProjective | Family::QuaternionicProjective => {
                let half = d * (m - 1) / 2;
                2f64.powi(half) * r.sin().powi(d - 1) * (1.0 - r.cos()).powi(half)
            }
            Family::ComplexHyperbolic | Family::QuaternionicHyperbolic => {
                r.sinh().powi(d - 1) * (2.0 * (r / 2.0).sinh()).powi(d * (m - 1))
            }
        };
        Ok(value)
    }

    /// Exponents `(alpha, beta)` with `r^(n-1) omega = 2^beta (1 - cos r)^beta sin^alpha r`.
    pub fn exponents(&self) -> Result<ExponentPair> {
        if !self.is_compact() {
            return Err(Error::UnsupportedSpace(self.to_string()));
        }
        let d = self.family.field_dimension() as i64;
        let m = self.m as i64;
        let (alpha, beta) = match self.family {
            Family::Sphere => (m - 1, 0),
            Family::OctonionicProjective => (7, 4),
            _ => (d - 1, d * (m - 1) / 2),
        };
        ExponentPair::new(Rational64::from_integer(alpha), Rational64::from_integer(beta))
    }

    pub fn ricci(&self) -> Result<Rational64> {
        Ok(self.exponents()?.ricci())
    }
}

impl fmt::Display for ModelSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::OctonionicProjective | Family::OctonionicHyperbolic => {
                f.write_str(self.family.prefix())
            }
            fam => write!(f, "{}:{}", fam.prefix(), self.m),
        }
    }
}

impl FromStr for ModelSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpaceId(s.to_string());
        match s {
            "op2" => return Ok(Self::octonionic_plane()),
            "oh2" => return Ok(Self::octonionic_hyperbolic_plane()),
            _ => {}
        }
        let (prefix, dim) = s.split_once(':').ok_or_else(bad)?;
        let family = match prefix {
            "flat" => Family::Flat,
            "sphere" => Family::Sphere,
            "rhn" => Family::RealHyperbolic,
            "cpn" => Family::ComplexProjective,
            "chn" => Family::ComplexHyperbolic,
            "hpn" => Family::QuaternionicProjective,
            "qhn" => Family::QuaternionicHyperbolic,
            _ => return Err(bad()),
        };
        let m: u32 = dim.parse().map_err(|_| bad())?;
        ModelSpace::new(family, m).map_err(|_| bad())
    }
}

/// Eigenvalue/multiplicity decomposition of the (parallel) curvature operator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurvatureSpectrum {
    entries: Vec<(Rational64, usize)>,
}

impl CurvatureSpectrum {
    pub fn new(entries: Vec<(Rational64, usize)>) -> Self {
        CurvatureSpectrum { entries }
    }

    pub fn entries(&self) -> &[(Rational64, usize)] {
        &self.entries
    }

    /// Total multiplicity, the dimension of the normal space.
    pub fn dimension(&self) -> usize {
        self.entries.iter().map(|&(_, k)| k).sum()
    }

    /// Eigenvalues repeated by multiplicity, in catalog order.
    pub fn diagonal(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|&(ev, k)| std::iter::repeat_n(ev.to_f64().unwrap_or(f64::NAN), k))
            .collect()
    }
}

/// Density exponents `(alpha, beta)`, kept exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ExponentPair {
    alpha: Rational64,
    beta: Rational64,
}

impl ExponentPair {
    pub fn new(alpha: Rational64, beta: Rational64) -> Result<Self> {
        if alpha < Rational64::zero() || beta < Rational64::zero() {
            return Err(Error::InvalidExponents(format!("alpha = {alpha}, beta = {beta}")));
        }
        Ok(ExponentPair { alpha, beta })
    }

    pub fn from_integers(alpha: i64, beta: i64) -> Result<Self> {
        Self::new(Rational64::from_integer(alpha), Rational64::from_integer(beta))
    }

    /// Converts floating exponents, which must be integers or half-integers.
    pub fn from_f64(alpha: f64, beta: f64) -> Result<Self> {
        let exact = |x: f64| -> Result<Rational64> {
            let twice = (2.0 * x).round();
            if !x.is_finite() || (2.0 * x - twice).abs() > 1e-12 || twice.abs() > 1e12 {
                return Err(Error::InvalidExponents(format!("{x} is not a half-integer")));
            }
            Ok(Rational64::new(twice as i64, 2))
        };
        Self::new(exact(alpha)?, exact(beta)?)
    }

    pub fn alpha(&self) -> Rational64 {
        self.alpha
    }
    pub fn beta(&self) -> Rational64 {
        self.beta
    }
    pub fn alpha_f64(&self) -> f64 {
        self.alpha.to_f64().unwrap_or(f64::NAN)
    }
    pub fn beta_f64(&self) -> f64 {
        self.beta.to_f64().unwrap_or(f64::NAN)
    }

    /// `alpha + 2 beta + 1`; an integer for every realized density form.
    pub fn dimension(&self) -> Rational64 {
        self.alpha + self.beta * 2 + 1
    }

    /// Dimension as an integer, or an error when it is fractional.
    pub fn integer_dimension(&self) -> Result<u32> {
        let n = self.dimension();
        if !n.is_integer() || *n.numer() < 1 {
            return Err(Error::InvalidExponents(format!("alpha + 2 beta + 1 = {n}")));
        }
        Ok(*n.numer() as u32)
    }

    pub fn ricci(&self) -> Rational64 {
        self.alpha + self.beta / 2
    }

    /// `lambda_k = k (k + alpha + beta)`.
    pub fn spectrum(&self, k: u32) -> Rational64 {
        let k = Rational64::from_integer(k as i64);
        k * (k + self.alpha + self.beta)
    }

    pub fn first_eigenvalue(&self) -> Rational64 {
        self.spectrum(1)
    }

    /// `2^beta (1 - cos r)^beta sin^alpha r`.
    pub fn density(&self, r: f64) -> f64 {
        let (a, b) = (self.alpha_f64(), self.beta_f64());
        (2.0 * (1.0 - r.cos())).powf(b) * r.sin().powf(a)
    }

    /// `H = ((alpha + beta) cos r + beta) / sin r`.
    pub fn mean_curvature(&self, r: f64) -> f64 {
        let (a, b) = (self.alpha_f64(), self.beta_f64());
        ((a + b) * r.cos() + b) / r.sin()
    }

    /// Equality in the first-eigenvalue estimate: `lambda_1 = n - beta = (2 ric + n + 2) / 3`.
    pub fn ros_equality_check(&self, n: i64) -> Result<bool> {
        if self.dimension() != Rational64::from_integer(n) {
            return Err(Error::InconsistentExponents {
                alpha: self.alpha.to_string(),
                beta: self.beta.to_string(),
                n,
            });
        }
        let n = Rational64::from_integer(n);
        let target = n - self.beta;
        let bound = (self.ricci() * 2 + n + 2) / 3;
        Ok(self.first_eigenvalue() == target && bound == target)
    }
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha, self.beta)
    }
}

/// Free-function form of [`ExponentPair::spectrum`].
pub fn spectrum(exponents: &ExponentPair, k: u32) -> Rational64 {
    exponents.spectrum(k)
}

/// Free-function form of [`ExponentPair::ros_equality_check`].
pub fn ros_equality_check(exponents: &ExponentPair, n: i64) -> Result<bool> {
    exponents.ros_equality_check(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn spectrum_examples() {
        let s2 = ModelSpace::sphere(2).unwrap();
        assert_eq!(s2.curvature_spectrum().entries(), &[(r(1, 1), 1)]);
        let cp2 = ModelSpace::complex_projective(2).unwrap();
        assert_eq!(cp2.curvature_spectrum().entries(), &[(r(1, 1), 1), (r(1, 4), 2)]);
        let op2 = ModelSpace::octonionic_plane();
        assert_eq!(op2.curvature_spectrum().entries(), &[(r(1, 1), 7), (r(1, 4), 8)]);
        let cp1 = ModelSpace::complex_projective(1).unwrap();
        assert_eq!(cp1.curvature_spectrum().entries(), &[(r(1, 1), 1)]);
    }

    #[test]
    fn multiplicities_sum_to_normal_dimension() {
        for s in ModelSpace::compact_catalog(16).into_iter().chain(ModelSpace::noncompact_catalog(16)) {
            assert_eq!(s.curvature_spectrum().dimension(), s.n() as usize - 1, "{s}");
        }
    }

    #[test]
    fn closed_form_examples() {
        let s2 = ModelSpace::sphere(2).unwrap();
        assert!((s2.closed_form_density(PI / 2.0).unwrap() - 1.0).abs() < 1e-15);
        let cp2 = ModelSpace::complex_projective(2).unwrap();
        assert!((cp2.closed_form_density(PI / 2.0).unwrap() - 2.0).abs() < 1e-15);
        let flat = ModelSpace::flat(4).unwrap();
        assert!((flat.closed_form_density(1.7).unwrap() - 1.7f64.powi(3)).abs() < 1e-14);
    }

    #[test]
    fn closed_form_domain() {
        let s3 = ModelSpace::sphere(3).unwrap();
        assert!(matches!(s3.closed_form_density(0.0), Err(Error::Domain { .. })));
        assert!(matches!(s3.closed_form_density(PI), Err(Error::Domain { .. })));
        assert!(s3.closed_form_density(-1.0).is_err());
        let h = ModelSpace::real_hyperbolic(3).unwrap();
        assert!(h.closed_form_density(10.0).is_ok());
    }

    #[test]
    fn exponent_examples() {
        let e = |s: &str| s.parse::<ModelSpace>().unwrap().exponents().unwrap();
        assert_eq!(e("sphere:3"), ExponentPair::from_integers(2, 0).unwrap());
        assert_eq!(e("cpn:3"), ExponentPair::from_integers(1, 2).unwrap());
        assert_eq!(e("op2"), ExponentPair::from_integers(7, 4).unwrap());
        assert_eq!(e("hpn:2"), ExponentPair::from_integers(3, 2).unwrap());
        assert!(matches!(
            ModelSpace::flat(3).unwrap().exponents(),
            Err(Error::UnsupportedSpace(_))
        ));
        assert!(ModelSpace::complex_hyperbolic(2).unwrap().exponents().is_err());
    }

    #[test]
    fn exponent_pair_invariant_and_ross_pattern() {
        for s in ModelSpace::compact_catalog(16) {
            let e = s.exponents().unwrap();
            let n = s.n() as i64;
            assert_eq!(e.alpha() + e.beta() * 2, r(n - 1, 1), "{s}");
            let beta_expected = match *e.alpha().numer() {
                a if a == n - 1 => r(0, 1),
                1 => r(n - 2, 2),
                3 => r(n - 4, 2),
                7 => r(n - 8, 2),
                other => panic!("unexpected alpha {other} for {s}"),
            };
            assert_eq!(e.beta(), beta_expected, "{s}");
        }
    }

    #[test]
    fn closed_form_matches_exponent_form() {
        for s in ModelSpace::compact_catalog(16) {
            let e = s.exponents().unwrap();
            let mut r = 0.1;
            while r < PI - 0.1 + 1e-9 {
                let a = s.closed_form_density(r).unwrap();
                let b = e.density(r);
                assert!(((a - b) / a).abs() <= 1e-12, "{s} at r = {r}: {a} vs {b}");
                r += 0.1;
            }
        }
    }

    #[test]
    fn ricci_examples() {
        assert_eq!(ModelSpace::sphere(3).unwrap().ricci().unwrap(), r(2, 1));
        assert_eq!(ModelSpace::complex_projective(2).unwrap().ricci().unwrap(), r(3, 2));
        assert_eq!(ModelSpace::octonionic_plane().ricci().unwrap(), r(9, 1));
    }

    #[test]
    fn spectrum_values() {
        let s3 = ExponentPair::from_integers(2, 0).unwrap();
        assert_eq!(spectrum(&s3, 2), r(8, 1));
        assert_eq!(spectrum(&s3, 0), r(0, 1));
        let cp2 = ExponentPair::from_integers(1, 1).unwrap();
        assert_eq!(spectrum(&cp2, 1), r(3, 1));
        for s in ModelSpace::compact_catalog(16) {
            let e = s.exponents().unwrap();
            assert!((0..12).map(|k| e.spectrum(k)).collect::<Vec<_>>().windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn ros_examples() {
        let s5 = ExponentPair::from_integers(4, 0).unwrap();
        assert!(ros_equality_check(&s5, 5).unwrap());
        let cp2 = ExponentPair::from_integers(1, 1).unwrap();
        assert!(ros_equality_check(&cp2, 4).unwrap());
        assert!(matches!(
            ros_equality_check(&cp2, 5),
            Err(Error::InconsistentExponents { .. })
        ));
        for s in ModelSpace::compact_catalog(16) {
            assert!(s.exponents().unwrap().ros_equality_check(s.n() as i64).unwrap(), "{s}");
        }
    }

    #[test]
    fn ids_round_trip() {
        for id in ["flat:4", "sphere:3", "cpn:2", "hpn:3", "op2", "rhn:5", "chn:2", "qhn:1", "oh2"] {
            let s: ModelSpace = id.parse().unwrap();
            assert_eq!(s.to_string(), id);
        }
        assert_eq!("op2".parse::<ModelSpace>().unwrap().n(), 16);
        assert_eq!("hpn:3".parse::<ModelSpace>().unwrap().n(), 12);
        for bad in ["sphere:0", "sphere:1", "sphere", "cpn:x", "torus:3", "op3", "cpn:0", "SPHERE:3"] {
            assert!(matches!(bad.parse::<ModelSpace>(), Err(Error::InvalidSpaceId(_))), "{bad}");
        }
    }

    #[test]
    fn half_integer_exponents() {
        let e = ExponentPair::from_f64(1.0, 0.5).unwrap();
        assert_eq!(e.beta(), r(1, 2));
        assert!(ExponentPair::from_f64(1.3, 0.0).is_err());
        assert!(ExponentPair::from_f64(-1.0, 0.0).is_err());
    }
}
