//! Exact scalars: Gaussian rationals `Q(i)` and polynomials in the formal
//! deformation parameter `hbar` with Gaussian-rational coefficients.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) || !whole_digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{whole_digits}{frac}");
        let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(n, d);
        return Ok(if negative { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator/denominator may individually overflow f64
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Element `re + i·im` of `Q(i)`.
///
/// `BigRational` keeps both parts in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(int(n))
    }

    pub fn i() -> Self {
        Self { re: Rational::zero(), im: Rational::one() }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self { re: &self.re * r, im: &self.im * r }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    /// The exact value of a finite double-precision complex number.
    pub fn from_complex_exact(z: Complex64) -> Result<Self> {
        let conv = |x: f64| Rational::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite value {x}")));
        Ok(Self { re: conv(z.re)?, im: conv(z.im)? })
    }

    /// Parses the `["re", "im"]` pair used by every JSON schema of the crate.
    pub fn from_pair(re: &str, im: &str) -> Result<Self> {
        Ok(Self { re: parse_rational(re)?, im: parse_rational(im)? })
    }

    pub fn to_pair(&self) -> [String; 2] {
        [format_rational(&self.re), format_rational(&self.im)]
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(Rational::one())
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        Self::real(r)
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.re)),
            (true, false) => write!(f, "{}*I", format_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(f, "({}{}{}*I)", format_rational(&self.re), sign, format_rational(&self.im.abs()))
            }
        }
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pair().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [re, im]: [String; 2] = Deserialize::deserialize(d)?;
        Self::from_pair(&re, &im).map_err(serde::de::Error::custom)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussianRational::real(&self.re * &o.re);
        }
        GaussianRational { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -(self.clone())
    }
}

macro_rules! forward_owned {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(GaussianRational, Add, add);
forward_owned!(GaussianRational, Sub, sub);
forward_owned!(GaussianRational, Mul, mul);

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, o: &GaussianRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, o: &GaussianRational) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

/// Polynomial in the formal parameter `hbar` with `Q(i)` coefficients.
///
/// `coeffs[j]` is the coefficient of `hbar^j`; trailing zeros are never
/// stored, so the zero scalar is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct HbarScalar {
    coeffs: Vec<GaussianRational>,
}

impl HbarScalar {
    pub fn from_coeffs(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn rational(r: Rational) -> Self {
        Self::constant(GaussianRational::real(r))
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(int(n))
    }

    /// `hbar` itself.
    pub fn hbar() -> Self {
        Self::from_coeffs(vec![GaussianRational::zero(), GaussianRational::one()])
    }

    /// `c · hbar^k`.
    pub fn monomial(c: GaussianRational, k: usize) -> Self {
        let mut coeffs = vec![GaussianRational::zero(); k];
        coeffs.push(c);
        Self::from_coeffs(coeffs)
    }

    /// The factor `hbar / i`, stored as `-i · hbar`.
    pub fn hbar_over_i() -> Self {
        Self::monomial(-GaussianRational::i(), 1)
    }

    /// `(hbar / i)^k = (-i)^k hbar^k`.
    pub fn hbar_over_i_pow(k: usize) -> Self {
        let unit = match k % 4 {
            0 => GaussianRational::one(),
            1 => -GaussianRational::i(),
            2 => -GaussianRational::one(),
            _ => GaussianRational::i(),
        };
        Self::monomial(unit, k)
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    /// Coefficient of `hbar^j` (zero beyond the degree).
    pub fn coeff(&self, j: usize) -> GaussianRational {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    /// Degree in `hbar`; `None` for the zero scalar.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|x| x.scale(r)).collect() }
    }

    /// Multiplies by `hbar^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![GaussianRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Formal derivative with respect to `hbar`.
    pub fn derivative(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().enumerate().skip(1).map(|(j, c)| c.scale(&int(j as i64))).collect())
    }

    /// Horner evaluation at a complex value of `hbar`.
    pub fn eval(&self, hbar: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * hbar + c.to_complex())
    }

    /// Exact evaluation at a Gaussian rational `hbar`.
    pub fn eval_exact(&self, hbar: &GaussianRational) -> GaussianRational {
        self.coeffs.iter().rev().fold(GaussianRational::zero(), |acc, c| &(&acc * hbar) + c)
    }
}

/// Evaluates `s` at `hbar`.
pub fn hbar_eval(s: &HbarScalar, hbar: Complex64) -> Complex64 {
    s.eval(hbar)
}

impl Zero for HbarScalar {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for HbarScalar {
    fn one() -> Self {
        Self::constant(GaussianRational::one())
    }
}

impl From<GaussianRational> for HbarScalar {
    fn from(c: GaussianRational) -> Self {
        Self::constant(c)
    }
}

impl fmt::Debug for HbarScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for HbarScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*hbar")?,
                _ => write!(f, "{c}*hbar^{j}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for HbarScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HbarScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coeffs: Vec<GaussianRational> = Deserialize::deserialize(d)?;
        Ok(Self::from_coeffs(coeffs))
    }
}

impl<'a> Add<&'a HbarScalar> for &'a HbarScalar {
    type Output = HbarScalar;
    fn add(self, o: &HbarScalar) -> HbarScalar {
        let n = self.coeffs.len().max(o.coeffs.len());
        HbarScalar::from_coeffs((0..n).map(|j| &self.coeff(j) + &o.coeff(j)).collect())
    }
}

impl<'a> Sub<&'a HbarScalar> for &'a HbarScalar {
    type Output = HbarScalar;
    fn sub(self, o: &HbarScalar) -> HbarScalar {
        let n = self.coeffs.len().max(o.coeffs.len());
        HbarScalar::from_coeffs((0..n).map(|j| &self.coeff(j) - &o.coeff(j)).collect())
    }
}

impl<'a> Mul<&'a HbarScalar> for &'a HbarScalar {
    type Output = HbarScalar;
    fn mul(self, o: &HbarScalar) -> HbarScalar {
        if self.is_zero() || o.is_zero() {
            return HbarScalar::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        HbarScalar::from_coeffs(out)
    }
}

impl Neg for HbarScalar {
    type Output = HbarScalar;
    fn neg(self) -> HbarScalar {
        HbarScalar { coeffs: self.coeffs.into_iter().map(Neg::neg).collect() }
    }
}

impl Neg for &HbarScalar {
    type Output = HbarScalar;
    fn neg(self) -> HbarScalar {
        -(self.clone())
    }
}

forward_owned!(HbarScalar, Add, add);
forward_owned!(HbarScalar, Sub, sub);
forward_owned!(HbarScalar, Mul, mul);

impl AddAssign<&HbarScalar> for HbarScalar {
    fn add_assign(&mut self, o: &HbarScalar) {
        if self.coeffs.len() < o.coeffs.len() {
            self.coeffs.resize(o.coeffs.len(), GaussianRational::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a += b;
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
}

impl SubAssign<&HbarScalar> for HbarScalar {
    fn sub_assign(&mut self, o: &HbarScalar) {
        *self += &(-o);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/-4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(4, -6)), "-2/3");
    }

    #[test]
    fn lowest_terms_positive_denominator() {
        let g = GaussianRational::new(rat(2, -4), rat(3, 9));
        assert_eq!(g.re.denom(), &BigInt::from(2));
        assert!(g.re.is_negative());
        assert_eq!(g.im, rat(1, 3));
    }

    #[test]
    fn gaussian_inverse() {
        let z = GaussianRational::new(int(3), int(4));
        assert_eq!(&z * &z.inv().unwrap(), GaussianRational::one());
        assert!(GaussianRational::zero().inv().is_err());
    }

    #[test]
    fn eval_constant_term() {
        let s = &HbarScalar::one() + &HbarScalar::monomial(GaussianRational::new(int(0), rat(1, 2)), 2);
        assert_eq!(s.eval(c(0.0, 0.0)), c(1.0, 0.0));
    }

    #[test]
    fn eval_hbar() {
        assert_eq!(hbar_eval(&HbarScalar::hbar(), c(2.0, 0.0)), c(2.0, 0.0));
    }

    #[test]
    fn hbar_over_i_squared() {
        let sq = &HbarScalar::hbar_over_i() * &HbarScalar::hbar_over_i();
        assert_eq!(sq, HbarScalar::monomial(-GaussianRational::one(), 2));
        assert_eq!(sq.eval(c(1.0, 0.0)), c(-1.0, 0.0));
        assert_eq!(HbarScalar::hbar_over_i_pow(2), sq);
        assert_eq!(HbarScalar::hbar_over_i_pow(3), &sq * &HbarScalar::hbar_over_i());
    }

    #[test]
    fn canonical_form_drops_trailing_zeros() {
        let s = &HbarScalar::hbar() - &HbarScalar::hbar();
        assert!(s.is_zero());
        assert_eq!(s.degree(), None);
        assert_eq!(HbarScalar::hbar().derivative(), HbarScalar::one());
    }
}
