//! The symmetric algebra `Sym(g_C)`: sparse symmetric tensors in the monomial
//! basis, the symmetrizer, polarization and the ℓ¹ / R-topology seminorms.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{int, GaussianRational, HbarScalar, Rational};

/// Exponent vector `a` of the monomial `e_1^{a_1} ∨ … ∨ e_n^{a_n}`.
///
/// Also used for ordered PBW monomials, where the same vector means
/// `e_1^{a_1} ··· e_n^{a_n}` in increasing index order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(dim: usize) -> Self {
        Monomial(vec![0; dim])
    }

    pub fn generator(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Monomial(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise `self - other`, or `None` if `other` does not divide.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(Monomial)
    }

    /// The nondecreasing word with this letter content.
    pub fn sorted_word(&self) -> Vec<usize> {
        self.0.iter().enumerate().flat_map(|(i, &a)| std::iter::repeat_n(i, a as usize)).collect()
    }

    pub fn from_word(dim: usize, word: &[usize]) -> Monomial {
        let mut e = vec![0; dim];
        for &l in word {
            e[l] += 1;
        }
        Monomial(e)
    }

    /// All exponent vectors `b` with `b ≤ self` componentwise.
    pub fn divisors(&self) -> Vec<Monomial> {
        let mut out = vec![Vec::with_capacity(self.dim())];
        for &a in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=a).map(move |b| {
                        let mut v = prefix.clone();
                        v.push(b);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(Monomial).collect()
    }

    /// Multinomial coefficient `k! / (a_1! ··· a_n!)`: the number of distinct
    /// words with this content.
    pub fn multinomial(&self) -> Rational {
        let mut r = factorial(self.degree());
        for &a in &self.0 {
            r /= factorial(a as usize);
        }
        r
    }

    /// `prod_i a_i!`.
    pub fn factorial_product(&self) -> Rational {
        self.0.iter().fold(Rational::one(), |acc, &a| acc * factorial(a as usize))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

pub fn factorial(k: usize) -> Rational {
    (1..=k as i64).fold(Rational::one(), |acc, j| acc * int(j))
}

pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    factorial(n as usize) / (factorial(k as usize) * factorial((n - k) as usize))
}

/// Visits every distinct permutation of a multiset given by its content
/// (lexicographic order).
pub fn for_each_distinct_word(content: &Monomial, mut f: impl FnMut(&[usize])) {
    fn rec(counts: &mut [u32], word: &mut Vec<usize>, len: usize, f: &mut dyn FnMut(&[usize])) {
        if word.len() == len {
            f(word);
            return;
        }
        for i in 0..counts.len() {
            if counts[i] > 0 {
                counts[i] -= 1;
                word.push(i);
                rec(counts, word, len, f);
                word.pop();
                counts[i] += 1;
            }
        }
    }
    let mut counts = content.0.clone();
    let mut word = Vec::with_capacity(content.degree());
    rec(&mut counts, &mut word, content.degree(), &mut f);
}

/// Element of `Sym(g_C)` with coefficients in `Q(i)[hbar]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymTensor {
    dim: usize,
    terms: BTreeMap<Monomial, HbarScalar>,
}

impl SymTensor {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, HbarScalar::one())
    }

    pub fn constant(dim: usize, c: HbarScalar) -> Self {
        Self::term(Monomial::one(dim), c)
    }

    pub fn generator(dim: usize, i: usize) -> Self {
        Self::term(Monomial::generator(dim, i), HbarScalar::one())
    }

    pub fn term(m: Monomial, c: HbarScalar) -> Self {
        let mut t = Self::zero(m.dim());
        t.add_term(m, &c);
        t
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Monomial, HbarScalar)>) -> Self {
        let mut t = Self::zero(dim);
        for (m, c) in terms {
            assert_eq!(m.dim(), dim, "monomial dimension");
            t.add_term(m, &c);
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, HbarScalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, HbarScalar> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> HbarScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: &HbarScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Polynomial degree (maximal total exponent); `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Maximal `hbar` degree over all coefficients.
    pub fn hbar_degree(&self) -> Option<usize> {
        self.terms.values().filter_map(HbarScalar::degree).max()
    }

    pub fn homogeneous_part(&self, k: usize) -> SymTensor {
        Self {
            dim: self.dim,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == k).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Monomial, &HbarScalar) -> HbarScalar) -> SymTensor {
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(m, c));
        }
        out
    }

    pub fn scale(&self, s: &HbarScalar) -> SymTensor {
        self.map_coeffs(|_, c| c * s)
    }

    pub fn add(&self, other: &SymTensor) -> Result<SymTensor> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SymTensor) -> Result<SymTensor> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SymTensor {
        self.map_coeffs(|_, c| -c)
    }

    fn check_dim(&self, other: &SymTensor) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    /// Exact evaluation at a point of `g*` with a fixed exact `hbar`.
    pub fn eval_exact(&self, point: &[GaussianRational], hbar: &GaussianRational) -> GaussianRational {
        let mut total = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut coeff = GaussianRational::zero();
            for cj in c.coeffs().iter().rev() {
                coeff = &(&coeff * hbar) + cj;
            }
            let mut v = coeff;
            for (i, &a) in m.0.iter().enumerate() {
                for _ in 0..a {
                    v = &v * &point[i];
                }
            }
            total += &v;
        }
        total
    }

    pub fn to_json(&self) -> SymTensorJson {
        SymTensorJson {
            terms: self.terms.iter().map(|(m, c)| SymTermJson { exp: m.0.clone(), coeff: c.clone() }).collect(),
        }
    }

    pub fn from_json(dim: usize, json: &SymTensorJson) -> Result<SymTensor> {
        let mut out = Self::zero(dim);
        for t in &json.terms {
            if t.exp.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: t.exp.len() });
            }
            out.add_term(Monomial(t.exp.clone()), &t.coeff);
        }
        Ok(out)
    }
}

impl fmt::Debug for SymTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})*{m:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// JSON form `{"terms": [{"exp": [...], "coeff": [["re","im"], ...]}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SymTensorJson {
    pub terms: Vec<SymTermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SymTermJson {
    pub exp: Vec<u32>,
    pub coeff: HbarScalar,
}

/// Element of the tensor algebra: words (0-based letters) with coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorWordExpr {
    pub dim: usize,
    pub terms: BTreeMap<Vec<usize>, HbarScalar>,
}

impl TensorWordExpr {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn add_word(&mut self, word: Vec<usize>, c: &HbarScalar) -> Result<()> {
        if let Some(&bad) = word.iter().find(|&&l| l >= self.dim) {
            return Err(Error::DimensionMismatch { expected: self.dim, found: bad + 1 });
        }
        let e = self.terms.entry(word).or_default();
        *e += c;
        self.terms.retain(|_, c| !c.is_zero());
        Ok(())
    }

    /// Canonical inclusion `Sym → T`: `e_{j1} ∨ … ∨ e_{jk}` is the average of
    /// its `k!` orderings, so each distinct word of content `a` gets weight
    /// `a_1!···a_n!/k!`.
    pub fn include(p: &SymTensor) -> TensorWordExpr {
        let mut out = TensorWordExpr::zero(p.dim());
        for (m, c) in p.terms() {
            let w = c.scale_rational(&(m.factorial_product() / factorial(m.degree())));
            for_each_distinct_word(m, |word| {
                let e = out.terms.entry(word.to_vec()).or_default();
                *e += &w;
            });
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }
}

/// Symmetrizer: each word is sent to the monomial of its letter content.
pub fn symmetrize(t: &TensorWordExpr) -> SymTensor {
    let mut out = SymTensor::zero(t.dim);
    for (w, c) in &t.terms {
        out.add_term(Monomial::from_word(t.dim, w), c);
    }
    out
}

/// Symmetric product `p ∨ q`.
pub fn sym_product(p: &SymTensor, q: &SymTensor) -> Result<SymTensor> {
    p.check_dim(q)?;
    let mut out = SymTensor::zero(p.dim());
    for (a, ca) in p.terms() {
        for (b, cb) in q.terms() {
            out.add_term(a.mul(b), &(ca * cb));
        }
    }
    Ok(out)
}

/// Scalars over which polarization can be carried out.
pub trait PolarizationScalar: Clone {
    fn pzero() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn scale_int(&self, k: i64) -> Self;
    fn div_int(&self, k: u64) -> Self;
}

impl PolarizationScalar for GaussianRational {
    fn pzero() -> Self {
        Zero::zero()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn scale_int(&self, k: i64) -> Self {
        self.scale(&int(k))
    }
    fn div_int(&self, k: u64) -> Self {
        self.scale(&Rational::new(1.into(), k.into()))
    }
}

impl PolarizationScalar for Complex64 {
    fn pzero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn scale_int(&self, k: i64) -> Self {
        self * k as f64
    }
    fn div_int(&self, k: u64) -> Self {
        self / k as f64
    }
}

/// Recovers the symmetric `k`-linear form of a `k`-homogeneous polynomial:
/// `(2^k k!)^{-1} Σ_{ε ∈ {±1}^k} ε_1···ε_k P(Σ ε_j v_j)`.
///
/// Garbage in, garbage out if `poly` is not `k`-homogeneous with
/// `k = vectors.len()`.
pub fn polarize<T: PolarizationScalar>(poly: impl Fn(&[T]) -> T, vectors: &[Vec<T>]) -> T {
    let k = vectors.len();
    if k == 0 {
        return poly(&[]);
    }
    let n = vectors[0].len();
    let mut total = T::pzero();
    for signs in 0u64..(1 << k) {
        let mut point = vec![T::pzero(); n];
        let mut parity = 1i64;
        for (j, v) in vectors.iter().enumerate() {
            if signs >> j & 1 == 1 {
                parity = -parity;
                for (x, y) in point.iter_mut().zip(v) {
                    *x = x.sub(y);
                }
            } else {
                for (x, y) in point.iter_mut().zip(v) {
                    *x = x.add(y);
                }
            }
        }
        total = total.add(&poly(&point).scale_int(parity));
    }
    let fact: u64 = (1..=k as u64).product();
    total.div_int((1u64 << k) * fact)
}

/// Sum of the moduli of the coefficients of each homogeneous degree, with
/// coefficients evaluated at `hbar`. Index `k` of the result is degree `k`.
///
/// For the ℓ¹ base norm every monomial `e_{j1} ∨ … ∨ e_{jk}` has projective
/// norm exactly one, so this is the projective tensor norm of each part.
pub fn l1_proj_norm(p: &SymTensor, hbar: Complex64) -> Vec<f64> {
    let mut out = vec![0.0; p.degree().map_or(0, |d| d + 1)];
    for (m, c) in p.terms() {
        out[m.degree()] += c.eval(hbar).norm();
    }
    out
}

/// R-topology seminorm `p_{R,c} = Σ_k c^k (k!)^R ‖p_k‖_{ℓ¹, proj}`.
pub fn seminorm_rc(p: &SymTensor, r: f64, c: f64, hbar: Complex64) -> f64 {
    l1_proj_norm(p, hbar)
        .iter()
        .enumerate()
        .map(|(k, norm)| {
            let fact: f64 = (1..=k).map(|j| j as f64).product();
            c.powi(k as i32) * fact.powf(r) * norm
        })
        .sum()
}
