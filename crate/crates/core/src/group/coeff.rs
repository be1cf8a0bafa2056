//! Coefficient functions on `G`.
//!
//! A matrix-element function lives on a tensor product `V_1 ⊗ … ⊗ V_m` of
//! representations and reads `φ(g) = ⟨w, (g_1 π_1(g) ⊗ … ⊗ g_m π_m(g)) v⟩`
//! with a bilinear pairing, so it extends holomorphically as is. The Lie
//! derivative along `e_i` replaces `v` by `Σ_f (1 ⊗ … ρ_{f,i} … ⊗ 1) v`, and the
//! word `(α_1, …, α_k)` acts as `Lie_{α_1} ∘ … ∘ Lie_{α_k}`, i.e.
//! `v ↦ ρ_{α_1} ··· ρ_{α_k} v`. Products concatenate factors, so all of this
//! stays exact. With no factors the function is the constant `⟨w, v⟩`.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::element::GroupElementExpr;
use super::rep::{catalog_rep, dot, jordan_left_vector, jordan_rep, ExactVec, MatrixRep, MatrixRepJson};
use crate::error::{Error, Result};
use crate::scalar::GaussianRational;
use crate::sym::{factorial, Monomial};

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixElementFunction {
    n: usize,
    factors: Vec<Arc<MatrixRep>>,
    w: ExactVec,
    v: ExactVec,
    /// Optional left translation `g_0`, one matrix per factor.
    base: Option<Vec<DMatrix<Complex64>>>,
}

fn shape_len(factors: &[Arc<MatrixRep>]) -> usize {
    factors.iter().map(|f| f.d()).product()
}

impl MatrixElementFunction {
    pub fn new(rep: Arc<MatrixRep>, w: ExactVec, v: ExactVec) -> Result<Self> {
        Self::tensor(rep.algebra_dim(), vec![rep], w, v)
    }

    pub fn tensor(n: usize, factors: Vec<Arc<MatrixRep>>, w: ExactVec, v: ExactVec) -> Result<Self> {
        let len = shape_len(&factors);
        if let Some(f) = factors.iter().find(|f| f.algebra_dim() != n) {
            return Err(Error::GroupDataMismatch(format!(
                "representation of a {}-dimensional algebra in a {n}-dimensional context",
                f.algebra_dim()
            )));
        }
        for x in [&w, &v] {
            if x.len() != len {
                return Err(Error::DimensionMismatch { expected: len, found: x.len() });
            }
        }
        Ok(Self { n, factors, w, v, base: None })
    }

    pub fn constant(n: usize, c: GaussianRational) -> Self {
        Self { n, factors: Vec::new(), w: vec![c], v: vec![GaussianRational::one()], base: None }
    }

    /// Left-translates by `g_0`: `φ(g) = ⟨w, g_0 π(g) v⟩`.
    pub fn with_base(mut self, g0: &GroupElementExpr) -> Result<Self> {
        let mats = self.factors.iter().map(|f| g0.eval(f)).collect::<Result<Vec<_>>>()?;
        self.base = Some(match self.base.take() {
            None => mats,
            Some(old) => old.iter().zip(mats).map(|(a, b)| a * b).collect(),
        });
        Ok(self)
    }

    pub fn algebra_dim(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[Arc<MatrixRep>] {
        &self.factors
    }

    pub fn left(&self) -> &[GaussianRational] {
        &self.w
    }

    pub fn right(&self) -> &[GaussianRational] {
        &self.v
    }

    pub fn base(&self) -> Option<&[DMatrix<Complex64>]> {
        self.base.as_deref()
    }

    pub fn is_zero(&self) -> bool {
        self.v.iter().all(Zero::is_zero) || self.w.iter().all(Zero::is_zero)
    }

    /// `(1 ⊗ … ρ_{f,i} … ⊗ 1)` summed over factors, applied to `x`.
    pub fn apply_generator(&self, i: usize, x: &[GaussianRational]) -> ExactVec {
        let mut out = vec![GaussianRational::zero(); x.len()];
        let mut left = 1;
        let total = x.len();
        for f in &self.factors {
            let d = f.d();
            let right = total / (left * d);
            for (r, c, val) in f.entries(i) {
                for l in 0..left {
                    for rr in 0..right {
                        let src = &x[(l * d + c) * right + rr];
                        if !src.is_zero() {
                            out[(l * d + r) * right + rr] += &(val * src);
                        }
                    }
                }
            }
            left *= d;
        }
        out
    }

    /// `ρ_{α_1} ··· ρ_{α_k} x`.
    pub fn apply_word(&self, word: &[usize], x: &[GaussianRational]) -> ExactVec {
        let mut u = x.to_vec();
        for &l in word.iter().rev() {
            u = self.apply_generator(l, &u);
        }
        u
    }

    pub fn with_right(&self, v: ExactVec) -> Self {
        Self { v, ..self.clone() }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.with_right(self.v.iter().map(|x| x * c).collect())
    }

    fn check_word(&self, word: &[usize]) -> Result<()> {
        match word.iter().find(|&&l| l >= self.n) {
            Some(&l) => Err(Error::DimensionMismatch { expected: self.n, found: l + 1 }),
            None => Ok(()),
        }
    }

    pub fn lie_derive_word(&self, word: &[usize]) -> Result<Self> {
        self.check_word(word)?;
        Ok(self.with_right(self.apply_word(word, &self.v)))
    }

    /// `Σ c_α Lie(α) φ` in one pass.
    pub fn lie_derive_combination(&self, words: &[(Vec<usize>, GaussianRational)]) -> Result<Self> {
        let mut acc = vec![GaussianRational::zero(); self.v.len()];
        for (word, c) in words {
            self.check_word(word)?;
            for (a, b) in acc.iter_mut().zip(self.apply_word(word, &self.v)) {
                if !b.is_zero() {
                    *a += &(&b * c);
                }
            }
        }
        Ok(self.with_right(acc))
    }

    /// Pointwise product. Factors concatenate; constant factors fold in.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::GroupDataMismatch("coefficient functions over different algebras".into()));
        }
        if self.factors.is_empty() && self.base.is_none() {
            let c = &self.w[0] * &self.v[0];
            return Ok(other.scale(&c));
        }
        if other.factors.is_empty() && other.base.is_none() {
            let c = &other.w[0] * &other.v[0];
            return Ok(self.scale(&c));
        }
        let kron = |a: &[GaussianRational], b: &[GaussianRational]| -> ExactVec {
            a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
        };
        let base = match (&self.base, &other.base) {
            (None, None) => None,
            (a, b) => {
                let ident =
                    |fs: &[Arc<MatrixRep>]| fs.iter().map(|f| DMatrix::identity(f.d(), f.d())).collect::<Vec<_>>();
                let mut m = a.clone().unwrap_or_else(|| ident(&self.factors));
                m.extend(b.clone().unwrap_or_else(|| ident(&other.factors)));
                Some(m)
            }
        };
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(Self { n: self.n, factors, w: kron(&self.w, &other.w), v: kron(&self.v, &other.v), base })
    }

    fn same_space(&self, other: &Self) -> bool {
        self.factors.len() == other.factors.len()
            && self.factors.iter().zip(&other.factors).all(|(a, b)| Arc::ptr_eq(a, b) || a == b)
            && self.w == other.w
            && self.base == other.base
    }

    pub fn eval(&self, g: &GroupElementExpr) -> Result<Complex64> {
        let mut cache = EvalCache::new(g.clone());
        self.eval_cached(&mut cache)
    }

    fn eval_cached(&self, cache: &mut EvalCache) -> Result<Complex64> {
        let mut u: Vec<Complex64> = self.v.iter().map(GaussianRational::to_complex).collect();
        let total = u.len();
        let mut left = 1;
        for (idx, f) in self.factors.iter().enumerate() {
            let mut m = cache.matrix(f)?;
            if let Some(b) = &self.base {
                m = &b[idx] * m;
            }
            let d = f.d();
            let right = total / (left * d);
            let mut next = vec![Complex64::zero(); total];
            for l in 0..left {
                for r in 0..d {
                    for c in 0..d {
                        let mrc = m[(r, c)];
                        if mrc == Complex64::zero() {
                            continue;
                        }
                        for rr in 0..right {
                            next[(l * d + r) * right + rr] += mrc * u[(l * d + c) * right + rr];
                        }
                    }
                }
            }
            u = next;
            left *= d;
        }
        Ok(self.w.iter().zip(&u).map(|(a, b)| a.to_complex() * b).sum())
    }

    /// The full `ρ_i` on the tensor product space, as complex matrices.
    pub fn full_generators(&self) -> Vec<DMatrix<Complex64>> {
        let len = self.v.len();
        (0..self.n)
            .map(|i| {
                let mut m = DMatrix::zeros(len, len);
                for c in 0..len {
                    let mut e = vec![GaussianRational::zero(); len];
                    e[c] = GaussianRational::one();
                    for (r, x) in self.apply_generator(i, &e).iter().enumerate() {
                        m[(r, c)] = x.to_complex();
                    }
                }
                m
            })
            .collect()
    }

    /// `(g_0 π(g))ᵀ w` as a complex vector, so that `φ(g·h) = ⟨w_g, π(h) v⟩`.
    pub fn pulled_left(&self, g: &GroupElementExpr) -> Result<Vec<Complex64>> {
        let len = self.v.len();
        let mut out = Vec::with_capacity(len);
        let mut cache = EvalCache::new(g.clone());
        for c in 0..len {
            let mut e = vec![GaussianRational::zero(); len];
            e[c] = GaussianRational::one();
            out.push(self.with_right(e).eval_cached(&mut cache)?);
        }
        Ok(out)
    }

    /// Coefficients of `x ↦ φ(exp(Σ x_i e_i))` as an exact polynomial, valid
    /// when the generators commute and act nilpotently.
    pub fn polynomial_coefficients(&self) -> Result<BTreeMap<Monomial, GaussianRational>> {
        if self.base.is_some() {
            return Err(Error::GroupDataMismatch("exact expansion needs an untranslated function".into()));
        }
        let limit = self.v.len();
        let mut out = BTreeMap::new();
        // depth-first over multi-indices, raising only indices ≥ the last raised
        let mut stack = vec![(Monomial::one(self.n), self.v.clone(), 0usize)];
        while let Some((a, u, start)) = stack.pop() {
            if u.iter().all(Zero::is_zero) {
                continue;
            }
            if a.degree() > limit {
                return Err(Error::InvalidRepresentation("generators are not nilpotent".into()));
            }
            let c = dot(&self.w, &u);
            if !c.is_zero() {
                let inv = a.0.iter().fold(GaussianRational::one(), |acc, &k| acc.scale(&factorial(k as usize)));
                out.insert(a.clone(), &c * &inv.inv()?);
            }
            for i in start..self.n {
                let mut b = a.clone();
                b.0[i] += 1;
                stack.push((b, self.apply_generator(i, &u), i));
            }
        }
        Ok(out)
    }
}

/// Caches `π_f(g)` per representation while evaluating sums.
struct EvalCache {
    g: GroupElementExpr,
    mats: Vec<(Arc<MatrixRep>, DMatrix<Complex64>)>,
}

impl EvalCache {
    fn new(g: GroupElementExpr) -> Self {
        Self { g, mats: Vec::new() }
    }

    fn matrix(&mut self, rep: &Arc<MatrixRep>) -> Result<DMatrix<Complex64>> {
        if let Some((_, m)) = self.mats.iter().find(|(r, _)| Arc::ptr_eq(r, rep)) {
            return Ok(m.clone());
        }
        let m = self.g.eval(rep)?;
        self.mats.push((rep.clone(), m.clone()));
        Ok(m)
    }
}

/// Finite Lie-Taylor data `(Lie(α)φ)(g_0)` for all words `|α| ≤ order`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    n: usize,
    order: usize,
    base: GroupElementExpr,
    coeffs: BTreeMap<Vec<usize>, Complex64>,
}

/// Calls `f` on every word of length `len` over `n` letters.
pub fn for_each_word(n: usize, len: usize, mut f: impl FnMut(&[usize])) {
    let mut w = vec![0usize; len];
    loop {
        f(&w);
        let mut p = len;
        loop {
            if p == 0 {
                return;
            }
            p -= 1;
            w[p] += 1;
            if w[p] < n {
                break;
            }
            w[p] = 0;
        }
    }
}

impl Jet {
    /// Missing words are zero.
    pub fn new(
        n: usize,
        order: usize,
        base: GroupElementExpr,
        coeffs: BTreeMap<Vec<usize>, Complex64>,
    ) -> Result<Self> {
        if let Some(w) = coeffs.keys().find(|w| w.len() > order || w.iter().any(|&l| l >= n)) {
            return Err(Error::DimensionMismatch { expected: order, found: w.len() });
        }
        Ok(Self { n, order, base, coeffs })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn base(&self) -> &GroupElementExpr {
        &self.base
    }

    pub fn algebra_dim(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, word: &[usize]) -> Complex64 {
        self.coeffs.get(word).copied().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<usize>, Complex64> {
        &self.coeffs
    }

    /// The jet of a matrix element at `base`.
    pub fn from_matrix(phi: &MatrixElementFunction, base: &GroupElementExpr, order: usize) -> Result<Self> {
        let wl = phi.pulled_left(base)?;
        let mut coeffs = BTreeMap::new();
        let mut level: Vec<(Vec<usize>, ExactVec)> = vec![(Vec::new(), phi.v.clone())];
        for k in 0..=order {
            let mut next = Vec::new();
            for (word, u) in &level {
                let val: Complex64 = wl.iter().zip(u).map(|(a, b)| a * b.to_complex()).sum();
                if val != Complex64::zero() {
                    coeffs.insert(word.clone(), val);
                }
                if k < order && u.iter().any(|x| !x.is_zero()) {
                    for i in 0..phi.n {
                        let mut w2 = vec![i];
                        w2.extend_from_slice(word);
                        next.push((w2, phi.apply_generator(i, u)));
                    }
                }
            }
            level = next;
        }
        Ok(Self { n: phi.n, order, base: base.clone(), coeffs })
    }

    /// `Lie(α)` of a jet: `(Lie(β) Lie(α) φ)(g_0) = (Lie(βα) φ)(g_0)`.
    pub fn lie_derive_word(&self, word: &[usize]) -> Result<Self> {
        if word.len() > self.order {
            return Err(Error::JetOrderExhausted { needed: word.len(), available: self.order });
        }
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(w, _)| w.ends_with(word))
            .map(|(w, c)| (w[..w.len() - word.len()].to_vec(), *c))
            .collect();
        Ok(Self { n: self.n, order: self.order - word.len(), base: self.base.clone(), coeffs })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let coeffs =
            self.coeffs.iter().map(|(w, x)| (w.clone(), x * c)).filter(|(_, x)| *x != Complex64::zero()).collect();
        Self { coeffs, ..self.clone() }
    }

    fn compatible(&self, other: &Jet) -> Result<()> {
        if self.n != other.n || self.base != other.base {
            return Err(Error::GroupDataMismatch("jets at different base points".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Jet) -> Result<Jet> {
        self.compatible(other)?;
        let order = self.order.min(other.order);
        let mut coeffs: BTreeMap<Vec<usize>, Complex64> = BTreeMap::new();
        for (w, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            if w.len() <= order {
                *coeffs.entry(w.clone()).or_default() += c;
            }
        }
        Ok(Self { n: self.n, order, base: self.base.clone(), coeffs })
    }

    /// Leibniz rule: `Lie(γ)(φψ) = Σ_{S} Lie(γ_S)φ · Lie(γ_{S^c})ψ` over
    /// subsets `S` of letter positions.
    pub fn mul(&self, other: &Jet) -> Result<Jet> {
        self.compatible(other)?;
        let order = self.order.min(other.order);
        let mut coeffs = BTreeMap::new();
        for len in 0..=order {
            for_each_word(self.n, len, |gamma| {
                let mut total = Complex64::zero();
                for mask in 0u32..(1 << len) {
                    let (mut a, mut b) = (Vec::new(), Vec::new());
                    for (p, &l) in gamma.iter().enumerate() {
                        if mask >> p & 1 == 1 {
                            a.push(l);
                        } else {
                            b.push(l);
                        }
                    }
                    total += self.coeff(&a) * other.coeff(&b);
                }
                if total != Complex64::zero() {
                    coeffs.insert(gamma.to_vec(), total);
                }
            });
        }
        Ok(Self { n: self.n, order, base: self.base.clone(), coeffs })
    }

    pub fn eval(&self, g: &GroupElementExpr) -> Result<Complex64> {
        if *g != self.base {
            return Err(Error::JetNotEvaluable);
        }
        Ok(self.coeff(&[]))
    }
}

/// A coefficient function: a finite sum of matrix elements, or a jet.
#[derive(Clone, Debug, PartialEq)]
pub enum CoeffFn {
    Matrix(Vec<MatrixElementFunction>),
    Jet(Jet),
}

impl CoeffFn {
    pub fn one(n: usize) -> Self {
        Self::constant(n, GaussianRational::one())
    }

    pub fn constant(n: usize, c: GaussianRational) -> Self {
        CoeffFn::Matrix(vec![MatrixElementFunction::constant(n, c)])
    }

    pub fn zero(n: usize) -> Self {
        Self::constant(n, GaussianRational::zero())
    }

    /// Polynomial `Σ c_a x^a` on `R^n` (the group of `abelian(n)`), realized on
    /// a tensor product of nilpotent Jordan blocks.
    pub fn abelian_polynomial(n: usize, poly: &BTreeMap<Monomial, GaussianRational>) -> Result<Self> {
        let mut max = vec![0usize; n];
        for m in poly.keys() {
            if m.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: m.dim() });
            }
            for (k, &e) in max.iter_mut().zip(&m.0) {
                *k = (*k).max(e as usize);
            }
        }
        let factors: Vec<Arc<MatrixRep>> = (0..n).map(|i| Arc::new(jordan_rep(n, i, max[i]))).collect();
        let len: usize = max.iter().map(|m| m + 1).product();
        let mut w = vec![GaussianRational::zero(); len];
        for (m, c) in poly {
            // index of ⊗_i e_{max_i - a_i}
            let mut idx = 0;
            let mut coeff = c.clone();
            for (&mx, &a) in max.iter().zip(&m.0) {
                idx = idx * (mx + 1) + (mx - a as usize);
                coeff = coeff.scale(&factorial(a as usize));
            }
            w[idx] = coeff;
        }
        let mut v = vec![GaussianRational::zero(); len];
        v[len - 1] = GaussianRational::one();
        Ok(CoeffFn::Matrix(vec![MatrixElementFunction::tensor(n, factors, w, v)?]))
    }

    /// `t ↦ Σ_j c_j t^j` on `R`.
    pub fn polynomial_1d(coeffs: &[GaussianRational]) -> Self {
        let m = coeffs.len().saturating_sub(1);
        let rep = Arc::new(jordan_rep(1, 0, m));
        let mut v = vec![GaussianRational::zero(); m + 1];
        v[m] = GaussianRational::one();
        let phi = MatrixElementFunction::new(rep, jordan_left_vector(coeffs, m), v).expect("consistent shapes");
        CoeffFn::Matrix(vec![phi])
    }

    pub fn algebra_dim(&self) -> usize {
        match self {
            CoeffFn::Matrix(v) => v.first().map_or(0, |m| m.n),
            CoeffFn::Jet(j) => j.n,
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        match self {
            CoeffFn::Matrix(v) => CoeffFn::Matrix(v.iter().map(|m| m.scale(c)).collect()),
            CoeffFn::Jet(j) => CoeffFn::Jet(j.scale(c.to_complex())),
        }
    }

    fn as_jet(&self, base: &GroupElementExpr, order: usize) -> Result<Jet> {
        match self {
            CoeffFn::Jet(j) => Ok(j.clone()),
            CoeffFn::Matrix(v) => {
                let mut acc = Jet { n: self.algebra_dim(), order, base: base.clone(), coeffs: BTreeMap::new() };
                for m in v {
                    acc = acc.add(&Jet::from_matrix(m, base, order)?)?;
                }
                Ok(acc)
            }
        }
    }

    pub fn add(&self, other: &CoeffFn) -> Result<CoeffFn> {
        if self.algebra_dim() != other.algebra_dim() {
            return Err(Error::GroupDataMismatch("coefficient functions over different algebras".into()));
        }
        match (self, other) {
            (CoeffFn::Matrix(a), CoeffFn::Matrix(b)) => {
                let mut out = a.clone();
                for m in b {
                    push_merged(&mut out, m.clone());
                }
                Ok(matrix_sum(self.algebra_dim(), out))
            }
            (CoeffFn::Jet(j), m) | (m, CoeffFn::Jet(j)) => Ok(CoeffFn::Jet(j.add(&m.as_jet(&j.base, j.order)?)?)),
        }
    }

    pub fn mul(&self, other: &CoeffFn) -> Result<CoeffFn> {
        if self.algebra_dim() != other.algebra_dim() {
            return Err(Error::GroupDataMismatch("coefficient functions over different algebras".into()));
        }
        match (self, other) {
            (CoeffFn::Matrix(a), CoeffFn::Matrix(b)) => {
                let mut out = Vec::new();
                for x in a {
                    for y in b {
                        push_merged(&mut out, x.mul(y)?);
                    }
                }
                Ok(matrix_sum(self.algebra_dim(), out))
            }
            (CoeffFn::Jet(j), m) | (m, CoeffFn::Jet(j)) => Ok(CoeffFn::Jet(j.mul(&m.as_jet(&j.base, j.order)?)?)),
        }
    }

    pub fn lie_derive_word(&self, word: &[usize]) -> Result<CoeffFn> {
        match self {
            CoeffFn::Matrix(v) => {
                Ok(CoeffFn::Matrix(v.iter().map(|m| m.lie_derive_word(word)).collect::<Result<_>>()?))
            }
            CoeffFn::Jet(j) => Ok(CoeffFn::Jet(j.lie_derive_word(word)?)),
        }
    }

    /// `Σ c_α Lie(α)`, applied once per matrix element.
    pub fn lie_derive_combination(&self, words: &[(Vec<usize>, GaussianRational)]) -> Result<CoeffFn> {
        match self {
            CoeffFn::Matrix(v) => {
                Ok(CoeffFn::Matrix(v.iter().map(|m| m.lie_derive_combination(words)).collect::<Result<_>>()?))
            }
            CoeffFn::Jet(j) => {
                let mut acc: Option<Jet> = None;
                for (w, c) in words {
                    let t = j.lie_derive_word(w)?.scale(c.to_complex());
                    acc = Some(match acc {
                        None => t,
                        Some(a) => a.add(&t)?,
                    });
                }
                Ok(CoeffFn::Jet(acc.unwrap_or_else(|| j.scale(Complex64::zero()))))
            }
        }
    }

    pub fn eval(&self, g: &GroupElementExpr) -> Result<Complex64> {
        match self {
            CoeffFn::Matrix(v) => {
                let mut cache = EvalCache::new(g.clone());
                let mut total = Complex64::zero();
                for m in v {
                    total += m.eval_cached(&mut cache)?;
                }
                Ok(total)
            }
            CoeffFn::Jet(j) => j.eval(g),
        }
    }

    /// Exact polynomial coefficients on an abelian group; see
    /// [`MatrixElementFunction::polynomial_coefficients`].
    pub fn polynomial_coefficients(&self) -> Result<BTreeMap<Monomial, GaussianRational>> {
        let CoeffFn::Matrix(v) = self else {
            return Err(Error::GroupDataMismatch("jets carry no global polynomial".into()));
        };
        let mut out: BTreeMap<Monomial, GaussianRational> = BTreeMap::new();
        for m in v {
            for (a, c) in m.polynomial_coefficients()? {
                let e = out.entry(a.clone()).or_insert_with(GaussianRational::zero);
                *e += &c;
                if e.is_zero() {
                    out.remove(&a);
                }
            }
        }
        Ok(out)
    }

    pub fn is_identically_zero(&self) -> bool {
        match self {
            CoeffFn::Matrix(v) => v.iter().all(MatrixElementFunction::is_zero),
            CoeffFn::Jet(j) => j.coeffs.values().all(|c| *c == Complex64::zero()),
        }
    }
}

/// Keeps the zero function as an explicit zero constant so the algebra
/// dimension survives cancellation.
fn matrix_sum(n: usize, mut v: Vec<MatrixElementFunction>) -> CoeffFn {
    v.retain(|m| !m.is_zero());
    if v.is_empty() {
        v.push(MatrixElementFunction::constant(n, GaussianRational::zero()));
    }
    CoeffFn::Matrix(v)
}

fn push_merged(out: &mut Vec<MatrixElementFunction>, m: MatrixElementFunction) {
    if m.is_zero() {
        return;
    }
    if let Some(slot) = out.iter_mut().find(|x| x.same_space(&m)) {
        for (a, b) in slot.v.iter_mut().zip(&m.v) {
            *a += b;
        }
        return;
    }
    out.push(m);
}

/// Applies `Lie(α)`; matrix elements always, jets while order remains.
pub fn lie_derive_word(phi: &CoeffFn, word: &[usize]) -> Result<CoeffFn> {
    phi.lie_derive_word(word)
}

/// Evaluates at `g`; jets only at their own base point.
pub fn coeff_eval(phi: &CoeffFn, g: &GroupElementExpr) -> Result<Complex64> {
    phi.eval(g)
}

/// Reference to a representation in JSON: a catalog name or explicit matrices.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum RepRef {
    Catalog(String),
    Explicit(MatrixRepJson),
}

impl RepRef {
    pub fn resolve(&self) -> Result<MatrixRep> {
        match self {
            RepRef::Catalog(name) => catalog_rep(name),
            RepRef::Explicit(json) => MatrixRep::from_json(json),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixElementJson {
    pub reps: Vec<RepRef>,
    pub w: Vec<GaussianRational>,
    pub v: Vec<GaussianRational>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct JetJson {
    pub order: usize,
    pub base: GroupElementExpr,
    /// `(word, value)` with 1-based letters.
    pub coeffs: Vec<(Vec<usize>, Complex64)>,
}

/// JSON for a [`CoeffFn`]: `"1"`, a single matrix element, a sum, or a jet.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum CoeffFnJson {
    Unit(String),
    Matrix(MatrixElementJson),
    Sum { sum: Vec<MatrixElementJson> },
    Jet { jet: JetJson },
}

impl CoeffFnJson {
    pub fn resolve(&self, n: usize) -> Result<CoeffFn> {
        let matrix = |m: &MatrixElementJson| -> Result<MatrixElementFunction> {
            let reps = m.reps.iter().map(|r| r.resolve().map(Arc::new)).collect::<Result<Vec<_>>>()?;
            MatrixElementFunction::tensor(n, reps, m.w.clone(), m.v.clone())
        };
        match self {
            CoeffFnJson::Unit(s) if s.trim() == "1" => Ok(CoeffFn::one(n)),
            CoeffFnJson::Unit(s) => Err(Error::Parse(format!("unknown coefficient function {s:?}"))),
            CoeffFnJson::Matrix(m) => Ok(CoeffFn::Matrix(vec![matrix(m)?])),
            CoeffFnJson::Sum { sum } => Ok(CoeffFn::Matrix(sum.iter().map(matrix).collect::<Result<_>>()?)),
            CoeffFnJson::Jet { jet } => {
                let coeffs = jet
                    .coeffs
                    .iter()
                    .map(|(w, c)| {
                        if w.contains(&0) {
                            return Err(Error::Parse("jet words are 1-based".into()));
                        }
                        Ok((w.iter().map(|l| l - 1).collect(), *c))
                    })
                    .collect::<Result<_>>()?;
                Ok(CoeffFn::Jet(Jet::new(n, jet.order, jet.base.clone(), coeffs)?))
            }
        }
    }

    pub fn from_coeff_fn(phi: &CoeffFn) -> Result<Self> {
        let matrix = |m: &MatrixElementFunction| -> Result<MatrixElementJson> {
            if m.base.is_some() {
                return Err(Error::GroupDataMismatch("translated matrix elements have no JSON form".into()));
            }
            Ok(MatrixElementJson {
                reps: m.factors.iter().map(|r| RepRef::Explicit(r.to_json())).collect(),
                w: m.w.clone(),
                v: m.v.clone(),
            })
        };
        Ok(match phi {
            CoeffFn::Matrix(v) if v.len() == 1 => CoeffFnJson::Matrix(matrix(&v[0])?),
            CoeffFn::Matrix(v) => CoeffFnJson::Sum { sum: v.iter().map(matrix).collect::<Result<_>>()? },
            CoeffFn::Jet(j) => CoeffFnJson::Jet {
                jet: JetJson {
                    order: j.order,
                    base: j.base.clone(),
                    coeffs: j.coeffs.iter().map(|(w, c)| (w.iter().map(|l| l + 1).collect(), *c)).collect(),
                },
            },
        })
    }
}
