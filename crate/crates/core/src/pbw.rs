//! The universal enveloping algebra `U(g)` in the increasing-index PBW basis.
//!
//! All structure lives over `Q`: normal ordering, products and the
//! symmetrization map `ω` only involve the rational structure constants.
//! Coefficients in `Q(i)[hbar]` are carried along linearly. Every rational
//! kernel is memoized per algebra, so one [`Enveloping`] should be shared by
//! all computations over the same algebra.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::LieAlgebraSpec;
use crate::error::{Error, Result};
use crate::scalar::{int, HbarScalar, Rational};
use crate::sym::{Monomial, SymTensor};

/// Sparse rational combination of monomials.
pub type QPoly = BTreeMap<Monomial, Rational>;

pub(crate) fn qpoly_add(acc: &mut QPoly, m: &Monomial, c: &Rational) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(m) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                acc.remove(m);
            }
        }
        None => {
            acc.insert(m.clone(), c.clone());
        }
    }
}

fn qpoly_degree(p: &QPoly) -> Option<usize> {
    p.keys().map(Monomial::degree).max()
}

pub(crate) struct Memo<K, V>(RwLock<HashMap<K, Arc<V>>>);

impl<K: Eq + Hash, V> Memo<K, V> {
    pub(crate) fn new() -> Self {
        Memo(RwLock::new(HashMap::new()))
    }

    pub(crate) fn get(&self, k: &K) -> Option<Arc<V>> {
        self.0.read().expect("memo lock").get(k).cloned()
    }

    pub(crate) fn insert(&self, k: K, v: V) -> Arc<V> {
        let v = Arc::new(v);
        self.0.write().expect("memo lock").entry(k).or_insert(v).clone()
    }

    fn len(&self) -> usize {
        self.0.read().expect("memo lock").len()
    }
}

/// Which adjacent descent a word-rewriting step resolves first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteStrategy {
    Leftmost,
    Rightmost,
}

/// `U(g)` for one Lie algebra, with memoized rational kernels.
pub struct Enveloping {
    algebra: Arc<LieAlgebraSpec>,
    left_mul: Memo<(usize, Monomial), QPoly>,
    mono_mul: Memo<(Monomial, Monomial), QPoly>,
    omega: Memo<Monomial, QPoly>,
    omega_inv: Memo<Monomial, QPoly>,
    pub(crate) gutt: Memo<(Monomial, Monomial), QPoly>,
}

impl fmt::Debug for Enveloping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Enveloping")
            .field("algebra", &self.algebra.names())
            .field("cached_products", &self.mono_mul.len())
            .finish()
    }
}

impl Enveloping {
    pub fn new(algebra: Arc<LieAlgebraSpec>) -> Self {
        Self {
            algebra,
            left_mul: Memo::new(),
            mono_mul: Memo::new(),
            omega: Memo::new(),
            omega_inv: Memo::new(),
            gutt: Memo::new(),
        }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebraSpec> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `e_i · x^b` in PBW normal form.
    pub fn left_mul_generator(&self, i: usize, b: &Monomial) -> Arc<QPoly> {
        let key = (i, b.clone());
        if let Some(v) = self.left_mul.get(&key) {
            return v;
        }
        let mut out = QPoly::new();
        match b.0.iter().position(|&x| x > 0) {
            Some(j) if j < i => {
                // e_i e_j x^{b'} = e_j (e_i x^{b'}) + [e_i, e_j] x^{b'}
                let mut rest = b.clone();
                rest.0[j] -= 1;
                let inner = self.left_mul_generator(i, &rest);
                for (m, c) in inner.iter() {
                    for (m2, c2) in self.left_mul_generator(j, m).iter() {
                        qpoly_add(&mut out, m2, &(c * c2));
                    }
                }
                for (k, ck) in self.algebra.bracket_basis(i, j) {
                    for (m2, c2) in self.left_mul_generator(*k, &rest).iter() {
                        qpoly_add(&mut out, m2, &(ck * c2));
                    }
                }
            }
            _ => {
                let mut m = b.clone();
                m.0[i] += 1;
                out.insert(m, Rational::one());
            }
        }
        self.left_mul.insert(key, out)
    }

    fn left_mul_generator_poly(&self, i: usize, p: &QPoly) -> QPoly {
        let mut out = QPoly::new();
        for (m, c) in p {
            for (m2, c2) in self.left_mul_generator(i, m).iter() {
                qpoly_add(&mut out, m2, &(c * c2));
            }
        }
        out
    }

    /// Product of two ordered PBW monomials, normal ordered.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Arc<QPoly> {
        let key = (a.clone(), b.clone());
        if let Some(v) = self.mono_mul.get(&key) {
            return v;
        }
        let out = match a.0.iter().position(|&x| x > 0) {
            None => QPoly::from([(b.clone(), Rational::one())]),
            Some(i) => {
                let mut rest = a.clone();
                rest.0[i] -= 1;
                let tail = self.mul_monomials(&rest, b);
                self.left_mul_generator_poly(i, &tail)
            }
        };
        self.mono_mul.insert(key, out)
    }

    pub fn mul_qpoly(&self, u: &QPoly, v: &QPoly) -> QPoly {
        let mut out = QPoly::new();
        for (a, ca) in u {
            for (b, cb) in v {
                let cab = ca * cb;
                for (m, c) in self.mul_monomials(a, b).iter() {
                    qpoly_add(&mut out, m, &(&cab * c));
                }
            }
        }
        out
    }

    /// Normal form of the word `e_{w_1} ··· e_{w_k}` (0-based letters).
    pub fn normal_order_q(&self, word: &[usize]) -> QPoly {
        let mut acc = QPoly::from([(Monomial::one(self.dim()), Rational::one())]);
        for &l in word.iter().rev() {
            acc = self.left_mul_generator_poly(l, &acc);
        }
        acc
    }

    /// `ω(x^a) = (1/k!) Σ_σ e_{σ(1)}···e_{σ(k)}`, via
    /// `ω(x^a) = (1/k) Σ_i a_i e_i ω(x^{a - e_i})`.
    pub fn omega_monomial(&self, a: &Monomial) -> Arc<QPoly> {
        if let Some(v) = self.omega.get(a) {
            return v;
        }
        let k = a.degree();
        let out = if k == 0 {
            QPoly::from([(a.clone(), Rational::one())])
        } else {
            let mut out = QPoly::new();
            for (i, &ai) in a.0.iter().enumerate().filter(|(_, &ai)| ai > 0) {
                let mut rest = a.clone();
                rest.0[i] -= 1;
                let w = int(ai as i64) / int(k as i64);
                for (m, c) in self.left_mul_generator_poly(i, &self.omega_monomial(&rest)) {
                    qpoly_add(&mut out, &m, &(&w * &c));
                }
            }
            out
        };
        self.omega.insert(a.clone(), out)
    }

    /// `ω⁻¹` of a single ordered monomial, by peeling off the leading symbol:
    /// `ω(x^m) = x^m + (lower)`, hence `ω⁻¹(x^m) = x^m - ω⁻¹(lower)`.
    pub fn omega_inv_monomial(&self, m: &Monomial) -> Arc<QPoly> {
        if let Some(v) = self.omega_inv.get(m) {
            return v;
        }
        let mut out = QPoly::from([(m.clone(), Rational::one())]);
        let deg = m.degree();
        for (l, c) in self.omega_monomial(m).iter() {
            if l == m {
                continue;
            }
            debug_assert!(l.degree() < deg, "ω must have identity leading symbol");
            for (s, cs) in self.omega_inv_monomial(l).iter() {
                qpoly_add(&mut out, s, &-(c * cs));
            }
        }
        self.omega_inv.insert(m.clone(), out)
    }

    /// Applies one rewrite `… e_j e_i … → … e_i e_j … + … [e_j, e_i] …` at
    /// the chosen descent; `None` if the word is already nondecreasing.
    pub fn rewrite_step(&self, word: &[usize], strategy: RewriteStrategy) -> Option<Vec<(Vec<usize>, Rational)>> {
        let descents = (0..word.len().saturating_sub(1)).filter(|&p| word[p] > word[p + 1]);
        let pos = match strategy {
            RewriteStrategy::Leftmost => descents.min(),
            RewriteStrategy::Rightmost => descents.max(),
        }?;
        let (j, i) = (word[pos], word[pos + 1]);
        let mut swapped = word.to_vec();
        swapped.swap(pos, pos + 1);
        let mut out = vec![(swapped, Rational::one())];
        for (k, c) in self.algebra.bracket_basis(j, i) {
            let mut w = word[..pos].to_vec();
            w.push(*k);
            w.extend_from_slice(&word[pos + 2..]);
            out.push((w, c.clone()));
        }
        Some(out)
    }

    /// Normal ordering by explicit word rewriting, independent of the
    /// memoized kernels. Used to certify confluence.
    pub fn normal_order_rewriting(&self, word: &[usize], strategy: RewriteStrategy) -> QPoly {
        let mut pending: BTreeMap<Vec<usize>, Rational> = BTreeMap::from([(word.to_vec(), Rational::one())]);
        let mut done = QPoly::new();
        while let Some((w, c)) = pending.pop_last() {
            match self.rewrite_step(&w, strategy) {
                None => qpoly_add(&mut done, &Monomial::from_word(self.dim(), &w), &c),
                Some(next) => {
                    for (w2, c2) in next {
                        let e = pending.entry(w2).or_insert_with(Rational::zero);
                        *e += &c * &c2;
                    }
                    pending.retain(|_, v| !v.is_zero());
                }
            }
        }
        done
    }
}

/// Number of inversions `p < q` with `w_p > w_q`.
pub fn inversions(word: &[usize]) -> usize {
    (0..word.len()).map(|p| (p + 1..word.len()).filter(|&q| word[p] > word[q]).count()).sum()
}

/// Element of `U(g_C)` in the ordered basis `e_1^{a_1}···e_n^{a_n}`.
#[derive(Clone, PartialEq, Eq)]
pub struct PbwElement {
    dim: usize,
    terms: BTreeMap<Monomial, HbarScalar>,
}

impl PbwElement {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::from_terms(dim, [(Monomial::one(dim), HbarScalar::one())])
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Monomial, HbarScalar)>) -> Self {
        let mut out = Self::zero(dim);
        for (m, c) in terms {
            out.add_term(m, &c);
        }
        out
    }

    pub fn from_qpoly(dim: usize, q: &QPoly) -> Self {
        Self::from_terms(dim, q.iter().map(|(m, c)| (m.clone(), HbarScalar::rational(c.clone()))))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, HbarScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> HbarScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: &HbarScalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Filtration degree: maximal total exponent.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn to_json(&self) -> PbwElementJson {
        PbwElementJson {
            terms: self.terms.iter().map(|(m, c)| PbwTermJson { ordered_exp: m.0.clone(), coeff: c.clone() }).collect(),
        }
    }

    pub fn from_json(dim: usize, json: &PbwElementJson) -> Result<Self> {
        let mut out = Self::zero(dim);
        for t in &json.terms {
            if t.ordered_exp.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: t.ordered_exp.len() });
            }
            out.add_term(Monomial(t.ordered_exp.clone()), &t.coeff);
        }
        Ok(out)
    }
}

impl fmt::Debug for PbwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})*ord{m:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PbwElementJson {
    pub terms: Vec<PbwTermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PbwTermJson {
    pub ordered_exp: Vec<u32>,
    pub coeff: HbarScalar,
}

fn check_word(env: &Enveloping, word: &[usize]) -> Result<()> {
    match word.iter().find(|&&l| l >= env.dim()) {
        Some(&l) => Err(Error::DimensionMismatch { expected: env.dim(), found: l + 1 }),
        None => Ok(()),
    }
}

/// Normal form of a word (0-based letters).
pub fn normal_order(env: &Enveloping, word: &[usize]) -> Result<PbwElement> {
    check_word(env, word)?;
    Ok(PbwElement::from_qpoly(env.dim(), &env.normal_order_q(word)))
}

pub fn pbw_multiply(env: &Enveloping, u: &PbwElement, v: &PbwElement) -> Result<PbwElement> {
    if u.dim != env.dim() || v.dim != env.dim() {
        return Err(Error::AlgebraMismatch);
    }
    let mut out = PbwElement::zero(env.dim());
    for (a, ca) in &u.terms {
        for (b, cb) in &v.terms {
            let cab = ca * cb;
            for (m, c) in env.mul_monomials(a, b).iter() {
                out.add_term(m.clone(), &cab.scale_rational(c));
            }
        }
    }
    Ok(out)
}

/// The symmetrization map `ω: Sym(g_C) → U(g_C)`, without any `hbar` weight.
pub fn pbw_symmetrize(env: &Enveloping, p: &SymTensor) -> Result<PbwElement> {
    if p.dim() != env.dim() {
        return Err(Error::AlgebraMismatch);
    }
    let mut out = PbwElement::zero(env.dim());
    for (a, ca) in p.terms() {
        for (m, c) in env.omega_monomial(a).iter() {
            out.add_term(m.clone(), &ca.scale_rational(c));
        }
    }
    Ok(out)
}

/// `ω⁻¹`: read the top filtration part as a symmetric tensor, subtract its
/// image under `ω`, and repeat on the strictly lower remainder.
pub fn pbw_desymmetrize(env: &Enveloping, u: &PbwElement) -> Result<SymTensor> {
    if u.dim != env.dim() {
        return Err(Error::AlgebraMismatch);
    }
    let mut rest = u.clone();
    let mut out = SymTensor::zero(env.dim());
    while let Some(d) = rest.degree() {
        let top: Vec<(Monomial, HbarScalar)> =
            rest.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect();
        for (m, c) in top {
            out.add_term(m.clone(), &c);
            for (l, cl) in env.omega_monomial(&m).iter() {
                rest.add_term(l.clone(), &-c.scale_rational(cl));
            }
        }
        debug_assert!(rest.degree().is_none_or(|e| e < d));
    }
    Ok(out)
}

/// `ω⁻¹` restricted to rational PBW combinations, through the memoized
/// per-monomial inverse.
pub fn desymmetrize_q(env: &Enveloping, u: &QPoly) -> QPoly {
    let mut out = QPoly::new();
    for (m, c) in u {
        for (s, cs) in env.omega_inv_monomial(m).iter() {
            qpoly_add(&mut out, s, &(c * cs));
        }
    }
    out
}

/// Top filtration degree of a rational PBW combination.
pub fn qpoly_top_degree(p: &QPoly) -> Option<usize> {
    qpoly_degree(p)
}
