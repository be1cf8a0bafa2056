//! Standard-ordered quantization and star product on
//! `Pol(T*G) = C^∞(G) ⊗ Sym(g_C)`.
//!
//! `ϱ(φ ⊗ x^a)ψ = φ · (hbar/i)^{|a|} Lie(ω(x^a))ψ`, where `Lie(ω(x^a))` is the
//! average of `Lie(w)` over all words `w` with content `a`. The product uses
//!
//! `(φ ⊗ x^a) ⋆ (ψ ⊗ q) = Σ_{b ≤ a} (hbar/i)^{|b|} C(a, b) · φ Lie(ω(x^b))ψ ⊗ (x^{a-b} ⋆_Gutt q)`
//!
//! with `C(a, b) = Π_i C(a_i, b_i)`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::coeff::{CoeffFn, CoeffFnJson};
use crate::group::element::GroupElementExpr;
use crate::gutt::{gutt_star, hbar_coefficient};
use crate::pbw::Enveloping;
use crate::scalar::{GaussianRational, HbarScalar, Rational};
use crate::sym::{binomial, factorial, for_each_distinct_word, Monomial, SymTensor, SymTensorJson};

/// `Σ_i φ_i ⊗ p_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSpacePoly {
    n: usize,
    terms: Vec<(CoeffFn, SymTensor)>,
}

impl PhaseSpacePoly {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: Vec::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::term(CoeffFn::one(n), SymTensor::one(n)).expect("matching dimensions")
    }

    pub fn term(phi: CoeffFn, p: SymTensor) -> Result<Self> {
        let mut out = Self::zero(p.dim());
        out.push(phi, p)?;
        Ok(out)
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (CoeffFn, SymTensor)>) -> Result<Self> {
        let mut out = Self::zero(n);
        for (phi, p) in terms {
            out.push(phi, p)?;
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(CoeffFn, SymTensor)] {
        &self.terms
    }

    /// Adds `φ ⊗ p`, merging with an existing term carrying the same `φ`.
    pub fn push(&mut self, phi: CoeffFn, p: SymTensor) -> Result<()> {
        if p.dim() != self.n || phi.algebra_dim() != self.n {
            return Err(Error::GroupDataMismatch(format!(
                "term over algebras of dimension {} / {} in a {}-dimensional polynomial",
                phi.algebra_dim(),
                p.dim(),
                self.n
            )));
        }
        if p.is_zero() || phi.is_identically_zero() {
            return Ok(());
        }
        if let Some(slot) = self.terms.iter_mut().find(|(f, _)| *f == phi) {
            slot.1 = slot.1.add(&p)?;
            self.terms.retain(|(_, q)| !q.is_zero());
            return Ok(());
        }
        self.terms.push((phi, p));
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (phi, p) in &other.terms {
            out.push(phi.clone(), p.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        Self { n: self.n, terms: self.terms.iter().map(|(f, p)| (f.clone(), p.neg())).collect() }
    }

    pub fn map_sym(&self, f: impl Fn(&SymTensor) -> SymTensor) -> Result<Self> {
        Self::from_terms(self.n, self.terms.iter().map(|(phi, p)| (phi.clone(), f(p))))
    }

    /// Largest `hbar` power over all symmetric parts.
    pub fn hbar_degree(&self) -> Option<usize> {
        self.terms.iter().filter_map(|(_, p)| p.hbar_degree()).max()
    }

    /// `Σ_i φ_i(g) p_i(μ)` at a fixed `hbar`.
    pub fn eval(&self, g: &GroupElementExpr, mu: &[Complex64], hbar: Complex64) -> Result<Complex64> {
        let point = crate::gutt::DualPoint { coords: mu.to_vec() };
        let mut total = Complex64::zero();
        for (phi, p) in &self.terms {
            total += phi.eval(g)? * crate::gutt::eval_on_dual(p, &point, hbar)?;
        }
        Ok(total)
    }

    /// Exact conversion on `T*R^n` when all coefficient functions are
    /// polynomial (nilpotent matrix elements of an abelian group).
    pub fn to_abelian(&self) -> Result<AbelianPhasePoly> {
        let mut out = AbelianPhasePoly::zero(self.n);
        for (phi, p) in &self.terms {
            let poly = phi.polynomial_coefficients()?;
            for (a, c) in &poly {
                for (b, s) in p.terms() {
                    out.add_term(a.clone(), b.clone(), &s.scale(c));
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<PhaseSpacePolyJson> {
        Ok(PhaseSpacePolyJson {
            terms: self
                .terms
                .iter()
                .map(|(phi, p)| Ok(PhaseTermJson { r#fn: CoeffFnJson::from_coeff_fn(phi)?, sym: p.to_json() }))
                .collect::<Result<_>>()?,
        })
    }

    pub fn from_json(n: usize, json: &PhaseSpacePolyJson) -> Result<Self> {
        let mut out = Self::zero(n);
        for t in &json.terms {
            out.push(t.r#fn.resolve(n)?, SymTensor::from_json(n, &t.sym)?)?;
        }
        Ok(out)
    }
}

/// `{"terms": [{"fn": <CoeffFn>, "sym": <SymTensor>}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PhaseSpacePolyJson {
    pub terms: Vec<PhaseTermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PhaseTermJson {
    pub r#fn: CoeffFnJson,
    pub sym: SymTensorJson,
}

/// Words of content `a`, each weighted `Π a_i! / k!`: `Lie(ω(x^a))` as a
/// combination of word derivatives.
pub fn symmetrized_words(a: &Monomial) -> Vec<(Vec<usize>, GaussianRational)> {
    let w = GaussianRational::real(a.factorial_product() / factorial(a.degree()));
    let mut out = Vec::new();
    for_each_distinct_word(a, |word| out.push((word.to_vec(), w.clone())));
    out
}

fn hbar_exact(hbar: Complex64) -> Result<GaussianRational> {
    GaussianRational::from_complex_exact(hbar)
}

/// `ϱ_std(P)ψ` at a fixed complex `hbar` (converted exactly to a rational).
pub fn rho_std_apply(p: &PhaseSpacePoly, psi: &CoeffFn, hbar: Complex64) -> Result<CoeffFn> {
    if psi.algebra_dim() != p.n {
        return Err(Error::GroupDataMismatch("operand over a different algebra".into()));
    }
    let h = hbar_exact(hbar)?;
    let h_over_i = &h * &(-GaussianRational::i());
    let mut total = CoeffFn::zero(p.n);
    for (phi, sym) in &p.terms {
        let mut words = Vec::new();
        for (a, c) in sym.terms() {
            let mut s = c.eval_exact(&h);
            for _ in 0..a.degree() {
                s = &s * &h_over_i;
            }
            words.extend(symmetrized_words(a).into_iter().map(|(w, x)| (w, &x * &s)));
        }
        let derived = psi.lie_derive_combination(&words)?;
        total = total.add(&phi.mul(&derived)?)?;
    }
    Ok(total)
}

fn check_group(env: &Enveloping, p: &PhaseSpacePoly, q: &PhaseSpacePoly) -> Result<()> {
    if p.n != env.dim() || q.n != env.dim() {
        return Err(Error::GroupDataMismatch("phase-space polynomials over different algebras".into()));
    }
    Ok(())
}

/// The standard-ordered star product via the factorization formula.
pub fn std_star(env: &Enveloping, p: &PhaseSpacePoly, q: &PhaseSpacePoly) -> Result<PhaseSpacePoly> {
    check_group(env, p, q)?;
    let n = env.dim();
    let mut out = PhaseSpacePoly::zero(n);
    for (phi, ps) in &p.terms {
        for (psi, qs) in &q.terms {
            for (a, pa) in ps.terms() {
                for b in a.divisors() {
                    let rest = a.div(&b).expect("divisor");
                    let binom = a.0.iter().zip(&b.0).fold(Rational::one(), |acc, (&x, &y)| acc * binomial(x, y));
                    let weight = (pa * &HbarScalar::hbar_over_i_pow(b.degree())).scale_rational(&binom);
                    let f = phi.mul(&psi.lie_derive_combination(&symmetrized_words(&b))?)?;
                    let s = gutt_star(env, &SymTensor::term(rest, HbarScalar::one()), qs)?.scale(&weight);
                    out.push(f, s)?;
                }
            }
        }
    }
    Ok(out)
}

/// `{φ ⊗ x^a, ψ ⊗ 1} = Σ_i a_i φ Lie(e_i)ψ ⊗ x^{a - e_i}` (second factor
/// constant along the fibers).
pub fn semiclassical_std(p: &PhaseSpacePoly, q: &PhaseSpacePoly) -> Result<PhaseSpacePoly> {
    if p.n != q.n {
        return Err(Error::GroupDataMismatch("phase-space polynomials over different algebras".into()));
    }
    let n = p.n;
    let mut out = PhaseSpacePoly::zero(n);
    for (psi, qs) in &q.terms {
        if qs.degree().unwrap_or(0) > 0 {
            return Err(Error::FiberConstantRequired);
        }
        let qc = qs.coeff(&Monomial::one(n));
        for (phi, ps) in &p.terms {
            for i in 0..n {
                let dpsi = phi.mul(&psi.lie_derive_word(&[i])?)?;
                let mut s = SymTensor::zero(n);
                for (a, c) in ps.terms() {
                    if a.0[i] > 0 {
                        let mut rest = a.clone();
                        rest.0[i] -= 1;
                        s.add_term(rest, &(c * &qc).scale_rational(&Rational::from_integer(a.0[i].into())));
                    }
                }
                out.push(dpsi, s)?;
            }
        }
    }
    Ok(out)
}

/// `i · d/dhbar (P⋆Q - Q⋆P)|_{hbar=0}`.
pub fn std_poisson_from_commutator(env: &Enveloping, p: &PhaseSpacePoly, q: &PhaseSpacePoly) -> Result<PhaseSpacePoly> {
    let comm = std_star(env, p, q)?.add(&std_star(env, q, p)?.neg())?;
    let i = HbarScalar::constant(GaussianRational::i());
    comm.map_sym(|s| hbar_coefficient(s, 1).scale(&i))
}

/// Polynomial `Σ f_{a,b} q^a p^b` on `T*R^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianPhasePoly {
    n: usize,
    terms: BTreeMap<(Monomial, Monomial), HbarScalar>,
}

impl AbelianPhasePoly {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn term(q: Monomial, p: Monomial, c: HbarScalar) -> Self {
        let mut out = Self::zero(q.dim());
        out.add_term(q, p, &c);
        out
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<(Monomial, Monomial), HbarScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, q: Monomial, p: Monomial, c: &HbarScalar) {
        if c.is_zero() {
            return;
        }
        let key = (q, p);
        let e = self.terms.entry(key.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((q, p), c) in &other.terms {
            out.add_term(q.clone(), p.clone(), c);
        }
        out
    }

    /// Phase-space form: one polynomial coefficient function per
    /// `(p-monomial, hbar-power)`.
    pub fn to_phase_space(&self) -> Result<PhaseSpacePoly> {
        let mut groups: BTreeMap<(Monomial, usize), BTreeMap<Monomial, GaussianRational>> = BTreeMap::new();
        for ((q, p), c) in &self.terms {
            for (j, cj) in c.coeffs().iter().enumerate() {
                if !cj.is_zero() {
                    groups.entry((p.clone(), j)).or_default().insert(q.clone(), cj.clone());
                }
            }
        }
        let mut out = PhaseSpacePoly::zero(self.n);
        for ((p, j), poly) in groups {
            let phi = CoeffFn::abelian_polynomial(self.n, &poly)?;
            out.push(phi, SymTensor::term(p, HbarScalar::monomial(GaussianRational::one(), j)))?;
        }
        Ok(out)
    }
}

/// Falling factorial `x (x-1) ··· (x-k+1)`.
fn falling(x: u32, k: u32) -> Rational {
    (0..k).fold(Rational::one(), |acc, j| acc * Rational::from_integer((x - j).into()))
}

/// `F ⋆ G = Σ_α λ^{|α|}/α! ∂_p^α F ∂_q^α G` on `T*R^n`.
pub fn std_star_abelian(f: &AbelianPhasePoly, g: &AbelianPhasePoly, lambda: &HbarScalar) -> Result<AbelianPhasePoly> {
    if f.n != g.n {
        return Err(Error::AlgebraMismatch);
    }
    let n = f.n;
    let mut out = AbelianPhasePoly::zero(n);
    for ((qa, pb), fc) in &f.terms {
        for ((qc, pd), gc) in &g.terms {
            let fg = fc * gc;
            // α ranges over multi-indices with α ≤ b and α ≤ c
            let bound = Monomial(pb.0.iter().zip(&qc.0).map(|(x, y)| *x.min(y)).collect());
            for alpha in bound.divisors() {
                let mut coeff = Rational::one();
                for i in 0..n {
                    let k = alpha.0[i];
                    coeff *= falling(pb.0[i], k) * falling(qc.0[i], k) / factorial(k as usize);
                }
                let mut lam = HbarScalar::one();
                for _ in 0..alpha.degree() {
                    lam = &lam * lambda;
                }
                let q = qa.mul(&qc.div(&alpha).expect("α ≤ c"));
                let p = pb.div(&alpha).expect("α ≤ b").mul(pd);
                out.add_term(q, p, &(&fg * &lam).scale_rational(&coeff));
            }
        }
    }
    Ok(out)
}

/// Result of [`operator_consistency_check`].
#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    pub samples: usize,
    pub max_rel_deviation: f64,
    pub worst_sample: usize,
}

/// Compares `ϱ(P⋆Q)ψ` with `ϱ(P)ϱ(Q)ψ` at the sample points.
pub fn operator_consistency_check(
    env: &Enveloping,
    p: &PhaseSpacePoly,
    q: &PhaseSpacePoly,
    psi: &CoeffFn,
    samples: &[GroupElementExpr],
    hbar: Complex64,
) -> Result<ConsistencyReport> {
    let lhs = rho_std_apply(&std_star(env, p, q)?, psi, hbar)?;
    let rhs = rho_std_apply(p, &rho_std_apply(q, psi, hbar)?, hbar)?;
    let devs = samples
        .par_iter()
        .map(|g| -> Result<f64> {
            let (a, b) = (lhs.eval(g)?, rhs.eval(g)?);
            let scale = a.norm().max(b.norm()).max(1e-300);
            Ok(if a == b { 0.0 } else { (a - b).norm() / scale })
        })
        .collect::<Result<Vec<_>>>()?;
    let (worst_sample, max_rel_deviation) =
        devs.iter().copied().enumerate().fold((0, 0.0), |acc, (i, d)| if d > acc.1 { (i, d) } else { acc });
    Ok(ConsistencyReport { samples: samples.len(), max_rel_deviation, worst_sample })
}
