//! The Gutt star product on `Sym(g_C)`.
//!
//! For homogeneous `p` of degree `a` and `q` of degree `b`, write
//! `r = ω⁻¹(ω(p)·ω(q))` and `r_m` for its degree-`m` part. Since the
//! standard-ordered quantization weights degree `k` by `(hbar/i)^k`,
//! `(hbar/i)^{a+b} ω(p)ω(q) = Σ_m (hbar/i)^{a+b-m} (hbar/i)^m ω(r_m)`, so
//! `p ⋆ q = Σ_m (hbar/i)^{a+b-m} r_m`.

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::pbw::{desymmetrize_q, Enveloping, QPoly};
use crate::scalar::{HbarScalar, Rational};
use crate::sym::{seminorm_rc, Monomial, SymTensor};

impl Enveloping {
    /// `ω⁻¹(ω(x^a)·ω(x^b))`, rational and memoized.
    pub fn gutt_kernel(&self, a: &Monomial, b: &Monomial) -> std::sync::Arc<QPoly> {
        let key = (a.clone(), b.clone());
        if let Some(v) = self.gutt.get(&key) {
            return v;
        }
        let prod = self.mul_qpoly(&self.omega_monomial(a), &self.omega_monomial(b));
        self.gutt.insert(key, desymmetrize_q(self, &prod))
    }
}

fn check_dims(env: &Enveloping, p: &SymTensor, q: &SymTensor) -> Result<()> {
    if p.dim() != env.dim() || q.dim() != env.dim() {
        return Err(Error::AlgebraMismatch);
    }
    Ok(())
}

pub fn gutt_star(env: &Enveloping, p: &SymTensor, q: &SymTensor) -> Result<SymTensor> {
    check_dims(env, p, q)?;
    let mut weights: Vec<HbarScalar> = Vec::new();
    let mut out = SymTensor::zero(env.dim());
    for (a, pa) in p.terms() {
        for (b, qb) in q.terms() {
            let coeff = pa * qb;
            let top = a.degree() + b.degree();
            for (m, c) in env.gutt_kernel(a, b).iter() {
                let drop = top - m.degree();
                while weights.len() <= drop {
                    weights.push(HbarScalar::hbar_over_i_pow(weights.len()));
                }
                let w = weights[drop].scale_rational(c);
                out.add_term(m.clone(), &(&coeff * &w));
            }
        }
    }
    Ok(out)
}

/// The `hbar^j` coefficient as an `hbar`-free tensor.
pub fn hbar_coefficient(r: &SymTensor, j: usize) -> SymTensor {
    SymTensor::from_terms(r.dim(), r.terms().iter().map(|(m, c)| (m.clone(), HbarScalar::constant(c.coeff(j)))))
}

pub fn classical_limit(r: &SymTensor) -> SymTensor {
    hbar_coefficient(r, 0)
}

/// `{p, q} = i · d/dhbar (p⋆q - q⋆p)|_{hbar=0}`.
pub fn poisson_bracket(env: &Enveloping, p: &SymTensor, q: &SymTensor) -> Result<SymTensor> {
    let comm = gutt_star(env, p, q)?.sub(&gutt_star(env, q, p)?)?;
    let i = HbarScalar::constant(crate::scalar::GaussianRational::i());
    Ok(hbar_coefficient(&comm, 1).scale(&i))
}

fn partial(p: &SymTensor, i: usize) -> SymTensor {
    let mut out = SymTensor::zero(p.dim());
    for (m, c) in p.terms() {
        let ai = m.0[i];
        if ai > 0 {
            let mut d = m.clone();
            d.0[i] -= 1;
            out.add_term(d, &c.scale_rational(&Rational::from_integer(ai.into())));
        }
    }
    out
}

/// The linear Poisson bracket on `g*`: `{F, G} = Σ c_ij^k e_k ∂_i F ∂_j G`.
/// Computed from structure constants alone.
pub fn kks_bracket(env: &Enveloping, f: &SymTensor, g: &SymTensor) -> Result<SymTensor> {
    check_dims(env, f, g)?;
    let n = env.dim();
    let df: Vec<SymTensor> = (0..n).map(|i| partial(f, i)).collect();
    let dg: Vec<SymTensor> = (0..n).map(|j| partial(g, j)).collect();
    let mut out = SymTensor::zero(n);
    for (i, dfi) in df.iter().enumerate() {
        for (j, dgj) in dg.iter().enumerate() {
            for (k, c) in env.algebra().bracket_basis(i, j) {
                if dfi.is_zero() || dgj.is_zero() {
                    continue;
                }
                for (ma, ca) in dfi.terms() {
                    for (mb, cb) in dgj.terms() {
                        let m = ma.mul(mb).mul(&Monomial::generator(n, *k));
                        out.add_term(m, &(ca * cb).scale_rational(c));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Point of `g*`, paired with the basis by `μ(e_i) = coords[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualPoint {
    pub coords: Vec<Complex64>,
}

pub fn eval_on_dual(p: &SymTensor, mu: &DualPoint, hbar: Complex64) -> Result<Complex64> {
    if mu.coords.len() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: mu.coords.len() });
    }
    let mut total = Complex64::zero();
    for (m, c) in p.terms() {
        let mut v = c.eval(hbar);
        for (x, &e) in mu.coords.iter().zip(&m.0) {
            v *= x.powu(e);
        }
        total += v;
    }
    Ok(total)
}

/// One row of the empirical continuity table for `p ⋆ q` at `R = 1`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SeminormRatioRow {
    pub c: f64,
    pub c_prime: f64,
    pub star: f64,
    pub factors: f64,
    pub ratio: f64,
}

/// Tabulates `p_{1,c}(p⋆q) / (p_{1,c'}(p) p_{1,c'}(q))` over a grid.
pub fn seminorm_ratio_table(
    env: &Enveloping,
    p: &SymTensor,
    q: &SymTensor,
    cs: &[f64],
    c_primes: &[f64],
    hbar: Complex64,
) -> Result<Vec<SeminormRatioRow>> {
    let star = gutt_star(env, p, q)?;
    let mut rows = Vec::new();
    for &c in cs {
        let s = seminorm_rc(&star, 1.0, c, hbar);
        for &c_prime in c_primes {
            let f = seminorm_rc(p, 1.0, c_prime, hbar) * seminorm_rc(q, 1.0, c_prime, hbar);
            rows.push(SeminormRatioRow { c, c_prime, star: s, factors: f, ratio: s / f });
        }
    }
    Ok(rows)
}
