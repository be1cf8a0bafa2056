//! Sampled Cauchy estimates and evaluation of the holomorphic extension.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::coeff::MatrixElementFunction;
use super::element::{op_norm, GroupElementExpr};
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Sampling parameters for [`cauchy_check`].
#[derive(Clone, Debug)]
pub struct CauchyConfig {
    pub instances: usize,
    pub max_k: usize,
    pub radii: Vec<f64>,
    /// Radius of the ball `K_0` the offsets `ξ` are drawn from.
    pub k0_radius: f64,
    /// Points sampled per instance for the sup on the right-hand side.
    pub kr_samples: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for CauchyConfig {
    fn default() -> Self {
        Self {
            instances: 100,
            max_k: 6,
            radii: vec![1.0, 2.0, 4.0],
            k0_radius: 0.5,
            kr_samples: 400,
            seed: 7,
            tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CauchyInstance {
    pub k: usize,
    pub r: f64,
    pub lhs: f64,
    pub sampled_sup: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CauchyReport {
    pub instances: Vec<CauchyInstance>,
    pub violations: usize,
    /// Worst `lhs / rhs` over all instances.
    pub worst_ratio: f64,
}

fn random_unit_direction(rng: &mut ChaCha8Rng, gens: &[nalgebra::DMatrix<Complex64>]) -> Vec<Complex64> {
    loop {
        let x: Vec<f64> = (0..gens.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut m = nalgebra::DMatrix::zeros(gens[0].nrows(), gens[0].ncols());
        for (xi, g) in x.iter().zip(gens) {
            m += g * Complex64::new(*xi, 0.0);
        }
        let s = op_norm(&m);
        if s > 1e-3 {
            return x.iter().map(|v| Complex64::new(v / s, 0.0)).collect();
        }
    }
}

fn scaled(x: &[Complex64], z: Complex64) -> Vec<Complex64> {
    x.iter().map(|v| v * z).collect()
}

/// Checks `|(Lie(ξ_1 ⊗ … ⊗ ξ_k)φ)(g exp ξ)| ≤ sup |φ| · k^k / r^k` on random
/// instances with unit directions (spectral norm in the representation).
///
/// The sup is sampled over `g exp(ξ) exp(z_1 ξ_1) ··· exp(z_k ξ_k)` with
/// `|z_j| = r/k`, which is exactly the polytorus of the one-variable Cauchy
/// estimates, together with random products of at most three complex
/// exponentials of total norm `≤ r`. A sampled sup can only be smaller than
/// the true one, so a violation beyond `tol` signals a wrong left side.
pub fn cauchy_check(phi: &MatrixElementFunction, g: &GroupElementExpr, cfg: &CauchyConfig) -> Result<CauchyReport> {
    if cfg.radii.is_empty() || cfg.radii.iter().any(|r| *r <= 0.0) {
        return Err(Error::InvalidRepresentation("radii must be positive".into()));
    }
    let gens = phi.full_generators();
    if gens.iter().all(|g| op_norm(g) == 0.0) {
        return Err(Error::NonNormalizableBasis("all generators vanish".into()));
    }
    let instances = (0..cfg.instances)
        .into_par_iter()
        .map(|idx| -> Result<CauchyInstance> {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9).wrapping_add(idx as u64));
            let k = rng.gen_range(0..=cfg.max_k);
            let r = cfg.radii[rng.gen_range(0..cfg.radii.len())];
            let offset =
                scaled(&random_unit_direction(&mut rng, &gens), Complex64::new(rng.gen_range(0.0..cfg.k0_radius), 0.0));
            let h = g.then(offset);
            let dirs: Vec<Vec<Complex64>> = (0..k).map(|_| random_unit_direction(&mut rng, &gens)).collect();
            let lhs = numeric_word_derivative(&phi.clone().with_base(&h)?, &dirs)?;
            let mut sup = phi.eval(&h)?.norm();
            for s in 0..cfg.kr_samples {
                let point = if k > 0 && s % 2 == 0 {
                    let mut p = h.clone();
                    for d in &dirs {
                        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
                        p = p.then(scaled(d, Complex64::from_polar(r / k as f64, theta)));
                    }
                    p
                } else {
                    let m = rng.gen_range(1..=3usize);
                    let mut weights: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..1.0)).collect();
                    let total: f64 = weights.iter().sum::<f64>().max(1e-12);
                    let budget = r * rng.gen_range(0.5..=1.0);
                    weights.iter_mut().for_each(|w| *w *= budget / total);
                    let mut p = h.clone();
                    for w in weights {
                        let d = random_unit_direction(&mut rng, &gens);
                        p = p.then(scaled(&d, Complex64::from_polar(w, rng.gen_range(0.0..std::f64::consts::TAU))));
                    }
                    p
                };
                sup = sup.max(phi.eval(&point)?.norm());
            }
            let kk = if k == 0 { 1.0 } else { (k as f64 / r).powi(k as i32) };
            Ok(CauchyInstance { k, r, lhs, sampled_sup: sup, rhs: sup * kk })
        })
        .collect::<Result<Vec<_>>>()?;
    let violations = instances.iter().filter(|i| i.lhs > i.rhs * (1.0 + cfg.tol) + cfg.tol).count();
    let worst_ratio = instances.iter().map(|i| if i.rhs > 0.0 { i.lhs / i.rhs } else { 0.0 }).fold(0.0, f64::max);
    Ok(CauchyReport { instances, violations, worst_ratio })
}

/// `|⟨w_h, ρ(d_1) ··· ρ(d_k) v⟩|` for real directions given numerically.
fn numeric_word_derivative(phi: &MatrixElementFunction, dirs: &[Vec<Complex64>]) -> Result<f64> {
    let gens = phi.full_generators();
    let left = phi.pulled_left(&GroupElementExpr::identity())?;
    let mut u: Vec<Complex64> = phi.right().iter().map(|x| x.to_complex()).collect();
    for d in dirs.iter().rev() {
        let mut m = nalgebra::DMatrix::zeros(u.len(), u.len());
        for (x, g) in d.iter().zip(&gens) {
            m += g * *x;
        }
        u = (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)] * u[c]).sum()).collect();
    }
    Ok(left.iter().zip(&u).map(|(a, b)| a * b).sum::<Complex64>().norm())
}

/// Exact check of `n^n ≤ n! e^n` for `1 ≤ n ≤ max_n`, using the lower bound
/// `Σ_{j ≤ 30} 1/j! < e`; returns the first failing `n`, if any.
pub fn factorial_estimate_check(max_n: u32) -> Option<u32> {
    let mut e_low = Rational::zero();
    let mut fact = BigInt::one();
    for j in 0..=30u32 {
        if j > 0 {
            fact *= j;
        }
        e_low += Rational::new(BigInt::one(), fact.clone());
    }
    let mut n_fact = BigInt::one();
    for n in 1..=max_n {
        n_fact *= n;
        let lhs = Rational::from_integer(BigInt::from(n).pow(n));
        let mut e_pow = Rational::one();
        for _ in 0..n {
            e_pow *= &e_low;
        }
        if lhs > Rational::from_integer(n_fact.clone()) * e_pow {
            return Some(n);
        }
    }
    None
}

/// `Φ(g exp(χ + iξ)) = ⟨w, g_0 π(g) exp(Σ (χ^j + iξ^j) ρ_j) v⟩`, the
/// holomorphic extension along the complexified exponential chart. This is
/// the value of the Lie-Taylor series `T_φ(χ + iξ; g)` where it converges.
pub fn complex_extension_eval(
    phi: &MatrixElementFunction,
    g: &GroupElementExpr,
    chi: &[f64],
    xi: &[f64],
) -> Result<Complex64> {
    if chi.len() != xi.len() {
        return Err(Error::DimensionMismatch { expected: chi.len(), found: xi.len() });
    }
    let z = chi.iter().zip(xi).map(|(a, b)| Complex64::new(*a, *b)).collect();
    phi.eval(&g.then(z))
}

/// `Φ(g exp(χ) exp(iξ))`. Agrees with [`complex_extension_eval`] only when
/// `χ` and `ξ` commute; in general it equals the Taylor series at the
/// coordinate `log(exp(χ) exp(iξ))`.
pub fn complex_extension_eval_split(
    phi: &MatrixElementFunction,
    g: &GroupElementExpr,
    chi: &[f64],
    xi: &[f64],
) -> Result<Complex64> {
    if chi.len() != xi.len() {
        return Err(Error::DimensionMismatch { expected: chi.len(), found: xi.len() });
    }
    let a = chi.iter().map(|v| Complex64::new(*v, 0.0)).collect();
    let b = xi.iter().map(|v| Complex64::new(0.0, *v)).collect();
    phi.eval(&g.then(a).then(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::analytic::lie_taylor_eval;
    use crate::group::coeff::CoeffFn;
    use crate::group::rep::{basis_vector, catalog_rep};
    use std::sync::Arc;

    fn sl2_11() -> MatrixElementFunction {
        let rep = Arc::new(catalog_rep("sl2").unwrap());
        MatrixElementFunction::new(rep, basis_vector(2, 0), basis_vector(2, 0)).unwrap()
    }

    #[test]
    fn factorial_estimate_holds() {
        assert_eq!(factorial_estimate_check(20), None);
    }

    #[test]
    fn cauchy_no_violations_small() {
        let cfg = CauchyConfig { instances: 20, kr_samples: 200, ..Default::default() };
        let rep = cauchy_check(&sl2_11(), &GroupElementExpr::identity(), &cfg).unwrap();
        assert_eq!(rep.violations, 0, "{:?}", rep.worst_ratio);
        assert!(rep.instances.iter().any(|i| i.k == 0));
    }

    #[test]
    fn extension_restricts_and_matches_taylor() {
        let phi = sl2_11();
        let g = GroupElementExpr::exp_real(&[0.1, 0.2, -0.1]);
        let chi = [0.15, -0.1, 0.2];
        let real = phi.eval(&g.then(chi.iter().map(|&c| Complex64::new(c, 0.0)).collect())).unwrap();
        assert!((complex_extension_eval(&phi, &g, &chi, &[0.0; 3]).unwrap() - real).norm() < 1e-14);
        let xi = [-0.2, 0.1, 0.05];
        let x: Vec<Complex64> = chi.iter().zip(&xi).map(|(a, b)| Complex64::new(*a, *b)).collect();
        let taylor = lie_taylor_eval(&CoeffFn::Matrix(vec![phi.clone()]), &g, &x, 24).unwrap();
        let ext = complex_extension_eval(&phi, &g, &chi, &xi).unwrap();
        assert!((ext - taylor).norm() / taylor.norm() < 1e-8);
    }

    /// Matrix log near the identity by its power series; sl2 coordinates are
    /// read off `L = [[h, e], [f, -h]]`.
    fn sl2_log(m: &nalgebra::DMatrix<Complex64>) -> Vec<Complex64> {
        let a = m - nalgebra::DMatrix::<Complex64>::identity(2, 2);
        let mut pow = a.clone();
        let mut l = nalgebra::DMatrix::<Complex64>::zeros(2, 2);
        for k in 1..200 {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            l += &pow * Complex64::new(sign / k as f64, 0.0);
            pow = &pow * &a;
        }
        vec![l[(0, 0)], l[(0, 1)], l[(1, 0)]]
    }

    #[test]
    fn split_extension_is_taylor_at_bch_coordinate() {
        let phi = sl2_11();
        let rep = catalog_rep("sl2").unwrap();
        let chi = [0.2, -0.15, 0.1];
        let xi = [0.1, 0.2, -0.2];
        let prod = GroupElementExpr::exp_real(&chi).then(xi.iter().map(|&v| Complex64::new(0.0, v)).collect());
        let x = sl2_log(&prod.eval(&rep).unwrap());
        let id = GroupElementExpr::identity();
        let taylor = lie_taylor_eval(&CoeffFn::Matrix(vec![phi.clone()]), &id, &x, 30).unwrap();
        let split = complex_extension_eval_split(&phi, &id, &chi, &xi).unwrap();
        assert!((split - taylor).norm() / taylor.norm() < 1e-10);
        // the naive coordinate χ + iξ differs because χ and ξ do not commute
        let single = complex_extension_eval(&phi, &id, &chi, &xi).unwrap();
        assert!((single - split).norm() > 1e-4);
    }
}
