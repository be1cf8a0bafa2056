//! Lie-Taylor series, majorants and the entire-function seminorms `q_{0,c}`.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use super::coeff::{for_each_word, CoeffFn, MatrixElementFunction};
use super::element::{op_norm, GroupElementExpr};
use crate::error::{Error, Result};

/// Default cap on distinct vectors tracked by [`majorant_coeffs`].
pub const DEFAULT_STATE_BUDGET: usize = 200_000;

fn ln_factorial(k: usize) -> f64 {
    (1..=k).map(|j| (j as f64).ln()).sum()
}

fn check_point(n: usize, x: &[Complex64]) -> Result<()> {
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    Ok(())
}

/// One summand of a matrix-valued [`CoeffFn`], prepared at a point `g`:
/// left vector `(g_0 π(g))ᵀ w`, right vector `v` and full generators.
struct Prepared {
    left: Vec<Complex64>,
    right: Vec<Complex64>,
    gens: Vec<DMatrix<Complex64>>,
}

fn prepare(m: &MatrixElementFunction, g: &GroupElementExpr) -> Result<Prepared> {
    Ok(Prepared {
        left: m.pulled_left(g)?,
        right: m.right().iter().map(|x| x.to_complex()).collect(),
        gens: m.full_generators(),
    })
}

fn mat_vec(m: &DMatrix<Complex64>, v: &[Complex64]) -> Vec<Complex64> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)] * v[c]).sum()).collect()
}

fn pair(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `T_φ(x; g) = Σ_{k ≤ N} (1/k!) Σ_{|α| = k} (Lie(α)φ)(g) x^α`.
///
/// For matrix elements the inner sum is `⟨w_g, ρ(X)^k v⟩` with
/// `ρ(X) = Σ x^i ρ_i`, which avoids enumerating words.
pub fn lie_taylor_eval(phi: &CoeffFn, g: &GroupElementExpr, x: &[Complex64], order: usize) -> Result<Complex64> {
    check_point(phi.algebra_dim(), x)?;
    match phi {
        CoeffFn::Matrix(terms) => {
            let mut total = Complex64::zero();
            for m in terms {
                let p = prepare(m, g)?;
                let mut gx = DMatrix::zeros(p.right.len(), p.right.len());
                for (xi, gi) in x.iter().zip(&p.gens) {
                    gx += gi * *xi;
                }
                let mut u = p.right.clone();
                total += pair(&p.left, &u);
                for k in 1..=order {
                    u = mat_vec(&gx, &u).into_iter().map(|z| z / k as f64).collect();
                    total += pair(&p.left, &u);
                }
            }
            Ok(total)
        }
        CoeffFn::Jet(j) => {
            if *g != *j.base() {
                return Err(Error::JetNotEvaluable);
            }
            if order > j.order() {
                return Err(Error::JetOrderExhausted { needed: order, available: j.order() });
            }
            let mut total = Complex64::zero();
            for (word, c) in j.coeffs() {
                if word.len() <= order {
                    let mono: Complex64 = word.iter().map(|&l| x[l]).product();
                    total += c * mono / ln_factorial(word.len()).exp();
                }
            }
            Ok(total)
        }
    }
}

/// Rotates by a unit in `{±1, ±i}` so the first nonzero entry lies in the
/// quadrant `re > 0, im ≥ 0`. Moduli of pairings are unchanged and the
/// operation is exact in floating point.
fn canonical(v: &mut [Complex64]) {
    let Some(z) = v.iter().find(|z| **z != Complex64::zero()).copied() else {
        return;
    };
    let rot = |z: Complex64, k: u8| match k {
        0 => z,
        1 => Complex64::new(-z.im, z.re),
        2 => Complex64::new(-z.re, -z.im),
        _ => Complex64::new(z.im, -z.re),
    };
    let k = (0..4u8).find(|&k| {
        let r = rot(z, k);
        r.re > 0.0 && r.im >= 0.0
    });
    if let Some(k) = k {
        for x in v.iter_mut() {
            *x = rot(*x, k);
        }
    }
}

fn key(v: &[Complex64]) -> Vec<u64> {
    v.iter().flat_map(|z| [(z.re + 0.0).to_bits(), (z.im + 0.0).to_bits()]).collect()
}

/// Level-by-level enumeration of `ρ_α v` over words of length `k`, merging
/// identical vectors with multiplicities. Returns `Σ_{|α|=k} |⟨w, ρ_α v⟩|`
/// for `k = 0..=order`, and whether every vector vanished by level
/// `order + 1`.
fn word_sums(parts: &[Prepared], n: usize, order: usize, budget: usize) -> Result<(Vec<f64>, bool)> {
    // one state is the concatenation of the per-summand vectors
    let lens: Vec<usize> = parts.iter().map(|p| p.right.len()).collect();
    let start: Vec<Complex64> = parts.iter().flat_map(|p| p.right.iter().copied()).collect();
    let apply = |i: usize, u: &[Complex64]| -> Vec<Complex64> {
        let mut out = Vec::with_capacity(u.len());
        let mut off = 0;
        for (p, &len) in parts.iter().zip(&lens) {
            out.extend(mat_vec(&p.gens[i], &u[off..off + len]));
            off += len;
        }
        out
    };
    let value = |u: &[Complex64]| -> f64 {
        let mut off = 0;
        let mut s = Complex64::zero();
        for (p, &len) in parts.iter().zip(&lens) {
            s += pair(&p.left, &u[off..off + len]);
            off += len;
        }
        s.norm()
    };
    let mut level: HashMap<Vec<u64>, (Vec<Complex64>, f64)> = HashMap::new();
    let mut s0 = start;
    canonical(&mut s0);
    if s0.iter().any(|z| *z != Complex64::zero()) {
        level.insert(key(&s0), (s0, 1.0));
    }
    let mut sums = Vec::with_capacity(order + 1);
    for k in 0..=order + 1 {
        if k <= order {
            sums.push(level.values().map(|(u, m)| m * value(u)).sum());
        } else {
            return Ok((sums, level.is_empty()));
        }
        let mut next: HashMap<Vec<u64>, (Vec<Complex64>, f64)> = HashMap::new();
        for (u, m) in level.values() {
            for i in 0..n {
                let mut u2 = apply(i, u);
                if u2.iter().all(|z| *z == Complex64::zero()) {
                    continue;
                }
                canonical(&mut u2);
                next.entry(key(&u2)).or_insert_with(|| (u2, 0.0)).1 += m;
            }
            if next.len() > budget {
                return Err(Error::WordBudgetExceeded(budget));
            }
        }
        level = next;
    }
    unreachable!()
}

/// `c_k = (1/k!) Σ_{α ∈ {1..n}^k} |(Lie(α)φ)(g)|` for `k = 0..=order`.
pub fn majorant_coeffs(phi: &CoeffFn, g: &GroupElementExpr, order: usize) -> Result<Vec<f64>> {
    majorant_coeffs_with_budget(phi, g, order, DEFAULT_STATE_BUDGET)
}

pub fn majorant_coeffs_with_budget(
    phi: &CoeffFn,
    g: &GroupElementExpr,
    order: usize,
    budget: usize,
) -> Result<Vec<f64>> {
    let n = phi.algebra_dim();
    let sums = match phi {
        CoeffFn::Matrix(terms) => {
            let parts = terms.iter().map(|m| prepare(m, g)).collect::<Result<Vec<_>>>()?;
            word_sums(&parts, n, order, budget)?.0
        }
        CoeffFn::Jet(j) => {
            if *g != *j.base() {
                return Err(Error::JetNotEvaluable);
            }
            if order > j.order() {
                return Err(Error::JetOrderExhausted { needed: order, available: j.order() });
            }
            (0..=order)
                .map(|k| {
                    let mut s = 0.0;
                    for_each_word(n, k, |w| s += j.coeff(w).norm());
                    s
                })
                .collect()
        }
    };
    Ok(sums.into_iter().enumerate().map(|(k, s)| (s / ln_factorial(k).exp()).abs()).collect())
}

/// Truncation and rigorous tail bound for `q_{0,c}(φ) = Σ_k c_k c^k`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct EntireSeminorm {
    pub truncation: f64,
    pub tail_bound: f64,
    /// Radius `r` used in the Cauchy estimate; `None` when the tail is exactly 0.
    pub radius: Option<f64>,
    /// Operator norms `‖ρ_i‖` used to normalize the basis.
    pub scales: Vec<f64>,
}

/// Tail `Σ_{k>N} (nc)^k k^k / (k! r^k)` is bounded by its first term over
/// `1 - nce/r`, since consecutive ratios are `(nc/r)(1+1/k)^k < nce/r`.
fn cauchy_tail(n: usize, c: f64, order: usize, r: f64) -> f64 {
    let k = (order + 1) as f64;
    let ratio = n as f64 * c * std::f64::consts::E / r;
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    let ln_first = k * (n as f64 * c).ln() + k * k.ln() - ln_factorial(order + 1) - k * r.ln();
    ln_first.exp() / (1.0 - ratio)
}

/// Smallest value of `e^r · cauchy_tail(r)` over a logarithmic scan `r > nce`.
pub fn optimal_tail(n: usize, c: f64, order: usize, sup_factor: f64) -> (f64, f64) {
    let r0 = n as f64 * c * std::f64::consts::E;
    let mut best = (f64::INFINITY, r0);
    for step in 1..=4000 {
        let r = r0 * (1.0 + 1e-3 * step as f64).powf(1.5);
        let v = sup_factor * r.exp() * cauchy_tail(n, c, order, r);
        if v < best.0 {
            best = (v, r);
        }
    }
    best
}

/// Evaluates `q_{0,c}` in the basis rescaled to `‖ρ_i‖ = 1` (spectral norm on
/// the representation space).
///
/// On `{exp(z_1 ξ_1) ··· exp(z_k ξ_k) : Σ |z_j| ≤ r}` with unit `ξ_j` one has
/// `|φ| ≤ ‖w‖ ‖g_0‖ e^r ‖v‖`, which feeds the Cauchy estimate for the tail.
/// If all words of length `N + 1` annihilate `v` the tail is exactly zero.
pub fn entire_seminorm(phi: &MatrixElementFunction, c: f64, order: usize) -> Result<EntireSeminorm> {
    let n = phi.algebra_dim();
    let mut p = prepare(phi, &GroupElementExpr::identity())?;
    let mut scales = Vec::with_capacity(n);
    for (i, g) in p.gens.iter_mut().enumerate() {
        let s = op_norm(g);
        if s == 0.0 || !s.is_finite() {
            return Err(Error::NonNormalizableBasis(format!("rho_{} has operator norm {s}", i + 1)));
        }
        *g /= Complex64::new(s, 0.0);
        scales.push(s);
    }
    let (sums, terminates) = word_sums(std::slice::from_ref(&p), n, order, DEFAULT_STATE_BUDGET)?;
    let truncation = sums.iter().enumerate().map(|(k, s)| s / ln_factorial(k).exp() * c.powi(k as i32)).sum();
    if terminates || c == 0.0 {
        return Ok(EntireSeminorm { truncation, tail_bound: 0.0, radius: None, scales });
    }
    let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let g0 = phi.base().map_or(1.0, |b| b.iter().map(op_norm).product());
    let w: Vec<Complex64> = phi.left().iter().map(|x| x.to_complex()).collect();
    let sup_factor = norm(&w) * g0 * norm(&p.right);
    let (tail_bound, r) = optimal_tail(n, c, order, sup_factor);
    Ok(EntireSeminorm { truncation, tail_bound, radius: Some(r), scales })
}

/// Both sides of the restriction inequality
/// `Σ_{k≤N} c_k c^k ≤ ‖φ‖_{K_r} Σ_{k≤N} (n/r)^k k^k/k! c^k`, in the
/// normalized basis, with `‖φ‖_{K_r}` replaced by its bound `‖w‖‖v‖e^r`.
pub fn restriction_sides(phi: &MatrixElementFunction, c: f64, order: usize, r: f64) -> Result<(f64, f64)> {
    let n = phi.algebra_dim() as f64;
    let lhs = entire_seminorm(phi, c, order)?.truncation;
    let norm = |v: &[crate::scalar::GaussianRational]| v.iter().map(|z| z.to_complex().norm_sqr()).sum::<f64>().sqrt();
    let g0 = phi.base().map_or(1.0, |b| b.iter().map(op_norm).product());
    let sup = norm(phi.left()) * norm(phi.right()) * g0 * r.exp();
    let series: f64 = (0..=order)
        .map(|k| {
            let kf = k as f64;
            let ln = if k == 0 { 0.0 } else { kf * (n * c / r).ln() + kf * kf.ln() - ln_factorial(k) };
            ln.exp()
        })
        .sum();
    Ok((lhs, sup * series))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::rep::{basis_vector, catalog_rep};
    use crate::scalar::GaussianRational;
    use std::sync::Arc;

    fn sl2_11() -> MatrixElementFunction {
        let rep = Arc::new(catalog_rep("sl2").unwrap());
        MatrixElementFunction::new(rep, basis_vector(2, 0), basis_vector(2, 0)).unwrap()
    }

    fn t_power(k: usize) -> CoeffFn {
        let mut coeffs = vec![GaussianRational::zero(); k + 1];
        coeffs[k] = GaussianRational::from_int(1);
        CoeffFn::polynomial_1d(&coeffs)
    }

    fn cx(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn taylor_constant_term_and_quadratic() {
        let phi = CoeffFn::Matrix(vec![sl2_11()]);
        let g = GroupElementExpr::exp_real(&[0.2, 0.1, -0.3]);
        let t0 = lie_taylor_eval(&phi, &g, &cx(&[0.0, 0.0, 0.0]), 10).unwrap();
        assert!((t0 - phi.eval(&g).unwrap()).norm() < 1e-15);
        let sq = t_power(2);
        let id = GroupElementExpr::identity();
        assert_eq!(lie_taylor_eval(&sq, &id, &cx(&[0.5]), 2).unwrap(), Complex64::new(0.25, 0.0));
        assert_eq!(lie_taylor_eval(&sq, &id, &cx(&[0.5]), 7).unwrap(), Complex64::new(0.25, 0.0));
        assert_eq!(lie_taylor_eval(&sq, &id, &cx(&[0.5]), 1).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn taylor_converges_to_exponential() {
        let phi = CoeffFn::Matrix(vec![sl2_11()]);
        let g = GroupElementExpr::exp_real(&[0.1, -0.2, 0.05]);
        let x = cx(&[0.3, -0.25, 0.1]);
        let direct = phi.eval(&g.then(x.clone())).unwrap();
        let t = lie_taylor_eval(&phi, &g, &x, 20).unwrap();
        assert!((t - direct).norm() / direct.norm() < 1e-10);
    }

    #[test]
    fn jet_taylor_matches_matrix_taylor() {
        let m = sl2_11();
        let base = GroupElementExpr::exp_real(&[0.1, 0.2, 0.3]);
        let jet = CoeffFn::Jet(crate::group::Jet::from_matrix(&m, &base, 5).unwrap());
        let x = cx(&[0.1, -0.2, 0.15]);
        let a = lie_taylor_eval(&jet, &base, &x, 5).unwrap();
        let b = lie_taylor_eval(&CoeffFn::Matrix(vec![m]), &base, &x, 5).unwrap();
        assert!((a - b).norm() < 1e-13);
        assert_eq!(lie_taylor_eval(&jet, &base, &x, 6), Err(Error::JetOrderExhausted { needed: 6, available: 5 }));
        let mj = majorant_coeffs(&jet, &base, 5).unwrap();
        let mm = majorant_coeffs(&CoeffFn::Matrix(vec![sl2_11()]), &base, 5).unwrap();
        for (a, b) in mj.iter().zip(&mm) {
            assert!((a - b).abs() < 1e-12 * b.max(1.0));
        }
    }

    #[test]
    fn majorant_examples() {
        let id = GroupElementExpr::identity();
        let one = CoeffFn::polynomial_1d(&[GaussianRational::from_int(1)]);
        assert_eq!(majorant_coeffs(&one, &id, 3).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(majorant_coeffs(&t_power(1), &id, 3).unwrap(), vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn majorant_matches_word_enumeration() {
        let phi = CoeffFn::Matrix(vec![sl2_11()]);
        let g = GroupElementExpr::exp_real(&[0.3, 0.2, -0.1]);
        let fast = majorant_coeffs(&phi, &g, 5).unwrap();
        for (k, fk) in fast.iter().enumerate() {
            let mut s = 0.0;
            for_each_word(3, k, |w| s += phi.lie_derive_word(w).unwrap().eval(&g).unwrap().norm());
            let brute = s / ln_factorial(k).exp();
            assert!((fk - brute).abs() <= 1e-12 * brute.max(1.0), "k={k}: {fk} vs {brute}");
        }
    }

    #[test]
    fn majorant_budget_is_enforced() {
        let phi = CoeffFn::Matrix(vec![sl2_11()]);
        let g = GroupElementExpr::exp_real(&[0.3, 0.2, -0.1]);
        assert_eq!(majorant_coeffs_with_budget(&phi, &g, 12, 1), Err(Error::WordBudgetExceeded(1)));
    }

    #[test]
    fn entire_seminorm_examples() {
        let rep = Arc::new(catalog_rep("abelian(1)").unwrap());
        let one = MatrixElementFunction::new(rep.clone(), basis_vector(2, 0), basis_vector(2, 0)).unwrap();
        let s = entire_seminorm(&one, 2.0, 5).unwrap();
        assert_eq!((s.truncation, s.tail_bound), (1.0, 0.0));
        let t = MatrixElementFunction::new(rep, basis_vector(2, 0), basis_vector(2, 1)).unwrap();
        let s = entire_seminorm(&t, 2.0, 1).unwrap();
        assert_eq!((s.truncation, s.tail_bound), (2.0, 0.0));
        let zero = MatrixElementFunction::new(
            Arc::new(crate::group::rep::trivial_rep(1)),
            basis_vector(1, 0),
            basis_vector(1, 0),
        )
        .unwrap();
        assert!(matches!(entire_seminorm(&zero, 1.0, 3), Err(Error::NonNormalizableBasis(_))));
    }

    #[test]
    fn sl2_tail_bound_dominates_higher_truncation() {
        let phi = sl2_11();
        let s30 = entire_seminorm(&phi, 1.0, 30).unwrap();
        let s60 = entire_seminorm(&phi, 1.0, 60).unwrap();
        assert!(s30.tail_bound.is_finite());
        assert!(s30.radius.unwrap() > 3.0 * std::f64::consts::E);
        assert!(s60.truncation - s30.truncation <= s30.tail_bound);
        assert!(s60.truncation >= s30.truncation);
    }
}
