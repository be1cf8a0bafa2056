mod common;

use std::sync::Arc;

use common::*;
use num_complex::Complex64;
use quantstar::group::rep::{catalog_rep, realify_rep};
use quantstar::group::{
    lie_taylor_eval, majorant_coeffs, restriction_sides, CoeffFn, GroupElementExpr, MatrixElementFunction,
};
use quantstar::scalar::{int, rat, rational_to_f64};
use quantstar::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `∂^k/∂t_1···∂t_k φ(g exp(t_1 e_{α_1}) ··· exp(t_k e_{α_k}))` at `t = 0` by
/// nested central differences of step `h`.
fn nested_difference(phi: &MatrixElementFunction, g: &GroupElementExpr, word: &[usize], h: f64) -> Complex64 {
    let n = phi.algebra_dim();
    let k = word.len();
    let mut total = Complex64::new(0.0, 0.0);
    for signs in 0u32..(1 << k) {
        let mut point = g.clone();
        let mut sign = 1.0;
        for (j, &i) in word.iter().enumerate() {
            let s = if signs >> j & 1 == 1 { -1.0 } else { 1.0 };
            sign *= s;
            let mut xi = vec![Complex64::new(0.0, 0.0); n];
            xi[i] = Complex64::new(s * h, 0.0);
            point = point.then(xi);
        }
        total += phi.eval(&point).unwrap() * sign;
    }
    total / (2.0 * h).powi(k as i32)
}

/// Richardson table on steps `h, h/2, h/4`; the error is even in `h`.
fn richardson(phi: &MatrixElementFunction, g: &GroupElementExpr, word: &[usize], h: f64) -> Complex64 {
    let mut row: Vec<Complex64> = (0..3).map(|j| nested_difference(phi, g, word, h / 2f64.powi(j))).collect();
    let mut factor = 4.0;
    while row.len() > 1 {
        row = row.windows(2).map(|w| (w[1] * factor - w[0]) / (factor - 1.0)).collect();
        factor *= 4.0;
    }
    row[0]
}

#[test]
fn lie_derivatives_match_richardson_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let reps: Vec<_> = NONABELIAN.iter().map(|name| rep(name)).collect();
    let mut accepted = 0;
    let mut worst: f64 = 0.0;
    while accepted < 100 {
        let r = &reps[rng.gen_range(0..reps.len())];
        let n = r.algebra_dim();
        let phi = rand_matrix_element(&mut rng, r);
        let g = rand_group_element(&mut rng, n, 0.7);
        let len = rng.gen_range(1..=3);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n)).collect();
        let exact = phi.lie_derive_word(&word).unwrap().eval(&g).unwrap();
        // a relative comparison needs a value away from zero
        if exact.norm() < 1e-3 {
            continue;
        }
        let fd = richardson(&phi, &g, &word, 0.1);
        let d = rel_dev(exact, fd);
        assert!(d <= 1e-8, "word {word:?}: exact {exact}, differences {fd}, rel {d:e}");
        worst = worst.max(d);
        accepted += 1;
    }
    assert!(worst > 0.0);
}

#[test]
fn heisenberg_majorant_matches_difference_sums() {
    let r = rep("heisenberg");
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..5 {
        let phi = rand_matrix_element(&mut rng, &r);
        let g = rand_group_element(&mut rng, 3, 0.5);
        let c = majorant_coeffs(&CoeffFn::Matrix(vec![phi.clone()]), &g, 3).unwrap();
        let mut fact = 1.0;
        for (k, ck) in c.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            let mut sum = 0.0;
            for idx in 0..3usize.pow(k as u32) {
                let word: Vec<usize> = (0..k).map(|j| idx / 3usize.pow(j as u32) % 3).collect();
                sum += if k == 0 { phi.eval(&g).unwrap().norm() } else { richardson(&phi, &g, &word, 0.1).norm() };
            }
            let oracle = sum / fact;
            assert!((ck - oracle).abs() <= 1e-7 * oracle.max(1.0), "k={k}: {ck} vs {oracle}");
        }
    }
}

#[test]
fn taylor_error_is_dominated_by_majorant_tail() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for name in ["sl2", "so3", "heisenberg", "axb"] {
        let r = rep(name);
        let n = r.algebra_dim();
        for _ in 0..5 {
            let phi = CoeffFn::Matrix(vec![rand_matrix_element(&mut rng, &r)]);
            let g = rand_group_element(&mut rng, n, 0.5);
            let x: Vec<Complex64> = rand_real(&mut rng, n, 0.3).into_iter().map(|v| Complex64::new(v, 0.0)).collect();
            let xmax = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let direct =
                if let CoeffFn::Matrix(m) = &phi { m[0].eval(&g.then(x.clone())).unwrap() } else { unreachable!() };
            let c = majorant_coeffs(&phi, &g, 40).unwrap();
            for order in [5, 10, 15, 20] {
                let err = (lie_taylor_eval(&phi, &g, &x, order).unwrap() - direct).norm();
                let tail: f64 = c.iter().enumerate().skip(order + 1).map(|(k, ck)| ck * xmax.powi(k as i32)).sum();
                assert!(
                    err <= tail + 1e-13 * direct.norm().max(1.0),
                    "{name} N={order}: error {err:e} > tail {tail:e}"
                );
            }
        }
    }
}

fn to_f64(a: &[Vec<Rational>]) -> Vec<Vec<f64>> {
    a.iter().map(|r| r.iter().map(rational_to_f64).collect()).collect()
}

#[test]
fn majorant_basis_change_bound() {
    // e'_i = Σ_j A[j][i] e_j with max |A| = 2
    let a = vec![vec![int(1), rat(1, 2), int(0)], vec![int(-2), int(1), int(1)], vec![int(0), rat(-3, 2), int(1)]];
    let m = 2.0;
    let af = to_f64(&a);
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for name in ["sl2", "so3", "heisenberg"] {
        let base = catalog_rep(name).unwrap();
        let changed = Arc::new(base.change_basis(&a).unwrap());
        let base = Arc::new(base);
        let n = 3;
        for _ in 0..5 {
            let w = rand_vec(&mut rng, base.d());
            let v = rand_vec(&mut rng, base.d());
            let phi = CoeffFn::Matrix(vec![MatrixElementFunction::new(base.clone(), w.clone(), v.clone()).unwrap()]);
            let phi2 = CoeffFn::Matrix(vec![MatrixElementFunction::new(changed.clone(), w, v).unwrap()]);
            // the same group element in both coordinate systems: ξ = A ξ'
            let xi2 = rand_real(&mut rng, n, 0.5);
            let xi: Vec<f64> = (0..n).map(|j| (0..n).map(|i| af[j][i] * xi2[i]).sum()).collect();
            let g = GroupElementExpr::exp_real(&xi);
            let g2 = GroupElementExpr::exp_real(&xi2);
            assert!((phi.eval(&g).unwrap() - phi2.eval(&g2).unwrap()).norm() < 1e-10);
            let c = majorant_coeffs(&phi, &g, 12).unwrap();
            let c2 = majorant_coeffs(&phi2, &g2, 12).unwrap();
            for k in 0..=12 {
                let bound = (m * n as f64).powi(k as i32) * c[k];
                assert!(c2[k] <= bound * (1.0 + 1e-10) + 1e-12, "{name} k={k}: {} > {bound}", c2[k]);
            }
        }
    }
}

#[test]
fn restriction_inequality_on_complexified_sl2() {
    let r = Arc::new(realify_rep(&catalog_rep("sl2").unwrap()));
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..3 {
        let phi = rand_matrix_element(&mut rng, &r);
        for c in [0.25, 0.5, 1.0] {
            for order in [5, 10, 15] {
                for radius in [1.0, 2.0, 4.0, 8.0] {
                    let (lhs, rhs) = restriction_sides(&phi, c, order, radius).unwrap();
                    assert!(lhs <= rhs, "c={c} N={order} r={radius}: {lhs} > {rhs}");
                }
            }
        }
    }
}
