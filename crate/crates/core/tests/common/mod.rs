#![allow(dead_code)]

use std::sync::Arc;

use num_complex::Complex64;
use quantstar::group::rep::catalog_rep;
use quantstar::group::{CoeffFn, GroupElementExpr, MatrixElementFunction, MatrixRep};
use quantstar::scalar::int;
use quantstar::std_star::PhaseSpacePoly;
use quantstar::{GaussianRational, HbarScalar, Monomial, SymTensor};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const NONABELIAN: [&str; 4] = ["heisenberg", "sl2", "so3", "axb"];
pub const ALL: [&str; 6] = ["abelian(1)", "abelian(3)", "heisenberg", "sl2", "so3", "axb"];

pub fn rand_monomial(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Monomial {
    let mut e = vec![0u32; n];
    for _ in 0..d {
        e[rng.gen_range(0..n)] += 1;
    }
    Monomial(e)
}

/// Small integer coefficient, occasionally with an `hbar` or imaginary part.
pub fn rand_scalar(rng: &mut ChaCha8Rng, with_hbar: bool) -> HbarScalar {
    let re = rng.gen_range(-5..=5);
    let im = if rng.gen_bool(0.25) { rng.gen_range(-3..=3) } else { 0 };
    let c0 = GaussianRational::new(int(re), int(im));
    let mut coeffs = vec![c0];
    if with_hbar && rng.gen_bool(0.3) {
        coeffs.push(GaussianRational::from_int(rng.gen_range(-3..=3)));
    }
    HbarScalar::from_coeffs(coeffs)
}

pub fn rand_homogeneous(rng: &mut ChaCha8Rng, n: usize, d: usize, terms: usize, with_hbar: bool) -> SymTensor {
    let mut p = SymTensor::zero(n);
    while p.is_zero() {
        for _ in 0..rng.gen_range(1..=terms) {
            p.add_term(rand_monomial(rng, n, d), &rand_scalar(rng, with_hbar));
        }
    }
    p
}

pub fn rand_sym(rng: &mut ChaCha8Rng, n: usize, max_deg: usize, terms: usize, with_hbar: bool) -> SymTensor {
    let mut p = SymTensor::zero(n);
    for _ in 0..rng.gen_range(1..=terms) {
        let d = rng.gen_range(0..=max_deg);
        p.add_term(rand_monomial(rng, n, d), &rand_scalar(rng, with_hbar));
    }
    p
}

pub fn rand_vec(rng: &mut ChaCha8Rng, d: usize) -> Vec<GaussianRational> {
    loop {
        let v: Vec<GaussianRational> = (0..d).map(|_| GaussianRational::from_int(rng.gen_range(-3..=3))).collect();
        if v.iter().any(|x| *x != GaussianRational::from_int(0)) {
            return v;
        }
    }
}

pub fn rand_matrix_element(rng: &mut ChaCha8Rng, rep: &Arc<MatrixRep>) -> MatrixElementFunction {
    let d = rep.d();
    MatrixElementFunction::new(rep.clone(), rand_vec(rng, d), rand_vec(rng, d)).unwrap()
}

pub fn rand_coeff_fn(rng: &mut ChaCha8Rng, rep: &Arc<MatrixRep>) -> CoeffFn {
    let mut f = CoeffFn::Matrix(vec![rand_matrix_element(rng, rep)]);
    if rng.gen_bool(0.5) {
        f = f.add(&CoeffFn::constant(rep.algebra_dim(), GaussianRational::from_int(rng.gen_range(-2..=2)))).unwrap();
    }
    f
}

pub fn rand_phase_poly(rng: &mut ChaCha8Rng, rep: &Arc<MatrixRep>, max_deg: usize, terms: usize) -> PhaseSpacePoly {
    let n = rep.algebra_dim();
    let mut out = PhaseSpacePoly::zero(n);
    for _ in 0..terms {
        out.push(rand_coeff_fn(rng, rep), rand_sym(rng, n, max_deg, 2, true)).unwrap();
    }
    out
}

pub fn rand_real(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-scale..=scale)).collect()
}

/// Product of two real exponentials.
pub fn rand_group_element(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> GroupElementExpr {
    GroupElementExpr::exp_real(&rand_real(rng, n, scale))
        .then(rand_real(rng, n, scale).into_iter().map(|x| Complex64::new(x, 0.0)).collect())
}

pub fn rep(name: &str) -> Arc<MatrixRep> {
    Arc::new(catalog_rep(name).unwrap())
}

pub fn rel_dev(a: Complex64, b: Complex64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).norm() / a.norm().max(b.norm())
}

pub mod strategies {
    use proptest::prelude::*;
    use quantstar::scalar::int;
    use quantstar::{GaussianRational, HbarScalar, Monomial, SymTensor};

    pub fn scalar() -> impl Strategy<Value = HbarScalar> {
        (-6i64..=6, -2i64..=2, -3i64..=3).prop_map(|(re, im, h)| {
            HbarScalar::from_coeffs(vec![GaussianRational::new(int(re), int(im)), GaussianRational::from_int(h)])
        })
    }

    pub fn classical_scalar() -> impl Strategy<Value = HbarScalar> {
        (-6i64..=6).prop_map(HbarScalar::from_int)
    }

    /// Sparse symmetric tensors over an `n`-dimensional algebra with exponents
    /// bounded so that the total degree stays `≤ max_deg`.
    pub fn sym_tensor(n: usize, max_deg: usize, classical: bool) -> impl Strategy<Value = SymTensor> {
        let term = (
            proptest::collection::vec(0..n, 0..=max_deg),
            if classical { classical_scalar().boxed() } else { scalar().boxed() },
        );
        proptest::collection::vec(term, 1..4).prop_map(move |terms| {
            SymTensor::from_terms(n, terms.into_iter().map(|(word, c)| (Monomial::from_word(n, &word), c)))
        })
    }

    pub fn homogeneous(n: usize, d: usize) -> impl Strategy<Value = SymTensor> {
        proptest::collection::vec((proptest::collection::vec(0..n, d), scalar()), 1..4).prop_map(move |terms| {
            SymTensor::from_terms(n, terms.into_iter().map(|(word, c)| (Monomial::from_word(n, &word), c)))
        })
    }

    pub fn word(n: usize, max_len: usize) -> impl Strategy<Value = Vec<usize>> {
        proptest::collection::vec(0..n, 0..=max_len)
    }
}
