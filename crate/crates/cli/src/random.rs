//! Seeded generators for the check suites.

use std::sync::Arc;

use num_complex::Complex64;
use quantstar::group::{CoeffFn, GroupElementExpr, MatrixElementFunction, MatrixRep};
use quantstar::scalar::int;
use quantstar::std_star::PhaseSpacePoly;
use quantstar::{GaussianRational, HbarScalar, Monomial, SymTensor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent stream for task `index` of suite `label`.
pub fn stream(seed: u64, label: &str, index: u64) -> ChaCha8Rng {
    let tag = label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ tag);
    rng.set_stream(index);
    rng
}

pub fn monomial(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Monomial {
    let mut e = vec![0u32; n];
    for _ in 0..d {
        e[rng.gen_range(0..n)] += 1;
    }
    Monomial(e)
}

/// Small Gaussian integer, with an optional `hbar` term.
pub fn scalar(rng: &mut ChaCha8Rng, with_hbar: bool) -> HbarScalar {
    let re = rng.gen_range(-5..=5);
    let im = if rng.gen_bool(0.25) { rng.gen_range(-3..=3) } else { 0 };
    let mut coeffs = vec![GaussianRational::new(int(re), int(im))];
    if with_hbar && rng.gen_bool(0.3) {
        coeffs.push(GaussianRational::from_int(rng.gen_range(-3..=3)));
    }
    HbarScalar::from_coeffs(coeffs)
}

/// Nonzero homogeneous tensor of degree `d`.
pub fn homogeneous(rng: &mut ChaCha8Rng, n: usize, d: usize, terms: usize, with_hbar: bool) -> SymTensor {
    let mut p = SymTensor::zero(n);
    while p.is_zero() {
        for _ in 0..rng.gen_range(1..=terms) {
            p.add_term(monomial(rng, n, d), &scalar(rng, with_hbar));
        }
    }
    p
}

pub fn sym(rng: &mut ChaCha8Rng, n: usize, max_deg: usize, terms: usize, with_hbar: bool) -> SymTensor {
    let mut p = SymTensor::zero(n);
    for _ in 0..rng.gen_range(1..=terms) {
        let d = rng.gen_range(0..=max_deg);
        p.add_term(monomial(rng, n, d), &scalar(rng, with_hbar));
    }
    p
}

fn vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<GaussianRational> {
    loop {
        let v: Vec<GaussianRational> = (0..d).map(|_| GaussianRational::from_int(rng.gen_range(-3..=3))).collect();
        if v.iter().any(|x| *x != GaussianRational::from_int(0)) {
            return v;
        }
    }
}

pub fn matrix_element(rng: &mut ChaCha8Rng, rep: &Arc<MatrixRep>) -> MatrixElementFunction {
    let d = rep.d();
    MatrixElementFunction::new(rep.clone(), vector(rng, d), vector(rng, d)).expect("vectors match the representation")
}

pub fn coeff_fn(rng: &mut ChaCha8Rng, rep: &Arc<MatrixRep>) -> CoeffFn {
    let f = CoeffFn::Matrix(vec![matrix_element(rng, rep)]);
    if rng.gen_bool(0.5) {
        let c = CoeffFn::constant(rep.algebra_dim(), GaussianRational::from_int(rng.gen_range(-2..=2)));
        return f.add(&c).expect("same algebra");
    }
    f
}

pub fn phase_poly(rng: &mut ChaCha8Rng, rep: &Arc<MatrixRep>, max_deg: usize, terms: usize) -> PhaseSpacePoly {
    let n = rep.algebra_dim();
    let mut out = PhaseSpacePoly::zero(n);
    for _ in 0..terms {
        out.push(coeff_fn(rng, rep), sym(rng, n, max_deg, 2, true)).expect("same algebra");
    }
    out
}

pub fn reals(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-scale..=scale)).collect()
}

/// `exp(x) exp(y)` with real coordinates in `[-scale, scale]`.
pub fn group_element(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> GroupElementExpr {
    let y = reals(rng, n, scale).into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    GroupElementExpr::exp_real(&reals(rng, n, scale)).then(y)
}
