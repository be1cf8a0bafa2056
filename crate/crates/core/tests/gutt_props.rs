mod common;

use common::strategies::{homogeneous, sym_tensor};
use common::{ALL, NONABELIAN};
use num_complex::Complex64;
use proptest::prelude::*;
use quantstar::gutt::{
    classical_limit, eval_on_dual, gutt_star, hbar_coefficient, kks_bracket, poisson_bracket, seminorm_ratio_table,
    DualPoint,
};
use quantstar::scalar::{int, rat};
use quantstar::sym::{binomial, factorial, sym_product};
use quantstar::{catalog_arc, Enveloping, HbarScalar, Monomial, SymTensor};

fn env(name: &str) -> Enveloping {
    Enveloping::new(catalog_arc(name).unwrap())
}

fn derivative(p: &SymTensor, var: usize, times: u32) -> SymTensor {
    let mut out = SymTensor::zero(p.dim());
    for (m, c) in p.terms() {
        if m.0[var] < times {
            continue;
        }
        let mut e = m.clone();
        e.0[var] -= times;
        let falling = (0..times).fold(int(1), |acc, j| acc * int((m.0[var] - j) as i64));
        out.add_term(e, &c.scale_rational(&falling));
    }
    out
}

/// Moyal-type product on `Sym(h_3)` with central `c`:
/// `Σ_k (λc)^k/k! Σ_j C(k,j) (-1)^j ∂_q^{k-j}∂_p^j f ∨ ∂_p^{k-j}∂_q^j g`, `λ = hbar/2i`.
fn moyal(f: &SymTensor, g: &SymTensor) -> SymTensor {
    let lambda = HbarScalar::hbar_over_i().scale_rational(&rat(1, 2));
    let top = f.degree().unwrap_or(0) + g.degree().unwrap_or(0);
    let mut out = SymTensor::zero(3);
    let mut lam_k = HbarScalar::from_int(1);
    for k in 0..=top as u32 {
        let ck = SymTensor::term(Monomial(vec![0, 0, k]), lam_k.scale_rational(&(int(1) / factorial(k as usize))));
        for j in 0..=k {
            let sign = if j % 2 == 0 { int(1) } else { int(-1) };
            let df = derivative(&derivative(f, 0, k - j), 1, j);
            let dg = derivative(&derivative(g, 1, k - j), 0, j);
            let term = sym_product(&sym_product(&df, &dg).unwrap(), &ck).unwrap();
            out = out.add(&term.scale(&HbarScalar::rational(binomial(k, j) * sign))).unwrap();
        }
        lam_k = &lam_k * &lambda;
    }
    out
}

#[test]
fn unit_and_canonical_commutation() {
    for name in ALL {
        let e = env(name);
        let n = e.dim();
        let p = SymTensor::from_terms(n, [(Monomial::generator(n, 0), HbarScalar::from_int(3))]);
        let one = SymTensor::one(n);
        assert_eq!(gutt_star(&e, &one, &p).unwrap(), p);
        assert_eq!(gutt_star(&e, &p, &one).unwrap(), p);
    }
    let h = env("heisenberg");
    let (q, p) = (SymTensor::generator(3, 0), SymTensor::generator(3, 1));
    let comm = gutt_star(&h, &q, &p).unwrap().sub(&gutt_star(&h, &p, &q).unwrap()).unwrap();
    assert_eq!(comm, SymTensor::generator(3, 2).scale(&HbarScalar::hbar_over_i()));
}

#[test]
fn ratio_table_is_finite() {
    let e = env("sl2");
    let p = SymTensor::from_terms(3, [(Monomial(vec![1, 1, 0]), HbarScalar::from_int(1))]);
    let q = SymTensor::from_terms(3, [(Monomial(vec![0, 1, 2]), HbarScalar::from_int(2))]);
    let rows = seminorm_ratio_table(&e, &p, &q, &[0.5, 1.0], &[0.5, 1.0, 2.0], Complex64::new(0.3, 0.0)).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.ratio.is_finite() && r.ratio > 0.0));
}

fn nonabelian() -> impl Strategy<Value = &'static str> {
    prop::sample::select(NONABELIAN.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn heisenberg_matches_moyal(f in sym_tensor(3, 4, false), g in sym_tensor(3, 4, false)) {
        prop_assert_eq!(gutt_star(&env("heisenberg"), &f, &g).unwrap(), moyal(&f, &g));
    }

    #[test]
    fn abelian_product_is_symmetric_product(f in sym_tensor(3, 4, false), g in sym_tensor(3, 4, false)) {
        prop_assert_eq!(gutt_star(&env("abelian(3)"), &f, &g).unwrap(), sym_product(&f, &g).unwrap());
    }

    #[test]
    fn associative_on_small_degrees(
        name in nonabelian(),
        seed in any::<u64>(),
    ) {
        use rand::SeedableRng;
        let e = env(name);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let [p, q, r] = [0; 3].map(|_| common::rand_sym(&mut rng, e.dim(), 3, 3, true));
        let left = gutt_star(&e, &gutt_star(&e, &p, &q).unwrap(), &r).unwrap();
        let right = gutt_star(&e, &p, &gutt_star(&e, &q, &r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn limits_and_degree_bound(name in nonabelian(), f in homogeneous(3, 3), g in sym_tensor(3, 3, false)) {
        let e = env(name);
        let n = e.dim();
        let restrict = |p: &SymTensor| SymTensor::from_terms(
            n,
            p.terms().iter().filter(|(m, _)| m.0[n..].iter().all(|&x| x == 0)).map(|(m, c)| (Monomial(m.0[..n].to_vec()), c.clone())),
        );
        let (f, g) = (restrict(&f), restrict(&g));
        let star = gutt_star(&e, &f, &g).unwrap();
        let classical = sym_product(&hbar_coefficient(&f, 0), &hbar_coefficient(&g, 0)).unwrap();
        prop_assert_eq!(classical_limit(&star), classical);
        let bound = f.degree().unwrap_or(0) + g.degree().unwrap_or(0) + f.hbar_degree().unwrap_or(0) + g.hbar_degree().unwrap_or(0);
        prop_assert!(star.hbar_degree().unwrap_or(0) <= bound);
    }

    #[test]
    fn bracket_is_kks(name in nonabelian(), f in sym_tensor(3, 4, true), g in sym_tensor(3, 4, true)) {
        let e = env(name);
        let n = e.dim();
        let restrict = |p: &SymTensor| SymTensor::from_terms(
            n,
            p.terms().iter().filter(|(m, _)| m.0[n..].iter().all(|&x| x == 0)).map(|(m, c)| (Monomial(m.0[..n].to_vec()), c.clone())),
        );
        let (f, g) = (restrict(&f), restrict(&g));
        prop_assert_eq!(poisson_bracket(&e, &f, &g).unwrap(), kks_bracket(&e, &f, &g).unwrap());
    }

    #[test]
    fn dual_evaluation_is_multiplicative_classically(
        f in sym_tensor(3, 3, false),
        g in sym_tensor(3, 3, false),
        mu in proptest::collection::vec(-2.0f64..2.0, 3),
    ) {
        let point = DualPoint { coords: mu.iter().map(|x| Complex64::new(*x, 0.0)).collect() };
        let hbar = Complex64::new(0.0, 0.0);
        let fg = sym_product(&f, &g).unwrap();
        let lhs = eval_on_dual(&fg, &point, hbar).unwrap();
        let rhs = eval_on_dual(&f, &point, hbar).unwrap() * eval_on_dual(&g, &point, hbar).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
    }
}
