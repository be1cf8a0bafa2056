mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use quantstar::group::CoeffFn;
use quantstar::std_star::{
    semiclassical_std, std_poisson_from_commutator, std_star, std_star_abelian, AbelianPhasePoly, PhaseSpacePoly,
};
use quantstar::{catalog_arc, Enveloping, HbarScalar, Monomial, SymTensor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn env(name: &str) -> Enveloping {
    Enveloping::new(catalog_arc(name).unwrap())
}

fn rand_abelian(rng: &mut ChaCha8Rng, n: usize, max_bideg: u32) -> AbelianPhasePoly {
    let mut f = AbelianPhasePoly::zero(n);
    for _ in 0..3 {
        let q = Monomial((0..n).map(|_| rng.gen_range(0..=max_bideg)).collect());
        let p = Monomial((0..n).map(|_| rng.gen_range(0..=max_bideg)).collect());
        f.add_term(q, p, &rand_scalar(rng, true));
    }
    f
}

/// Compares two phase-space polynomials pointwise on `G × g*`.
fn assert_close(e: &Enveloping, a: &PhaseSpacePoly, b: &PhaseSpacePoly, rng: &mut ChaCha8Rng) {
    let n = e.dim();
    for _ in 0..10 {
        let g = rand_group_element(rng, n, 0.7);
        let mu: Vec<Complex64> = rand_real(rng, n, 1.5).into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        let hbar = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (x, y) = (a.eval(&g, &mu, hbar).unwrap(), b.eval(&g, &mu, hbar).unwrap());
        assert!(rel_dev(x, y) <= 1e-9 || (x - y).norm() <= 1e-12, "{x} vs {y}");
    }
}

#[test]
fn abelian_associativity_up_to_bidegree_four() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let e = env("abelian(1)");
    let lam = HbarScalar::hbar_over_i();
    for _ in 0..15 {
        let [f, g, h] = [0; 3].map(|_| rand_abelian(&mut rng, 1, 4));
        let closed = |a: &AbelianPhasePoly, b: &AbelianPhasePoly| std_star_abelian(a, b, &lam).unwrap();
        let left = closed(&closed(&f, &g), &h);
        assert_eq!(left, closed(&f, &closed(&g, &h)));
        let group = |a: &AbelianPhasePoly, b: &AbelianPhasePoly| {
            std_star(&e, &a.to_phase_space().unwrap(), &b.to_phase_space().unwrap()).unwrap().to_abelian().unwrap()
        };
        assert_eq!(group(&group(&f, &g), &h), left);
    }
}

#[test]
fn closed_form_associative_for_any_lambda() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    let lam = HbarScalar::monomial(quantstar::GaussianRational::i(), 1);
    for _ in 0..15 {
        let [f, g, h] = [0; 3].map(|_| rand_abelian(&mut rng, 2, 2));
        let closed = |a: &AbelianPhasePoly, b: &AbelianPhasePoly| std_star_abelian(a, b, &lam).unwrap();
        assert_eq!(closed(&closed(&f, &g), &h), closed(&f, &closed(&g, &h)));
    }
}

#[test]
fn unit_is_two_sided() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for name in ALL {
        let e = env(name);
        let r = rep(name);
        let p = rand_phase_poly(&mut rng, &r, 3, 2);
        let one = PhaseSpacePoly::one(e.dim());
        assert_eq!(std_star(&e, &one, &p).unwrap(), p, "{name}");
        assert_close(&e, &std_star(&e, &p, &one).unwrap(), &p, &mut rng);
    }
}

#[test]
fn nonabelian_associativity_pointwise() {
    let mut rng = ChaCha8Rng::seed_from_u64(54);
    for name in NONABELIAN {
        let e = env(name);
        let r = rep(name);
        for _ in 0..2 {
            let [p, q, s] = [0; 3].map(|_| rand_phase_poly(&mut rng, &r, 2, 1));
            let left = std_star(&e, &std_star(&e, &p, &q).unwrap(), &s).unwrap();
            let right = std_star(&e, &p, &std_star(&e, &q, &s).unwrap()).unwrap();
            assert_close(&e, &left, &right, &mut rng);
        }
    }
}

#[test]
fn semiclassical_matches_commutator() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for name in ALL {
        let e = env(name);
        let r = rep(name);
        let n = e.dim();
        for _ in 0..3 {
            let p = rand_phase_poly(&mut rng, &r, 3, 2).map_sym(|s| quantstar::gutt::hbar_coefficient(s, 0)).unwrap();
            let psi = rand_coeff_fn(&mut rng, &r);
            let q = PhaseSpacePoly::term(psi, SymTensor::one(n)).unwrap();
            let bracket = semiclassical_std(&p, &q).unwrap();
            assert_close(&e, &bracket, &std_poisson_from_commutator(&e, &p, &q).unwrap(), &mut rng);
        }
    }
}

#[test]
fn hbar_degree_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(56);
    for name in ALL {
        let e = env(name);
        let r = rep(name);
        for _ in 0..4 {
            let p = rand_phase_poly(&mut rng, &r, 3, 2);
            let q = rand_phase_poly(&mut rng, &r, 3, 2);
            let deg = |x: &PhaseSpacePoly| x.terms().iter().filter_map(|(_, s)| s.degree()).max().unwrap_or(0);
            let bound = deg(&p) + deg(&q) + p.hbar_degree().unwrap_or(0) + q.hbar_degree().unwrap_or(0);
            assert!(std_star(&e, &p, &q).unwrap().hbar_degree().unwrap_or(0) <= bound, "{name}");
        }
    }
}

#[test]
fn json_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(57);
    for name in ALL {
        let r = rep(name);
        let p = rand_phase_poly(&mut rng, &r, 2, 2);
        let text = serde_json::to_string(&p.to_json().unwrap()).unwrap();
        let back = PhaseSpacePoly::from_json(r.algebra_dim(), &serde_json::from_str(&text).unwrap()).unwrap();
        let e = env(name);
        assert_close(&e, &back, &p, &mut rng);
    }
    let one = CoeffFn::one(2);
    let p = PhaseSpacePoly::term(one, SymTensor::generator(2, 1)).unwrap();
    let text = serde_json::to_string(&p.to_json().unwrap()).unwrap();
    assert!(text.contains("\"1\""), "{text}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn factorization_equals_closed_form_on_the_plane(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = env("abelian(2)");
        let lam = HbarScalar::hbar_over_i();
        let (f, g) = (rand_abelian(&mut rng, 2, 2), rand_abelian(&mut rng, 2, 2));
        let group = std_star(&e, &f.to_phase_space().unwrap(), &g.to_phase_space().unwrap()).unwrap();
        prop_assert_eq!(group.to_abelian().unwrap(), std_star_abelian(&f, &g, &lam).unwrap());
    }
}
