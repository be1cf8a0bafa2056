mod common;

use common::strategies::{sym_tensor, word};
use common::ALL;
use proptest::prelude::*;
use quantstar::pbw::{inversions, RewriteStrategy};
use quantstar::{catalog_arc, pbw_desymmetrize, pbw_multiply, pbw_symmetrize, Enveloping, PbwElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn env(name: &str) -> Enveloping {
    Enveloping::new(catalog_arc(name).unwrap())
}

#[test]
fn rewriting_measure_decreases() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for name in ALL {
        let e = env(name);
        for _ in 0..200 {
            let len = rng.gen_range(0..=7);
            let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..e.dim())).collect();
            for strategy in [RewriteStrategy::Leftmost, RewriteStrategy::Rightmost] {
                let Some(next) = e.rewrite_step(&w, strategy) else {
                    assert_eq!(inversions(&w), 0);
                    continue;
                };
                for (v, _) in next {
                    assert!((v.len(), inversions(&v)) < (w.len(), inversions(&w)), "{name}: {w:?} -> {v:?}");
                }
            }
        }
    }
}

#[test]
fn rewriting_is_confluent() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for name in ALL {
        let e = env(name);
        for _ in 0..200 {
            let len = rng.gen_range(0..=7);
            let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..e.dim())).collect();
            let left = e.normal_order_rewriting(&w, RewriteStrategy::Leftmost);
            let right = e.normal_order_rewriting(&w, RewriteStrategy::Rightmost);
            assert_eq!(left, right, "{name}: {w:?}");
            assert_eq!(left, e.normal_order_q(&w), "{name}: {w:?}");
        }
    }
}

fn algebra() -> impl Strategy<Value = &'static str> {
    prop::sample::select(ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn roundtrip(name in algebra(), seed in any::<u64>()) {
        let e = env(name);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::rand_sym(&mut rng, e.dim(), 8, 4, true);
        prop_assert_eq!(pbw_desymmetrize(&e, &pbw_symmetrize(&e, &p).unwrap()).unwrap(), p);
    }

    #[test]
    fn symmetrization_preserves_top_symbol(name in algebra(), seed in any::<u64>()) {
        let e = env(name);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::rand_sym(&mut rng, e.dim(), 6, 4, true);
        let u = pbw_symmetrize(&e, &p).unwrap();
        prop_assert_eq!(u.degree(), p.degree());
        if let Some(d) = p.degree() {
            let top: Vec<_> = u.terms().iter().filter(|(m, _)| m.degree() == d).collect();
            let expected: Vec<_> = p.terms().iter().filter(|(m, _)| m.degree() == d).collect();
            prop_assert_eq!(top, expected);
        }
    }

    #[test]
    fn multiplication_is_associative(name in algebra(), seed in any::<u64>()) {
        let e = env(name);
        let n = e.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [a, b, c] = [0; 3].map(|_| {
            let p = common::rand_sym(&mut rng, n, 3, 3, true);
            PbwElement::from_terms(n, p.terms().iter().map(|(m, c)| (m.clone(), c.clone())))
        });
        let left = pbw_multiply(&e, &pbw_multiply(&e, &a, &b).unwrap(), &c).unwrap();
        let right = pbw_multiply(&e, &a, &pbw_multiply(&e, &b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn words_normal_order_like_products(name in algebra(), w in word(3, 6)) {
        let e = env(name);
        let w: Vec<usize> = w.into_iter().filter(|&i| i < e.dim()).collect();
        let mut acc = PbwElement::one(e.dim());
        for &i in &w {
            let g = PbwElement::from_terms(e.dim(), [(quantstar::Monomial::generator(e.dim(), i), quantstar::HbarScalar::from_int(1))]);
            acc = pbw_multiply(&e, &acc, &g).unwrap();
        }
        prop_assert_eq!(acc, quantstar::normal_order(&e, &w).unwrap());
    }

    #[test]
    fn json_roundtrip(p in sym_tensor(3, 5, false)) {
        let e = env("sl2");
        let u = pbw_symmetrize(&e, &p).unwrap();
        let text = serde_json::to_string(&u.to_json()).unwrap();
        let back = PbwElement::from_json(3, &serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, u);
    }
}
