mod common;

use common::strategies::{homogeneous, sym_tensor};
use num_complex::Complex64;
use proptest::prelude::*;
use quantstar::sym::{l1_proj_norm, polarize, seminorm_rc, sym_product, symmetrize, TensorWordExpr};
use quantstar::{GaussianRational, HbarScalar, SymTensor};

fn word_expr() -> impl Strategy<Value = TensorWordExpr> {
    proptest::collection::vec((common::strategies::word(3, 6), common::strategies::scalar()), 1..6).prop_map(|words| {
        let mut t = TensorWordExpr::zero(3);
        for (w, c) in words {
            t.add_word(w, &c).unwrap();
        }
        t
    })
}

fn exact_vector() -> impl Strategy<Value = Vec<GaussianRational>> {
    proptest::collection::vec((-4i64..=4, -2i64..=2), 3).prop_map(|v| {
        v.into_iter()
            .map(|(re, im)| GaussianRational::new(quantstar::scalar::int(re), quantstar::scalar::int(im)))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symmetrize_is_a_projection(t in word_expr()) {
        let s = symmetrize(&t);
        prop_assert_eq!(symmetrize(&TensorWordExpr::include(&s)), s);
    }

    #[test]
    fn include_is_a_section(p in sym_tensor(3, 6, false)) {
        prop_assert_eq!(symmetrize(&TensorWordExpr::include(&p)), p);
    }

    #[test]
    fn symmetric_product_is_commutative_and_associative(
        p in sym_tensor(3, 4, false),
        q in sym_tensor(3, 4, false),
        r in sym_tensor(3, 3, false),
    ) {
        prop_assert_eq!(sym_product(&p, &q).unwrap(), sym_product(&q, &p).unwrap());
        let left = sym_product(&sym_product(&p, &q).unwrap(), &r).unwrap();
        let right = sym_product(&p, &sym_product(&q, &r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn submultiplicative_at_r_zero(
        p in sym_tensor(3, 4, false),
        q in sym_tensor(3, 4, false),
        c in prop::sample::select(vec![0.5, 1.0, 2.0]),
        re in -1.5f64..1.5,
        im in -1.5f64..1.5,
    ) {
        let hbar = Complex64::new(re, im);
        let lhs = seminorm_rc(&sym_product(&p, &q).unwrap(), 0.0, c, hbar);
        let rhs = seminorm_rc(&p, 0.0, c, hbar) * seminorm_rc(&q, 0.0, c, hbar);
        prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn polarization_on_the_diagonal(k in 1usize..=5, p_seed in any::<u64>(), v in exact_vector()) {
        let p = {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(p_seed);
            common::rand_homogeneous(&mut rng, 3, k, 4, false)
        };
        let zero = GaussianRational::from_int(0);
        let poly = |x: &[GaussianRational]| p.eval_exact(x, &zero);
        let diag = vec![v.clone(); k];
        prop_assert_eq!(polarize(poly, &diag), poly(&v));
    }

    #[test]
    fn homogeneous_norm_is_coefficient_sum(p in homogeneous(3, 4)) {
        let hbar = Complex64::new(0.5, 0.0);
        let norms = l1_proj_norm(&p, hbar);
        let direct: f64 = p.terms().values().map(|c| c.eval(hbar).norm()).sum();
        prop_assert_eq!(norms.len(), 5);
        prop_assert!((norms[4] - direct).abs() <= 1e-12 * direct.max(1.0));
        prop_assert!(norms[..4].iter().all(|x| *x == 0.0));
    }

    #[test]
    fn json_roundtrip(p in sym_tensor(3, 5, false)) {
        let text = serde_json::to_string(&p.to_json()).unwrap();
        let back = SymTensor::from_json(3, &serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, p);
    }
}

#[test]
fn monomials_have_unit_norm() {
    for word in [vec![0], vec![0, 0, 1], vec![2, 2, 2, 2], vec![0, 1, 2, 0, 1]] {
        let p = SymTensor::term(quantstar::Monomial::from_word(3, &word), HbarScalar::from_int(1));
        let norms = l1_proj_norm(&p, Complex64::new(1.0, 0.0));
        assert_eq!(norms[word.len()], 1.0);
        assert_eq!(norms.iter().sum::<f64>(), 1.0);
    }
}
