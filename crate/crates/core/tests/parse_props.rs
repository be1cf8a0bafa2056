mod common;

use common::strategies::sym_tensor;
use proptest::prelude::*;
use quantstar::parse::{format_abelian, format_sym_tensor, parse_abelian, parse_sym_tensor};
use quantstar::std_star::AbelianPhasePoly;
use quantstar::{catalog, Error, HbarScalar, Monomial};

#[test]
fn phase_space_examples() {
    let qp = parse_abelian(1, "q*p").unwrap();
    assert_eq!(qp, AbelianPhasePoly::term(Monomial(vec![1]), Monomial(vec![1]), HbarScalar::from_int(1)));
    let f = parse_abelian(2, "q1^2*p2 + 1/3*hbar").unwrap();
    assert_eq!(f.terms().len(), 2);
    assert!(matches!(parse_abelian(1, "q1"), Err(Error::Parse(_))));
}

#[test]
fn names_follow_the_algebra() {
    let so3 = catalog("so3").unwrap();
    let p = parse_sym_tensor(&so3, "x*y - z^2/4").unwrap();
    assert_eq!(format_sym_tensor(&so3, &p), "-1/4*z^2 + x*y");
    assert!(parse_sym_tensor(&so3, "h").is_err());
    let ab = catalog("abelian(2)").unwrap();
    assert_eq!(parse_sym_tensor(&ab, "e1*e2").unwrap().degree(), Some(2));
}

proptest! {
    #[test]
    fn sym_tensor_text_roundtrip(p in sym_tensor(3, 5, false)) {
        for name in ["heisenberg", "sl2", "so3"] {
            let spec = catalog(name).unwrap();
            let text = format_sym_tensor(&spec, &p);
            prop_assert_eq!(parse_sym_tensor(&spec, &text).unwrap(), p.clone(), "{}", text);
        }
    }

    #[test]
    fn abelian_text_roundtrip(seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut f = AbelianPhasePoly::zero(2);
        for _ in 0..4 {
            let q = Monomial(vec![rng.gen_range(0..3), rng.gen_range(0..3)]);
            let p = Monomial(vec![rng.gen_range(0..3), rng.gen_range(0..3)]);
            f.add_term(q, p, &common::rand_scalar(&mut rng, true));
        }
        prop_assert_eq!(parse_abelian(2, &format_abelian(&f)).unwrap(), f);
    }

    #[test]
    fn garbage_never_panics(s in "[a-z0-9+*/^() -]{0,20}") {
        let spec = catalog("heisenberg").unwrap();
        let _ = parse_sym_tensor(&spec, &s);
    }
}
