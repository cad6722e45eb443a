use cfl_core::eos::EquationOfState;
use cfl_core::params::{ell_product, falling_product, product_sign, validate_ell};
use cfl_core::rational::{int, rat};
use cfl_core::{DynamicalExponent, EllParameter, Error, Rational, MAX_DOUBLED_ELL};
use proptest::prelude::*;

#[test]
fn admissibility_examples() {
    assert!(EllParameter::from_doubled(2).unwrap().is_admissible());
    assert!(EllParameter::from_doubled(5).unwrap().is_admissible());
    let three_halves = EllParameter::from_doubled(3).unwrap();
    assert!(!three_halves.is_admissible());
    assert_eq!(ell_product(three_halves), rat(9, 16));
    assert!(matches!(validate_ell(rat(2, 3)), Err(Error::NotHalfInteger(_))));
    assert!(matches!(EllParameter::admissible(rat(3, 2)), Err(Error::InadmissibleEll(_))));
}

#[test]
fn product_examples() {
    assert_eq!(ell_product(EllParameter::from_doubled(2).unwrap()), int(0));
    assert_eq!(ell_product(EllParameter::from_doubled(1).unwrap()), rat(-1, 4));
    assert_eq!(ell_product(EllParameter::from_doubled(5).unwrap()), rat(-225, 64));
}

#[test]
fn bounds_are_enforced() {
    assert!(matches!(validate_ell(int(0)), Err(Error::NonPositive(_))));
    assert!(matches!(validate_ell(rat(-1, 2)), Err(Error::NonPositive(_))));
    let over = rat(MAX_DOUBLED_ELL as i128 + 1, 2);
    assert!(matches!(validate_ell(over), Err(Error::EllTooLarge { .. })));
    assert!(DynamicalExponent::new(rat(1, 2)).is_err());
    assert!(DynamicalExponent::parse("0.4").is_err());
    assert_eq!(DynamicalExponent::parse("0.6").unwrap().value(), rat(3, 5));
}

fn product_by_hand(doubled: i128) -> Rational {
    (0..=doubled).fold(int(1), |acc, j| acc * (rat(doubled, 2) - int(j)))
}

proptest! {
    #[test]
    fn product_sign_over_sequences(k in 0i128..=20) {
        let float_product = |doubled: i128| (0..=doubled).map(|j| doubled as f64 / 2.0 - j as f64).product::<f64>();
        prop_assert!(float_product(1 + 4 * k) < 0.0);
        prop_assert!(float_product(3 + 4 * k) > 0.0);
        prop_assert_eq!(product_sign((1 + 4 * k) as u32), -1);
        prop_assert_eq!(product_sign((3 + 4 * k) as u32), 1);
    }

    #[test]
    fn library_product_matches_hand_product(doubled in 1u32..=MAX_DOUBLED_ELL) {
        let ell = EllParameter::from_doubled(doubled).unwrap();
        prop_assert_eq!(ell_product(ell), product_by_hand(doubled as i128));
        prop_assert_eq!(falling_product(ell.value(), doubled as usize), product_by_hand(doubled as i128));
        let sign = product_sign(doubled);
        let exact = ell_product(ell);
        prop_assert_eq!(sign, if exact > int(0) { 1 } else if exact < int(0) { -1 } else { 0 });
        prop_assert_eq!(ell.is_admissible(), sign <= 0);
    }

    #[test]
    fn printed_form_round_trips(doubled in 1u32..=20) {
        let ell = EllParameter::from_doubled(doubled).unwrap();
        let back: EllParameter = ell.to_string().parse().unwrap();
        prop_assert_eq!(back, ell);
        prop_assert_eq!(validate_ell(back.value()).unwrap(), ell);
    }

    #[test]
    fn pressure_is_strictly_monotone(doubled in 1u32..=20, d in 1usize..=3, a in 0.01f64..10.0) {
        let ell = EllParameter::from_doubled(doubled).unwrap();
        let eos = EquationOfState::galilei(a, ell, d).unwrap();
        let mut previous = eos.pressure(1e-6);
        for i in 1..200 {
            let rho = 1e-6 * 1.1f64.powi(i);
            let p = eos.pressure(rho);
            prop_assert!(p > previous, "p({rho}) = {p} not above {previous}");
            previous = p;
        }
    }

    #[test]
    fn lifshitz_pressure_is_strictly_monotone(num in 6i128..40, d in 1usize..=3) {
        let z = DynamicalExponent::new(rat(num, 10)).unwrap();
        let eos = EquationOfState::lifshitz(0.5, z, d).unwrap();
        let rhos: Vec<f64> = (0..100).map(|i| 1e-3 * 1.2f64.powi(i)).collect();
        prop_assert!(rhos.windows(2).all(|w| eos.pressure(w[1]) > eos.pressure(w[0])));
    }
}
