use num_traits::Zero;
use proptest::prelude::*;

use plusminus::bivariate::{bimu_oracle, bimu_value};
use plusminus::digits::{enumerate_r, r_count_for};
use plusminus::distribution::{mu_oracle, mu_value, value_exponent};
use plusminus::rational::p_power;
use plusminus::{BiResidue, BiSign, DistValue, Prime, Residue, Sign};

fn small_prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u64, 3, 5, 7]).prop_map(|p| Prime::new(p).unwrap())
}

fn sign() -> impl Strategy<Value = Sign> {
    prop::sample::select(Sign::ALL.to_vec())
}

/// A class mod p^n with p^n small enough for the oracle.
fn residue() -> impl Strategy<Value = Residue> {
    (small_prime(), 1u32..=4, any::<i64>()).prop_map(|(p, n, a)| {
        let n = n.min(if p.get() >= 5 { 3 } else { 4 });
        Residue::from_integer(a as i128, p, n).unwrap()
    })
}

proptest! {
    #[test]
    fn residue_round_trip(p in small_prime(), n in 1u32..=6, a in any::<i64>()) {
        let r = Residue::from_integer(a as i128, p, n).unwrap();
        let modulus = p.get().pow(n);
        prop_assert_eq!(r.value() as i128, (a as i128).rem_euclid(modulus as i128));
        prop_assert_eq!(Residue::from_integer(r.value() as i128, p, n).unwrap(), r.clone());
        prop_assert_eq!(Residue::from_digits(p, r.digits().to_vec()).unwrap(), r);
    }

    #[test]
    fn s_membership_is_reduced_r_membership(r in residue(), s in sign()) {
        let modulus = r.modulus();
        let in_r = enumerate_r(r.prime(), r_count_for(s, r.n()), s)
            .unwrap()
            .iter()
            .any(|b| b % modulus == r.value());
        prop_assert_eq!(r.in_s(s), in_r);
    }

    #[test]
    fn closed_form_equals_oracle(r in residue(), s in sign()) {
        prop_assert_eq!(mu_value(s, &r), mu_oracle(s, &r).unwrap());
    }

    #[test]
    fn support_and_value_shape(r in residue(), s in sign()) {
        let v = mu_value(s, &r);
        prop_assert_eq!(!v.is_zero(), r.in_s(s));
        if !v.is_zero() {
            prop_assert_eq!(v.to_rational(), p_power(r.prime().get(), -(value_exponent(s, r.n()) as i64)));
        }
        prop_assert_eq!(DistValue::from_rational(r.prime(), &v.to_rational()).unwrap(), v);
    }

    #[test]
    fn minus_values_times_p(r in residue()) {
        // p mu_- takes only the values 0 and p^-floor((n+1)/2).
        let p = r.prime().get();
        let scaled = mu_value(Sign::Minus, &r).to_rational() * p_power(p, 1);
        let allowed = p_power(p, -(r.n().div_ceil(2) as i64));
        prop_assert!(scaled.is_zero() || scaled == allowed);
    }

    #[test]
    fn additivity_under_refinement(r in residue(), s in sign()) {
        let parent = mu_value(s, &r).to_rational();
        let children: num_rational::BigRational =
            r.children().unwrap().iter().map(|c| mu_value(s, c).to_rational()).sum();
        prop_assert_eq!(parent, children);
    }

    #[test]
    fn two_variable_product(
        p in prop::sample::select(vec![2u64, 3]),
        n in 1u32..=3,
        m in 1u32..=3,
        a in any::<i32>(),
        b in any::<i32>(),
        s in prop::sample::select(BiSign::ALL.to_vec()),
    ) {
        let r = BiResidue::from_integers(a as i128, b as i128, Prime::new(p).unwrap(), n, m).unwrap();
        let v = bimu_value(s, &r);
        prop_assert_eq!(v, bimu_oracle(s, &r).unwrap());
        prop_assert_eq!(!v.is_zero(), r.first().in_s(s.first) && r.second().in_s(s.second));
    }
}
