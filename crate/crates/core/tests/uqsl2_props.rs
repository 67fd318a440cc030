use proptest::prelude::*;
use qtangle::qseries::rat;
use qtangle::uqsl2::{
    act, act_split, basis, divided_power_act, divided_power_naive, weight, weight_projector,
    weights,
};
use qtangle::{quantum_integer, Gen, LaurentSeries, ModuleElement};

fn signed_integer(m: i64) -> LaurentSeries {
    let a = quantum_integer(m.unsigned_abs() as u32);
    if m < 0 {
        -a
    } else {
        a
    }
}

fn element() -> impl Strategy<Value = ModuleElement> {
    prop::collection::vec(1u32..=3, 1..=3)
        .prop_flat_map(|colours| {
            let n = basis(&colours).len();
            (
                Just(colours),
                prop::collection::vec((-2i64..=2, -2i64..=2), n),
            )
        })
        .prop_map(|(colours, coeffs)| {
            let mut x = ModuleElement::zero(&colours);
            for (idx, (c, d)) in basis(&colours).into_iter().zip(coeffs) {
                if c != 0 {
                    x = x.add(
                        &ModuleElement::basis_vector(&colours, &idx)
                            .unwrap()
                            .scale(&LaurentSeries::monomial(d, rat(c))),
                    );
                }
            }
            x
        })
}

proptest! {
    #[test]
    fn k_conjugates_e_and_f(x in element()) {
        let kek = act(Gen::K, &act(Gen::E, &act(Gen::Kinv, &x)));
        prop_assert_eq!(kek, act(Gen::E, &x).scale(&LaurentSeries::q_pow(2)));
        let kfk = act(Gen::K, &act(Gen::F, &act(Gen::Kinv, &x)));
        prop_assert_eq!(kfk, act(Gen::F, &x).scale(&LaurentSeries::q_pow(-2)));
        prop_assert_eq!(act(Gen::K, &act(Gen::Kinv, &x)), x);
    }

    #[test]
    fn commutator_is_the_quantum_weight(x in element()) {
        let ef = act(Gen::E, &act(Gen::F, &x));
        let fe = act(Gen::F, &act(Gen::E, &x));
        let mut rhs = ModuleElement::zero(x.colours());
        for mu in weights(x.colours()) {
            rhs = rhs.add(&weight_projector(mu, &x).scale(&signed_integer(mu)));
        }
        prop_assert_eq!(ef.sub(&fe), rhs);
    }

    #[test]
    fn comultiplication_is_coassociative(x in element(), gen in prop::sample::select(vec![Gen::E, Gen::F, Gen::K, Gen::Kinv])) {
        let full = act(gen, &x);
        for split in 0..=x.colours().len() {
            prop_assert_eq!(&act_split(gen, &x, split), &full, "split at {}", split);
        }
    }

    #[test]
    fn divided_powers_agree_with_repeated_action(x in element(), k in 0u32..=4, gen in prop::sample::select(vec![Gen::E, Gen::F])) {
        let closed = divided_power_act(gen, k, &x);
        prop_assert_eq!(closed, divided_power_naive(gen, k, &x, 16).unwrap());
    }

    #[test]
    fn generators_move_weight_by_two(x in element()) {
        for (gen, step) in [(Gen::E, 2), (Gen::F, -2)] {
            let y = act(gen, &x);
            for idx in y.coords().keys() {
                let from: Vec<i64> = x.coords().keys().map(|a| weight(x.colours(), a)).collect();
                prop_assert!(from.contains(&(weight(y.colours(), idx) - step)));
            }
        }
    }
}

#[test]
fn highest_weight_vector_of_the_irreducible() {
    for n in 1..=5u32 {
        let top = ModuleElement::basis_vector(&[n], &[n]).unwrap();
        assert!(act(Gen::E, &top).is_zero());
        let bottom = ModuleElement::basis_vector(&[n], &[0]).unwrap();
        assert!(act(Gen::F, &bottom).is_zero());
        // F^{(n)} v_n = v_0
        assert_eq!(divided_power_act(Gen::F, n, &top), bottom);
    }
}
