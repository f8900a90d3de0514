use jtl_core::automorphism::{gl_act, FilteredAutomorphism};
use jtl_core::derivation::Derivation;
use jtl_core::random;
use jtl_core::{Alphabet, Rational, Scalar, Tensor};
use proptest::prelude::*;

type Q = Rational;

fn seeds() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn derivation_bracket_is_a_lie_bracket(seed in seeds(), p in 0usize..3, q in 0usize..3, r in 0usize..3) {
        let mut rng = random::trial_rng(seed, 0);
        let h = Alphabet::standard(2);
        let trunc = p + q + r + 1;
        let d: Derivation<Q> = random::homogeneous_derivation(&mut rng, &h, trunc, p);
        let e: Derivation<Q> = random::homogeneous_derivation(&mut rng, &h, trunc, q);
        let f: Derivation<Q> = random::homogeneous_derivation(&mut rng, &h, trunc, r);
        prop_assert_eq!(d.bracket(&e).unwrap(), e.bracket(&d).unwrap().scale(&Q::from_i64(-1)));
        let j = d.bracket(&e.bracket(&f).unwrap()).unwrap()
            .add(&e.bracket(&f.bracket(&d).unwrap()).unwrap()).unwrap()
            .add(&f.bracket(&d.bracket(&e).unwrap()).unwrap()).unwrap();
        prop_assert!(j.is_zero());
        prop_assert!(d.bracket(&e).unwrap().is_homogeneous(p + q));
    }

    #[test]
    fn apply_satisfies_leibniz(seed in seeds()) {
        let mut rng = random::trial_rng(seed, 1);
        let h = Alphabet::standard(3);
        let d: Derivation<Q> = random::positive_derivation(&mut rng, &h, 5, 1);
        let x = random::lie_element::<Q>(&mut rng, &h, 5, 2, 2);
        let y = random::lie_element::<Q>(&mut rng, &h, 5, 1, 2);
        let lhs = d.apply(&(&x * &y)).unwrap();
        let rhs = &(&d.apply(&x).unwrap() * &y) + &(&x * &d.apply(&y).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn vectorize_roundtrip(seed in seeds(), k in 1usize..5) {
        let mut rng = random::trial_rng(seed, 2);
        let h = Alphabet::standard(2);
        let d: Derivation<Q> = random::homogeneous_derivation(&mut rng, &h, k + 1, k);
        prop_assert_eq!(Derivation::from_vector(&h, k + 1, k, &d.vectorize(k)), d);
    }

    #[test]
    fn exp_log_and_inverse(seed in seeds()) {
        let mut rng = random::trial_rng(seed, 3);
        let h = Alphabet::standard(2);
        let d: Derivation<Q> = random::positive_derivation(&mut rng, &h, 5, 1);
        let psi = FilteredAutomorphism::exp_der(&d).unwrap();
        prop_assert_eq!(psi.log_aut().unwrap(), d);
        let phi: FilteredAutomorphism<Q> = random::aut(&mut rng, &h, 5);
        let id = FilteredAutomorphism::identity(&h, 5);
        prop_assert_eq!(phi.compose(&phi.invert().unwrap()).unwrap(), id.clone());
        prop_assert_eq!(phi.invert().unwrap().compose(&phi).unwrap(), id);
    }

    #[test]
    fn automorphisms_are_multiplicative(seed in seeds()) {
        let mut rng = random::trial_rng(seed, 4);
        let h = Alphabet::standard(2);
        let psi: FilteredAutomorphism<Q> = random::aut(&mut rng, &h, 4);
        let x = random::lie_element::<Q>(&mut rng, &h, 4, 1, 2);
        let y = random::lie_element::<Q>(&mut rng, &h, 4, 2, 2);
        prop_assert_eq!(psi.apply(&(&x * &y)).unwrap(), &psi.apply(&x).unwrap() * &psi.apply(&y).unwrap());
        prop_assert!(psi.apply(&x).unwrap().is_primitive());
    }

    #[test]
    fn conjugation_matches_exponentials(seed in seeds()) {
        // ψ exp(δ) ψ⁻¹ = exp(ψ δ ψ⁻¹).
        let mut rng = random::trial_rng(seed, 5);
        let h = Alphabet::standard(2);
        let psi: FilteredAutomorphism<Q> = random::aut(&mut rng, &h, 4);
        let d: Derivation<Q> = random::positive_derivation(&mut rng, &h, 4, 1);
        let lhs = psi.compose(&FilteredAutomorphism::exp_der(&d).unwrap()).unwrap().compose(&psi.invert().unwrap()).unwrap();
        let rhs = FilteredAutomorphism::exp_der(&psi.conjugate_derivation(&d).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gl_action_preserves_trace_degree(seed in seeds()) {
        let mut rng = random::trial_rng(seed, 6);
        let h = Alphabet::standard(2);
        let d: Derivation<Q> = random::homogeneous_derivation(&mut rng, &h, 4, 2);
        let a = random::unimodular::<Q>(&mut rng, 2);
        let moved = gl_act(&a, &d).unwrap();
        prop_assert!(moved.is_homogeneous(2));
        let back = gl_act(&a.inverse().unwrap(), &moved).unwrap();
        prop_assert_eq!(back, d);
    }
}

#[test]
fn degree_zero_trace_is_matrix_trace() {
    let h = Alphabet::standard(3);
    let a = jtl_core::linalg::Matrix::<Q>::from_i64_rows(&[&[1, 2, 0], &[0, 5, 1], &[4, 0, -2]]);
    let d = Derivation::linear(&h, 3, &a).unwrap();
    let tr = d.trace();
    assert_eq!(tr.coeff(&jtl_core::Word::empty()), Q::from_i64(4));
    assert_eq!(tr.len(), 1);
    assert!(d.itr().is_err());
}

#[test]
fn tau_requires_filtration_degree() {
    let h = Alphabet::standard(2);
    let x = Tensor::generator(&h, 4, 0);
    let y = Tensor::generator(&h, 4, 1);
    let d = Derivation::inner(&jtl_core::free_lie::bracket(&x, &y).unwrap()).unwrap();
    let psi = FilteredAutomorphism::exp_der(&d).unwrap();
    assert_eq!(psi.filtration_degree().unwrap(), Some(2));
    assert!(psi.tau(3).is_err());
    assert_eq!(psi.tau(2).unwrap(), d.homogeneous_part(2));
}
