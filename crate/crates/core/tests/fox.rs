use std::collections::BTreeMap;

use jtl_core::fox::{fox_t, induced_automorphism, Expansion, FreeGroupAutomorphism, GroupWord};
use jtl_core::{Alphabet, Rational, Scalar, Tensor};
use proptest::prelude::*;

type Q = Rational;

/// Group-ring Fox derivative for `x - ε(x) = Σ_i (γ_i - 1) ∂x/∂γ_i`:
/// `∂(uv) = ∂(u) v + ∂(v)`, `∂γ_i/∂γ_i = 1`, `∂γ_i⁻¹/∂γ_i = -γ_i⁻¹`.
fn fox_oracle(w: &GroupWord, i: u8) -> BTreeMap<Vec<i32>, i64> {
    let letters = w.letters();
    let mut out: BTreeMap<Vec<i32>, i64> = BTreeMap::new();
    for (p, l) in letters.iter().enumerate() {
        if l.generator != i {
            continue;
        }
        let suffix = &letters[p + 1..];
        let signed = |ls: &[jtl_core::fox::GroupLetter]| -> Vec<i32> {
            ls.iter().map(|l| (l.generator as i32 + 1) * if l.inverse { -1 } else { 1 }).collect()
        };
        let (word, sign) = if l.inverse { (signed(&letters[p..]), -1) } else { (signed(suffix), 1) };
        *out.entry(word).or_insert(0) += sign;
    }
    out
}

fn signed_word(n: i32) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec((1..=n).prop_flat_map(|g| prop_oneof![Just(g), Just(-g)]), 0..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fox_transport_identity(w in signed_word(2), i in 0u8..2) {
        let h = Alphabet::standard(2);
        let theta = Expansion::<Q>::magnus(&h, 5);
        let w = GroupWord::from_signed(&w);
        let mut lhs = Tensor::zero(&h, 5);
        for (word, c) in fox_oracle(&w, i) {
            lhs = &lhs + &theta.evaluate(&GroupWord::from_signed(&word)).unwrap().scale(&Q::from_i64(c));
        }
        // ∂_i lowers degree by one, so only degrees below the truncation are determined.
        prop_assert_eq!(lhs.with_trunc(4), fox_t(i, &theta.evaluate(&w).unwrap()).with_trunc(4));
    }

    #[test]
    fn expansions_are_multiplicative(x in signed_word(3), y in signed_word(3)) {
        let h = Alphabet::standard(3);
        for theta in [Expansion::<Q>::magnus(&h, 4), Expansion::<Q>::exponential(&h, 4)] {
            let (x, y) = (GroupWord::from_signed(&x), GroupWord::from_signed(&y));
            let lhs = theta.evaluate(&x.mul(&y)).unwrap();
            prop_assert_eq!(lhs, &theta.evaluate(&x).unwrap() * &theta.evaluate(&y).unwrap());
        }
    }

    #[test]
    fn induced_automorphisms_compose(c in signed_word(2), d in signed_word(2)) {
        let h = Alphabet::standard(2);
        let theta = Expansion::<Q>::exponential(&h, 4);
        let f = FreeGroupAutomorphism::conjugation(2, &GroupWord::from_signed(&c));
        let g = FreeGroupAutomorphism::conjugation(2, &GroupWord::from_signed(&d));
        let lhs = induced_automorphism(&theta, &f.compose(&g)).unwrap();
        let rhs = induced_automorphism(&theta, &f).unwrap().compose(&induced_automorphism(&theta, &g).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn induced_automorphism_transports_words(w in signed_word(2), c in signed_word(2)) {
        // ψ(θ(w)) = θ(f(w)).
        let h = Alphabet::standard(2);
        let theta = Expansion::<Q>::exponential(&h, 4);
        let f = FreeGroupAutomorphism::conjugation(2, &GroupWord::from_signed(&c));
        let psi = induced_automorphism(&theta, &f).unwrap();
        let w = GroupWord::from_signed(&w);
        prop_assert_eq!(psi.apply(&theta.evaluate(&w).unwrap()).unwrap(), theta.evaluate(&f.apply(&w)).unwrap());
    }
}

#[test]
fn invalid_automorphism_is_rejected() {
    let g = GroupWord::generator;
    assert!(FreeGroupAutomorphism::new(vec![g(0), g(0)], vec![g(0), g(1)]).is_err());
}
