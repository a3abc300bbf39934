use num_traits::{One, Zero};
use orthoprob_core::cox::cox_rules_check;
use orthoprob_core::formats::{gen_boolean, gen_mo};
use orthoprob_core::states::{
    admits_state, inclusion_exclusion_defect, kolmogorov_from_weights, parse_state, random_state,
    state_polytope_vertices, superadditivity_defect, total_probability_defect, validate_state, write_state,
};
use orthoprob_core::Rational;
use proptest::prelude::*;

fn weights(raw: &[u32]) -> Vec<Rational> {
    let total: u64 = raw.iter().map(|&w| u64::from(w)).sum();
    raw.iter()
        .map(|&w| Rational::new(i64::from(w).into(), (total as i64).into()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn kolmogorov_states_are_classical(raw in prop::collection::vec(1u32..1000, 1..=5)) {
        let (l, s) = kolmogorov_from_weights(&weights(&raw)).unwrap();
        prop_assert!(validate_state(&l, &s).unwrap().holds);
        prop_assert!(cox_rules_check(&l, &s).holds);
        for a in l.elements() {
            for b in l.elements() {
                prop_assert!(inclusion_exclusion_defect(&l, &s, a, b).unwrap().defect.is_zero());
                prop_assert!(total_probability_defect(&l, &s, a, b).unwrap().defect.is_zero());
                let sup = superadditivity_defect(&l, &s, a, b).unwrap();
                // s(a ∨ b) - s(a) - s(b) = -s(a ∧ b) in a Boolean algebra
                prop_assert_eq!(sup.defect, -s.values[l.meet_unchecked(a, b)].clone());
            }
        }
    }

    #[test]
    fn random_states_are_states(n in 2usize..=4, seed in any::<u64>()) {
        let l = gen_mo(n).unwrap();
        let s = random_state(&l, seed).unwrap();
        prop_assert!(validate_state(&l, &s).unwrap().holds);
        prop_assert_eq!(&random_state(&l, seed).unwrap(), &s);
        let back = parse_state(&write_state(&l, &s)).unwrap().into_state(&l).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn mixtures_of_vertices_stay_in_the_polytope(n in 2usize..=4, i in 0usize..16, j in 0usize..16, t in 0u32..=100) {
        let l = gen_mo(n).unwrap();
        let vs = state_polytope_vertices(&l).unwrap().vertices.unwrap();
        let (a, b) = (&vs[i % vs.len()], &vs[j % vs.len()]);
        let m = a.mix(b, &Rational::new(i64::from(t).into(), 100.into()));
        prop_assert!(validate_state(&l, &m).unwrap().holds);
    }
}

#[test]
fn every_fixture_family_admits_states() {
    for n in 1..=4 {
        assert!(admits_state(&gen_boolean(n).unwrap()).admits());
        assert!(admits_state(&gen_mo(n as usize).unwrap()).admits());
    }
}

#[test]
fn mo2_inclusion_exclusion_fails_for_complementary_atoms() {
    let l = gen_mo(2).unwrap();
    let vs = state_polytope_vertices(&l).unwrap().vertices.unwrap();
    // two atoms from different blocks: a0 ∨ a1 = 1 and a0 ∧ a1 = 0
    let worst = vs
        .iter()
        .map(|s| inclusion_exclusion_defect(&l, s, 1, 3).unwrap().defect)
        .max()
        .unwrap();
    assert_eq!(worst, Rational::one());
}
