use orthoprob_core::formats::{gen_boolean, gen_mo, horizontal_sum, parse_any, serialize, GreechieDiagram};
use orthoprob_core::lattice::find_isomorphism;
use orthoprob_core::{Law, OrthoLattice};
use proptest::prelude::*;

fn brute_distributive(l: &OrthoLattice) -> bool {
    l.elements().all(|a| {
        l.elements().all(|b| {
            l.elements().all(|c| {
                l.meet_unchecked(a, l.join_unchecked(b, c))
                    == l.join_unchecked(l.meet_unchecked(a, b), l.meet_unchecked(a, c))
            })
        })
    })
}

fn brute_orthomodular(l: &OrthoLattice) -> bool {
    l.elements().all(|a| {
        l.elements()
            .filter(|&b| l.leq_unchecked(a, b))
            .all(|b| l.join_unchecked(a, l.meet_unchecked(l.ortho_unchecked(a), b)) == b)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn boolean_algebras_are_distributive(n in 1u32..=5) {
        let l = gen_boolean(n).unwrap();
        prop_assert_eq!(l.size(), 1 << n);
        prop_assert!(l.is_distributive().holds);
        prop_assert!(brute_distributive(&l));
        prop_assert_eq!(l.blocks().unwrap().len(), 1);
    }

    #[test]
    fn mo_classification_matches_brute_force(n in 1usize..=6) {
        let l = gen_mo(n).unwrap();
        prop_assert!(l.is_orthomodular().holds);
        prop_assert!(brute_orthomodular(&l));
        prop_assert!(l.is_modular().holds);
        let dist = l.is_distributive();
        prop_assert_eq!(dist.holds, n == 1);
        prop_assert_eq!(dist.holds, brute_distributive(&l));
        if let Some(w) = dist.witness {
            prop_assert_eq!(l.law_holds_at(Law::Distributive, &w), Some(false));
        }
        prop_assert_eq!(l.blocks().unwrap().len(), n);
    }

    #[test]
    fn serialization_round_trips(n in 1usize..=5, boolean in any::<bool>()) {
        let l = if boolean { gen_boolean(n as u32).unwrap() } else { gen_mo(n).unwrap() };
        let text = serialize(&l);
        let back = parse_any(&text).unwrap();
        prop_assert_eq!(back.to_structure(), l.to_structure());
        prop_assert_eq!(serialize(&back), text);
        prop_assert_eq!(back.fingerprint(), l.fingerprint());
    }

    #[test]
    fn horizontal_sums_of_boolean_squares_are_mo(n in 1usize..=5) {
        let parts: Vec<OrthoLattice> = (0..n).map(|_| gen_boolean(2).unwrap()).collect();
        let sum = horizontal_sum(&parts).unwrap();
        prop_assert!(find_isomorphism(&sum, &gen_mo(n).unwrap()).is_some());
    }

    #[test]
    fn de_morgan_holds_everywhere(n in 1usize..=4) {
        let l = gen_mo(n).unwrap();
        for a in l.elements() {
            for b in l.elements() {
                prop_assert_eq!(
                    l.ortho_unchecked(l.join_unchecked(a, b)),
                    l.meet_unchecked(l.ortho_unchecked(a), l.ortho_unchecked(b))
                );
            }
        }
    }
}

#[test]
fn greechie_chain_has_three_blocks() {
    let d = GreechieDiagram::new(&[vec!["a", "b", "c"], vec!["c", "d", "e"], vec!["e", "f", "g"]]).unwrap();
    let l = d.paste().unwrap();
    assert_eq!(l.atoms().len(), 7);
    assert_eq!(l.blocks().unwrap().len(), 3);
    assert!(l.is_orthomodular().holds);
    assert!(!l.is_distributive().holds);
}

#[test]
fn three_loop_of_small_blocks_is_rejected() {
    assert!(parse_any("gre 1\nblock a b\nblock b c\nblock c a\n").is_err());
}
