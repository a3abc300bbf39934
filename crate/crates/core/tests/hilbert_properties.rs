use orthoprob_core::formats::gen_boolean;
use orthoprob_core::hilbert::{
    born, born_state_on_lattice, max_abs, generate_projection_lattice, ket, parse_matrix, projector_from_basis,
    random_density, random_projection, random_unit_vector, subspace_join, subspace_meet, subspace_ortho,
    transition_probability, write_matrix, DensityMatrix, SubspaceBasis, Tolerances, DEFAULT_CLOSURE_CAP,
};
use orthoprob_core::lattice::find_isomorphism;
use orthoprob_core::states::validate_state_approx;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pure_born_is_transition_probability(d in 1usize..=4, s1 in any::<u64>(), s2 in any::<u64>()) {
        let psi = random_unit_vector(d, s1).unwrap();
        let phi = random_unit_vector(d, s2).unwrap();
        let rho = DensityMatrix::pure(&psi).unwrap();
        let p = projector_from_basis(&SubspaceBasis::span(d, std::slice::from_ref(&phi)).unwrap());
        let b = born(&rho, &p).unwrap();
        let t = transition_probability(&psi, &phi).unwrap();
        prop_assert!((b - t).abs() < 1e-12);
        prop_assert!((t - transition_probability(&phi, &psi).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn random_density_is_a_density(d in 1usize..=5, seed in any::<u64>()) {
        let rho = random_density(d, seed).unwrap();
        let tr: f64 = (0..d).map(|i| rho.matrix()[(i, i)].re).sum();
        prop_assert!((tr - 1.0).abs() < 1e-12);
        let eig = rho.matrix().clone().symmetric_eigenvalues();
        prop_assert!(eig.iter().all(|&v| v >= -1e-9));
        let again = random_density(d, seed).unwrap();
        prop_assert_eq!(again.matrix(), rho.matrix());
    }

    #[test]
    fn ortho_is_an_involution_and_de_morgan_holds(d in 2usize..=4, r1 in 0usize..=4, r2 in 0usize..=4, seed in any::<u64>()) {
        let (r1, r2) = (r1.min(d), r2.min(d));
        let a = SubspaceBasis::span(d, &random_basis(d, r1, seed)).unwrap();
        let b = SubspaceBasis::span(d, &random_basis(d, r2, seed.wrapping_add(1))).unwrap();
        let pa = projector_from_basis(&a);
        prop_assert!(projector_from_basis(&subspace_ortho(&subspace_ortho(&a))).distance(&pa) < 1e-9);
        let lhs = subspace_ortho(&subspace_join(&a, &b).unwrap());
        let rhs = subspace_meet(&subspace_ortho(&a), &subspace_ortho(&b)).unwrap();
        prop_assert!(projector_from_basis(&lhs).distance(&projector_from_basis(&rhs)) < 1e-8);
        let meet = subspace_meet(&a, &b).unwrap();
        let join = subspace_join(&a, &b).unwrap();
        prop_assert_eq!(meet.rank() + join.rank(), a.rank() + b.rank());
    }

    #[test]
    fn complement_rule_holds(d in 1usize..=4, rank in 0usize..=4, seed in any::<u64>()) {
        let rank = rank.min(d);
        let rho = random_density(d, seed).unwrap();
        let p = random_projection(d, rank, seed ^ 0x5555).unwrap();
        let v = born(&rho, &p).unwrap();
        prop_assert!((born(&rho, &p.complement()).unwrap() - (1.0 - v)).abs() < 1e-9);
    }
}

fn random_basis(d: usize, r: usize, seed: u64) -> Vec<orthoprob_core::hilbert::CVector> {
    (0..r).map(|i| random_unit_vector(d, seed.wrapping_mul(31).wrapping_add(i as u64)).unwrap()).collect()
}

#[test]
fn matrix_text_round_trips() {
    let rho = random_density(3, 9).unwrap();
    let text = write_matrix(rho.matrix());
    let back = parse_matrix(&text).unwrap();
    assert!(max_abs(&(back - rho.matrix())) < 1e-15);
}

#[test]
fn commuting_seeds_close_to_a_boolean_algebra() {
    let seeds: Vec<SubspaceBasis> = (0..2).map(|i| SubspaceBasis::span(3, &[ket(3, i)]).unwrap()).collect();
    let pl = generate_projection_lattice(&seeds, DEFAULT_CLOSURE_CAP, &Tolerances::default()).unwrap();
    assert!(find_isomorphism(&pl.lattice, &gen_boolean(3).unwrap()).is_some());
    assert!(pl.lattice.is_distributive().holds);
    let rho = DensityMatrix::maximally_mixed(3).unwrap();
    let bs = born_state_on_lattice(&rho, &pl).unwrap();
    for (x, p) in pl.projections.iter().enumerate() {
        assert!((bs.values[x] - p.rank() as f64 / 3.0).abs() < 1e-12);
    }
    assert!(validate_state_approx(&pl.lattice, &bs.values, 1e-9).unwrap().holds);
}

#[test]
fn non_commuting_qutrit_lines_are_not_distributive() {
    let seeds = [
        SubspaceBasis::span(3, &[ket(3, 0)]).unwrap(),
        SubspaceBasis::span(3, &[random_unit_vector(3, 4).unwrap()]).unwrap(),
    ];
    let pl = generate_projection_lattice(&seeds, DEFAULT_CLOSURE_CAP, &Tolerances::default()).unwrap();
    assert!(pl.lattice.is_orthomodular().holds);
    assert!(!pl.lattice.is_distributive().holds);
}
