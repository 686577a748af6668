//! Catalog-wide sweep of the boundary decomposition: the P-polynomial
//! identities of {u_X = 0} ≅ U_{S|X} × U_{S/X} and the Ω-restriction
//! identity hold for every maximal nested set and every member flat, with
//! no modularity hypothesis.

use wonder_core::bar::{verify_boundary_omega, boundary_embeddings, letter_map_preserves_relations, letter_map_rank, j_left_inverts_i2};
use wonder_core::charts::{boundary_restriction, make_chart};
use wonder_core::holonomy::HolonomySystem;
use wonder_core::lattice::{minimal_building_with_top, IntersectionLattice};
use wonder_core::nested::{first_adapted_basis, maximal_nested_sets};
use wonder_core::{builtin, Flat};

#[test]
fn boundary_identities_across_the_catalog() {
    let entries: Vec<(&str, Vec<u32>)> = vec![
        ("ex_irred", vec![]),
        ("ex_ss_not_enough", vec![]),
        ("ex_pred3", vec![]),
        ("braid", vec![2]),
        ("braid", vec![3]),
        ("monomial", vec![1, 1]),
        ("monomial", vec![1, 2]),
        ("monomial", vec![1, 3]),
        ("monomial", vec![2, 1]),
    ];
    let mut pairs = 0;
    for (name, params) in entries {
        let arr = builtin(name, &params).unwrap();
        let lattice = IntersectionLattice::build(&arr);
        let g = minimal_building_with_top(&lattice);
        let system = HolonomySystem::build(&lattice, 1);
        for s in maximal_nested_sets(&lattice, &g) {
            let beta = first_adapted_basis(&arr, &s).unwrap();
            let chart = make_chart(&arr, &s, &beta).unwrap();
            for x in s.flats() {
                // boundary_restriction verifies the P identities internally
                // and errors on any mismatch.
                let boundary = boundary_restriction(&lattice, &g, &chart, x).unwrap();
                assert!(
                    verify_boundary_omega(&lattice, &system, &chart, x, &boundary).unwrap(),
                    "{name:?}{params:?}: Ω boundary identity at {:?}",
                    x
                );
                pairs += 1;
            }
        }
    }
    println!("boundary identities verified on {pairs} (arrangement, S, X) triples");
    assert!(pairs > 50);
}

#[test]
fn embeddings_are_injective_through_weight_three() {
    // ex_irred at X = ⟨x⟩: sub-systems stay small enough for a full rank
    // check at weight 3.
    let arr = builtin("ex_irred", &[]).unwrap();
    let lattice = IntersectionLattice::build(&arr);
    let g = minimal_building_with_top(&lattice);
    let system = HolonomySystem::build(&lattice, 3);
    let s = maximal_nested_sets(&lattice, &g)
        .into_iter()
        .find(|s| s.contains(&arr.hyperplane_flat(0)))
        .unwrap();
    let beta = first_adapted_basis(&arr, &s).unwrap();
    let chart = make_chart(&arr, &s, &beta).unwrap();
    let x = arr.hyperplane_flat(0);
    let q = arr.quotient(&x).unwrap();
    let r = arr.restriction(&x).unwrap();
    let emb = boundary_embeddings(&chart, &x, &q, &r).unwrap();
    let res_lattice = IntersectionLattice::build(&q.arrangement);
    let res_sys = HolonomySystem::build(&res_lattice, 3);
    let quo_lattice = IntersectionLattice::build(&r.arrangement);
    let quo_sys = HolonomySystem::build(&quo_lattice, 3);
    assert!(letter_map_preserves_relations(&system, &res_lattice, &emb.i1));
    assert!(letter_map_preserves_relations(&system, &quo_lattice, &emb.i2));
    for n in 1..=3 {
        assert_eq!(letter_map_rank(&system, &res_sys, &emb.i1, n), res_sys.dim(n), "i1 at {n}");
        assert_eq!(letter_map_rank(&system, &quo_sys, &emb.i2, n), quo_sys.dim(n), "i2 at {n}");
    }
    assert!(j_left_inverts_i2(&quo_sys, &emb));
    let _ = Flat::full(3);
}

#[test]
fn modular_complement_isomorphisms_across_catalog() {
    // For every member of G on the enough-G-modular catalog entries, the
    // complement M gives a verified poset isomorphism L(A/X) ≅ L(A|_M)
    // carrying G/X onto G|_M.
    use wonder_core::modularity::{has_enough_g_modular, modular_complement, restriction_quotient_iso};
    let entries: Vec<(&str, Vec<u32>)> = vec![
        ("monomial", vec![1, 2]),
        ("monomial", vec![2, 1]),
        ("braid", vec![3]),
    ];
    let mut checked = 0;
    for (name, params) in entries {
        let arr = builtin(name, &params).unwrap();
        let lattice = IntersectionLattice::build(&arr);
        let g = minimal_building_with_top(&lattice);
        assert!(has_enough_g_modular(&lattice, &g).unwrap());
        for x in g.flats() {
            let m = modular_complement(&lattice, &g, x).unwrap();
            let iso = restriction_quotient_iso(&lattice, &g, x, &m).unwrap();
            assert!(!iso.flat_pairs.is_empty());
            checked += 1;
        }
    }
    println!("verified {checked} modular-complement isomorphisms");
    assert!(checked > 10);
}

#[test]
fn truncation_limits_are_enforced() {
    use wonder_core::field::Complex;
    use wonder_core::numeric::{eval_iterated_integrals, OneDimNumeric};
    let arr = OneDimNumeric::new(vec![Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)]).unwrap();
    let path = [Complex::new(0.3, 0.0), Complex::new(0.7, 0.0)];
    assert!(matches!(
        eval_iterated_integrals(&arr, 9, &path),
        Err(wonder_core::error::Error::TruncationTooLarge(_, _))
    ));
}
