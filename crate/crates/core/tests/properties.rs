use std::collections::BTreeSet;

use crconf::crspace::{build_cr, build_sylvester, induced_map, inducing_permutation, kappa_relabel, parameter_table_csv};
use crconf::incidence::{automorphism_group, find_isomorphism, is_automorphism, neighborhood, SearchBudget};
use crconf::realize::{build_frame, collineation_from_permutation, verify_realization, verify_realization_over, Verdict};
use crconf::setcomb::SubsetCode;
use crconf::{FieldSpec, Gf2, Gf3, Rational, Scalar};

fn block_label_sets(s: &crconf::IncidenceStructure) -> BTreeSet<BTreeSet<SubsetCode>> {
    s.blocks().iter().map(|b| b.iter().map(|&p| s.label(p).unwrap()).collect()).collect()
}

#[test]
fn complement_relabelling_gives_sylvester_system() {
    for (k, m) in [(2, 0), (2, 1), (2, 2), (3, 0)] {
        let n = 3 * k + m;
        let c = build_cr(n, k, 3).unwrap();
        let relabelled = kappa_relabel(&c).unwrap();
        let g = build_sylvester(n, k).unwrap();
        assert_eq!(block_label_sets(&relabelled), block_label_sets(&g.structure), "(k, m) = ({k}, {m})");
        if n <= 7 {
            let budget = SearchBudget::default().with_max_vertices(1000);
            assert!(find_isomorphism(&c.structure, &g.structure, &budget).unwrap().is_some());
        }
    }
}

#[test]
fn neighborhoods_of_larger_instances() {
    // Neighborhood of a point in ⊠(ks, k, s) is ⊠(k(s-1), k, s-1).
    let budget = SearchBudget::default().with_max_vertices(1000);
    for ((n, k, s), (n2, s2)) in [((9, 3, 3), (6, 2)), ((8, 2, 4), (6, 3))] {
        let c = build_cr(n, k, s).unwrap();
        let target = build_cr(n2, k, s2).unwrap();
        for a in [0, c.structure.num_points() - 1] {
            let nb = neighborhood(&c.structure, a).unwrap();
            assert!(find_isomorphism(&nb, &target.structure, &budget).unwrap().is_some(), "⊠({n},{k},{s}) at {a}");
        }
    }
}

#[test]
fn symmetric_group_acts_by_automorphisms() {
    let c = build_cr(7, 2, 3).unwrap();
    let transposition = [1, 0, 2, 3, 4, 5, 6];
    let cycle = [1, 2, 3, 4, 5, 6, 0];
    for sigma in [&transposition[..], &cycle[..]] {
        let perm = induced_map(sigma, &c).unwrap();
        assert!(is_automorphism(&c.structure, &perm).unwrap());
        assert_eq!(inducing_permutation(&perm, &c).unwrap(), sigma);
    }
}

#[test]
fn generators_of_small_group_are_induced() {
    let c = build_cr(6, 2, 3).unwrap();
    let g = automorphism_group(&c.structure, &SearchBudget::default()).unwrap();
    assert_eq!(g.order, 720u32.into());
    for gen in &g.generators {
        let sigma = inducing_permutation(gen, &c).expect("induced by a permutation of X");
        assert_eq!(&induced_map(&sigma, &c).unwrap(), gen);
    }
}

fn collineations_for_generators<S: Scalar>(n: u32) {
    let frame = build_frame::<S>(n).unwrap();
    let mut transposition: Vec<u32> = (0..n).collect();
    transposition.swap(0, 1);
    let cycle: Vec<u32> = (0..n).map(|i| (i + 1) % n).collect();
    for sigma in [transposition, cycle] {
        let m = collineation_from_permutation(&frame, &sigma).unwrap();
        assert_eq!(m.rank(), frame.ambient());
    }
}

#[test]
fn permutations_lift_to_collineations() {
    collineations_for_generators::<Rational>(6);
    collineations_for_generators::<Gf2>(7);
    collineations_for_generators::<Gf3>(5);
    let frame = build_frame::<Rational>(5).unwrap();
    assert!(collineation_from_permutation(&frame, &[0, 0, 1, 2, 3]).is_err());
}

#[test]
fn runtime_field_dispatch_matches_static() {
    let c = build_cr(7, 2, 3).unwrap();
    let dynamic = verify_realization_over(&c, "p:2".parse::<FieldSpec>().unwrap()).unwrap();
    let fixed = verify_realization::<Gf2>(&c).unwrap();
    assert_eq!(dynamic, fixed);
    assert_eq!(dynamic.verdict, Verdict::Embedding);
    let q = verify_realization_over(&c, "q".parse().unwrap()).unwrap();
    assert_eq!(q.verdict_line(), "NOT-AN-EMBEDDING (char 0 ∤ 2)");
}

#[test]
fn complementary_points_collapse_when_k_plus_m_is_half() {
    let c = build_cr(8, 2, 3).unwrap();
    let r = verify_realization::<Gf2>(&c).unwrap();
    assert!(r.block_dims.iter().all(|&d| d == 1));
    assert_eq!(r.point_collisions, 35);
    assert!(!r.incidence_violations.is_empty());
    for v in &r.incidence_violations {
        let block: Vec<SubsetCode> = c.structure.block(v.block).iter().map(|&p| c.label(p)).collect();
        let complement = c.ground().full().difference(v.point);
        assert!(block.contains(&complement));
    }
}

#[test]
fn parameter_table() {
    let csv = parameter_table_csv(&[(9, 3, 3), (8, 2, 4)]).unwrap();
    assert_eq!(csv, "n,k,s,m,nu,r,b\n9,3,3,0,84,10,280\n8,2,4,0,28,15,105\n");
}

#[test]
fn dependency_structure_symmetry() {
    use crconf::realize::{canonical_family, dependency_structure, enumerate_dependencies};
    let frame = build_frame::<Rational>(5).unwrap();
    let family = canonical_family(5).unwrap();
    let triples = enumerate_dependencies(&frame, &family, 3).unwrap();
    let s = dependency_structure(&family, &triples).unwrap();
    let g = automorphism_group(&s, &SearchBudget::default()).unwrap();
    // Only the permutations of X survive: 5! = 120.
    assert_eq!(g.order, 120u32.into());
}
