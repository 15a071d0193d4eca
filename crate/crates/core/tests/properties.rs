mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use strata_core::field::PrimeField;
use strata_core::geometry::{
    build_nerve, monomials_up_to_degree, vanishing_dimension, Cover, KernelMode, PointCloud,
};
use strata_core::homology::{chain_complex, LocalHomology};
use strata_core::{
    build_from_maximal_simplices, coarsest_stratification, is_constructible,
    minimal_homogeneous_stratification, ChainModel, DeltaMap, FieldSpec, FiniteSpace,
    LocalHomologySheaf,
};

fn complex() -> impl Strategy<Value = FiniteSpace> {
    prop::collection::vec(prop::collection::btree_set(0u32..6, 1..=4), 1..5).prop_map(|sets| {
        build_from_maximal_simplices(sets.into_iter().map(|s| s.into_iter().collect::<Vec<_>>()))
            .unwrap()
    })
}

fn with_mask() -> impl Strategy<Value = (FiniteSpace, u64)> {
    (complex(), any::<u64>())
}

/// δ for an arbitrary number of covering pairs, cycling the 64 random bits.
fn delta(x: &FiniteSpace, bits: u64) -> DeltaMap {
    let mut i = 0;
    DeltaMap::from_fn(x, |_, _| {
        let b = bits >> (i % 64) & 1 == 1;
        i += 1;
        b
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_squares_to_zero(x in complex()) {
        let f = PrimeField::new(3).unwrap();
        for a in 0..x.len() {
            let u = x.min_open_nbhd(a);
            for model in [ChainModel::Simplicial, ChainModel::OrderComplex] {
                let cc = chain_complex(&f, &x, &u, model).unwrap();
                prop_assert!(cc.boundary_squares_to_zero(&f));
            }
        }
    }

    #[test]
    fn local_homology_is_subdivision_invariant(x in complex()) {
        let f = PrimeField::new(2).unwrap();
        let simp = LocalHomology::new(f, &x, ChainModel::Simplicial).unwrap();
        let order = LocalHomology::new(f, &x, ChainModel::OrderComplex).unwrap();
        for a in 0..x.len() {
            let (mut s, mut o) = (simp.dims(a), order.dims(a));
            let n = s.len().max(o.len());
            s.resize(n, 0);
            o.resize(n, 0);
            prop_assert_eq!(s, o, "at {}", x.name(a));
        }
    }

    #[test]
    fn restriction_is_functorial(x in complex()) {
        let f = PrimeField::new(2).unwrap();
        let lh = LocalHomology::new(f, &x, ChainModel::Simplicial).unwrap();
        for a in 0..x.len() {
            for &b in x.covers_of(a) {
                for &c in x.covers_of(b) {
                    let ab = lh.induced_restriction(&x, a, b).unwrap();
                    let bc = lh.induced_restriction(&x, b, c).unwrap();
                    let ac = lh.induced_restriction(&x, a, c).unwrap();
                    let composed = bc.compose(&f, &ab);
                    for p in 0..ac.num_degrees() {
                        prop_assert_eq!(composed.matrix(p), ac.matrix(p));
                    }
                }
            }
        }
    }

    #[test]
    fn covering_pairs_reconstruct_face_order(x in complex()) {
        let y = FiniteSpace::from_covering_pairs(x.len(), &x.covering_pairs()).unwrap();
        for a in 0..x.len() {
            for b in 0..x.len() {
                let faces = x.label(a).unwrap().is_face_of(x.label(b).unwrap());
                prop_assert_eq!(x.leq(a, b), faces);
                prop_assert_eq!(y.leq(a, b), faces);
            }
        }
    }

    #[test]
    fn closure_and_star(x in complex(), pick in any::<u64>()) {
        let s = x.subspace((0..x.len()).filter(|&a| pick >> (a % 64) & 1 == 1));
        let cl = x.closure(&s);
        let st = x.star(&s);
        prop_assert!(x.is_closed(&cl));
        prop_assert!(x.is_open(&st));
        for a in 0..x.len() {
            let below = s.iter().any(|b| x.leq(a, b));
            let above = s.iter().any(|b| x.leq(b, a));
            prop_assert_eq!(cl.contains(a), below);
            prop_assert_eq!(st.contains(a), above);
        }
        // closed and open sets are complements of each other
        prop_assert!(x.is_open(&x.full().difference(&cl)));
    }

    #[test]
    fn coarsest_output_is_constructible((x, bits) in with_mask()) {
        let dm = delta(&x, bits);
        let s = coarsest_stratification(&x, &dm).unwrap();
        prop_assert!(is_constructible(&x, &dm, &s).unwrap());
        let top = x.space_dimension().unwrap();
        for i in 0..=s.filtration_dim() {
            let stratum = s.stratum(i);
            prop_assert!(stratum.is_empty() || x.dimension(&stratum).unwrap() <= top);
            prop_assert!(x.is_closed(s.level(i)));
        }
    }

    #[test]
    fn homogeneous_output_is_homogeneous((x, bits) in with_mask()) {
        let dm = delta(&x, bits);
        let s = minimal_homogeneous_stratification(&x, &dm).unwrap();
        prop_assert!(is_constructible(&x, &dm, &s).unwrap());
        prop_assert!(s.is_homogeneous(&x));
        let leq = common::order(&x);
        let (labels, _) = common::strat_labels(&x, &s);
        prop_assert!(common::is_homogeneous_labeling(&leq, &labels, s.filtration_dim() as u8));
    }

    #[test]
    fn local_homology_output_is_constructible(x in complex()) {
        let lh = LocalHomologySheaf::new(&x, FieldSpec::Prime(2)).unwrap();
        let dm = DeltaMap::from_oracle(&x, &lh);
        let s = coarsest_stratification(&x, &dm).unwrap();
        prop_assert!(is_constructible(&x, &dm, &s).unwrap());
    }

    #[test]
    fn nerve_is_face_closed(
        sets in prop::collection::vec(prop::collection::btree_set(0usize..12, 1..6), 1..6),
        max_dim in 0usize..4,
    ) {
        let cover = Cover::new(
            sets.iter().enumerate().map(|(i, s)| (format!("U{i}"), s.iter().copied().collect())).collect(),
        );
        let nerve = build_nerve(&cover, max_dim).unwrap();
        let x = &nerve.space;
        for a in 0..x.len() {
            let simplex = x.label(a).unwrap();
            prop_assert!(simplex.dim() <= max_dim);
            for face in simplex.faces() {
                prop_assert!(x.index_of(&face).is_some());
            }
            let common: BTreeSet<usize> = simplex
                .vertices()
                .iter()
                .map(|&v| sets[v as usize].clone())
                .reduce(|p, q| p.intersection(&q).copied().collect())
                .unwrap();
            prop_assert!(!common.is_empty());
            prop_assert_eq!(nerve.point_sets[a].iter().copied().collect::<BTreeSet<_>>(), common);
        }
    }

    #[test]
    fn vanishing_dimension_shrinks_with_more_points(
        pts in prop::collection::vec((-3i32..=3, -3i32..=3), 1..10),
        split in 0usize..10,
    ) {
        let cloud = PointCloud::new(pts.iter().map(|&(a, b)| vec![a as f64, b as f64]).collect()).unwrap();
        let m = monomials_up_to_degree(2, 2).unwrap();
        let all: Vec<usize> = (0..pts.len()).collect();
        let some = &all[..split.min(all.len())];
        let big = vanishing_dimension(&cloud, &all, &m, KernelMode::Exact).unwrap().dim;
        let small = vanishing_dimension(&cloud, some, &m, KernelMode::Exact).unwrap().dim;
        let numeric = vanishing_dimension(&cloud, &all, &m, KernelMode::default()).unwrap().dim;
        prop_assert!(big <= small);
        prop_assert_eq!(big, numeric);
    }
}

#[test]
fn realizable_decompositions_match_monotone_labelings() {
    for x in common::small_complexes(6, 12) {
        let leq = common::order(&x);
        let from_labels: BTreeSet<Vec<u8>> = common::monotone_labelings(&leq, x.len() as u8)
            .iter()
            .map(|l| common::pieces_of_labeling(&leq, l))
            .collect();
        let direct: BTreeSet<Vec<u8>> = common::realizable_decompositions(&x)
            .into_iter()
            .map(|c| c.blocks)
            .collect();
        assert_eq!(from_labels, direct);
    }
}

#[test]
fn enumeration_sees_every_small_complex_once() {
    let all = common::small_complexes(8, 10);
    // vertices only, up to 8 of them
    assert_eq!(all.iter().filter(|x| x.covering_pairs().is_empty()).count(), 8);
    let triangles = all
        .iter()
        .filter(|x| x.space_dimension().unwrap() == 2)
        .count();
    assert!(triangles >= 1);
}
