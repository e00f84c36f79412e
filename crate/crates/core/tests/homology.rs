mod common;

use std::sync::Arc;

use magpath::chains::enumerate_mc;
use magpath::digraph::{builtins, homotopy_along_chain, one_step_homotopic, DigraphMap};
use magpath::homology::{induced_map, GroupShape, HomologyEngine, InducedMap, MapKind};
use magpath::linalg::IntMatrix;
use magpath::{Digraph, Int};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::Oracle;

fn edge() -> Arc<Digraph> {
    Arc::new(Digraph::from_edges(2, [(0, 1)]).unwrap())
}

#[test]
fn mh_zero_zero_counts_vertices() {
    for g in [builtins::cycle(5), builtins::figure1(), builtins::star(3)] {
        let n = g.vertex_count();
        let h = HomologyEngine::new(Arc::new(g));
        assert_eq!(h.magnitude_homology(0, 0).unwrap().shape(), GroupShape::free(n));
        assert!(h.dmh(0, 0).unwrap().is_zero());
    }
}

#[test]
fn edge_digraph_differentials() {
    let h = HomologyEngine::new(edge());
    assert_eq!(h.magnitude_homology(1, 1).unwrap().shape(), GroupShape::free(1));
    let d = h.dmh_differential(1, 1).unwrap();
    assert!(d.is_injective());
    assert!(!d.is_surjective());
    // The generator maps to (1) - (0).
    let mh0 = h.magnitude_homology(0, 0).unwrap();
    let lift = h.magnitude_homology(1, 1).unwrap().chain_lift(0);
    let sign = lift.iter().find(|x| !x.is_zero()).unwrap().clone();
    let image: Vec<Int> = d.matrix.column(0).iter().map(|x| x * &sign).collect();
    let expected = mh0.reduce_chain(&[Int::from(-1), Int::from(1)]).unwrap();
    assert_eq!(image, expected);
    assert!(h.dmh(1, 1).unwrap().is_zero());

    let aug = h.dmh_differential(0, 0).unwrap();
    assert_eq!(aug.target, GroupShape::free(1));
    assert!(aug.is_surjective());
}

#[test]
fn drop_one_squares_to_zero_on_c5() {
    let h = HomologyEngine::new(Arc::new(builtins::cycle(5)));
    for level in 1..=5 {
        for k in 1..=4 {
            let a = h.dmh_differential(level, k).unwrap();
            let b = h.dmh_differential(level - 1, k - 1).unwrap();
            assert!(a.then(&b).unwrap().is_zero(), "({level}, {k})");
        }
    }
}

#[test]
fn path_complex_of_complete_graph_is_everything() {
    let h = HomologyEngine::new(Arc::new(builtins::complete(4)));
    for k in 0..=3 {
        assert_eq!(h.path_complex_basis(k).cols(), h.mc(k, k).len());
    }
    let c5 = HomologyEngine::new(Arc::new(builtins::cycle(5)));
    assert_eq!(c5.mc(2, 2).len(), 20);
    let omega = c5.path_complex_basis(2);
    let mut o = Oracle::new(c5.graph());
    let allowed = o.mc(2, 2);
    let d = common::boundary_mod_p(&allowed, &o.mc(2, 1));
    assert_eq!(omega.cols(), allowed.len() - common::rank_mod_p(&d));
}

#[test]
fn homology_matches_oracle_on_random_digraphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let n = rng.gen_range(2..=5);
        let p = rng.gen_range(0.2..0.9);
        let g = common::random_digraph(&mut rng, n, p);
        let h = HomologyEngine::new(Arc::new(g));
        let mut o = Oracle::new(h.graph());
        for level in -1..=3 {
            for k in -1..=3 {
                let mh = h.magnitude_homology(level, k).unwrap();
                assert_eq!(mh.group.free_rank, common::mh_dim(&mut o, level, k), "MH^{level}_{k}");
                let d = h.dmh(level, k).unwrap();
                assert_eq!(d.group.free_rank, common::dmh_dim(&mut o, level, k), "dMH^{level}_{k}");
            }
        }
        for k in -1..=3 {
            let direct = h.reduced_path_homology(k).unwrap().shape();
            assert_eq!(direct.free_rank, common::path_dim(&mut o, k), "H~_{k}");
            assert_eq!(direct, h.dmh(k, k).unwrap().shape(), "pipelines at {k}");
        }
    }
}

#[test]
fn enumeration_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let n = rng.gen_range(1..=5);
        let g = common::random_digraph(&mut rng, n, 0.5);
        let mut o = Oracle::new(&g);
        for level in -1..=5 {
            for k in -1..=4 {
                let mut ours: Vec<Vec<usize>> = enumerate_mc(&g, level, k).tuples().iter().map(|t| t.to_vec()).collect();
                let mut theirs = o.mc(level, k);
                ours.sort();
                theirs.sort();
                assert_eq!(ours, theirs, "MC^{level}_{k}");
            }
        }
    }
}

#[test]
fn homotopy_predicates() {
    let k3 = Arc::new(builtins::complete(3));
    let id = DigraphMap::identity(k3.clone());
    let constant = DigraphMap::constant(k3.clone(), k3.clone(), 0).unwrap();
    assert!(one_step_homotopic(&id, &id).unwrap());
    assert!(one_step_homotopic(&id, &constant).unwrap());
    assert!(homotopy_along_chain(std::slice::from_ref(&id)).unwrap());
    assert!(homotopy_along_chain(&[id, constant]).unwrap());

    let c5 = Arc::new(builtins::cycle(5));
    let rot = DigraphMap::checked(c5.clone(), c5.clone(), vec![1, 2, 3, 4, 0]).unwrap();
    assert!(one_step_homotopic(&DigraphMap::identity(c5.clone()), &rot).unwrap());
    let rot2 = DigraphMap::checked(c5.clone(), c5.clone(), vec![2, 3, 4, 0, 1]).unwrap();
    assert!(!one_step_homotopic(&DigraphMap::identity(c5), &rot2).unwrap());

    let f1 = Arc::new(builtins::figure1());
    let retract = DigraphMap::checked(f1.clone(), f1.clone(), builtins::figure1_retraction()).unwrap();
    assert!(homotopy_along_chain(&[DigraphMap::identity(f1), retract]).unwrap());
}

fn assert_equal_on_dmh(f: &DigraphMap, g: &DigraphMap, lmax: i64) {
    for level in -1..=lmax {
        for k in -1..=level.min(3) {
            let a = induced_map(f, level, k, MapKind::DMH).unwrap();
            let b = induced_map(g, level, k, MapKind::DMH).unwrap();
            assert_eq!(a, b, "dMH^{level}_{k}");
        }
    }
}

#[test]
fn homotopic_maps_agree_on_dmh() {
    let k3 = Arc::new(builtins::complete(3));
    let id = DigraphMap::identity(k3.clone());
    let constant = DigraphMap::constant(k3.clone(), k3, 0).unwrap();
    assert_equal_on_dmh(&id, &constant, 4);

    let f1 = Arc::new(builtins::figure1());
    let id = DigraphMap::identity(f1.clone());
    let retract = DigraphMap::checked(f1.clone(), f1, builtins::figure1_retraction()).unwrap();
    assert_equal_on_dmh(&id, &retract, 4);
    for level in 0..=4 {
        for k in 0..=level.min(3) {
            let m = induced_map(&retract, level, k, MapKind::DMH).unwrap();
            assert_eq!(m, InducedMap::identity(m.source.clone()));
        }
    }
}

#[test]
fn maps_on_mh() {
    let c5 = Arc::new(builtins::cycle(5));
    let id = DigraphMap::identity(c5.clone());
    let rot = DigraphMap::checked(c5.clone(), c5.clone(), vec![1, 2, 3, 4, 0]).unwrap();
    let h = HomologyEngine::new(c5.clone());
    for (level, k) in [(0, 0), (1, 1), (2, 2), (3, 2), (4, 3)] {
        let m = induced_map(&id, level, k, MapKind::MH).unwrap();
        assert_eq!(m, InducedMap::identity(h.magnitude_homology(level, k).unwrap().shape()));
        assert!(induced_map(&rot, level, k, MapKind::MH).unwrap().is_isomorphism());
    }
    let constant = DigraphMap::constant(c5.clone(), c5, 0).unwrap();
    for (level, k) in [(1, 1), (2, 2), (3, 2)] {
        assert!(induced_map(&constant, level, k, MapKind::MH).unwrap().is_zero());
    }
}

#[test]
fn induced_map_shapes_with_torsion() {
    let shape = GroupShape { free_rank: 1, torsion: vec![Int::from(2)] };
    let m = InducedMap::new(shape.clone(), shape.clone(), IntMatrix::from_rows(&[[1, 0], [0, 3]]));
    assert_eq!(m, InducedMap::identity(shape.clone()));
    let doubled = InducedMap::new(shape.clone(), shape, IntMatrix::from_rows(&[[2, 0], [0, 0]]));
    assert!(!doubled.is_injective());
    assert!(!doubled.is_surjective());
}

#[test]
fn r_homology_needs_enough_levels() {
    let h = HomologyEngine::new(Arc::new(builtins::cycle(5)));
    for k in 0..=1 {
        assert!(h.r_homology(k, 2 * (k + 1)).unwrap().is_zero());
    }
    assert!(matches!(
        h.r_homology(2, 3),
        Err(magpath::Error::LevelCapTooSmall { required: 6, .. })
    ));
}

#[test]
fn reports_serialize() {
    let h = HomologyEngine::new(Arc::new(builtins::figure1()));
    let report = h.is_diagonal(4, 3).unwrap();
    let json = serde_json::to_string(&report).unwrap();
    let back: magpath::homology::DiagonalReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, report);
}
