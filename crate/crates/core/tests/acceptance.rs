//! End-to-end acceptance checks. Each criterion runs on its own thread and
//! prints one `PASS`/`FAIL` line; the test fails if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use magpath::chains::{face_matrix, Chain, Tuple};
use magpath::digraph::{builtins, cartesian_product, interval, DigraphMap};
use magpath::homology::{induced_dmh_map, induced_mh_map, push_lifts, GroupShape, HomologyEngine, InducedMap};
use magpath::linalg::{smith_normal_form, IntMatrix};
use magpath::spectral::{build_filtered_complex, Page};
use magpath::{Digraph, Error, Int};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::Oracle;

fn engine(g: Digraph) -> HomologyEngine {
    HomologyEngine::new(Arc::new(g))
}

fn free(r: usize) -> GroupShape {
    GroupShape::free(r)
}

fn within(t: Instant, budget: Duration, what: &str) {
    let took = t.elapsed();
    assert!(took < budget, "{what} took {took:?}, budget {budget:?}");
}

fn mh_box_c5() {
    let t = Instant::now();
    let h = engine(builtins::cycle(5));
    let mut o = Oracle::new(h.graph());
    for level in -1..=3 {
        for k in -1..=3 {
            let g = h.magnitude_homology(level, k).unwrap();
            assert!(g.group.torsion.is_empty(), "torsion in MH^{level}_{k}");
            assert_eq!(g.group.free_rank, common::mh_dim(&mut o, level, k), "MH^{level}_{k}");
        }
    }
    assert_eq!(h.magnitude_homology(0, 0).unwrap().shape(), free(5));
    for k in 1..=3 {
        assert_eq!(h.magnitude_homology(k, k).unwrap().shape(), free(10), "MH^{k}_{k}");
    }
    within(t, Duration::from_secs(10), "MH box on C5");
}

fn path_homology_c5() {
    let t = Instant::now();
    let h = engine(builtins::cycle(5));
    let mut o = Oracle::new(h.graph());
    for k in -1..=3 {
        let direct = h.reduced_path_homology(k).unwrap().shape();
        let via_dmh = h.dmh(k, k).unwrap().shape();
        assert_eq!(direct, via_dmh, "pipelines disagree at k = {k}");
        assert_eq!(direct.free_rank, common::path_dim(&mut o, k), "oracle at k = {k}");
        let expected = if k == 1 { free(1) } else { GroupShape::zero() };
        assert_eq!(direct, expected, "H~_{k}");
    }
    within(t, Duration::from_secs(30), "path homology of C5");
}

fn nontrivial_dmh_c5() {
    let h = engine(builtins::cycle(5));
    let mut o = Oracle::new(h.graph());
    let a = h.dmh(3, 2).unwrap().shape();
    let b = h.dmh(4, 2).unwrap().shape();
    assert!(!a.is_zero() || !b.is_zero());
    assert_eq!(a.free_rank, common::dmh_dim(&mut o, 3, 2));
    assert_eq!(b.free_rank, common::dmh_dim(&mut o, 4, 2));
    // Regression snapshot.
    assert_eq!(a, free(1));
    assert_eq!(b, GroupShape::zero());
    assert_eq!(h.magnitude_homology(3, 2).unwrap().shape(), free(10));
}

fn diagonal_suite() {
    for (name, g) in [
        ("complete_3", builtins::complete(3)),
        ("complete_4", builtins::complete(4)),
        ("path_4", builtins::path(4)),
        ("star_3", builtins::star(3)),
    ] {
        let h = engine(g);
        let mut o = Oracle::new(h.graph());
        let report = h.is_diagonal(4, 4).unwrap();
        assert!(report.is_diagonal_within_bounds(), "{name}: {:?}", report.witnesses);
        // Exactness of MH^4_4 → ... → MH^0_0 → Z → 0 at every interior position.
        assert!(h.diagonal_exactness_defects(3).unwrap().is_empty(), "{name}");
        for j in -1..=3 {
            assert_eq!(common::dmh_dim(&mut o, j, j), 0, "{name}: oracle exactness at {j}");
        }
        for k in -1..=3 {
            assert!(h.reduced_path_homology(k).unwrap().is_zero(), "{name}: H~_{k}");
        }
    }
}

fn figure1_counterexample() {
    let h = engine(builtins::figure1());
    let mut o = Oracle::new(h.graph());
    for k in -1..=3 {
        assert!(h.reduced_path_homology(k).unwrap().is_zero(), "H~_{k}");
        assert_eq!(common::path_dim(&mut o, k), 0);
    }
    let report = h.is_diagonal(4, 3).unwrap();
    assert!(!report.is_diagonal_within_bounds());
    for (level, k, shape) in &report.witnesses {
        assert_eq!(shape.free_rank, common::mh_dim(&mut o, *level, *k));
    }
    assert_eq!(report.witnesses, vec![(3, 2, free(2)), (4, 3, free(10))]);
}

fn spectral_identification() {
    let t = Instant::now();
    for g in [builtins::complete(3), builtins::cycle(5)] {
        let g = Arc::new(g);
        let fc = build_filtered_complex(g.clone(), 3).unwrap();
        let h = HomologyEngine::new(g);
        for n in 0..=3 {
            for level in -1..=fc.level_cap() {
                let e0 = fc.page_cell(level, Page::Finite(0), n).unwrap();
                assert_eq!(e0.generator_count(), h.mc(level, n).len(), "E0 at ({level}, {n})");
                assert!(e0.torsion.is_empty());
                let e1 = fc.page_cell(level, Page::Finite(1), n).unwrap().shape();
                assert_eq!(e1, h.magnitude_homology(level, n).unwrap().shape(), "E1 at ({level}, {n})");
                let e2 = fc.page_cell(level, Page::Finite(2), n).unwrap().shape();
                assert_eq!(e2, h.dmh(level, n).unwrap().shape(), "E2 at ({level}, {n})");
                assert!(fc.page_cell(level, Page::Infinity, n).unwrap().is_zero(), "Einf at ({level}, {n})");
            }
        }
    }
    within(t, Duration::from_secs(120), "spectral identification");
}

const CASES: usize = 200;

fn random_tuple(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Tuple {
    let mut v: Vec<usize> = vec![rng.gen_range(0..n)];
    while v.len() < k + 1 {
        let x = rng.gen_range(0..n);
        if Some(&x) != v.last() {
            v.push(x);
        }
    }
    Tuple::new(v)
}

fn random_chain(rng: &mut ChaCha8Rng, n: usize, k: usize, terms: usize) -> Chain {
    let mut c = Chain::zero();
    for _ in 0..terms {
        c.add_term(random_tuple(rng, n, k), Int::from(rng.gen_range(-3i64..=3)));
    }
    c
}

fn random_graph(rng: &mut ChaCha8Rng) -> Digraph {
    let n = rng.gen_range(3..=5);
    let p = rng.gen_range(0.3..0.8);
    common::random_digraph(rng, n, p)
}

/// A strongly connected random digraph, so that every level is finite.
fn random_connected(rng: &mut ChaCha8Rng) -> Digraph {
    loop {
        let g = random_graph(rng);
        if g.diameter().is_finite() {
            return g;
        }
    }
}

/// A digraph map out of `g`: either into a random denser digraph, or the
/// inclusion of `g` into `g` plus extra edges.
fn random_map(rng: &mut ChaCha8Rng, g: &Arc<Digraph>) -> DigraphMap {
    let n = g.vertex_count();
    if rng.gen_bool(0.5) {
        let mut edges: Vec<(usize, usize)> = g.edges().collect();
        edges.extend((0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| u != v));
        let extra: Vec<(usize, usize)> = edges.into_iter().filter(|e| g.has_edge(e.0, e.1) || rng.gen_bool(0.3)).collect();
        let h = Arc::new(Digraph::from_edges(n, extra).unwrap());
        return DigraphMap::checked(g.clone(), h, (0..n).collect()).unwrap();
    }
    let m = rng.gen_range(2..=4);
    let h = Arc::new(common::random_digraph(rng, m, 0.75));
    for _ in 0..500 {
        let a: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m)).collect();
        if let Ok(f) = DigraphMap::checked(g.clone(), h.clone(), a) {
            return f;
        }
    }
    DigraphMap::constant(g.clone(), h, 0).unwrap()
}

fn property_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    // ∂∂ = 0 on the full complex.
    for _ in 0..CASES {
        let n = rng.gen_range(2..=6);
        let k = rng.gen_range(0..=5);
        let x = random_chain(&mut rng, n, k, 4);
        assert!(x.boundary().boundary().is_zero(), "full: {x:?}");
    }

    // Same level: (∂(∂x)^ℓ)^ℓ = 0 for x in MC^ℓ.
    let mut checked = 0;
    while checked < CASES {
        let g = random_graph(&mut rng);
        let k = rng.gen_range(1..=4);
        let x = random_chain(&mut rng, g.vertex_count(), k, 6);
        let Some(level) = x.terms().next().and_then(|(t, _)| magpath::chains::length_of(t, &g).finite()) else {
            continue;
        };
        let x = x.level_part(&g, level);
        let dd = x.boundary().level_part(&g, level).boundary().level_part(&g, level);
        assert!(dd.is_zero(), "same level: {x:?}");
        checked += 1;
    }

    // Homology level: ∂'∂' = 0.
    for _ in 0..CASES {
        let h = engine(random_graph(&mut rng));
        let k = rng.gen_range(1..=3);
        let level = k + rng.gen_range(0..=2);
        let first = h.dmh_differential(level, k).unwrap();
        let second = h.dmh_differential(level - 1, k - 1).unwrap();
        assert!(first.then(&second).unwrap().is_zero(), "∂'∂' at ({level}, {k})");
    }

    // Leibniz: ∂(x•y) = (∂x)•y + (-1)^{p+1} x•(∂y).
    for _ in 0..CASES {
        let n = rng.gen_range(2..=5);
        let (p, q) = (rng.gen_range(-1..=3i64), rng.gen_range(-1..=3i64));
        let x = if p < 0 { Chain::tuple(Tuple::empty()) } else { random_chain(&mut rng, n, p as usize, 3) };
        let y = if q < 0 { Chain::tuple(Tuple::empty()) } else { random_chain(&mut rng, n, q as usize, 3) };
        let lhs = x.join(&y).boundary();
        let sign = Int::from(if (p + 1) % 2 == 0 { 1 } else { -1 });
        let rhs = &x.boundary().join(&y) + &x.join(&y.boundary()).scale(&sign);
        assert_eq!(lhs, rhs, "Leibniz: {x:?} • {y:?}");
    }

    // ∂∧x = -∧∂x + x' - x.
    for _ in 0..CASES {
        let n = rng.gen_range(2..=5);
        let k = rng.gen_range(0..=4);
        let x = random_chain(&mut rng, n, k, 3);
        let lhs = x.prism().boundary();
        let rhs = &(&(-&x.boundary().prism()) + &x.top()) - &x.bottom();
        assert_eq!(lhs, rhs, "prism boundary: {x:?}");
    }

    // ∧(x•y) = (∧x)•y' + (-1)^{p+1} x•(∧y).
    for _ in 0..CASES {
        let n = rng.gen_range(2..=5);
        let p = rng.gen_range(0..=3);
        let x = random_chain(&mut rng, n, p, 2);
        let q = rng.gen_range(0..=3);
        let y = random_chain(&mut rng, n, q, 2);
        let lhs = x.join(&y).prism();
        let sign = Int::from(if (p + 1) % 2 == 0 { 1 } else { -1 });
        let rhs = &x.prism().join(&y.top()) + &x.bottom().join(&y.prism()).scale(&sign);
        assert_eq!(lhs, rhs, "prism of a join: {x:?} • {y:?}");
    }

    // (∧x)^{ℓ+1} = ∧(x^ℓ).
    for _ in 0..CASES {
        let g = random_graph(&mut rng);
        let gi = cartesian_product(&g, &interval());
        let k = rng.gen_range(0..=3);
        let x = random_chain(&mut rng, g.vertex_count(), k, 5);
        let level = rng.gen_range(0..=6);
        assert_eq!(
            x.prism().level_part(&gi, level + 1),
            x.level_part(&g, level).prism(),
            "prism and levels: {x:?} at {level}"
        );
    }

    // Chain-level square: (f_# x)^ℓ commutes with ∂^ℓ.
    for _ in 0..CASES {
        let g = Arc::new(random_graph(&mut rng));
        let f = random_map(&mut rng, &g);
        let h = f.target().clone();
        let k = rng.gen_range(1..=4);
        let x = random_chain(&mut rng, g.vertex_count(), k, 6);
        let level = rng.gen_range(k as i64..=k as i64 + 3);
        let x = x.level_part(&g, level);
        let left = x.pushforward(&f).level_part(&h, level).boundary().level_part(&h, level);
        let right = x.boundary().level_part(&g, level).pushforward(&f).level_part(&h, level);
        assert_eq!(left, right, "f_# and ∂ at level {level}: {x:?}");
    }

    // Homology-level squares, and independence of the chosen lifts.
    let mut checked = 0;
    while checked < CASES {
        let g = Arc::new(random_connected(&mut rng));
        let f = random_map(&mut rng, &g);
        let (src, tgt) = (HomologyEngine::new(g.clone()), HomologyEngine::new(f.target().clone()));
        let k = rng.gen_range(0..=2);
        let level = k + rng.gen_range(0..=2);

        let on_mh = induced_mh_map(&f, &src, &tgt, level, k).unwrap();
        let below = induced_mh_map(&f, &src, &tgt, level - 1, k - 1).unwrap();
        let left = on_mh.then(&tgt.dmh_differential(level, k).unwrap()).unwrap();
        let right = src.dmh_differential(level, k).unwrap().then(&below).unwrap();
        assert_eq!(left, right, "MH square at ({level}, {k})");
        let on_dmh = induced_dmh_map(&f, &src, &tgt, level, k).unwrap();

        let a = src.magnitude_homology(level, k).unwrap();
        let b = tgt.magnitude_homology(level, k).unwrap();
        if a.is_zero() {
            continue;
        }
        let bounds = face_matrix(&src.mc(level, k + 1), &a.basis);
        let perturbed = perturb(&mut rng, &a.group.lifts, &bounds);
        let push = magpath::chains::pushforward_matrix(&f, &a.basis, &b.basis);
        assert_eq!(push_lifts(&push, &perturbed, &a, &b).unwrap(), on_mh, "MH lifts at ({level}, {k})");

        let low = src.magnitude_homology(level - 1, k - 1).unwrap();
        let drop = face_matrix(&a.basis, &low.basis);
        let diff = push_lifts(&drop, &perturbed, &a, &low).unwrap();
        assert_eq!(diff, *src.dmh_differential(level, k).unwrap(), "∂' lifts at ({level}, {k})");

        let d = src.dmh(level, k).unwrap();
        let e = tgt.dmh(level, k).unwrap();
        if !d.is_zero() {
            let incoming = src.dmh_differential(level + 1, k + 1).unwrap();
            let rel = incoming.matrix.hstack(&a.shape().relations());
            let coords = perturb(&mut rng, &d.group.lifts, &rel);
            let chains = perturb(&mut rng, &a.group.lifts.mul(&coords), &bounds);
            let images = push.mul(&chains);
            let mut cols = Vec::new();
            for j in 0..images.cols() {
                let in_mh = b.reduce_chain(&images.column(j)).unwrap();
                cols.push(e.group.reduce(&in_mh).unwrap());
            }
            let m = IntMatrix::from_columns(e.group.generator_count(), &cols);
            assert_eq!(InducedMap::new(d.shape(), e.shape(), m), on_dmh, "dMH lifts at ({level}, {k})");
        }
        checked += 1;
    }
}

/// `base + gens · R` for a random small integer matrix `R`.
fn perturb(rng: &mut ChaCha8Rng, base: &IntMatrix, gens: &IntMatrix) -> IntMatrix {
    let mut r = IntMatrix::zeros(gens.cols(), base.cols());
    for i in 0..gens.cols() {
        for j in 0..base.cols() {
            r.set(i, j, Int::from(rng.gen_range(-2i64..=2)));
        }
    }
    let shift = gens.mul(&r);
    let mut out = base.clone();
    for i in 0..base.rows() {
        for j in 0..base.cols() {
            out.set(i, j, base.get(i, j) + shift.get(i, j));
        }
    }
    out
}

fn girth(n: usize) {
    let t = Instant::now();
    let h = engine(builtins::cycle(n));
    let mut o = Oracle::new(h.graph());
    let h1 = h.reduced_path_homology(1).unwrap();
    assert!(!h1.is_zero(), "H~_1(C{n})");
    assert_eq!(h1.shape(), free(1));
    for k in [2, 3] {
        assert!(h.reduced_path_homology(k).unwrap().is_zero(), "H~_{k}(C{n})");
        assert_eq!(common::path_dim(&mut o, k), 0);
    }
    assert_eq!(common::path_dim(&mut o, 1), 1);
    within(t, Duration::from_secs(120), &format!("girth check on C{n}"));
}

fn girth_theorems() {
    girth(6);
    girth(7);
}

fn r_homology_vanishes() {
    for g in [builtins::complete(3), builtins::cycle(5), builtins::figure1()] {
        let h = engine(g);
        let diam = h.graph().finite_diameter().unwrap();
        let mut o = Oracle::new(h.graph());
        for k in -1..=2 {
            let cap = (k + 1) * diam;
            assert!(h.r_homology(k, cap).unwrap().is_zero(), "H_{k}(R)");
            assert_eq!(common::r_dim(&mut o, k, cap), 0);
        }
    }
    let edge = Digraph::from_edges(2, [(0, 1)]).unwrap();
    let err = engine(edge.clone()).r_homology(0, 5).unwrap_err();
    assert!(matches!(err, Error::UnboundedFiltration { ref from, ref to } if from == "1" && to == "0"), "{err}");
    assert!(matches!(
        build_filtered_complex(Arc::new(edge), 2),
        Err(Error::UnboundedFiltration { .. })
    ));
}

fn snf_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for case in 0..500 {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let raw: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let a = IntMatrix::from_rows(&raw);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.s, "case {case}: UAV != S");
        assert_eq!(snf.u.mul(&snf.u_inv), IntMatrix::identity(r));
        assert_eq!(snf.v.mul(&snf.v_inv), IntMatrix::identity(c));
        for i in 0..r {
            for j in 0..c {
                let expected = if i == j && i < snf.rank() { snf.diag[i].clone() } else { Int::zero() };
                assert_eq!(*snf.s.get(i, j), expected, "case {case}: S not diagonal");
            }
        }
        for w in snf.diag.windows(2) {
            assert!(w[0].divides(&w[1]), "case {case}: divisibility");
        }
        let (rank, det) = common::bareiss(&raw);
        assert_eq!(snf.rank(), rank, "case {case}: rank");
        if r == c {
            let prod: Int = if rank == r { snf.diag.iter().cloned().product() } else { Int::zero() };
            assert_eq!(prod, Int::from(det.abs() as i64), "case {case}: |det|");
        }
    }
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn())> = vec![
        ("C5 magnitude homology box", mh_box_c5),
        ("C5 path homology, two pipelines", path_homology_c5),
        ("C5 nontrivial dMH", nontrivial_dmh_c5),
        ("diagonal digraphs", diagonal_suite),
        ("figure 1 counterexample", figure1_counterexample),
        ("spectral identification", spectral_identification),
        ("property suites", property_suites),
        ("girth theorems", girth_theorems),
        ("R-homology vanishes", r_homology_vanishes),
        ("Smith normal form oracle", snf_oracle),
    ];
    let outcomes: Vec<(bool, Duration)> = thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(_, run)| {
                s.spawn(move || {
                    let t = Instant::now();
                    let ok = catch_unwind(AssertUnwindSafe(run)).is_ok();
                    (ok, t.elapsed())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread")).collect()
    });
    for (i, ((name, _), (ok, took))) in criteria.iter().zip(&outcomes).enumerate() {
        println!("criterion {:>2}: {} {name} ({took:.2?})", i + 1, if *ok { "PASS" } else { "FAIL" });
    }
    assert!(outcomes.iter().all(|(ok, _)| *ok), "some acceptance criteria failed");
}
