//! Randomized invariants over the whole pipeline: each test states a law
//! the implementation must satisfy for arbitrary admissible inputs and
//! lets proptest hunt for counterexamples.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ursell::{
    boundary_edges, complete_edge_count, connected_sum_direct, connected_sum_resummed,
    edge_index, edge_order_from_potential, enumerate_trees, forest_decomposition,
    key_inequality_gap, kruskal_map, prufer_decode, tree_bound_complex, tree_majorant_term,
    tree_majorant_term_factored, tree_path, trick_factorization, Complex64, Distribution,
    EdgeOrder, EvalOptions, ExecMode, Graph, Potential, StabilityCertificate, Tree,
};

const PI: f64 = std::f64::consts::PI;

/// A potential on n vertices with entries drawn from a seeded generator,
/// so failures shrink over (n, seed) instead of raw float vectors.
fn seeded_real(n: usize, seed: u64, lo: f64, hi: f64) -> Potential {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Distribution::Uniform { lo, hi }
        .sample_potential(n, &mut rng)
        .unwrap()
}

fn seeded_complex(n: usize, seed: u64) -> Potential {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Distribution::ComplexUniform {
        re: (-1.5, 1.5),
        im: (-PI, PI),
    }
    .sample_potential(n, &mut rng)
    .unwrap()
}

proptest! {
    /// e^{(x)_-} (1 - e^{-|x|}) reproduces |e^{-x} - 1| across the range
    /// where both sides stay finite.
    #[test]
    fn trick_product_matches_direct(x in -600.0f64..600.0) {
        let (amplifier, tree_factor) = trick_factorization(x);
        let expected = ((-x).exp() - 1.0).abs();
        let got = amplifier * tree_factor;
        prop_assert!((got - expected).abs() <= 1e-12 * (1.0 + expected),
            "x = {x}: {got} vs {expected}");
    }

    /// The amplifier is at least one and the tree factor lies in [0, 1],
    /// hitting 1 only by rounding for huge |x|.
    #[test]
    fn trick_factors_in_range(x in proptest::num::f64::NORMAL) {
        let (amplifier, tree_factor) = trick_factorization(x);
        prop_assert!(amplifier >= 1.0);
        prop_assert!((0.0..=1.0).contains(&tree_factor));
        if x != 0.0 {
            prop_assert!(tree_factor > 0.0);
        }
    }

    /// Sorting edges by the potential produces nondecreasing real parts
    /// along the rank sequence.
    #[test]
    fn potential_order_is_sorted(n in 2usize..=7, seed in any::<u64>()) {
        let u = seeded_real(n, seed, -3.0, 3.0);
        let order = edge_order_from_potential(&u).unwrap();
        let by_rank = order.edges_by_rank();
        for w in by_rank.windows(2) {
            prop_assert!(u.value(w[0]).re <= u.value(w[1]).re);
        }
        prop_assert_eq!(by_rank.len(), complete_edge_count(n));
    }

    /// Prüfer decoding yields a spanning tree whose degrees are one plus
    /// the label multiplicities, the classical bijection invariant.
    #[test]
    fn prufer_decode_degree_law(n in 2usize..=9, seq_seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seq_seed);
        let seq: Vec<usize> = (0..n.saturating_sub(2))
            .map(|_| rand::Rng::random_range(&mut rng, 0..n))
            .collect();
        let t = prufer_decode(&seq).unwrap();
        prop_assert_eq!(t.n(), n);
        prop_assert_eq!(t.graph().edge_count(), n - 1);
        prop_assert!(t.graph().is_connected());
        let mut degree = vec![1usize; n];
        for &v in &seq {
            degree[v] += 1;
        }
        for (v, &expected) in degree.iter().enumerate() {
            let got = t.edges().filter(|e| {
                let (i, j) = e.endpoints(n);
                i == v || j == v
            }).count();
            prop_assert_eq!(got, expected, "vertex {}", v);
        }
    }

    /// A tree is its own Kruskal image under any edge order.
    #[test]
    fn trees_are_kruskal_fixed_points(n in 2usize..=7, seq_seed in any::<u64>(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seq_seed);
        let seq: Vec<usize> = (0..n - 2).map(|_| rand::Rng::random_range(&mut rng, 0..n)).collect();
        let t = prufer_decode(&seq).unwrap();
        let order = EdgeOrder::random(n, seed).unwrap();
        let mapped = kruskal_map(t.graph(), &order).unwrap();
        prop_assert_eq!(mapped.edge_mask(), t.edge_mask());
    }

    /// boundary_edges agrees with its defining condition: a non-tree edge
    /// is attachable iff its rank exceeds every rank on the tree path
    /// between its endpoints.
    #[test]
    fn boundary_matches_path_definition(n in 3usize..=7, seq_seed in any::<u64>(), order_seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seq_seed);
        let seq: Vec<usize> = (0..n - 2).map(|_| rand::Rng::random_range(&mut rng, 0..n)).collect();
        let t = prufer_decode(&seq).unwrap();
        let order = EdgeOrder::random(n, order_seed).unwrap();
        let fast = boundary_edges(&t, &order).unwrap();
        for i in 0..n {
            for j in (i + 1)..n {
                let e = edge_index(i, j, n).unwrap();
                if t.contains(e) {
                    prop_assert_eq!(fast & e.bit(), 0, "tree edge flagged attachable");
                    continue;
                }
                let path = tree_path(&t, i, j).unwrap();
                let path_max = path.iter().map(|&pe| order.rank(pe)).max().unwrap();
                let expected = order.rank(e) > path_max;
                prop_assert_eq!(fast & e.bit() != 0, expected, "edge ({}, {})", i, j);
            }
        }
    }

    /// Adding any subset of the attachable set leaves the Kruskal image
    /// unchanged, the fiber property behind the interval partition.
    #[test]
    fn attachable_subsets_preserve_image(n in 3usize..=6, seq_seed in any::<u64>(), order_seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seq_seed);
        let seq: Vec<usize> = (0..n - 2).map(|_| rand::Rng::random_range(&mut rng, 0..n)).collect();
        let t = prufer_decode(&seq).unwrap();
        let order = EdgeOrder::random(n, order_seed).unwrap();
        let boundary = boundary_edges(&t, &order).unwrap();
        let mut s = boundary;
        loop {
            let g = Graph::new(n, t.edge_mask() | s).unwrap();
            let mapped = kruskal_map(&g, &order).unwrap();
            prop_assert_eq!(mapped.edge_mask(), t.edge_mask());
            if s == 0 { break; }
            s = (s - 1) & boundary;
        }
    }

    /// The forest decomposition splits the vertex set, keeps only the
    /// strictly negative tree edges, and spans disjoint complete blocks.
    #[test]
    fn forest_decomposition_partitions(n in 2usize..=8, seq_seed in any::<u64>(), u_seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seq_seed);
        let seq: Vec<usize> = (0..n - 2).map(|_| rand::Rng::random_range(&mut rng, 0..n)).collect();
        let t = prufer_decode(&seq).unwrap();
        let u = seeded_real(n, u_seed, -2.0, 2.0);
        let d = forest_decomposition(&t, &u).unwrap();

        prop_assert_eq!(d.t_minus & !t.edge_mask(), 0, "t_minus inside the tree");
        for e in t.edges() {
            let negative = u.value(e).re < 0.0;
            prop_assert_eq!(d.t_minus & e.bit() != 0, negative);
        }

        let mut seen = vec![false; n];
        for vs in &d.subtrees {
            prop_assert!(!vs.is_empty());
            prop_assert!(vs.windows(2).all(|w| w[0] < w[1]), "sorted within component");
            for &v in vs {
                prop_assert!(!seen[v], "vertex {} repeated", v);
                seen[v] = true;
            }
        }
        prop_assert!(seen.iter().all(|&s| s), "all vertices covered");
        let mins: Vec<usize> = d.subtrees.iter().map(|vs| vs[0]).collect();
        prop_assert!(mins.windows(2).all(|w| w[0] < w[1]), "components ordered by minimum");

        // A forest with k components on n vertices has n - k edges.
        prop_assert_eq!(d.t_minus.count_ones() as usize, n - d.subtrees.len());

        let mut union = 0u128;
        for (vs, &mask) in d.subtrees.iter().zip(&d.complete_edge_sets) {
            prop_assert_eq!(mask.count_ones() as usize, vs.len() * (vs.len() - 1) / 2);
            prop_assert_eq!(union & mask, 0, "complete blocks overlap");
            union |= mask;
            prop_assert_eq!(mask & d.t_minus, d.t_minus & mask, "consistency");
        }
        prop_assert_eq!(d.t_minus & !union, 0, "negative edges live inside blocks");
    }

    /// The factored form of a tree's contribution to the bound agrees
    /// with the direct product of |e^{-u} - 1| magnitudes.
    #[test]
    fn majorant_forms_agree(n in 2usize..=6, seq_seed in any::<u64>(), u_seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seq_seed);
        let seq: Vec<usize> = (0..n - 2).map(|_| rand::Rng::random_range(&mut rng, 0..n)).collect();
        let t = prufer_decode(&seq).unwrap();
        let u = seeded_real(n, u_seed, -2.5, 2.5);
        let order = edge_order_from_potential(&u).unwrap();
        let direct = tree_majorant_term(&t, &u, &order).unwrap();
        let factored = tree_majorant_term_factored(&t, &u, &order).unwrap();
        prop_assert!((direct - factored).abs() <= 1e-12 * (1.0 + direct.abs()),
            "{direct} vs {factored}");
    }

    /// The rank gap driving the improved bound is nonnegative for every
    /// tree under the potential-sorted order, real or complex.
    #[test]
    fn key_gap_nonnegative(n in 3usize..=5, u_seed in any::<u64>(), complex in any::<bool>()) {
        let u = if complex {
            seeded_complex(n, u_seed)
        } else {
            seeded_real(n, u_seed, -2.0, 3.0)
        };
        let order = edge_order_from_potential(&u).unwrap();
        for t in enumerate_trees(n).unwrap() {
            let gap = key_inequality_gap(&t, &u, &order).unwrap();
            prop_assert!(gap >= -1e-12, "gap {} at tree {:x}", gap, t.edge_mask());
        }
    }

    /// Per-edge dominance of the improved factor over the naive one.
    #[test]
    fn improved_factor_dominates(re in -6.0f64..6.0, im in -PI..PI) {
        let improved = (1.0 - Complex64::new(-re.abs(), im).exp()).norm();
        let naive = (1.0 - Complex64::new(-re, im).exp()).norm();
        prop_assert!(improved <= naive + 1e-12 * (1.0 + naive),
            "u = {re} + {im}i: {improved} > {naive}");
    }

    /// Tree-indexed resummation reproduces the direct connected sum for
    /// any edge order, not just the sorted one.
    #[test]
    fn resummation_matches_direct(n in 2usize..=5, u_seed in any::<u64>(), order_seed in any::<u64>(), complex in any::<bool>()) {
        let u = if complex {
            seeded_complex(n, u_seed)
        } else {
            seeded_real(n, u_seed, -2.0, 3.0)
        };
        let direct = connected_sum_direct(&u, ExecMode::Sequential).unwrap();
        let order = EdgeOrder::random(n, order_seed).unwrap();
        let resummed = connected_sum_resummed(&u, &order, &EvalOptions::default()).unwrap();
        prop_assert!((resummed - direct).norm() <= 1e-9 * (1.0 + direct.norm()),
            "{resummed} vs {direct}");
    }

    /// With the automatic minimal certificate the bound always covers the
    /// direct sum, real or complex.
    #[test]
    fn bound_covers_direct_sum(n in 2usize..=5, u_seed in any::<u64>(), complex in any::<bool>()) {
        let u = if complex {
            seeded_complex(n, u_seed)
        } else {
            seeded_real(n, u_seed, -2.0, 3.0)
        };
        let level = ursell::minimal_uniform_stability(&u).unwrap();
        let b = StabilityCertificate::uniform(n, level).unwrap();
        let lhs = connected_sum_direct(&u, ExecMode::Sequential).unwrap().norm();
        let rhs = tree_bound_complex(&u, &b, &EvalOptions::default()).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-9) + 1e-12, "|{lhs}| > {rhs}");
    }

    /// Instance parsing round-trips through emission byte-identically for
    /// machine-representable values.
    #[test]
    fn emit_parse_round_trip(n in 2usize..=6, u_seed in any::<u64>(), with_b in any::<bool>()) {
        let u = seeded_real(n, u_seed, -2.0, 2.0);
        let cert = if with_b {
            Some(StabilityCertificate::uniform(n, 0.25).unwrap())
        } else {
            None
        };
        let instance = ursell::Instance { potential: u, certificate: cert };
        let text = ursell::emit_instance(&instance);
        let parsed = ursell::parse_instance_str(&text).unwrap();
        prop_assert_eq!(parsed.potential.values(), instance.potential.values());
        prop_assert_eq!(
            parsed.certificate.as_ref().map(|c| c.b().to_vec()),
            instance.certificate.as_ref().map(|c| c.b().to_vec())
        );
        let text2 = ursell::emit_instance(&parsed);
        prop_assert_eq!(text, text2);
    }
}

/// Kruskal trees drawn from non-uniform potentials still satisfy the
/// minimality characterization: no swap of a tree edge for a cheaper
/// non-tree edge across the induced cut can lower the rank profile.
#[test]
fn kruskal_picks_rank_minimal_trees() {
    for seed in 0..50u64 {
        let n = 2 + (seed as usize % 5);
        let order = EdgeOrder::random(n, seed).unwrap();
        let g = Graph::complete(n).unwrap();
        let t = kruskal_map(&g, &order).unwrap();
        let mut best: Option<u128> = None;
        let mut best_key: Option<Vec<usize>> = None;
        for cand in enumerate_trees(n).unwrap() {
            let mut key: Vec<usize> = cand.edges().map(|e| order.rank(e)).collect();
            key.sort_unstable();
            if best_key.as_ref().is_none_or(|k| key < *k) {
                best_key = Some(key);
                best = Some(cand.edge_mask());
            }
        }
        assert_eq!(t.edge_mask(), best.unwrap(), "n = {n}, seed {seed}");
    }
}

/// The full interval decomposition reconstructs the connected-graph sum
/// term by term: summing the exact fiber contributions over all trees
/// gives the direct value for mixed-sign complex potentials too.
#[test]
fn fibers_reassemble_direct_sum() {
    for seed in 0..30u64 {
        let n = 3 + (seed as usize % 3);
        let u = seeded_complex(n, 9000 + seed);
        let order = EdgeOrder::random(n, seed).unwrap();
        let direct = connected_sum_direct(&u, ExecMode::Sequential).unwrap();
        let mut total = Complex64::new(0.0, 0.0);
        for t in enumerate_trees(n).unwrap() {
            let boundary = boundary_edges(&t, &order).unwrap();
            let mut term = Complex64::new(1.0, 0.0);
            for e in t.edges() {
                term *= (-u.value(e)).exp() - 1.0;
            }
            let mut mask = boundary;
            while mask != 0 {
                let idx = mask.trailing_zeros() as usize;
                mask &= mask - 1;
                let e = ursell::EdgeId::from_index(idx, n).unwrap();
                term *= (-u.value(e)).exp();
            }
            total += term;
        }
        assert!(
            (total - direct).norm() <= 1e-9 * (1.0 + direct.norm()),
            "n = {n}, seed {seed}: {total} vs {direct}"
        );
    }
}

/// Sanity anchor for the property file itself: the all-ln 2 triangle hits
/// the documented closed forms.
#[test]
fn anchor_triangle_values() {
    let ln2 = std::f64::consts::LN_2;
    let u = Potential::new_real(3, &[ln2; 3]).unwrap();
    let direct = connected_sum_direct(&u, ExecMode::Sequential).unwrap();
    assert!((direct.re - 0.625).abs() < 1e-12);
    let b = StabilityCertificate::uniform(3, 0.0).unwrap();
    let rhs = ursell::tree_bound_real(&u, &b, &EvalOptions::default()).unwrap();
    assert!((rhs - 0.75).abs() < 1e-12);
    let _ = Tree::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
}
