//! Minimal-spanning-tree partition of the connected graphs on n vertices.
//!
//! Fix a total order on the edges of K_n. Running Kruskal's algorithm on a
//! connected graph g (insert edges in increasing rank, skip cycle-closing
//! edges) picks out a spanning tree t(g). The fiber over a tree t is exactly
//! the interval {g : t <= g <= t + E(t)}, where E(t) holds the non-tree
//! edges whose rank beats every edge on the tree path between their
//! endpoints. [`verify_partition`] checks this fiber description and the
//! counting identity sum_t 2^{|E(t)|} = #connected graphs by exhaustion.

use crate::error::{Error, Result};
use crate::graph::{
    complete_edge_count, edge_index, enumerate_connected_graphs, enumerate_trees,
    labeled_tree_count, EdgeId, Graph, Tree, UnionFind, MAX_GRAPH_VERTICES,
};
use crate::ExecMode;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Cap for exhaustive partition verification: at n = 6 the scan touches
/// all 26704 connected graphs twice.
pub const MAX_PARTITION_VERTICES: usize = 6;

/// A total order (ranking) of the edges of K_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeOrder {
    n: usize,
    /// rank[e] = position of edge e; a permutation of 0..m.
    rank: Vec<u16>,
    /// by_rank[r] = the edge at position r.
    by_rank: Vec<EdgeId>,
}

impl EdgeOrder {
    /// Ranks equal to edge indices: (0,1) < (0,2) < ... < (n-2,n-1).
    pub fn lexicographic(n: usize) -> Result<EdgeOrder> {
        let m = complete_edge_count(check_order_n(n)?);
        Ok(EdgeOrder {
            n,
            rank: (0..m as u16).collect(),
            by_rank: (0..m).map(EdgeId::new_unchecked).collect(),
        })
    }

    /// Order from an explicit rank permutation, `ranks[e]` giving the
    /// position of edge `e` (indices in lexicographic pair order).
    pub fn from_ranks(n: usize, ranks: &[usize]) -> Result<EdgeOrder> {
        let m = complete_edge_count(check_order_n(n)?);
        if ranks.len() != m {
            return Err(Error::BadRanks { m });
        }
        let mut by_rank = vec![None; m];
        for (e, &r) in ranks.iter().enumerate() {
            if r >= m || by_rank[r].is_some() {
                return Err(Error::BadRanks { m });
            }
            by_rank[r] = Some(EdgeId::new_unchecked(e));
        }
        Ok(EdgeOrder {
            n,
            rank: ranks.iter().map(|&r| r as u16).collect(),
            by_rank: by_rank.into_iter().map(|e| e.unwrap()).collect(),
        })
    }

    /// Uniformly random order, reproducible from the seed.
    pub fn random(n: usize, seed: u64) -> Result<EdgeOrder> {
        let m = complete_edge_count(check_order_n(n)?);
        let mut by_rank: Vec<EdgeId> = (0..m).map(EdgeId::new_unchecked).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        by_rank.shuffle(&mut rng);
        let mut rank = vec![0u16; m];
        for (r, e) in by_rank.iter().enumerate() {
            rank[e.index()] = r as u16;
        }
        Ok(EdgeOrder { n, rank, by_rank })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn rank(&self, e: EdgeId) -> usize {
        self.rank[e.index()] as usize
    }

    /// Edges in increasing rank.
    #[inline]
    pub fn edges_by_rank(&self) -> &[EdgeId] {
        &self.by_rank
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.rank.iter().map(|&r| r as usize).collect()
    }

    pub(crate) fn check_matches(&self, n: usize) -> Result<()> {
        if self.n != n {
            return Err(Error::OrderMismatch { order_n: self.n, n });
        }
        Ok(())
    }
}

fn check_order_n(n: usize) -> Result<usize> {
    if !(2..=MAX_GRAPH_VERTICES).contains(&n) {
        return Err(Error::VertexCount {
            n,
            lo: 2,
            hi: MAX_GRAPH_VERTICES,
        });
    }
    Ok(n)
}

/// The spanning tree Kruskal's algorithm selects from a connected graph:
/// scan edges in increasing rank, keep those that join two components.
pub fn kruskal_map(g: &Graph, order: &EdgeOrder) -> Result<Tree> {
    order.check_matches(g.n())?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let mut uf = UnionFind::new(n);
    let mut tree_mask = 0u128;
    let mut picked = 0usize;
    for &e in order.edges_by_rank() {
        if !g.contains(e) {
            continue;
        }
        let (i, j) = e.endpoints(n);
        if uf.union(i, j) {
            tree_mask |= e.bit();
            picked += 1;
            if picked == n - 1 {
                break;
            }
        }
    }
    Tree::new(Graph::new(n, tree_mask)?)
}

/// The attachable edge set E(t): non-tree edges ij whose rank exceeds the
/// rank of every edge on the tree path from i to j. Adding any subset of
/// E(t) to t leaves the Kruskal tree unchanged.
pub fn boundary_edges(t: &Tree, order: &EdgeOrder) -> Result<u128> {
    order.check_matches(t.n())?;
    let n = t.n();
    let adj = t.graph().adjacency();
    let mut out = 0u128;

    // For each root i, one DFS computes the maximum path rank from i to
    // every j; a non-tree edge (i, j) qualifies iff its rank beats that.
    // Roots stop at n-1 and only pairs j > i are tested, so each edge is
    // decided exactly once.
    for i in 0..n - 1 {
        let mut max_rank = [-1i32; MAX_GRAPH_VERTICES];
        let mut visited = 1u32 << i;
        let mut stack = [(i, -1i32); MAX_GRAPH_VERTICES];
        let mut top = 1;
        while top > 0 {
            top -= 1;
            let (v, r_to_v) = stack[top];
            max_rank[v] = r_to_v;
            let mut nbrs = adj[v] & !visited;
            while nbrs != 0 {
                let w = nbrs.trailing_zeros() as usize;
                nbrs &= nbrs - 1;
                visited |= 1 << w;
                let r_edge = order.rank(edge_index(v, w, n)?) as i32;
                stack[top] = (w, r_to_v.max(r_edge));
                top += 1;
            }
        }
        // j stays an index: it names the vertex for edge_index as well.
        #[allow(clippy::needless_range_loop)]
        for j in (i + 1)..n {
            let e = edge_index(i, j, n)?;
            if !t.contains(e) && order.rank(e) as i32 > max_rank[j] {
                out |= e.bit();
            }
        }
    }
    Ok(out)
}

/// The first failure found by [`verify_partition`], if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionCounterexample {
    /// The connected graph exhibiting the failure (vertex pairs, 0-indexed).
    pub graph: Vec<(usize, usize)>,
    /// Where the Kruskal map sent it.
    pub mapped_tree: Vec<(usize, usize)>,
    /// The tree whose interval the graph was drawn from, when the failure
    /// came from the fiber-side scan.
    pub expected_tree: Option<Vec<(usize, usize)>>,
}

/// Outcome of the exhaustive partition check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionReport {
    pub n: usize,
    /// Number of connected labeled graphs on n vertices.
    pub connected_count: u64,
    /// Number of labeled spanning trees (n^{n-2}).
    pub tree_count: u64,
    /// sum over trees t of 2^{|E(t)|}.
    pub interval_size_sum: u64,
    /// Every connected graph g lies inside the interval of its own
    /// Kruskal tree: t(g) <= g <= t(g) + E(t(g)).
    pub cover_ok: bool,
    /// Every graph in every interval maps back to that interval's tree.
    pub fibers_ok: bool,
    /// interval_size_sum == connected_count.
    pub counting_ok: bool,
    pub counterexample: Option<PartitionCounterexample>,
}

impl PartitionReport {
    pub fn pass(&self) -> bool {
        self.cover_ok && self.fibers_ok && self.counting_ok
    }
}

fn pairs_of_mask(n: usize, mask: u128) -> Vec<(usize, usize)> {
    Graph::new(n, mask)
        .expect("mask within range")
        .edges()
        .map(|e| e.endpoints(n))
        .collect()
}

/// Exhaustively verifies that the Kruskal intervals partition the
/// connected graphs on n vertices (n <= 6) under the given order, and
/// that the interval sizes add up to the connected-graph count.
pub fn verify_partition(n: usize, order: &EdgeOrder, mode: ExecMode) -> Result<PartitionReport> {
    order.check_matches(n)?;
    if n > MAX_PARTITION_VERTICES {
        return Err(Error::Capacity {
            what: "partition verification",
            max: MAX_PARTITION_VERTICES,
            n,
        });
    }

    let mut counterexample = None;

    // Graph side: each connected graph must contain its Kruskal tree and
    // stay inside that tree's interval.
    let mut connected_count = 0u64;
    let mut cover_ok = true;
    for g in enumerate_connected_graphs(n)? {
        connected_count += 1;
        let t = kruskal_map(&g, order)?;
        let e_t = boundary_edges(&t, order)?;
        let gm = g.edge_mask();
        let tm = t.edge_mask();
        if tm & gm != tm || gm & !(tm | e_t) != 0 {
            cover_ok = false;
            counterexample.get_or_insert_with(|| PartitionCounterexample {
                graph: pairs_of_mask(n, gm),
                mapped_tree: pairs_of_mask(n, tm),
                expected_tree: None,
            });
            break;
        }
    }

    // Tree side: every subset of E(t) glued onto t must map back to t.
    let fiber_scan = |tree: Tree| -> (u64, Option<PartitionCounterexample>) {
        let e_t = boundary_edges(&tree, order).expect("order matches");
        let tm = tree.edge_mask();
        let mut s = e_t;
        loop {
            let g = Graph::new(n, tm | s).expect("mask within range");
            let back = kruskal_map(&g, order).expect("interval graphs are connected");
            if back.edge_mask() != tm {
                return (
                    0,
                    Some(PartitionCounterexample {
                        graph: pairs_of_mask(n, g.edge_mask()),
                        mapped_tree: pairs_of_mask(n, back.edge_mask()),
                        expected_tree: Some(pairs_of_mask(n, tm)),
                    }),
                );
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & e_t;
        }
        (1u64 << e_t.count_ones(), None)
    };

    let tree_count = labeled_tree_count(n);
    let mut interval_size_sum = 0u64;
    let mut fibers_ok = true;
    let fiber_results: Vec<(u64, Option<PartitionCounterexample>)> = match mode {
        ExecMode::Sequential => enumerate_trees(n)?.map(fiber_scan).collect(),
        ExecMode::Parallel => {
            use rayon::prelude::*;
            // Fixed chunk count; chunk outputs concatenate in index order,
            // so results match the sequential scan exactly.
            let chunks: u64 = 64.min(tree_count);
            (0..chunks)
                .into_par_iter()
                .map(|k| {
                    let start = tree_count * k / chunks;
                    let end = tree_count * (k + 1) / chunks;
                    crate::graph::TreeStream::over_range(n, start, end)
                        .map(fiber_scan)
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
                .into_iter()
                .flatten()
                .collect()
        }
    };
    for (size, bad) in fiber_results {
        if let Some(bad) = bad {
            fibers_ok = false;
            counterexample.get_or_insert(bad);
            break;
        }
        interval_size_sum += size;
    }

    let counting_ok = cover_ok && fibers_ok && interval_size_sum == connected_count;
    Ok(PartitionReport {
        n,
        connected_count,
        tree_count,
        interval_size_sum,
        cover_ok,
        fibers_ok,
        counting_ok,
        counterexample,
    })
}
