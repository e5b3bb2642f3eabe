//! Labeled graphs on up to 16 vertices as edge bitmasks over the complete
//! graph, plus the enumerations the identity checks run over: all spanning
//! trees (via Prüfer sequences) and all connected graphs (via edge subsets).

use crate::error::{Error, Result};

/// Graphs and trees are stored as bitmasks over the n(n-1)/2 edges of K_n;
/// 16 vertices means 120 edge bits, which fits a u128.
pub const MAX_GRAPH_VERTICES: usize = 16;

/// Cap for exhaustive connected-graph enumeration: 2^21 edge subsets at n = 7.
pub const MAX_ORACLE_VERTICES: usize = 7;

pub const MIN_VERTICES: usize = 2;

/// Number of edges of the complete graph on `n` vertices.
#[inline]
pub const fn complete_edge_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Number of labeled spanning trees of K_n (Cayley: n^{n-2}).
pub fn labeled_tree_count(n: usize) -> u64 {
    (n as u64).pow(n as u32 - 2)
}

/// Index of an edge of the complete graph, in lexicographic order of its
/// endpoint pair (min, max): for n = 4 the edges 01, 02, 03, 12, 13, 23 get
/// indices 0..6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(u16);

impl EdgeId {
    pub(crate) fn new_unchecked(index: usize) -> Self {
        EdgeId(index as u16)
    }

    pub fn from_index(index: usize, n: usize) -> Result<Self> {
        if index < complete_edge_count(n) {
            Ok(EdgeId(index as u16))
        } else {
            Err(Error::EdgeIndexRange { index, n })
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn bit(self) -> u128 {
        1u128 << self.0
    }

    /// The endpoint pair (i, j) with i < j, for the complete graph on `n`
    /// vertices.
    pub fn endpoints(self, n: usize) -> (usize, usize) {
        let mut index = self.index();
        for i in 0..n {
            let row = n - 1 - i;
            if index < row {
                return (i, i + 1 + index);
            }
            index -= row;
        }
        unreachable!("edge index out of range for n = {n}")
    }
}

/// Maps an unordered vertex pair to its [`EdgeId`]. Symmetric in (i, j).
pub fn edge_index(i: usize, j: usize, n: usize) -> Result<EdgeId> {
    if i == j || i >= n || j >= n {
        return Err(Error::InvalidVertexPair { i, j, n });
    }
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let index = lo * (2 * n - lo - 1) / 2 + (hi - lo - 1);
    Ok(EdgeId(index as u16))
}

/// A labeled graph on `n` vertices: subgraph of K_n as an edge bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: u128,
}

impl Graph {
    pub fn new(n: usize, edges: u128) -> Result<Self> {
        check_vertex_count(n)?;
        let m = complete_edge_count(n);
        if m < 128 && edges >> m != 0 {
            return Err(Error::EdgeMaskRange { n, m });
        }
        Ok(Graph { n, edges })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Graph::new(n, 0)
    }

    pub fn complete(n: usize) -> Result<Self> {
        check_vertex_count(n)?;
        let m = complete_edge_count(n);
        let mask = if m == 128 { u128::MAX } else { (1u128 << m) - 1 };
        Ok(Graph { n, edges: mask })
    }

    pub fn from_edges(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut mask = 0u128;
        for &(i, j) in pairs {
            mask |= edge_index(i, j, n)?.bit();
        }
        Graph::new(n, mask)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_mask(&self) -> u128 {
        self.edges
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.count_ones() as usize
    }

    #[inline]
    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges & e.bit() != 0
    }

    /// Edges in ascending index order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        EdgeBits(self.edges)
    }

    /// Per-vertex neighbor bitmasks.
    pub(crate) fn adjacency(&self) -> [u32; MAX_GRAPH_VERTICES] {
        adjacency_of_mask(self.n, self.edges)
    }

    /// True iff all `n` vertices lie in a single component; isolated
    /// vertices count as their own components.
    pub fn is_connected(&self) -> bool {
        mask_is_connected(self.n, &self.adjacency())
    }

    /// True iff the edge set contains no cycle (checked with union-find).
    pub fn is_acyclic(&self) -> bool {
        let mut uf = UnionFind::new(self.n);
        for e in self.edges() {
            let (i, j) = e.endpoints(self.n);
            if !uf.union(i, j) {
                return false;
            }
        }
        true
    }
}

struct EdgeBits(u128);

impl Iterator for EdgeBits {
    type Item = EdgeId;

    #[inline]
    fn next(&mut self) -> Option<EdgeId> {
        if self.0 == 0 {
            None
        } else {
            let idx = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(EdgeId::new_unchecked(idx))
        }
    }
}

pub(crate) fn adjacency_of_mask(n: usize, mut mask: u128) -> [u32; MAX_GRAPH_VERTICES] {
    let mut adj = [0u32; MAX_GRAPH_VERTICES];
    while mask != 0 {
        let idx = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        let (i, j) = EdgeId::new_unchecked(idx).endpoints(n);
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    adj
}

pub(crate) fn mask_is_connected(n: usize, adj: &[u32; MAX_GRAPH_VERTICES]) -> bool {
    let full = (1u32 << n) - 1;
    let mut reach = 1u32;
    loop {
        let mut next = reach;
        let mut frontier = reach;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            next |= adj[v];
        }
        if next == reach {
            return reach == full;
        }
        reach = next;
    }
}

fn check_vertex_count(n: usize) -> Result<()> {
    if !(MIN_VERTICES..=MAX_GRAPH_VERTICES).contains(&n) {
        return Err(Error::VertexCount {
            n,
            lo: MIN_VERTICES,
            hi: MAX_GRAPH_VERTICES,
        });
    }
    Ok(())
}

/// A labeled spanning tree of K_n: a connected graph with exactly n-1 edges
/// (acyclicity follows; the constructor checks count and connectivity).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Tree(Graph);

impl Tree {
    pub fn new(graph: Graph) -> Result<Self> {
        if graph.edge_count() != graph.n() - 1 {
            return Err(Error::TreeEdgeCount {
                n: graph.n(),
                found: graph.edge_count(),
            });
        }
        if !graph.is_connected() {
            return Err(Error::TreeDisconnected);
        }
        Ok(Tree(graph))
    }

    pub fn from_edges(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Tree::new(Graph::from_edges(n, pairs)?)
    }

    #[inline]
    pub fn graph(&self) -> &Graph {
        &self.0
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.0.n
    }

    #[inline]
    pub fn edge_mask(&self) -> u128 {
        self.0.edges
    }

    #[inline]
    pub fn contains(&self, e: EdgeId) -> bool {
        self.0.contains(e)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.0.edges()
    }

    /// The unique path between two distinct vertices, as the edge sequence
    /// from `i` to `j`.
    pub fn path(&self, i: usize, j: usize) -> Result<Vec<EdgeId>> {
        tree_path(self, i, j)
    }
}

/// Decodes a Prüfer sequence into the unique labeled tree on
/// `seq.len() + 2` vertices.
pub fn prufer_decode(seq: &[usize]) -> Result<Tree> {
    let n = seq.len() + 2;
    check_vertex_count(n)?;
    for &a in seq {
        if a >= n {
            return Err(Error::InvalidVertexPair { i: a, j: a, n });
        }
    }

    let mut degree = [1u8; MAX_GRAPH_VERTICES];
    for &a in seq {
        degree[a] += 1;
    }

    let mut edges = 0u128;
    // Smallest-leaf scan: `ptr` only moves forward, each vertex is used once.
    let mut ptr = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
    let mut leaf = ptr;
    for &a in seq {
        edges |= edge_index(leaf, a, n)?.bit();
        degree[a] -= 1;
        if degree[a] == 1 && a < ptr {
            leaf = a;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges |= edge_index(leaf, n - 1, n)?.bit();

    // The decode always yields n-1 edges forming a tree.
    Tree::new(Graph { n, edges })
}

/// Streams every labeled spanning tree of K_n exactly once, in
/// lexicographic Prüfer-sequence order.
pub fn enumerate_trees(n: usize) -> Result<TreeStream> {
    check_vertex_count(n)?;
    Ok(TreeStream::over_range(n, 0, labeled_tree_count(n)))
}

/// Spanning-tree stream over a contiguous range of Prüfer indices
/// (a sequence read as a base-n number, most significant digit first).
/// Ranges let callers split the full enumeration across workers.
pub struct TreeStream {
    n: usize,
    seq: Vec<usize>,
    remaining: u64,
}

impl TreeStream {
    pub fn over_range(n: usize, start: u64, end: u64) -> TreeStream {
        debug_assert!(start <= end && end <= labeled_tree_count(n));
        let mut seq = vec![0usize; n - 2];
        let mut index = start;
        for slot in seq.iter_mut().rev() {
            *slot = (index % n as u64) as usize;
            index /= n as u64;
        }
        TreeStream {
            n,
            seq,
            remaining: end - start,
        }
    }
}

impl Iterator for TreeStream {
    type Item = Tree;

    fn next(&mut self) -> Option<Tree> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let tree = prufer_decode(&self.seq).expect("in-range sequence decodes");
        // Odometer increment, last digit fastest.
        for slot in self.seq.iter_mut().rev() {
            *slot += 1;
            if *slot < self.n {
                break;
            }
            *slot = 0;
        }
        Some(tree)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

/// Streams every connected labeled graph on `n` vertices exactly once, in
/// ascending edge-bitmask order. Refuses n > 7: the scan visits all
/// 2^{n(n-1)/2} edge subsets.
pub fn enumerate_connected_graphs(n: usize) -> Result<ConnectedGraphStream> {
    check_vertex_count(n)?;
    if n > MAX_ORACLE_VERTICES {
        return Err(Error::Capacity {
            what: "connected-graph enumeration",
            max: MAX_ORACLE_VERTICES,
            n,
        });
    }
    Ok(ConnectedGraphStream {
        n,
        next_mask: 0,
        end: 1u128 << complete_edge_count(n),
    })
}

pub struct ConnectedGraphStream {
    n: usize,
    next_mask: u128,
    end: u128,
}

impl Iterator for ConnectedGraphStream {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        while self.next_mask < self.end {
            let mask = self.next_mask;
            self.next_mask += 1;
            let adj = adjacency_of_mask(self.n, mask);
            if mask_is_connected(self.n, &adj) {
                return Some(Graph {
                    n: self.n,
                    edges: mask,
                });
            }
        }
        None
    }
}

/// The unique path between distinct vertices of a tree, as the edge
/// sequence from `i` to `j`.
pub fn tree_path(t: &Tree, i: usize, j: usize) -> Result<Vec<EdgeId>> {
    let n = t.n();
    if i == j || i >= n || j >= n {
        return Err(Error::InvalidVertexPair { i, j, n });
    }
    let adj = t.graph().adjacency();

    // Iterative DFS from i recording each vertex's parent.
    let mut parent = [usize::MAX; MAX_GRAPH_VERTICES];
    parent[i] = i;
    let mut stack = [0usize; MAX_GRAPH_VERTICES];
    let mut top = 0;
    stack[top] = i;
    top += 1;
    while top > 0 {
        top -= 1;
        let v = stack[top];
        if v == j {
            break;
        }
        let mut nbrs = adj[v];
        while nbrs != 0 {
            let w = nbrs.trailing_zeros() as usize;
            nbrs &= nbrs - 1;
            if parent[w] == usize::MAX {
                parent[w] = v;
                stack[top] = w;
                top += 1;
            }
        }
    }

    let mut path = Vec::new();
    let mut v = j;
    while v != i {
        let p = parent[v];
        path.push(edge_index(p, v, n)?);
        v = p;
    }
    path.reverse();
    Ok(path)
}

/// Union-find with path compression and union by size.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: [u8; MAX_GRAPH_VERTICES + 4],
    size: [u8; MAX_GRAPH_VERTICES + 4],
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        debug_assert!(n <= MAX_GRAPH_VERTICES + 4);
        let mut parent = [0u8; MAX_GRAPH_VERTICES + 4];
        for (v, p) in parent.iter_mut().enumerate().take(n) {
            *p = v as u8;
        }
        UnionFind {
            parent,
            size: [1; MAX_GRAPH_VERTICES + 4],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut v = x;
        while v != root {
            let next = self.parent[v] as usize;
            self.parent[v] = root as u8;
            v = next;
        }
        root
    }

    /// Returns false when `x` and `y` were already in the same component.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (mut a, mut b) = (self.find(x), self.find(y));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a as u8;
        self.size[a] += self.size[b];
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_index_lexicographic_on_k4() {
        // (0,1) (0,2) (0,3) (1,2) (1,3) (2,3)
        let expect = [
            ((0, 1), 0),
            ((0, 2), 1),
            ((0, 3), 2),
            ((1, 2), 3),
            ((1, 3), 4),
            ((2, 3), 5),
        ];
        for ((i, j), idx) in expect {
            assert_eq!(edge_index(i, j, 4).unwrap().index(), idx);
            assert_eq!(edge_index(j, i, 4).unwrap().index(), idx, "symmetry");
        }
    }

    #[test]
    fn edge_index_bijective_with_endpoints() {
        for n in 2..=16 {
            let mut seen = vec![false; complete_edge_count(n)];
            for i in 0..n {
                for j in (i + 1)..n {
                    let e = edge_index(i, j, n).unwrap();
                    assert!(!seen[e.index()]);
                    seen[e.index()] = true;
                    assert_eq!(e.endpoints(n), (i, j));
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn edge_index_rejects_bad_pairs() {
        assert!(edge_index(1, 1, 4).is_err());
        assert!(edge_index(0, 4, 4).is_err());
        assert!(edge_index(7, 2, 4).is_err());
    }

    #[test]
    fn graph_rejects_out_of_range() {
        assert!(Graph::new(1, 0).is_err());
        assert!(Graph::new(17, 0).is_err());
        // n = 3 has 3 edges; bit 3 is out of range.
        assert!(Graph::new(3, 0b1000).is_err());
        assert!(Graph::new(3, 0b111).is_ok());
    }

    #[test]
    fn connectivity_examples() {
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(path.is_connected());
        let dangling = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(!dangling.is_connected());
        let two_pairs = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!two_pairs.is_connected());
        assert!(!Graph::empty(2).unwrap().is_connected());
    }

    #[test]
    fn tree_constructor_checks_count_and_connectivity() {
        let triangle = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert!(matches!(
            Tree::new(triangle),
            Err(Error::TreeEdgeCount { .. })
        ));
        let split = Graph::from_edges(4, &[(0, 1), (2, 3), (0, 1)]).unwrap();
        assert!(matches!(Tree::new(split), Err(Error::TreeEdgeCount { .. })));
        // Right count, disconnected: {01, 23} on 3... need n=4 with 3 edges.
        let bad = Graph::from_edges(4, &[(0, 1), (0, 1), (2, 3)]).unwrap();
        assert_eq!(bad.edge_count(), 2);
        let cyc_plus_isolated = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(matches!(
            Tree::new(cyc_plus_isolated),
            Err(Error::TreeDisconnected)
        ));
    }

    #[test]
    fn prufer_decode_hand_cases() {
        let star = prufer_decode(&[0]).unwrap();
        assert_eq!(
            star.edge_mask(),
            Graph::from_edges(3, &[(0, 1), (0, 2)]).unwrap().edge_mask()
        );
        let other = prufer_decode(&[2]).unwrap();
        assert_eq!(
            other.edge_mask(),
            Graph::from_edges(3, &[(0, 2), (1, 2)]).unwrap().edge_mask()
        );
    }

    #[test]
    fn prufer_decode_rejects_out_of_range_entries() {
        assert!(prufer_decode(&[3]).is_err());
        assert!(prufer_decode(&[0, 5, 0]).is_err());
    }

    #[test]
    fn prufer_bijection_small_n() {
        for n in 2..=6usize {
            let count = labeled_tree_count(n);
            let mut seen = std::collections::HashSet::new();
            for t in enumerate_trees(n).unwrap() {
                assert_eq!(t.n(), n);
                assert_eq!(t.graph().edge_count(), n - 1);
                assert!(t.graph().is_connected());
                assert!(t.graph().is_acyclic());
                assert!(seen.insert(t.edge_mask()), "duplicate tree at n={n}");
            }
            assert_eq!(seen.len() as u64, count, "Cayley count at n={n}");
        }
    }

    #[test]
    fn tree_counts_match_cayley() {
        assert_eq!(enumerate_trees(2).unwrap().count(), 1);
        assert_eq!(enumerate_trees(4).unwrap().count(), 16);
        assert_eq!(enumerate_trees(7).unwrap().count(), 16807);
    }

    #[test]
    fn tree_stream_range_partition_covers_all() {
        let n = 5;
        let total = labeled_tree_count(n);
        let whole: Vec<u128> = enumerate_trees(n).unwrap().map(|t| t.edge_mask()).collect();
        let mut parts = Vec::new();
        for k in 0..4 {
            let start = total * k / 4;
            let end = total * (k + 1) / 4;
            parts.extend(TreeStream::over_range(n, start, end).map(|t| t.edge_mask()));
        }
        assert_eq!(whole, parts);
    }

    #[test]
    fn connected_graph_counts() {
        assert_eq!(enumerate_connected_graphs(2).unwrap().count(), 1);
        assert_eq!(enumerate_connected_graphs(3).unwrap().count(), 4);
        assert_eq!(enumerate_connected_graphs(4).unwrap().count(), 38);
    }

    #[test]
    fn connected_graph_enumeration_refuses_large_n() {
        assert!(matches!(
            enumerate_connected_graphs(8),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn tree_path_hand_cases() {
        let line = Tree::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let p = line.path(0, 2).unwrap();
        assert_eq!(
            p,
            vec![
                edge_index(0, 1, 3).unwrap(),
                edge_index(1, 2, 3).unwrap()
            ]
        );

        let star = Tree::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let p = star.path(1, 2).unwrap();
        assert_eq!(
            p,
            vec![
                edge_index(0, 1, 4).unwrap(),
                edge_index(0, 2, 4).unwrap()
            ]
        );

        let chain = Tree::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let p = chain.path(0, 3).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p[0], edge_index(0, 1, 4).unwrap());
        assert_eq!(p[2], edge_index(2, 3, 4).unwrap());
    }

    #[test]
    fn tree_path_rejects_equal_endpoints() {
        let line = Tree::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(line.path(1, 1).is_err());
    }

    #[test]
    fn tree_path_chains_between_endpoints() {
        // Path edges chain i -> j and all lie in the tree.
        for t in enumerate_trees(6).unwrap().step_by(37) {
            for i in 0..6 {
                for j in 0..6 {
                    if i == j {
                        continue;
                    }
                    let path = t.path(i, j).unwrap();
                    let mut at = i;
                    for e in &path {
                        assert!(t.contains(*e));
                        let (a, b) = e.endpoints(6);
                        at = if a == at {
                            b
                        } else {
                            assert_eq!(b, at, "path does not chain");
                            a
                        };
                    }
                    assert_eq!(at, j);
                }
            }
        }
    }
}
