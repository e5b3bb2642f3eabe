//! Pair interactions, stability certificates, and the two per-edge
//! rewrites the tree bound rests on: the factorization
//! |e^{-x} - 1| = e^{(x)_-} (1 - e^{-|x|}) and the decomposition of a
//! tree into its negative-edge forest.

use crate::error::{Error, Result, VertexSubset};
use crate::graph::{
    complete_edge_count, edge_index, EdgeId, Tree, UnionFind, MAX_GRAPH_VERTICES,
};
use crate::scheme::EdgeOrder;
pub use num_complex::Complex64;

/// Cap for the 2^n stability subset scan.
pub const MAX_POTENTIAL_VERTICES: usize = 20;

/// Slack used when testing the stability inequality, relative to the
/// magnitudes involved. Small enough that shrinking a tight certificate
/// by 1e-9 relative is still flagged as a violation.
pub const STABILITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialKind {
    Real,
    Complex,
}

/// A symmetric pair interaction u_{i,j} on n vertices, stored once per
/// unordered pair in edge-index order. Complex values are allowed; the
/// kind flag records whether the instance was declared real.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    n: usize,
    values: Vec<Complex64>,
    kind: PotentialKind,
}

impl Potential {
    pub fn new_real(n: usize, values: &[f64]) -> Result<Self> {
        let values: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Potential::build(n, values, PotentialKind::Real)
    }

    pub fn new_complex(n: usize, values: &[Complex64]) -> Result<Self> {
        Potential::build(n, values.to_vec(), PotentialKind::Complex)
    }

    fn build(n: usize, values: Vec<Complex64>, kind: PotentialKind) -> Result<Self> {
        if !(2..=MAX_POTENTIAL_VERTICES).contains(&n) {
            return Err(Error::VertexCount {
                n,
                lo: 2,
                hi: MAX_POTENTIAL_VERTICES,
            });
        }
        let m = complete_edge_count(n);
        if values.len() != m {
            return Err(Error::ValueCount {
                n,
                expected: m,
                got: values.len(),
            });
        }
        for (idx, v) in values.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                let (i, j) = EdgeId::new_unchecked(idx).endpoints(n);
                return Err(Error::NonFiniteValue { i: i + 1, j: j + 1 });
            }
        }
        Ok(Potential { n, values, kind })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    #[inline]
    pub fn is_real(&self) -> bool {
        self.kind == PotentialKind::Real
    }

    /// Value on an edge (by index into the complete graph on `n`).
    #[inline]
    pub fn value(&self, e: EdgeId) -> Complex64 {
        self.values[e.index()]
    }

    pub fn pair(&self, i: usize, j: usize) -> Result<Complex64> {
        Ok(self.value(edge_index(i, j, self.n)?))
    }

    /// Values in edge-index order.
    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Dense n * n matrix of real parts; diagonal zero.
    pub(crate) fn re_matrix(&self) -> Vec<f64> {
        let n = self.n;
        let mut mat = vec![0f64; n * n];
        for (idx, v) in self.values.iter().enumerate() {
            let (i, j) = EdgeId::new_unchecked(idx).endpoints(n);
            mat[i * n + j] = v.re;
            mat[j * n + i] = v.re;
        }
        mat
    }
}

/// Per-vertex nonnegative weights b_i. Whether they actually certify
/// stability of a given interaction is checked by [`check_stability`];
/// this type only enforces b_i >= 0 and finiteness.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityCertificate {
    b: Vec<f64>,
}

impl StabilityCertificate {
    pub fn new(b: Vec<f64>) -> Result<Self> {
        for (index, &value) in b.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteWeight { index: index + 1 });
            }
            if value < 0.0 {
                return Err(Error::NegativeWeight {
                    index: index + 1,
                    value,
                });
            }
        }
        Ok(StabilityCertificate { b })
    }

    pub fn uniform(n: usize, level: f64) -> Result<Self> {
        StabilityCertificate::new(vec![level; n])
    }

    #[inline]
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Sum of all weights (the prefactor exponent in the tree bound).
    pub fn total(&self) -> f64 {
        let mut s = crate::sum::CompensatedSum::new();
        for &x in &self.b {
            s.add(x);
        }
        s.value()
    }
}

/// A subset on which the stability inequality fails.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityViolation {
    /// Vertex bitmask of the subset, lowest bit = vertex 0.
    pub subset_mask: u32,
    /// sum of u_{i,j} (real parts) over pairs inside the subset.
    pub pair_sum: f64,
    /// sum of b_i over the subset.
    pub b_sum: f64,
}

impl StabilityViolation {
    pub fn subset(&self) -> VertexSubset {
        let mut v = Vec::new();
        let mut bits = self.subset_mask;
        while bits != 0 {
            v.push(bits.trailing_zeros() as usize);
            bits &= bits - 1;
        }
        VertexSubset(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StabilityOutcome {
    Stable,
    Violated(StabilityViolation),
}

impl StabilityOutcome {
    pub fn is_stable(&self) -> bool {
        matches!(self, StabilityOutcome::Stable)
    }
}

/// Checks sum_{i<j in I} u_{i,j} >= -sum_{i in I} b_i for every subset I
/// (real parts in the complex case). Returns the first violating subset
/// in subset-integer order, if any. Scans all 2^n subsets; n <= 20.
pub fn check_stability(u: &Potential, b: &StabilityCertificate) -> Result<StabilityOutcome> {
    let n = u.n();
    if b.b().len() != n {
        return Err(Error::CertificateLength {
            n,
            got: b.b().len(),
        });
    }
    let mat = u.re_matrix();
    let size = 1usize << n;
    let mut pair_sum = vec![0f64; size];
    let mut b_sum = vec![0f64; size];
    for mask in 1..size {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        // Pairs inside `mask` split into pairs inside `rest` plus pairs
        // joining the new lowest vertex v to each vertex of `rest`.
        let mut s = pair_sum[rest];
        let mut bits = rest;
        while bits != 0 {
            let w = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            s += mat[v * n + w];
        }
        pair_sum[mask] = s;
        let bs = b_sum[rest] + b.b()[v];
        b_sum[mask] = bs;
        let slack = STABILITY_SLACK * (1.0 + s.abs() + bs.abs());
        if s < -bs - slack {
            return Ok(StabilityOutcome::Violated(StabilityViolation {
                subset_mask: mask as u32,
                pair_sum: s,
                b_sum: bs,
            }));
        }
    }
    Ok(StabilityOutcome::Stable)
}

/// The smallest uniform level B such that b_i = B for all i passes
/// [`check_stability`]: max(0, max over |I| >= 2 of -pair_sum(I)/|I|).
pub fn minimal_uniform_stability(u: &Potential) -> Result<f64> {
    let n = u.n();
    let mat = u.re_matrix();
    let size = 1usize << n;
    let mut pair_sum = vec![0f64; size];
    let mut best = 0f64;
    for mask in 1..size {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let mut s = pair_sum[rest];
        let mut bits = rest;
        while bits != 0 {
            let w = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            s += mat[v * n + w];
        }
        pair_sum[mask] = s;
        if rest != 0 {
            let level = -s / mask.count_ones() as f64;
            if level > best {
                best = level;
            }
        }
    }
    Ok(best)
}

/// Ranks the edges so that u (real case) or Re u (complex case) is
/// nondecreasing; ties broken by ascending edge index.
pub fn edge_order_from_potential(u: &Potential) -> Result<EdgeOrder> {
    let n = u.n();
    if n > MAX_GRAPH_VERTICES {
        return Err(Error::VertexCount {
            n,
            lo: 2,
            hi: MAX_GRAPH_VERTICES,
        });
    }
    let m = complete_edge_count(n);
    let mut ids: Vec<usize> = (0..m).collect();
    ids.sort_by(|&a, &b| {
        u.values()[a]
            .re
            .total_cmp(&u.values()[b].re)
            .then(a.cmp(&b))
    });
    let mut ranks = vec![0usize; m];
    for (r, &e) in ids.iter().enumerate() {
        ranks[e] = r;
    }
    EdgeOrder::from_ranks(n, &ranks)
}

#[inline]
pub fn negative_part(x: f64) -> f64 {
    (-x).max(0.0)
}

/// The factor pair (e^{(x)_-}, 1 - e^{-|x|}), whose product is
/// |e^{-x} - 1|. The second factor lies in [0, 1), which is what caps
/// each tree term in the bound; the first is the price paid for
/// negative edges and is later absorbed by stability.
#[inline]
pub fn trick_factorization(x: f64) -> (f64, f64) {
    (negative_part(x).exp(), -(-x.abs()).exp_m1())
}

/// A tree split along its negative edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestDecomposition {
    /// Tree edges with u < 0 (Re u < 0 in the complex case).
    pub t_minus: u128,
    /// Vertex sets of the connected components of (V, t_minus), in
    /// ascending order of minimum vertex; singletons included.
    pub subtrees: Vec<Vec<usize>>,
    /// Per component, the edge mask of the complete graph on its
    /// vertex set.
    pub complete_edge_sets: Vec<u128>,
}

/// Splits a tree into the forest of its strictly negative edges
/// (u = 0 edges are dropped) and the complete graphs spanned by the
/// resulting components.
pub fn forest_decomposition(t: &Tree, u: &Potential) -> Result<ForestDecomposition> {
    let n = t.n();
    if u.n() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: u.n(),
        });
    }
    let mut t_minus = 0u128;
    let mut uf = UnionFind::new(n);
    for e in t.edges() {
        if u.value(e).re < 0.0 {
            t_minus |= e.bit();
            let (i, j) = e.endpoints(n);
            uf.union(i, j);
        }
    }

    // Scanning vertices in ascending order makes components appear in
    // ascending order of their minimum vertex.
    let mut comp_of_root = [usize::MAX; MAX_GRAPH_VERTICES];
    let mut subtrees: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let root = uf.find(v);
        if comp_of_root[root] == usize::MAX {
            comp_of_root[root] = subtrees.len();
            subtrees.push(Vec::new());
        }
        subtrees[comp_of_root[root]].push(v);
    }

    let mut complete_edge_sets = Vec::with_capacity(subtrees.len());
    for vs in &subtrees {
        let mut mask = 0u128;
        for (a, &i) in vs.iter().enumerate() {
            for &j in &vs[a + 1..] {
                mask |= edge_index(i, j, n)?.bit();
            }
        }
        complete_edge_sets.push(mask);
    }

    Ok(ForestDecomposition {
        t_minus,
        subtrees,
        complete_edge_sets,
    })
}
