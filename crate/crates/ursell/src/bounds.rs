//! Both sides of the tree-graph bound.
//!
//! The left side is the connected-graph sum, computed two ways: directly
//! over all connected graphs (small n oracle) and resummed over spanning
//! trees, where each tree t carries its own factor times e^{-u} over the
//! attachable edges E(t). The resummation is an identity for any edge
//! order. The right side is the tree sum of (1 - e^{-|u|}) factors times
//! the stability prefactor e^{sum b_i}; its proof pivots on the key
//! inequality whose gap [`key_inequality_gap`] computes.

use crate::error::{Error, Result};
use crate::graph::{
    adjacency_of_mask, complete_edge_count, labeled_tree_count, mask_is_connected, EdgeId, Tree,
    TreeStream, MAX_ORACLE_VERTICES,
};
use crate::potential::{
    check_stability, forest_decomposition, minimal_uniform_stability, Complex64, Potential,
    PotentialKind, StabilityCertificate, StabilityOutcome,
};
use crate::scheme::{boundary_edges, EdgeOrder};
use crate::sum::{CompensatedSum, ComplexSum};
use crate::ExecMode;

/// Default relative tolerance for identity and bound comparisons.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

/// Absolute floor added to relative comparisons so near-zero bounds do
/// not fail on rounding noise.
pub const ABS_TOL_FLOOR: f64 = 1e-12;

/// Tree sums run up to here by default (n^{n-2} trees).
pub const MAX_TREE_SUM_VERTICES: usize = 9;

/// Hard ceiling for tree sums with [`EvalOptions::extended`] set.
pub const MAX_TREE_SUM_VERTICES_EXTENDED: usize = 12;

/// Number of chunks a parallel scan splits into. Fixed so parallel
/// results do not depend on the worker count.
const PARALLEL_CHUNKS: u64 = 64;

/// Knobs for bound evaluation and tree scans.
#[derive(Debug, Clone, Copy)]
pub struct EvalOptions {
    /// Relative tolerance used for the `satisfied` verdict.
    pub rel_tol: f64,
    /// Permit tree sums for n in 10..=12 (up to 12^10 trees; slow).
    pub extended: bool,
    pub mode: ExecMode,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            rel_tol: DEFAULT_REL_TOL,
            extended: false,
            mode: ExecMode::Sequential,
        }
    }
}

fn check_tree_capacity(n: usize, opts: &EvalOptions) -> Result<()> {
    let max = if opts.extended {
        MAX_TREE_SUM_VERTICES_EXTENDED
    } else {
        MAX_TREE_SUM_VERTICES
    };
    if n > max {
        return Err(Error::Capacity {
            what: if opts.extended {
                "tree sum"
            } else {
                "tree sum (extended mode raises the limit to 12)"
            },
            max,
            n,
        });
    }
    Ok(())
}

/// Per-edge factor tables, indexed by edge id.
struct EdgeTables {
    /// e^{-u} - 1
    diff: Vec<Complex64>,
    /// e^{-u}
    weight: Vec<Complex64>,
}

impl EdgeTables {
    fn new(u: &Potential) -> EdgeTables {
        let diff = u
            .values()
            .iter()
            .map(|v| {
                if v.im == 0.0 {
                    // expm1 keeps small-u edges accurate.
                    Complex64::new((-v.re).exp_m1(), 0.0)
                } else {
                    (-v).exp() - 1.0
                }
            })
            .collect();
        let weight = u.values().iter().map(|v| (-v).exp()).collect();
        EdgeTables { diff, weight }
    }
}

fn product_over_mask(table: &[Complex64], mut mask: u128) -> Complex64 {
    let mut p = Complex64::new(1.0, 0.0);
    while mask != 0 {
        let idx = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        p *= table[idx];
    }
    p
}

fn product_over_mask_real(table: &[f64], mut mask: u128) -> f64 {
    let mut p = 1.0;
    while mask != 0 {
        let idx = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        p *= table[idx];
    }
    p
}

/// The oracle: sum over every connected graph on n vertices of the
/// product of e^{-u_{ij}} - 1 over its edges. Terms accumulate in
/// ascending edge-bitmask order with compensated summation. n <= 7.
pub fn connected_sum_direct(u: &Potential, mode: ExecMode) -> Result<Complex64> {
    let n = u.n();
    if n > MAX_ORACLE_VERTICES {
        return Err(Error::Capacity {
            what: "direct connected-graph sum",
            max: MAX_ORACLE_VERTICES,
            n,
        });
    }
    let tables = EdgeTables::new(u);
    let end: u128 = 1u128 << complete_edge_count(n);

    let scan_range = |lo: u128, hi: u128| -> ComplexSum {
        let mut acc = ComplexSum::new();
        for mask in lo..hi {
            if mask_is_connected(n, &adjacency_of_mask(n, mask)) {
                acc.add(product_over_mask(&tables.diff, mask));
            }
        }
        acc
    };

    let total = match mode {
        ExecMode::Sequential => scan_range(0, end),
        ExecMode::Parallel => {
            use rayon::prelude::*;
            let chunks = PARALLEL_CHUNKS.min(end as u64);
            let parts: Vec<ComplexSum> = (0..chunks)
                .into_par_iter()
                .map(|k| {
                    let lo = end * k as u128 / chunks as u128;
                    let hi = end * (k + 1) as u128 / chunks as u128;
                    scan_range(lo, hi)
                })
                .collect();
            let mut acc = ComplexSum::new();
            for p in parts {
                acc.merge(p);
            }
            acc
        }
    };
    finite_complex(total.value())
}

/// Runs `per_tree` over every spanning tree and accumulates with
/// compensated summation, sequentially or in fixed chunks.
fn tree_scan<T, F>(n: usize, mode: ExecMode, per_tree: F) -> T::Acc
where
    T: ScanSum,
    F: Fn(&Tree) -> T + Sync,
{
    let total_trees = labeled_tree_count(n);
    match mode {
        ExecMode::Sequential => {
            let mut acc = T::Acc::default();
            for t in TreeStream::over_range(n, 0, total_trees) {
                T::add(&mut acc, per_tree(&t));
            }
            acc
        }
        ExecMode::Parallel => {
            use rayon::prelude::*;
            let chunks = PARALLEL_CHUNKS.min(total_trees);
            let parts: Vec<T::Acc> = (0..chunks)
                .into_par_iter()
                .map(|k| {
                    let lo = total_trees * k / chunks;
                    let hi = total_trees * (k + 1) / chunks;
                    let mut acc = T::Acc::default();
                    for t in TreeStream::over_range(n, lo, hi) {
                        T::add(&mut acc, per_tree(&t));
                    }
                    acc
                })
                .collect();
            let mut acc = T::Acc::default();
            for p in parts {
                T::merge(&mut acc, p);
            }
            acc
        }
    }
}

trait ScanSum: Send {
    type Acc: Default + Send;
    fn add(acc: &mut Self::Acc, term: Self);
    fn merge(acc: &mut Self::Acc, other: Self::Acc);
}

impl ScanSum for f64 {
    type Acc = CompensatedSum;
    fn add(acc: &mut CompensatedSum, term: f64) {
        acc.add(term);
    }
    fn merge(acc: &mut CompensatedSum, other: CompensatedSum) {
        acc.merge(other);
    }
}

impl ScanSum for Complex64 {
    type Acc = ComplexSum;
    fn add(acc: &mut ComplexSum, term: Complex64) {
        acc.add(term);
    }
    fn merge(acc: &mut ComplexSum, other: ComplexSum) {
        acc.merge(other);
    }
}

/// The connected-graph sum resummed over spanning trees: each tree
/// contributes its (e^{-u} - 1) edge product times e^{-u} over its
/// attachable edges E(t). Equals [`connected_sum_direct`] for every
/// edge order. n <= 9, or 12 with `extended`.
pub fn connected_sum_resummed(
    u: &Potential,
    order: &EdgeOrder,
    opts: &EvalOptions,
) -> Result<Complex64> {
    let n = u.n();
    order.check_matches(n)?;
    check_tree_capacity(n, opts)?;
    let tables = EdgeTables::new(u);
    let total = tree_scan::<Complex64, _>(n, opts.mode, |t| {
        let e_t = boundary_edges(t, order).expect("order matches");
        product_over_mask(&tables.diff, t.edge_mask()) * product_over_mask(&tables.weight, e_t)
    });
    finite_complex(total.value())
}

/// Errors with the violating subset unless `b` certifies stability.
pub fn ensure_stable(u: &Potential, b: &StabilityCertificate) -> Result<()> {
    match check_stability(u, b)? {
        StabilityOutcome::Stable => Ok(()),
        StabilityOutcome::Violated(v) => Err(Error::Unstable {
            subset: v.subset(),
            pair_sum: v.pair_sum,
            neg_b_sum: -v.b_sum,
        }),
    }
}

fn stability_prefactor(b: &StabilityCertificate) -> Result<f64> {
    finite_real(b.total().exp())
}

/// Improved-factor table: 1 - e^{-|u|} for real u, and
/// |1 - e^{-|Re u| + i Im u}| in the complex case.
fn improved_factors(u: &Potential) -> Vec<f64> {
    u.values()
        .iter()
        .map(|v| {
            if v.im == 0.0 {
                -(-v.re.abs()).exp_m1()
            } else {
                (1.0 - Complex64::new(-v.re.abs(), v.im).exp()).norm()
            }
        })
        .collect()
}

/// Comparator table: |1 - e^{-u}| with the sign of Re u kept.
fn naive_factors(u: &Potential) -> Vec<f64> {
    u.values()
        .iter()
        .map(|v| {
            if v.im == 0.0 {
                (-v.re).exp_m1().abs()
            } else {
                (1.0 - (-v).exp()).norm()
            }
        })
        .collect()
}

fn weighted_tree_sum(
    n: usize,
    factors: &[f64],
    prefactor: f64,
    opts: &EvalOptions,
) -> Result<f64> {
    check_tree_capacity(n, opts)?;
    let total = tree_scan::<f64, _>(n, opts.mode, |t| {
        product_over_mask_real(factors, t.edge_mask())
    });
    finite_real(prefactor * total.value())
}

/// Right side of the bound for real interactions:
/// e^{sum b_i} * sum over trees of prod (1 - e^{-|u_{ij}|}).
/// Errors when b fails to certify stability.
pub fn tree_bound_real(
    u: &Potential,
    b: &StabilityCertificate,
    opts: &EvalOptions,
) -> Result<f64> {
    if !u.is_real() {
        return Err(Error::ExpectedReal);
    }
    ensure_stable(u, b)?;
    weighted_tree_sum(u.n(), &improved_factors(u), stability_prefactor(b)?, opts)
}

/// Right side of the bound with the complex per-edge factor
/// |1 - e^{-|Re u| + i Im u}|; stability is required of the real parts.
/// On a real interaction this reduces to [`tree_bound_real`].
pub fn tree_bound_complex(
    u: &Potential,
    b: &StabilityCertificate,
    opts: &EvalOptions,
) -> Result<f64> {
    ensure_stable(u, b)?;
    weighted_tree_sum(u.n(), &improved_factors(u), stability_prefactor(b)?, opts)
}

/// The weaker comparator e^{sum b_i} * sum over trees of prod
/// |1 - e^{-u_{ij}}|. Needs no stability hypothesis; the improved bound
/// never exceeds it.
pub fn naive_tree_bound(
    u: &Potential,
    b: &StabilityCertificate,
    opts: &EvalOptions,
) -> Result<f64> {
    if b.b().len() != u.n() {
        return Err(Error::CertificateLength {
            n: u.n(),
            got: b.b().len(),
        });
    }
    weighted_tree_sum(u.n(), &naive_factors(u), stability_prefactor(b)?, opts)
}

/// Per-tree term of the majorant line: prod over tree edges of
/// |e^{-u} - 1| times prod over E(t) of e^{-u}. Real interactions only.
pub fn tree_majorant_term(t: &Tree, u: &Potential, order: &EdgeOrder) -> Result<f64> {
    if !u.is_real() {
        return Err(Error::ExpectedReal);
    }
    check_tree_input(t, u, order)?;
    let e_t = boundary_edges(t, order)?;
    let mut p = 1.0f64;
    for e in t.edges() {
        p *= (-u.value(e).re).exp_m1().abs();
    }
    for e in mask_edges(e_t) {
        p *= (-u.value(e).re).exp();
    }
    finite_real(p)
}

/// The same term after the per-edge factorization: prod over tree edges
/// of (1 - e^{-|u|}) times exp{-sum_{t_-} u - sum_{E(t)} u}. Agrees with
/// [`tree_majorant_term`] to rounding.
pub fn tree_majorant_term_factored(t: &Tree, u: &Potential, order: &EdgeOrder) -> Result<f64> {
    if !u.is_real() {
        return Err(Error::ExpectedReal);
    }
    check_tree_input(t, u, order)?;
    let e_t = boundary_edges(t, order)?;
    let mut p = 1.0f64;
    for e in t.edges() {
        p *= -(-u.value(e).re.abs()).exp_m1();
    }
    let mut exponent = CompensatedSum::new();
    for e in t.edges() {
        let v = u.value(e).re;
        if v < 0.0 {
            exponent.add(-v);
        }
    }
    for e in mask_edges(e_t) {
        exponent.add(-u.value(e).re);
    }
    finite_real(p * exponent.value().exp())
}

fn check_tree_input(t: &Tree, u: &Potential, order: &EdgeOrder) -> Result<()> {
    if t.n() != u.n() {
        return Err(Error::DimensionMismatch {
            left: t.n(),
            right: u.n(),
        });
    }
    order.check_matches(t.n())
}

fn mask_edges(mask: u128) -> impl Iterator<Item = EdgeId> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let idx = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(EdgeId::new_unchecked(idx))
        }
    })
}

/// The key inequality's slack for one tree, using real parts throughout:
/// (sum of u over t_- plus sum over E(t)) minus (sum over the complete
/// graphs on the negative-edge components). Nonnegative whenever the
/// order is u-nondecreasing; the caller is responsible for passing such
/// an order.
pub fn key_inequality_gap(t: &Tree, u: &Potential, order: &EdgeOrder) -> Result<f64> {
    check_tree_input(t, u, order)?;
    let e_t = boundary_edges(t, order)?;
    let decomp = forest_decomposition(t, u)?;
    let mut gap = CompensatedSum::new();
    for e in mask_edges(decomp.t_minus) {
        gap.add(u.value(e).re);
    }
    for e in mask_edges(e_t) {
        gap.add(u.value(e).re);
    }
    for &k in &decomp.complete_edge_sets {
        for e in mask_edges(k) {
            gap.add(-u.value(e).re);
        }
    }
    finite_real(gap.value())
}

fn finite_real(x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFiniteResult)
    }
}

fn finite_complex(z: Complex64) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFiniteResult)
    }
}

/// Everything the bound evaluation produces for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub kind: PotentialKind,
    /// The signed/complex connected-graph sum; only for n <= 7 where the
    /// oracle is affordable.
    pub lhs: Option<Complex64>,
    pub lhs_magnitude: Option<f64>,
    /// e^{sum b} * tree sum with the improved factors.
    pub rhs_improved: f64,
    /// e^{sum b} * tree sum with |1 - e^{-u}| factors.
    pub rhs_naive: f64,
    /// e^{sum b_i}.
    pub stability_prefactor: f64,
    pub tree_count: u64,
    /// lhs_magnitude <= rhs_improved within tolerance; vacuously true
    /// when the oracle side is out of reach.
    pub satisfied: bool,
    pub rel_tol: f64,
    /// The certificate used (supplied or auto-derived).
    pub b: Vec<f64>,
}

/// Evaluates both sides of the bound. With `b = None` the minimal
/// uniform certificate is derived from the interaction; a supplied
/// certificate is checked, and instability is an error either way.
pub fn evaluate_bound(
    u: &Potential,
    b: Option<&StabilityCertificate>,
    opts: &EvalOptions,
) -> Result<BoundReport> {
    let n = u.n();
    check_tree_capacity(n, opts)?;

    let cert = match b {
        Some(c) => c.clone(),
        None => StabilityCertificate::uniform(n, minimal_uniform_stability(u)?)?,
    };
    ensure_stable(u, &cert)?;

    let prefactor = stability_prefactor(&cert)?;
    let rhs_improved = weighted_tree_sum(n, &improved_factors(u), prefactor, opts)?;
    let rhs_naive = weighted_tree_sum(n, &naive_factors(u), prefactor, opts)?;

    let lhs = if n <= MAX_ORACLE_VERTICES {
        Some(connected_sum_direct(u, opts.mode)?)
    } else {
        None
    };
    let lhs_magnitude = lhs.map(|z| z.norm());
    let satisfied = match lhs_magnitude {
        Some(mag) => mag <= rhs_improved * (1.0 + opts.rel_tol) + ABS_TOL_FLOOR,
        None => true,
    };

    Ok(BoundReport {
        n,
        kind: u.kind(),
        lhs,
        lhs_magnitude,
        rhs_improved,
        rhs_naive,
        stability_prefactor: prefactor,
        tree_count: labeled_tree_count(n),
        satisfied,
        rel_tol: opts.rel_tol,
        b: cert.b().to_vec(),
    })
}
