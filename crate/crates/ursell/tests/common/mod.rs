//! Shared helpers for the integration suites: the independent
//! connected-graph counting oracle and tolerance assertions.

/// Binomial coefficient, exact in u128 for the sizes used here.
pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut out: u128 = 1;
    for i in 0..k {
        out = out * (n - i) as u128 / (i + 1) as u128;
    }
    out
}

/// Number of connected labeled graphs on n vertices by the
/// inclusion-exclusion recurrence: subtract, over the component holding
/// vertex 1 at size k, connected choices times free graphs on the rest.
///
/// C(n) = 2^(n(n-1)/2) - sum_{k=1}^{n-1} C(k) * binom(n-1, k-1) * 2^((n-k)(n-k-1)/2)
pub fn connected_graph_count_recurrence(n: usize) -> u128 {
    let mut c = vec![0u128; n + 1];
    for s in 1..=n {
        let total = 1u128 << (s * (s - 1) / 2);
        // k is the size of the component containing vertex 1.
        let rest: u128 = (1..s)
            .map(|k| {
                let free = 1u128 << ((s - k) * (s - k - 1) / 2);
                c[k] * binom(s as u64 - 1, k as u64 - 1) * free
            })
            .sum();
        c[s] = total - rest;
    }
    c[n]
}

pub fn assert_rel_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!(
        (a - b).abs() <= tol * (1.0 + b.abs()),
        "{what}: {a} vs {b} differ beyond relative {tol}"
    );
}
