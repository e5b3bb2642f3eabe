//! Command-line driver: verification and evaluation commands over
//! instance files, JSON reports on stdout, human summaries on stderr.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 input error,
//! 3 capacity exceeded.

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::time::Instant;
use ursell::bounds::ABS_TOL_FLOOR;
use ursell::graph::labeled_tree_count;
use ursell::instance::RNG_NAME;
use ursell::report::{error_object, instance_digest, Check, Report};
use ursell::{
    check_stability, connected_sum_direct, connected_sum_resummed, edge_order_from_potential,
    emit_instance, enumerate_trees, evaluate_bound, key_inequality_gap, minimal_uniform_stability,
    naive_tree_bound, parse_instance, tree_bound_complex, tree_bound_real, verify_partition,
    BoundReport, Distribution, EdgeOrder, Error, EvalOptions, ExecMode, Instance, Potential,
    PotentialKind, Result, StabilityCertificate, StabilityOutcome, DEFAULT_REL_TOL,
};

/// Most negative key-inequality gap tolerated before a check fails.
/// Fixed (not `--tol`): the inequality is exact, the slack only covers
/// summation rounding.
const KEY_GAP_SLACK: f64 = 1e-12;

/// Key-inequality scans enumerate every tree per trial; past n = 9 the
/// n^{n-2} trees are out of reach.
const MAX_KEY_SCAN_VERTICES: usize = 9;

#[derive(Parser)]
#[command(
    name = "ursell",
    version,
    about = "Tree-graph bounds for connected-graph sums: verification and evaluation",
    after_help = "Exit codes: 0 pass, 1 check failed, 2 input error, 3 capacity exceeded."
)]
struct Cli {
    /// Relative tolerance for identity and bound comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_REL_TOL, allow_hyphen_values = true)]
    tol: f64,

    /// Run enumeration scans on a thread pool (fixed chunk split; results
    /// are reproducible but may differ from sequential within tolerance).
    #[arg(long, global = true)]
    parallel: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exhaustively verify the Kruskal interval partition of connected
    /// graphs (n <= 6) and its counting identity.
    VerifyScheme {
        #[arg(long)]
        n: usize,
        /// Edge order to verify under.
        #[arg(long, value_enum, default_value_t = OrderKind::Lex)]
        order: OrderKind,
        /// Seed for the random order (ignored for lex).
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check that the tree resummation reproduces the direct
    /// connected-graph sum on random instances (n <= 7).
    VerifyIdentity {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Uniform range for the sampled entries.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"],
              default_values_t = [-2.0, 3.0], allow_negative_numbers = true)]
        range: Vec<f64>,
        /// Random edge orders tested per trial, on top of the
        /// value-nondecreasing order.
        #[arg(long, default_value_t = 1)]
        orders: u64,
    },
    /// Scan the key inequality's gap over every tree of random
    /// instances; it must never go below -1e-12 (n <= 9).
    VerifyKey {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample complex entries (Re uniform [-1, 1], Im uniform
        /// [-pi, pi]) instead of real uniform [-2, 3].
        #[arg(long)]
        complex: bool,
    },
    /// Evaluate both sides of the bound for an instance file.
    Bound {
        #[arg(long)]
        instance: String,
        /// Stability weights: "auto" for the minimal uniform level, or a
        /// path to a JSON array of n nonnegative reals. Default: the
        /// instance's embedded "b" if present, else auto.
        #[arg(long)]
        b: Option<String>,
        /// Treat a real instance as complex (same values, complex rules).
        #[arg(long)]
        complex: bool,
        /// Allow tree sums for n in 10..=12 (slow).
        #[arg(long)]
        extended: bool,
    },
    /// Compute the minimal uniform stability level, and check a
    /// certificate if one is supplied or embedded.
    Stability {
        #[arg(long)]
        instance: String,
        /// Path to a JSON array of n nonnegative reals.
        #[arg(long)]
        b: Option<String>,
    },
    /// Compare the improved bound against the naive comparator.
    Compare {
        #[arg(long)]
        instance: String,
        /// Allow tree sums for n in 10..=12 (slow).
        #[arg(long)]
        extended: bool,
    },
    /// Write a random instance file for a seeded distribution.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        dist: DistKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path for the instance JSON.
        #[arg(long)]
        out: String,
        /// Uniform range (dist = uniform).
        #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
        lo: f64,
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        hi: f64,
        /// Gaussian parameters (dist = gaussian).
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        /// Real-part range (dist = complex-uniform).
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        re_lo: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        re_hi: f64,
        /// Imaginary-part range (dist = complex-uniform).
        #[arg(long, default_value_t = -std::f64::consts::PI, allow_negative_numbers = true)]
        im_lo: f64,
        #[arg(long, default_value_t = std::f64::consts::PI, allow_negative_numbers = true)]
        im_hi: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderKind {
    Lex,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DistKind {
    Uniform,
    Gaussian,
    ComplexUniform,
}

fn main() {
    let cli = Cli::parse();
    let mode = if cli.parallel {
        ExecMode::Parallel
    } else {
        ExecMode::Sequential
    };

    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        let message = format!("--tol must be a positive finite number, got {}", cli.tol);
        println!("{}", error_object("input", 2, &message));
        eprintln!("error: {message}");
        std::process::exit(2);
    }

    let started = Instant::now();
    let outcome = run(cli.command, cli.tol, mode);
    match outcome {
        Ok(mut report) => {
            report.mode = mode;
            report.runtime_seconds = started.elapsed().as_secs_f64();
            println!("{}", report.to_json());
            let code = if report.pass() { 0 } else { 1 };
            std::process::exit(code);
        }
        Err(e) => {
            let code = if e.is_capacity() { 3 } else { 2 };
            println!("{}", error_object(e.kind(), code, &e.to_string()));
            eprintln!("error: {e}");
            std::process::exit(code);
        }
    }
}

fn run(command: Command, tol: f64, mode: ExecMode) -> Result<Report> {
    match command {
        Command::VerifyScheme { n, order, seed } => verify_scheme(n, order, seed, mode),
        Command::VerifyIdentity {
            n,
            trials,
            seed,
            range,
            orders,
        } => verify_identity(n, trials, seed, &range, orders, tol, mode),
        Command::VerifyKey {
            n,
            trials,
            seed,
            complex,
        } => verify_key(n, trials, seed, complex, mode),
        Command::Bound {
            instance,
            b,
            complex,
            extended,
        } => bound_command(&instance, b.as_deref(), complex, extended, tol, mode),
        Command::Stability { instance, b } => stability_command(&instance, b.as_deref(), mode),
        Command::Compare { instance, extended } => {
            compare_command(&instance, extended, tol, mode)
        }
        Command::Generate {
            n,
            dist,
            seed,
            out,
            lo,
            hi,
            mu,
            sigma,
            re_lo,
            re_hi,
            im_lo,
            im_hi,
        } => {
            let dist = match dist {
                DistKind::Uniform => Distribution::Uniform { lo, hi },
                DistKind::Gaussian => Distribution::Gaussian { mu, sigma },
                DistKind::ComplexUniform => Distribution::ComplexUniform {
                    re: (re_lo, re_hi),
                    im: (im_lo, im_hi),
                },
            };
            generate_command(n, &dist, seed, &out)
        }
    }
}

fn blank_report(command: &'static str, params: Value) -> Report {
    Report {
        command,
        params,
        mode: ExecMode::Sequential,
        rng: None,
        instance_digest: None,
        checks: Vec::new(),
        result: None,
        runtime_seconds: 0.0,
    }
}

fn pass_tag(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn one_indexed_pairs(pairs: &[(usize, usize)]) -> Value {
    Value::Array(
        pairs
            .iter()
            .map(|&(i, j)| json!([i + 1, j + 1]))
            .collect(),
    )
}

fn verify_scheme(n: usize, order_kind: OrderKind, seed: u64, mode: ExecMode) -> Result<Report> {
    let (order, order_name) = match order_kind {
        OrderKind::Lex => (EdgeOrder::lexicographic(n)?, "lex"),
        OrderKind::Random => (EdgeOrder::random(n, seed)?, "random"),
    };
    let partition = verify_partition(n, &order, mode)?;

    let counterexample = partition.counterexample.as_ref().map(|ce| {
        let mut v = json!({
            "graph": one_indexed_pairs(&ce.graph),
            "mapped_tree": one_indexed_pairs(&ce.mapped_tree),
        });
        if let Some(expected) = &ce.expected_tree {
            v["expected_tree"] = one_indexed_pairs(expected);
        }
        v
    });

    let mut report = blank_report(
        "verify-scheme",
        json!({ "n": n, "order": order_name, "seed": seed }),
    );
    if order_kind == OrderKind::Random {
        report.rng = Some((RNG_NAME, seed));
    }
    report.checks.push(Check {
        name: "interval-partition",
        pass: partition.pass(),
        tolerance: None,
        values: json!({
            "connected_count": partition.connected_count,
            "tree_count": partition.tree_count,
            "interval_size_sum": partition.interval_size_sum,
            "cover_ok": partition.cover_ok,
            "fibers_ok": partition.fibers_ok,
            "counting_ok": partition.counting_ok,
        }),
        counterexample,
    });
    eprintln!(
        "{} verify-scheme: n={n}, order={order_name}: {} connected graphs across {} tree intervals (interval sizes sum to {})",
        pass_tag(report.pass()),
        partition.connected_count,
        partition.tree_count,
        partition.interval_size_sum,
    );
    Ok(report)
}

fn verify_identity(
    n: usize,
    trials: u64,
    seed: u64,
    range: &[f64],
    random_orders: u64,
    tol: f64,
    mode: ExecMode,
) -> Result<Report> {
    let (lo, hi) = (range[0], range[1]);
    let dist = Distribution::Uniform { lo, hi };
    let opts = EvalOptions {
        rel_tol: tol,
        extended: false,
        mode,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut max_rel = 0.0f64;
    let mut counterexample = None;
    'trials: for trial in 0..trials {
        let u = dist.sample_potential(n, &mut rng)?;
        let direct = connected_sum_direct(&u, mode)?;
        let mut orders = vec![("nondecreasing", 0u64, edge_order_from_potential(&u)?)];
        for _ in 0..random_orders {
            let order_seed: u64 = rng.random();
            orders.push(("random", order_seed, EdgeOrder::random(n, order_seed)?));
        }
        for (order_name, order_seed, order) in &orders {
            let resummed = connected_sum_resummed(&u, order, &opts)?;
            let rel = (resummed - direct).norm() / (1.0 + direct.norm());
            if rel > max_rel {
                max_rel = rel;
            }
            if rel > tol {
                counterexample = Some(json!({
                    "trial": trial,
                    "order": order_name,
                    "order_seed": order_seed,
                    "direct": { "re": direct.re, "im": direct.im },
                    "resummed": { "re": resummed.re, "im": resummed.im },
                    "relative_error": rel,
                }));
                break 'trials;
            }
        }
    }

    let mut report = blank_report(
        "verify-identity",
        json!({
            "n": n, "trials": trials, "seed": seed,
            "range": [lo, hi], "random_orders_per_trial": random_orders,
        }),
    );
    report.rng = Some((RNG_NAME, seed));
    report.checks.push(Check {
        name: "resummation-identity",
        pass: counterexample.is_none(),
        tolerance: Some(tol),
        values: json!({
            "trials": trials,
            "orders_per_trial": 1 + random_orders,
            "max_relative_error": max_rel,
        }),
        counterexample,
    });
    eprintln!(
        "{} verify-identity: n={n}, max relative deviation {max_rel:.3e} over {trials} trials x {} orders",
        pass_tag(report.pass()),
        1 + random_orders,
    );
    Ok(report)
}

// The tree-by-tree gap scan stays sequential even under --parallel: it
// short-circuits on the first failure and its cost is dominated by the
// per-tree decomposition, which does not chunk cleanly.
fn verify_key(n: usize, trials: u64, seed: u64, complex: bool, _mode: ExecMode) -> Result<Report> {
    if n > MAX_KEY_SCAN_VERTICES {
        return Err(Error::Capacity {
            what: "key-inequality scan",
            max: MAX_KEY_SCAN_VERTICES,
            n,
        });
    }
    let dist = if complex {
        Distribution::ComplexUniform {
            re: (-1.0, 1.0),
            im: (-std::f64::consts::PI, std::f64::consts::PI),
        }
    } else {
        Distribution::Uniform { lo: -2.0, hi: 3.0 }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut min_gap = f64::INFINITY;
    let mut counterexample = None;
    'trials: for trial in 0..trials {
        let u = dist.sample_potential(n, &mut rng)?;
        let order = edge_order_from_potential(&u)?;
        for t in enumerate_trees(n)? {
            let gap = key_inequality_gap(&t, &u, &order)?;
            if gap < min_gap {
                min_gap = gap;
            }
            if gap < -KEY_GAP_SLACK {
                let edges: Vec<(usize, usize)> = t.edges().map(|e| e.endpoints(n)).collect();
                counterexample = Some(json!({
                    "trial": trial,
                    "tree": one_indexed_pairs(&edges),
                    "gap": gap,
                }));
                break 'trials;
            }
        }
    }

    let mut report = blank_report(
        "verify-key",
        json!({ "n": n, "trials": trials, "seed": seed, "complex": complex }),
    );
    report.rng = Some((RNG_NAME, seed));
    report.checks.push(Check {
        name: "key-inequality",
        pass: counterexample.is_none(),
        tolerance: Some(KEY_GAP_SLACK),
        values: json!({
            "trials": trials,
            "trees_per_trial": labeled_tree_count(n),
            "min_gap": min_gap,
        }),
        counterexample,
    });
    eprintln!(
        "{} verify-key: n={n}, minimum gap {min_gap:.3e} over {trials} trials x {} trees",
        pass_tag(report.pass()),
        labeled_tree_count(n),
    );
    Ok(report)
}

/// Loads a certificate from a JSON file holding an array of n reals.
fn certificate_from_file(path: &str, n: usize) -> Result<StabilityCertificate> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_string(),
        message: e.to_string(),
    })?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Malformed(format!("invalid JSON in {path}: {e}")))?;
    let arr = value
        .as_array()
        .ok_or_else(|| Error::Malformed(format!("{path} must hold a JSON array of reals")))?;
    let mut b = Vec::with_capacity(arr.len());
    for (k, x) in arr.iter().enumerate() {
        b.push(x.as_f64().ok_or_else(|| {
            Error::Malformed(format!("{path}: element {} is not a number", k + 1))
        })?);
    }
    if b.len() != n {
        return Err(Error::CertificateLength { n, got: b.len() });
    }
    StabilityCertificate::new(b)
}

/// Resolves the certificate for `bound`: explicit flag beats the
/// instance's embedded weights, which beat auto-derivation.
fn resolve_certificate(
    flag: Option<&str>,
    instance: &Instance,
) -> Result<(Option<StabilityCertificate>, &'static str)> {
    match flag {
        Some("auto") => Ok((None, "auto")),
        Some(path) => Ok((
            Some(certificate_from_file(path, instance.potential.n())?),
            "flag",
        )),
        None => match &instance.certificate {
            Some(cert) => Ok((Some(cert.clone()), "embedded")),
            None => Ok((None, "auto")),
        },
    }
}

fn kind_str(kind: PotentialKind) -> &'static str {
    match kind {
        PotentialKind::Real => "real",
        PotentialKind::Complex => "complex",
    }
}

fn bound_result_value(r: &BoundReport) -> Value {
    json!({
        "n": r.n,
        "kind": kind_str(r.kind),
        "lhs": r.lhs.map(|z| json!({ "re": z.re, "im": z.im })).unwrap_or(Value::Null),
        "lhs_magnitude": r.lhs_magnitude.map(Value::from).unwrap_or(Value::Null),
        "rhs_improved": r.rhs_improved,
        "rhs_naive": r.rhs_naive,
        "stability_prefactor": r.stability_prefactor,
        "tree_count": r.tree_count,
        "satisfied": r.satisfied,
        "rel_tol": r.rel_tol,
        "b": r.b,
    })
}

fn bound_command(
    path: &str,
    b_flag: Option<&str>,
    complex: bool,
    extended: bool,
    tol: f64,
    mode: ExecMode,
) -> Result<Report> {
    let mut inst = parse_instance(path)?;
    if complex && inst.potential.is_real() {
        let values = inst.potential.values().to_vec();
        inst.potential = Potential::new_complex(inst.potential.n(), &values)?;
    }
    let digest = instance_digest(&emit_instance(&inst));
    let (cert, b_source) = resolve_certificate(b_flag, &inst)?;
    let opts = EvalOptions {
        rel_tol: tol,
        extended,
        mode,
    };
    let bound = evaluate_bound(&inst.potential, cert.as_ref(), &opts)?;

    let mut report = blank_report(
        "bound",
        json!({
            "instance": path,
            "b_source": b_source,
            "complex": complex,
            "extended": extended,
        }),
    );
    report.instance_digest = Some(digest);
    report.result = Some(bound_result_value(&bound));
    report.checks.push(Check {
        name: "bound-satisfied",
        pass: bound.satisfied,
        tolerance: Some(tol),
        values: match bound.lhs_magnitude {
            Some(mag) => json!({
                "lhs_magnitude": mag,
                "rhs_improved": bound.rhs_improved,
            }),
            None => json!({
                "rhs_improved": bound.rhs_improved,
                "note": "oracle side unavailable past n = 7; bound reported, nothing compared",
            }),
        },
        counterexample: None,
    });
    match bound.lhs_magnitude {
        Some(mag) => eprintln!(
            "{} bound: n={}, |lhs| {:.6e} <= rhs {:.6e} ({} b, prefactor {:.6e})",
            pass_tag(report.pass()),
            bound.n,
            mag,
            bound.rhs_improved,
            b_source,
            bound.stability_prefactor,
        ),
        None => eprintln!(
            "{} bound: n={}, rhs {:.6e} ({} b; lhs oracle unavailable past n = 7)",
            pass_tag(report.pass()),
            bound.n,
            bound.rhs_improved,
            b_source,
        ),
    }
    Ok(report)
}

fn stability_command(path: &str, b_flag: Option<&str>, _mode: ExecMode) -> Result<Report> {
    let inst = parse_instance(path)?;
    let n = inst.potential.n();
    let digest = instance_digest(&emit_instance(&inst));
    let level = minimal_uniform_stability(&inst.potential)?;

    let mut report = blank_report(
        "stability",
        json!({ "instance": path, "b_supplied": b_flag.is_some() }),
    );
    report.instance_digest = Some(digest);
    report.result = Some(json!({ "n": n, "minimal_uniform_b": level }));

    // The derived level must certify itself; anything else is a bug.
    let self_check = check_stability(
        &inst.potential,
        &StabilityCertificate::uniform(n, level)?,
    )?;
    report.checks.push(Check {
        name: "minimal-uniform-certifies",
        pass: self_check.is_stable(),
        tolerance: None,
        values: json!({ "minimal_uniform_b": level }),
        counterexample: None,
    });

    let cert = match b_flag {
        Some(path) => Some(certificate_from_file(path, n)?),
        None => inst.certificate.clone(),
    };
    if let Some(cert) = cert {
        let outcome = check_stability(&inst.potential, &cert)?;
        let (pass, counterexample) = match &outcome {
            StabilityOutcome::Stable => (true, None),
            StabilityOutcome::Violated(v) => (
                false,
                Some(json!({
                    "subset": v.subset().0.iter().map(|i| i + 1).collect::<Vec<_>>(),
                    "pair_sum": v.pair_sum,
                    "b_sum": v.b_sum,
                })),
            ),
        };
        report.checks.push(Check {
            name: "stability-certificate",
            pass,
            tolerance: None,
            values: json!({ "b": cert.b(), "b_total": cert.total() }),
            counterexample,
        });
    }

    eprintln!(
        "{} stability: n={n}, minimal uniform B = {level:.6e}",
        pass_tag(report.pass()),
    );
    Ok(report)
}

fn compare_command(path: &str, extended: bool, tol: f64, mode: ExecMode) -> Result<Report> {
    let inst = parse_instance(path)?;
    let n = inst.potential.n();
    let digest = instance_digest(&emit_instance(&inst));
    let cert = match &inst.certificate {
        Some(c) => c.clone(),
        None => StabilityCertificate::uniform(n, minimal_uniform_stability(&inst.potential)?)?,
    };
    let opts = EvalOptions {
        rel_tol: tol,
        extended,
        mode,
    };
    let improved = if inst.potential.is_real() {
        tree_bound_real(&inst.potential, &cert, &opts)?
    } else {
        tree_bound_complex(&inst.potential, &cert, &opts)?
    };
    let naive = naive_tree_bound(&inst.potential, &cert, &opts)?;
    let ratio = if naive > 0.0 { improved / naive } else { 1.0 };

    let mut report = blank_report("compare", json!({ "instance": path, "extended": extended }));
    report.instance_digest = Some(digest);
    report.result = Some(json!({
        "n": n,
        "kind": kind_str(inst.potential.kind()),
        "rhs_improved": improved,
        "rhs_naive": naive,
        "ratio": ratio,
        "b": cert.b(),
    }));
    report.checks.push(Check {
        name: "improved-not-larger",
        pass: improved <= naive * (1.0 + tol) + ABS_TOL_FLOOR,
        tolerance: Some(tol),
        values: json!({ "rhs_improved": improved, "rhs_naive": naive, "ratio": ratio }),
        counterexample: None,
    });
    eprintln!(
        "{} compare: n={n}, improved {improved:.6e} <= naive {naive:.6e} (ratio {ratio:.6})",
        pass_tag(report.pass()),
    );
    Ok(report)
}

fn generate_command(n: usize, dist: &Distribution, seed: u64, out: &str) -> Result<Report> {
    let potential = ursell::generate_instance(n, dist, seed)?;
    let kind = potential.kind();
    let entries = potential.values().len();
    let inst = Instance {
        potential,
        certificate: None,
    };
    let text = emit_instance(&inst);
    std::fs::write(out, &text).map_err(|e| Error::Io {
        path: out.to_string(),
        message: e.to_string(),
    })?;

    let dist_echo = match *dist {
        Distribution::Uniform { lo, hi } => json!({ "name": "uniform", "lo": lo, "hi": hi }),
        Distribution::Gaussian { mu, sigma } => {
            json!({ "name": "gaussian", "mu": mu, "sigma": sigma })
        }
        Distribution::ComplexUniform { re, im } => json!({
            "name": "complex-uniform",
            "re": [re.0, re.1],
            "im": [im.0, im.1],
        }),
    };
    let mut report = blank_report(
        "generate",
        json!({ "n": n, "dist": dist_echo, "seed": seed, "out": out }),
    );
    report.rng = Some((RNG_NAME, seed));
    report.instance_digest = Some(instance_digest(&text));
    report.result = Some(json!({
        "path": out,
        "n": n,
        "kind": kind_str(kind),
        "entries": entries,
    }));
    eprintln!(
        "PASS generate: wrote {out} (n={n}, {}, {entries} entries)",
        kind_str(kind),
    );
    Ok(report)
}
