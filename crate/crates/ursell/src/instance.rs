//! Instance file I/O and random instance generation.
//!
//! An instance is a JSON object: `n`, `entries` (one `[i, j, re]` or
//! `[i, j, re, im]` per unordered pair, vertices 1-indexed), and an
//! optional `b` array of n nonnegative stability weights. An instance is
//! complex iff any entry carries a fourth element; emitting preserves
//! that, so parse/emit round-trips keep the kind.

use crate::error::{Error, Result};
use crate::graph::{complete_edge_count, edge_index, EdgeId};
use crate::potential::{Complex64, Potential, StabilityCertificate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Name of the generator echoed in reports next to the seed.
pub const RNG_NAME: &str = "chacha8";

/// A parsed instance: the interaction plus the optional certificate
/// carried in the file.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub potential: Potential,
    pub certificate: Option<StabilityCertificate>,
}

pub fn parse_instance(path: &str) -> Result<Instance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_string(),
        message: e.to_string(),
    })?;
    parse_instance_str(&text)
}

pub fn parse_instance_str(text: &str) -> Result<Instance> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| Error::Malformed(format!("invalid JSON: {e}")))?;
    let obj = root
        .as_object()
        .ok_or_else(|| Error::Malformed("top level must be a JSON object".into()))?;

    for key in obj.keys() {
        if !matches!(key.as_str(), "n" | "entries" | "b") {
            return Err(Error::Malformed(format!("unknown field \"{key}\"")));
        }
    }

    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Malformed("field \"n\" must be a positive integer".into()))?
        as usize;
    if !(2..=crate::potential::MAX_POTENTIAL_VERTICES).contains(&n) {
        return Err(Error::VertexCount {
            n,
            lo: 2,
            hi: crate::potential::MAX_POTENTIAL_VERTICES,
        });
    }

    let entries = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Malformed("field \"entries\" must be an array".into()))?;

    let m = complete_edge_count(n);
    let mut values = vec![None; m];
    let mut complex = false;
    for (k, entry) in entries.iter().enumerate() {
        let index = k + 1;
        let parts = entry.as_array().ok_or(Error::EntryShape { index })?;
        if !(3..=4).contains(&parts.len()) {
            return Err(Error::EntryShape { index });
        }
        let i = vertex_of(&parts[0]).ok_or(Error::EntryVertex { index })?;
        let j = vertex_of(&parts[1]).ok_or(Error::EntryVertex { index })?;
        if i == j {
            return Err(Error::SelfPair { i });
        }
        if i < 1 || i > n || j < 1 || j > n {
            return Err(Error::PairRange { i, j, n });
        }
        let re = parts[2]
            .as_f64()
            .ok_or_else(|| Error::Malformed(format!("entry {index}: value is not a number")))?;
        let im = match parts.get(3) {
            Some(v) => {
                complex = true;
                v.as_f64().ok_or_else(|| {
                    Error::Malformed(format!("entry {index}: imaginary part is not a number"))
                })?
            }
            None => 0.0,
        };
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::NonFiniteValue { i, j });
        }
        let e = edge_index(i - 1, j - 1, n)?;
        if values[e.index()].is_some() {
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            return Err(Error::DuplicatePair { i: lo, j: hi });
        }
        values[e.index()] = Some(Complex64::new(re, im));
    }
    if let Some(idx) = values.iter().position(|v| v.is_none()) {
        let (i, j) = EdgeId::new_unchecked(idx).endpoints(n);
        return Err(Error::MissingPair { i: i + 1, j: j + 1 });
    }
    let values: Vec<Complex64> = values.into_iter().map(|v| v.unwrap()).collect();
    let potential = if complex {
        Potential::new_complex(n, &values)?
    } else {
        let re: Vec<f64> = values.iter().map(|v| v.re).collect();
        Potential::new_real(n, &re)?
    };

    let certificate = match obj.get("b") {
        None => None,
        Some(v) => {
            let arr = v
                .as_array()
                .ok_or_else(|| Error::Malformed("field \"b\" must be an array".into()))?;
            let mut b = Vec::with_capacity(arr.len());
            for (k, x) in arr.iter().enumerate() {
                let x = x.as_f64().ok_or_else(|| {
                    Error::Malformed(format!("b[{}] is not a number", k + 1))
                })?;
                b.push(x);
            }
            if b.len() != n {
                return Err(Error::CertificateLength { n, got: b.len() });
            }
            Some(StabilityCertificate::new(b)?)
        }
    };

    Ok(Instance {
        potential,
        certificate,
    })
}

/// Canonical JSON for an instance: entries in edge-index order, the
/// imaginary column present exactly when the kind is complex.
pub fn emit_instance(instance: &Instance) -> String {
    let u = &instance.potential;
    let n = u.n();
    let complex = !u.is_real();
    let entries: Vec<Value> = u
        .values()
        .iter()
        .enumerate()
        .map(|(idx, v)| {
            let (i, j) = EdgeId::new_unchecked(idx).endpoints(n);
            if complex {
                json!([i + 1, j + 1, v.re, v.im])
            } else {
                json!([i + 1, j + 1, v.re])
            }
        })
        .collect();
    let mut root = json!({ "n": n, "entries": entries });
    if let Some(cert) = &instance.certificate {
        root["b"] = json!(cert.b());
    }
    serde_json::to_string_pretty(&root).expect("instance values are finite")
}

fn vertex_of(v: &Value) -> Option<usize> {
    let x = v.as_u64()?;
    if x >= 1 && v.as_f64() == Some(x as f64) {
        Some(x as usize)
    } else {
        None
    }
}

/// Entry distribution for generated instances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distribution {
    Uniform { lo: f64, hi: f64 },
    Gaussian { mu: f64, sigma: f64 },
    ComplexUniform { re: (f64, f64), im: (f64, f64) },
}

impl Distribution {
    fn validate(&self) -> Result<()> {
        let ordered = |lo: f64, hi: f64, what: &str| -> Result<()> {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(Error::Distribution(format!(
                    "{what} range must be finite with lo < hi, got [{lo}, {hi}]"
                )));
            }
            Ok(())
        };
        match *self {
            Distribution::Uniform { lo, hi } => ordered(lo, hi, "uniform"),
            Distribution::Gaussian { mu, sigma } => {
                if !mu.is_finite() || !sigma.is_finite() || sigma <= 0.0 {
                    return Err(Error::Distribution(format!(
                        "gaussian needs finite mu and sigma > 0, got mu = {mu}, sigma = {sigma}"
                    )));
                }
                Ok(())
            }
            Distribution::ComplexUniform { re, im } => {
                ordered(re.0, re.1, "real-part")?;
                ordered(im.0, im.1, "imaginary-part")
            }
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, Distribution::ComplexUniform { .. })
    }

    /// Draws one potential from an already-running stream. Entries fill
    /// in edge-index order; complex entries draw re then im.
    pub fn sample_potential(&self, n: usize, rng: &mut ChaCha8Rng) -> Result<Potential> {
        self.validate()?;
        let m = complete_edge_count(n);
        match *self {
            Distribution::Uniform { lo, hi } => {
                let vals: Vec<f64> = (0..m).map(|_| rng.random_range(lo..hi)).collect();
                Potential::new_real(n, &vals)
            }
            Distribution::Gaussian { mu, sigma } => {
                let normal = rand_distr::Normal::new(mu, sigma)
                    .map_err(|e| Error::Distribution(e.to_string()))?;
                let vals: Vec<f64> = (0..m).map(|_| rng.sample(normal)).collect();
                Potential::new_real(n, &vals)
            }
            Distribution::ComplexUniform { re, im } => {
                let vals: Vec<Complex64> = (0..m)
                    .map(|_| {
                        let r = rng.random_range(re.0..re.1);
                        let i = rng.random_range(im.0..im.1);
                        Complex64::new(r, i)
                    })
                    .collect();
                Potential::new_complex(n, &vals)
            }
        }
    }
}

/// Deterministic random instance: same (n, distribution, seed) always
/// gives the same potential.
pub fn generate_instance(n: usize, dist: &Distribution, seed: u64) -> Result<Potential> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    dist.sample_potential(n, &mut rng)
}
