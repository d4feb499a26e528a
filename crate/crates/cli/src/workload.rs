//! The `gen` and `bench` commands.

use std::fs;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use seqdist::dtw_exact::dtw_doubling_run;
use seqdist::gen::{band_adversarial, mutate, random_int_reals, random_symbols, random_tree};
use seqdist::io::tree_to_json;
use seqdist::oracles::{dtw_bruteforce, DTW_GUARD};
use seqdist::{dtw_banded, dtw_quadratic, Hamming, Symbol};

use crate::report::Report;
use crate::{CliError, Family, GenKind};

/// `a`..`z`, then `l26`, `l27`, ...
fn letter_name(s: Symbol) -> String {
    match u8::try_from(s.0) {
        Ok(i) if i < 26 => char::from(b'a' + i).to_string(),
        _ => format!("l{}", s.0),
    }
}

/// Joins tokens, writing runs as `tok*k`.
fn compress(tokens: &[String]) -> String {
    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let j = tokens[i..].iter().position(|t| *t != tokens[i]).map_or(tokens.len(), |k| i + k);
        out.push(if j - i > 1 { format!("{}*{}", tokens[i], j - i) } else { tokens[i].clone() });
        i = j;
    }
    out.join(" ")
}

fn precondition(msg: impl Into<String>) -> CliError {
    CliError::Precondition(msg.into())
}

#[allow(clippy::too_many_arguments)]
pub fn generate(
    r: &mut Report,
    kind: GenKind,
    n: usize,
    edits: usize,
    alphabet: u32,
    planted: usize,
    out: Option<&Path>,
    seed: u64,
) -> Result<(), CliError> {
    if alphabet == 0 {
        return Err(precondition("alphabet must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut metric = None;
    let names = |s: &[Symbol]| s.iter().map(|&l| letter_name(l)).collect::<Vec<_>>();
    let (x, y, kind_name) = match kind {
        GenKind::Hamming => {
            let x = random_symbols(&mut rng, n, alphabet);
            let y = mutate(&mut rng, &x, edits, |g| Symbol(g.random_range(0..alphabet)));
            (names(&x), names(&y), "hamming")
        }
        GenKind::Real => {
            let x = random_int_reals(&mut rng, n, -100, 100);
            let y = mutate(&mut rng, &x, edits, |g| f64::from(g.random_range(-100..=100)));
            let fmt = |s: &[f64]| s.iter().map(f64::to_string).collect::<Vec<_>>();
            (fmt(&x), fmt(&y), "real")
        }
        GenKind::Tree => {
            let t = random_tree(&mut rng, alphabet as usize, 6);
            let x: Vec<u32> = (0..n).map(|_| rng.random_range(0..alphabet)).collect();
            let y = mutate(&mut rng, &x, edits, |g| g.random_range(0..alphabet));
            let fmt = |s: &[u32]| s.iter().map(|&v| format!("v{v}")).collect::<Vec<_>>();
            metric = Some(tree_to_json(&t));
            (fmt(&x), fmt(&y), "tree")
        }
        GenKind::BandAdversarial => {
            if n < 2 * planted + 2 {
                return Err(precondition(format!("n must be at least {} for {planted} planted letters", 2 * planted + 2)));
            }
            let (x, y) = band_adversarial(n, planted);
            (names(&x), names(&y), "band-adversarial")
        }
    };
    let (x, y) = (compress(&x), compress(&y));
    if let Some(dir) = out {
        let write = |name: &str, text: &str| {
            fs::write(dir.join(name), text)
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", dir.join(name).display())))
        };
        fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
        write("x.txt", &x)?;
        write("y.txt", &y)?;
        if let Some(m) = &metric {
            write("metric.json", &m.to_string())?;
        }
    }
    r.set("kind", kind_name).set("n", n).set("edits", edits).set("x", x).set("y", y);
    if let Some(m) = metric {
        r.set("metric", m);
    }
    Ok(())
}

pub struct BenchOptions {
    pub family: Family,
    pub planted: usize,
    pub trials: usize,
    pub band_fraction: f64,
    pub quadratic_max: usize,
    pub alphabet: u32,
    pub oracle: bool,
    pub seed: u64,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed().as_nanos() as u64)
}

/// Least-squares slope of `ln t` against `ln n`.
fn log_log_slope(points: &[(usize, u64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|p| p.1 > 0).map(|&(n, t)| ((n as f64).ln(), (t as f64).ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn bench(r: &mut Report, lengths: &[usize], o: &BenchOptions) -> Result<(), CliError> {
    if lengths.is_empty() || o.trials == 0 {
        return Err(precondition("need at least one length and one trial"));
    }
    if !(0.0..=1.0).contains(&o.band_fraction) {
        return Err(precondition("band fraction must lie in [0, 1]"));
    }
    if o.alphabet < 2 {
        return Err(precondition("the random family needs at least two letters"));
    }
    let mut rows: Vec<Value> = Vec::new();
    let mut doubling_times = Vec::new();
    for &n in lengths {
        for trial in 0..o.trials {
            let (x, y, metric) = match o.family {
                Family::BandAdversarial => {
                    if n < 2 * o.planted + 2 {
                        return Err(precondition(format!("n = {n} too short for {} planted letters", o.planted)));
                    }
                    let (x, y) = band_adversarial(n, o.planted);
                    (x, y, Hamming::new(3))
                }
                Family::Random => {
                    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
                    rng.set_stream(trial as u64);
                    let x = random_symbols(&mut rng, n, o.alphabet);
                    let y = mutate(&mut rng, &x, o.planted, |g| Symbol(g.random_range(0..o.alphabet)));
                    (x, y, Hamming::new(o.alphabet))
                }
            };
            if x.is_empty() || y.is_empty() {
                return Err(precondition("generated an empty string; use a larger n"));
            }
            let (run, doubling_ns) = timed(|| dtw_doubling_run(&metric, &x, &y));
            let run = run?;
            doubling_times.push((n, doubling_ns));
            let band = (o.band_fraction * n as f64).ceil() as usize;
            let (banded, banded_ns) = timed(|| dtw_banded(&metric, &x, &y, band));
            let mut row = json!({
                "n": n,
                "trial": trial,
                "distance": run.distance,
                "doubling_ns": doubling_ns,
                "probes": run.probes,
                "states": run.states,
                "band": band,
                "banded": banded?,
                "banded_ns": banded_ns,
            });
            if x.len().max(y.len()) <= o.quadratic_max {
                let (q, quadratic_ns) = timed(|| dtw_quadratic(&metric, &x, &y));
                row["quadratic"] = json!(q?);
                row["quadratic_ns"] = json!(quadratic_ns);
                row["speedup"] = json!((quadratic_ns as f64 / doubling_ns.max(1) as f64 * 10.0).round() / 10.0);
            }
            // The exhaustive oracle only runs within its guard.
            if o.oracle && x.len() * y.len() <= DTW_GUARD {
                row["oracle"] = json!(dtw_bruteforce(&metric, &x, &y)?);
            }
            rows.push(row);
        }
    }
    let family = match o.family {
        Family::BandAdversarial => "band-adversarial",
        Family::Random => "random",
    };
    r.set("family", family).set("planted", o.planted).set("band_fraction", o.band_fraction);
    r.set("trials", o.trials).set("rows", rows);
    r.set("doubling_slope", log_log_slope(&doubling_times));
    Ok(())
}
