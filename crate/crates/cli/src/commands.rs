use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use seqdist::dtw_approx::dtw_approx_reals;
use seqdist::dtw_exact::{dtw_bounded_run, dtw_doubling_run};
use seqdist::io::{parse_reals, tree_to_json};
use seqdist::oracles::{dtw_bruteforce, ed_bruteforce, lcs_bruteforce};
use seqdist::{
    dtw_approximate, dtw_banded, dtw_quadratic, ed_approximate, ed_banded, ed_general, ed_simple, ed_via_dtw,
    ed_via_lcs, embed_reals, lcs, BoundedResult, Cost, NullAugmented,
};

use crate::input::{load_pair, read_text, with_metric, Loaded, PairArgs};
use crate::report::Report;
use crate::{workload, Cli, CliError, Command, Pair};

/// Below this length `dtw` defaults to the quadratic DP.
const QUADRATIC_DEFAULT_MAX: usize = 4096;

pub fn run(cli: &Cli, argv: Vec<String>) -> Result<Value, CliError> {
    let name = match &cli.command {
        Command::Dtw { .. } => "dtw",
        Command::Ed { .. } => "ed",
        Command::Lcs { .. } => "lcs",
        Command::EdViaDtw { .. } => "ed-via-dtw",
        Command::EdViaLcs { .. } => "ed-via-lcs",
        Command::ApproxDtw { .. } => "approx-dtw",
        Command::ApproxEd { .. } => "approx-ed",
        Command::Embed { .. } => "embed",
        Command::Gen { .. } => "gen",
        Command::Bench { .. } => "bench",
    };
    let mut r = Report::new(name);
    r.set("argv", argv).set("seed", cli.seed);
    let start = Instant::now();
    match &cli.command {
        Command::Dtw { pair, bound, doubling, quadratic, band, oracle } => {
            dtw(&mut r, pair, *bound, *doubling, *quadratic, *band, *oracle)?
        }
        Command::Ed { pair, band, oracle } => ed(&mut r, pair, *band, *oracle)?,
        Command::Lcs { pair, oracle } => lcs_cmd(&mut r, pair, *oracle)?,
        Command::EdViaDtw { pair } => ed_via_dtw_cmd(&mut r, pair)?,
        Command::EdViaLcs { pair } => ed_via_lcs_cmd(&mut r, pair)?,
        Command::ApproxDtw { pair, epsilon, trials, real, tree } => {
            let metric = if *real { Some("real") } else { tree.as_deref() };
            approx_dtw(&mut r, pair, metric, *epsilon, *trials, cli.seed)?
        }
        Command::ApproxEd { pair, epsilon } => approx_ed(&mut r, pair, *epsilon, cli.seed)?,
        Command::Embed { input, inline } => embed(&mut r, input, *inline, cli.seed)?,
        Command::Gen { kind, n, edits, alphabet, planted, out } => {
            workload::generate(&mut r, *kind, *n, *edits, *alphabet, *planted, out.as_deref(), cli.seed)?
        }
        Command::Bench { family, n, planted, trials, band_fraction, quadratic_max, alphabet, oracle } => {
            let opts = workload::BenchOptions {
                family: *family,
                planted: *planted,
                trials: *trials,
                band_fraction: *band_fraction,
                quadratic_max: *quadratic_max,
                alphabet: *alphabet,
                oracle: *oracle,
                seed: cli.seed,
            };
            workload::bench(&mut r, n, &opts)?
        }
    }
    r.set("elapsed_ns", start.elapsed().as_nanos() as u64);
    Ok(r.into_value())
}

fn load(pair: &Pair, default_metric: &str, want_null: bool) -> Result<Loaded, CliError> {
    load_pair(&PairArgs {
        metric: pair.metric.as_deref().unwrap_or(default_metric),
        x: &pair.x,
        y: &pair.y,
        inline: pair.inline,
        chars: pair.chars,
        want_null,
    })
}

fn no_null() -> CliError {
    CliError::Input("the metric has no null letter; add \"null\" to the metric file".into())
}

fn dtw(
    r: &mut Report,
    pair: &Pair,
    bound: Option<f64>,
    doubling: bool,
    quadratic: bool,
    band: Option<usize>,
    oracle: bool,
) -> Result<(), CliError> {
    let loaded = load(pair, "hamming", false)?;
    let sizes = loaded.sizes();
    r.set("sizes", sizes);
    let bound = bound
        .map(|k| Cost::try_new(k).ok_or_else(|| CliError::Precondition(format!("bound must be nonnegative, got {k}"))))
        .transpose()?;
    let method = match (bound, band) {
        (Some(_), _) => "bounded",
        (_, Some(_)) => "banded",
        _ if doubling => "doubling",
        _ if quadratic => "quadratic",
        _ if sizes[0].max(sizes[1]) < QUADRATIC_DEFAULT_MAX => "quadratic",
        _ => "doubling",
    };
    r.set("method", method);
    with_metric!(&loaded, |m, _null, x, y| {
        let distance = match method {
            "bounded" => {
                let k = bound.expect("bounded method has a bound");
                let run = dtw_bounded_run(m, x, y, k)?;
                r.set("bound", k).set("states", run.states);
                r.set("exceeds_bound", run.result == BoundedResult::ExceedsBound);
                run.result.exact()
            }
            "banded" => {
                let b = band.expect("banded method has a band");
                r.set("band", b);
                Some(dtw_banded(m, x, y, b)?)
            }
            "doubling" => {
                let run = dtw_doubling_run(m, x, y)?;
                r.set("probes", run.probes).set("states", run.states);
                Some(run.distance)
            }
            _ => Some(dtw_quadratic(m, x, y)?),
        };
        r.set("distance", distance);
        if oracle {
            let o = dtw_bruteforce(m, x, y)?;
            r.set("oracle", o);
            let agrees = match (method, distance) {
                ("banded", Some(d)) => d >= o,
                ("bounded", None) => o > bound.expect("bounded method has a bound"),
                (_, d) => d == Some(o),
            };
            r.set("oracle_agrees", agrees);
        }
    });
    Ok(())
}

fn ed(r: &mut Report, pair: &Pair, band: Option<usize>, oracle: bool) -> Result<(), CliError> {
    let loaded = load(pair, "hamming", true)?;
    r.set("sizes", loaded.sizes());
    r.set("method", if band.is_some() { "banded" } else { "dp" });
    with_metric!(&loaded, |m, null, x, y| {
        let nm = NullAugmented::new(m, null.ok_or_else(no_null)?)?;
        let distance = match band {
            Some(b) => {
                r.set("band", b);
                ed_banded(&nm, x, y, b)?
            }
            None => ed_general(&nm, x, y)?,
        };
        r.set("distance", distance);
        if oracle {
            let o = ed_bruteforce(&nm, x, y)?;
            r.set("oracle", o).set("oracle_agrees", if band.is_some() { distance >= o } else { distance == o });
        }
    });
    Ok(())
}

fn lcs_cmd(r: &mut Report, pair: &Pair, oracle: bool) -> Result<(), CliError> {
    let loaded = load(pair, "hamming", false)?;
    r.set("sizes", loaded.sizes()).set("method", "dp");
    with_metric!(&loaded, |_m, _null, x, y| {
        let l = lcs(x, y);
        r.set("lcs", l).set("distance", ed_simple(x, y));
        if oracle {
            let o = lcs_bruteforce(x, y)?;
            r.set("oracle", o).set("oracle_agrees", o == l);
        }
    });
    Ok(())
}

fn ed_via_dtw_cmd(r: &mut Report, pair: &Pair) -> Result<(), CliError> {
    let loaded = load(pair, "hamming", true)?;
    r.set("sizes", loaded.sizes()).set("method", "dtw-of-padded");
    with_metric!(&loaded, |m, null, x, y| {
        let nm = NullAugmented::new(m, null.ok_or_else(no_null)?)?;
        r.set("distance", ed_via_dtw(&nm, x, y)?);
    });
    Ok(())
}

fn ed_via_lcs_cmd(r: &mut Report, pair: &Pair) -> Result<(), CliError> {
    let loaded = load(pair, "hamming", true)?;
    r.set("sizes", loaded.sizes()).set("method", "lcs-of-padded");
    let Loaded::Hamming { metric, null, x, y } = &loaded else {
        return Err(CliError::Input("ed-via-lcs needs a Hamming metric".into()));
    };
    let nm = NullAugmented::new(*metric, null.ok_or_else(no_null)?)?;
    r.set("distance", ed_via_lcs(&nm, x, y)?);
    Ok(())
}

fn approx_dtw(
    r: &mut Report,
    pair: &Pair,
    metric: Option<&str>,
    eps: f64,
    trials: Option<usize>,
    seed: u64,
) -> Result<(), CliError> {
    let mut pair = pair.clone();
    if let Some(m) = metric {
        pair.metric = Some(m.to_owned());
    }
    let loaded = load(&pair, "real", false)?;
    r.set("sizes", loaded.sizes()).set("epsilon", eps);
    match &loaded {
        Loaded::Tree { tree, x, y, .. } => {
            let a = dtw_approximate(tree, x, y, eps)?;
            r.set("method", "tree");
            r.set("estimate", a.estimate).set("lower", a.lower).set("upper", a.upper);
            r.set("mode", a.mode).set("gap_calls", a.gap_calls);
        }
        Loaded::Real { x, y, .. } => {
            let a = dtw_approx_reals(x, y, eps, seed, trials)?;
            let best = a.trials.iter().find(|t| t.estimate == a.estimate).expect("estimate comes from a trial");
            r.set("method", "real-embedding");
            r.set("estimate", a.estimate).set("lower", best.lower).set("upper", best.upper);
            r.set("mode", best.mode);
            r.set("gap_calls", a.trials.iter().map(|t| t.gap_calls).sum::<usize>());
            r.set("trials", a.trials.len());
            r.set("trial_estimates", a.trials.iter().map(|t| t.estimate).collect::<Vec<_>>());
        }
        _ => return Err(CliError::Input("approx-dtw needs a tree metric file or the real metric".into())),
    }
    Ok(())
}

fn approx_ed(r: &mut Report, pair: &Pair, eps: f64, seed: u64) -> Result<(), CliError> {
    let loaded = load(pair, "hamming", true)?;
    r.set("sizes", loaded.sizes()).set("epsilon", eps).set("method", "magnitude-gap");
    with_metric!(&loaded, |m, null, x, y| {
        let nm = NullAugmented::new(m, null.ok_or_else(no_null)?)?;
        let a = ed_approximate(&nm, x, y, eps, seed)?;
        r.set("estimate", a.estimate).set("lower", a.lower).set("upper", a.upper);
        r.set("mode", a.mode).set("gap_calls", a.gap_calls).set("samples", a.samples);
    });
    Ok(())
}

/// Prints the tree in the metric file format, so the output can be passed back as `--metric`.
/// Leaves are labeled by the shortest decimal form of their value.
fn embed(r: &mut Report, input: &str, inline: bool, seed: u64) -> Result<(), CliError> {
    let points = parse_reals(&read_text(input, inline)?)?;
    let e = embed_reals(&points, &mut ChaCha8Rng::seed_from_u64(seed))?;
    let Value::Object(tree) = tree_to_json(e.tree()) else { unreachable!("trees serialize to objects") };
    for (k, v) in tree {
        r.set(&k, v);
    }
    r.set("points", e.points().len());
    r.set("max_depth", e.tree().max_depth());
    Ok(())
}
