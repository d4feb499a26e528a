//! Polynomial-factor DTW approximation over well-separated tree metrics.
//!
//! The gap solver simplifies both strings at scale `r` (see [`simplify_tree`]) and runs
//! the bounded DP on the results. Simplification never increases DTW and loses at most
//! `n·r/2`, and distinct simplified letters are more than `r/4` apart, so the bounded
//! DP band is only `O(n^{1-ε})` runs wide.
//!
//! [`dtw_approximate`] first tries an exact answer below `δ·n^{1-ε}`; otherwise it
//! bisects over scales `r = δ·2^i` for two adjacent exponents whose gap verdicts are
//! (1, 0), which pins `dtw` inside `[δ·2^i·n^{1-ε}, δ·2^i·n]`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cost::Cost;
use crate::dtw_exact::{bounded_with_separation, dtw_doubling, dtw_threshold_or_exceed, BoundedResult, ThresholdResult};
use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::tree::{embed_reals, simplify_tree, NodeId, WellSeparatedTree};

/// Answer of a gap problem: `Below` is the bit 0, `Above` the bit 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GapVerdict {
    /// The distance is at most `n·r`.
    Below,
    /// The distance exceeds the lower threshold.
    Above,
}

impl GapVerdict {
    pub fn bit(self) -> u8 {
        match self {
            GapVerdict::Below => 0,
            GapVerdict::Above => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ApproxMode {
    /// The distance was small enough to compute exactly.
    ExactSmall,
    /// The input is too short for the gap thresholds to separate; computed exactly instead.
    ExactFallback,
    /// The distance lies in `[lower, upper]`.
    GapBracketed,
}

/// Result of an approximation; exact modes have `lower == estimate == upper`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ApproxEstimate {
    pub estimate: Cost,
    pub mode: ApproxMode,
    pub lower: Cost,
    pub upper: Cost,
    pub gap_calls: usize,
    /// Randomized samples drawn across all gap calls (zero for the deterministic DTW gap).
    pub samples: usize,
}

impl ApproxEstimate {
    pub(crate) fn exact(value: Cost, mode: ApproxMode, gap_calls: usize, samples: usize) -> ApproxEstimate {
        ApproxEstimate { estimate: value, mode, lower: value, upper: value, gap_calls, samples }
    }

    pub fn is_exact(&self) -> bool {
        self.mode != ApproxMode::GapBracketed
    }

    pub fn contains(&self, value: Cost) -> bool {
        self.lower <= value && value <= self.upper
    }
}

pub(crate) fn check_epsilon(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {eps}")))
    }
}

fn nonempty<L>(x: &[L], y: &[L]) -> Result<()> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptyInput("approximate dtw needs nonempty strings"));
    }
    Ok(())
}

/// The `(r, g)` gap problem with `n = max(|x|, |y|)`.
///
/// `Above` certifies `dtw(x, y) > n·r/g`. `Below` certifies `dtw(x, y) <= n·r/g + n·r/2`,
/// which is at most `n·r` when `g >= 2`.
pub fn dtw_gap_general(t: &WellSeparatedTree, x: &[NodeId], y: &[NodeId], r: Cost, g: f64) -> Result<GapVerdict> {
    nonempty(x, y)?;
    if g.is_nan() || g <= 0.0 || r.is_infinite() {
        return Err(Error::InvalidParameter(format!("gap needs finite r and g > 0, got r = {r}, g = {g}")));
    }
    let n = x.len().max(y.len()) as f64;
    let sx = simplify_tree(t, x, r)?;
    let sy = simplify_tree(t, y, r)?;
    let threshold = r.times(n / g);
    let separation = t.separation(&sx, &sy).max(r.times(0.25));
    Ok(match bounded_with_separation(t, &sx, &sy, threshold, separation).result {
        BoundedResult::Exact(_) => GapVerdict::Below,
        BoundedResult::ExceedsBound => GapVerdict::Above,
    })
}

/// The `(r, n^ε)` gap problem: `Above` iff `dtw(s_r(x), s_r(y)) > n^{1-ε}·r`.
///
/// `Above` implies `dtw(x, y) > n^{1-ε}·r`; `Below` implies `dtw(x, y) <= n·r` once `n^ε >= 2`.
pub fn dtw_gap(t: &WellSeparatedTree, x: &[NodeId], y: &[NodeId], r: Cost, eps: f64) -> Result<GapVerdict> {
    check_epsilon(eps)?;
    let n = x.len().max(y.len()) as f64;
    dtw_gap_general(t, x, y, r, n.powf(eps))
}

/// `O(n^ε)`-approximation of `dtw(x, y)` under a well-separated tree metric.
pub fn dtw_approximate(t: &WellSeparatedTree, x: &[NodeId], y: &[NodeId], eps: f64) -> Result<ApproxEstimate> {
    check_epsilon(eps)?;
    nonempty(x, y)?;
    t.check_letters(x)?;
    t.check_letters(y)?;
    let n = x.len().max(y.len()) as f64;
    let n_eps = n.powf(eps);
    // The search uses g = n^ε/2, whose Below verdict only bounds dtw by n·r when n^ε >= 4.
    if n_eps < 4.0 {
        return Ok(ApproxEstimate::exact(dtw_doubling(t, x, y)?, ApproxMode::ExactFallback, 0, 0));
    }

    let delta = t.separation(x, y);
    if delta.is_infinite() {
        // A single letter between the two strings.
        return Ok(ApproxEstimate::exact(Cost::ZERO, ApproxMode::ExactSmall, 0, 0));
    }
    let scale = n / n_eps;
    if let ThresholdResult::Exact(c) = dtw_threshold_or_exceed(t, x, y, delta.times(scale))? {
        return Ok(ApproxEstimate::exact(c, ApproxMode::ExactSmall, 0, 0));
    }

    // Invariants: dtw > δ·2^(lo+1)·n^{1-ε} and dtw <= δ·2^hi·n.
    // lo = -1 holds by the failed exact attempt; hi = top holds since every distance is at most 2^top·δ.
    let top = (t.max_weight().get() / delta.get()).log2().ceil().max(0.0) as i32;
    let (mut lo, mut hi) = (-1i32, top);
    let mut gap_calls = 0;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let r = delta.times(2f64.powi(mid));
        gap_calls += 1;
        match dtw_gap_general(t, x, y, r, n_eps / 2.0)? {
            GapVerdict::Above => lo = mid,
            GapVerdict::Below => hi = mid,
        }
    }
    let unit = delta.times(2f64.powi(hi));
    let lower = unit.times(scale);
    Ok(ApproxEstimate {
        estimate: lower,
        mode: ApproxMode::GapBracketed,
        lower,
        upper: unit.times(n),
        gap_calls,
        samples: 0,
    })
}

/// Best of several tree-embedding approximations of a real-valued DTW instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealApprox {
    /// Minimum estimate over all trials.
    pub estimate: Cost,
    pub seed: u64,
    pub trials: Vec<ApproxEstimate>,
}

/// Default number of embeddings: `⌈log2 n⌉ + 1`.
pub fn default_trials(n: usize) -> usize {
    (n.max(1) as f64).log2().ceil() as usize + 1
}

/// Embeds the values of `x` and `y` into `trials` random trees (stream `k` of the seeded
/// generator drives trial `k`) and keeps the smallest approximation.
pub fn dtw_approx_reals(x: &[f64], y: &[f64], eps: f64, seed: u64, trials: Option<usize>) -> Result<RealApprox> {
    check_epsilon(eps)?;
    nonempty(x, y)?;
    let trials = trials.unwrap_or_else(|| default_trials(x.len().max(y.len())));
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is needed".into()));
    }
    let points: Vec<f64> = x.iter().chain(y).copied().collect();
    let mut out = Vec::with_capacity(trials);
    for k in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let e = embed_reals(&points, &mut rng)?;
        let (tx, ty) = (e.map(x)?, e.map(y)?);
        out.push(dtw_approximate(e.tree(), &tx, &ty, eps)?);
    }
    let estimate = out.iter().map(|a| a.estimate).min().expect("trials > 0");
    Ok(RealApprox { estimate, seed, trials: out })
}
