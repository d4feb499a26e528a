//! Exact dynamic time warping.
//!
//! Four engines share one contract (`dtw(x, y)`, the cheapest correspondence):
//!
//! * [`dtw_quadratic`]: the textbook `O(|x|·|y|)` table, kept in two rolling rows.
//! * [`dtw_banded`]: the same table restricted to `|i - j| <= K` (Sakoe-Chiba band).
//!   It only ever overestimates.
//! * [`dtw_bounded`]: a run-based dynamic program that answers exactly when
//!   `dtw(x, y) <= K` and reports [`BoundedResult::ExceedsBound`] otherwise, visiting
//!   `O((|x| + |y|)·K/δ)` subproblems where `δ` is the smallest nonzero distance.
//! * [`dtw_doubling`]: runs the bounded program with `K = K₀, 2K₀, 4K₀, ...` where
//!   `K₀ = max(δ, 1)`, for total
//!   time `O(n·dtw(x, y)/δ)`.
//!
//! # Run-based subproblems
//!
//! `SP(x, y, r, q, o)` is the cheapest correspondence between the first `r` runs of
//! `x` and the prefix of `y` that ends `o` letters into its `q`-th run, subject to
//! that `q`-th run of `y` not being extended. The mirrored family `SP(y, x, ...)`
//! swaps the roles; [`Side`] records which string contributes whole runs.
//!
//! A correspondence that matches `r` runs against `q` runs mismatches at least
//! `(|r - q| - 1)/2` letters, so with every mismatch costing at least `δ`, any
//! subproblem with `|r - q| > 2⌈K/δ⌉ + 1` exceeds `K` and is treated as infinite.
//! Pruned values only ever grow, so every subproblem whose true value is at most
//! `K` is still computed exactly.

use rustc_hash::FxHashMap;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::runlen::RunEncoding;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundedResult {
    Exact(Cost),
    ExceedsBound,
}

impl BoundedResult {
    pub fn exact(self) -> Option<Cost> {
        match self {
            BoundedResult::Exact(c) => Some(c),
            BoundedResult::ExceedsBound => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdResult {
    Exact(Cost),
    AboveThreshold,
}

/// Handles empty inputs: both empty is distance 0, exactly one empty has no correspondence.
fn empty_case<L>(x: &[L], y: &[L]) -> Result<Option<Cost>> {
    match (x.is_empty(), y.is_empty()) {
        (true, true) => Ok(Some(Cost::ZERO)),
        (false, false) => Ok(None),
        _ => Err(Error::EmptyInput("dtw needs both strings nonempty (or both empty)")),
    }
}

/// Exact DTW by the full `|x| × |y|` dynamic program.
pub fn dtw_quadratic<M: Metric>(m: &M, x: &[M::Letter], y: &[M::Letter]) -> Result<Cost> {
    if let Some(c) = empty_case(x, y)? {
        return Ok(c);
    }
    m.check_letters(x)?;
    m.check_letters(y)?;
    Ok(quadratic(m, x, y))
}

pub(crate) fn quadratic<M: Metric>(m: &M, x: &[M::Letter], y: &[M::Letter]) -> Cost {
    let cols = y.len();
    let mut prev = vec![0.0f64; cols];
    let mut cur = vec![0.0f64; cols];

    let first = x[0];
    let mut acc = 0.0;
    for (j, &b) in y.iter().enumerate() {
        acc += m.dist(first, b).get();
        prev[j] = acc;
    }
    for &a in &x[1..] {
        let mut left = prev[0] + m.dist(a, y[0]).get();
        cur[0] = left;
        for j in 1..cols {
            let best = prev[j].min(prev[j - 1]).min(left);
            left = best + m.dist(a, y[j]).get();
            cur[j] = left;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Cost::new(prev[cols - 1])
}

/// DTW restricted to correspondences that only match positions with `|i - j| <= band`.
///
/// Returns [`Cost::INFINITY`] when no such correspondence exists (for instance when the
/// lengths differ by more than `band`).
pub fn dtw_banded<M: Metric>(m: &M, x: &[M::Letter], y: &[M::Letter], band: usize) -> Result<Cost> {
    if let Some(c) = empty_case(x, y)? {
        return Ok(c);
    }
    m.check_letters(x)?;
    m.check_letters(y)?;

    let cols = y.len();
    let inf = f64::INFINITY;
    let mut prev = vec![inf; cols];
    let mut cur = vec![inf; cols];
    // Columns written in the previous row; everything else there is stale.
    let mut prev_span: Option<(usize, usize)> = None;

    for (i, &a) in x.iter().enumerate() {
        let lo = i.saturating_sub(band);
        let hi = (i + band).min(cols - 1);
        if lo > hi {
            return Ok(Cost::INFINITY);
        }
        let read = |row: &[f64], j: usize| match prev_span {
            Some((plo, phi)) if (plo..=phi).contains(&j) => row[j],
            _ => inf,
        };
        let mut left = inf;
        for j in lo..=hi {
            let best = if i == 0 && j == 0 {
                0.0
            } else {
                let diag = if j > 0 { read(&prev, j - 1) } else { inf };
                read(&prev, j).min(diag).min(left)
            };
            left = best + m.dist(a, y[j]).get();
            cur[j] = left;
        }
        std::mem::swap(&mut prev, &mut cur);
        prev_span = Some((lo, hi));
    }
    Ok(match prev_span {
        Some((lo, hi)) if (lo..=hi).contains(&(cols - 1)) => Cost::new(prev[cols - 1]),
        _ => Cost::INFINITY,
    })
}

/// Which string contributes whole runs to a subproblem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// `SP(x, y, ...)`: runs of `x` against a letter prefix of `y`.
    XRuns,
    /// `SP(y, x, ...)`: runs of `y` against a letter prefix of `x`.
    YRuns,
}

impl Side {
    fn flip(self) -> Side {
        match self {
            Side::XRuns => Side::YRuns,
            Side::YRuns => Side::XRuns,
        }
    }
}

/// Identifies `SP(a, b, r, q, o)` where `a` is the run-role string selected by `side`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SubproblemKey {
    pub side: Side,
    /// Number of whole runs taken from the run-role string.
    pub r: u32,
    /// Run of the letter-role string the prefix ends in (1-based; 0 means empty prefix).
    pub q: u32,
    /// Letters taken from run `q` (0 means the prefix stops before run `q`).
    pub o: u32,
}

impl SubproblemKey {
    pub fn new(side: Side, r: usize, q: usize, o: usize) -> SubproblemKey {
        SubproblemKey { side, r: r as u32, q: q as u32, o: o as u32 }
    }
}

/// Largest admissible `|r - q|` for a bound `K` when mismatches cost at least `separation`.
///
/// `None` means no pruning.
pub fn band_width(bound: Cost, separation: Cost) -> Option<usize> {
    if bound.is_infinite() || separation == Cost::ZERO {
        return None;
    }
    if separation.is_infinite() {
        return Some(1);
    }
    let mut units = (bound.get() / separation.get()).ceil();
    // The division may round down across an integer; never let that narrow the band.
    if units * separation.get() < bound.get() {
        units += 1.0;
    }
    if units > 1e15 {
        return None;
    }
    Some(2 * units as usize + 1)
}

/// Memo table: one dense row over `o` per visited `(side, r, q)`.
///
/// Consecutive `o` values are usually visited together, so rows keep those lookups in cache.
#[derive(Default)]
struct Memo {
    rows: FxHashMap<(Side, u32, u32), Vec<f64>>,
    filled: usize,
}

impl Memo {
    fn get(&self, key: SubproblemKey) -> Option<Cost> {
        let v = *self.rows.get(&(key.side, key.r, key.q))?.get(key.o as usize)?;
        (!v.is_nan()).then(|| Cost::new(v))
    }

    /// `row_len` is the number of admissible offsets, fixed per `(side, q)`.
    fn insert(&mut self, key: SubproblemKey, row_len: usize, value: Cost) {
        let row = self.rows.entry((key.side, key.r, key.q)).or_insert_with(|| vec![f64::NAN; row_len]);
        let slot = &mut row[key.o as usize];
        if slot.is_nan() {
            self.filled += 1;
        }
        *slot = value.get();
    }
}

/// Memoized evaluator for the run-based subproblems of one string pair.
///
/// Evaluation uses an explicit work stack, so runs of any length are safe.
pub struct RunDtw<'m, M: Metric> {
    metric: &'m M,
    x: RunEncoding<M::Letter>,
    y: RunEncoding<M::Letter>,
    band: Option<usize>,
    memo: Memo,
    stack: Vec<SubproblemKey>,
}

impl<'m, M: Metric> RunDtw<'m, M> {
    /// Evaluator that prunes subproblems which provably exceed `bound`, assuming every
    /// nonzero distance between letters of `x` and `y` is at least `separation`.
    pub fn new(metric: &'m M, x: &[M::Letter], y: &[M::Letter], bound: Cost, separation: Cost) -> Self {
        RunDtw::with_band(metric, x, y, band_width(bound, separation))
    }

    /// Evaluator without pruning.
    pub fn unbanded(metric: &'m M, x: &[M::Letter], y: &[M::Letter]) -> Self {
        RunDtw::with_band(metric, x, y, None)
    }

    fn with_band(metric: &'m M, x: &[M::Letter], y: &[M::Letter], band: Option<usize>) -> Self {
        RunDtw {
            metric,
            x: RunEncoding::encode(x),
            y: RunEncoding::encode(y),
            band,
            memo: Memo::default(),
            stack: Vec::new(),
        }
    }

    pub fn band(&self) -> Option<usize> {
        self.band
    }

    /// Number of memoized subproblems so far.
    pub fn states(&self) -> usize {
        self.memo.filled
    }

    /// (run-role, letter-role) encodings for a side.
    fn roles(&self, side: Side) -> (&RunEncoding<M::Letter>, &RunEncoding<M::Letter>) {
        match side {
            Side::XRuns => (&self.x, &self.y),
            Side::YRuns => (&self.y, &self.x),
        }
    }

    /// Values that need no recursion: out-of-band keys, base cases, and memo hits.
    fn lookup(&self, key: SubproblemKey) -> Option<Cost> {
        let (r, q, o) = (key.r as usize, key.q as usize, key.o as usize);
        if let Some(b) = self.band {
            if r.abs_diff(q) > b {
                return Some(Cost::INFINITY);
            }
        }
        if r == 0 {
            // Zero runs correspond only with an empty prefix: q = 0, or q = 1 with o = 0.
            return Some(if q <= 1 && o == 0 { Cost::ZERO } else { Cost::INFINITY });
        }
        if q == 0 {
            return Some(Cost::INFINITY);
        }
        self.memo.get(key)
    }

    /// The two candidate predecessors of a key with `r, q >= 1`, with the cost added by each.
    fn predecessors(&self, key: SubproblemKey) -> [(SubproblemKey, Cost); 2] {
        let (runs, letters) = self.roles(key.side);
        let (r, q, o) = (key.r as usize, key.q as usize, key.o as usize);
        let run = runs.runs()[r - 1];
        let len = run.len;
        if o > 0 {
            let d = self.metric.dist(run.letter, letters.runs()[q - 1].letter);
            // The run-role run is extended over the o-th letter.
            let extend = (SubproblemKey::new(key.side, r, q, o - 1), d);
            let other = if len <= o {
                // The whole run sits inside the first o letters of run q.
                (SubproblemKey::new(key.side, r - 1, q, o - len), d.times(len as f64))
            } else {
                // The first o letters of run q all face the run; the rest of the run
                // overlaps earlier runs of the letter-role string.
                (SubproblemKey::new(key.side.flip(), q - 1, r, len - o), d.times(o as f64))
            };
            [extend, other]
        } else {
            let prev_len = if q >= 2 { letters.runs()[q - 2].len } else { 0 };
            [
                (SubproblemKey::new(key.side, r, q - 1, prev_len), Cost::ZERO),
                (SubproblemKey::new(key.side.flip(), q - 1, r, len), Cost::ZERO),
            ]
        }
    }

    /// Value of one subproblem (infinite when out of band or infeasible).
    pub fn sp(&mut self, key: SubproblemKey) -> Cost {
        if let Some(v) = self.lookup(key) {
            return v;
        }
        self.stack.push(key);
        while let Some(&top) = self.stack.last() {
            if self.lookup(top).is_some() {
                self.stack.pop();
                continue;
            }
            let mut ready = true;
            let mut best = Cost::INFINITY;
            for (pred, add) in self.predecessors(top) {
                match self.lookup(pred) {
                    Some(v) => best = best.min(v + add),
                    None => {
                        ready = false;
                        self.stack.push(pred);
                    }
                }
            }
            if ready {
                let row_len = self.roles(top.side).1.runs()[top.q as usize - 1].len + 1;
                self.memo.insert(top, row_len, best);
                self.stack.pop();
            }
        }
        self.memo.get(key).expect("evaluated above")
    }

    /// `min(SP(x, y, s, t, k), SP(y, x, t, s, j))` for `s`, `t` runs with final run lengths `j`, `k`.
    ///
    /// Equals `dtw(x, y)` whenever that is within the bound; otherwise exceeds the bound.
    pub fn solve(&mut self) -> Cost {
        let (s, t) = (self.x.num_runs(), self.y.num_runs());
        if s == 0 || t == 0 {
            return if s == t { Cost::ZERO } else { Cost::INFINITY };
        }
        let j = self.x.runs()[s - 1].len;
        let k = self.y.runs()[t - 1].len;
        let a = self.sp(SubproblemKey::new(Side::XRuns, s, t, k));
        let b = self.sp(SubproblemKey::new(Side::YRuns, t, s, j));
        a.min(b)
    }
}

/// Outcome of one bounded run together with the number of memoized subproblems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundedRun {
    pub result: BoundedResult,
    pub states: usize,
}

pub(crate) fn bounded_with_separation<M: Metric>(
    m: &M,
    x: &[M::Letter],
    y: &[M::Letter],
    bound: Cost,
    separation: Cost,
) -> BoundedRun {
    let mut dp = RunDtw::new(m, x, y, bound, separation);
    let v = dp.solve();
    let result = if v <= bound { BoundedResult::Exact(v) } else { BoundedResult::ExceedsBound };
    BoundedRun { result, states: dp.states() }
}

/// `Exact(dtw(x, y))` when it is at most `bound`, `ExceedsBound` otherwise.
pub fn dtw_bounded<M: Metric>(m: &M, x: &[M::Letter], y: &[M::Letter], bound: Cost) -> Result<BoundedResult> {
    Ok(dtw_bounded_run(m, x, y, bound)?.result)
}

/// [`dtw_bounded`] that also reports how many subproblems were memoized.
pub fn dtw_bounded_run<M: Metric>(m: &M, x: &[M::Letter], y: &[M::Letter], bound: Cost) -> Result<BoundedRun> {
    if let Some(c) = empty_case(x, y)? {
        let result = if c <= bound { BoundedResult::Exact(c) } else { BoundedResult::ExceedsBound };
        return Ok(BoundedRun { result, states: 0 });
    }
    m.check_letters(x)?;
    m.check_letters(y)?;
    Ok(bounded_with_separation(m, x, y, bound, m.separation(x, y)))
}

/// Work done by [`dtw_doubling_run`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DoublingRun {
    pub distance: Cost,
    /// Bounded runs performed.
    pub probes: usize,
    /// Subproblems memoized, summed over all probes.
    pub states: usize,
}

/// Exact DTW in time proportional to `n · dtw(x, y)`, by doubling the bound.
pub fn dtw_doubling<M: Metric>(m: &M, x: &[M::Letter], y: &[M::Letter]) -> Result<Cost> {
    Ok(dtw_doubling_run(m, x, y)?.distance)
}

pub fn dtw_doubling_run<M: Metric>(m: &M, x: &[M::Letter], y: &[M::Letter]) -> Result<DoublingRun> {
    if let Some(c) = empty_case(x, y)? {
        return Ok(DoublingRun { distance: c, probes: 0, states: 0 });
    }
    m.check_letters(x)?;
    m.check_letters(y)?;

    let separation = m.separation(x, y);
    // Stretching the shorter string gives a correspondence of length max(|x|, |y|).
    let cap = m.diameter(x, y).times(x.len().max(y.len()) as f64);
    let mut bound = if separation.is_finite() { separation.max(Cost::new(1.0)) } else { Cost::new(1.0) };
    let mut probes = 0;
    let mut states = 0;
    loop {
        // Past the cap the answer is certainly within reach, so drop the pruning.
        let last = bound >= cap;
        let run = bounded_with_separation(m, x, y, if last { Cost::INFINITY } else { bound }, separation);
        probes += 1;
        states += run.states;
        if let BoundedResult::Exact(distance) = run.result {
            return Ok(DoublingRun { distance, probes, states });
        }
        debug_assert!(!last, "unpruned run cannot exceed an infinite bound");
        bound = bound.times(2.0);
    }
}

/// Either computes `dtw(x, y)` exactly or certifies that it exceeds `threshold`.
pub fn dtw_threshold_or_exceed<M: Metric>(
    m: &M,
    x: &[M::Letter],
    y: &[M::Letter],
    threshold: Cost,
) -> Result<ThresholdResult> {
    Ok(match dtw_bounded(m, x, y, threshold)? {
        BoundedResult::Exact(c) => ThresholdResult::Exact(c),
        BoundedResult::ExceedsBound => ThresholdResult::AboveThreshold,
    })
}
