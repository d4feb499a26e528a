//! Polynomial-factor edit distance approximation over an arbitrary null-augmented metric.
//!
//! Dropping every letter of magnitude at most `r` (the magnitude simplification) costs
//! at most `2r` per dropped letter, and for `r` uniform in `[R, 2R]` it keeps the
//! expected edit distance within `5·ed(x, y)`. Simplified strings only contain letters of
//! magnitude above `R`, so an edit distance below `n^{1-ε}·R` needs fewer than `n^{1-ε}`
//! insertions and deletions and the banded DP finds it exactly.
//!
//! [`ed_gap`] answers 0 when some sampled simplification has banded distance below
//! `n·R`, which certifies `ed(x, y) < 5nR`. It answers 1 otherwise, which with high
//! probability means `ed(x, y) >= n^{1-ε}·R/15`. [`ed_approximate`] bisects over
//! `R = 2^i` for adjacent exponents with verdicts (1, 0).

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cost::Cost;
use crate::dtw_approx::{check_epsilon, ApproxEstimate, ApproxMode};
use crate::error::{Error, Result};
use crate::metric::{Metric, NullAugmented};
use crate::reductions::edit_table;

/// Edit distance restricted to scripts whose DP path stays within `|i - j| <= band`.
pub fn ed_banded<M: Metric>(m: &NullAugmented<M>, x: &[M::Letter], y: &[M::Letter], band: usize) -> Result<Cost> {
    m.check_letters(x)?;
    m.check_letters(y)?;
    Ok(edit_table(m, x, y, Some(band)))
}

/// The subsequence of letters with magnitude strictly above `r`.
pub fn simplify_magnitude<M: Metric>(m: &NullAugmented<M>, x: &[M::Letter], r: Cost) -> Vec<M::Letter> {
    x.iter().copied().filter(|&l| m.magnitude(l) > r).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EditGapVerdict {
    /// True for the bit 1: every sample stayed at or above `n·R`.
    pub above: bool,
    pub samples_used: usize,
}

impl EditGapVerdict {
    pub fn bit(self) -> u8 {
        u8::from(self.above)
    }
}

/// Samples per gap call: `⌈4·log2 n⌉ + 1`.
pub fn sample_count(n: usize) -> usize {
    (4.0 * (n.max(1) as f64).log2()).ceil() as usize + 1
}

fn band_for(n: usize, eps: f64) -> usize {
    (n as f64).powf(1.0 - eps).ceil() as usize
}

/// Randomized gap test at scale `R`; see the module docs for what each verdict means.
pub fn ed_gap<M: Metric, G: Rng + ?Sized>(
    m: &NullAugmented<M>,
    x: &[M::Letter],
    y: &[M::Letter],
    big_r: Cost,
    eps: f64,
    rng: &mut G,
) -> Result<EditGapVerdict> {
    check_epsilon(eps)?;
    if !(big_r > Cost::ZERO && big_r.is_finite()) {
        return Err(Error::InvalidParameter(format!("gap scale must be positive and finite, got {big_r}")));
    }
    m.check_letters(x)?;
    m.check_letters(y)?;
    let n = x.len().max(y.len());
    let band = band_for(n, eps);
    let limit = big_r.times(n as f64);
    let samples = sample_count(n);
    for i in 0..samples {
        let r = Cost::new(rng.random_range(big_r.get()..=big_r.get() * 2.0));
        let sx = simplify_magnitude(m, x, r);
        let sy = simplify_magnitude(m, y, r);
        assert!(
            sx.iter().chain(&sy).all(|&l| m.magnitude(l) >= big_r),
            "simplification kept a letter of magnitude below R"
        );
        if edit_table(m, &sx, &sy, Some(band)) < limit {
            return Ok(EditGapVerdict { above: false, samples_used: i + 1 });
        }
    }
    Ok(EditGapVerdict { above: true, samples_used: samples })
}

/// Exponents `i` with some letter magnitude in `[2^(i-1), 2^(i+1)]`, at least `floor`.
fn magnitude_grid(magnitudes: &[Cost], floor: i32) -> Vec<i32> {
    let mut grid = BTreeSet::new();
    for mu in magnitudes {
        let l = mu.get().log2();
        for i in (l - 1.0).ceil() as i32..=(l + 1.0).floor() as i32 {
            if i >= floor {
                grid.insert(i);
            }
        }
    }
    grid.into_iter().collect()
}

/// `O(n^ε)`-approximation of the edit distance, correct with high probability.
///
/// Every letter of `x` and `y` must have positive magnitude. Gap calls at exponent `i`
/// draw from stream `i` of a generator seeded with `seed`, so results are reproducible.
pub fn ed_approximate<M: Metric>(
    m: &NullAugmented<M>,
    x: &[M::Letter],
    y: &[M::Letter],
    eps: f64,
    seed: u64,
) -> Result<ApproxEstimate> {
    check_epsilon(eps)?;
    m.check_letters(x)?;
    m.check_letters(y)?;
    let n = x.len().max(y.len());
    if n == 0 {
        return Ok(ApproxEstimate::exact(Cost::ZERO, ApproxMode::ExactSmall, 0, 0));
    }
    let magnitudes: Vec<Cost> = x.iter().chain(y).map(|&l| m.magnitude(l)).collect();
    if let Some(pos) = magnitudes.iter().position(|&mu| mu == Cost::ZERO) {
        let l = x.iter().chain(y).nth(pos).expect("index in range");
        return Err(Error::InvalidParameter(format!("letter {l:?} has magnitude 0")));
    }
    let min_mag = *magnitudes.iter().min().expect("n > 0");
    let max_mag = *magnitudes.iter().max().expect("n > 0");

    let nf = n as f64;
    let width = nf.powf(1.0 - eps);
    let exact = edit_table(m, x, y, Some(band_for(n, eps)));
    if exact <= min_mag.times(width) {
        return Ok(ApproxEstimate::exact(exact, ApproxMode::ExactSmall, 0, 0));
    }
    // From here on ed > min_mag·n^{1-ε}.

    let floor = min_mag.get().log2().ceil() as i32;
    // At 2^top every letter is dropped, so the verdict there is 0 without sampling.
    let top = max_mag.get().log2().floor() as i32 + 1;
    let mut grid = magnitude_grid(&magnitudes, floor);
    grid.retain(|&i| i < top);
    grid.push(top);

    let mut gap_calls = 0;
    let mut samples = 0;
    let mut verdict = |i: i32| -> Result<bool> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i64::from(i) as u64);
        let v = ed_gap(m, x, y, Cost::new(2f64.powi(i)), eps, &mut rng)?;
        gap_calls += 1;
        samples += v.samples_used;
        Ok(v.above)
    };

    // Bisection over grid positions: verdict 1 at `lo` (or lo = None, below the grid)
    // and verdict 0 at `hi`.
    let (mut lo, mut hi): (Option<usize>, usize) = (None, grid.len() - 1);
    while hi - lo.map_or(0, |l| l + 1) > 0 {
        let start = lo.map_or(0, |l| l + 1);
        let mid = start + (hi - start) / 2;
        if verdict(grid[mid])? {
            lo = Some(mid);
        } else {
            hi = mid;
        }
    }
    let (lower, upper) = match lo {
        None => (min_mag.times(width), Cost::new(5.0 * nf * 2f64.powi(grid[hi]))),
        Some(l) => {
            // Refine between the two grid exponents one integer step at a time.
            let (mut a, mut b) = (grid[l], grid[hi]);
            while b - a > 1 {
                let mid = a + (b - a) / 2;
                if verdict(mid)? {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            let lower = Cost::new(width * 2f64.powi(b - 1) / 15.0).max(min_mag.times(width));
            (lower, Cost::new(5.0 * nf * 2f64.powi(b)))
        }
    };
    Ok(ApproxEstimate {
        estimate: Cost::new((lower.get() * upper.get()).sqrt()),
        mode: ApproxMode::GapBracketed,
        lower,
        upper,
        gap_calls,
        samples,
    })
}
