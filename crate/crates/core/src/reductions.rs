//! Weighted edit distance, simple edit distance, LCS, and the padded-string reductions.
//!
//! Padding interleaves the null letter around every letter: `p(ab) = ∅a∅b∅`. Over a
//! null-augmented metric, `dtw(p(x), p(y)) = ed(x, y)`; over unit-cost Hamming space,
//! the insertion/deletion-only distance of the padded strings is exactly `2·ed(x, y)`.
//!
//! The factor 2 cannot be removed by any embedding: for `x = 0ⁿ` and `y = 1ⁿ` the
//! unpadded strings already have `ed = n` and `ed_S = 2n`, and no mapping of strings
//! does better than distortion 2 on every pair.

use crate::cost::Cost;
use crate::dtw_exact::dtw_quadratic;
use crate::error::{Error, Result};
use crate::metric::{Hamming, Metric, NullAugmented, Symbol};

/// A string together with its padded form `∅x₁∅x₂∅…xₙ∅`.
#[derive(Clone, Debug, PartialEq)]
pub struct PaddedStr<L> {
    underlying: Vec<L>,
    padded: Vec<L>,
}

impl<L: Copy> PaddedStr<L> {
    pub fn underlying(&self) -> &[L] {
        &self.underlying
    }

    pub fn padded(&self) -> &[L] {
        &self.padded
    }

    pub fn into_padded(self) -> Vec<L> {
        self.padded
    }
}

/// Pads `x` with the metric's null letter. `x` itself must not contain the null.
pub fn pad<M: Metric>(m: &NullAugmented<M>, x: &[M::Letter]) -> Result<PaddedStr<M::Letter>> {
    m.check_letters(x)?;
    if x.contains(&m.null()) {
        return Err(Error::InvalidParameter("string to pad already contains the null letter".into()));
    }
    let mut padded = Vec::with_capacity(2 * x.len() + 1);
    padded.push(m.null());
    for &l in x {
        padded.push(l);
        padded.push(m.null());
    }
    Ok(PaddedStr { underlying: x.to_vec(), padded })
}

/// Edit distance with substitution cost `d(a, b)` and insertion/deletion cost `|l|`.
pub fn ed_general<M: Metric>(m: &NullAugmented<M>, x: &[M::Letter], y: &[M::Letter]) -> Result<Cost> {
    m.check_letters(x)?;
    m.check_letters(y)?;
    Ok(edit_table(m, x, y, None))
}

/// Rolling-row edit DP; with `band = Some(k)` cells with `|i - j| > k` are infinite.
pub(crate) fn edit_table<M: Metric>(
    m: &NullAugmented<M>,
    x: &[M::Letter],
    y: &[M::Letter],
    band: Option<usize>,
) -> Cost {
    let cols = y.len();
    let k = band.unwrap_or(usize::MAX);
    if x.len().abs_diff(cols) > k {
        return Cost::INFINITY;
    }
    let ins: Vec<f64> = y.iter().map(|&b| m.magnitude(b).get()).collect();
    let inf = f64::INFINITY;
    let mut prev = vec![inf; cols + 1];
    let mut cur = vec![inf; cols + 1];
    prev[0] = 0.0;
    for j in 1..=cols.min(k) {
        prev[j] = prev[j - 1] + ins[j - 1];
    }
    for (i, &a) in x.iter().enumerate() {
        let i = i + 1;
        let del = m.magnitude(a).get();
        let lo = i.saturating_sub(k);
        let hi = cols.min(i.saturating_add(k));
        // Cells outside [lo, hi] must read as infinite on the next row.
        if lo > 0 {
            cur[lo - 1] = inf;
        }
        for j in lo..=hi {
            let mut best = prev[j] + del;
            if j > 0 {
                best = best.min(prev[j - 1] + m.dist(a, y[j - 1]).get()).min(cur[j - 1] + ins[j - 1]);
            }
            cur[j] = best;
        }
        if hi < cols {
            cur[hi + 1] = inf;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Cost::new(prev[cols])
}

/// `dtw(p(x), p(y))`, which equals [`ed_general`].
pub fn ed_via_dtw<M: Metric>(m: &NullAugmented<M>, x: &[M::Letter], y: &[M::Letter]) -> Result<Cost> {
    let (px, py) = (pad(m, x)?, pad(m, y)?);
    dtw_quadratic(m, px.padded(), py.padded())
}

/// Length of a longest common subsequence.
pub fn lcs<L: PartialEq>(x: &[L], y: &[L]) -> usize {
    let mut row = vec![0usize; y.len() + 1];
    for a in x {
        let mut diag = 0;
        for (j, b) in y.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if a == b { diag + 1 } else { up.max(row[j]) };
            diag = up;
        }
    }
    row[y.len()]
}

/// Edit distance with unit-cost insertions and deletions only: `|x| + |y| - 2·lcs(x, y)`.
pub fn ed_simple<L: PartialEq>(x: &[L], y: &[L]) -> Cost {
    Cost::from(x.len() + y.len() - 2 * lcs(x, y))
}

/// `ed_S(p(x), p(y)) / 2`, which equals the unit-cost edit distance over Hamming space.
pub fn ed_via_lcs(m: &NullAugmented<Hamming>, x: &[Symbol], y: &[Symbol]) -> Result<Cost> {
    let (px, py) = (pad(m, x)?, pad(m, y)?);
    Ok(ed_simple(px.padded(), py.padded()).times(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{ed_bruteforce, lcs_bruteforce};

    fn syms(s: &str) -> Vec<Symbol> {
        s.bytes().map(|b| Symbol(u32::from(b - b'a'))).collect()
    }

    #[test]
    fn padding() {
        let m = NullAugmented::hamming(26);
        let n = m.null();
        let (a, b) = (Symbol(0), Symbol(1));
        assert_eq!(pad(&m, &[a, b]).unwrap().padded(), &[n, a, n, b, n]);
        assert_eq!(pad(&m, &[]).unwrap().padded(), &[n]);
        assert_eq!(pad(&m, &[a, a, a]).unwrap().padded(), &[n, a, n, a, n, a, n]);
        assert!(pad(&m, &[a, n]).is_err());
    }

    #[test]
    fn edit_distance_examples() {
        let m = NullAugmented::hamming(26);
        let s = syms("abcab");
        assert_eq!(ed_general(&m, &s, &s).unwrap(), Cost::ZERO);
        assert_eq!(ed_general(&m, &syms("ab"), &syms("b")).unwrap(), Cost::new(1.0));
        assert_eq!(ed_general(&m, &syms("ab"), &syms("ba")).unwrap(), Cost::new(2.0));
        assert_eq!(ed_general(&m, &[], &syms("abc")).unwrap(), Cost::new(3.0));
        assert_eq!(ed_general(&m, &[], &[]).unwrap(), Cost::ZERO);
    }

    #[test]
    fn real_line_edit_distance_matches_oracle() {
        let m = NullAugmented::real_line();
        let x = [1.0, 3.5, -2.0];
        let y = [3.0, 1.25, 1.0, -2.0];
        let want = ed_bruteforce(&m, &x, &y).unwrap();
        assert_eq!(ed_general(&m, &x, &y).unwrap(), want);
        assert!((ed_via_dtw(&m, &x, &y).unwrap().get() - want.get()).abs() < 1e-9);
    }

    #[test]
    fn banded_table_overestimates_then_converges() {
        let m = NullAugmented::hamming(26);
        let (x, y) = (syms("ab"), syms("b"));
        assert!(edit_table(&m, &x, &y, Some(0)) > Cost::new(1.0));
        assert_eq!(edit_table(&m, &x, &y, Some(1)), Cost::new(1.0));
        let (x, y) = (syms("abcabba"), syms("cbabac"));
        let full = ed_general(&m, &x, &y).unwrap();
        let mut last = Cost::INFINITY;
        for k in 0..=7 {
            let v = edit_table(&m, &x, &y, Some(k));
            assert!(v >= full && v <= last);
            last = v;
        }
        assert_eq!(last, full);
    }

    #[test]
    fn reductions_examples() {
        let m = NullAugmented::hamming(26);
        let s = syms("abcab");
        assert_eq!(ed_via_dtw(&m, &s, &s).unwrap(), Cost::ZERO);
        assert_eq!(ed_via_dtw(&m, &syms("ab"), &syms("b")).unwrap(), Cost::new(1.0));
        assert_eq!(ed_via_lcs(&m, &s, &s).unwrap(), Cost::ZERO);
        assert_eq!(ed_via_lcs(&m, &syms("ab"), &syms("ba")).unwrap(), Cost::new(2.0));
        let (pa, pb) = (pad(&m, &syms("ab")).unwrap(), pad(&m, &syms("ba")).unwrap());
        assert_eq!(ed_simple(pa.padded(), pb.padded()), Cost::new(4.0));
    }

    #[test]
    fn lcs_and_simple_edit_examples() {
        assert_eq!(lcs(b"abcab", b"abcab"), 5);
        assert_eq!(lcs(b"ab", b"ba"), 1);
        assert_eq!(lcs(b"abcbdab", b"bdcaba"), 4);
        assert_eq!(lcs(b"abcbdab", b"bdcaba"), lcs_bruteforce(b"abcbdab", b"bdcaba").unwrap());
        assert_eq!(ed_simple(b"ab", b"ba"), Cost::new(2.0));
        assert_eq!(ed_simple(b"abc", b""), Cost::new(3.0));
    }

    #[test]
    fn identity_embedding_distortion_two_witness() {
        let m = NullAugmented::hamming(2);
        for n in 1..20 {
            let (x, y) = (vec![Symbol(0); n], vec![Symbol(1); n]);
            let ed = ed_general(&m, &x, &y).unwrap();
            let eds = ed_simple(&x, &y);
            assert_eq!(ed, Cost::from(n));
            assert_eq!(eds, ed.times(2.0));
        }
    }
}
