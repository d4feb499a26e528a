//! Run-length decomposition, expansions, and correspondences.
//!
//! A *run* is a maximal block of equal consecutive letters. An *expansion* of a
//! string lengthens some of its runs. A correspondence between `x` and `y` is a
//! pair of equal-length expansions; it is stored here as the equivalent monotone
//! warping path of index pairs.

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::metric::Metric;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Run<L> {
    pub letter: L,
    pub len: usize,
}

/// A string as a sequence of maximal runs plus cumulative end offsets.
#[derive(Clone, Debug, PartialEq)]
pub struct RunEncoding<L> {
    runs: Vec<Run<L>>,
    /// `ends[i]` is the total length of runs `0..=i`.
    ends: Vec<usize>,
}

impl<L: Copy + PartialEq> RunEncoding<L> {
    pub fn encode(s: &[L]) -> RunEncoding<L> {
        let mut runs: Vec<Run<L>> = Vec::new();
        for &l in s {
            match runs.last_mut() {
                Some(run) if run.letter == l => run.len += 1,
                _ => runs.push(Run { letter: l, len: 1 }),
            }
        }
        RunEncoding::from_valid_runs(runs)
    }

    /// Builds an encoding from explicit runs; rejects empty runs and equal neighbours.
    pub fn from_runs(runs: Vec<(L, usize)>) -> Result<RunEncoding<L>> {
        let runs: Vec<Run<L>> = runs.into_iter().map(|(letter, len)| Run { letter, len }).collect();
        if runs.iter().any(|r| r.len == 0) {
            return Err(Error::Parse("run of length zero".into()));
        }
        if runs.windows(2).any(|w| w[0].letter == w[1].letter) {
            return Err(Error::Parse("adjacent runs share a letter".into()));
        }
        Ok(RunEncoding::from_valid_runs(runs))
    }

    fn from_valid_runs(runs: Vec<Run<L>>) -> RunEncoding<L> {
        let ends = runs
            .iter()
            .scan(0usize, |acc, r| {
                *acc += r.len;
                Some(*acc)
            })
            .collect();
        RunEncoding { runs, ends }
    }

    pub fn runs(&self) -> &[Run<L>] {
        &self.runs
    }

    pub fn num_runs(&self) -> usize {
        self.runs.len()
    }

    /// Cumulative run end offsets (strictly increasing).
    pub fn prefix_lengths(&self) -> &[usize] {
        &self.ends
    }

    pub fn total_len(&self) -> usize {
        self.ends.last().copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn decode(&self) -> Vec<L> {
        let mut out = Vec::with_capacity(self.total_len());
        for r in &self.runs {
            out.extend(std::iter::repeat_n(r.letter, r.len));
        }
        out
    }
}

pub fn encode_runs<L: Copy + PartialEq>(s: &[L]) -> RunEncoding<L> {
    RunEncoding::encode(s)
}

/// True iff `candidate` can be obtained from `base` by lengthening runs.
pub fn is_expansion<L: Copy + PartialEq>(base: &[L], candidate: &[L]) -> bool {
    let b = RunEncoding::encode(base);
    let c = RunEncoding::encode(candidate);
    b.num_runs() == c.num_runs()
        && b.runs().iter().zip(c.runs()).all(|(rb, rc)| rb.letter == rc.letter && rc.len >= rb.len)
}

/// A monotone warping path between positions of `x` and `y`.
///
/// Starts at `(0, 0)`, ends at `(|x|-1, |y|-1)`, and each step advances one or both
/// indices by exactly one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correspondence {
    pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    pub fn new(pairs: Vec<(usize, usize)>, x_len: usize, y_len: usize) -> Result<Correspondence> {
        Correspondence::validate(&pairs, x_len, y_len)?;
        Ok(Correspondence { pairs })
    }

    pub fn validate(pairs: &[(usize, usize)], x_len: usize, y_len: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidCorrespondence(msg));
        if x_len == 0 || y_len == 0 {
            return bad("strings must be nonempty".into());
        }
        match (pairs.first(), pairs.last()) {
            (Some(&(0, 0)), Some(&end)) if end == (x_len - 1, y_len - 1) => {}
            _ => return bad(format!("path must run from (0,0) to ({}, {})", x_len - 1, y_len - 1)),
        }
        for w in pairs.windows(2) {
            let (di, dj) = (w[1].0.wrapping_sub(w[0].0), w[1].1.wrapping_sub(w[0].1));
            if !matches!((di, dj), (1, 0) | (0, 1) | (1, 1)) {
                return bad(format!("illegal step {:?} -> {:?}", w[0], w[1]));
            }
        }
        Ok(())
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The two equal-length expansions this path describes.
    pub fn expansions<L: Copy>(&self, x: &[L], y: &[L]) -> (Vec<L>, Vec<L>) {
        self.pairs.iter().map(|&(i, j)| (x[i], y[j])).unzip()
    }
}

/// Sum of letter distances over the matched pairs of `c`.
pub fn correspondence_cost<M: Metric>(m: &M, x: &[M::Letter], y: &[M::Letter], c: &Correspondence) -> Result<Cost> {
    Correspondence::validate(c.pairs(), x.len(), y.len())?;
    c.pairs().iter().map(|&(i, j)| m.checked_dist(x[i], y[j])).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{Hamming, Symbol};

    fn syms(s: &str) -> Vec<Symbol> {
        s.bytes().map(|b| Symbol(u32::from(b - b'a'))).collect()
    }

    #[test]
    fn encodes_runs() {
        let e = RunEncoding::encode(b"aaaccbbd");
        let runs: Vec<(u8, usize)> = e.runs().iter().map(|r| (r.letter, r.len)).collect();
        assert_eq!(runs, vec![(b'a', 3), (b'c', 2), (b'b', 2), (b'd', 1)]);
        assert_eq!(e.prefix_lengths(), &[3, 5, 7, 8]);
        assert_eq!(e.decode(), b"aaaccbbd".to_vec());

        assert!(RunEncoding::<u8>::encode(&[]).is_empty());
        assert_eq!(RunEncoding::encode(b"abab").num_runs(), 4);
    }

    #[test]
    fn from_runs_rejects_malformed() {
        assert!(RunEncoding::from_runs(vec![(b'a', 0)]).is_err());
        assert!(RunEncoding::from_runs(vec![(b'a', 1), (b'a', 2)]).is_err());
        assert_eq!(RunEncoding::from_runs(vec![(b'a', 2), (b'b', 1)]).unwrap().decode(), b"aab");
    }

    #[test]
    fn expansions() {
        assert!(is_expansion(b"aaaccbbd", b"aaacccccbbdd"));
        assert!(is_expansion(b"abc", b"abc"));
        assert!(!is_expansion(b"ab", b"ba"));
        assert!(!is_expansion(b"aab", b"ab"));
        assert!(is_expansion::<u8>(b"", b""));
    }

    #[test]
    fn correspondence_costs() {
        let h = Hamming::new(26);
        let x = syms("ab");
        let y = syms("ba");
        let diag = Correspondence::new(vec![(0, 0), (1, 1)], 2, 2).unwrap();
        assert_eq!(correspondence_cost(&h, &x, &y, &diag).unwrap(), Cost::new(2.0));
        assert_eq!(correspondence_cost(&h, &x, &x, &diag).unwrap(), Cost::ZERO);
    }

    #[test]
    fn worked_example_pairing_costs_three() {
        // efabbcccc against ffaabcc, with x's `a` run and y's `b` run extended
        let h = Hamming::new(26);
        let x = syms("efabbcccc");
        let y = syms("ffaabcc");
        let path = vec![(0, 0), (1, 1), (2, 2), (2, 3), (3, 4), (4, 4), (5, 4), (6, 4), (7, 5), (8, 6)];
        let c = Correspondence::new(path, x.len(), y.len()).unwrap();
        assert_eq!(correspondence_cost(&h, &x, &y, &c).unwrap(), Cost::new(3.0));
        let (ex, ey) = c.expansions(&x, &y);
        assert!(is_expansion(&x, &ex));
        assert!(is_expansion(&y, &ey));
    }

    #[test]
    fn invalid_correspondences_rejected() {
        assert!(Correspondence::new(vec![(0, 0), (2, 1)], 3, 2).is_err());
        assert!(Correspondence::new(vec![(0, 0), (1, 0)], 2, 2).is_err());
        assert!(Correspondence::new(vec![(0, 1), (1, 1)], 2, 2).is_err());
        assert!(Correspondence::new(vec![(0, 0), (1, 1), (1, 0), (1, 1)], 2, 2).is_err());
        let h = Hamming::new(2);
        let c = Correspondence::new(vec![(0, 0)], 1, 1).unwrap();
        assert!(correspondence_cost(&h, &[Symbol(0), Symbol(0)], &[Symbol(0)], &c).is_err());
    }
}
