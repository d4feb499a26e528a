//! Exhaustive reference implementations for cross-checking the dynamic programs.
//!
//! Each oracle enumerates its whole search space without memoization and refuses
//! inputs above a fixed size guard with [`Error::GuardExceeded`].

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::metric::{Metric, NullAugmented};
use crate::runlen::Correspondence;

pub const DTW_GUARD: usize = 64;
pub const ED_GUARD: usize = 12;
pub const LCS_GUARD: usize = 16;

/// Minimum correspondence cost over every monotone warping path. Requires `|x|·|y| <= 64`.
pub fn dtw_bruteforce<M: Metric>(m: &M, x: &[M::Letter], y: &[M::Letter]) -> Result<Cost> {
    Ok(dtw_bruteforce_path(m, x, y)?.0)
}

/// [`dtw_bruteforce`] plus one optimal path, chosen as the shortest among the cheapest.
pub fn dtw_bruteforce_path<M: Metric>(
    m: &M,
    x: &[M::Letter],
    y: &[M::Letter],
) -> Result<(Cost, Option<Correspondence>)> {
    if x.len() * y.len() > DTW_GUARD {
        return Err(Error::GuardExceeded(format!("dtw oracle needs |x|·|y| <= {DTW_GUARD}")));
    }
    match (x.is_empty(), y.is_empty()) {
        (true, true) => return Ok((Cost::ZERO, None)),
        (false, false) => {}
        _ => return Err(Error::EmptyInput("dtw needs both strings nonempty (or both empty)")),
    }
    m.check_letters(x)?;
    m.check_letters(y)?;

    struct Search<'a, M: Metric> {
        m: &'a M,
        x: &'a [M::Letter],
        y: &'a [M::Letter],
        path: Vec<(usize, usize)>,
        best: Option<(Cost, Vec<(usize, usize)>)>,
    }
    impl<M: Metric> Search<'_, M> {
        fn go(&mut self, i: usize, j: usize, acc: Cost) {
            let acc = acc + self.m.dist(self.x[i], self.y[j]);
            self.path.push((i, j));
            if i + 1 == self.x.len() && j + 1 == self.y.len() {
                let better = match &self.best {
                    None => true,
                    Some((c, p)) => acc < *c || (acc == *c && self.path.len() < p.len()),
                };
                if better {
                    self.best = Some((acc, self.path.clone()));
                }
            } else {
                if i + 1 < self.x.len() {
                    self.go(i + 1, j, acc);
                }
                if j + 1 < self.y.len() {
                    self.go(i, j + 1, acc);
                }
                if i + 1 < self.x.len() && j + 1 < self.y.len() {
                    self.go(i + 1, j + 1, acc);
                }
            }
            self.path.pop();
        }
    }

    let mut s = Search { m, x, y, path: Vec::new(), best: None };
    s.go(0, 0, Cost::ZERO);
    let (cost, path) = s.best.expect("at least one path exists");
    Ok((cost, Some(Correspondence::new(path, x.len(), y.len())?)))
}

/// Minimum edit cost by enumerating alignments. Requires `|x| + |y| <= 12`.
///
/// Any edit sequence can be reordered into substitutions of matched pairs plus one
/// deletion or insertion per unmatched letter without increasing its cost (by the
/// triangle inequality through the null), so monotone matchings cover all optima.
pub fn ed_bruteforce<M: Metric>(m: &NullAugmented<M>, x: &[M::Letter], y: &[M::Letter]) -> Result<Cost> {
    if x.len() + y.len() > ED_GUARD {
        return Err(Error::GuardExceeded(format!("edit oracle needs |x| + |y| <= {ED_GUARD}")));
    }
    m.check_letters(x)?;
    m.check_letters(y)?;
    Ok(align(x, y, &|a, b| m.dist(a, b), &|l| m.magnitude(l)))
}

/// Insertion/deletion-only distance by enumeration, unit costs. Requires `|x| + |y| <= 12`.
pub fn ed_simple_bruteforce<L: Copy + PartialEq>(x: &[L], y: &[L]) -> Result<Cost> {
    if x.len() + y.len() > ED_GUARD {
        return Err(Error::GuardExceeded(format!("indel oracle needs |x| + |y| <= {ED_GUARD}")));
    }
    let subst = |a: L, b: L| if a == b { Cost::ZERO } else { Cost::INFINITY };
    Ok(align(x, y, &subst, &|_| Cost::new(1.0)))
}

/// Enumerates every alignment: each step deletes `x[0]`, inserts `y[0]`, or pairs them.
fn align<L: Copy>(x: &[L], y: &[L], subst: &dyn Fn(L, L) -> Cost, indel: &dyn Fn(L) -> Cost) -> Cost {
    match (x.split_first(), y.split_first()) {
        (None, _) => y.iter().map(|&b| indel(b)).sum(),
        (_, None) => x.iter().map(|&a| indel(a)).sum(),
        (Some((&a, xs)), Some((&b, ys))) => {
            let pair = subst(a, b) + align(xs, ys, subst, indel);
            let del = indel(a) + align(xs, y, subst, indel);
            let ins = indel(b) + align(x, ys, subst, indel);
            pair.min(del).min(ins)
        }
    }
}

/// Longest common subsequence length over all subsets of `x`. Requires `|x| <= 16`.
pub fn lcs_bruteforce<L: PartialEq>(x: &[L], y: &[L]) -> Result<usize> {
    if x.len() > LCS_GUARD {
        return Err(Error::GuardExceeded(format!("lcs oracle needs |x| <= {LCS_GUARD}")));
    }
    let mut best = 0;
    for mask in 0u32..1 << x.len() {
        let len = mask.count_ones() as usize;
        if len <= best {
            continue;
        }
        let mut ys = y.iter();
        let is_sub = (0..x.len()).filter(|i| mask >> i & 1 == 1).all(|i| ys.any(|b| *b == x[i]));
        if is_sub {
            best = len;
        }
    }
    Ok(best)
}
