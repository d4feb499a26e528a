//! Seeded instance generators for tests, benchmarks and the `gen` command.

use rand::Rng;

use crate::metric::{Symbol, TableMetric};
use crate::tree::WellSeparatedTree;

pub fn random_symbols<R: Rng + ?Sized>(rng: &mut R, len: usize, alphabet: u32) -> Vec<Symbol> {
    (0..len).map(|_| Symbol(rng.random_range(0..alphabet))).collect()
}

/// Integer-valued reals in `[lo, hi]`, so the aspect ratio stays polynomial.
pub fn random_int_reals<R: Rng + ?Sized>(rng: &mut R, len: usize, lo: i32, hi: i32) -> Vec<f64> {
    (0..len).map(|_| f64::from(rng.random_range(lo..=hi))).collect()
}

/// Applies `edits` random substitutions, insertions and deletions, drawing new letters from `letter`.
pub fn mutate<L: Copy, R: Rng + ?Sized>(
    rng: &mut R,
    x: &[L],
    edits: usize,
    mut letter: impl FnMut(&mut R) -> L,
) -> Vec<L> {
    let mut out = x.to_vec();
    for _ in 0..edits {
        match rng.random_range(0..3) {
            0 if !out.is_empty() => {
                let i = rng.random_range(0..out.len());
                out[i] = letter(rng);
            }
            1 if !out.is_empty() => {
                let i = rng.random_range(0..out.len());
                out.remove(i);
            }
            _ => {
                let i = rng.random_range(0..=out.len());
                let l = letter(rng);
                out.insert(i, l);
            }
        }
    }
    out
}

/// The banded-heuristic failure family `x = a b^(n-1)`, `y = a^(n-1) b` over letters
/// `a = 0`, `b = 1`, with `planted` isolated `c = 2` letters spread through the `b` run of `x`.
///
/// `dtw(x, y) = planted` under unit distances. Needs `n >= 2·planted + 2`.
pub fn band_adversarial(n: usize, planted: usize) -> (Vec<Symbol>, Vec<Symbol>) {
    assert!(n >= 2 * planted + 2, "length {n} too short for {planted} planted letters");
    let (a, b, c) = (Symbol(0), Symbol(1), Symbol(2));
    let mut x = vec![b; n];
    x[0] = a;
    let mut y = vec![a; n];
    y[n - 1] = b;
    let gap = (n - 1) / (planted + 1);
    for k in 1..=planted {
        x[k * gap] = c;
    }
    (x, y)
}

/// A random well-separated tree on `nodes` nodes with power-of-two integer edge weights
/// in `[1, 2^top_exponent]`.
///
/// Node `i > 0` hangs off a uniformly random earlier node, so the expected depth is logarithmic.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, nodes: usize, top_exponent: u32) -> WellSeparatedTree {
    assert!(nodes >= 1);
    let mut parent = vec![0usize; nodes];
    let mut exp = vec![top_exponent; nodes];
    for i in 1..nodes {
        let p = rng.random_range(0..i);
        parent[i] = p;
        exp[i] = rng.random_range(0..=exp[p]);
    }
    let weight = exp.iter().map(|&e| f64::from(1u32 << e)).collect();
    let labels = (0..nodes).map(|i| format!("v{i}")).collect();
    WellSeparatedTree::from_indices(labels, parent, weight).expect("construction is well separated")
}

/// A random metric on `size` letters: integer edge weights in `[1, max_weight]` closed
/// under shortest paths.
#[allow(clippy::needless_range_loop)]
pub fn random_table_metric<R: Rng + ?Sized>(rng: &mut R, size: usize, max_weight: u32) -> TableMetric {
    let mut d = vec![vec![0.0f64; size]; size];
    for i in 0..size {
        for j in i + 1..size {
            let w = f64::from(rng.random_range(1..=max_weight));
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for k in 0..size {
        for i in 0..size {
            for j in 0..size {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    TableMetric::new(d).expect("shortest-path closure is a metric")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::Cost;
    use crate::dtw_exact::dtw_quadratic;
    use crate::metric::{validate_metric, Hamming, Metric};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn adversarial_family_has_planted_distance() {
        for k in 0..4 {
            let (x, y) = band_adversarial(40, k);
            assert_eq!(dtw_quadratic(&Hamming::new(3), &x, &y).unwrap(), Cost::from(k));
        }
    }

    #[test]
    fn generated_metrics_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let t = random_tree(&mut rng, 30, 5);
            assert!(validate_metric(&t).is_empty());
            let m = random_table_metric(&mut rng, 6, 5);
            assert!(validate_metric(&m).is_empty());
            assert!(m.min_nonzero_distance().unwrap() >= Cost::new(1.0));
        }
    }

    #[test]
    fn mutation_is_deterministic_per_seed() {
        let x = random_symbols(&mut ChaCha8Rng::seed_from_u64(1), 20, 4);
        let a = mutate(&mut ChaCha8Rng::seed_from_u64(2), &x, 5, |r| Symbol(r.random_range(0..4)));
        let b = mutate(&mut ChaCha8Rng::seed_from_u64(2), &x, 5, |r| Symbol(r.random_range(0..4)));
        assert_eq!(a, b);
    }
}
