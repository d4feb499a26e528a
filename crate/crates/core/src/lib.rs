//! Exact, low-distance and approximate dynamic time warping and edit distance over
//! metric alphabets.
//!
//! * [`dtw_exact`]: quadratic, banded, run-based bounded (`O(n·K)`) and doubling DTW.
//! * [`tree`] and [`dtw_approx`]: well-separated tree metrics, their simplification, and
//!   the `O(n^ε)` DTW approximation, including a wrapper for real-valued strings.
//! * [`reductions`]: weighted edit distance, LCS, and the padded-string reductions of
//!   edit distance to DTW and to insertion/deletion distance.
//! * [`edit_approx`]: the randomized `O(n^ε)` edit distance approximation.
//! * [`oracles`]: exhaustive reference implementations for small inputs.
//!
//! ```
//! use seqdist::{dtw_doubling, dtw_quadratic, Hamming, Symbol};
//!
//! let h = Hamming::new(2);
//! let x: Vec<Symbol> = [0, 1, 1, 1].map(Symbol).to_vec();
//! let y: Vec<Symbol> = [0, 0, 0, 1].map(Symbol).to_vec();
//! assert_eq!(dtw_doubling(&h, &x, &y).unwrap(), dtw_quadratic(&h, &x, &y).unwrap());
//! ```

pub mod cost;
pub mod dtw_approx;
pub mod dtw_exact;
pub mod edit_approx;
pub mod error;
pub mod gen;
pub mod io;
pub mod metric;
pub mod oracles;
pub mod reductions;
pub mod runlen;
pub mod tree;

pub use cost::Cost;
pub use dtw_approx::{dtw_approx_reals, dtw_approximate, dtw_gap, ApproxEstimate, ApproxMode, GapVerdict};
pub use dtw_exact::{
    dtw_banded, dtw_bounded, dtw_doubling, dtw_quadratic, dtw_threshold_or_exceed, BoundedResult, ThresholdResult,
};
pub use edit_approx::{ed_approximate, ed_banded, ed_gap, simplify_magnitude, EditGapVerdict};
pub use error::{Error, Result};
pub use metric::{Alphabet, FiniteMetric, Hamming, Metric, NullAugmented, RealLine, Symbol, TableMetric};
pub use reductions::{ed_general, ed_simple, ed_via_dtw, ed_via_lcs, lcs, pad, PaddedStr};
pub use runlen::{correspondence_cost, encode_runs, is_expansion, Correspondence, RunEncoding};
pub use tree::{embed_reals, simplify_tree, tree_distance, NodeId, WellSeparatedTree};
