//! Alphabets, metric spaces, and the null-augmented metrics used for edit distance.
//!
//! A [`Metric`] owns a letter type and a distance function. The concrete spaces are
//! generalized [`Hamming`] space, the [`RealLine`], arbitrary finite [`TableMetric`]s
//! loaded from a distance table, and well-separated trees (see [`crate::tree`]).
//! [`NullAugmented`] designates one letter of a metric as the null element `∅`, whose
//! distance to a letter is that letter's magnitude (its insertion/deletion cost).

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cost::Cost;
use crate::error::{Error, Result};

/// Opaque letter identifier for finite alphabets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Symbol(pub u32);

impl Symbol {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A distance oracle over a set of letters.
///
/// Implementations must satisfy the metric axioms; [`validate_metric`] checks them
/// exhaustively for finite alphabets.
pub trait Metric {
    type Letter: Copy + PartialEq + fmt::Debug;

    fn dist(&self, a: Self::Letter, b: Self::Letter) -> Cost;

    fn contains(&self, a: Self::Letter) -> bool;

    /// Smallest nonzero distance between two letters of the alphabet, or `None` when the
    /// alphabet has no positive minimum (the real line).
    fn min_nonzero_distance(&self) -> Option<Cost>;

    /// Largest distance between two letters, or `None` when unbounded.
    fn max_distance(&self) -> Option<Cost>;

    /// True when every distance is a whole number, so cost sums are exact.
    fn is_integral(&self) -> bool {
        false
    }

    fn checked_dist(&self, a: Self::Letter, b: Self::Letter) -> Result<Cost> {
        for l in [a, b] {
            if !self.contains(l) {
                return Err(Error::UnknownLetter(format!("{l:?}")));
            }
        }
        Ok(self.dist(a, b))
    }

    fn check_letters(&self, s: &[Self::Letter]) -> Result<()> {
        match s.iter().find(|l| !self.contains(**l)) {
            Some(l) => Err(Error::UnknownLetter(format!("{l:?}"))),
            None => Ok(()),
        }
    }

    /// Lower bound on the distance between any two distinct letters occurring in `x` or `y`.
    ///
    /// Infinite when the strings use a single letter between them.
    fn separation(&self, x: &[Self::Letter], y: &[Self::Letter]) -> Cost {
        if let Some(d) = self.min_nonzero_distance() {
            return d;
        }
        let letters = distinct(x.iter().chain(y).copied());
        let mut best = Cost::INFINITY;
        for (i, &a) in letters.iter().enumerate() {
            for &b in &letters[i + 1..] {
                let d = self.dist(a, b);
                if d > Cost::ZERO {
                    best = best.min(d);
                }
            }
        }
        best
    }

    /// Upper bound on the distance between any two letters occurring in `x` or `y`.
    fn diameter(&self, x: &[Self::Letter], y: &[Self::Letter]) -> Cost {
        if let Some(d) = self.max_distance() {
            return d;
        }
        let letters = distinct(x.iter().chain(y).copied());
        let mut best = Cost::ZERO;
        for (i, &a) in letters.iter().enumerate() {
            for &b in &letters[i + 1..] {
                best = best.max(self.dist(a, b));
            }
        }
        best
    }
}

impl<M: Metric + ?Sized> Metric for &M {
    type Letter = M::Letter;

    #[inline]
    fn dist(&self, a: Self::Letter, b: Self::Letter) -> Cost {
        (**self).dist(a, b)
    }
    fn contains(&self, a: Self::Letter) -> bool {
        (**self).contains(a)
    }
    fn min_nonzero_distance(&self) -> Option<Cost> {
        (**self).min_nonzero_distance()
    }
    fn max_distance(&self) -> Option<Cost> {
        (**self).max_distance()
    }
    fn is_integral(&self) -> bool {
        (**self).is_integral()
    }
    fn separation(&self, x: &[Self::Letter], y: &[Self::Letter]) -> Cost {
        (**self).separation(x, y)
    }
    fn diameter(&self, x: &[Self::Letter], y: &[Self::Letter]) -> Cost {
        (**self).diameter(x, y)
    }
}

/// A metric over a finite, enumerable alphabet.
pub trait FiniteMetric: Metric {
    fn letters(&self) -> Vec<Self::Letter>;
}

impl<M: FiniteMetric + ?Sized> FiniteMetric for &M {
    fn letters(&self) -> Vec<Self::Letter> {
        (**self).letters()
    }
}

fn distinct<L: PartialEq>(it: impl Iterator<Item = L>) -> Vec<L> {
    let mut out: Vec<L> = Vec::new();
    for l in it {
        if !out.contains(&l) {
            out.push(l);
        }
    }
    out
}

/// Generalized Hamming space over `size` letters: distinct letters are at distance 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hamming {
    size: u32,
}

impl Hamming {
    pub const fn new(size: u32) -> Hamming {
        Hamming { size }
    }

    pub fn size(&self) -> u32 {
        self.size
    }
}

impl Metric for Hamming {
    type Letter = Symbol;

    #[inline]
    fn dist(&self, a: Symbol, b: Symbol) -> Cost {
        if a == b {
            Cost::ZERO
        } else {
            Cost::new(1.0)
        }
    }
    fn contains(&self, a: Symbol) -> bool {
        a.0 < self.size
    }
    fn min_nonzero_distance(&self) -> Option<Cost> {
        Some(Cost::new(1.0))
    }
    fn max_distance(&self) -> Option<Cost> {
        Some(if self.size > 1 { Cost::new(1.0) } else { Cost::ZERO })
    }
    fn is_integral(&self) -> bool {
        true
    }
}

impl FiniteMetric for Hamming {
    fn letters(&self) -> Vec<Symbol> {
        (0..self.size).map(Symbol).collect()
    }
}

/// The real line with `d(a, b) = |a - b|`. Letters are finite `f64` values.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RealLine;

impl Metric for RealLine {
    type Letter = f64;

    #[inline]
    fn dist(&self, a: f64, b: f64) -> Cost {
        Cost::new((a - b).abs())
    }
    fn contains(&self, a: f64) -> bool {
        a.is_finite()
    }
    fn min_nonzero_distance(&self) -> Option<Cost> {
        None
    }
    fn max_distance(&self) -> Option<Cost> {
        None
    }

    fn separation(&self, x: &[f64], y: &[f64]) -> Cost {
        let mut v: Vec<f64> = x.iter().chain(y).copied().collect();
        v.sort_by(f64::total_cmp);
        v.windows(2)
            .map(|w| w[1] - w[0])
            .filter(|&g| g > 0.0)
            .map(Cost::new)
            .min()
            .unwrap_or(Cost::INFINITY)
    }

    fn diameter(&self, x: &[f64], y: &[f64]) -> Cost {
        let (lo, hi) = x
            .iter()
            .chain(y)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        if lo <= hi {
            Cost::new(hi - lo)
        } else {
            Cost::ZERO
        }
    }
}

/// An arbitrary finite metric given by its full distance table.
#[derive(Clone, Debug, PartialEq)]
pub struct TableMetric {
    size: usize,
    table: Vec<f64>,
    min_nonzero: Option<Cost>,
    max: Cost,
    integral: bool,
}

impl TableMetric {
    /// Builds a table metric and verifies the metric axioms on every triple.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<TableMetric> {
        let m = TableMetric::unvalidated(rows)?;
        let violations = validate_metric(&m);
        if let Some(first) = violations.first() {
            return Err(Error::InvalidMetric(format!(
                "{} axiom violation(s), first: {first}",
                violations.len()
            )));
        }
        Ok(m)
    }

    /// Builds a table after checking only shape and value ranges.
    pub fn unvalidated(rows: Vec<Vec<f64>>) -> Result<TableMetric> {
        let size = rows.len();
        let mut table = Vec::with_capacity(size * size);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != size {
                return Err(Error::InvalidMetric(format!(
                    "row {i} has {} entries, expected {size}",
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                return Err(Error::InvalidMetric(format!("row {i} contains invalid distance {v}")));
            }
            table.extend(row);
        }
        let min_nonzero = table.iter().copied().filter(|&v| v > 0.0).map(Cost::new).min();
        let max = table.iter().copied().map(Cost::new).max().unwrap_or(Cost::ZERO);
        let integral = table.iter().all(|v| v.fract() == 0.0);
        Ok(TableMetric { size, table, min_nonzero, max, integral })
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

impl Metric for TableMetric {
    type Letter = Symbol;

    #[inline]
    fn dist(&self, a: Symbol, b: Symbol) -> Cost {
        Cost::new(self.table[a.index() * self.size + b.index()])
    }
    fn contains(&self, a: Symbol) -> bool {
        a.index() < self.size
    }
    fn min_nonzero_distance(&self) -> Option<Cost> {
        // An all-zero table has no nonzero distance; any positive bound is vacuously valid.
        Some(self.min_nonzero.unwrap_or(Cost::new(1.0)))
    }
    fn max_distance(&self) -> Option<Cost> {
        Some(self.max)
    }
    fn is_integral(&self) -> bool {
        self.integral
    }
}

impl FiniteMetric for TableMetric {
    fn letters(&self) -> Vec<Symbol> {
        (0..self.size as u32).map(Symbol).collect()
    }
}

/// A metric with one designated letter playing the null element `∅`.
#[derive(Clone, Debug, PartialEq)]
pub struct NullAugmented<M: Metric> {
    inner: M,
    null: M::Letter,
}

impl<M: Metric> NullAugmented<M> {
    pub fn new(inner: M, null: M::Letter) -> Result<Self> {
        if !inner.contains(null) {
            return Err(Error::UnknownLetter(format!("null element {null:?}")));
        }
        Ok(NullAugmented { inner, null })
    }

    pub fn inner(&self) -> &M {
        &self.inner
    }

    pub fn null(&self) -> M::Letter {
        self.null
    }

    /// `|l| = d(∅, l)`, the cost of inserting or deleting `l`.
    #[inline]
    pub fn magnitude(&self, l: M::Letter) -> Cost {
        self.inner.dist(self.null, l)
    }

    pub fn checked_magnitude(&self, l: M::Letter) -> Result<Cost> {
        self.inner.checked_dist(self.null, l)
    }

    /// Smallest magnitude among the given letters (`None` for an empty input).
    pub fn min_magnitude<'a>(&self, letters: impl IntoIterator<Item = &'a M::Letter>) -> Option<Cost>
    where
        M::Letter: 'a,
    {
        letters.into_iter().map(|&l| self.magnitude(l)).min()
    }

    /// Checks that every given letter has magnitude at least `floor`.
    pub fn check_magnitudes_at_least(&self, letters: &[M::Letter], floor: Cost) -> Result<()> {
        match letters.iter().find(|&&l| self.magnitude(l) < floor) {
            Some(l) => Err(Error::InvalidParameter(format!(
                "letter {l:?} has magnitude {} below {floor}",
                self.magnitude(*l)
            ))),
            None => Ok(()),
        }
    }
}

impl NullAugmented<Hamming> {
    /// Hamming space over `size` letters plus a null at unit distance from all of them,
    /// stored as `Symbol(size)`.
    pub fn hamming(size: u32) -> Self {
        NullAugmented { inner: Hamming::new(size + 1), null: Symbol(size) }
    }
}

impl NullAugmented<RealLine> {
    /// The real line with the origin as null, so `|l| = |l - 0|`.
    pub fn real_line() -> Self {
        NullAugmented { inner: RealLine, null: 0.0 }
    }
}

impl<M: Metric> Metric for NullAugmented<M> {
    type Letter = M::Letter;

    #[inline]
    fn dist(&self, a: Self::Letter, b: Self::Letter) -> Cost {
        self.inner.dist(a, b)
    }
    fn contains(&self, a: Self::Letter) -> bool {
        self.inner.contains(a)
    }
    fn min_nonzero_distance(&self) -> Option<Cost> {
        self.inner.min_nonzero_distance()
    }
    fn max_distance(&self) -> Option<Cost> {
        self.inner.max_distance()
    }
    fn is_integral(&self) -> bool {
        self.inner.is_integral()
    }
    fn separation(&self, x: &[Self::Letter], y: &[Self::Letter]) -> Cost {
        self.inner.separation(x, y)
    }
    fn diameter(&self, x: &[Self::Letter], y: &[Self::Letter]) -> Cost {
        self.inner.diameter(x, y)
    }
}

impl<M: FiniteMetric> FiniteMetric for NullAugmented<M> {
    fn letters(&self) -> Vec<Self::Letter> {
        self.inner.letters()
    }
}

/// Interning table between textual tokens and [`Symbol`]s.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alphabet {
    tokens: Vec<String>,
    index: HashMap<String, Symbol>,
}

impl Alphabet {
    pub fn new() -> Alphabet {
        Alphabet::default()
    }

    /// Builds an alphabet from distinct tokens; duplicates are an error.
    pub fn from_tokens<S: AsRef<str>>(tokens: &[S]) -> Result<Alphabet> {
        let mut a = Alphabet::new();
        for t in tokens {
            let t = t.as_ref();
            if a.get(t).is_some() {
                return Err(Error::InvalidMetric(format!("duplicate alphabet entry {t:?}")));
            }
            a.intern(t);
        }
        Ok(a)
    }

    pub fn intern(&mut self, token: &str) -> Symbol {
        if let Some(&s) = self.index.get(token) {
            return s;
        }
        let s = Symbol(self.tokens.len() as u32);
        self.tokens.push(token.to_owned());
        self.index.insert(token.to_owned(), s);
        s
    }

    pub fn get(&self, token: &str) -> Option<Symbol> {
        self.index.get(token).copied()
    }

    pub fn lookup(&self, token: &str) -> Result<Symbol> {
        self.get(token).ok_or_else(|| Error::UnknownLetter(token.to_owned()))
    }

    pub fn token(&self, s: Symbol) -> &str {
        &self.tokens[s.index()]
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// A failed metric axiom, with letters given as indices into the checked letter list.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    SelfDistance { a: usize, value: f64 },
    ZeroBetweenDistinct { a: usize, b: usize },
    Asymmetric { a: usize, b: usize, ab: f64, ba: f64 },
    /// `d(a, c) > d(a, b) + d(b, c)`.
    Triangle { a: usize, b: usize, c: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::SelfDistance { a, value } => write!(f, "d({a},{a}) = {value}, expected 0"),
            Violation::ZeroBetweenDistinct { a, b } => write!(f, "d({a},{b}) = 0 for distinct letters"),
            Violation::Asymmetric { a, b, ab, ba } => write!(f, "d({a},{b}) = {ab} but d({b},{a}) = {ba}"),
            Violation::Triangle { a, b, c } => write!(f, "d({a},{c}) > d({a},{b}) + d({b},{c})"),
        }
    }
}

/// Checks identity, symmetry and the triangle inequality over every triple of `letters`.
///
/// Integral metrics are compared exactly; others allow a relative slack of 1e-9.
pub fn validate_metric_on<M: Metric + ?Sized>(m: &M, letters: &[M::Letter]) -> Vec<Violation> {
    let k = letters.len();
    let table: Vec<f64> = letters
        .iter()
        .flat_map(|&a| letters.iter().map(move |&b| (a, b)))
        .map(|(a, b)| m.dist(a, b).get())
        .collect();
    let d = |i: usize, j: usize| table[i * k + j];
    let slack = |v: f64| if m.is_integral() { 0.0 } else { 1e-9 * v.abs().max(1.0) };

    let mut out = Vec::new();
    for a in 0..k {
        if d(a, a) > slack(0.0) {
            out.push(Violation::SelfDistance { a, value: d(a, a) });
        }
        for b in a + 1..k {
            if letters[a] != letters[b] && d(a, b) == 0.0 {
                out.push(Violation::ZeroBetweenDistinct { a, b });
            }
            if (d(a, b) - d(b, a)).abs() > slack(d(a, b)) {
                out.push(Violation::Asymmetric { a, b, ab: d(a, b), ba: d(b, a) });
            }
        }
    }
    for a in 0..k {
        for c in a + 1..k {
            let direct = d(a, c);
            for b in 0..k {
                if b == a || b == c {
                    continue;
                }
                let detour = d(a, b) + d(b, c);
                if direct > detour + slack(direct) {
                    out.push(Violation::Triangle { a, b, c });
                }
            }
        }
    }
    out
}

/// [`validate_metric_on`] over the metric's whole alphabet.
pub fn validate_metric<M: FiniteMetric + ?Sized>(m: &M) -> Vec<Violation> {
    validate_metric_on(m, &m.letters())
}
