//! Loading metrics and string pairs from the command line.

use std::fs;

use seqdist::io::{load_metric, parse_nodes, parse_reals, parse_symbols, MetricSpec};
use seqdist::{Alphabet, Hamming, NodeId, Symbol, TableMetric, WellSeparatedTree};

use crate::CliError;

/// Reads a positional input: a file path, `-` for standard input, or the literal text.
pub fn read_text(arg: &str, inline: bool) -> Result<String, CliError> {
    if inline {
        return Ok(arg.to_owned());
    }
    let text = if arg == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        fs::read_to_string(arg)
    };
    text.map_err(|e| CliError::Input(format!("cannot read {arg}: {e}")))
}

/// Splits every non-whitespace character into its own token.
fn spread_chars(text: &str) -> String {
    let tokens: Vec<String> = text.chars().filter(|c| !c.is_whitespace()).map(String::from).collect();
    tokens.join(" ")
}

/// `hamming`, `real`, or a metric file.
pub fn metric_spec(arg: &str) -> Result<MetricSpec, CliError> {
    match arg {
        "hamming" => Ok(MetricSpec::Hamming { alphabet: None, null: None }),
        "real" => Ok(MetricSpec::Real { null: 0.0 }),
        path => {
            let json = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?;
            Ok(load_metric(&json)?)
        }
    }
}

/// A metric with both strings parsed over it.
pub enum Loaded {
    Hamming { metric: Hamming, null: Option<Symbol>, x: Vec<Symbol>, y: Vec<Symbol> },
    Real { null: f64, x: Vec<f64>, y: Vec<f64> },
    Table { metric: TableMetric, null: Option<Symbol>, x: Vec<Symbol>, y: Vec<Symbol> },
    Tree { tree: WellSeparatedTree, null: Option<NodeId>, x: Vec<NodeId>, y: Vec<NodeId> },
}

impl Loaded {
    pub fn sizes(&self) -> [usize; 2] {
        match self {
            Loaded::Hamming { x, y, .. } | Loaded::Table { x, y, .. } => [x.len(), y.len()],
            Loaded::Real { x, y, .. } => [x.len(), y.len()],
            Loaded::Tree { x, y, .. } => [x.len(), y.len()],
        }
    }
}

pub struct PairArgs<'a> {
    pub metric: &'a str,
    pub x: &'a str,
    pub y: &'a str,
    pub inline: bool,
    pub chars: bool,
    /// Add a unit-distance null to Hamming metrics that do not name one.
    pub want_null: bool,
}

pub fn load_pair(args: &PairArgs) -> Result<Loaded, CliError> {
    let spec = metric_spec(args.metric)?;
    let mut xt = read_text(args.x, args.inline)?;
    let mut yt = read_text(args.y, args.inline)?;
    if args.chars {
        xt = spread_chars(&xt);
        yt = spread_chars(&yt);
    }
    Ok(match spec {
        MetricSpec::Hamming { alphabet, null } => {
            let extend = alphabet.is_none();
            let mut alphabet = alphabet.unwrap_or_else(Alphabet::new);
            let x = parse_symbols(&xt, &mut alphabet, extend)?;
            let y = parse_symbols(&yt, &mut alphabet, extend)?;
            let null = match null {
                Some(tok) => Some(alphabet.intern(&tok)),
                // One past the alphabet, so it can never occur in the strings.
                None if args.want_null => Some(Symbol(alphabet.len() as u32)),
                None => None,
            };
            let size = alphabet.len() as u32 + u32::from(null.is_some_and(|n| n.index() == alphabet.len()));
            Loaded::Hamming { metric: Hamming::new(size), null, x, y }
        }
        MetricSpec::Real { null } => Loaded::Real { null, x: parse_reals(&xt)?, y: parse_reals(&yt)? },
        MetricSpec::Table { mut alphabet, metric, null } => {
            let x = parse_symbols(&xt, &mut alphabet, false)?;
            let y = parse_symbols(&yt, &mut alphabet, false)?;
            Loaded::Table { metric, null, x, y }
        }
        MetricSpec::Tree { tree, null } => {
            let x = parse_nodes(&xt, &tree)?;
            let y = parse_nodes(&yt, &tree)?;
            Loaded::Tree { tree, null, x, y }
        }
    })
}

/// Runs `$body` with `$m` bound to the metric, `$null` to the optional null letter and
/// `$x`, `$y` to the strings, whatever the letter type.
macro_rules! with_metric {
    ($loaded:expr, |$m:ident, $null:ident, $x:ident, $y:ident| $body:expr) => {
        match $loaded {
            $crate::input::Loaded::Hamming { metric, null, x, y } => {
                let ($m, $null, $x, $y) = (metric, *null, &x[..], &y[..]);
                $body
            }
            $crate::input::Loaded::Real { null, x, y } => {
                let ($m, $null, $x, $y) = (&seqdist::RealLine, Some(*null), &x[..], &y[..]);
                $body
            }
            $crate::input::Loaded::Table { metric, null, x, y } => {
                let ($m, $null, $x, $y) = (metric, *null, &x[..], &y[..]);
                $body
            }
            $crate::input::Loaded::Tree { tree, null, x, y } => {
                let ($m, $null, $x, $y) = (tree, *null, &x[..], &y[..]);
                $body
            }
        }
    };
}
pub(crate) use with_metric;
