//! Metric definition files and string files.
//!
//! Metric files are JSON objects tagged by `kind`:
//!
//! ```json
//! {"kind": "hamming", "alphabet": ["a", "b"], "null": "-"}
//! {"kind": "real", "null": 0.0}
//! {"kind": "table", "alphabet": ["a", "b"], "distances": [[0, 2], [2, 0]], "null": "a"}
//! {"kind": "tree", "nodes": [{"id": "r", "parent": "r"}, {"id": "a", "parent": "r", "weight": 4}]}
//! ```
//!
//! String files hold whitespace-separated tokens; `tok*3` abbreviates three copies of `tok`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::metric::{Alphabet, Symbol, TableMetric};
use crate::tree::{NodeId, NodeSpec, WellSeparatedTree};

/// Node identifiers and alphabet entries may be JSON strings or numbers.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Token {
    Str(String),
    Num(serde_json::Number),
}

impl Token {
    fn into_string(self) -> String {
        match self {
            Token::Str(s) => s,
            Token::Num(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Deserialize)]
struct NodeFile {
    id: Token,
    parent: Option<Token>,
    weight: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum MetricFile {
    Hamming { alphabet: Option<Vec<Token>>, null: Option<Token> },
    Real { null: Option<f64> },
    Table { alphabet: Vec<Token>, distances: Vec<Vec<f64>>, null: Option<Token> },
    Tree { nodes: Vec<NodeFile>, null: Option<Token> },
}

/// A validated metric definition.
#[derive(Clone, Debug)]
pub enum MetricSpec {
    /// Unit distances; without an alphabet, letters are interned as they are read.
    Hamming { alphabet: Option<Alphabet>, null: Option<String> },
    Real { null: f64 },
    Table { alphabet: Alphabet, metric: TableMetric, null: Option<Symbol> },
    Tree { tree: WellSeparatedTree, null: Option<NodeId> },
}

fn tokens(v: Vec<Token>) -> Vec<String> {
    v.into_iter().map(Token::into_string).collect()
}

/// Parses and validates a metric definition. Table metrics must satisfy the metric axioms.
pub fn load_metric(json: &str) -> Result<MetricSpec> {
    let file: MetricFile = serde_json::from_str(json).map_err(|e| Error::InvalidMetric(e.to_string()))?;
    Ok(match file {
        MetricFile::Hamming { alphabet, null } => MetricSpec::Hamming {
            alphabet: alphabet.map(|a| Alphabet::from_tokens(&tokens(a))).transpose()?,
            null: null.map(Token::into_string),
        },
        MetricFile::Real { null } => {
            let null = null.unwrap_or(0.0);
            if !null.is_finite() {
                return Err(Error::InvalidMetric("null must be finite".into()));
            }
            MetricSpec::Real { null }
        }
        MetricFile::Table { alphabet, distances, null } => {
            let alphabet = Alphabet::from_tokens(&tokens(alphabet))?;
            if alphabet.len() != distances.len() {
                return Err(Error::InvalidMetric(format!(
                    "{} alphabet entries but {} distance rows",
                    alphabet.len(),
                    distances.len()
                )));
            }
            let metric = TableMetric::new(distances)?;
            let null = null.map(|t| alphabet.lookup(&t.into_string())).transpose()?;
            MetricSpec::Table { alphabet, metric, null }
        }
        MetricFile::Tree { nodes, null } => {
            let specs: Vec<NodeSpec> = nodes
                .into_iter()
                .map(|n| {
                    let label = n.id.into_string();
                    let parent = n.parent.map(Token::into_string).filter(|p| *p != label);
                    NodeSpec { label, parent, weight: n.weight }
                })
                .collect();
            let tree = WellSeparatedTree::from_specs(&specs)?;
            let null = null.map(|t| tree.node(&t.into_string())).transpose()?;
            MetricSpec::Tree { tree, null }
        }
    })
}

#[derive(Serialize)]
struct NodeOut<'a> {
    id: &'a str,
    parent: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight: Option<f64>,
}

/// The tree in the metric file format (the root is its own parent and has no weight).
pub fn tree_to_json(t: &WellSeparatedTree) -> Value {
    let nodes: Vec<NodeOut> = t
        .nodes()
        .map(|v| NodeOut {
            id: t.label(v),
            parent: t.label(t.parent(v)),
            weight: (v != t.root()).then(|| t.parent_weight(v).get()),
        })
        .collect();
    serde_json::json!({ "kind": "tree", "nodes": nodes })
}

/// Splits text into tokens, expanding `tok*k` into `k` copies.
pub fn parse_tokens(text: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for raw in text.split_whitespace() {
        match raw.rsplit_once('*') {
            Some((tok, count)) if !tok.is_empty() && !count.is_empty() => {
                let k: usize = count
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad repeat count in {raw:?}")))?;
                if k == 0 {
                    return Err(Error::Parse(format!("zero repeat count in {raw:?}")));
                }
                out.extend(std::iter::repeat_n(tok.to_owned(), k));
            }
            Some(_) => return Err(Error::Parse(format!("malformed token {raw:?}"))),
            None => out.push(raw.to_owned()),
        }
    }
    Ok(out)
}

/// Maps tokens to symbols; unknown tokens are interned when `extend` is set and rejected otherwise.
pub fn parse_symbols(text: &str, alphabet: &mut Alphabet, extend: bool) -> Result<Vec<Symbol>> {
    parse_tokens(text)?
        .iter()
        .map(|t| if extend { Ok(alphabet.intern(t)) } else { alphabet.lookup(t) })
        .collect()
}

/// Parses finite reals; NaN and infinities are rejected.
pub fn parse_reals(text: &str) -> Result<Vec<f64>> {
    parse_tokens(text)?
        .iter()
        .map(|t| match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            Ok(_) => Err(Error::Parse(format!("non-finite value {t:?}"))),
            Err(_) => Err(Error::Parse(format!("not a number: {t:?}"))),
        })
        .collect()
}

pub fn parse_nodes(text: &str, tree: &WellSeparatedTree) -> Result<Vec<NodeId>> {
    parse_tokens(text)?.iter().map(|t| tree.node(t)).collect()
}
