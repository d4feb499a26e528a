//! Well-separated tree metrics and the random-pivot embedding of real points.
//!
//! A [`WellSeparatedTree`] stores every node's parent and parent-edge weight; weights
//! never increase from a node towards its descendants. The distance between two nodes
//! is the largest edge weight on the path joining them.

use std::collections::HashMap;

use log::warn;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::metric::{FiniteMetric, Metric};

/// Default `c` in the `depth <= c·log2(nodes)` audit.
pub const DEFAULT_DEPTH_CONSTANT: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One node of a tree description: the root has no parent (or names itself) and no weight.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeSpec {
    pub label: String,
    pub parent: Option<String>,
    pub weight: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WellSeparatedTree {
    labels: Vec<String>,
    parent: Vec<NodeId>,
    /// Parent-edge weight; zero at the root.
    weight: Vec<Cost>,
    depth: Vec<u32>,
    root: NodeId,
    index: HashMap<String, NodeId>,
    min_weight: Option<Cost>,
    max_weight: Cost,
    integral: bool,
}

impl WellSeparatedTree {
    /// Builds a tree from labelled node descriptions and runs the full structural audit.
    pub fn from_specs(specs: &[NodeSpec]) -> Result<WellSeparatedTree> {
        let mut index = HashMap::with_capacity(specs.len());
        for (i, s) in specs.iter().enumerate() {
            if index.insert(s.label.clone(), i).is_some() {
                return Err(Error::InvalidTree(format!("duplicate node {:?}", s.label)));
            }
        }
        let mut parents = Vec::with_capacity(specs.len());
        let mut weights = Vec::with_capacity(specs.len());
        for (i, s) in specs.iter().enumerate() {
            let p = match &s.parent {
                None => i,
                Some(p) => *index
                    .get(p)
                    .ok_or_else(|| Error::InvalidTree(format!("node {:?} has unknown parent {p:?}", s.label)))?,
            };
            parents.push(p);
            weights.push(if p == i { 0.0 } else { s.weight.unwrap_or(f64::NAN) });
        }
        let labels = specs.iter().map(|s| s.label.clone()).collect();
        WellSeparatedTree::from_indices(labels, parents, weights)
    }

    /// Builds a tree from parallel arrays; the root is the unique node that is its own parent
    /// and its weight entry is ignored.
    pub fn from_indices(labels: Vec<String>, parent: Vec<usize>, weight: Vec<f64>) -> Result<WellSeparatedTree> {
        let n = labels.len();
        let bad = |msg: String| Err(Error::InvalidTree(msg));
        if n == 0 {
            return bad("tree has no nodes".into());
        }
        if parent.len() != n || weight.len() != n {
            return bad("labels, parents and weights differ in length".into());
        }
        if n > u32::MAX as usize {
            return bad("too many nodes".into());
        }
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), NodeId(i as u32)).is_some() {
                return bad(format!("duplicate node {l:?}"));
            }
        }
        let roots: Vec<usize> = (0..n).filter(|&i| parent[i] == i).collect();
        let root = match roots[..] {
            [r] => r,
            [] => return bad("no root (every node has a distinct parent)".into()),
            _ => return bad(format!("{} roots", roots.len())),
        };
        for i in 0..n {
            if parent[i] >= n {
                return bad(format!("node {:?} has parent index {}", labels[i], parent[i]));
            }
            if i != root && !(weight[i].is_finite() && weight[i] > 0.0) {
                return bad(format!("edge above {:?} has weight {}, expected positive", labels[i], weight[i]));
            }
        }

        // Depths by walking up to the first node of known depth; revisiting an unfinished
        // node on the same walk means a cycle.
        const UNSEEN: u32 = u32::MAX;
        const ON_PATH: u32 = u32::MAX - 1;
        let mut depth = vec![UNSEEN; n];
        depth[root] = 0;
        let mut path = Vec::new();
        for start in 0..n {
            let mut v = start;
            while depth[v] == UNSEEN {
                depth[v] = ON_PATH;
                path.push(v);
                v = parent[v];
            }
            if depth[v] == ON_PATH {
                return bad(format!("cycle through node {:?}", labels[v]));
            }
            let mut d = depth[v];
            while let Some(u) = path.pop() {
                d += 1;
                depth[u] = d;
            }
        }

        for i in 0..n {
            let p = parent[i];
            if i != root && p != root && weight[i] > weight[p] {
                return bad(format!(
                    "edge above {:?} (weight {}) is heavier than the edge above its parent {:?} (weight {})",
                    labels[i], weight[i], labels[p], weight[p]
                ));
            }
        }

        let weight: Vec<Cost> = (0..n).map(|i| if i == root { Cost::ZERO } else { Cost::new(weight[i]) }).collect();
        let edges = || (0..n).filter(|&i| i != root).map(|i| weight[i]);
        let tree = WellSeparatedTree {
            min_weight: edges().min(),
            max_weight: edges().max().unwrap_or(Cost::ZERO),
            integral: edges().all(Cost::is_integral),
            labels,
            parent: parent.into_iter().map(|p| NodeId(p as u32)).collect(),
            weight,
            depth,
            root: NodeId(root as u32),
            index,
        };
        tree.warn_if_deep(DEFAULT_DEPTH_CONSTANT);
        Ok(tree)
    }

    /// True when `max_depth <= c·log2(nodes)` (trees with fewer than two nodes always pass).
    pub fn depth_within(&self, c: f64) -> bool {
        let n = self.len();
        n < 2 || f64::from(self.max_depth()) <= c * (n as f64).log2()
    }

    /// Logs a warning when the depth audit fails. Depth only affects running time.
    pub fn warn_if_deep(&self, c: f64) -> bool {
        let ok = self.depth_within(c);
        if !ok {
            warn!(
                "tree depth {} exceeds {c}·log2({}) = {:.1}",
                self.max_depth(),
                self.len(),
                c * (self.len() as f64).log2()
            );
        }
        ok
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn parent(&self, v: NodeId) -> NodeId {
        self.parent[v.index()]
    }

    /// Weight of the edge above `v` (zero for the root).
    pub fn parent_weight(&self, v: NodeId) -> Cost {
        self.weight[v.index()]
    }

    pub fn depth(&self, v: NodeId) -> u32 {
        self.depth[v.index()]
    }

    pub fn max_depth(&self) -> u32 {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Heaviest edge in the tree, which always hangs off the root.
    pub fn max_weight(&self) -> Cost {
        self.max_weight
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v.index()]
    }

    pub fn node(&self, label: &str) -> Result<NodeId> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownLetter(label.to_owned()))
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.len() as u32).map(NodeId)
    }
}

impl Metric for WellSeparatedTree {
    type Letter = NodeId;

    fn dist(&self, a: NodeId, b: NodeId) -> Cost {
        let (mut u, mut v) = (a, b);
        let mut best = Cost::ZERO;
        while self.depth(u) > self.depth(v) {
            best = best.max(self.parent_weight(u));
            u = self.parent(u);
        }
        while self.depth(v) > self.depth(u) {
            best = best.max(self.parent_weight(v));
            v = self.parent(v);
        }
        while u != v {
            best = best.max(self.parent_weight(u)).max(self.parent_weight(v));
            u = self.parent(u);
            v = self.parent(v);
        }
        best
    }
    fn contains(&self, a: NodeId) -> bool {
        a.index() < self.len()
    }
    fn min_nonzero_distance(&self) -> Option<Cost> {
        self.min_weight
    }
    fn max_distance(&self) -> Option<Cost> {
        Some(self.max_weight)
    }
    fn is_integral(&self) -> bool {
        self.integral
    }
}

impl FiniteMetric for WellSeparatedTree {
    fn letters(&self) -> Vec<NodeId> {
        self.nodes().collect()
    }
}

/// Largest edge weight on the path between `u` and `v`.
pub fn tree_distance(t: &WellSeparatedTree, u: NodeId, v: NodeId) -> Result<Cost> {
    t.checked_dist(u, v)
}

/// Replaces every letter by its highest ancestor reachable through edges of weight at most `r/4`.
pub fn simplify_tree(t: &WellSeparatedTree, x: &[NodeId], r: Cost) -> Result<Vec<NodeId>> {
    t.check_letters(x)?;
    let limit = r.times(0.25);
    let mut memo: Vec<Option<NodeId>> = vec![None; t.len()];
    Ok(x.iter()
        .map(|&l| {
            if let Some(a) = memo[l.index()] {
                return a;
            }
            let mut v = l;
            // Weights only grow going up, so the first heavy edge stops the climb for good.
            while v != t.root() && t.parent_weight(v) <= limit {
                v = t.parent(v);
            }
            memo[l.index()] = Some(v);
            v
        })
        .collect())
}

/// A tree over a set of real points whose distances dominate `|a - b|`.
#[derive(Clone, Debug)]
pub struct RealEmbedding {
    tree: WellSeparatedTree,
    /// Distinct input points, ascending, with their leaves.
    points: Vec<f64>,
    leaves: Vec<NodeId>,
}

impl RealEmbedding {
    pub fn tree(&self) -> &WellSeparatedTree {
        &self.tree
    }

    /// The distinct embedded points in ascending order.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn node_of(&self, v: f64) -> Result<NodeId> {
        if v.is_nan() {
            return Err(Error::UnknownLetter("NaN".into()));
        }
        self.points
            .binary_search_by(|p| cmp_eq(*p, v))
            .map(|i| self.leaves[i])
            .map_err(|_| Error::UnknownLetter(format!("{v}")))
    }

    pub fn map(&self, s: &[f64]) -> Result<Vec<NodeId>> {
        s.iter().map(|&v| self.node_of(v)).collect()
    }
}

/// Numeric comparison treating `-0.0` and `0.0` as equal.
fn cmp_eq(a: f64, b: f64) -> std::cmp::Ordering {
    a.partial_cmp(&b).expect("finite values")
}

/// Embeds distinct reals into a random well-separated tree.
///
/// A point range `[m1, m2]` of width `r` splits at a pivot drawn uniformly from
/// `[m1 + r/4, m2 - r/4]`; the pivot becomes an internal node whose child edges weigh `r`.
/// Singletons become leaves labelled by the point value.
pub fn embed_reals<R: Rng + ?Sized>(points: &[f64], rng: &mut R) -> Result<RealEmbedding> {
    if points.is_empty() {
        return Err(Error::EmptyInput("cannot embed an empty point set"));
    }
    if let Some(v) = points.iter().find(|v| !v.is_finite()) {
        return Err(Error::UnknownLetter(format!("non-finite point {v}")));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| cmp_eq(*a, *b));
    pts.dedup_by(|a, b| a == b);

    let mut labels: Vec<String> = Vec::with_capacity(2 * pts.len());
    let mut parent: Vec<usize> = Vec::with_capacity(2 * pts.len());
    let mut weight: Vec<f64> = Vec::with_capacity(2 * pts.len());
    let mut leaves = vec![NodeId(0); pts.len()];
    let mut pivots = 0usize;

    // (first point, one past last point, parent node and edge weight)
    type Task = (usize, usize, Option<(usize, f64)>);
    let mut tasks: Vec<Task> = vec![(0, pts.len(), None)];
    while let Some((lo, hi, up)) = tasks.pop() {
        let id = labels.len();
        let (p, w) = up.unwrap_or((id, 0.0));
        parent.push(p);
        weight.push(w);
        if hi - lo == 1 {
            labels.push(format!("{}", pts[lo]));
            leaves[lo] = NodeId(id as u32);
            continue;
        }
        labels.push(format!("pivot:{pivots}"));
        pivots += 1;
        let (m1, m2) = (pts[lo], pts[hi - 1]);
        let r = m2 - m1;
        let (a, b) = (m1 + r / 4.0, m2 - r / 4.0);
        let pivot = if a < b { rng.random_range(a..=b) } else { (m1 + m2) / 2.0 };
        // Rounding can only matter for ranges near the float resolution; keep both sides nonempty.
        let split = (lo + pts[lo..hi].partition_point(|&v| v <= pivot)).clamp(lo + 1, hi - 1);
        tasks.push((split, hi, Some((id, r))));
        tasks.push((lo, split, Some((id, r))));
    }

    let tree = WellSeparatedTree::from_indices(labels, parent, weight)?;
    Ok(RealEmbedding { tree, points: pts, leaves })
}
