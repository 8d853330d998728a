//! 1-2-directed hypergraphs: arcs with one tail and two heads, and their
//! identification with rooted triples (`arc(pq|o) = pq -> {po, qo}`).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use num_bigint::BigUint;

use crate::leaf::{Leaf, LeafError};
use crate::triple::{RootedTriple, TripleSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("node {0} is not in the hypergraph")]
    UnknownNode(String),
    #[error("arc {0} is not in the hypergraph")]
    ArcNotInGraph(String),
    #[error("arc {arc} does not encode a rooted triple: {reason}")]
    MalformedArc { arc: String, reason: String },
    #[error("hyperarc tail and heads must be three distinct nodes")]
    DegenerateArc,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("search budget of {budget} expansions exhausted")]
    ResourceExhausted { budget: u64 },
    #[error("dummy path of {needed} arcs exceeds the budget of {budget}")]
    BudgetExceeded { needed: BigUint, budget: u64 },
    #[error("epsilon must be a rational strictly between 0 and 1")]
    InvalidEpsilon,
    #[error("amplification needs distinct source and destination")]
    SourceEqualsDestination,
    #[error(transparent)]
    Leaf(#[from] LeafError),
}

/// A hypergraph node: either an unordered leaf pair (the `pq` standing for
/// `lca(p,q)`) or a plain named node (used for amplification dummies).
///
/// Ordering follows the serialized form (`p,q` for pairs, the bare name
/// otherwise), so sorted arc listings match sorted text output.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HNode {
    Pair(Leaf, Leaf),
    Named(Leaf),
}

impl HNode {
    /// Builds a pair node, sorting the two distinct leaves.
    pub fn pair(a: Leaf, b: Leaf) -> Result<Self, HypergraphError> {
        if a == b {
            return Err(HypergraphError::DegenerateArc);
        }
        if a < b {
            Ok(HNode::Pair(a, b))
        } else {
            Ok(HNode::Pair(b, a))
        }
    }

    pub fn named(name: &str) -> Result<Self, HypergraphError> {
        Ok(HNode::Named(Leaf::new(name)?))
    }

    fn parts(&self) -> (&str, Option<&str>) {
        match self {
            HNode::Pair(p, q) => (p.as_str(), Some(q.as_str())),
            HNode::Named(n) => (n.as_str(), None),
        }
    }
}

impl fmt::Display for HNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HNode::Pair(p, q) => write!(f, "{p},{q}"),
            HNode::Named(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for HNode {
    type Err = HypergraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some((a, b)) = s.split_once(',') {
            HNode::pair(Leaf::new(a)?, Leaf::new(b)?)
        } else {
            HNode::named(s)
        }
    }
}

impl Ord for HNode {
    // byte order of the serialized form, without allocating
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        fn bytes<'a>((head, tail): (&'a str, Option<&'a str>)) -> impl Iterator<Item = u8> + 'a {
            head.bytes().chain(
                tail.into_iter()
                    .flat_map(|s| std::iter::once(b',').chain(s.bytes())),
            )
        }
        bytes(self.parts()).cmp(bytes(other.parts()))
    }
}

impl PartialOrd for HNode {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A 1-2-hyperarc `u -> {v, v'}` with all three nodes distinct; the heads are
/// stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperarc {
    tail: HNode,
    heads: (HNode, HNode),
}

impl Hyperarc {
    pub fn new(tail: HNode, h1: HNode, h2: HNode) -> Result<Self, HypergraphError> {
        if h1 == h2 || tail == h1 || tail == h2 {
            return Err(HypergraphError::DegenerateArc);
        }
        let heads = if h1 < h2 { (h1, h2) } else { (h2, h1) };
        Ok(Hyperarc { tail, heads })
    }

    pub fn tail(&self) -> &HNode {
        &self.tail
    }

    pub fn heads(&self) -> (&HNode, &HNode) {
        (&self.heads.0, &self.heads.1)
    }

    pub fn has_head(&self, n: &HNode) -> bool {
        &self.heads.0 == n || &self.heads.1 == n
    }

    /// The arc corresponding to `pq|o`: `pq -> {po, qo}`.
    pub fn from_triple(t: &RootedTriple) -> Hyperarc {
        let (p, q) = t.lhs();
        let o = t.rhs();
        let tail = HNode::pair(p.clone(), q.clone()).expect("triple leaves distinct");
        let h1 = HNode::pair(p.clone(), o.clone()).expect("triple leaves distinct");
        let h2 = HNode::pair(q.clone(), o.clone()).expect("triple leaves distinct");
        Hyperarc::new(tail, h1, h2).expect("three distinct pairs")
    }

    /// The triple corresponding to this arc: heads must share exactly one
    /// leaf and the tail must be their symmetric difference.
    pub fn triple(&self) -> Result<RootedTriple, HypergraphError> {
        let malformed = |reason: &str| HypergraphError::MalformedArc {
            arc: self.to_string(),
            reason: reason.to_string(),
        };
        let (HNode::Pair(a, b), HNode::Pair(c, d), HNode::Pair(e, f)) =
            (&self.tail, &self.heads.0, &self.heads.1)
        else {
            return Err(malformed("all three nodes must be leaf pairs"));
        };
        let head1 = [c.clone(), d.clone()];
        let head2 = [e.clone(), f.clone()];
        let shared: Vec<Leaf> = head1
            .iter()
            .filter(|l| head2.contains(l))
            .cloned()
            .collect();
        if shared.len() != 1 {
            return Err(malformed("heads must share exactly one leaf"));
        }
        let o = shared[0].clone();
        let mut sym: Vec<Leaf> = head1
            .into_iter()
            .chain(head2)
            .filter(|l| *l != o)
            .collect();
        sym.sort();
        if (a, b) != (&sym[0], &sym[1]) {
            return Err(malformed("tail must be the symmetric difference of the heads"));
        }
        RootedTriple::new(sym[0].clone(), sym[1].clone(), o).map_err(|_| malformed("degenerate"))
    }
}

impl fmt::Display for Hyperarc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {}", self.tail, self.heads.0, self.heads.1)
    }
}

/// A 1-2-directed hypergraph: a node set plus an arc set whose endpoints all
/// belong to the node set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Hypergraph {
    nodes: BTreeSet<HNode>,
    arcs: BTreeSet<Hyperarc>,
}

impl Hypergraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, n: HNode) {
        self.nodes.insert(n);
    }

    /// Adds an arc, inserting its endpoints into the node set.
    pub fn add_arc(&mut self, a: Hyperarc) {
        self.nodes.insert(a.tail.clone());
        self.nodes.insert(a.heads.0.clone());
        self.nodes.insert(a.heads.1.clone());
        self.arcs.insert(a);
    }

    pub fn from_arcs<I: IntoIterator<Item = Hyperarc>>(arcs: I) -> Self {
        let mut h = Hypergraph::new();
        for a in arcs {
            h.add_arc(a);
        }
        h
    }

    /// The hypergraph whose arcs are exactly `arcs(r)`.
    pub fn from_triples(r: &TripleSet) -> Self {
        Self::from_arcs(r.iter().map(Hyperarc::from_triple))
    }

    pub fn nodes(&self) -> &BTreeSet<HNode> {
        &self.nodes
    }

    pub fn arcs(&self) -> &BTreeSet<Hyperarc> {
        &self.arcs
    }

    pub fn contains_node(&self, n: &HNode) -> bool {
        self.nodes.contains(n)
    }

    pub fn contains_arc(&self, a: &Hyperarc) -> bool {
        self.arcs.contains(a)
    }

    /// Parses the text format: one arc per line, `tail -> head1 head2`;
    /// a line holding a single node declares an isolated node; `#` starts a
    /// comment line; blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self, HypergraphError> {
        let mut h = Hypergraph::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| HypergraphError::Parse {
                line: i + 1,
                msg: msg.to_string(),
            };
            match line.split_once("->") {
                Some((tail, heads)) => {
                    let tail: HNode = tail.trim().parse()?;
                    let toks: Vec<&str> = heads.split_whitespace().collect();
                    if toks.len() != 2 {
                        return Err(err("expected exactly two head nodes"));
                    }
                    let h1: HNode = toks[0].parse()?;
                    let h2: HNode = toks[1].parse()?;
                    h.add_arc(Hyperarc::new(tail, h1, h2)?);
                }
                None => {
                    if line.split_whitespace().count() != 1 {
                        return Err(err("expected `tail -> head1 head2` or a single node"));
                    }
                    h.add_node(line.parse()?);
                }
            }
        }
        Ok(h)
    }

    /// Renders the graph in the format `parse` accepts: sorted arcs, then any
    /// isolated nodes.
    pub fn to_text(&self) -> String {
        let mut used: BTreeSet<&HNode> = BTreeSet::new();
        let mut out = String::new();
        for a in &self.arcs {
            used.insert(&a.tail);
            used.insert(&a.heads.0);
            used.insert(&a.heads.1);
            out.push_str(&a.to_string());
            out.push('\n');
        }
        for n in &self.nodes {
            if !used.contains(n) {
                out.push_str(&n.to_string());
                out.push('\n');
            }
        }
        out
    }

    /// Graphviz rendering: one record per node, one point-shaped junction per
    /// hyperarc with a single in-edge from the tail and out-edges to both
    /// heads. Arcs in `highlight` are drawn red.
    pub fn to_dot(&self, highlight: &BTreeSet<Hyperarc>) -> String {
        let mut out = String::from("digraph hypergraph {\n  rankdir=LR;\n  node [shape=record];\n");
        for n in &self.nodes {
            out.push_str(&format!("  \"{n}\" [label=\"{n}\"];\n"));
        }
        for (i, a) in self.arcs.iter().enumerate() {
            let color = if highlight.contains(a) { "red" } else { "black" };
            out.push_str(&format!(
                "  arc{i} [shape=point, width=0.08, color={color}];\n"
            ));
            out.push_str(&format!(
                "  \"{}\" -> arc{i} [arrowhead=none, color={color}];\n",
                a.tail
            ));
            out.push_str(&format!("  arc{i} -> \"{}\" [color={color}];\n", a.heads.0));
            out.push_str(&format!("  arc{i} -> \"{}\" [color={color}];\n", a.heads.1));
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// A simple path: a sequence of distinct arcs where each arc's tail is a head
/// of its predecessor. `source` is the first tail; `dest` is one of the last
/// arc's heads. The empty path has `source == dest`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPath {
    source: HNode,
    dest: HNode,
    arcs: Vec<Hyperarc>,
}

impl HPath {
    pub fn new(source: HNode, dest: HNode, arcs: Vec<Hyperarc>) -> Result<Self, HypergraphError> {
        let structural = |msg: &str| HypergraphError::Parse {
            line: 0,
            msg: msg.to_string(),
        };
        if arcs.is_empty() {
            if source != dest {
                return Err(structural("empty path needs source = dest"));
            }
            return Ok(HPath { source, dest, arcs });
        }
        if arcs[0].tail != source {
            return Err(structural("first arc must start at the source"));
        }
        for k in 0..arcs.len() - 1 {
            if !arcs[k].has_head(&arcs[k + 1].tail) {
                return Err(structural("arcs do not chain"));
            }
        }
        if !arcs[arcs.len() - 1].has_head(&dest) {
            return Err(structural("last arc must reach the destination"));
        }
        for (i, a) in arcs.iter().enumerate() {
            if arcs[i + 1..].contains(a) {
                return Err(structural("arcs must be distinct"));
            }
        }
        Ok(HPath { source, dest, arcs })
    }

    pub fn source(&self) -> &HNode {
        &self.source
    }

    pub fn dest(&self) -> &HNode {
        &self.dest
    }

    pub fn arcs(&self) -> &[Hyperarc] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// The triples carried by the path's arcs.
    pub fn triples(&self) -> Result<TripleSet, HypergraphError> {
        self.arcs.iter().map(|a| a.triple()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triple::test_support::triple;

    pub(crate) fn node(s: &str) -> HNode {
        s.parse().unwrap()
    }

    pub(crate) fn arc(tail: &str, h1: &str, h2: &str) -> Hyperarc {
        Hyperarc::new(node(tail), node(h1), node(h2)).unwrap()
    }

    #[test]
    fn arc_of_triple_examples() {
        let a = Hyperarc::from_triple(&triple("a", "b", "c"));
        assert_eq!(a, arc("a,b", "a,c", "b,c"));

        let a = Hyperarc::from_triple(&triple("b", "c", "a"));
        assert_eq!(a, arc("b,c", "a,b", "a,c"));
    }

    #[test]
    fn triple_of_arc_examples() {
        assert_eq!(arc("a,b", "a,c", "b,c").triple().unwrap(), triple("a", "b", "c"));
        assert_eq!(arc("a,d", "a,c", "c,d").triple().unwrap(), triple("a", "d", "c"));
        assert!(matches!(
            arc("a,b", "a,c", "b,d").triple(),
            Err(HypergraphError::MalformedArc { .. })
        ));
        assert!(matches!(
            arc("a,x", "a,c", "b,c").triple(),
            Err(HypergraphError::MalformedArc { .. })
        ));
        assert!(matches!(
            arc("u", "a,c", "b,c").triple(),
            Err(HypergraphError::MalformedArc { .. })
        ));
    }

    #[test]
    fn round_trip_triple_arc_triple() {
        for t in [triple("a", "b", "c"), triple("x1_2", "y1_2", "c1")] {
            assert_eq!(Hyperarc::from_triple(&t).triple().unwrap(), t);
        }
    }

    #[test]
    fn arc_rejects_repeated_nodes() {
        assert!(Hyperarc::new(node("u"), node("v"), node("v")).is_err());
        assert!(Hyperarc::new(node("u"), node("u"), node("v")).is_err());
    }

    #[test]
    fn text_round_trip_with_isolated_node() {
        let mut h = Hypergraph::from_arcs([arc("u", "v", "s"), arc("v", "w", "s2")]);
        h.add_node(node("lonely"));
        let text = h.to_text();
        assert_eq!(Hypergraph::parse(&text).unwrap(), h);
        assert!(text.contains("lonely"));
    }

    #[test]
    fn parse_rejects_malformed_lines() {
        assert!(Hypergraph::parse("u -> v").is_err());
        assert!(Hypergraph::parse("u -> v w x").is_err());
        assert!(Hypergraph::parse("u v").is_err());
        assert!(Hypergraph::parse("u -> u v").is_err());
    }

    #[test]
    fn parse_skips_comments_and_blanks() {
        let h = Hypergraph::parse("# top\n\nu -> v s\n").unwrap();
        assert_eq!(h.arcs().len(), 1);
    }

    #[test]
    fn node_ordering_matches_serialization() {
        let mut nodes = vec![node("b"), node("a,b"), node("a"), node("a,c")];
        nodes.sort();
        let rendered: Vec<String> = nodes.iter().map(|n| n.to_string()).collect();
        let mut by_string = rendered.clone();
        by_string.sort();
        assert_eq!(rendered, by_string);
    }

    #[test]
    fn hpath_validation() {
        let a1 = arc("u", "v", "s");
        let a2 = arc("v", "w", "s2");
        assert!(HPath::new(node("u"), node("w"), vec![a1.clone(), a2.clone()]).is_ok());
        assert!(HPath::new(node("u"), node("u"), vec![]).is_ok());
        assert!(HPath::new(node("u"), node("w"), vec![]).is_err());
        assert!(HPath::new(node("u"), node("w"), vec![a2.clone(), a1.clone()]).is_err());
        assert!(HPath::new(node("u"), node("z"), vec![a1.clone(), a2.clone()]).is_err());
        assert!(HPath::new(node("u"), node("w"), vec![a1.clone(), a1]).is_err());
    }

    #[test]
    fn dot_output_mentions_every_arc() {
        let h = Hypergraph::from_arcs([arc("u", "v", "s")]);
        let dot = h.to_dot(&BTreeSet::new());
        assert!(dot.contains("digraph"));
        assert!(dot.contains("arc0"));
        assert!(dot.contains("\"u\""));
    }
}
