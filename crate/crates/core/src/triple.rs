//! Rooted triples `pq|o` and finite sets of them.
//!
//! A triple `pq|o` constrains a rooted tree: the path from `p` to `q` must be
//! node-disjoint from the path from `o` to the root, i.e. `lca(p,q)` lies
//! strictly below `lca(p,o) = lca(q,o)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::leaf::{Leaf, LeafError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TripleError {
    #[error("triple leaves must be pairwise distinct, got {0} twice")]
    DuplicateLeaf(Leaf),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Leaf(#[from] LeafError),
}

/// A rooted triple in canonical form: the left-hand pair is sorted, so
/// `pq|o` and `qp|o` construct the same value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootedTriple {
    lhs: (Leaf, Leaf),
    rhs: Leaf,
}

impl RootedTriple {
    /// Canonicalize `(p, q, o)` into `pq|o` with `p < q`.
    pub fn new(p: Leaf, q: Leaf, o: Leaf) -> Result<Self, TripleError> {
        if p == q || p == o {
            return Err(TripleError::DuplicateLeaf(p));
        }
        if q == o {
            return Err(TripleError::DuplicateLeaf(q));
        }
        let lhs = if p <= q { (p, q) } else { (q, p) };
        Ok(RootedTriple { lhs, rhs: o })
    }

    /// The sorted left-hand pair `{p, q}`.
    pub fn lhs(&self) -> (&Leaf, &Leaf) {
        (&self.lhs.0, &self.lhs.1)
    }

    /// The right-hand leaf `o`.
    pub fn rhs(&self) -> &Leaf {
        &self.rhs
    }

    pub fn leaves(&self) -> [&Leaf; 3] {
        [&self.lhs.0, &self.lhs.1, &self.rhs]
    }

    pub fn contains(&self, leaf: &Leaf) -> bool {
        self.leaves().iter().any(|l| *l == leaf)
    }

    /// The other two triples over the same three leaves. Exactly one of the
    /// three holds in any binary tree containing all of `p`, `q`, `o`.
    pub fn alternatives(&self) -> [RootedTriple; 2] {
        let (p, q) = (&self.lhs.0, &self.lhs.1);
        let o = &self.rhs;
        [
            RootedTriple::new(p.clone(), o.clone(), q.clone()).expect("leaves distinct"),
            RootedTriple::new(q.clone(), o.clone(), p.clone()).expect("leaves distinct"),
        ]
    }
}

impl fmt::Display for RootedTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} | {}", self.lhs.0, self.lhs.1, self.rhs)
    }
}

impl FromStr for RootedTriple {
    type Err = TripleError;

    /// Parses `p q | o`; the spaces around `|` are optional.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_triple_on_line(s, 0)
    }
}

fn parse_triple_on_line(s: &str, line: usize) -> Result<RootedTriple, TripleError> {
    let err = |msg: &str| TripleError::Parse {
        line,
        msg: msg.to_string(),
    };
    let mut halves = s.splitn(2, '|');
    let lhs = halves.next().unwrap_or("");
    let rhs = halves.next().ok_or_else(|| err("expected `p q | o`"))?;
    if rhs.contains('|') {
        return Err(err("more than one `|`"));
    }
    let lhs_tokens: Vec<&str> = lhs.split_whitespace().collect();
    let rhs_tokens: Vec<&str> = rhs.split_whitespace().collect();
    if lhs_tokens.len() != 2 {
        return Err(err("left-hand side must be exactly two leaf names"));
    }
    if rhs_tokens.len() != 1 {
        return Err(err("right-hand side must be exactly one leaf name"));
    }
    let p = Leaf::new(lhs_tokens[0])?;
    let q = Leaf::new(lhs_tokens[1])?;
    let o = Leaf::new(rhs_tokens[0])?;
    RootedTriple::new(p, q, o)
}

/// A finite set of canonical rooted triples.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TripleSet {
    triples: BTreeSet<RootedTriple>,
}

impl TripleSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, t: RootedTriple) -> bool {
        self.triples.insert(t)
    }

    pub fn with(&self, t: RootedTriple) -> Self {
        let mut out = self.clone();
        out.insert(t);
        out
    }

    pub fn union(&self, other: &TripleSet) -> Self {
        TripleSet {
            triples: self.triples.union(&other.triples).cloned().collect(),
        }
    }

    pub fn contains(&self, t: &RootedTriple) -> bool {
        self.triples.contains(t)
    }

    pub fn is_subset(&self, other: &TripleSet) -> bool {
        self.triples.is_subset(&other.triples)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &RootedTriple> {
        self.triples.iter()
    }

    /// The leaf universe `L(R)`: every leaf appearing in some member.
    pub fn leaves(&self) -> BTreeSet<Leaf> {
        self.triples
            .iter()
            .flat_map(|t| t.leaves().into_iter().cloned())
            .collect()
    }

    /// Parses the triple text format: one `p q | o` per line, `#` starts a
    /// comment line, blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self, TripleError> {
        let mut out = TripleSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            out.insert(parse_triple_on_line(line, i + 1)?);
        }
        Ok(out)
    }

    /// Renders the set in the same format `parse` accepts, sorted, one per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.triples {
            out.push_str(&t.to_string());
            out.push('\n');
        }
        out
    }
}

impl FromIterator<RootedTriple> for TripleSet {
    fn from_iter<I: IntoIterator<Item = RootedTriple>>(iter: I) -> Self {
        TripleSet {
            triples: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a TripleSet {
    type Item = &'a RootedTriple;
    type IntoIter = std::collections::btree_set::Iter<'a, RootedTriple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

impl fmt::Display for TripleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Applies the three dyadic inference rules to the pair `(t1, t2)` in both
/// orders and returns every conclusion:
///
/// 1. `{pq|o, qp'|o}  entails  pp'|o`
/// 2. `{pq|o, qo|o'}  entails  {pq|o', po|o'}`
/// 3. `{pp'|o, oo'|p} entails  {pp'|o', oo'|p'}`
///
/// All leaf variables matched by a rule must be pairwise distinct; if no rule
/// matches, the result is empty.
pub fn dyadic_apply(t1: &RootedTriple, t2: &RootedTriple) -> TripleSet {
    let mut out = TripleSet::new();
    for (a, b) in [(t1, t2), (t2, t1)] {
        rule_shared_rhs(a, b, &mut out);
        rule_chained_rhs(a, b, &mut out);
        rule_crossed(a, b, &mut out);
    }
    out
}

fn other_of(pair: (&Leaf, &Leaf), one: &Leaf) -> Option<Leaf> {
    if pair.0 == one {
        Some(pair.1.clone())
    } else if pair.1 == one {
        Some(pair.0.clone())
    } else {
        None
    }
}

/// `{pq|o, qp'|o} |- pp'|o`
fn rule_shared_rhs(a: &RootedTriple, b: &RootedTriple, out: &mut TripleSet) {
    if a.rhs() != b.rhs() {
        return;
    }
    let (ap, aq) = a.lhs();
    let (bp, bq) = b.lhs();
    let shared: Vec<&Leaf> = [ap, aq]
        .into_iter()
        .filter(|l| *l == bp || *l == bq)
        .collect();
    if shared.len() != 1 {
        return;
    }
    let q = shared[0];
    let p = other_of(a.lhs(), q).expect("q came from a.lhs");
    let p2 = other_of(b.lhs(), q).expect("q came from b.lhs");
    if let Ok(t) = RootedTriple::new(p, p2, a.rhs().clone()) {
        out.insert(t);
    }
}

/// `{pq|o, qo|o'} |- {pq|o', po|o'}`
fn rule_chained_rhs(a: &RootedTriple, b: &RootedTriple, out: &mut TripleSet) {
    let o = a.rhs();
    let Some(q) = other_of(b.lhs(), o) else {
        return;
    };
    let Some(p) = other_of(a.lhs(), &q) else {
        return;
    };
    let o2 = b.rhs();
    if a.contains(o2) {
        return;
    }
    out.insert(RootedTriple::new(p.clone(), q, o2.clone()).expect("distinct by the guards above"));
    out.insert(RootedTriple::new(p, o.clone(), o2.clone()).expect("distinct by the guards above"));
}

/// `{pp'|o, oo'|p} |- {pp'|o', oo'|p'}`
fn rule_crossed(a: &RootedTriple, b: &RootedTriple, out: &mut TripleSet) {
    let o = a.rhs();
    let p = b.rhs();
    let Some(o2) = other_of(b.lhs(), o) else {
        return;
    };
    let Some(p2) = other_of(a.lhs(), p) else {
        return;
    };
    if o2 == p2 {
        return;
    }
    out.insert(RootedTriple::new(p.clone(), p2.clone(), o2.clone()).expect("distinct"));
    out.insert(RootedTriple::new(o.clone(), o2, p2).expect("distinct"));
}
