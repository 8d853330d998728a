//! Rooted trees with uniquely labeled leaves, the triple-display check, and
//! exhaustive enumeration of binary topologies (the oracle substrate for
//! closure checks).

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::leaf::{Leaf, LeafError};
use crate::triple::{RootedTriple, TripleSet};

/// Largest universe `enumerate_binary_trees` accepts; the count grows as
/// `(2n-3)!!`, so 8 leaves already means 135135 trees.
pub const MAX_ENUM_LEAVES: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("leaf {0} does not occur in the tree")]
    UnknownLeaf(Leaf),
    #[error("leaf {0} occurs more than once")]
    DuplicateLeafLabel(Leaf),
    #[error("internal nodes need at least two children")]
    UnaryNode,
    #[error("empty leaf set")]
    EmptyLeafSet,
    #[error("universe of {size} leaves exceeds the enumeration limit of {max}")]
    UniverseTooLarge { size: usize, max: usize },
    #[error("newick parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Leaf(#[from] LeafError),
}

/// A rooted tree. Internal nodes have two or more children; children are kept
/// sorted by their smallest leaf so equal topologies compare equal and the
/// Newick rendering is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootedTree {
    Leaf(Leaf),
    Node(Vec<RootedTree>),
}

impl RootedTree {
    pub fn leaf(l: Leaf) -> Self {
        RootedTree::Leaf(l)
    }

    /// Builds an internal node, sorting children into canonical order and
    /// rejecting duplicate leaf labels or fewer than two children.
    pub fn node(children: Vec<RootedTree>) -> Result<Self, TreeError> {
        if children.len() < 2 {
            return Err(TreeError::UnaryNode);
        }
        let tree = Self::node_unchecked(children);
        let mut seen = BTreeSet::new();
        for l in tree.leaf_iter() {
            if !seen.insert(l.clone()) {
                return Err(TreeError::DuplicateLeafLabel(l.clone()));
            }
        }
        Ok(tree)
    }

    /// Same as `node` but trusts the caller about label uniqueness.
    pub(crate) fn node_unchecked(mut children: Vec<RootedTree>) -> Self {
        children.sort_by(|a, b| a.min_leaf().cmp(b.min_leaf()));
        RootedTree::Node(children)
    }

    pub fn min_leaf(&self) -> &Leaf {
        match self {
            RootedTree::Leaf(l) => l,
            // children are sorted by min leaf, so the first child carries it
            RootedTree::Node(cs) => cs[0].min_leaf(),
        }
    }

    fn leaf_iter(&self) -> Box<dyn Iterator<Item = &Leaf> + '_> {
        match self {
            RootedTree::Leaf(l) => Box::new(std::iter::once(l)),
            RootedTree::Node(cs) => Box::new(cs.iter().flat_map(|c| c.leaf_iter())),
        }
    }

    pub fn leaves(&self) -> BTreeSet<Leaf> {
        self.leaf_iter().cloned().collect()
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            RootedTree::Leaf(_) => 1,
            RootedTree::Node(cs) => cs.iter().map(|c| c.leaf_count()).sum(),
        }
    }

    pub fn is_binary(&self) -> bool {
        match self {
            RootedTree::Leaf(_) => true,
            RootedTree::Node(cs) => cs.len() == 2 && cs.iter().all(|c| c.is_binary()),
        }
    }

    /// Does this tree display `t = pq|o`, i.e. is `lca(p,q)` a proper
    /// descendant of `lca(p,o) = lca(q,o)`? Valid for non-binary trees too.
    pub fn displays(&self, t: &RootedTriple) -> Result<bool, TreeError> {
        let leaves = self.leaves();
        for l in t.leaves() {
            if !leaves.contains(l) {
                return Err(TreeError::UnknownLeaf(l.clone()));
            }
        }
        Ok(self.displays_unchecked(t))
    }

    /// Display check without the membership precondition: leaves absent from
    /// the tree simply never meet, so the answer is `false`.
    pub(crate) fn displays_unchecked(&self, t: &RootedTriple) -> bool {
        let (p, q) = t.lhs();
        matches!(self.scan_pair(p, q, t.rhs()), (_, Some(true)))
    }

    /// Bottom-up scan: returns (bitmask of {p,q,o} present, verdict). The
    /// verdict is fixed at the deepest node containing both p and q: the
    /// triple holds iff o is not also in that subtree.
    fn scan_pair(&self, p: &Leaf, q: &Leaf, o: &Leaf) -> (u8, Option<bool>) {
        match self {
            RootedTree::Leaf(l) => {
                let mut mask = 0u8;
                if l == p {
                    mask |= 1;
                }
                if l == q {
                    mask |= 2;
                }
                if l == o {
                    mask |= 4;
                }
                (mask, None)
            }
            RootedTree::Node(cs) => {
                let mut mask = 0u8;
                for c in cs {
                    let (m, verdict) = c.scan_pair(p, q, o);
                    if verdict.is_some() {
                        return (m | mask, verdict);
                    }
                    mask |= m;
                }
                if mask & 3 == 3 {
                    return (mask, Some(mask & 4 == 0));
                }
                (mask, None)
            }
        }
    }

    /// All triples over 3-subsets of the leaf set that this tree displays.
    /// For a binary tree that is exactly one triple per 3-subset.
    pub fn displayed_triples(&self) -> TripleSet {
        let leaves: Vec<Leaf> = self.leaves().into_iter().collect();
        let mut out = TripleSet::new();
        for i in 0..leaves.len() {
            for j in i + 1..leaves.len() {
                for k in j + 1..leaves.len() {
                    for (p, q, o) in [
                        (&leaves[i], &leaves[j], &leaves[k]),
                        (&leaves[i], &leaves[k], &leaves[j]),
                        (&leaves[j], &leaves[k], &leaves[i]),
                    ] {
                        let t = RootedTriple::new(p.clone(), q.clone(), o.clone())
                            .expect("combination indices are distinct");
                        if self.displays_unchecked(&t) {
                            out.insert(t);
                            break;
                        }
                    }
                }
            }
        }
        out
    }

    /// Newick rendering, children in canonical order: `((a,b),c);`
    pub fn to_newick(&self) -> String {
        let mut out = String::new();
        self.write_newick(&mut out);
        out.push(';');
        out
    }

    fn write_newick(&self, out: &mut String) {
        match self {
            RootedTree::Leaf(l) => out.push_str(l.as_str()),
            RootedTree::Node(cs) => {
                out.push('(');
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    c.write_newick(out);
                }
                out.push(')');
            }
        }
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_newick())
    }
}

/// Parses the Newick subset produced by `to_newick`: leaf names from
/// `[A-Za-z0-9_+]+`, parentheses, commas, and a terminating `;`.
pub fn parse_newick(text: &str) -> Result<RootedTree, TreeError> {
    let bytes = text.trim().as_bytes();
    let err = |pos: usize, msg: &str| TreeError::Parse {
        pos,
        msg: msg.to_string(),
    };
    let mut pos = 0usize;
    let tree = parse_newick_node(bytes, &mut pos)?;
    if pos < bytes.len() && bytes[pos] == b';' {
        pos += 1;
    } else {
        return Err(err(pos, "expected `;`"));
    }
    if pos != bytes.len() {
        return Err(err(pos, "trailing input"));
    }
    // re-validate through the public constructor so label uniqueness holds
    match tree {
        RootedTree::Leaf(_) => Ok(tree),
        RootedTree::Node(cs) => RootedTree::node(cs),
    }
}

fn parse_newick_node(bytes: &[u8], pos: &mut usize) -> Result<RootedTree, TreeError> {
    let err = |pos: usize, msg: &str| TreeError::Parse {
        pos,
        msg: msg.to_string(),
    };
    if *pos >= bytes.len() {
        return Err(err(*pos, "unexpected end of input"));
    }
    if bytes[*pos] == b'(' {
        *pos += 1;
        let mut children = vec![parse_newick_node(bytes, pos)?];
        while *pos < bytes.len() && bytes[*pos] == b',' {
            *pos += 1;
            children.push(parse_newick_node(bytes, pos)?);
        }
        if *pos >= bytes.len() || bytes[*pos] != b')' {
            return Err(err(*pos, "expected `)`"));
        }
        *pos += 1;
        if children.len() < 2 {
            return Err(err(*pos, "internal node needs at least two children"));
        }
        Ok(RootedTree::node_unchecked(children))
    } else {
        let start = *pos;
        while *pos < bytes.len() && crate::leaf::is_name_byte(bytes[*pos]) {
            *pos += 1;
        }
        if *pos == start {
            return Err(err(*pos, "expected a leaf name"));
        }
        let name = std::str::from_utf8(&bytes[start..*pos]).expect("name bytes are ascii");
        Ok(RootedTree::Leaf(Leaf::new(name)?))
    }
}

/// Enumerates every rooted binary tree on `leaves` exactly once (up to
/// child-order isomorphism), in a fixed deterministic order. The count is
/// `(2n-3)!!` for `n >= 2`.
pub fn enumerate_binary_trees(
    leaves: &BTreeSet<Leaf>,
) -> Result<impl Iterator<Item = RootedTree>, TreeError> {
    if leaves.is_empty() {
        return Err(TreeError::EmptyLeafSet);
    }
    if leaves.len() > MAX_ENUM_LEAVES {
        return Err(TreeError::UniverseTooLarge {
            size: leaves.len(),
            max: MAX_ENUM_LEAVES,
        });
    }
    Ok(BinaryTreeIter {
        leaves: leaves.iter().cloned().collect(),
        counters: vec![0; leaves.len().saturating_sub(1)],
        done: false,
    })
}

/// Iterator over binary topologies. Each tree corresponds to one value of a
/// mixed-radix counter: leaf k+1 is attached at one of the 2k-1 possible
/// positions (every node of the k-leaf tree, i.e. every edge plus the
/// above-root position) of the tree built from the first k leaves.
struct BinaryTreeIter {
    leaves: Vec<Leaf>,
    counters: Vec<usize>,
    done: bool,
}

impl Iterator for BinaryTreeIter {
    type Item = RootedTree;

    fn next(&mut self) -> Option<RootedTree> {
        if self.done {
            return None;
        }
        let tree = materialize(&self.leaves, &self.counters);
        // increment the mixed-radix counter; radix for counters[i] is 2i+1
        let mut i = 0;
        loop {
            if i == self.counters.len() {
                self.done = true;
                break;
            }
            self.counters[i] += 1;
            if self.counters[i] < 2 * i + 1 {
                break;
            }
            self.counters[i] = 0;
            i += 1;
        }
        Some(tree)
    }
}

enum GrowTree {
    Leaf(usize),
    Node(Box<GrowTree>, Box<GrowTree>),
}

impl GrowTree {
    /// Replaces the node at preorder position `target` with a cherry of that
    /// node and a fresh leaf. Returns nodes visited so the caller can track
    /// the preorder offset.
    fn insert_at(&mut self, target: usize, next: &mut usize, leaf: usize) -> bool {
        if *next == target {
            let old = std::mem::replace(self, GrowTree::Leaf(usize::MAX));
            *self = GrowTree::Node(Box::new(old), Box::new(GrowTree::Leaf(leaf)));
            return true;
        }
        *next += 1;
        match self {
            GrowTree::Leaf(_) => false,
            GrowTree::Node(l, r) => {
                l.insert_at(target, next, leaf) || r.insert_at(target, next, leaf)
            }
        }
    }

    fn to_rooted(&self, leaves: &[Leaf]) -> RootedTree {
        match self {
            GrowTree::Leaf(i) => RootedTree::Leaf(leaves[*i].clone()),
            GrowTree::Node(l, r) => {
                RootedTree::node_unchecked(vec![l.to_rooted(leaves), r.to_rooted(leaves)])
            }
        }
    }
}

fn materialize(leaves: &[Leaf], counters: &[usize]) -> RootedTree {
    let mut tree = GrowTree::Leaf(0);
    for (i, &c) in counters.iter().enumerate() {
        let mut next = 0;
        let inserted = tree.insert_at(c, &mut next, i + 1);
        debug_assert!(inserted, "counter {c} within radix {}", 2 * i + 1);
    }
    tree.to_rooted(leaves)
}
