//! The BUILD consistency decision.
//!
//! BUILD recurses on the connected components of the Ahograph: a single
//! multi-leaf component means no tree can display the triples; otherwise each
//! component becomes one child subtree. Components (and hence children) are
//! ordered by smallest leaf, so the output is deterministic.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::leaf::Leaf;
use crate::tree::RootedTree;
use crate::triple::TripleSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("empty leaf set")]
    EmptyLeafSet,
}

/// Outcome of BUILD: a displaying tree (possibly non-binary), or the leaf set
/// on which the Ahograph stayed connected with more than one A-node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConsistencyResult {
    Consistent(RootedTree),
    Inconsistent(BTreeSet<Leaf>),
}

impl ConsistencyResult {
    pub fn is_consistent(&self) -> bool {
        matches!(self, ConsistencyResult::Consistent(_))
    }

    pub fn tree(&self) -> Option<&RootedTree> {
        match self {
            ConsistencyResult::Consistent(t) => Some(t),
            ConsistencyResult::Inconsistent(_) => None,
        }
    }
}

/// Runs BUILD on `r` over the leaf set `leaves`. Triples with a leaf outside
/// `leaves` are ignored, matching the Ahograph definition.
pub fn build(r: &TripleSet, leaves: &BTreeSet<Leaf>) -> Result<ConsistencyResult, BuildError> {
    if leaves.is_empty() {
        return Err(BuildError::EmptyLeafSet);
    }
    let table: Vec<Leaf> = leaves.iter().cloned().collect();
    let idx = indexed_triples(r, &table);
    let all: Vec<u32> = (0..table.len() as u32).collect();
    match kernel::build_tree(&idx, all, table.len()) {
        Ok(node) => Ok(ConsistencyResult::Consistent(to_rooted(&node, &table))),
        Err(witness) => Ok(ConsistencyResult::Inconsistent(
            witness.into_iter().map(|i| table[i as usize].clone()).collect(),
        )),
    }
}

/// Is there a tree displaying every triple of `r`? The empty set is
/// consistent.
pub fn is_consistent(r: &TripleSet) -> bool {
    let leaves = r.leaves();
    if leaves.is_empty() {
        return true;
    }
    let table: Vec<Leaf> = leaves.iter().cloned().collect();
    let idx = indexed_triples(r, &table);
    let all: Vec<u32> = (0..table.len() as u32).collect();
    kernel::consistent(&idx, all, table.len())
}

fn indexed_triples(r: &TripleSet, table: &[Leaf]) -> Vec<[u32; 3]> {
    let lookup = |l: &Leaf| table.binary_search(l).ok().map(|i| i as u32);
    r.iter()
        .filter_map(|t| {
            let (p, q) = t.lhs();
            Some([lookup(p)?, lookup(q)?, lookup(t.rhs())?])
        })
        .collect()
}

fn to_rooted(node: &kernel::IdxTree, table: &[Leaf]) -> RootedTree {
    match node {
        kernel::IdxTree::Leaf(i) => RootedTree::Leaf(table[*i as usize].clone()),
        kernel::IdxTree::Node(children) => {
            // children arrive ordered by minimum leaf id, which is exactly
            // the lexicographic order of leaf names
            RootedTree::node_unchecked(children.iter().map(|c| to_rooted(c, table)).collect())
        }
    }
}

/// Index-based BUILD kernel shared with the closure module, where the same
/// recursion runs thousands of times during subset enumeration.
pub(crate) mod kernel {
    #[derive(Debug)]
    pub(crate) enum IdxTree {
        Leaf(u32),
        Node(Vec<IdxTree>),
    }

    /// Scratch shared down the recursion: `member` marks the current leaf
    /// subset, `pos` maps a global leaf id to its local union-find slot.
    struct Scratch {
        member: Vec<bool>,
        pos: Vec<u32>,
    }

    impl Scratch {
        fn new(n_leaves: usize) -> Self {
            Scratch {
                member: vec![false; n_leaves],
                pos: vec![0; n_leaves],
            }
        }
    }

    /// BUILD returning the tree; `Err` carries the leaf set of the first
    /// connected multi-leaf Ahograph encountered.
    pub(crate) fn build_tree(
        triples: &[[u32; 3]],
        leaves: Vec<u32>,
        n_leaves: usize,
    ) -> Result<IdxTree, Vec<u32>> {
        build_rec(triples, leaves, &mut Scratch::new(n_leaves))
    }

    /// Consistency decision only; avoids building trees.
    pub(crate) fn consistent(triples: &[[u32; 3]], leaves: Vec<u32>, n_leaves: usize) -> bool {
        consistent_rec(triples, leaves, &mut Scratch::new(n_leaves))
    }

    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }

    /// Splits `leaves` into Ahograph components. `None` means a single
    /// component spanning more than one leaf (the BUILD failure condition).
    /// The membership scratch is restored to all-false before returning.
    fn split(
        triples: &[[u32; 3]],
        leaves: &[u32],
        scratch: &mut Scratch,
    ) -> Option<Vec<(Vec<u32>, Vec<[u32; 3]>)>> {
        for (i, &l) in leaves.iter().enumerate() {
            scratch.member[l as usize] = true;
            scratch.pos[l as usize] = i as u32;
        }
        let mut parent: Vec<u32> = (0..leaves.len() as u32).collect();
        let mut active: Vec<[u32; 3]> = Vec::new();
        for t in triples {
            if scratch.member[t[0] as usize]
                && scratch.member[t[1] as usize]
                && scratch.member[t[2] as usize]
            {
                active.push(*t);
                let a = find(&mut parent, scratch.pos[t[0] as usize]);
                let b = find(&mut parent, scratch.pos[t[1] as usize]);
                if a != b {
                    parent[a as usize] = b;
                }
            }
        }
        for &l in leaves {
            scratch.member[l as usize] = false;
        }

        // group leaves by component root; `leaves` is ascending, so groups
        // come out ordered by their minimum member
        let mut group_of_root: Vec<u32> = vec![u32::MAX; leaves.len()];
        let mut groups: Vec<(Vec<u32>, Vec<[u32; 3]>)> = Vec::new();
        for (i, &l) in leaves.iter().enumerate() {
            let root = find(&mut parent, i as u32) as usize;
            if group_of_root[root] == u32::MAX {
                group_of_root[root] = groups.len() as u32;
                groups.push((Vec::new(), Vec::new()));
            }
            groups[group_of_root[root] as usize].0.push(l);
        }
        if groups.len() == 1 && leaves.len() > 1 {
            return None;
        }
        // park each active triple with its component (o may live elsewhere,
        // in which case the triple goes quiet there, as it should)
        for t in active {
            let root = find(&mut parent, scratch.pos[t[0] as usize]) as usize;
            groups[group_of_root[root] as usize].1.push(t);
        }
        Some(groups)
    }

    fn build_rec(
        triples: &[[u32; 3]],
        leaves: Vec<u32>,
        scratch: &mut Scratch,
    ) -> Result<IdxTree, Vec<u32>> {
        if leaves.len() == 1 {
            return Ok(IdxTree::Leaf(leaves[0]));
        }
        let groups = split(triples, &leaves, scratch).ok_or(leaves)?;
        let mut children = Vec::with_capacity(groups.len());
        for (ls, ts) in groups {
            children.push(build_rec(&ts, ls, scratch)?);
        }
        Ok(IdxTree::Node(children))
    }

    fn consistent_rec(triples: &[[u32; 3]], leaves: Vec<u32>, scratch: &mut Scratch) -> bool {
        if leaves.len() <= 2 {
            // a triple needs three leaves, so nothing applies here
            return true;
        }
        let Some(groups) = split(triples, &leaves, scratch) else {
            return false;
        };
        groups
            .into_iter()
            .all(|(ls, ts)| consistent_rec(&ts, ls, scratch))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triple::test_support::{leaf, triples};

    fn leaf_set(names: &[&str]) -> BTreeSet<Leaf> {
        names.iter().map(|n| leaf(n)).collect()
    }

    #[test]
    fn single_triple_builds_cherry() {
        let r = triples(&[("a", "b", "c")]);
        let result = build(&r, &leaf_set(&["a", "b", "c"])).unwrap();
        let tree = result.tree().expect("consistent");
        assert_eq!(tree.to_newick(), "((a,b),c);");
    }

    #[test]
    fn conflicting_pair_is_inconsistent_with_witness() {
        let r = triples(&[("a", "b", "c"), ("b", "c", "a")]);
        match build(&r, &leaf_set(&["a", "b", "c"])).unwrap() {
            ConsistencyResult::Inconsistent(witness) => {
                assert_eq!(witness, leaf_set(&["a", "b", "c"]))
            }
            ConsistencyResult::Consistent(t) => panic!("unexpected tree {t}"),
        }
    }

    #[test]
    fn no_triples_yields_fan() {
        let result = build(&TripleSet::new(), &leaf_set(&["a", "b", "c"])).unwrap();
        assert_eq!(result.tree().unwrap().to_newick(), "(a,b,c);");
    }

    #[test]
    fn empty_leaf_set_is_an_error() {
        assert_eq!(
            build(&TripleSet::new(), &BTreeSet::new()),
            Err(BuildError::EmptyLeafSet)
        );
    }

    #[test]
    fn consistency_examples() {
        assert!(is_consistent(&triples(&[("a", "b", "c")])));
        assert!(!is_consistent(&triples(&[("a", "b", "c"), ("a", "c", "b")])));
        assert!(is_consistent(&triples(&[("a", "b", "c"), ("b", "c", "d")])));
        assert!(is_consistent(&TripleSet::new()));
    }

    #[test]
    fn chained_triples_build_caterpillar() {
        let r = triples(&[("a", "b", "c"), ("b", "c", "d")]);
        let result = build(&r, &r.leaves()).unwrap();
        assert_eq!(result.tree().unwrap().to_newick(), "(((a,b),c),d);");
    }

    #[test]
    fn build_output_displays_every_input_triple() {
        let r = triples(&[("a", "b", "e"), ("c", "d", "e"), ("a", "c", "e")]);
        let result = build(&r, &r.leaves()).unwrap();
        let tree = result.tree().expect("consistent");
        for t in &r {
            assert!(tree.displays(t).unwrap(), "missing {t}");
        }
    }

    #[test]
    fn fast_path_agrees_with_tree_path() {
        // a few hand-picked sets exercising both verdicts
        let cases = [
            triples(&[("a", "b", "c"), ("b", "c", "d"), ("a", "d", "c")]),
            triples(&[("a", "b", "c"), ("c", "d", "a"), ("b", "d", "a")]),
            triples(&[("a", "b", "c"), ("a", "c", "b")]),
            triples(&[("a", "b", "x"), ("x", "y", "a")]),
        ];
        for r in cases {
            let via_tree = build(&r, &r.leaves()).unwrap().is_consistent();
            assert_eq!(is_consistent(&r), via_tree, "disagreement on {r}");
        }
    }
}
