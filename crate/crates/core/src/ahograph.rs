//! The Ahograph: the leaf-vertex multigraph that drives BUILD.
//!
//! For a triple set `R` and leaf set `L`, the Ahograph `[R, L]` has one
//! A-node per leaf of `L` and, for every `pq|o` in `R` with all of `p`, `q`,
//! `o` inside `L`, one A-edge `{p, q}` labeled `o`. It is a multigraph: each
//! applicable triple contributes its own labeled edge.

use std::collections::{BTreeMap, BTreeSet};

use crate::leaf::Leaf;
use crate::triple::TripleSet;

/// One labeled A-edge; endpoints are stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AEdge {
    pub ends: (Leaf, Leaf),
    pub label: Leaf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ahograph {
    nodes: BTreeSet<Leaf>,
    edges: Vec<AEdge>,
}

impl Ahograph {
    /// Builds `[R, L]`: edges only for triples entirely inside `leaves`.
    pub fn new(r: &TripleSet, leaves: &BTreeSet<Leaf>) -> Self {
        let mut edges = Vec::new();
        for t in r {
            if t.leaves().iter().all(|l| leaves.contains(l)) {
                let (p, q) = t.lhs();
                edges.push(AEdge {
                    ends: (p.clone(), q.clone()),
                    label: t.rhs().clone(),
                });
            }
        }
        edges.sort();
        Ahograph {
            nodes: leaves.clone(),
            edges,
        }
    }

    pub fn nodes(&self) -> &BTreeSet<Leaf> {
        &self.nodes
    }

    pub fn edges(&self) -> &[AEdge] {
        &self.edges
    }

    /// Connected components over the A-nodes, each sorted, listed in order of
    /// their smallest member. Isolated A-nodes form singleton components.
    pub fn components(&self) -> Vec<BTreeSet<Leaf>> {
        let ids: BTreeMap<&Leaf, usize> =
            self.nodes.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let mut parent: Vec<usize> = (0..self.nodes.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &self.edges {
            let a = find(&mut parent, ids[&e.ends.0]);
            let b = find(&mut parent, ids[&e.ends.1]);
            if a != b {
                parent[a] = b;
            }
        }
        let mut groups: BTreeMap<usize, BTreeSet<Leaf>> = BTreeMap::new();
        for (leaf, &id) in &ids {
            let root = find(&mut parent, id);
            groups.entry(root).or_default().insert((*leaf).clone());
        }
        let mut comps: Vec<BTreeSet<Leaf>> = groups.into_values().collect();
        comps.sort_by(|a, b| a.iter().next().cmp(&b.iter().next()));
        comps
    }
}
