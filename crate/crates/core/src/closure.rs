//! Entailment and closure, for consistent and inconsistent triple sets.
//!
//! For consistent `R`, a candidate `pq|o` is entailed exactly when both
//! counterfactuals `R + po|q` and `R + qo|p` are inconsistent: every binary
//! tree resolves each 3-subset one of three ways, so ruling out the other two
//! pins the candidate. For inconsistent `R`, entailment means some consistent
//! subset entails the triple; by monotonicity it suffices to look at the
//! maximal consistent subsets, which are enumerated with pruning (supersets
//! of an inconsistent set stay inconsistent) plus a lookahead that collapses
//! fully consistent branches.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::build::{is_consistent, kernel};
use crate::leaf::Leaf;
use crate::tree::{enumerate_binary_trees, TreeError};
use crate::triple::{RootedTriple, TripleSet};

/// Largest `|R|` accepted by the subset-enumeration operations.
pub const MAX_SUBSET_ENUMERATION: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClosureError {
    #[error("input triple set is inconsistent")]
    InconsistentInput,
    #[error("triple set of size {size} exceeds the subset-enumeration limit of {max}")]
    SetTooLarge { size: usize, max: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Does every tree displaying `r` display `t`? Requires `r` consistent.
///
/// Leaves of `t` outside `L(r)` are allowed; a triple introducing a fresh
/// leaf is never entailed, because the fresh leaf can always be attached so
/// as to break it.
pub fn entails_consistent(r: &TripleSet, t: &RootedTriple) -> Result<bool, ClosureError> {
    if !is_consistent(r) {
        return Err(ClosureError::InconsistentInput);
    }
    Ok(entails_unchecked(r, t))
}

fn entails_unchecked(r: &TripleSet, t: &RootedTriple) -> bool {
    t.alternatives()
        .iter()
        .all(|alt| !is_consistent(&r.with(alt.clone())))
}

/// The closure of a consistent set: every entailed triple over `L(r)`.
/// Always a superset of `r`.
pub fn closure_consistent(r: &TripleSet) -> Result<TripleSet, ClosureError> {
    if !is_consistent(r) {
        return Err(ClosureError::InconsistentInput);
    }
    let leaves: Vec<Leaf> = r.leaves().into_iter().collect();
    let mut out = TripleSet::new();
    for t in candidate_triples(&leaves) {
        if entails_unchecked(r, &t) {
            out.insert(t);
        }
    }
    Ok(out)
}

/// All `C(|L|,2) * (|L|-2)` candidate triples over a leaf universe.
fn candidate_triples(leaves: &[Leaf]) -> impl Iterator<Item = RootedTriple> + '_ {
    let n = leaves.len();
    (0..n).flat_map(move |i| {
        (i + 1..n).flat_map(move |j| {
            (0..n).filter(move |&k| k != i && k != j).map(move |k| {
                RootedTriple::new(leaves[i].clone(), leaves[j].clone(), leaves[k].clone())
                    .expect("indices distinct")
            })
        })
    })
}

/// Brute-force closure: intersects the displayed-triple sets of every binary
/// tree on `L(r)` that displays all of `r`. Must agree with
/// `closure_consistent`; kept as an independent oracle.
pub fn closure_oracle(r: &TripleSet) -> Result<TripleSet, ClosureError> {
    if r.is_empty() {
        return Ok(TripleSet::new());
    }
    let leaves = r.leaves();
    closure_oracle_on(r, &leaves)
}

/// `closure_oracle` over an explicit universe (must cover `L(r)`).
pub fn closure_oracle_on(
    r: &TripleSet,
    leaves: &BTreeSet<Leaf>,
) -> Result<TripleSet, ClosureError> {
    let mut intersection: Option<TripleSet> = None;
    for tree in enumerate_binary_trees(leaves)? {
        if r.iter().all(|t| tree.displays_unchecked(t)) {
            let displayed = tree.displayed_triples();
            intersection = Some(match intersection {
                None => displayed,
                Some(acc) => acc
                    .iter()
                    .filter(|t| displayed.contains(t))
                    .cloned()
                    .collect(),
            });
        }
    }
    intersection.ok_or(ClosureError::InconsistentInput)
}

/// Visits every maximal consistent subset of `r` exactly once. `Break` stops
/// the enumeration early.
///
/// The search decides triples one by one in canonical order. Including is
/// only tried when the result stays consistent; excluding a compatible triple
/// records an obligation that the finished set must refuse it. Before
/// branching, the lookahead "take everything left" is tested: if that is
/// consistent it is the only candidate below this branch.
pub fn for_each_maximal_consistent_subset<F>(r: &TripleSet, f: &mut F) -> Result<(), ClosureError>
where
    F: FnMut(&TripleSet) -> ControlFlow<()>,
{
    if r.len() > MAX_SUBSET_ENUMERATION {
        return Err(ClosureError::SetTooLarge {
            size: r.len(),
            max: MAX_SUBSET_ENUMERATION,
        });
    }
    let ctx = SubsetCtx::new(r);
    let mut chosen: Vec<usize> = Vec::new();
    let mut excluded: Vec<usize> = Vec::new();
    let _ = ctx.visit(&mut chosen, &mut excluded, 0, f);
    Ok(())
}

/// Collects the maximal consistent subsets in enumeration order.
pub fn maximal_consistent_subsets(r: &TripleSet) -> Result<Vec<TripleSet>, ClosureError> {
    let mut out = Vec::new();
    for_each_maximal_consistent_subset(r, &mut |s| {
        out.push(s.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

struct SubsetCtx {
    triples: Vec<RootedTriple>,
    indexed: Vec<[u32; 3]>,
    n_leaves: usize,
}

impl SubsetCtx {
    fn new(r: &TripleSet) -> Self {
        let table: Vec<Leaf> = r.leaves().into_iter().collect();
        let triples: Vec<RootedTriple> = r.iter().cloned().collect();
        let indexed = triples
            .iter()
            .map(|t| {
                let lookup = |l: &Leaf| table.binary_search(l).expect("leaf in universe") as u32;
                let (p, q) = t.lhs();
                [lookup(p), lookup(q), lookup(t.rhs())]
            })
            .collect();
        SubsetCtx {
            triples,
            indexed,
            n_leaves: table.len(),
        }
    }

    fn consistent(&self, chosen: &[usize], extra: impl Iterator<Item = usize> + Clone) -> bool {
        if self.n_leaves == 0 {
            return true;
        }
        let subset: Vec<[u32; 3]> = chosen
            .iter()
            .copied()
            .chain(extra)
            .map(|i| self.indexed[i])
            .collect();
        kernel::consistent(&subset, (0..self.n_leaves as u32).collect(), self.n_leaves)
    }

    fn to_set(&self, chosen: &[usize], extra: impl Iterator<Item = usize>) -> TripleSet {
        chosen
            .iter()
            .copied()
            .chain(extra)
            .map(|i| self.triples[i].clone())
            .collect()
    }

    fn visit<F>(
        &self,
        chosen: &mut Vec<usize>,
        excluded: &mut Vec<usize>,
        next: usize,
        f: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&TripleSet) -> ControlFlow<()>,
    {
        let n = self.triples.len();
        // lookahead: everything still undecided
        if self.consistent(chosen, next..n) {
            let maximal = excluded
                .iter()
                .all(|&x| !self.consistent(chosen, (next..n).chain(std::iter::once(x))));
            if maximal {
                return f(&self.to_set(chosen, next..n));
            }
            // the candidate absorbs every set below this branch, and it is
            // not maximal, so nothing here is
            return ControlFlow::Continue(());
        }
        debug_assert!(next < n, "chosen alone is consistent by construction");
        if self.consistent(chosen, std::iter::once(next)) {
            chosen.push(next);
            self.visit(chosen, excluded, next + 1, f)?;
            chosen.pop();
            excluded.push(next);
            self.visit(chosen, excluded, next + 1, f)?;
            excluded.pop();
        } else {
            // monotonicity: no superset of `chosen` can take this triple,
            // so maximality against it is automatic
            self.visit(chosen, excluded, next + 1, f)?;
        }
        ControlFlow::Continue(())
    }
}

/// Entailment from a possibly inconsistent set: does some consistent subset
/// entail `t`? Returns the first witnessing maximal consistent subset.
pub fn entails_inconsistent(
    r: &TripleSet,
    t: &RootedTriple,
) -> Result<(bool, Option<TripleSet>), ClosureError> {
    let mut witness = None;
    for_each_maximal_consistent_subset(r, &mut |m| {
        if entails_unchecked(m, t) {
            witness = Some(m.clone());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok((witness.is_some(), witness))
}

/// Closure of a possibly inconsistent set: the union of the closures of its
/// maximal consistent subsets. Always a superset of `r`, since singletons are
/// consistent.
pub fn closure_inconsistent(r: &TripleSet) -> Result<TripleSet, ClosureError> {
    if r.len() > MAX_SUBSET_ENUMERATION {
        return Err(ClosureError::SetTooLarge {
            size: r.len(),
            max: MAX_SUBSET_ENUMERATION,
        });
    }
    if is_consistent(r) {
        return closure_consistent(r);
    }
    let mut out = TripleSet::new();
    for_each_maximal_consistent_subset(r, &mut |m| {
        let closed = closure_consistent(m).expect("maximal subsets are consistent");
        out = out.union(&closed);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}
