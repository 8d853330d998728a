//! Reachability and path search over 1-2-hypergraphs.
//!
//! In a 1-2-hypergraph every simple path is a B-hyperpath (the tail of each
//! arc is a single node), so acyclic-path existence is searched directly over
//! arc sequences. A back-arc — an arc with a head equal to an earlier arc's
//! tail — makes a path cyclic; the searches prune any extension that would
//! create one, which keeps them exhaustive over acyclic sequences.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::hypergraph::{HNode, HPath, Hyperarc, Hypergraph, HypergraphError};

/// Exact rational epsilon for the amplification transform.
pub type Epsilon = Ratio<u64>;

/// Default cap on explored arc-sequence extensions.
pub const DEFAULT_SEARCH_EXPANSIONS: u64 = 10_000_000;

/// Default cap on generated dummy arcs in `amplify`.
pub const DEFAULT_DUMMY_ARC_BUDGET: u64 = 1_000_000;

/// Expansion budget for the path searches; exceeding it is reported as
/// `ResourceExhausted`, distinct from "no path".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_expansions: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_expansions: DEFAULT_SEARCH_EXPANSIONS,
        }
    }
}

/// Classification of an arc sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathClass {
    /// Chaining or arc-distinctness fails.
    NotAPath,
    /// A simple path containing a back-arc (wrap-around included).
    CyclicPath,
    /// A simple path with no back-arc.
    AcyclicPath,
}

/// Everything B-connected to `u`: the least set containing `u` and closed
/// under firing arcs whose tail is already in the set.
pub fn b_connected_set(
    h: &Hypergraph,
    u: &HNode,
) -> Result<BTreeSet<HNode>, HypergraphError> {
    if !h.contains_node(u) {
        return Err(HypergraphError::UnknownNode(u.to_string()));
    }
    let by_tail = arcs_by_tail(h);
    let mut reached: BTreeSet<HNode> = BTreeSet::new();
    let mut work = vec![u.clone()];
    reached.insert(u.clone());
    while let Some(n) = work.pop() {
        if let Some(arcs) = by_tail.get(&n) {
            for a in arcs {
                for head in [a.heads().0, a.heads().1] {
                    if reached.insert(head.clone()) {
                        work.push(head.clone());
                    }
                }
            }
        }
    }
    Ok(reached)
}

fn arcs_by_tail(h: &Hypergraph) -> BTreeMap<&HNode, Vec<&Hyperarc>> {
    let mut map: BTreeMap<&HNode, Vec<&Hyperarc>> = BTreeMap::new();
    for a in h.arcs() {
        map.entry(a.tail()).or_default().push(a);
    }
    // BTreeSet iteration is already sorted, so each bucket is sorted too
    map
}

/// Classifies an arc sequence. All arcs must belong to `h`.
pub fn validate_path(h: &Hypergraph, seq: &[Hyperarc]) -> Result<PathClass, HypergraphError> {
    for a in seq {
        if !h.contains_arc(a) {
            return Err(HypergraphError::ArcNotInGraph(a.to_string()));
        }
    }
    for (i, a) in seq.iter().enumerate() {
        if seq[i + 1..].contains(a) {
            return Ok(PathClass::NotAPath);
        }
    }
    for k in 0..seq.len().saturating_sub(1) {
        if !seq[k].has_head(seq[k + 1].tail()) {
            return Ok(PathClass::NotAPath);
        }
    }
    // back-arc: a head equal to a strictly earlier tail; the wrap-around
    // cycle case is the instance k' = 1, k = len
    for k in 1..seq.len() {
        for earlier in &seq[..k] {
            if seq[k].has_head(earlier.tail()) {
                return Ok(PathClass::CyclicPath);
            }
        }
    }
    Ok(PathClass::AcyclicPath)
}

struct PathSearch<'g> {
    by_tail: BTreeMap<&'g HNode, Vec<&'g Hyperarc>>,
    dest: &'g HNode,
    budget: u64,
    spent: u64,
}

enum SearchHit {
    Found(Vec<Hyperarc>),
    NotFound,
}

impl<'g> PathSearch<'g> {
    /// Depth-first search over acyclic arc sequences in lexicographic order.
    /// `limit` of `None` searches any length; `Some(l)` accepts only paths of
    /// exactly `l` arcs.
    fn run(
        &mut self,
        at: &HNode,
        seq: &mut Vec<&'g Hyperarc>,
        tails: &mut BTreeSet<&'g HNode>,
        limit: Option<usize>,
    ) -> Result<SearchHit, HypergraphError> {
        if let Some(l) = limit {
            if seq.len() >= l {
                return Ok(SearchHit::NotFound);
            }
        }
        let Some(candidates) = self.by_tail.get(at).cloned() else {
            return Ok(SearchHit::NotFound);
        };
        for a in candidates {
            if seq.iter().any(|&b| b == a) {
                continue;
            }
            // pruning: extensions creating a back-arc can never become
            // acyclic again
            if tails.contains(a.heads().0) || tails.contains(a.heads().1) {
                continue;
            }
            self.spent += 1;
            if self.spent > self.budget {
                return Err(HypergraphError::ResourceExhausted {
                    budget: self.budget,
                });
            }
            seq.push(a);
            let complete = a.has_head(self.dest) && limit.map_or(true, |l| seq.len() == l);
            if complete {
                return Ok(SearchHit::Found(seq.iter().copied().cloned().collect()));
            }
            tails.insert(a.tail());
            for next in [a.heads().0, a.heads().1] {
                if let SearchHit::Found(p) = self.run(next, seq, tails, limit)? {
                    return Ok(SearchHit::Found(p));
                }
            }
            tails.remove(a.tail());
            seq.pop();
        }
        Ok(SearchHit::NotFound)
    }
}

/// Finds some acyclic simple path from `u` to `v`, or `None` when exhaustive
/// search rules one out. `u == v` yields the empty path.
pub fn find_acyclic_path(
    h: &Hypergraph,
    u: &HNode,
    v: &HNode,
) -> Result<Option<HPath>, HypergraphError> {
    find_acyclic_path_with(h, u, v, SearchBudget::default())
}

pub fn find_acyclic_path_with(
    h: &Hypergraph,
    u: &HNode,
    v: &HNode,
    budget: SearchBudget,
) -> Result<Option<HPath>, HypergraphError> {
    check_nodes(h, u, v)?;
    if u == v {
        return Ok(Some(HPath::new(u.clone(), v.clone(), vec![]).expect("empty path")));
    }
    let mut search = PathSearch {
        by_tail: arcs_by_tail(h),
        dest: v,
        budget: budget.max_expansions,
        spent: 0,
    };
    match search.run(u, &mut Vec::new(), &mut BTreeSet::from([u]), None)? {
        SearchHit::Found(arcs) => Ok(Some(
            HPath::new(u.clone(), v.clone(), arcs).expect("search output chains"),
        )),
        SearchHit::NotFound => Ok(None),
    }
}

/// Result of the minimization search; `Infeasible` stands for the infinite
/// cost of instances with no acyclic path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinPath {
    Path(HPath),
    Infeasible,
}

impl MinPath {
    pub fn path(&self) -> Option<&HPath> {
        match self {
            MinPath::Path(p) => Some(p),
            MinPath::Infeasible => None,
        }
    }
}

/// Shortest acyclic path by arc count, ties broken by lexicographic arc
/// serialization (iterative deepening explores arcs in sorted order).
pub fn min_acyclic_path(
    h: &Hypergraph,
    u: &HNode,
    v: &HNode,
) -> Result<MinPath, HypergraphError> {
    min_acyclic_path_with(h, u, v, SearchBudget::default())
}

pub fn min_acyclic_path_with(
    h: &Hypergraph,
    u: &HNode,
    v: &HNode,
    budget: SearchBudget,
) -> Result<MinPath, HypergraphError> {
    check_nodes(h, u, v)?;
    if u == v {
        return Ok(MinPath::Path(
            HPath::new(u.clone(), v.clone(), vec![]).expect("empty path"),
        ));
    }
    let mut search = PathSearch {
        by_tail: arcs_by_tail(h),
        dest: v,
        budget: budget.max_expansions,
        spent: 0,
    };
    for limit in 1..=h.arcs().len() {
        let hit = search.run(u, &mut Vec::new(), &mut BTreeSet::from([u]), Some(limit))?;
        if let SearchHit::Found(arcs) = hit {
            return Ok(MinPath::Path(
                HPath::new(u.clone(), v.clone(), arcs).expect("search output chains"),
            ));
        }
    }
    Ok(MinPath::Infeasible)
}

fn check_nodes(h: &Hypergraph, u: &HNode, v: &HNode) -> Result<(), HypergraphError> {
    for n in [u, v] {
        if !h.contains_node(n) {
            return Err(HypergraphError::UnknownNode(n.to_string()));
        }
    }
    Ok(())
}

/// Is some subset of `arcs` a cycle (a simple path whose last arc has the
/// first tail among its heads)?
///
/// Splitting each arc into plain tail-to-head edges preserves the answer:
/// a directed cycle visits distinct nodes, so its arcs have distinct tails
/// and are distinct, giving a hypergraph cycle; conversely a hypergraph cycle
/// is a closed walk in the split digraph, which always contains a directed
/// cycle.
pub fn is_cyclic_arcset<'a, I: IntoIterator<Item = &'a Hyperarc>>(arcs: I) -> bool {
    let arcs: Vec<&Hyperarc> = arcs.into_iter().collect();
    let mut nodes: BTreeSet<&HNode> = BTreeSet::new();
    for a in &arcs {
        nodes.insert(a.tail());
        nodes.insert(a.heads().0);
        nodes.insert(a.heads().1);
    }
    let idx: BTreeMap<&HNode, usize> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for a in &arcs {
        let t = idx[a.tail()];
        succ[t].push(idx[a.heads().0]);
        succ[t].push(idx[a.heads().1]);
    }
    // iterative three-color DFS
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Gray,
        Black,
    }
    let mut color = vec![Color::White; nodes.len()];
    for start in 0..nodes.len() {
        if color[start] != Color::White {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        color[start] = Color::Gray;
        while let Some(top) = stack.last_mut() {
            let n = top.0;
            if top.1 < succ[n].len() {
                let m = succ[n][top.1];
                top.1 += 1;
                match color[m] {
                    Color::Gray => return true,
                    Color::White => {
                        color[m] = Color::Gray;
                        stack.push((m, 0));
                    }
                    Color::Black => {}
                }
            } else {
                color[n] = Color::Black;
                stack.pop();
            }
        }
    }
    false
}

/// Output of `amplify`: the padded hypergraph together with the bookkeeping
/// the corollary arithmetic uses. `non_sink_node_count` counts the original
/// nodes plus the dummy chain nodes, excluding the fresh per-arc sinks;
/// `total_node_count` counts everything actually present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmplifiedInstance {
    pub hypergraph: Hypergraph,
    pub dummy_length: u64,
    pub non_sink_node_count: u64,
    pub total_node_count: u64,
}

/// Padding transform: adds a fresh acyclic dummy path of exactly
/// `n^ceil(1 + 1/eps)` arcs from `u` to `v` (each dummy arc carries a fresh
/// sink as its second head, arcs being strictly 1-2).
pub fn amplify(
    h: &Hypergraph,
    u: &HNode,
    v: &HNode,
    eps: Epsilon,
) -> Result<AmplifiedInstance, HypergraphError> {
    amplify_with(h, u, v, eps, DEFAULT_DUMMY_ARC_BUDGET)
}

pub fn amplify_with(
    h: &Hypergraph,
    u: &HNode,
    v: &HNode,
    eps: Epsilon,
    max_dummy_arcs: u64,
) -> Result<AmplifiedInstance, HypergraphError> {
    check_nodes(h, u, v)?;
    if u == v {
        return Err(HypergraphError::SourceEqualsDestination);
    }
    let n = h.nodes().len() as u64;
    let needed = dummy_path_length(n, eps)?;
    let dummy_length = match needed.to_u64() {
        Some(d) if d <= max_dummy_arcs => d,
        _ => {
            return Err(HypergraphError::BudgetExceeded {
                needed,
                budget: max_dummy_arcs,
            })
        }
    };

    // fresh names: w1..w{D-1} for the chain, s1..s{D} for the sinks; prepend
    // underscores until nothing collides with existing named nodes
    let existing: BTreeSet<String> = h
        .nodes()
        .iter()
        .filter_map(|nd| match nd {
            HNode::Named(name) => Some(name.to_string()),
            HNode::Pair(..) => None,
        })
        .collect();
    let mut prefix = String::new();
    loop {
        let collision = (1..=dummy_length).any(|k| {
            existing.contains(&format!("{prefix}s{k}"))
                || (k < dummy_length && existing.contains(&format!("{prefix}w{k}")))
        });
        if !collision {
            break;
        }
        prefix.push('_');
    }

    let mut out = h.clone();
    let mut prev = u.clone();
    for k in 1..=dummy_length {
        let next = if k == dummy_length {
            v.clone()
        } else {
            HNode::named(&format!("{prefix}w{k}"))?
        };
        let sink = HNode::named(&format!("{prefix}s{k}"))?;
        out.add_arc(Hyperarc::new(prev, next.clone(), sink)?);
        prev = next;
    }
    Ok(AmplifiedInstance {
        hypergraph: out,
        dummy_length,
        non_sink_node_count: n + dummy_length - 1,
        total_node_count: n + 2 * dummy_length - 1,
    })
}

/// `n^ceil(1 + 1/eps)`, the dummy path length for a graph with `n` nodes.
pub fn dummy_path_length(n_nodes: u64, eps: Epsilon) -> Result<BigUint, HypergraphError> {
    let exponent = amplification_exponent(eps)?;
    Ok(BigUint::from(n_nodes).pow(exponent))
}

fn amplification_exponent(eps: Epsilon) -> Result<u32, HypergraphError> {
    if eps <= Ratio::zero() || eps >= Ratio::one() {
        return Err(HypergraphError::InvalidEpsilon);
    }
    let value = (Ratio::one() + eps.recip()).ceil();
    value
        .to_integer()
        .try_into()
        .map_err(|_| HypergraphError::InvalidEpsilon)
}

/// The two sides of the amplification separation: an approximation within
/// factor `|V|^(1-eps)` on a positive instance returns at most
/// `upper_bound_positive = (n + D - 1)^(1-eps) * (n-1)`, while a negative
/// instance forces at least `lower_bound_negative = D`. The construction
/// makes the first strictly smaller.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationCheck {
    pub dummy_length: BigUint,
    pub amplified_node_count: BigUint,
    pub upper_bound_positive: f64,
    pub lower_bound_negative: f64,
}

impl SeparationCheck {
    pub fn separated(&self) -> bool {
        self.upper_bound_positive < self.lower_bound_negative
    }
}

pub fn amplification_separation(
    n_nodes: u64,
    eps: Epsilon,
) -> Result<SeparationCheck, HypergraphError> {
    let dummy_length = dummy_path_length(n_nodes, eps)?;
    let amplified_node_count = &dummy_length + BigUint::from(n_nodes) - BigUint::one();
    let eps_f = eps.to_f64().ok_or(HypergraphError::InvalidEpsilon)?;
    let n_prime = amplified_node_count
        .to_f64()
        .ok_or(HypergraphError::InvalidEpsilon)?;
    let upper_bound_positive = n_prime.powf(1.0 - eps_f) * (n_nodes as f64 - 1.0);
    let lower_bound_negative = dummy_length
        .to_f64()
        .ok_or(HypergraphError::InvalidEpsilon)?;
    Ok(SeparationCheck {
        dummy_length,
        amplified_node_count,
        upper_bound_positive,
        lower_bound_negative,
    })
}

/// Parses an exact rational epsilon from `p/q`, a decimal like `0.05`, or an
/// integer.
pub fn parse_epsilon(s: &str) -> Result<Epsilon, HypergraphError> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let (num, den) = (
            num.trim().parse::<u64>().map_err(|_| HypergraphError::InvalidEpsilon)?,
            den.trim().parse::<u64>().map_err(|_| HypergraphError::InvalidEpsilon)?,
        );
        if den == 0 {
            return Err(HypergraphError::InvalidEpsilon);
        }
        return Ok(Ratio::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let whole: u64 = if whole.is_empty() {
            0
        } else {
            whole.parse().map_err(|_| HypergraphError::InvalidEpsilon)?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 18 {
            return Err(HypergraphError::InvalidEpsilon);
        }
        let digits: u64 = frac.parse().map_err(|_| HypergraphError::InvalidEpsilon)?;
        let scale = 10u64.pow(frac.len() as u32);
        return Ok(Ratio::new(whole * scale + digits, scale));
    }
    let whole: u64 = s.parse().map_err(|_| HypergraphError::InvalidEpsilon)?;
    Ok(Ratio::from_integer(whole))
}
