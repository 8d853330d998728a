//! The 3SAT-to-rooted-triples construction.
//!
//! A formula `F` with `n` variables and `m` clauses becomes a triple set `R`
//! (equivalently a hypergraph `H = arcs(R)`) with a source node `alpha,beta`,
//! a destination node `c{m+1},gamma`, and a target triple `alpha beta |
//! gamma`, such that `F` is satisfiable iff `H` has an acyclic
//! source-to-destination path iff some consistent subset of `R` entails the
//! target.
//!
//! Each variable gadget is two parallel chains of `2m+2` triples sharing
//! their first and last hypergraph nodes; a path commits to one side, and the
//! side *not* taken is the truth value chosen. Each clause gadget offers one
//! length-3 witness path per distinct literal appearance; the middle witness
//! arc's second head points into the corresponding variable-gadget side, so
//! using a witness whose literal is false closes a cycle.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::hypergraph::{HNode, HPath, Hyperarc, Hypergraph, HypergraphError};
use crate::leaf::Leaf;
use crate::sat::{Assignment, CnfFormula, SatError};
use crate::search::{validate_path, PathClass};
use crate::triple::{RootedTriple, TripleError, TripleSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("malformed formula: {0}")]
    MalformedFormula(String),
    #[error("clause {0} is empty")]
    EmptyClause(usize),
    #[error("assignment leaves clause {0} unsatisfied")]
    UnsatisfyingAssignment(usize),
    #[error("clause {0} is not violated by the assignment")]
    ClauseNotViolated(usize),
    #[error("assignment covers {got} variables but the formula has {want}")]
    WrongAssignmentArity { got: usize, want: usize },
    #[error("not a witness path: {0}")]
    NotAWitnessPath(String),
    #[error("bundle does not reproduce the instance: {0}")]
    BundleMismatch(String),
    #[error("metadata line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Sat(#[from] SatError),
    #[error(transparent)]
    Triple(#[from] TripleError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// Structured names for the generated leaves.
///
/// Text names: `x{i}_{j}` / `nx{i}_{j}` for the positive/negative appearance
/// of variable `i` in clause `j`, `y{i}_{j}` / `ny{i}_{j}` for their chain
/// helpers, `b{i}` / `bp{i}` for the variable-chain junctions, `c{j}` /
/// `d{j}` for the clause junction and entry partner, plus `alpha`, `beta`,
/// `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LeafRole {
    /// `x{i}_{j}`
    Pos { var: usize, clause: usize },
    /// `nx{i}_{j}`
    Neg { var: usize, clause: usize },
    /// `y{i}_{j}`
    PosHelper { var: usize, clause: usize },
    /// `ny{i}_{j}`
    NegHelper { var: usize, clause: usize },
    /// `b{i}`, for `i` in `1..=n+1`
    VarJunction(usize),
    /// `bp{i}`, for `i` in `1..=n+1`
    VarJunctionPrime(usize),
    /// `c{j}`, for `j` in `1..=m+1`
    ClauseJunction(usize),
    /// `d{j}`, for `j` in `1..=m`
    ClauseEntry(usize),
    Alpha,
    Beta,
    Gamma,
}

impl LeafRole {
    pub fn leaf(&self) -> Leaf {
        let name = match self {
            LeafRole::Pos { var, clause } => format!("x{var}_{clause}"),
            LeafRole::Neg { var, clause } => format!("nx{var}_{clause}"),
            LeafRole::PosHelper { var, clause } => format!("y{var}_{clause}"),
            LeafRole::NegHelper { var, clause } => format!("ny{var}_{clause}"),
            LeafRole::VarJunction(i) => format!("b{i}"),
            LeafRole::VarJunctionPrime(i) => format!("bp{i}"),
            LeafRole::ClauseJunction(j) => format!("c{j}"),
            LeafRole::ClauseEntry(j) => format!("d{j}"),
            LeafRole::Alpha => "alpha".to_string(),
            LeafRole::Beta => "beta".to_string(),
            LeafRole::Gamma => "gamma".to_string(),
        };
        Leaf::new(&name).expect("generated names are valid")
    }
}

/// One literal appearance `x_i` or `!x_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn from_dimacs(lit: i32) -> Literal {
        Literal {
            var: lit.unsigned_abs() as usize,
            negated: lit < 0,
        }
    }

    fn appearance(&self, clause: usize) -> LeafRole {
        if self.negated {
            LeafRole::Neg { var: self.var, clause }
        } else {
            LeafRole::Pos { var: self.var, clause }
        }
    }

    fn helper(&self, clause: usize) -> LeafRole {
        if self.negated {
            LeafRole::NegHelper { var: self.var, clause }
        } else {
            LeafRole::PosHelper { var: self.var, clause }
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "!x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

fn t(a: LeafRole, b: LeafRole, o: LeafRole) -> RootedTriple {
    RootedTriple::new(a.leaf(), b.leaf(), o.leaf()).expect("roles give distinct leaves")
}

/// One side of variable `i`'s gadget, in path order: a chain of `2m+2`
/// triples over the node sequence `b_i, bp_i, x_i^1, y_i^1, ..., x_i^m,
/// y_i^m, b_{i+1}, bp_{i+1}` (barred on the negative side). The negative
/// side's final triple hangs off `nx{i}_{m}` rather than `ny{i}_{m}`.
pub fn variable_side(i: usize, m: usize, negated: bool) -> Vec<RootedTriple> {
    let mut seq = Vec::with_capacity(2 * m + 4);
    seq.push(LeafRole::VarJunction(i));
    seq.push(LeafRole::VarJunctionPrime(i));
    for j in 1..=m {
        let lit = Literal { var: i, negated };
        seq.push(lit.appearance(j));
        seq.push(lit.helper(j));
    }
    seq.push(LeafRole::VarJunction(i + 1));
    seq.push(LeafRole::VarJunctionPrime(i + 1));

    let mut out: Vec<RootedTriple> = (0..2 * m + 2)
        .map(|k| t(seq[k], seq[k + 1], seq[k + 2]))
        .collect();
    if negated {
        let last = out.len() - 1;
        out[last] = t(seq[2 * m], seq[2 * m + 2], seq[2 * m + 3]);
    }
    out
}

/// Both sides of variable `i`'s gadget: `2 * (2m+2)` triples.
pub fn variable_gadget(i: usize, m: usize) -> TripleSet {
    variable_side(i, m, false)
        .into_iter()
        .chain(variable_side(i, m, true))
        .collect()
}

/// The distinct literal appearances of a clause, first-occurrence order.
pub fn clause_appearances(clause: &[i32]) -> Vec<Literal> {
    let mut out: Vec<Literal> = Vec::new();
    for &lit in clause {
        let l = Literal::from_dimacs(lit);
        if !out.contains(&l) {
            out.push(l);
        }
    }
    out
}

/// The three witness triples for literal `lit` in clause `j`, in path order:
/// `c_j d_j | a`, `c_j a | h`, `c_j h | c_{j+1}` where `a`/`h` are the
/// appearance and helper leaves.
pub fn witness_triples(j: usize, lit: Literal) -> [RootedTriple; 3] {
    let c = LeafRole::ClauseJunction(j);
    let a = lit.appearance(j);
    let h = lit.helper(j);
    [
        t(c, LeafRole::ClauseEntry(j), a),
        t(c, a, h),
        t(c, h, LeafRole::ClauseJunction(j + 1)),
    ]
}

/// The arc leaving node `c_j c_{j+1}` after clause `j`'s gadget:
/// `c_j c_{j+1} | d_{j+1}` between clauses, `c_m c_{m+1} | gamma` at the end.
pub fn clause_successor(j: usize, m: usize) -> RootedTriple {
    let c = LeafRole::ClauseJunction(j);
    let c_next = LeafRole::ClauseJunction(j + 1);
    if j < m {
        t(c, c_next, LeafRole::ClauseEntry(j + 1))
    } else {
        t(c, c_next, LeafRole::Gamma)
    }
}

/// Clause `j`'s gadget: three triples per distinct literal appearance, plus
/// the inter-clause connector `c_j c_{j+1} | d_{j+1}` when `j < m`.
pub fn clause_gadget(j: usize, clause: &[i32], m: usize) -> Result<TripleSet, ReductionError> {
    let appearances = clause_appearances(clause);
    if appearances.is_empty() {
        return Err(ReductionError::EmptyClause(j));
    }
    let mut out = TripleSet::new();
    for lit in appearances {
        for tr in witness_triples(j, lit) {
            out.insert(tr);
        }
    }
    if j < m {
        out.insert(clause_successor(j, m));
    }
    Ok(out)
}

/// A generated instance: the formula, its triple set, the identified
/// hypergraph, the path endpoints, the target triple, and the leaf registry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionInstance {
    pub formula: CnfFormula,
    pub triples: TripleSet,
    pub hypergraph: Hypergraph,
    pub source: HNode,
    pub dest: HNode,
    pub target: RootedTriple,
    pub leaf_registry: BTreeMap<LeafRole, Leaf>,
}

/// Runs the construction: variable gadgets, clause gadgets, and the five
/// connecting triples.
pub fn reduce(formula: &CnfFormula) -> Result<ReductionInstance, ReductionError> {
    let n = formula.var_count();
    let m = formula.clause_count();

    let mut triples = TripleSet::new();
    for i in 1..=n {
        triples = triples.union(&variable_gadget(i, m));
    }
    for (idx, clause) in formula.clauses().iter().enumerate() {
        triples = triples.union(&clause_gadget(idx + 1, clause, m)?);
    }
    for connector in connectors(n, m) {
        triples.insert(connector);
    }

    let hypergraph = Hypergraph::from_triples(&triples);
    let source = HNode::pair(LeafRole::Alpha.leaf(), LeafRole::Beta.leaf())?;
    let dest = HNode::pair(LeafRole::ClauseJunction(m + 1).leaf(), LeafRole::Gamma.leaf())?;
    let target = t(LeafRole::Alpha, LeafRole::Beta, LeafRole::Gamma);

    let mut leaf_registry = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=m {
            for role in [
                LeafRole::Pos { var: i, clause: j },
                LeafRole::Neg { var: i, clause: j },
                LeafRole::PosHelper { var: i, clause: j },
                LeafRole::NegHelper { var: i, clause: j },
            ] {
                leaf_registry.insert(role, role.leaf());
            }
        }
    }
    for i in 1..=n + 1 {
        leaf_registry.insert(LeafRole::VarJunction(i), LeafRole::VarJunction(i).leaf());
        leaf_registry.insert(
            LeafRole::VarJunctionPrime(i),
            LeafRole::VarJunctionPrime(i).leaf(),
        );
    }
    for j in 1..=m {
        leaf_registry.insert(LeafRole::ClauseJunction(j), LeafRole::ClauseJunction(j).leaf());
        leaf_registry.insert(LeafRole::ClauseEntry(j), LeafRole::ClauseEntry(j).leaf());
    }
    leaf_registry.insert(
        LeafRole::ClauseJunction(m + 1),
        LeafRole::ClauseJunction(m + 1).leaf(),
    );
    for role in [LeafRole::Alpha, LeafRole::Beta, LeafRole::Gamma] {
        leaf_registry.insert(role, role.leaf());
    }

    Ok(ReductionInstance {
        formula: formula.clone(),
        triples,
        hypergraph,
        source,
        dest,
        target,
        leaf_registry,
    })
}

/// The five connecting triples, in path order around the gadget chains.
fn connectors(n: usize, m: usize) -> [RootedTriple; 5] {
    [
        t(LeafRole::Alpha, LeafRole::Beta, LeafRole::VarJunction(1)),
        t(LeafRole::Beta, LeafRole::VarJunction(1), LeafRole::VarJunctionPrime(1)),
        t(
            LeafRole::VarJunction(n + 1),
            LeafRole::VarJunctionPrime(n + 1),
            LeafRole::ClauseJunction(1),
        ),
        t(
            LeafRole::VarJunctionPrime(n + 1),
            LeafRole::ClauseJunction(1),
            LeafRole::ClauseEntry(1),
        ),
        clause_successor(m, m),
    ]
}

impl ReductionInstance {
    pub fn var_count(&self) -> usize {
        self.formula.var_count()
    }

    pub fn clause_count(&self) -> usize {
        self.formula.clause_count()
    }

    pub fn leaves(&self) -> BTreeSet<Leaf> {
        self.triples.leaves()
    }

    /// Appearance and helper leaves: `4nm` of them.
    pub fn l1_count(&self) -> usize {
        self.count_roles(|r| {
            matches!(
                r,
                LeafRole::Pos { .. }
                    | LeafRole::Neg { .. }
                    | LeafRole::PosHelper { .. }
                    | LeafRole::NegHelper { .. }
            )
        })
    }

    /// Variable junction leaves: `2n+2`.
    pub fn l2_count(&self) -> usize {
        self.count_roles(|r| {
            matches!(r, LeafRole::VarJunction(_) | LeafRole::VarJunctionPrime(_))
        })
    }

    /// Clause junction and entry leaves for `j` in `1..=m`: `2m`. The extra
    /// junction `c{m+1}` is counted separately by `extra_leaf_count`.
    pub fn l3_count(&self) -> usize {
        let m = self.clause_count();
        self.count_roles(|r| match r {
            LeafRole::ClauseJunction(j) => *j <= m,
            LeafRole::ClauseEntry(_) => true,
            _ => false,
        })
    }

    /// The `alpha`, `beta`, `gamma` leaves: always 3.
    pub fn l4_count(&self) -> usize {
        self.count_roles(|r| {
            matches!(r, LeafRole::Alpha | LeafRole::Beta | LeafRole::Gamma)
        })
    }

    /// The closing junction `c{m+1}`, referenced by the last clause gadget
    /// and the final connector.
    pub fn extra_leaf_count(&self) -> usize {
        1
    }

    fn count_roles(&self, pred: impl Fn(&LeafRole) -> bool) -> usize {
        self.leaf_registry.keys().filter(|r| pred(r)).count()
    }

    /// Length every satisfying-assignment witness path has:
    /// `n(2m+2) + 4m + 4`.
    pub fn expected_witness_length(&self) -> usize {
        let (n, m) = (self.var_count(), self.clause_count());
        n * (2 * m + 2) + 4 * m + 4
    }

    /// Any clause whose distinct appearances number fewer than two marks the
    /// unit-clause extension (the construction is usually stated for 2- and
    /// 3-literal clauses).
    pub fn uses_unit_clause_extension(&self) -> bool {
        self.formula
            .clauses()
            .iter()
            .any(|c| clause_appearances(c).len() < 2)
    }
}

/// Builds the witness path for a satisfying assignment: connectors, each
/// variable gadget on its negative side iff the variable is true, connectors,
/// then each clause through the witness path of its first true literal.
pub fn path_of_assignment(
    inst: &ReductionInstance,
    v: &Assignment,
) -> Result<HPath, ReductionError> {
    build_path(inst, v, None)
}

/// Builds the deliberately broken path used to exercise the cyclicity lemma:
/// clause `violated` (1-based) must have all its literals false under `v`;
/// its first literal's witness path then points into the side the path
/// traversed, creating a back-arc.
pub fn forced_cyclic_path(
    inst: &ReductionInstance,
    v: &Assignment,
    violated: usize,
) -> Result<HPath, ReductionError> {
    let clause = inst
        .formula
        .clauses()
        .get(violated - 1)
        .ok_or_else(|| ReductionError::MalformedFormula(format!("no clause {violated}")))?;
    if clause.iter().any(|&lit| v.satisfies_literal(lit)) {
        return Err(ReductionError::ClauseNotViolated(violated));
    }
    build_path(inst, v, Some(violated))
}

fn build_path(
    inst: &ReductionInstance,
    v: &Assignment,
    force_first_literal_at: Option<usize>,
) -> Result<HPath, ReductionError> {
    let n = inst.var_count();
    let m = inst.clause_count();
    if v.var_count() != n {
        return Err(ReductionError::WrongAssignmentArity {
            got: v.var_count(),
            want: n,
        });
    }

    let mut triples: Vec<RootedTriple> = Vec::with_capacity(inst.expected_witness_length());
    let connectors = connectors(n, m);
    triples.push(connectors[0].clone());
    triples.push(connectors[1].clone());
    for i in 1..=n {
        // traversing a side uses it up; the unused side carries the truth
        // value, so a true variable sends the path down the negative side
        triples.extend(variable_side(i, m, v.value(i)));
    }
    triples.push(connectors[2].clone());
    triples.push(connectors[3].clone());
    for (idx, clause) in inst.formula.clauses().iter().enumerate() {
        let j = idx + 1;
        let appearances = clause_appearances(clause);
        let chosen = if force_first_literal_at == Some(j) {
            appearances[0]
        } else {
            match appearances.iter().find(|l| {
                let dimacs = if l.negated { -(l.var as i32) } else { l.var as i32 };
                v.satisfies_literal(dimacs)
            }) {
                Some(l) => *l,
                None => match force_first_literal_at {
                    // a forced run tolerates other violated clauses by
                    // falling back to their first literal
                    Some(_) => appearances[0],
                    None => return Err(ReductionError::UnsatisfyingAssignment(j)),
                },
            }
        };
        triples.extend(witness_triples(j, chosen));
        triples.push(clause_successor(j, m));
    }

    let arcs: Vec<Hyperarc> = triples.iter().map(Hyperarc::from_triple).collect();
    Ok(HPath::new(inst.source.clone(), inst.dest.clone(), arcs)
        .expect("gadget chains compose into a path"))
}

/// Reads the traversed variable-gadget sides off an acyclic
/// source-to-destination path: true iff the negative side was used.
pub fn assignment_of_path(
    inst: &ReductionInstance,
    p: &HPath,
) -> Result<Assignment, ReductionError> {
    if p.source() != &inst.source || p.dest() != &inst.dest {
        return Err(ReductionError::NotAWitnessPath(
            "path endpoints differ from the instance's source and destination".into(),
        ));
    }
    match validate_path(&inst.hypergraph, p.arcs()) {
        Ok(PathClass::AcyclicPath) => {}
        Ok(PathClass::CyclicPath) => {
            return Err(ReductionError::NotAWitnessPath("path is cyclic".into()))
        }
        Ok(PathClass::NotAPath) => {
            return Err(ReductionError::NotAWitnessPath("arcs do not chain".into()))
        }
        Err(e) => return Err(e.into()),
    }
    let arcs: BTreeSet<&Hyperarc> = p.arcs().iter().collect();
    let n = inst.var_count();
    let m = inst.clause_count();
    let mut values = Vec::with_capacity(n);
    for i in 1..=n {
        let pos_entry = Hyperarc::from_triple(&variable_side(i, m, false)[0]);
        let neg_entry = Hyperarc::from_triple(&variable_side(i, m, true)[0]);
        match (arcs.contains(&pos_entry), arcs.contains(&neg_entry)) {
            (true, false) => values.push(false),
            (false, true) => values.push(true),
            _ => {
                return Err(ReductionError::NotAWitnessPath(format!(
                    "path does not commit to one side of variable {i}'s gadget"
                )))
            }
        }
    }
    Ok(Assignment::new(values))
}

/// The triples of the satisfying assignment's witness path; consistent and
/// entailing the target by construction.
pub fn witness_subset(
    inst: &ReductionInstance,
    v: &Assignment,
) -> Result<TripleSet, ReductionError> {
    let path = path_of_assignment(inst, v)?;
    Ok(path.triples()?)
}

/// The three text artifacts an instance serializes to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceBundle {
    pub triples: String,
    pub hypergraph: String,
    pub metadata: String,
}

impl ReductionInstance {
    /// Renders the instance bundle: triple file, hypergraph file, and the
    /// key=value metadata sidecar (stable key order).
    pub fn bundle(&self) -> InstanceBundle {
        let mut meta = String::new();
        meta.push_str(&format!("source={}\n", self.source));
        meta.push_str(&format!("dest={}\n", self.dest));
        meta.push_str(&format!("target={}\n", self.target));
        meta.push_str(&format!("n={}\n", self.var_count()));
        meta.push_str(&format!("m={}\n", self.clause_count()));
        meta.push_str(&format!("triple_count={}\n", self.triples.len()));
        meta.push_str(&format!("leaf_count={}\n", self.leaves().len()));
        meta.push_str(&format!("l1_count={}\n", self.l1_count()));
        meta.push_str(&format!("l2_count={}\n", self.l2_count()));
        meta.push_str(&format!("l3_count={}\n", self.l3_count()));
        meta.push_str(&format!("l4_count={}\n", self.l4_count()));
        meta.push_str(&format!("node_count={}\n", self.hypergraph.nodes().len()));
        meta.push_str(&format!("arc_count={}\n", self.hypergraph.arcs().len()));
        meta.push_str(&format!(
            "unit_clause_extension={}\n",
            self.uses_unit_clause_extension()
        ));
        meta.push_str(&format!("formula={}\n", self.formula.clause_line()));
        InstanceBundle {
            triples: self.triples.to_text(),
            hypergraph: self.hypergraph.to_text(),
            metadata: meta,
        }
    }

    /// Rebuilds an instance from its bundle. The formula is re-reduced and
    /// the regenerated artifacts must match the bundled ones exactly.
    pub fn from_bundle(bundle: &InstanceBundle) -> Result<Self, ReductionError> {
        let mut n: Option<usize> = None;
        let mut formula_line: Option<String> = None;
        for (i, raw) in bundle.metadata.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ReductionError::Parse {
                    line: i + 1,
                    msg: "expected key=value".into(),
                });
            };
            match key {
                "n" => {
                    n = Some(value.parse().map_err(|_| ReductionError::Parse {
                        line: i + 1,
                        msg: "bad n".into(),
                    })?)
                }
                "formula" => formula_line = Some(value.to_string()),
                _ => {}
            }
        }
        let n = n.ok_or(ReductionError::Parse { line: 0, msg: "missing n".into() })?;
        let formula_line = formula_line.ok_or(ReductionError::Parse {
            line: 0,
            msg: "missing formula".into(),
        })?;
        let mut clauses: Vec<Vec<i32>> = Vec::new();
        let mut current = Vec::new();
        for tok in formula_line.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| ReductionError::Parse {
                line: 0,
                msg: format!("bad formula literal {tok:?}"),
            })?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
        if !current.is_empty() {
            return Err(ReductionError::Parse {
                line: 0,
                msg: "unterminated formula clause".into(),
            });
        }
        let formula = CnfFormula::new(n, clauses)?;
        let inst = reduce(&formula)?;
        let triples = TripleSet::parse(&bundle.triples)?;
        if triples != inst.triples {
            return Err(ReductionError::BundleMismatch("triple file differs".into()));
        }
        let hypergraph = Hypergraph::parse(&bundle.hypergraph)?;
        if hypergraph != inst.hypergraph {
            return Err(ReductionError::BundleMismatch(
                "hypergraph file differs".into(),
            ));
        }
        Ok(inst)
    }
}
