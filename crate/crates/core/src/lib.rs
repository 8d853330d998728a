//! Rooted-triple calculus and the hypergraph machinery it reduces to.
//!
//! The crate has three layers:
//!
//! - **Triples**: rooted triples `pq|o` over a leaf universe, trees that
//!   display them, the BUILD consistency decision, and closure/entailment
//!   for both consistent and inconsistent triple sets (the latter by
//!   enumerating maximal consistent subsets).
//! - **Hypergraphs**: 1-2-directed hypergraphs whose arcs `pq -> {po, qo}`
//!   are rooted triples in disguise, with B-connectivity, acyclic simple-path
//!   search, cyclicity of arc sets, and the dummy-path amplification
//!   transform used for inapproximability arguments.
//! - **Reduction**: the 3SAT instance generator that ties the two together,
//!   plus a verification harness checking the equivalence
//!   `satisfiable  <=>  acyclic source-to-destination path exists  <=>
//!   target triple entailed` on concrete instances.
//!
//! All types are immutable values after construction and all operations are
//! pure functions, so everything here is safe to use from multiple threads.

pub mod ahograph;
pub mod build;
pub mod closure;
pub mod hypergraph;
pub mod leaf;
pub mod reduction;
pub mod sat;
pub mod search;
pub mod tree;
pub mod triple;
pub mod verify;

pub use ahograph::{AEdge, Ahograph};
pub use build::{build, is_consistent, BuildError, ConsistencyResult};
pub use closure::{
    closure_consistent, closure_inconsistent, closure_oracle, closure_oracle_on,
    entails_consistent, entails_inconsistent, for_each_maximal_consistent_subset,
    maximal_consistent_subsets, ClosureError, MAX_SUBSET_ENUMERATION,
};
pub use hypergraph::{HNode, HPath, Hyperarc, Hypergraph, HypergraphError};
pub use leaf::{Leaf, LeafError};
pub use reduction::{
    assignment_of_path, clause_gadget, forced_cyclic_path, path_of_assignment, reduce,
    variable_gadget, witness_subset, InstanceBundle, LeafRole, ReductionError, ReductionInstance,
};
pub use sat::{
    brute_force_sat, enumerate_assignments, eval_assignment, parse_dimacs, Assignment, CnfFormula,
    SatError, MAX_BRUTE_FORCE_VARS,
};
pub use search::{
    amplification_separation, amplify, amplify_with, b_connected_set, dummy_path_length,
    find_acyclic_path, find_acyclic_path_with, is_cyclic_arcset, min_acyclic_path,
    min_acyclic_path_with, parse_epsilon, validate_path, AmplifiedInstance, Epsilon, MinPath,
    PathClass, SearchBudget, SeparationCheck, DEFAULT_DUMMY_ARC_BUDGET,
};
pub use tree::{enumerate_binary_trees, parse_newick, RootedTree, TreeError, MAX_ENUM_LEAVES};
pub use triple::{dyadic_apply, RootedTriple, TripleError, TripleSet};
pub use verify::{
    check_chain, check_lemma_suite, ChainReport, CycleCheck, LemmaSuiteReport, StageTimings,
    VerifyError, WitnessCheck,
};
