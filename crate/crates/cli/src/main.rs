//! `rtriples`: rooted-triple consistency, closure and entailment, 1-2
//! hypergraph path search, the 3SAT reduction, and the verification harness,
//! all over plain text formats.
//!
//! Exit codes: 0 success / true answer, 1 false answer, 2 usage or input
//! error, 3 resource guard tripped.

use std::collections::BTreeSet;
use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rooted_triples::{
    amplify_with, b_connected_set, build, check_chain, check_lemma_suite, closure_consistent,
    closure_inconsistent, entails_consistent, entails_inconsistent, find_acyclic_path,
    is_consistent, is_cyclic_arcset, min_acyclic_path, parse_dimacs, parse_epsilon, reduce,
    BuildError, ClosureError, ConsistencyResult, HNode, HypergraphError, Hypergraph, LeafError,
    MinPath, ReductionError, RootedTriple, SatError, TreeError, TripleError, TripleSet,
    VerifyError, DEFAULT_DUMMY_ARC_BUDGET,
};

#[derive(Parser)]
#[command(
    name = "rtriples",
    about = "Rooted-triple calculus, B-hyperpath search, and the 3SAT reduction between them",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct InputArg {
    /// Input file; stdin when omitted
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether a triple set is consistent
    Consistent(InputArg),
    /// Run BUILD on a triple set and print the tree as Newick
    Build(InputArg),
    /// Print the closure of a triple set (consistent or not)
    Closure(InputArg),
    /// Decide whether a triple set entails a triple
    Entails {
        #[command(flatten)]
        input: InputArg,
        /// The candidate triple, e.g. "a b | c"
        #[arg(long)]
        triple: String,
    },
    /// Reduce a DIMACS CNF formula to a triple set / hypergraph instance
    Reduce {
        #[command(flatten)]
        input: InputArg,
        /// Output prefix; writes PREFIX.triples, PREFIX.hypergraph, PREFIX.meta
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Find an acyclic source-to-destination path in a hypergraph
    Path {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Minimize the arc count instead of returning any path
        #[arg(long)]
        min: bool,
        /// Emit the graph as Graphviz dot (found path highlighted)
        #[arg(long)]
        dot: bool,
    },
    /// Print the B-connected set of a node
    Bconnect {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        from: String,
        #[arg(long)]
        dot: bool,
    },
    /// Decide whether an arc set is cyclic
    Cyclic {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        dot: bool,
    },
    /// Pad a hypergraph with a fresh dummy source-to-destination path
    Amplify {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Rational epsilon in (0,1), e.g. "0.05" or "1/20"
        #[arg(long)]
        eps: String,
        /// Dummy-arc budget
        #[arg(long, default_value_t = DEFAULT_DUMMY_ARC_BUDGET)]
        budget: u64,
        #[arg(long)]
        dot: bool,
    },
    /// Decide satisfiability of a DIMACS CNF formula by brute force
    Sat(InputArg),
    /// Check the sat / path / entailment chain on a DIMACS CNF formula
    Verify {
        #[command(flatten)]
        input: InputArg,
        /// Skip the entailment stage when the triple set is larger than this
        #[arg(long, default_value_t = 24)]
        entailment_budget: usize,
        /// Also run the per-assignment witness and cycle checks
        #[arg(long)]
        lemmas: bool,
    },
}

/// Anything the subcommands can fail with, tagged for the exit-code mapping.
#[derive(Debug)]
enum CliError {
    Io(std::io::Error),
    Input(String),
    Guard(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Input(m) | CliError::Guard(m) => f.write_str(m),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Input(_) => 2,
            CliError::Guard(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

macro_rules! input_error_from {
    ($($ty:ty),*) => {$(
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::Input(e.to_string())
            }
        }
    )*};
}
input_error_from!(TripleError, LeafError, SatError, BuildError);

impl From<HypergraphError> for CliError {
    fn from(e: HypergraphError) -> Self {
        match e {
            HypergraphError::ResourceExhausted { .. } | HypergraphError::BudgetExceeded { .. } => {
                CliError::Guard(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<ClosureError> for CliError {
    fn from(e: ClosureError) -> Self {
        match e {
            ClosureError::SetTooLarge { .. }
            | ClosureError::Tree(TreeError::UniverseTooLarge { .. }) => {
                CliError::Guard(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<TreeError> for CliError {
    fn from(e: TreeError) -> Self {
        match e {
            TreeError::UniverseTooLarge { .. } => CliError::Guard(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Hypergraph(h) => h.into(),
            ReductionError::Sat(s) => s.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Closure(c) => c.into(),
            VerifyError::Hypergraph(h) => h.into(),
            VerifyError::Sat(s) => s.into(),
            VerifyError::Reduction(r) => r.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("rtriples: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn read_input(arg: &InputArg) -> Result<String, CliError> {
    match &arg.input {
        Some(path) => Ok(fs::read_to_string(path)?),
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            Ok(buf)
        }
    }
}

fn triples_from(arg: &InputArg) -> Result<TripleSet, CliError> {
    Ok(TripleSet::parse(&read_input(arg)?)?)
}

fn hypergraph_from(arg: &InputArg) -> Result<Hypergraph, CliError> {
    Ok(Hypergraph::parse(&read_input(arg)?)?)
}

fn node(s: &str) -> Result<HNode, CliError> {
    Ok(s.parse::<HNode>()?)
}

fn decision(answer: bool) -> u8 {
    println!("{answer}");
    u8::from(!answer)
}

fn run(cmd: Cmd) -> Result<u8, CliError> {
    match cmd {
        Cmd::Consistent(input) => {
            let r = triples_from(&input)?;
            Ok(decision(is_consistent(&r)))
        }
        Cmd::Build(input) => {
            let r = triples_from(&input)?;
            let leaves = r.leaves();
            if leaves.is_empty() {
                return Err(CliError::Input("empty triple set has no tree".into()));
            }
            match build(&r, &leaves)? {
                ConsistencyResult::Consistent(tree) => {
                    println!("{}", tree.to_newick());
                    Ok(0)
                }
                ConsistencyResult::Inconsistent(witness) => {
                    let names: Vec<&str> = witness.iter().map(|l| l.as_str()).collect();
                    eprintln!(
                        "rtriples: inconsistent; connected leaf set: {{{}}}",
                        names.join(", ")
                    );
                    Ok(1)
                }
            }
        }
        Cmd::Closure(input) => {
            let r = triples_from(&input)?;
            let closed = if is_consistent(&r) {
                closure_consistent(&r)?
            } else {
                closure_inconsistent(&r)?
            };
            print!("{}", closed.to_text());
            Ok(0)
        }
        Cmd::Entails { input, triple } => {
            let r = triples_from(&input)?;
            let t: RootedTriple = triple.parse()?;
            let answer = if is_consistent(&r) {
                entails_consistent(&r, &t)?
            } else {
                entails_inconsistent(&r, &t)?.0
            };
            Ok(decision(answer))
        }
        Cmd::Reduce { input, out } => {
            let formula = parse_dimacs(&read_input(&input)?)?;
            let inst = reduce(&formula)?;
            let bundle = inst.bundle();
            let paths = [
                (out.with_extension("triples"), &bundle.triples),
                (out.with_extension("hypergraph"), &bundle.hypergraph),
                (out.with_extension("meta"), &bundle.metadata),
            ];
            for (path, text) in &paths {
                fs::write(path, text)?;
            }
            print!("{}", bundle.metadata);
            Ok(0)
        }
        Cmd::Path { input, from, to, min, dot } => {
            let h = hypergraph_from(&input)?;
            let (u, v) = (node(&from)?, node(&to)?);
            let found = if min {
                match min_acyclic_path(&h, &u, &v)? {
                    MinPath::Path(p) => Some(p),
                    MinPath::Infeasible => None,
                }
            } else {
                find_acyclic_path(&h, &u, &v)?
            };
            if dot {
                let highlight: BTreeSet<_> = found
                    .iter()
                    .flat_map(|p| p.arcs().iter().cloned())
                    .collect();
                print!("{}", h.to_dot(&highlight));
                return Ok(u8::from(found.is_none()));
            }
            match found {
                Some(p) => {
                    for arc in p.arcs() {
                        println!("{arc}");
                    }
                    Ok(0)
                }
                None => {
                    println!("infeasible");
                    Ok(1)
                }
            }
        }
        Cmd::Bconnect { input, from, dot } => {
            let h = hypergraph_from(&input)?;
            let u = node(&from)?;
            if dot {
                print!("{}", h.to_dot(&BTreeSet::new()));
                return Ok(0);
            }
            for n in b_connected_set(&h, &u)? {
                println!("{n}");
            }
            Ok(0)
        }
        Cmd::Cyclic { input, dot } => {
            let h = hypergraph_from(&input)?;
            if dot {
                print!("{}", h.to_dot(&BTreeSet::new()));
                return Ok(0);
            }
            Ok(decision(is_cyclic_arcset(h.arcs())))
        }
        Cmd::Amplify { input, from, to, eps, budget, dot } => {
            let h = hypergraph_from(&input)?;
            let (u, v) = (node(&from)?, node(&to)?);
            let eps = parse_epsilon(&eps)?;
            let amp = amplify_with(&h, &u, &v, eps, budget)?;
            if dot {
                print!("{}", amp.hypergraph.to_dot(&BTreeSet::new()));
            } else {
                println!("# dummy_length={}", amp.dummy_length);
                println!("# non_sink_node_count={}", amp.non_sink_node_count);
                println!("# total_node_count={}", amp.total_node_count);
                print!("{}", amp.hypergraph.to_text());
            }
            Ok(0)
        }
        Cmd::Sat(input) => {
            let f = parse_dimacs(&read_input(&input)?)?;
            match rooted_triples::brute_force_sat(&f)? {
                Some(v) => {
                    println!("true");
                    println!("model {}", v.compact());
                    Ok(0)
                }
                None => {
                    println!("false");
                    Ok(1)
                }
            }
        }
        Cmd::Verify { input, entailment_budget, lemmas } => {
            let f = parse_dimacs(&read_input(&input)?)?;
            let report = check_chain(&f, entailment_budget)?;
            print!("{}", report.render());
            eprint!("{}", report.render_timings());
            if lemmas {
                let inst = reduce(&f)?;
                let lemma_report = check_lemma_suite(&inst)?;
                println!();
                print!("{}", lemma_report.render());
                return Ok(u8::from(!(report.agreement && lemma_report.all_pass())));
            }
            Ok(u8::from(!report.agreement))
        }
    }
}
