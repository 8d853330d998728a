//! Minimal CNF substrate: DIMACS parsing, assignment evaluation, and a
//! brute-force satisfiability oracle that is obviously correct rather than
//! fast.

use std::fmt;

use thiserror::Error;

/// Brute force enumerates all `2^n` assignments, so cap the variable count.
pub const MAX_BRUTE_FORCE_VARS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: clause has {count} literals, at most 3 are supported")]
    ClauseTooLarge { line: usize, count: usize },
    #[error("assignment covers {got} variables but the formula has {want}")]
    IncompleteAssignment { got: usize, want: usize },
    #[error("{0} variables exceed the brute-force limit of {1}")]
    TooManyVariables(usize, usize),
    #[error("malformed formula: {0}")]
    MalformedFormula(String),
}

/// A CNF formula over variables `1..=n`; literals are nonzero signed indices
/// and every clause holds one to three of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, SatError> {
        if vars == 0 {
            return Err(SatError::MalformedFormula("no variables".into()));
        }
        if clauses.is_empty() {
            return Err(SatError::MalformedFormula("no clauses".into()));
        }
        for (j, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(SatError::MalformedFormula(format!("clause {} is empty", j + 1)));
            }
            if clause.len() > 3 {
                return Err(SatError::MalformedFormula(format!(
                    "clause {} has {} literals, at most 3 are supported",
                    j + 1,
                    clause.len()
                )));
            }
            for &lit in clause {
                let var = lit.unsigned_abs() as usize;
                if lit == 0 || var > vars {
                    return Err(SatError::MalformedFormula(format!(
                        "clause {} has out-of-range literal {lit}",
                        j + 1
                    )));
                }
            }
        }
        Ok(CnfFormula { vars, clauses })
    }

    pub fn var_count(&self) -> usize {
        self.vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    /// Compact deterministic identifier, e.g. `n=2 [1 -2][2]`.
    pub fn id(&self) -> String {
        let clauses: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                let lits: Vec<String> = c.iter().map(|l| l.to_string()).collect();
                format!("[{}]", lits.join(" "))
            })
            .collect();
        format!("n={} {}", self.vars, clauses.concat())
    }

    /// One-line DIMACS clause section, `0`-terminated: `1 -1 0 1 0`.
    pub fn clause_line(&self) -> String {
        let mut parts = Vec::new();
        for c in &self.clauses {
            for l in c {
                parts.push(l.to_string());
            }
            parts.push("0".to_string());
        }
        parts.join(" ")
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out.push_str(&l.to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

/// A total truth assignment for variables `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    /// Assignment number `k` in counting order: variable `i` reads bit `i-1`,
    /// so `k = 0` is all-false.
    pub fn from_index(k: u64, vars: usize) -> Self {
        Assignment {
            values: (0..vars).map(|i| (k >> i) & 1 == 1).collect(),
        }
    }

    pub fn var_count(&self) -> usize {
        self.values.len()
    }

    /// Truth value of variable `var` (1-based).
    pub fn value(&self, var: usize) -> bool {
        self.values[var - 1]
    }

    pub fn satisfies_literal(&self, lit: i32) -> bool {
        let v = self.value(lit.unsigned_abs() as usize);
        if lit > 0 {
            v
        } else {
            !v
        }
    }

    /// `TF` string, variable 1 first.
    pub fn compact(&self) -> String {
        self.values.iter().map(|&v| if v { 'T' } else { 'F' }).collect()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.compact())
    }
}

/// Parses DIMACS CNF: `c` comment lines, a `p cnf <vars> <clauses>` header,
/// then whitespace-separated literals with `0` terminating each clause.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, SatError> {
    let err = |line: usize, msg: &str| SatError::Parse {
        line,
        msg: msg.to_string(),
    };
    let mut header: Option<(usize, usize)> = None;
    let mut header_line = 0;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(line_no, "duplicate header"));
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 4 || toks[0] != "p" || toks[1] != "cnf" {
                return Err(err(line_no, "expected `p cnf <vars> <clauses>`"));
            }
            let vars = toks[2]
                .parse::<usize>()
                .map_err(|_| err(line_no, "bad variable count"))?;
            let count = toks[3]
                .parse::<usize>()
                .map_err(|_| err(line_no, "bad clause count"))?;
            header = Some((vars, count));
            header_line = line_no;
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(err(line_no, "clause before `p cnf` header"));
        };
        for tok in line.split_whitespace() {
            let lit = tok
                .parse::<i32>()
                .map_err(|_| err(line_no, &format!("bad literal {tok:?}")))?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(err(line_no, "empty clause"));
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                if lit.unsigned_abs() as usize > vars {
                    return Err(err(line_no, &format!("literal {lit} out of range")));
                }
                current.push(lit);
                if current.len() > 3 {
                    return Err(SatError::ClauseTooLarge {
                        line: line_no,
                        count: current.len(),
                    });
                }
            }
        }
    }
    let Some((vars, expected)) = header else {
        return Err(err(text.lines().count(), "missing `p cnf` header"));
    };
    if !current.is_empty() {
        return Err(err(text.lines().count(), "unterminated clause"));
    }
    if clauses.len() != expected {
        return Err(err(
            header_line,
            &format!("header promises {expected} clauses, found {}", clauses.len()),
        ));
    }
    CnfFormula::new(vars, clauses)
}

/// True iff every clause has a true literal under `v`.
pub fn eval_assignment(f: &CnfFormula, v: &Assignment) -> Result<bool, SatError> {
    if v.var_count() != f.var_count() {
        return Err(SatError::IncompleteAssignment {
            got: v.var_count(),
            want: f.var_count(),
        });
    }
    Ok(f.clauses()
        .iter()
        .all(|clause| clause.iter().any(|&lit| v.satisfies_literal(lit))))
}

/// All `2^n` assignments in counting order from all-false.
pub fn enumerate_assignments(vars: usize) -> impl Iterator<Item = Assignment> {
    (0..(1u64 << vars)).map(move |k| Assignment::from_index(k, vars))
}

/// First satisfying assignment in counting order, or `None`.
pub fn brute_force_sat(f: &CnfFormula) -> Result<Option<Assignment>, SatError> {
    if f.var_count() > MAX_BRUTE_FORCE_VARS {
        return Err(SatError::TooManyVariables(
            f.var_count(),
            MAX_BRUTE_FORCE_VARS,
        ));
    }
    for v in enumerate_assignments(f.var_count()) {
        if eval_assignment(f, &v)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}
