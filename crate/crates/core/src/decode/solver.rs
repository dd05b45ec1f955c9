//! SAT backends for the reconstruction formula.
//!
//! Both backends take plain CNF clauses over 1-based variables and return a
//! total assignment indexed by variable, None when unsatisfiable. The
//! in-process backend runs splr with its own time limit; the external
//! backend shells out to any DIMACS solver, polls it against the budget,
//! and kills it on expiry.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use splr::types::Instantiate;
use splr::{Certificate, Config, SatSolverIF, SolveIF, Solver, SolverError};

use crate::error::Error;
use crate::Result;

pub trait SatBackend: Sync {
    /// Solve the clause set; Some holds a truth assignment indexed by
    /// variable (entry 0 unused), None means unsatisfiable.
    fn solve(
        &self,
        num_vars: usize,
        clauses: &[Vec<i32>],
        budget: Duration,
    ) -> Result<Option<Vec<bool>>>;
}

/// In-process solving via splr.
#[derive(Clone, Copy, Debug, Default)]
pub struct SplrBackend;

impl SatBackend for SplrBackend {
    fn solve(
        &self,
        num_vars: usize,
        clauses: &[Vec<i32>],
        budget: Duration,
    ) -> Result<Option<Vec<bool>>> {
        if clauses.iter().any(|c| c.is_empty()) {
            return Ok(None);
        }
        let config = Config {
            c_timeout: budget.as_secs_f64().max(0.05),
            quiet_mode: true,
            ..Config::default()
        };
        let desc = splr::types::CNFDescription {
            num_of_variables: num_vars,
            num_of_clauses: clauses.len(),
            pathname: splr::types::CNFIndicator::Void,
        };
        let mut solver = Solver::instantiate(&config, &desc);
        for clause in clauses {
            // A conflict while loading clauses is an unsatisfiable formula.
            if solver.add_clause(clause.clone()).is_err() {
                return Ok(None);
            }
        }
        match solver.solve() {
            Ok(Certificate::SAT(model)) => {
                let mut assign = vec![false; num_vars + 1];
                for lit in model {
                    if lit > 0 {
                        assign[lit as usize] = true;
                    }
                }
                Ok(Some(assign))
            }
            Ok(Certificate::UNSAT) => Ok(None),
            Err(SolverError::TimeOut) => Err(Error::Timeout),
            Err(e) => Err(Error::Solver(format!("{e:?}"))),
        }
    }
}

/// Any DIMACS-speaking solver run as a child process. The problem file path
/// is appended to `args`; the solver must print an `s` status line and,
/// when satisfiable, `v` literal lines.
#[derive(Clone, Debug)]
pub struct ExternalBackend {
    pub command: String,
    pub args: Vec<String>,
}

static FILE_SERIAL: AtomicU64 = AtomicU64::new(0);

impl ExternalBackend {
    pub fn new(command: impl Into<String>, args: Vec<String>) -> Self {
        ExternalBackend { command: command.into(), args }
    }

    fn temp_path(suffix: &str) -> PathBuf {
        let serial = FILE_SERIAL.fetch_add(1, Ordering::Relaxed);
        std::env::temp_dir().join(format!(
            "satvec-{}-{}.{}",
            std::process::id(),
            serial,
            suffix
        ))
    }
}

impl SatBackend for ExternalBackend {
    fn solve(
        &self,
        num_vars: usize,
        clauses: &[Vec<i32>],
        budget: Duration,
    ) -> Result<Option<Vec<bool>>> {
        let cnf_path = Self::temp_path("cnf");
        let out_path = Self::temp_path("out");
        let result = self.run(num_vars, clauses, budget, &cnf_path, &out_path);
        let _ = fs::remove_file(&cnf_path);
        let _ = fs::remove_file(&out_path);
        result
    }
}

impl ExternalBackend {
    fn run(
        &self,
        num_vars: usize,
        clauses: &[Vec<i32>],
        budget: Duration,
        cnf_path: &Path,
        out_path: &Path,
    ) -> Result<Option<Vec<bool>>> {
        let deadline = Instant::now() + budget;
        let mut cnf = fs::File::create(cnf_path)?;
        write_dimacs(&mut cnf, num_vars, clauses)?;
        cnf.flush()?;
        drop(cnf);

        let out_file = fs::File::create(out_path)?;
        let mut child = Command::new(&self.command)
            .args(&self.args)
            .arg(cnf_path)
            .stdout(Stdio::from(out_file))
            .stderr(Stdio::null())
            .stdin(Stdio::null())
            .spawn()
            .map_err(|e| Error::Solver(format!("failed to launch {}: {e}", self.command)))?;

        loop {
            match child.try_wait() {
                Ok(Some(_)) => break,
                Ok(None) => {
                    if Instant::now() >= deadline {
                        let _ = child.kill();
                        let _ = child.wait();
                        return Err(Error::Timeout);
                    }
                    std::thread::sleep(Duration::from_millis(5));
                }
                Err(e) => return Err(Error::Solver(format!("wait failed: {e}"))),
            }
        }

        let output = fs::read_to_string(out_path)?;
        parse_solver_output(&output, num_vars)
    }
}

pub(crate) fn parse_solver_output(output: &str, num_vars: usize) -> Result<Option<Vec<bool>>> {
    let mut status: Option<bool> = None;
    let mut assign = vec![false; num_vars + 1];
    for line in output.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            match rest.trim() {
                "SATISFIABLE" => status = Some(true),
                "UNSATISFIABLE" => status = Some(false),
                other => return Err(Error::Solver(format!("unknown status line: {other}"))),
            }
        } else if let Some(rest) = line.strip_prefix("v ") {
            for token in rest.split_whitespace() {
                let lit: i64 = token
                    .parse()
                    .map_err(|_| Error::Solver(format!("bad literal in model: {token}")))?;
                let var = lit.unsigned_abs() as usize;
                if var == 0 {
                    continue;
                }
                if var > num_vars {
                    return Err(Error::Solver(format!("model literal out of range: {lit}")));
                }
                assign[var] = lit > 0;
            }
        }
    }
    match status {
        Some(true) => Ok(Some(assign)),
        Some(false) => Ok(None),
        None => Err(Error::Solver("solver printed no status line".into())),
    }
}

pub(crate) fn write_dimacs(
    w: &mut impl std::io::Write,
    num_vars: usize,
    clauses: &[Vec<i32>],
) -> std::io::Result<()> {
    writeln!(w, "p cnf {} {}", num_vars, clauses.len())?;
    for clause in clauses {
        for lit in clause {
            write!(w, "{lit} ")?;
        }
        writeln!(w, "0")?;
    }
    Ok(())
}
