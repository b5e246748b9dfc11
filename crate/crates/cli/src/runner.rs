//! Executes an [`OpScript`] against a [`GraphRegister`] and assembles the
//! report.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};

use qgraph::protocols::{self, ProtocolError, TrialRecord};
use qgraph::readout::{self, PreparedCopies, ReadoutError};
use qgraph::{Graph, GraphRegister, GraphStateError};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::graphfile::{parse_graph, serialize_graph};
use crate::script::{parse_script, Command, OpScript, Step};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub seed: u64,
    /// Repetitions of each protocol command.
    pub trials: usize,
    /// Cap on copies a single readout may consume.
    pub copy_limit: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 0,
            trials: 1,
            copy_limit: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CounterReport {
    pub one_qubit_gates: u64,
    pub two_qubit_gates: u64,
    pub measurements: u64,
    pub ancillas_used: u64,
    pub copies_consumed: u64,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CommandReport {
    pub line: usize,
    pub command: String,
    pub result: Value,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TrialReport {
    pub line: usize,
    pub trial: usize,
    pub protocol: String,
    pub seed: u64,
    pub outcome: String,
    /// Exact probabilities as reduced fractions `p/q`.
    pub probabilities: BTreeMap<String, String>,
    pub deterministic: bool,
    pub copies: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Report {
    pub version: String,
    pub seed: u64,
    pub trials_per_protocol: usize,
    pub final_graph: String,
    pub counters: CounterReport,
    pub commands: Vec<CommandReport>,
    pub trials: Vec<TrialReport>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "qgraph {} seed={} trials={}",
            self.version, self.seed, self.trials_per_protocol
        )
        .unwrap();
        for c in &self.commands {
            writeln!(out, "line {:>3}  {:<28} {}", c.line, c.command, c.result).unwrap();
        }
        let k = &self.counters;
        writeln!(
            out,
            "counters: one_qubit={} two_qubit={} measurements={} ancillas={} copies={}",
            k.one_qubit_gates, k.two_qubit_gates, k.measurements, k.ancillas_used, k.copies_consumed
        )
        .unwrap();
        out.push_str("final graph:\n");
        out.push_str(&self.final_graph);
        out
    }
}

fn trial_report(line: usize, trial: usize, r: &TrialRecord) -> TrialReport {
    TrialReport {
        line,
        trial,
        protocol: r.protocol.to_string(),
        seed: r.seed,
        outcome: r.outcome.to_string(),
        probabilities: r
            .probabilities
            .iter()
            .map(|(o, p)| (o.to_string(), p.to_string()))
            .collect(),
        deterministic: r.deterministic,
        copies: r.copies,
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Reads both files and runs the script. A missing script runs nothing.
pub fn run_files(graph_path: &Path, script_path: Option<&Path>, opts: RunOptions) -> Result<Report, CliError> {
    let graph = parse_graph(&read(graph_path)?, &graph_path.display().to_string())?;
    let (script, base) = match script_path {
        Some(p) => (
            parse_script(&read(p)?, &p.display().to_string(), graph.n())?,
            p.parent().map(Path::to_path_buf).unwrap_or_default(),
        ),
        None => (parse_script("", "<none>", graph.n())?, PathBuf::new()),
    };
    run(&graph, &script, &base, opts)
}

struct Runner<'a> {
    register: GraphRegister,
    script: &'a OpScript,
    base: &'a Path,
    opts: RunOptions,
    copies: u64,
    trials: Vec<TrialReport>,
}

/// Runs `script` on a register prepared from `graph`. Relative paths in
/// `compare` commands resolve against `base`.
pub fn run(graph: &Graph, script: &OpScript, base: &Path, opts: RunOptions) -> Result<Report, CliError> {
    let mut register = GraphRegister::prepare(graph, opts.seed);
    register.reset_counters();
    let mut runner = Runner {
        register,
        script,
        base,
        opts,
        copies: 0,
        trials: Vec::new(),
    };
    let mut commands = Vec::with_capacity(script.steps.len());
    for step in &script.steps {
        let result = runner.step(step)?;
        commands.push(CommandReport {
            line: step.line,
            command: step.text.clone(),
            result,
        });
    }
    let c = runner.register.counters();
    Ok(Report {
        version: VERSION.to_string(),
        seed: opts.seed,
        trials_per_protocol: opts.trials,
        final_graph: serialize_graph(runner.register.shadow()),
        counters: CounterReport {
            one_qubit_gates: c.one_qubit_gates,
            two_qubit_gates: c.two_qubit_gates,
            measurements: c.measurements,
            ancillas_used: c.ancillas_used,
            copies_consumed: runner.copies,
        },
        commands,
        trials: runner.trials,
    })
}

impl Runner<'_> {
    fn runtime(&self, step: &Step, message: impl ToString) -> CliError {
        CliError::Runtime {
            file: self.script.file.clone(),
            line: step.line,
            message: message.to_string(),
        }
    }

    fn seeds(&self) -> Vec<u64> {
        (0..self.opts.trials as u64)
            .map(|t| self.opts.seed.wrapping_add(t))
            .collect()
    }

    fn protocol<F>(&mut self, step: &Step, f: F) -> Result<Value, CliError>
    where
        F: Fn(u64) -> Result<TrialRecord, ProtocolError> + Sync,
    {
        let records: Vec<TrialRecord> = self
            .seeds()
            .into_par_iter()
            .map(&f)
            .collect::<Result<_, _>>()
            .map_err(|e| self.runtime(step, e))?;
        let mut tally: BTreeMap<String, usize> = BTreeMap::new();
        for (t, r) in records.iter().enumerate() {
            *tally.entry(r.outcome.to_string()).or_default() += 1;
            self.copies += r.copies as u64;
            self.trials.push(trial_report(step.line, t, r));
        }
        Ok(json!({ "outcomes": tally }))
    }

    fn op(&mut self, step: &Step, res: Result<(), GraphStateError>) -> Result<Value, CliError> {
        res.map_err(|e| self.runtime(step, e))?;
        Ok(json!("ok"))
    }

    fn step(&mut self, step: &Step) -> Result<Value, CliError> {
        let r = &mut self.register;
        match &step.command {
            Command::Cz(a, b) => {
                let res = r.cz(*a, *b);
                self.op(step, res)
            }
            Command::Cnot(a, b) => {
                let res = r.cnot(*a, *b);
                self.op(step, res)
            }
            Command::Fx(a, b) => {
                let res = r.fx(*a, *b);
                self.op(step, res)
            }
            Command::FxWrapped(a, b) => {
                let res = r.fx_wrapped(*a, *b);
                self.op(step, res)
            }
            Command::Pauli(p, a) => {
                let res = r.apply_pauli(*p, *a);
                self.op(step, res)
            }
            Command::LocalComp(a) => {
                let res = r.local_complement(*a);
                self.op(step, res)
            }
            Command::Iac(s1, s2) => {
                let res = r.interset_complement(s1, s2);
                self.op(step, res)
            }
            Command::Iec(s) => {
                let res = r.intraset_complement(s);
                self.op(step, res)
            }
            Command::AddVertex => Ok(json!({ "vertex": r.add_vertex() })),
            Command::Delete(v, mode) => {
                let n = r.n();
                let outcome = r.delete_vertex(*v, *mode).map_err(|e| self.runtime(step, e))?;
                let index_map: Vec<[usize; 2]> = (0..n)
                    .filter(|u| u != v)
                    .map(|u| [u, if u > *v { u - 1 } else { u }])
                    .collect();
                Ok(json!({ "outcome": outcome as u8, "index_map": index_map }))
            }
            Command::AssertVerify => {
                if r.verify() {
                    Ok(json!({ "verified": true }))
                } else {
                    Err(self.runtime(step, "register no longer matches its graph"))
                }
            }
            Command::Measure(kind) => {
                let reg = self.register.clone();
                let kind = *kind;
                self.protocol(step, move |s| protocols::degree_parity_test(&reg, &reg, kind, s))
            }
            Command::Compare(path) => {
                let full = self.base.join(path);
                let other_graph = parse_graph(&read(&full)?, &full.display().to_string())?;
                let other = GraphRegister::prepare(&other_graph, self.opts.seed);
                let reg = self.register.clone();
                self.protocol(step, move |s| Ok(protocols::equality_test(&reg, &other, s)))
            }
            Command::Automorphism(perm) => {
                let reg = self.register.clone();
                let perm = perm.clone();
                self.protocol(step, move |s| protocols::automorphism_test(&reg, &perm, s))
            }
            Command::VCompare(a, b) => {
                let reg = self.register.clone();
                let (a, b) = (*a, *b);
                self.protocol(step, move |s| protocols::vertex_compare(&reg, a, b, s))
            }
            Command::Readout => self.readout(step),
        }
    }

    fn readout(&mut self, step: &Step) -> Result<Value, CliError> {
        let reg = &self.register;
        let limit = self.opts.copy_limit;
        let runs: Vec<_> = self
            .seeds()
            .into_par_iter()
            .map(|s| (s, readout::readout(&mut PreparedCopies::new(reg, limit), s)))
            .collect();
        let mut out = Vec::with_capacity(runs.len());
        for (t, (seed, run)) in runs.into_iter().enumerate() {
            let run = run.map_err(|e| match e {
                ReadoutError::Exhausted(_) | ReadoutError::RoundLimit(_) => CliError::Exhausted {
                    file: self.script.file.clone(),
                    line: step.line,
                    message: format!("readout: {e}"),
                },
                other => self.runtime(step, other),
            })?;
            self.copies += run.copies_used as u64;
            out.push(json!({
                "trial": t,
                "seed": seed,
                "recovered": serialize_graph(&run.recovered),
                "matches": &run.recovered == self.register.shadow(),
                "copies_used": run.copies_used,
                "iterations": run.iterations,
            }));
        }
        Ok(json!({ "runs": out }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_text(graph: &str, script: &str, opts: RunOptions) -> Result<Report, CliError> {
        let g = parse_graph(graph, "g").unwrap();
        let s = parse_script(script, "s", g.n())?;
        run(&g, &s, Path::new("."), opts)
    }

    #[test]
    fn empty_script_reports_input() {
        let r = run_text("graph 3\nedge 0 1\nedge 2 2", "", RunOptions::default()).unwrap();
        assert_eq!(r.final_graph, "graph 3\nedge 0 1\nedge 2 2\n");
        assert_eq!(r.counters.two_qubit_gates + r.counters.one_qubit_gates, 0);
        assert!(r.commands.is_empty() && r.trials.is_empty());
    }

    #[test]
    fn fx_guard_is_a_runtime_error_with_line() {
        let err = run_text("graph 2\nedge 0 1", "assert verify\nop fx 0 1", RunOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().starts_with("s:2:"));
        assert!(err.to_string().contains("fx_wrapped"));
    }

    #[test]
    fn protocols_produce_trial_records() {
        let opts = RunOptions {
            seed: 7,
            trials: 5,
            copy_limit: None,
        };
        let r = run_text(
            "graph 3\nedge 0 1\nedge 1 2",
            "vcompare 0 2\nmeasure euler\nautomorphism (0 2)\nreadout",
            opts,
        )
        .unwrap();
        assert_eq!(r.trials.len(), 15);
        assert!(r
            .trials
            .iter()
            .filter(|t| t.protocol == "vertex_compare")
            .all(|t| t.outcome == "+1"));
        assert_eq!(r.trials[0].seed, 7);
        assert_eq!(r.trials[4].seed, 11);
        assert_eq!(r.commands[3].result["runs"][0]["matches"], json!(true));
    }

    #[test]
    fn copy_limit_exhaustion_exits_four() {
        let opts = RunOptions {
            seed: 0,
            trials: 1,
            copy_limit: Some(2),
        };
        let err = run_text("graph 4\nedge 0 1", "readout", opts).unwrap_err();
        assert_eq!(err.exit_code(), 4);
    }
}
