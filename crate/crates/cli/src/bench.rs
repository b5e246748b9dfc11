//! Gate-count and copy-count benchmarks written as CSV.

use std::fmt::Write;
use std::str::FromStr;

use qgraph::readout::{self, PreparedCopies};
use qgraph::{Counters, Graph, GraphRegister};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const CSV_HEADER: &str = "workload,n,param,one_qubit_gates,two_qubit_gates,measurements,copies";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Workload {
    /// `K_n` built edge by edge.
    PrepareConstructive,
    /// `K_n` built with one intraset complement.
    PrepareCompleteIec,
    /// Interset complement of `{0..k}` and `{k..n}` on the empty graph.
    IacSweep,
    /// Mean readout cost over random graphs with loops.
    ReadoutCopies,
}

impl Workload {
    pub const ALL: [Workload; 4] = [
        Workload::PrepareConstructive,
        Workload::PrepareCompleteIec,
        Workload::IacSweep,
        Workload::ReadoutCopies,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Workload::PrepareConstructive => "prepare_constructive",
            Workload::PrepareCompleteIec => "prepare_complete_iec",
            Workload::IacSweep => "iac_sweep",
            Workload::ReadoutCopies => "readout_copies",
        }
    }
}

/// Parses a workload name; `all` expands to every workload.
pub fn parse_workloads(text: &str) -> Result<Vec<Workload>, String> {
    if text == "all" {
        return Ok(Workload::ALL.to_vec());
    }
    text.split(',').map(|t| t.trim().parse()).collect()
}

impl FromStr for Workload {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Workload::ALL
            .into_iter()
            .find(|w| w.name() == s)
            .ok_or_else(|| format!("unknown workload `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub workload: Workload,
    pub n: usize,
    pub param: String,
    pub one_qubit_gates: String,
    pub two_qubit_gates: String,
    pub measurements: String,
    pub copies: String,
}

impl Row {
    fn exact(workload: Workload, n: usize, param: String, c: Counters) -> Row {
        Row {
            workload,
            n,
            param,
            one_qubit_gates: c.one_qubit_gates.to_string(),
            two_qubit_gates: c.two_qubit_gates.to_string(),
            measurements: c.measurements.to_string(),
            copies: "0".into(),
        }
    }
}

/// Uniform graph on `n` vertices: every edge and every loop with
/// probability 1/2.
pub fn random_graph(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u..n {
            if rng.gen::<bool>() {
                g.toggle_edge(u, v).expect("in range");
            }
        }
    }
    g
}

fn run_one(workload: Workload, n: usize, trials: usize, seed: u64) -> Result<Vec<Row>, String> {
    Ok(match workload {
        Workload::PrepareConstructive => {
            let r = GraphRegister::prepare(&Graph::complete(n), seed);
            vec![Row::exact(workload, n, "complete".into(), r.counters())]
        }
        Workload::PrepareCompleteIec => {
            let r = GraphRegister::prepare_complete(n, seed);
            vec![Row::exact(workload, n, "complete".into(), r.counters())]
        }
        Workload::IacSweep => (1..n)
            .map(|k| {
                let mut r = GraphRegister::prepare(&Graph::empty(n), seed);
                let s1: Vec<usize> = (0..k).collect();
                let s2: Vec<usize> = (k..n).collect();
                r.interset_complement(&s1, &s2).map_err(|e| e.to_string())?;
                Ok(Row::exact(workload, n, format!("{k}x{}", n - k), r.counters()))
            })
            .collect::<Result<_, String>>()?,
        Workload::ReadoutCopies => {
            let runs = (0..trials as u64)
                .into_par_iter()
                .map(|t| {
                    let s = seed.wrapping_add(t);
                    let g = random_graph(n, &mut ChaCha8Rng::seed_from_u64(s));
                    let run =
                        readout::readout(&mut PreparedCopies::of_graph(&g, None), s).map_err(|e| e.to_string())?;
                    if run.recovered != g {
                        return Err(format!("readout mismatch at n={n}, seed={s}"));
                    }
                    Ok(run)
                })
                .collect::<Result<Vec<_>, String>>()?;
            let mean = |f: &dyn Fn(&readout::ReadoutRun) -> f64| {
                let total: f64 = runs.iter().map(f).sum();
                format!("{:.3}", total / trials.max(1) as f64)
            };
            vec![Row {
                workload,
                n,
                param: format!("trials={trials}"),
                one_qubit_gates: "0".into(),
                two_qubit_gates: mean(&|r| r.two_qubit_gates as f64),
                measurements: mean(&|r| r.measurements as f64),
                copies: mean(&|r| r.copies_used as f64),
            }]
        }
    })
}

pub fn run_bench(workloads: &[Workload], ns: &[usize], trials: usize, seed: u64) -> Result<Vec<Row>, String> {
    let mut rows = Vec::new();
    for &w in workloads {
        for &n in ns {
            rows.extend(run_one(w, n, trials, seed)?);
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.workload.name(),
            r.n,
            r.param,
            r.one_qubit_gates,
            r.two_qubit_gates,
            r.measurements,
            r.copies
        )
        .unwrap();
    }
    out
}
