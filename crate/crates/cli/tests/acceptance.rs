//! Acceptance suite. Prints one PASS/FAIL line per criterion, with the
//! individual checks indented underneath.
//!
//! A failing check listed as known is still reported as FAIL, but does not
//! change the exit status unless `QGRAPH_ACCEPTANCE_STRICT=1` is set.

use std::fs;
use std::process::{Command, ExitCode};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use qgraph::densesim::{equal_up_to_phase, graph_state_vector, oracle_prepare, overlap, StateVector};
use qgraph::protocols::{self, Outcome, ParityKind, TrialRecord};
use qgraph::readout::{self, PreparedCopies};
use qgraph::{DeleteMode, Dyadic, Gate, Graph, GraphRegister, Pauli, Sign};
use qgraph_cli::bench::{run_bench, to_csv, Workload, CSV_HEADER};
use qgraph_cli::{parse_graph, serialize_graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const TRIALS: u64 = 10_000;

type CriterionFn = fn() -> Criterion;

struct Check {
    name: String,
    ok: bool,
    detail: String,
    known: Option<&'static str>,
}

#[derive(Default)]
struct Criterion {
    checks: Vec<Check>,
}

impl Criterion {
    fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            ok,
            detail: detail.into(),
            known: None,
        });
    }

    /// A check that is expected to fail, with the reason.
    fn check_known(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>, why: &'static str) {
        self.checks.push(Check {
            name: name.into(),
            ok,
            detail: detail.into(),
            known: Some(why),
        });
    }
}

// ---------------------------------------------------------------- helpers

fn all_graphs(n: usize) -> Vec<Graph> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|u| (u..n).map(move |v| (u, v))).collect();
    (0..1u64 << slots.len())
        .map(|mask| {
            let edges: Vec<_> = slots
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| *e)
                .collect();
            Graph::from_edges(n, &edges).unwrap()
        })
        .collect()
}

fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u..n {
            if rng.gen_bool(p) {
                g.toggle_edge(u, v).unwrap();
            }
        }
    }
    g
}

fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n, edges).unwrap()
}

fn cycle(n: usize) -> Graph {
    g(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
}

fn dense(g: &Graph) -> StateVector {
    graph_state_vector(g).unwrap()
}

fn tableau_state(r: &GraphRegister) -> StateVector {
    StateVector::from_tableau(r.tableau()).unwrap()
}

static NEXT_BLOCK: AtomicU64 = AtomicU64::new(0);

/// `TRIALS` records, each batch on its own block of seeds.
fn records<F>(f: F) -> Vec<TrialRecord>
where
    F: Fn(u64) -> TrialRecord + Sync,
{
    let base = NEXT_BLOCK.fetch_add(1, Ordering::Relaxed) * TRIALS;
    (base..base + TRIALS).into_par_iter().map(&f).collect()
}

fn frequency(recs: &[TrialRecord], o: Outcome) -> f64 {
    recs.iter().filter(|r| r.outcome == o).count() as f64 / recs.len() as f64
}

/// `|f - p| <= 3 sigma` for a Bernoulli(p) mean over `TRIALS` draws.
fn within_3_sigma(f: f64, p: f64) -> (bool, String) {
    let sigma = (p * (1.0 - p) / TRIALS as f64).sqrt();
    (
        (f - p).abs() <= 3.0 * sigma,
        format!("freq {f:.4}, expected {p:.4} ± {:.4}", 3.0 * sigma),
    )
}

// ------------------------------------------------------ 1. correspondence

fn random_set(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    (0..n).filter(|_| rng.gen_bool(0.4)).collect()
}

/// Applies one random public operation; returns its name.
fn random_op(r: &mut GraphRegister, rng: &mut ChaCha8Rng) -> &'static str {
    let n = r.n();
    let a = rng.gen_range(0..n);
    let b = if n > 1 { (a + rng.gen_range(1..n)) % n } else { a };
    loop {
        match rng.gen_range(0..11) {
            0 => {
                let p = [Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..3)];
                r.apply_pauli(p, a).unwrap();
                return "pauli";
            }
            1 => {
                let b = if rng.gen_bool(0.2) { a } else { b };
                r.cz(a, b).unwrap();
                return "cz";
            }
            2 if n > 1 => {
                r.cnot(a, b).unwrap();
                return "cnot";
            }
            3 if n > 1 && !r.shadow().has_edge(a, b) => {
                r.fx(a, b).unwrap();
                return "fx";
            }
            4 if n > 1 => {
                r.fx_wrapped(a, b).unwrap();
                return "fx_wrapped";
            }
            5 => {
                r.local_complement(a).unwrap();
                return "local_complement";
            }
            6 if n <= 10 => {
                let labels: Vec<u8> = (0..n).map(|_| rng.gen_range(0..3)).collect();
                let s1: Vec<usize> = (0..n).filter(|&v| labels[v] == 1).collect();
                let s2: Vec<usize> = (0..n).filter(|&v| labels[v] == 2).collect();
                r.interset_complement(&s1, &s2).unwrap();
                return "interset_complement";
            }
            7 if n <= 11 => {
                let s = random_set(n, rng);
                r.intraset_complement(&s).unwrap();
                return "intraset_complement";
            }
            8 if n < 12 => {
                r.add_vertex();
                return "add_vertex";
            }
            9 if n > 1 => {
                let mode = if rng.gen() {
                    DeleteMode::Blind
                } else {
                    DeleteMode::Corrected
                };
                r.delete_vertex(a, mode).unwrap();
                return "delete_vertex";
            }
            10 if n <= 10 => {
                let k = rng.gen_range(1..=2);
                let extra = random_graph(k, 0.5, rng);
                *r = r.tensor(&GraphRegister::prepare(&extra, 0));
                return "tensor";
            }
            _ => {}
        }
    }
}

fn criterion_1() -> Criterion {
    let mut c = Criterion::default();
    let results: Vec<(usize, Option<String>)> = (0..1000u64)
        .into_par_iter()
        .map(|case| {
            let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE + case);
            let n = rng.gen_range(1..=12);
            let graph = random_graph(n, 0.3, &mut rng);
            let mut r = GraphRegister::prepare(&graph, case);
            if !r.verify() {
                return (0, Some(format!("case {case}: preparation")));
            }
            let len = rng.gen_range(1..=50);
            for step in 0..len {
                let name = random_op(&mut r, &mut rng);
                if !r.verify() {
                    return (step + 1, Some(format!("case {case}, step {step}: {name}")));
                }
            }
            (len, None)
        })
        .collect();
    let steps: usize = results.iter().map(|r| r.0).sum();
    let failures: Vec<&String> = results.iter().filter_map(|r| r.1.as_ref()).collect();
    c.check(
        "verify() after every step of 1000 random sequences",
        failures.is_empty(),
        match failures.first() {
            None => format!("{steps} steps verified"),
            Some(f) => format!("{} failing sequences, first: {f}", failures.len()),
        },
    );
    c
}

// ------------------------------------------------------ 2. oracle equivalence

/// Runs `op` on a register prepared from `graph` and compares the tableau,
/// and the new shadow graph, with dense evolution under `gates`.
fn agrees(graph: &Graph, gates: &[Gate], op: impl FnOnce(&mut GraphRegister)) -> (bool, bool) {
    let mut r = GraphRegister::prepare(graph, 0);
    op(&mut r);
    let mut expected = dense(graph);
    for &gate in gates {
        expected.apply_gate(gate).unwrap();
    }
    (
        equal_up_to_phase(&expected, &tableau_state(&r)),
        equal_up_to_phase(&expected, &dense(r.shadow())),
    )
}

#[derive(Default)]
struct Tally {
    cases: usize,
    tableau_fail: Vec<String>,
    shadow_fail: Vec<String>,
}

impl Tally {
    fn record(&mut self, what: String, (tab, shadow): (bool, bool)) {
        self.cases += 1;
        if !tab {
            self.tableau_fail.push(what.clone());
        }
        if !shadow {
            self.shadow_fail.push(what);
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.cases += other.cases;
        self.tableau_fail.extend(other.tableau_fail);
        self.shadow_fail.extend(other.shadow_fail);
        self
    }
}

fn oracle_cases(graph: &Graph) -> Tally {
    let mut t = Tally::default();
    let n = graph.n();
    for a in 0..n {
        for (p, gate) in [(Pauli::X, Gate::X(a)), (Pauli::Y, Gate::Y(a)), (Pauli::Z, Gate::Z(a))] {
            t.record(
                format!("{p:?}({a}) on {graph:?}"),
                agrees(graph, &[gate], |r| r.apply_pauli(p, a).unwrap()),
            );
        }
        let mut lc = vec![Gate::SqrtMinusIX(a)];
        lc.extend(graph.neighbor_list(a).into_iter().map(Gate::SqrtIZ));
        t.record(
            format!("localcomp({a}) on {graph:?}"),
            agrees(graph, &lc, |r| r.local_complement(a).unwrap()),
        );
        for b in 0..n {
            t.record(
                format!("cz({a},{b}) on {graph:?}"),
                agrees(graph, &[Gate::CZ(a, b)], |r| r.cz(a, b).unwrap()),
            );
            if a == b {
                continue;
            }
            t.record(
                format!("cnot({a},{b}) on {graph:?}"),
                agrees(graph, &[Gate::CNOT(a, b)], |r| r.cnot(a, b).unwrap()),
            );
            let fx = [Gate::H(a), Gate::H(b), Gate::CZ(a, b), Gate::H(a), Gate::H(b)];
            if graph.has_edge(a, b) {
                let mut w = vec![Gate::CZ(a, b)];
                w.extend_from_slice(&fx);
                w.push(Gate::CZ(a, b));
                t.record(
                    format!("fxw({a},{b}) on {graph:?}"),
                    agrees(graph, &w, |r| r.fx_wrapped(a, b).unwrap()),
                );
            } else {
                t.record(
                    format!("fx({a},{b}) on {graph:?}"),
                    agrees(graph, &fx, |r| r.fx(a, b).unwrap()),
                );
            }
        }
        // Deletion residue: both outcomes against the rule, and the
        // register against the outcome it actually drew.
        let full = dense(graph);
        for outcome in [false, true] {
            let rest = full.measure_z_and_remove(a, outcome).unwrap();
            let rule = graph.z_delete_rule(a, outcome).unwrap();
            t.record(
                format!("z_delete_rule({a},{outcome}) on {graph:?}"),
                (true, equal_up_to_phase(&rest, &dense(&rule))),
            );
        }
        for mode in [DeleteMode::Blind, DeleteMode::Corrected] {
            let mut r = GraphRegister::prepare(graph, a as u64);
            let outcome = r.delete_vertex(a, mode).unwrap();
            let mut expected = full.measure_z_and_remove(a, outcome).unwrap();
            if mode == DeleteMode::Corrected && outcome {
                for u in graph.neighbor_list(a) {
                    expected.apply_gate(Gate::Z(if u > a { u - 1 } else { u })).unwrap();
                }
            }
            t.record(
                format!("delete({a},{mode:?}) on {graph:?}"),
                (
                    equal_up_to_phase(&expected, &tableau_state(&r)),
                    equal_up_to_phase(&expected, &dense(r.shadow())),
                ),
            );
        }
    }
    t
}

fn criterion_2() -> Criterion {
    let mut c = Criterion::default();
    let graphs: Vec<Graph> = (1..=4).flat_map(all_graphs).collect();
    let exhaustive = graphs.par_iter().map(oracle_cases).reduce(Tally::default, Tally::merge);
    let random = (0..200u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(0x0AC1E + i);
            let n = rng.gen_range(5..=8);
            oracle_cases(&random_graph(n, 0.4, &mut rng))
        })
        .reduce(Tally::default, Tally::merge);
    for (label, t) in [
        (format!("exhaustive n<=4 ({} graphs)", graphs.len()), exhaustive),
        ("200 random graphs, n in 5..=8".into(), random),
    ] {
        c.check(
            format!("tableau matches dense evolution, {label}"),
            t.tableau_fail.is_empty(),
            format!(
                "{} cases, {} mismatches {:?}",
                t.cases,
                t.tableau_fail.len(),
                t.tableau_fail.first()
            ),
        );
        c.check(
            format!("shadow rules match dense resulting state, {label}"),
            t.shadow_fail.is_empty(),
            format!(
                "{} cases, {} mismatches {:?}",
                t.cases,
                t.shadow_fail.len(),
                t.shadow_fail.first()
            ),
        );
    }
    c
}

// ------------------------------------------------------ 3. overlap law

fn criterion_3() -> Criterion {
    let mut c = Criterion::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0E71A9);
    let mut pairs = Vec::new();
    while pairs.len() < 500 {
        let n = rng.gen_range(1..=10);
        let g1 = random_graph(n, rng.gen_range(0.1..0.6), &mut rng);
        let mut g2 = g1.clone();
        for _ in 0..rng.gen_range(1..=3) {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            g2.toggle_edge(u, v).unwrap();
        }
        if g1 != g2 {
            pairs.push((g1, g2));
        }
    }
    let mut bad_form = Vec::new();
    let mut above_half = Vec::new();
    let mut dense_mismatch = Vec::new();
    let mut charsum_mismatch = 0;
    let mut dense_checked = 0;
    let mut histogram = std::collections::BTreeMap::<String, usize>::new();
    for (g1, g2) in &pairs {
        let ov = protocols::overlap_mag2(&GraphRegister::prepare(g1, 0), &GraphRegister::prepare(g2, 0)).mag2;
        *histogram.entry(ov.to_string()).or_default() += 1;
        let form_ok = ov.is_zero() || ov.as_pow2_neg().is_some_and(|s| s >= 1);
        if !form_ok {
            bad_form.push(ov);
        }
        if ov > Dyadic::HALF {
            above_half.push(ov);
        }
        if protocols::overlap_mag2_charsum(g1, g2).unwrap() != ov {
            charsum_mismatch += 1;
        }
        let n = g1.n();
        if n <= 8 {
            dense_checked += 1;
            let d = overlap(&dense(g1), &dense(g2)).unwrap().norm_sqr();
            let scale = 4f64.powi(n as i32);
            let k = (d * scale).round();
            let exact = (d * scale - k).abs() < 1e-6 && Dyadic::new(k as u128, 2 * n as u32) == ov;
            if !exact {
                dense_mismatch.push((d, ov));
            }
        }
    }
    c.check(
        "500 distinct pairs, n<=10: overlap in {0} ∪ {2^-s : s>=1}",
        bad_form.is_empty(),
        format!("{histogram:?}"),
    );
    c.check(
        "overlap <= 1/2 for every distinct pair",
        above_half.is_empty(),
        format!("{} above 1/2", above_half.len()),
    );
    c.check(
        "exact dyadic equality with dense overlap, n<=8",
        dense_mismatch.is_empty(),
        format!(
            "{dense_checked} pairs checked, {} mismatches {:?}",
            dense_mismatch.len(),
            dense_mismatch.first()
        ),
    );
    c.check(
        "character-sum formula agrees",
        charsum_mismatch == 0,
        format!("{charsum_mismatch} mismatches"),
    );
    c
}

// ------------------------------------------------------ 4. one-sided errors

fn criterion_4() -> Criterion {
    let mut c = Criterion::default();

    // equality
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let same: Vec<Graph> = vec![g(2, &[(0, 1)]), cycle(5), random_graph(8, 0.5, &mut rng)];
    for graph in &same {
        let (r1, r2) = (GraphRegister::prepare(graph, 1), GraphRegister::prepare(graph, 2));
        let recs = records(|s| protocols::equality_test(&r1, &r2, s));
        let f = frequency(&recs, Outcome::Equal);
        c.check(
            format!("equality on equal graphs (n={}, |E|={})", graph.n(), graph.edge_count()),
            f == 1.0,
            format!("Equal {:.4}", f),
        );
    }
    let (empty, edge) = (
        GraphRegister::prepare(&g(2, &[]), 0),
        GraphRegister::prepare(&g(2, &[(0, 1)]), 0),
    );
    let recs = records(|s| protocols::equality_test(&empty, &edge, s));
    let f = frequency(&recs, Outcome::Different);
    let (ok, detail) = within_3_sigma(f, 0.375);
    c.check("equality, empty vs edge: Different at 3/8", ok, detail);
    let sigma = (0.25f64 * 0.75 / TRIALS as f64).sqrt();
    c.check(
        "equality, empty vs edge: Different >= 1/4 - 3σ",
        f >= 0.25 - 3.0 * sigma,
        format!("freq {f:.4}"),
    );

    // automorphism
    let true_autos: Vec<(Graph, Vec<usize>)> = vec![
        (cycle(5), vec![1, 2, 3, 4, 0]),
        (g(3, &[(0, 1), (1, 2)]), vec![2, 1, 0]),
        (
            g(4, &[(0, 1), (0, 2), (0, 3), (1, 1), (2, 2), (3, 3)]),
            vec![0, 2, 3, 1],
        ),
    ];
    for (graph, perm) in &true_autos {
        let r = GraphRegister::prepare(graph, 0);
        let recs = records(|s| protocols::automorphism_test(&r, perm, s).unwrap());
        let f = frequency(&recs, Outcome::PlusOne);
        let det = recs.iter().all(|r| r.deterministic);
        c.check(
            format!("automorphism {perm:?} of {graph:?}: always +1"),
            f == 1.0 && det,
            format!("+1 {f:.4}, deterministic {det}"),
        );
    }
    let zero_overlap = Graph::from_edges(2, &[(0, 0)]).unwrap();
    let r = GraphRegister::prepare(&zero_overlap, 0);
    let recs = records(|s| protocols::automorphism_test(&r, &[1, 0], s).unwrap());
    let (ok, detail) = within_3_sigma(frequency(&recs, Outcome::MinusOne), 0.5);
    c.check(
        "automorphism, non-automorphism with zero overlap: -1 at 1/2",
        ok,
        detail,
    );
    let p3 = g(3, &[(0, 1), (1, 2)]);
    let r = GraphRegister::prepare(&p3, 0);
    let recs = records(|s| protocols::automorphism_test(&r, &[1, 0, 2], s).unwrap());
    let law = recs[0].probability_of(Outcome::MinusOne);
    let (ok, detail) = within_3_sigma(frequency(&recs, Outcome::MinusOne), law.to_f64());
    c.check(
        format!("automorphism, path end<->center: -1 at (1-|<G|PG>|^2)/2 = {law}"),
        ok,
        detail,
    );

    // vertex compare
    let true_swaps: Vec<(Graph, usize, usize)> = vec![
        (p3.clone(), 0, 2),
        (Graph::complete(4), 1, 3),
        (g(4, &[(0, 1), (2, 3), (0, 2), (1, 3), (0, 0), (3, 3)]), 0, 3),
    ];
    for (graph, a, b) in &true_swaps {
        let r = GraphRegister::prepare(graph, 0);
        let recs = records(|s| protocols::vertex_compare(&r, *a, *b, s).unwrap());
        let f = frequency(&recs, Outcome::PlusOne);
        c.check(
            format!("vertex_compare {a},{b} on {graph:?}: always +1"),
            f == 1.0,
            format!("+1 {f:.4}"),
        );
    }
    let r = GraphRegister::prepare(&p3, 0);
    let recs = records(|s| protocols::vertex_compare(&r, 0, 1, s).unwrap());
    let (ok, detail) = within_3_sigma(frequency(&recs, Outcome::MinusOne), 0.5);
    c.check("vertex_compare leaf vs center of a path: -1 at 1/2", ok, detail);

    // degree parity
    let mut euler: Vec<Graph> = vec![
        cycle(3),
        cycle(4),
        cycle(5),
        Graph::complete(5),
        g(3, &[(0, 1), (1, 2), (2, 0), (0, 0)]),
        g(3, &[(0, 0), (1, 1)]),
        g(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]),
        Graph::empty(4),
    ];
    euler.push(g(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0), (4, 4)]));
    let mut mismatches = 0;
    let mut literal_bad = Vec::new();
    let mut corrected_bad = Vec::new();
    for graph in &euler {
        let r = GraphRegister::prepare(graph, 0);
        let recs: Vec<TrialRecord> = records(|s| protocols::degree_parity_test(&r, &r, ParityKind::Even, s).unwrap());
        mismatches += recs.iter().filter(|t| t.outcome == Outcome::Mismatch).count();
        let s = graph.loop_count();
        let literal = Outcome::Consistent(Sign::from_negative(s % 2 == 1));
        let corrected = Outcome::Consistent(Sign::from_negative((graph.edge_count() + s) % 2 == 1));
        let observed: Vec<Outcome> = {
            let mut v: Vec<Outcome> = recs.iter().map(|t| t.outcome).collect();
            v.dedup();
            v
        };
        if recs.iter().any(|t| t.outcome != literal) {
            literal_bad.push(format!("|E|={} s={} observed {:?}", graph.edge_count(), s, observed));
        }
        if recs.iter().any(|t| t.outcome != corrected) {
            corrected_bad.push(format!("|E|={} s={} observed {:?}", graph.edge_count(), s, observed));
        }
    }
    c.check(
        format!("degree_parity on {} Euler graphs: zero mismatches", euler.len()),
        mismatches == 0,
        format!("{mismatches} mismatches in {} trials", TRIALS as usize * euler.len()),
    );
    c.check_known(
        "degree_parity on Euler graphs: Consistent sign (-1)^s",
        literal_bad.is_empty(),
        format!("{} graphs disagree: {:?}", literal_bad.len(), literal_bad),
        "the product of all generators of an all-even-degree graph is (-1)^(|E|+s) X...X; \
         a triangle (|E|=3, s=0) gives -1, so the sign (-1)^s cannot hold",
    );
    c.check(
        "degree_parity on Euler graphs: Consistent sign (-1)^(|E|+s)",
        corrected_bad.is_empty(),
        format!("{} graphs disagree {:?}", corrected_bad.len(), corrected_bad),
    );
    for graph in [
        g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]),
        Graph::complete(4),
        g(2, &[(0, 1), (1, 1)]),
    ] {
        let r = GraphRegister::prepare(&graph, 0);
        let kind = if graph.degree_parity().all_even {
            ParityKind::Even
        } else {
            ParityKind::Odd
        };
        let recs = records(|s| protocols::degree_parity_test(&r, &r, kind, s).unwrap());
        let f = frequency(&recs, Outcome::Mismatch);
        c.check(
            format!("degree_parity {kind:?} on {graph:?}: zero mismatches"),
            f == 0.0,
            format!("mismatch {f:.4}"),
        );
    }
    for graph in [
        p3.clone(),
        g(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]),
        g(3, &[(0, 1), (2, 2)]),
    ] {
        let r = GraphRegister::prepare(&graph, 0);
        let recs = records(|s| protocols::degree_parity_test(&r, &r, ParityKind::Even, s).unwrap());
        let (ok, detail) = within_3_sigma(frequency(&recs, Outcome::Mismatch), 0.5);
        c.check(
            format!("degree_parity on non-Euler {graph:?}: mismatch at 1/2"),
            ok,
            detail,
        );
    }
    c
}

// ------------------------------------------------------ 5. readout

fn criterion_5() -> Criterion {
    let mut c = Criterion::default();
    let graphs: Vec<Graph> = (1..=4).flat_map(all_graphs).collect();
    let wrong = graphs
        .par_iter()
        .enumerate()
        .filter(|(i, graph)| {
            readout::readout(&mut PreparedCopies::of_graph(graph, None), *i as u64).map(|r| r.recovered)
                != Ok((*graph).clone())
        })
        .count();
    c.check(
        format!("exact recovery, all {} graphs with n<=4", graphs.len()),
        wrong == 0,
        format!("{wrong} failures"),
    );

    for n in [8usize, 12, 16] {
        let runs: Vec<(bool, f64, f64, bool)> = (0..200u64)
            .into_par_iter()
            .map(|i| {
                let seed = 1000 * n as u64 + i;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let graph = random_graph(n, 0.5, &mut rng);
                let run = readout::readout(&mut PreparedCopies::of_graph(&graph, None), seed).unwrap();
                (
                    run.recovered == graph,
                    run.copies_used as f64,
                    run.iterations as f64,
                    graph.loop_count() > 0,
                )
            })
            .collect();
        let exact = runs.iter().filter(|r| r.0).count();
        let looped = runs.iter().filter(|r| r.3).count();
        c.check(
            format!("n={n}: exact recovery of 200 random graphs"),
            exact == 200,
            format!("{exact}/200 recovered, {looped} with self-loops"),
        );
        for (label, col, bound) in [("copies_used", 1usize, 4 * n + 1), ("iterations", 2, 2 * n)] {
            let xs: Vec<f64> = runs.iter().map(|r| if col == 1 { r.1 } else { r.2 }).collect();
            let mean = xs.iter().sum::<f64>() / xs.len() as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
            let se = (var / xs.len() as f64).sqrt();
            c.check(
                format!("n={n}: mean {label} <= {bound} within 3 s.e."),
                mean <= bound as f64 + 3.0 * se,
                format!("mean {mean:.3}, s.e. {se:.3}"),
            );
        }
    }
    c
}

// ------------------------------------------------------ 6. gate counts

fn criterion_6() -> Criterion {
    let mut c = Criterion::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut prep_bad = 0;
    let mut iac_bad = 0;
    let mut iec_bad = 0;
    for _ in 0..300 {
        let n = rng.gen_range(1..=12);
        let graph = random_graph(n, 0.4, &mut rng);
        let r = GraphRegister::prepare(&graph, 0);
        let k = r.counters();
        if k.total_gates() != (graph.edge_count() + graph.loop_count()) as u64
            || k.two_qubit_gates != graph.edge_count() as u64
        {
            prep_bad += 1;
        }
        let labels: Vec<u8> = (0..n).map(|_| rng.gen_range(0..3)).collect();
        let s1: Vec<usize> = (0..n).filter(|&v| labels[v] == 1).collect();
        let s2: Vec<usize> = (0..n).filter(|&v| labels[v] == 2).collect();
        let mut r1 = r.clone();
        r1.reset_counters();
        r1.interset_complement(&s1, &s2).unwrap();
        let k = r1.counters();
        let m = (s1.len() + s2.len()) as u64;
        if k.total_gates() != 2 * m + 5 || k.two_qubit_gates != 2 * m + 1 {
            iac_bad += 1;
        }
        let mut r2 = r.clone();
        r2.reset_counters();
        r2.intraset_complement(&s1).unwrap();
        let k = r2.counters();
        let s = s1.len() as u64;
        if k.two_qubit_gates != 2 * s || k.one_qubit_gates != s + 1 {
            iec_bad += 1;
        }
    }
    c.check(
        "prepare: |E|+s gates (|E| CZ, s Z) on 300 random graphs",
        prep_bad == 0,
        format!("{prep_bad} mismatches"),
    );
    c.check(
        "interset: 2(|S1|+|S2|) + 5 gates, of which 2(|S1|+|S2|)+1 two-qubit",
        iac_bad == 0,
        format!("{iac_bad} mismatches"),
    );
    c.check(
        "intraset: 2|S| two-qubit + |S|+1 one-qubit",
        iec_bad == 0,
        format!("{iec_bad} mismatches"),
    );

    let ns: Vec<usize> = (2..=32).collect();
    let rows = run_bench(
        &[Workload::PrepareConstructive, Workload::PrepareCompleteIec],
        &ns,
        1,
        0,
    )
    .unwrap();
    let csv = to_csv(&rows);
    let mut bad = Vec::new();
    for &n in &ns {
        let two = |w: &str| -> u64 {
            rows.iter()
                .find(|r| r.workload.name() == w && r.n == n)
                .unwrap()
                .two_qubit_gates
                .parse()
                .unwrap()
        };
        let (cons, iec) = (two("prepare_constructive"), two("prepare_complete_iec"));
        if cons != (n * (n - 1) / 2) as u64 || iec > 2 * n as u64 + 1 {
            bad.push((n, cons, iec));
        }
    }
    let at8 = csv
        .lines()
        .filter(|l| l.split(',').nth(1) == Some("8"))
        .collect::<Vec<_>>();
    c.check(
        "bench CSV: prepare_complete_iec <= 2n+1 vs n(n-1)/2 constructive, n=2..32",
        csv.starts_with(CSV_HEADER) && bad.is_empty(),
        format!("n=8 rows {at8:?}; {} violations", bad.len()),
    );
    let readout_rows = run_bench(&[Workload::ReadoutCopies], &[8], 200, 0).unwrap();
    let mean: f64 = readout_rows[0].copies.parse().unwrap();
    c.check(
        "bench CSV: readout_copies n=8, 200 trials, mean copies <= 33",
        mean <= 33.0,
        format!("mean {mean}"),
    );
    c
}

// ------------------------------------------------------ 7. oracle preparation

fn criterion_7() -> Criterion {
    let mut c = Criterion::default();
    let mut minus = StateVector::plus(1).unwrap();
    minus.apply_gate(Gate::Z(0)).unwrap();
    let mut graphs: Vec<Graph> = (1..=4).flat_map(all_graphs).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let n = rng.gen_range(5..=8);
        graphs.push(random_graph(n, 0.5, &mut rng));
    }
    let bad = graphs
        .par_iter()
        .filter(|graph| match oracle_prepare(graph) {
            Ok(out) => !equal_up_to_phase(&out, &dense(graph).tensor(&minus).unwrap()),
            Err(_) => true,
        })
        .count();
    c.check(
        format!("oracle_prepare(G) = |G> ⊗ |-> for {} graphs with n<=8", graphs.len()),
        bad == 0,
        format!("{bad} mismatches"),
    );
    c
}

// ------------------------------------------------------ 8. CLI

fn criterion_8() -> Criterion {
    let mut c = Criterion::default();
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).display().to_string();
    fs::write(
        path("g.txt"),
        "# five vertices\ngraph 5\nedge 0 1\nedge 1 2\nedge 2 3\nedge 3 3\nedge 4 0\n",
    )
    .unwrap();
    fs::write(path("h.txt"), "graph 5\nedge 0 1\n").unwrap();
    fs::write(
        path("s.txt"),
        "op localcomp 1\nop iac {0,1} {3,4}\nop iec {0,2,4}\nassert verify\nmeasure euler\nvcompare 0 4\n\
         automorphism (0 4)\ncompare h.txt\nop addvertex\nop delete 2 blind\nreadout\n",
    )
    .unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_qgraph"))
            .args([
                "run",
                "--graph",
                &path("g.txt"),
                "--script",
                &path("s.txt"),
                "--seed",
                "2024",
                "--trials",
                "50",
            ])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    c.check(
        "same (graph, script, seed) gives byte-identical JSON",
        a.status.success() && a.stdout == b.stdout && !a.stdout.is_empty(),
        format!("{} bytes, exit {:?}", a.stdout.len(), a.status.code()),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut broken = 0;
    for _ in 0..200 {
        let n = rng.gen_range(0..=12);
        let graph = random_graph(n, 0.4, &mut rng);
        let text = serialize_graph(&graph);
        match parse_graph(&text, "t") {
            Ok(back) if back == graph && serialize_graph(&back) == text => {}
            _ => broken += 1,
        }
    }
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap_or_default();
    let final_text = report["final_graph"].as_str().unwrap_or("").to_string();
    let reparsed = parse_graph(&final_text, "final").map(|g| serialize_graph(&g));
    c.check(
        "graph text format: parse ∘ serialize is a fixed point",
        broken == 0 && reparsed.as_deref() == Ok(final_text.as_str()),
        format!("200 random graphs, {broken} broken; report final_graph reparsed"),
    );
    c
}

fn main() -> ExitCode {
    let strict = std::env::var("QGRAPH_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let criteria: [(&str, CriterionFn); 8] = [
        ("correspondence fuzz", criterion_1),
        ("oracle equivalence", criterion_2),
        ("overlap law", criterion_3),
        ("one-sided error bounds", criterion_4),
        ("readout round-trip", criterion_5),
        ("gate-count closed forms", criterion_6),
        ("oracle-query preparation", criterion_7),
        ("CLI determinism", criterion_8),
    ];
    let (mut failed, mut unexpected) = (0, 0);
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let crit = f();
        let ok = crit.checks.iter().all(|ch| ch.ok);
        println!(
            "{} {} {name} ({:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
        if !ok {
            failed += 1;
        }
        for ch in &crit.checks {
            let tag = match (ch.ok, ch.known) {
                (true, _) => "ok  ",
                (false, Some(_)) => "FAIL (known)",
                (false, None) => "FAIL",
            };
            println!("    {tag} {}: {}", ch.name, ch.detail);
            if let (false, Some(why)) = (ch.ok, ch.known) {
                println!("         reason: {why}");
            }
            if !ch.ok && (ch.known.is_none() || strict) {
                unexpected += 1;
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if unexpected > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
