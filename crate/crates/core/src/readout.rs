//! Reconstruction of a graph (self-loops included) from copies of its
//! graph state.
//!
//! Each round links two copies through a `|+>^n` register with `CZ`s and
//! measures all three registers in the `X` basis. The bits satisfy
//! `c_k^i = b_k · x_i + a_k^i` where `x_i` is column `i` of the loop-free
//! adjacency matrix, so `n` rounds with independent `b_k` determine it.
//! One more copy, un-entangled by `CZ` along the recovered edges, reveals
//! the self-loops as its `X` outcomes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf2::{self, BitMatrix, BitVector};
use crate::graphmodel::Graph;
use crate::graphstate::GraphRegister;
use crate::tableau::{Gate, Pauli, PauliString, Tableau, TableauError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReadoutError {
    #[error("copy source exhausted after {0} copies")]
    Exhausted(usize),
    #[error("no basis after {0} rounds")]
    RoundLimit(usize),
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error("internal inconsistency: {0}")]
    Integrity(String),
}

/// Supplier of identically prepared copies of one graph state.
pub trait CopySource {
    fn n(&self) -> usize;
    fn next_copy(&mut self) -> Result<Tableau, ReadoutError>;
    fn copies_taken(&self) -> usize;
}

/// Clones of a fixed register, optionally capped.
#[derive(Clone, Debug)]
pub struct PreparedCopies {
    template: Tableau,
    limit: Option<usize>,
    taken: usize,
}

impl PreparedCopies {
    pub fn new(register: &GraphRegister, limit: Option<usize>) -> Self {
        PreparedCopies {
            template: register.tableau().clone(),
            limit,
            taken: 0,
        }
    }

    pub fn of_graph(g: &Graph, limit: Option<usize>) -> Self {
        Self::new(&GraphRegister::prepare(g, 0), limit)
    }
}

impl CopySource for PreparedCopies {
    fn n(&self) -> usize {
        self.template.n()
    }

    fn next_copy(&mut self) -> Result<Tableau, ReadoutError> {
        if self.limit.is_some_and(|l| self.taken >= l) {
            return Err(ReadoutError::Exhausted(self.taken));
        }
        self.taken += 1;
        Ok(self.template.clone())
    }

    fn copies_taken(&self) -> usize {
        self.taken
    }
}

/// `X`-outcome bits of one linked round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub a: BitVector,
    pub b: BitVector,
    pub c: BitVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReadoutRun {
    pub recovered: Graph,
    pub copies_used: usize,
    /// Rounds whose `b` extended the basis, in acceptance order.
    pub rounds: Vec<Round>,
    pub d: BitVector,
    /// Rounds executed, accepted or not.
    pub iterations: usize,
    pub two_qubit_gates: u64,
    pub measurements: u64,
}

fn measure_x(t: &mut Tableau, q: usize, rng: &mut ChaCha8Rng) -> Result<bool, ReadoutError> {
    let x = PauliString::single(t.n(), q, Pauli::X);
    Ok(t.measure_pauli_with(&x, rng)?.outcome.bit())
}

/// Runs one round on two fresh copies (registers A and C) and an ancilla
/// register B in `|+>^n`.
pub fn linked_round<S: CopySource + ?Sized>(source: &mut S, rng: &mut ChaCha8Rng) -> Result<Round, ReadoutError> {
    let n = source.n();
    let a_reg = source.next_copy()?;
    let c_reg = source.next_copy()?;
    let mut t = a_reg.tensor(&Tableau::new_plus(n, 0)).tensor(&c_reg);
    let (mut a, mut b, mut c) = (BitVector::zeros(n), BitVector::zeros(n), BitVector::zeros(n));
    for i in 0..n {
        t.apply_gate(Gate::CZ(i, n + i))?;
        t.apply_gate(Gate::CZ(n + i, 2 * n + i))?;
        a.set(i, measure_x(&mut t, i, rng)?);
        b.set(i, measure_x(&mut t, n + i, rng)?);
        c.set(i, measure_x(&mut t, 2 * n + i, rng)?);
    }
    Ok(Round { a, b, c })
}

/// Solves `b_k · x_i = a_k^i + c_k^i` for every `i`; `x_i` becomes column
/// `i` of the returned matrix, which must come out symmetric.
pub fn recover_lambda(rounds: &[Round]) -> Result<BitMatrix, ReadoutError> {
    let n = rounds.first().map_or(0, |r| r.b.len());
    let b = BitMatrix::from_rows(n, rounds.iter().map(|r| r.b.clone()).collect())
        .map_err(|e| ReadoutError::Integrity(e.to_string()))?;
    if rounds.len() != n || gf2::rank(&b) != n {
        return Err(ReadoutError::Integrity(format!(
            "{} rounds of rank {} for {n} vertices",
            rounds.len(),
            gf2::rank(&b)
        )));
    }
    let mut columns = Vec::with_capacity(n);
    for i in 0..n {
        let rhs = BitVector::from_bools(&rounds.iter().map(|r| r.a.get(i) ^ r.c.get(i)).collect::<Vec<_>>());
        columns
            .push(gf2::solve(&b, &rhs).ok_or_else(|| ReadoutError::Integrity(format!("no solution for column {i}")))?);
    }
    let lambda = BitMatrix::from_rows(n, columns).expect("uniform columns").transpose();
    if !lambda.is_symmetric() {
        return Err(ReadoutError::Integrity("recovered adjacency is not symmetric".into()));
    }
    Ok(lambda)
}

/// Full readout with at most `50 n` rounds (at least 50).
pub fn readout<S: CopySource + ?Sized>(source: &mut S, seed: u64) -> Result<ReadoutRun, ReadoutError> {
    let n = source.n();
    readout_with_limit(source, seed, 50 * n.max(1))
}

pub fn readout_with_limit<S: CopySource + ?Sized>(
    source: &mut S,
    seed: u64,
    max_rounds: usize,
) -> Result<ReadoutRun, ReadoutError> {
    let n = source.n();
    let start = source.copies_taken();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rounds: Vec<Round> = Vec::with_capacity(n);
    let mut basis = BitMatrix::zeros(0, n);
    let mut iterations = 0;
    while rounds.len() < n {
        if iterations == max_rounds {
            return Err(ReadoutError::RoundLimit(iterations));
        }
        iterations += 1;
        let round = linked_round(source, &mut rng)?;
        basis.push_row(round.b.clone());
        if gf2::rank(&basis) > rounds.len() {
            rounds.push(round);
        } else {
            basis = BitMatrix::from_rows(n, rounds.iter().map(|r| r.b.clone()).collect()).expect("uniform rows");
        }
    }
    let lambda = recover_lambda(&rounds)?;

    let mut last = source.next_copy()?;
    let mut final_cz = 0u64;
    for u in 0..n {
        for v in lambda.row(u).iter_ones().filter(|&v| v > u) {
            last.apply_gate(Gate::CZ(u, v))?;
            final_cz += 1;
        }
    }
    let mut d = BitVector::zeros(n);
    for i in 0..n {
        let x = PauliString::single(n, i, Pauli::X);
        let m = last.measure_pauli_with(&x, &mut rng)?;
        if !m.deterministic {
            return Err(ReadoutError::Integrity(format!("qubit {i} is still entangled")));
        }
        d.set(i, m.outcome.bit());
    }
    let recovered = Graph::from_parts(lambda, d.clone()).map_err(|e| ReadoutError::Integrity(e.to_string()))?;
    Ok(ReadoutRun {
        recovered,
        copies_used: source.copies_taken() - start,
        rounds,
        d,
        iterations,
        two_qubit_gates: (2 * n * iterations) as u64 + final_cz,
        measurements: (3 * n * iterations + n) as u64,
    })
}
