//! Comparison and degree-parity protocols.
//!
//! Each protocol returns a [`TrialRecord`] with the exact outcome
//! distribution and one outcome drawn from a stream seeded by the caller.
//! Protocols measure private copies of the registers they are handed, so
//! the caller's registers are left untouched.
//!
//! The swap and controlled-permutation tests are not Clifford circuits.
//! Their outcome law depends only on `|<psi|phi>|^2`, so it is computed
//! from the tableaus and sampled directly.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::gf2::{quad_char_sum, BitMatrix, CharSum};
use crate::graphmodel::{Graph, GraphError};
use crate::graphstate::GraphRegister;
use crate::tableau::{Membership, Pauli, PauliString, Sign, TableauError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProtocolError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error("registers have {0} and {1} qubits")]
    SizeMismatch(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Equal,
    Different,
    PlusOne,
    MinusOne,
    Consistent(Sign),
    Mismatch,
}

impl Outcome {
    fn from_sign(s: Sign) -> Outcome {
        match s {
            Sign::Plus => Outcome::PlusOne,
            Sign::Minus => Outcome::MinusOne,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Equal => f.write_str("equal"),
            Outcome::Different => f.write_str("different"),
            Outcome::PlusOne => f.write_str("+1"),
            Outcome::MinusOne => f.write_str("-1"),
            Outcome::Consistent(Sign::Plus) => f.write_str("consistent(+1)"),
            Outcome::Consistent(Sign::Minus) => f.write_str("consistent(-1)"),
            Outcome::Mismatch => f.write_str("mismatch"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialRecord {
    pub protocol: &'static str,
    pub outcome: Outcome,
    /// Exact law over every outcome the protocol can produce.
    pub probabilities: Vec<(Outcome, Dyadic)>,
    pub deterministic: bool,
    pub seed: u64,
    /// Register copies consumed.
    pub copies: usize,
}

impl TrialRecord {
    pub fn probability_of(&self, outcome: Outcome) -> Dyadic {
        self.probabilities
            .iter()
            .find(|(o, _)| *o == outcome)
            .map_or(Dyadic::ZERO, |(_, p)| *p)
    }
}

/// Two-outcome record: `bad` with probability `p_bad`, else `good`.
fn binary_record(
    protocol: &'static str,
    good: Outcome,
    bad: Outcome,
    p_bad: Dyadic,
    seed: u64,
    copies: usize,
) -> TrialRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcome = if p_bad.sample(&mut rng) { bad } else { good };
    TrialRecord {
        protocol,
        outcome,
        probabilities: vec![(good, p_bad.complement()), (bad, p_bad)],
        deterministic: p_bad.is_zero() || p_bad.is_one(),
        seed,
        copies,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Overlap {
    pub mag2: Dyadic,
    /// Registers of different sizes; `mag2` is zero by convention.
    pub size_mismatch: bool,
}

/// `|<G1|G2>|^2` from the tableaus.
pub fn overlap_mag2(r1: &GraphRegister, r2: &GraphRegister) -> Overlap {
    if r1.n() != r2.n() {
        return Overlap {
            mag2: Dyadic::ZERO,
            size_mismatch: true,
        };
    }
    let mag2 = r1.tableau().inner_product_mag2(r2.tableau()).expect("sizes checked");
    Overlap {
        mag2,
        size_mismatch: false,
    }
}

/// `|<G1|G2>|^2` from the character sum of the quadratic form of the
/// symmetric difference `G1 Δ G2`, independently of any tableau.
pub fn overlap_mag2_charsum(g1: &Graph, g2: &Graph) -> Result<Dyadic, ProtocolError> {
    let diff = g1.symmetric_difference(g2)?;
    let n = diff.n();
    let mut upper = BitMatrix::zeros(n, n);
    for (u, v) in diff.edges() {
        upper.set(u, v, true);
    }
    let sum = quad_char_sum(&upper, diff.loops()).expect("upper-triangular by construction");
    Ok(match sum {
        CharSum::Zero => Dyadic::ZERO,
        CharSum::Signed { exponent, .. } => Dyadic::pow2_neg(2 * (n as u32 - exponent)),
    })
}

/// Swap test: reports `Different` with probability `(1 - |<G1|G2>|^2) / 2`.
pub fn equality_test(r1: &GraphRegister, r2: &GraphRegister, seed: u64) -> TrialRecord {
    let ov = overlap_mag2(r1, r2);
    let p_diff = if ov.size_mismatch {
        Dyadic::ONE
    } else {
        ov.mag2.complement().half()
    };
    binary_record("equality", Outcome::Equal, Outcome::Different, p_diff, seed, 2)
}

/// Controlled-permutation test: `-1` with probability
/// `(1 - |<G|P G>|^2) / 2`, never for an automorphism.
pub fn automorphism_test(r: &GraphRegister, perm: &[usize], seed: u64) -> Result<TrialRecord, ProtocolError> {
    r.shadow().permute(perm)?;
    let moved = r.tableau().permute_qubits(perm)?;
    let ov = r.tableau().inner_product_mag2(&moved)?;
    Ok(binary_record(
        "automorphism",
        Outcome::PlusOne,
        Outcome::MinusOne,
        ov.complement().half(),
        seed,
        1,
    ))
}

/// Measures `X_a X_b` (or `Y_a Y_b` when `a`, `b` are adjacent) as two
/// single-qubit measurements on a copy. The product is `+1` with certainty
/// when swapping `a` and `b` is an automorphism.
pub fn vertex_compare(r: &GraphRegister, a: usize, b: usize, seed: u64) -> Result<TrialRecord, ProtocolError> {
    let n = r.n();
    for v in [a, b] {
        if v >= n {
            return Err(GraphError::IndexOutOfRange { index: v, n }.into());
        }
    }
    if a == b {
        return Err(
            GraphError::InvalidOperands(format!("vertex_compare needs distinct vertices, got {a} twice")).into(),
        );
    }
    let pauli = if r.shadow().has_edge(a, b) { Pauli::Y } else { Pauli::X };
    let observable = PauliString::uniform(n, [a, b], pauli);
    let law = sign_law(r, &observable)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut copy = r.tableau().clone();
    let ma = copy.measure_pauli_with(&PauliString::single(n, a, pauli), &mut rng)?;
    let mb = copy.measure_pauli_with(&PauliString::single(n, b, pauli), &mut rng)?;
    Ok(signed_record(
        "vertex_compare",
        ma.outcome.times(mb.outcome),
        law,
        seed,
        1,
    ))
}

/// `(P(+1), P(-1))` for measuring `p` on `r`.
fn sign_law(r: &GraphRegister, p: &PauliString) -> Result<(Dyadic, Dyadic), ProtocolError> {
    Ok(match r.tableau().contains_stabilizer(p)? {
        Membership::Plus => (Dyadic::ONE, Dyadic::ZERO),
        Membership::Minus => (Dyadic::ZERO, Dyadic::ONE),
        Membership::No => (Dyadic::HALF, Dyadic::HALF),
    })
}

fn signed_record(
    protocol: &'static str,
    sampled: Sign,
    law: (Dyadic, Dyadic),
    seed: u64,
    copies: usize,
) -> TrialRecord {
    TrialRecord {
        protocol,
        outcome: Outcome::from_sign(sampled),
        probabilities: vec![(Outcome::PlusOne, law.0), (Outcome::MinusOne, law.1)],
        deterministic: law.0.is_zero() || law.1.is_zero(),
        seed,
        copies,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityKind {
    /// `∏ X_v`; certain on graphs whose degrees are all even.
    Even,
    /// `∏ Y_v`; certain on graphs whose degrees are all odd.
    Odd,
}

impl ParityKind {
    pub fn observable(self, n: usize) -> PauliString {
        let pauli = match self {
            ParityKind::Even => Pauli::X,
            ParityKind::Odd => Pauli::Y,
        };
        PauliString::uniform(n, 0..n, pauli)
    }
}

/// Measures the parity observable on copies of two registers holding the
/// same graph. On graphs of the tested parity both copies agree with
/// certainty; otherwise the two outcomes are independent fair coins.
///
/// For all-even degrees the common value is `(-1)^{|E| + s}` with `s` the
/// number of self-loops, so a triangle gives `-1`.
pub fn degree_parity_test(
    r1: &GraphRegister,
    r2: &GraphRegister,
    kind: ParityKind,
    seed: u64,
) -> Result<TrialRecord, ProtocolError> {
    if r1.n() != r2.n() {
        return Err(ProtocolError::SizeMismatch(r1.n(), r2.n()));
    }
    let observable = kind.observable(r1.n());
    let (plus, minus) = sign_law(r1, &observable)?;
    let probabilities = if plus == Dyadic::HALF {
        let quarter = Dyadic::pow2_neg(2);
        vec![
            (Outcome::Consistent(Sign::Plus), quarter),
            (Outcome::Consistent(Sign::Minus), quarter),
            (Outcome::Mismatch, Dyadic::HALF),
        ]
    } else {
        vec![
            (Outcome::Consistent(Sign::Plus), plus),
            (Outcome::Consistent(Sign::Minus), minus),
            (Outcome::Mismatch, Dyadic::ZERO),
        ]
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m1 = r1.tableau().clone().measure_pauli_with(&observable, &mut rng)?;
    let m2 = r2.tableau().clone().measure_pauli_with(&observable, &mut rng)?;
    let outcome = if m1.outcome == m2.outcome {
        Outcome::Consistent(m1.outcome)
    } else {
        Outcome::Mismatch
    };
    Ok(TrialRecord {
        protocol: "degree_parity",
        outcome,
        probabilities,
        deterministic: plus != Dyadic::HALF,
        seed,
        copies: 2,
    })
}

/// One-copy variant: a single measurement of the parity observable. On
/// graphs of the tested parity the outcome is certain; in the even case its
/// value is `(-1)^{|E| + s}`, so a caller who knows that sign can reject on
/// a single disagreeing outcome.
pub fn degree_parity_single(r: &GraphRegister, kind: ParityKind, seed: u64) -> Result<TrialRecord, ProtocolError> {
    let observable = kind.observable(r.n());
    let law = sign_law(r, &observable)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = r.tableau().clone().measure_pauli_with(&observable, &mut rng)?;
    Ok(signed_record("degree_parity_single", m.outcome, law, seed, 1))
}
