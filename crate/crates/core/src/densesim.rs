//! Dense state-vector reference simulator for small registers.
//!
//! Qubit `q` is bit `q` of the basis-state index. States are capped at
//! [`MAX_QUBITS`] qubits; this module is a test oracle and has no fallback
//! role for larger registers.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graphmodel::Graph;
use crate::tableau::{Gate, Pauli, PauliString, Sign, Tableau};

pub const MAX_QUBITS: usize = 12;

/// Absolute tolerance used by [`equal_up_to_phase`].
pub const PHASE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DenseError {
    #[error("{n} qubits exceeds the dense cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("projection onto a zero-probability outcome")]
    ZeroProbability,
    #[error("oracle output does not factor as graph state times |->")]
    OracleMismatch,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

fn cap(n: usize, limit: usize) -> Result<(), DenseError> {
    if n > limit {
        Err(DenseError::TooLarge { n, cap: limit })
    } else {
        Ok(())
    }
}

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

impl StateVector {
    pub fn zero(n: usize) -> Result<Self, DenseError> {
        cap(n, MAX_QUBITS)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn plus(n: usize) -> Result<Self, DenseError> {
        cap(n, MAX_QUBITS)?;
        let a = Complex64::new((0.5f64).powf(n as f64 / 2.0), 0.0);
        Ok(StateVector {
            n,
            amps: vec![a; 1 << n],
        })
    }

    /// Takes raw amplitudes (length `2^n`) and normalizes them.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, DenseError> {
        if !amps.len().is_power_of_two() {
            return Err(DenseError::Shape(format!(
                "{} amplitudes is not a power of two",
                amps.len()
            )));
        }
        let n = amps.len().trailing_zeros() as usize;
        cap(n, MAX_QUBITS)?;
        let mut v = StateVector { n, amps };
        v.normalize()?;
        Ok(v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn normalize(&mut self) -> Result<(), DenseError> {
        let norm = self.norm_sqr().sqrt();
        if norm < 1e-12 {
            return Err(DenseError::ZeroProbability);
        }
        for a in &mut self.amps {
            *a /= norm;
        }
        Ok(())
    }

    fn check(&self, q: usize) -> Result<(), DenseError> {
        if q >= self.n {
            Err(DenseError::Shape(format!(
                "qubit {q} out of range for {} qubits",
                self.n
            )))
        } else {
            Ok(())
        }
    }

    fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    pub fn apply_gate(&mut self, gate: Gate) -> Result<(), DenseError> {
        let (a, b) = gate.qubits();
        self.check(a)?;
        if let Some(b) = b {
            self.check(b)?;
        }
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let ri = Complex64::new(0.0, FRAC_1_SQRT_2);
        match gate {
            Gate::H(q) => self.apply_1q(q, [[r, r], [r, -r]]),
            Gate::S(q) => self.apply_1q(q, [[l, o], [o, i]]),
            Gate::X(q) => self.apply_1q(q, [[o, l], [l, o]]),
            Gate::Y(q) => self.apply_1q(q, [[o, -i], [i, o]]),
            Gate::Z(q) => self.apply_1q(q, [[l, o], [o, -l]]),
            Gate::SqrtMinusIX(q) => self.apply_1q(q, [[r, -ri], [-ri, r]]),
            Gate::SqrtIZ(q) => self.apply_1q(q, [[r + ri, o], [o, r - ri]]),
            Gate::CZ(a, b) if a == b => self.apply_1q(a, [[l, o], [o, -l]]),
            Gate::CZ(a, b) => {
                let mask = (1usize << a) | (1usize << b);
                for (k, amp) in self.amps.iter_mut().enumerate() {
                    if k & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
            Gate::CNOT(c, t) => {
                if c == t {
                    return Err(DenseError::Shape(format!("CNOT needs distinct qubits, got {c}")));
                }
                let (cb, tb) = (1usize << c, 1usize << t);
                for k in 0..self.amps.len() {
                    if k & cb != 0 && k & tb == 0 {
                        self.amps.swap(k, k | tb);
                    }
                }
            }
        }
        Ok(())
    }

    /// `P|psi>` for a (possibly signed) Pauli string.
    pub fn apply_pauli(&self, p: &PauliString) -> Result<StateVector, DenseError> {
        if p.n() != self.n {
            return Err(DenseError::Shape(format!("{}-qubit Pauli on {} qubits", p.n(), self.n)));
        }
        let mut out = self.clone();
        for q in 0..self.n {
            let gate = match p.get(q) {
                Pauli::I => continue,
                Pauli::X => Gate::X(q),
                Pauli::Y => Gate::Y(q),
                Pauli::Z => Gate::Z(q),
            };
            out.apply_gate(gate)?;
        }
        if p.sign().is_negative() {
            for a in &mut out.amps {
                *a = -*a;
            }
        }
        Ok(out)
    }

    /// `<psi|P|psi>`.
    pub fn expectation(&self, p: &PauliString) -> Result<f64, DenseError> {
        Ok(overlap(self, &self.apply_pauli(p)?)?.re)
    }

    /// Born probability that measuring `p` yields `outcome`.
    pub fn outcome_probability(&self, p: &PauliString, outcome: Sign) -> Result<f64, DenseError> {
        let e = self.expectation(p)?;
        Ok((1.0 + outcome.value() as f64 * e) / 2.0)
    }

    /// Post-measurement state for outcome `outcome` of `p`.
    pub fn project(&self, p: &PauliString, outcome: Sign) -> Result<StateVector, DenseError> {
        let pp = self.apply_pauli(p)?;
        let s = outcome.value() as f64;
        let amps = self.amps.iter().zip(&pp.amps).map(|(a, b)| (a + b * s) * 0.5).collect();
        let mut v = StateVector { n: self.n, amps };
        v.normalize()?;
        Ok(v)
    }

    /// Projects qubit `q` onto `|bit>` and removes it; higher qubits shift down.
    pub fn measure_z_and_remove(&self, q: usize, bit: bool) -> Result<StateVector, DenseError> {
        self.check(q)?;
        let low = (1usize << q) - 1;
        let mut amps = Vec::with_capacity(self.amps.len() / 2);
        for k in 0..self.amps.len() / 2 {
            let full = (k & low) | ((k & !low) << 1) | ((bit as usize) << q);
            amps.push(self.amps[full]);
        }
        let mut v = StateVector { n: self.n - 1, amps };
        v.normalize()?;
        Ok(v)
    }

    /// `self ⊗ other`; qubits of `other` follow those of `self`.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector, DenseError> {
        cap(self.n + other.n, MAX_QUBITS)?;
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for b in &other.amps {
            for a in &self.amps {
                amps.push(a * b);
            }
        }
        Ok(StateVector {
            n: self.n + other.n,
            amps,
        })
    }

    /// The unique state stabilized by the tableau, up to global phase,
    /// found by projecting a generic vector onto the `+1` eigenspace of
    /// every generator.
    pub fn from_tableau(t: &Tableau) -> Result<StateVector, DenseError> {
        cap(t.n(), MAX_QUBITS)?;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let amps = (0..1usize << t.n())
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let mut v = StateVector::from_amplitudes(amps)?;
        for g in t.generators() {
            v = v.project(g, Sign::Plus)?;
        }
        Ok(v)
    }
}

/// `<a|b>`.
pub fn overlap(a: &StateVector, b: &StateVector) -> Result<Complex64, DenseError> {
    if a.n != b.n {
        return Err(DenseError::Shape(format!("{} vs {} qubits", a.n, b.n)));
    }
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

/// Equal amplitudes after removing a global phase, within [`PHASE_TOL`].
pub fn equal_up_to_phase(a: &StateVector, b: &StateVector) -> bool {
    let Ok(ov) = overlap(a, b) else {
        return false;
    };
    if ov.norm() < 1e-6 {
        return false;
    }
    let phase = ov / ov.norm();
    a.amps
        .iter()
        .zip(&b.amps)
        .all(|(x, y)| (x * phase - y).norm() <= PHASE_TOL)
}

/// `|E_S|` counting induced edges and selected loops, mod 2.
fn induced_parity(g: &Graph, subset: usize) -> bool {
    let mut parity = false;
    for v in 0..g.n() {
        if subset >> v & 1 == 0 {
            continue;
        }
        parity ^= g.has_loop(v);
        for u in g.neighbors(v).iter_ones().filter(|&u| u > v) {
            parity ^= subset >> u & 1 == 1;
        }
    }
    parity
}

/// `2^(-n/2) Σ_S (-1)^{|E_S|} |S>`.
pub fn graph_state_vector(g: &Graph) -> Result<StateVector, DenseError> {
    cap(g.n(), MAX_QUBITS)?;
    let a = (0.5f64).powf(g.n() as f64 / 2.0);
    let amps = (0..1usize << g.n())
        .map(|s| Complex64::new(if induced_parity(g, s) { -a } else { a }, 0.0))
        .collect();
    Ok(StateVector { n: g.n(), amps })
}

/// Runs the phase-kickback query `|S>|y> -> |S>|y ⊕ |E_S|>` on
/// `|+>^n ⊗ |->`. The ancilla is qubit `n`. Fails if the output is not
/// `graph_state_vector(g) ⊗ |->` up to global phase.
pub fn oracle_prepare(g: &Graph) -> Result<StateVector, DenseError> {
    cap(g.n(), MAX_QUBITS - 1)?;
    let n = g.n();
    let mut minus = StateVector::plus(1)?;
    minus.apply_gate(Gate::Z(0))?;
    let input = StateVector::plus(n)?.tensor(&minus)?;
    let mut amps = input.amps.clone();
    let flip = 1usize << n;
    for s in 0..flip {
        if induced_parity(g, s) {
            amps.swap(s, s | flip);
        }
    }
    let out = StateVector { n: n + 1, amps };
    let expected = graph_state_vector(g)?.tensor(&minus)?;
    if !equal_up_to_phase(&out, &expected) {
        return Err(DenseError::OracleMismatch);
    }
    Ok(out)
}
