//! A graph state held as a stabilizer tableau together with the classical
//! graph it represents.
//!
//! Every public operation applies a Clifford circuit to the tableau and the
//! matching rewrite rule to the shadow graph, and bumps the gate counters.
//! [`GraphRegister::verify`] checks that the two still agree.

use thiserror::Error;

use crate::gf2::BitVector;
use crate::graphmodel::{Graph, GraphError};
use crate::tableau::{Gate, Membership, Pauli, PauliString, Sign, Tableau, TableauError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphStateError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error("internal inconsistency: {0}")]
    Integrity(String),
}

/// Elementary operation counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    pub one_qubit_gates: u64,
    pub two_qubit_gates: u64,
    pub measurements: u64,
    pub ancillas_used: u64,
}

impl Counters {
    pub fn total_gates(&self) -> u64 {
        self.one_qubit_gates + self.two_qubit_gates
    }

    pub fn add(&mut self, other: &Counters) {
        self.one_qubit_gates += other.one_qubit_gates;
        self.two_qubit_gates += other.two_qubit_gates;
        self.measurements += other.measurements;
        self.ancillas_used += other.ancillas_used;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeleteMode {
    /// Keep whatever the measurement leaves behind.
    Blind,
    /// Undo the `Z` residue on the former neighbours.
    Corrected,
}

/// Stabilizer generator of `|G>` for vertex `v`:
/// `(-1)^{loop(v)} X_v ∏_{u ∈ N(v)} Z_u`.
pub fn graph_generator(g: &Graph, v: usize) -> PauliString {
    let n = g.n();
    let x = BitVector::from_indices(n, [v]);
    let z = g.neighbors(v).clone();
    PauliString::from_bits(x, z, Sign::from_negative(g.has_loop(v)))
}

#[derive(Clone, Debug)]
pub struct GraphRegister {
    tableau: Tableau,
    shadow: Graph,
    counters: Counters,
}

impl GraphRegister {
    /// `CZ` along every edge of `g` and `Z` on every looped vertex, applied
    /// to `|+>^n`.
    pub fn prepare(g: &Graph, seed: u64) -> Self {
        let mut r = GraphRegister {
            tableau: Tableau::new_plus(g.n(), seed),
            shadow: Graph::empty(g.n()),
            counters: Counters::default(),
        };
        let edges: Vec<(usize, usize)> = g.edges().collect();
        for (u, v) in edges {
            r.cz(u, v).expect("edge endpoints are in range");
        }
        for v in g.loops().iter_ones() {
            r.cz(v, v).expect("vertex is in range");
        }
        r
    }

    /// `K_n` through a single intraset complementation on the empty graph.
    pub fn prepare_complete(n: usize, seed: u64) -> Self {
        let mut r = Self::prepare(&Graph::empty(n), seed);
        let all: Vec<usize> = (0..n).collect();
        r.intraset_complement(&all).expect("all vertices are valid");
        r
    }

    pub fn n(&self) -> usize {
        self.shadow.n()
    }

    pub fn tableau(&self) -> &Tableau {
        &self.tableau
    }

    /// Raw tableau access; bypasses the shadow.
    pub fn tableau_mut(&mut self) -> &mut Tableau {
        &mut self.tableau
    }

    pub fn shadow(&self) -> &Graph {
        &self.shadow
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn reset_counters(&mut self) {
        self.counters = Counters::default();
    }

    pub fn reseed(&mut self, seed: u64) {
        self.tableau.reseed(seed);
    }

    fn gate(&mut self, gate: Gate) -> Result<(), GraphStateError> {
        self.tableau.apply_gate(gate)?;
        if gate.is_two_qubit() {
            self.counters.two_qubit_gates += 1;
        } else {
            self.counters.one_qubit_gates += 1;
        }
        Ok(())
    }

    /// Adds an isolated vertex in `|+>` and returns its index.
    pub fn add_vertex(&mut self) -> usize {
        self.tableau.push_plus();
        self.shadow.add_vertex()
    }

    /// Disjoint union; `other`'s vertices are numbered after this register's.
    pub fn tensor(&self, other: &GraphRegister) -> GraphRegister {
        let mut counters = self.counters;
        counters.add(&other.counters);
        GraphRegister {
            tableau: self.tableau.tensor(&other.tableau),
            shadow: self.shadow.disjoint_union(&other.shadow),
            counters,
        }
    }

    pub fn apply_pauli(&mut self, pauli: Pauli, a: usize) -> Result<(), GraphStateError> {
        let gate = match pauli {
            Pauli::X => Gate::X(a),
            Pauli::Y => Gate::Y(a),
            Pauli::Z => Gate::Z(a),
            Pauli::I => return Err(GraphError::InvalidOperands("identity is not an operation".into()).into()),
        };
        self.shadow.clone().pauli_rule(pauli, a)?;
        self.gate(gate)?;
        self.shadow.pauli_rule(pauli, a)?;
        Ok(())
    }

    /// Edge complementation; `cz(v, v)` is `Z` on `v`.
    pub fn cz(&mut self, u: usize, v: usize) -> Result<(), GraphStateError> {
        self.shadow.clone().toggle_edge(u, v)?;
        self.gate(Gate::CZ(u, v))?;
        self.shadow.toggle_edge(u, v)?;
        Ok(())
    }

    pub fn cnot(&mut self, a: usize, b: usize) -> Result<(), GraphStateError> {
        let mut next = self.shadow.clone();
        next.cnot_rule(a, b)?;
        self.gate(Gate::CNOT(a, b))?;
        self.shadow = next;
        Ok(())
    }

    /// `(H ⊗ H) CZ (H ⊗ H)` on non-adjacent `a`, `b`.
    pub fn fx(&mut self, a: usize, b: usize) -> Result<(), GraphStateError> {
        let mut next = self.shadow.clone();
        next.fx_rule(a, b)?;
        for gate in [Gate::H(a), Gate::H(b), Gate::CZ(a, b), Gate::H(a), Gate::H(b)] {
            self.gate(gate)?;
        }
        self.shadow = next;
        Ok(())
    }

    /// FX that also accepts adjacent vertices by removing the edge first and
    /// restoring it afterwards.
    pub fn fx_wrapped(&mut self, a: usize, b: usize) -> Result<(), GraphStateError> {
        if a < self.n() && b < self.n() && a != b && self.shadow.has_edge(a, b) {
            self.cz(a, b)?;
            self.fx(a, b)?;
            self.cz(a, b)
        } else {
            self.fx(a, b)
        }
    }

    /// Local complementation about `a` with `sqrt(-iX)` on `a` and
    /// `sqrt(iZ)` on each neighbour.
    pub fn local_complement(&mut self, a: usize) -> Result<(), GraphStateError> {
        let mut next = self.shadow.clone();
        next.local_comp_rule(a)?;
        let nb = self.shadow.neighbor_list(a);
        self.gate(Gate::SqrtMinusIX(a))?;
        for b in nb {
            self.gate(Gate::SqrtIZ(b))?;
        }
        self.shadow = next;
        Ok(())
    }

    fn discard_ancilla(&mut self, q: usize) -> Result<(), GraphStateError> {
        let plus_x = PauliString::single(self.n(), q, Pauli::X);
        if self.tableau.contains_stabilizer(&plus_x)? != Membership::Plus {
            return Err(GraphStateError::Integrity(format!("ancilla {q} is not in |+>")));
        }
        self.tableau.discard_qubit(q, Pauli::X)?;
        self.shadow = self.shadow.without_vertex(q)?;
        Ok(())
    }

    /// Toggles every edge between `s1` and `s2` through two ancillas.
    pub fn interset_complement(&mut self, s1: &[usize], s2: &[usize]) -> Result<(), GraphStateError> {
        self.shadow.clone().iac_rule(s1, s2)?;
        let a = self.add_vertex();
        let b = self.add_vertex();
        self.counters.ancillas_used += 2;
        let fan = |r: &mut Self| -> Result<(), GraphStateError> {
            for &v in s1 {
                r.cz(a, v)?;
            }
            for &u in s2 {
                r.cz(b, u)?;
            }
            Ok(())
        };
        fan(self)?;
        self.fx(a, b)?;
        fan(self)?;
        self.discard_ancilla(b)?;
        self.discard_ancilla(a)
    }

    /// Toggles every edge inside `s` through one ancilla.
    pub fn intraset_complement(&mut self, s: &[usize]) -> Result<(), GraphStateError> {
        self.shadow.clone().iec_rule(s)?;
        let a = self.add_vertex();
        self.counters.ancillas_used += 1;
        for &v in s {
            self.cz(a, v)?;
        }
        self.local_complement(a)?;
        for &v in s {
            self.cz(a, v)?;
        }
        self.discard_ancilla(a)
    }

    /// Measures `Z_v`, removes the qubit and returns the outcome bit.
    /// Vertices above `v` shift down by one.
    pub fn delete_vertex(&mut self, v: usize, mode: DeleteMode) -> Result<bool, GraphStateError> {
        if v >= self.n() {
            return Err(GraphError::IndexOutOfRange { index: v, n: self.n() }.into());
        }
        let z = PauliString::single(self.n(), v, Pauli::Z);
        let m = self.tableau.measure_pauli(&z)?;
        self.counters.measurements += 1;
        let outcome = m.outcome.bit();
        let removed = self.tableau.discard_qubit(v, Pauli::Z)?;
        if removed != m.outcome {
            return Err(GraphStateError::Integrity(format!("qubit {v} lost its measured value")));
        }
        let former: Vec<usize> = self
            .shadow
            .neighbor_list(v)
            .into_iter()
            .map(|u| if u > v { u - 1 } else { u })
            .collect();
        self.shadow = self.shadow.z_delete_rule(v, outcome)?;
        if outcome && mode == DeleteMode::Corrected {
            for u in former {
                self.apply_pauli(Pauli::Z, u)?;
            }
        }
        Ok(outcome)
    }

    /// Every shadow generator is a `+` stabilizer of the tableau.
    pub fn verify(&self) -> bool {
        if self.tableau.n() != self.shadow.n() {
            return false;
        }
        let basis = self.tableau.basis();
        (0..self.n()).all(|v| basis.membership(&graph_generator(&self.shadow, v)) == Membership::Plus)
    }
}
