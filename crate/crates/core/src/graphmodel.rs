//! Classical graphs with optional self-loops, and the rewrite rules that
//! Clifford operations induce on them.
//!
//! A [`Graph`] keeps off-diagonal adjacency in a symmetric bit matrix with
//! a zero diagonal and self-loops in a separate bit vector. Every rule here
//! is pure bookkeeping; the quantum side lives in [`crate::graphstate`],
//! which keeps one of these graphs in lock-step with its tableau.
//!
//! Throughout, `N(v)` means the neighbours of `v` other than `v` itself.

use std::fmt;

use thiserror::Error;

use crate::gf2::{BitMatrix, BitVector};
use crate::tableau::Pauli;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {index} out of range for {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid operands: {0}")]
    InvalidOperands(String),
    #[error("fx({a}, {b}) requires no edge between {a} and {b}; use fx_wrapped")]
    FxEdgePresent { a: usize, b: usize },
    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),
}

/// An undirected graph on vertices `0..n` with at most one self-loop per vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: BitMatrix,
    loops: BitVector,
}

/// Degree-parity summary. Self-loops add two to a degree and never change
/// its parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeParity {
    pub all_even: bool,
    pub all_odd: bool,
    /// Parity of the number of self-loops.
    pub loop_parity: bool,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: BitMatrix::zeros(n, n),
            loops: BitVector::zeros(n),
        }
    }

    /// Complete graph `K_n`, no loops.
    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.adj.set(u, v, true);
                g.adj.set(v, u, true);
            }
        }
        g
    }

    /// Builds a graph by toggling each listed pair in order; `(v, v)`
    /// toggles a self-loop.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.toggle_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph from a symmetric adjacency matrix and a loop vector.
    /// The diagonal of `adj` must be zero.
    pub fn from_parts(adj: BitMatrix, loops: BitVector) -> Result<Self, GraphError> {
        let n = loops.len();
        if adj.nrows() != n || !adj.is_symmetric() {
            return Err(GraphError::InvalidOperands(
                "adjacency must be a symmetric n x n matrix".into(),
            ));
        }
        if (0..n).any(|v| adj.get(v, v)) {
            return Err(GraphError::InvalidOperands(
                "self-loops belong in the loop vector".into(),
            ));
        }
        Ok(Graph { adj, loops })
    }

    pub fn n(&self) -> usize {
        self.loops.len()
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    pub fn loops(&self) -> &BitVector {
        &self.loops
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u == v {
            self.loops.get(u)
        } else {
            self.adj.get(u, v)
        }
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.loops.get(v)
    }

    /// `N(v)` as a bit vector (never contains `v`).
    pub fn neighbors(&self, v: usize) -> &BitVector {
        self.adj.row(v)
    }

    pub fn neighbor_list(&self, v: usize) -> Vec<usize> {
        self.adj.row(v).iter_ones().collect()
    }

    /// Number of non-loop edges at `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.adj.row(v).count_ones()
    }

    /// Number of non-loop edges.
    pub fn edge_count(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn loop_count(&self) -> usize {
        self.loops.count_ones()
    }

    /// Non-loop edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| self.adj.row(u).iter_ones().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Edge-and-loop sets XORed together.
    pub fn symmetric_difference(&self, other: &Graph) -> Result<Graph, GraphError> {
        if self.n() != other.n() {
            return Err(GraphError::InvalidOperands(format!(
                "graphs have {} and {} vertices",
                self.n(),
                other.n()
            )));
        }
        let mut out = self.clone();
        for v in 0..self.n() {
            *out.adj.row_mut(v) ^= other.adj.row(v);
        }
        out.loops ^= &other.loops;
        Ok(out)
    }

    fn check(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n() {
            Err(GraphError::IndexOutOfRange { index: v, n: self.n() })
        } else {
            Ok(())
        }
    }

    fn check_set(&self, set: &[usize]) -> Result<BitVector, GraphError> {
        let mut bits = BitVector::zeros(self.n());
        for &v in set {
            self.check(v)?;
            if bits.get(v) {
                return Err(GraphError::InvalidOperands(format!("vertex {v} listed twice")));
            }
            bits.set(v, true);
        }
        Ok(bits)
    }

    fn toggle_unchecked(&mut self, u: usize, v: usize) {
        if u == v {
            self.loops.flip(u);
        } else {
            self.adj.flip(u, v);
            self.adj.flip(v, u);
        }
    }

    /// `E -> E ⊕ (u, v)`; `u == v` toggles a self-loop.
    pub fn toggle_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check(u)?;
        self.check(v)?;
        self.toggle_unchecked(u, v);
        Ok(())
    }

    /// Effect of a Pauli on vertex `a`: `Z` toggles the loop on `a`, `X`
    /// toggles loops on `N(a)`, `Y` on `N(a)` and `a`.
    pub fn pauli_rule(&mut self, pauli: Pauli, a: usize) -> Result<(), GraphError> {
        self.check(a)?;
        if matches!(pauli, Pauli::X | Pauli::Y) {
            let nb = self.adj.row(a).clone();
            self.loops ^= &nb;
        }
        if matches!(pauli, Pauli::Y | Pauli::Z) {
            self.loops.flip(a);
        }
        Ok(())
    }

    /// Effect of `CNOT(a -> b)`: toggles `(a, v)` for every `v` in `N(b)`
    /// (a loop on `a` when `v = a`), and the loop on `a` if `b` has one.
    pub fn cnot_rule(&mut self, a: usize, b: usize) -> Result<(), GraphError> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Err(GraphError::InvalidOperands(format!(
                "cnot needs distinct vertices, got {a} twice"
            )));
        }
        let nb: Vec<usize> = self.neighbor_list(b);
        for v in nb {
            self.toggle_unchecked(a, v);
        }
        if self.loops.get(b) {
            self.loops.flip(a);
        }
        Ok(())
    }

    /// Effect of `FX(a, b) = (H ⊗ H) CZ (H ⊗ H)` on non-adjacent `a`, `b`.
    ///
    /// With `C = N(a) \ N(b)`, `D = N(b) \ N(a)` and `F = N(a) ∩ N(b)`
    /// (all excluding `a` and `b`), every ordered pair in `(C ∪ F) × (D ∪ F)`
    /// is toggled. Pairs inside `F` are hit twice and cancel, while each
    /// `(f, f)` is hit once and toggles the loop on `f`. A loop on `b`
    /// further toggles loops on `C ∪ F`, and a loop on `a` those on `D ∪ F`.
    ///
    /// Net loop effect: without loops on `a`, `b` the loops on `F` flip; a
    /// loop on `a` alone flips `D` instead, one on `b` alone flips `C`, and
    /// loops on both flip `C`, `D` and `F`.
    pub fn fx_rule(&mut self, a: usize, b: usize) -> Result<(), GraphError> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Err(GraphError::InvalidOperands(format!(
                "fx needs distinct vertices, got {a} twice"
            )));
        }
        if self.adj.get(a, b) {
            return Err(GraphError::FxEdgePresent { a, b });
        }
        let na = self.adj.row(a).clone();
        let nb = self.adj.row(b).clone();
        let left: Vec<usize> = na.iter_ones().collect(); // C ∪ F
        let right: Vec<usize> = nb.iter_ones().collect(); // D ∪ F
        for &v in &left {
            for &u in &right {
                self.toggle_unchecked(v, u);
            }
        }
        if self.loops.get(b) {
            self.loops ^= &na;
        }
        if self.loops.get(a) {
            self.loops ^= &nb;
        }
        Ok(())
    }

    /// Local complementation about `a`: toggles every edge between distinct
    /// vertices of `N(a)`, plus their loops when `a` has a loop.
    pub fn local_comp_rule(&mut self, a: usize) -> Result<(), GraphError> {
        self.check(a)?;
        let nb = self.adj.row(a).clone();
        let members: Vec<usize> = nb.iter_ones().collect();
        for &v in &members {
            let mut row = nb.clone();
            row.flip(v);
            *self.adj.row_mut(v) ^= &row;
        }
        if self.loops.get(a) {
            self.loops ^= &nb;
        }
        Ok(())
    }

    /// Interset complementation: toggles every edge between `s1` and `s2`.
    pub fn iac_rule(&mut self, s1: &[usize], s2: &[usize]) -> Result<(), GraphError> {
        let b1 = self.check_set(s1)?;
        let b2 = self.check_set(s2)?;
        if !b1.and(&b2).is_zero() {
            return Err(GraphError::InvalidOperands(
                "interset complementation needs disjoint sets".into(),
            ));
        }
        for &v in s1 {
            *self.adj.row_mut(v) ^= &b2;
        }
        for &u in s2 {
            *self.adj.row_mut(u) ^= &b1;
        }
        Ok(())
    }

    /// Intraset complementation: toggles every edge between distinct
    /// members of `s`.
    pub fn iec_rule(&mut self, s: &[usize]) -> Result<(), GraphError> {
        let bits = self.check_set(s)?;
        for &v in s {
            let mut row = bits.clone();
            row.flip(v);
            *self.adj.row_mut(v) ^= &row;
        }
        Ok(())
    }

    /// Graph left after measuring vertex `v` in the Z basis with result
    /// `outcome` (`false` for `+1`). A `true` outcome leaves loops toggled
    /// on the former `N(v)`. Vertices above `v` shift down by one.
    pub fn z_delete_rule(&self, v: usize, outcome: bool) -> Result<Graph, GraphError> {
        self.check(v)?;
        let mut g = self.clone();
        if outcome {
            g.loops ^= self.adj.row(v);
        }
        let n = self.n();
        let mut rows: Vec<BitVector> = Vec::with_capacity(n - 1);
        for u in (0..n).filter(|&u| u != v) {
            let mut row = g.adj.row(u).clone();
            row.remove(v);
            rows.push(row);
        }
        g.loops.remove(v);
        g.adj = BitMatrix::from_rows(n - 1, rows).expect("uniform rows");
        Ok(g)
    }

    /// Induced subgraph on the surviving vertices after dropping `v`, with
    /// no residue; the ideal result of a corrected deletion.
    pub fn without_vertex(&self, v: usize) -> Result<Graph, GraphError> {
        self.z_delete_rule(v, false)
    }

    /// Disjoint union; vertices of `other` are numbered after those of `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let (n1, n2) = (self.n(), other.n());
        let mut g = Graph::empty(n1 + n2);
        for (u, v) in self.edges() {
            g.toggle_unchecked(u, v);
        }
        for (u, v) in other.edges() {
            g.toggle_unchecked(n1 + u, n1 + v);
        }
        g.loops = self.loops.concat(&other.loops);
        g
    }

    /// Appends an isolated vertex, returning its index.
    pub fn add_vertex(&mut self) -> usize {
        *self = self.disjoint_union(&Graph::empty(1));
        self.n() - 1
    }

    fn check_permutation(&self, perm: &[usize]) -> Result<(), GraphError> {
        if perm.len() != self.n() {
            return Err(GraphError::MalformedPermutation(format!(
                "permutation of length {} on {} vertices",
                perm.len(),
                self.n()
            )));
        }
        let mut seen = vec![false; self.n()];
        for &p in perm {
            if p >= self.n() || std::mem::replace(&mut seen[p], true) {
                return Err(GraphError::MalformedPermutation(format!("{perm:?} is not a bijection")));
            }
        }
        Ok(())
    }

    /// Relabels vertex `i` as `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Graph, GraphError> {
        self.check_permutation(perm)?;
        let mut g = Graph::empty(self.n());
        for (u, v) in self.edges() {
            g.toggle_unchecked(perm[u], perm[v]);
        }
        for v in self.loops.iter_ones() {
            g.loops.set(perm[v], true);
        }
        Ok(g)
    }

    pub fn is_automorphism(&self, perm: &[usize]) -> Result<bool, GraphError> {
        Ok(self.permute(perm)? == *self)
    }

    pub fn degree_parity(&self) -> DegreeParity {
        let odd = (0..self.n()).filter(|&v| self.degree(v) % 2 == 1).count();
        DegreeParity {
            all_even: odd == 0,
            all_odd: odd == self.n(),
            loop_parity: self.loop_count() % 2 == 1,
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Graph(n={}, edges={:?}, loops={:?})",
            self.n(),
            self.edges().collect::<Vec<_>>(),
            self.loops.iter_ones().collect::<Vec<_>>()
        )
    }
}
