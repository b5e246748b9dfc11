//! Stabilizer states as generator tableaux.
//!
//! A state on `n` qubits is stored as `n` commuting, independent Pauli
//! strings (the generators of its stabilizer group), each with a sign. Gates
//! act by Heisenberg conjugation `P -> U P U†` on every generator; the
//! destabilizer half of the usual Aaronson–Gottesman tableau is not kept.
//! Measurement, group membership and inner products are answered with GF(2)
//! eliminations over the generator rows instead.
//!
//! Pauli strings use the Hermitian labelling `(x, z) = (1, 0) -> X`,
//! `(0, 1) -> Z`, `(1, 1) -> Y`, so `Y = iXZ`. Products track the phase as a
//! power of `i` mod 4; only `±1` ever surfaces from a valid group.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::gf2::{self, BitMatrix, BitVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableauError {
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("invalid operands: {0}")]
    InvalidOperands(String),
    #[error("size mismatch: {0} vs {1} qubits")]
    SizeMismatch(usize, usize),
    #[error("qubit {qubit} is not in a {pauli} eigenstate")]
    NotProduct { qubit: usize, pauli: Pauli },
    #[error("malformed Pauli string: {0}")]
    Parse(String),
}

/// Single-qubit Pauli operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::I => "I",
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        };
        f.write_str(c)
    }
}

/// An eigenvalue `±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_negative(negative: bool) -> Sign {
        if negative {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Minus
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// Measurement bit: `+1 -> 0`, `-1 -> 1`.
    pub fn bit(self) -> bool {
        self.is_negative()
    }

    pub fn times(self, other: Sign) -> Sign {
        Sign::from_negative(self.is_negative() ^ other.is_negative())
    }
}

/// A signed `n`-qubit Pauli string.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: BitVector,
    z: BitVector,
    /// Power of `i` multiplying the string; 0 or 2 for Hermitian strings.
    phase: u8,
}

/// Power of `i` produced when multiplying the unsigned strings `a * b`.
fn product_phase(ax: &BitVector, az: &BitVector, bx: &BitVector, bz: &BitVector) -> u8 {
    let mut plus = 0u32;
    let mut minus = 0u32;
    for k in 0..ax.words().len() {
        let (x1, z1, x2, z2) = (ax.words()[k], az.words()[k], bx.words()[k], bz.words()[k]);
        let (a_x, a_y, a_z) = (x1 & !z1, x1 & z1, !x1 & z1);
        let (b_x, b_y, b_z) = (x2 & !z2, x2 & z2, !x2 & z2);
        // XY = iZ, YZ = iX, ZX = iY and the reverses carry -i.
        plus += ((a_x & b_y) | (a_y & b_z) | (a_z & b_x)).count_ones();
        minus += ((a_x & b_z) | (a_y & b_x) | (a_z & b_y)).count_ones();
    }
    ((plus + 3 * minus) % 4) as u8
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            x: BitVector::zeros(n),
            z: BitVector::zeros(n),
            phase: 0,
        }
    }

    /// `pauli` on `qubit`, identity elsewhere, sign `+`.
    pub fn single(n: usize, qubit: usize, pauli: Pauli) -> Self {
        let mut p = Self::identity(n);
        p.set(qubit, pauli);
        p
    }

    /// Product of `pauli` over the given qubits.
    pub fn uniform<I: IntoIterator<Item = usize>>(n: usize, qubits: I, pauli: Pauli) -> Self {
        let mut p = Self::identity(n);
        for q in qubits {
            p.set(q, pauli);
        }
        p
    }

    pub fn from_bits(x: BitVector, z: BitVector, sign: Sign) -> Self {
        assert_eq!(x.len(), z.len(), "x and z parts differ in length");
        PauliString {
            x,
            z,
            phase: if sign.is_negative() { 2 } else { 0 },
        }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &BitVector {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVector {
        &self.z
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        Pauli::from_bits(self.x.get(qubit), self.z.get(qubit))
    }

    pub fn set(&mut self, qubit: usize, pauli: Pauli) {
        let (x, z) = pauli.bits();
        self.x.set(qubit, x);
        self.z.set(qubit, z);
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    /// The sign of a Hermitian string.
    pub fn sign(&self) -> Sign {
        assert!(self.is_hermitian(), "sign of a non-Hermitian Pauli string");
        Sign::from_negative(self.phase == 2)
    }

    pub fn with_sign(mut self, sign: Sign) -> Self {
        self.phase = if sign.is_negative() { 2 } else { 0 };
        self
    }

    pub fn negated(mut self) -> Self {
        self.phase = (self.phase + 2) % 4;
        self
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn weight(&self) -> usize {
        (&self.x | &self.z).count_ones()
    }

    /// Same operator up to sign.
    pub fn same_support(&self, other: &PauliString) -> bool {
        self.x == other.x && self.z == other.z
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        !(self.x.dot(&other.z) ^ self.z.dot(&other.x))
    }

    /// `self <- self * rhs`, tracking the phase.
    pub fn mul_assign(&mut self, rhs: &PauliString) {
        let extra = product_phase(&self.x, &self.z, &rhs.x, &rhs.z);
        self.phase = (self.phase + rhs.phase + extra) % 4;
        self.x ^= &rhs.x;
        self.z ^= &rhs.z;
    }

    /// `(x | z)` as one vector of length `2n`.
    pub fn symplectic(&self) -> BitVector {
        self.x.concat(&self.z)
    }

    fn push_qubit(&mut self, pauli: Pauli) {
        let (x, z) = pauli.bits();
        self.x.push(x);
        self.z.push(z);
    }

    fn remove_qubit(&mut self, qubit: usize) {
        self.x.remove(qubit);
        self.z.remove(qubit);
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for q in 0..self.n() {
            write!(f, "{}", self.get(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

/// Parses strings like `+XZI`, `-YY` or `XX` (qubit 0 first).
impl FromStr for PauliString {
    type Err = TableauError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (sign, body) = match s.as_bytes().first() {
            Some(b'+') => (Sign::Plus, &s[1..]),
            Some(b'-') => (Sign::Minus, &s[1..]),
            _ => (Sign::Plus, s),
        };
        let mut p = PauliString::identity(body.len());
        for (q, c) in body.chars().enumerate() {
            let pauli = match c {
                'I' | '_' | '.' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => return Err(TableauError::Parse(format!("unexpected {other:?} in {s:?}"))),
            };
            p.set(q, pauli);
        }
        Ok(p.with_sign(sign))
    }
}

/// The Clifford gates the tableau understands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    X(usize),
    Y(usize),
    Z(usize),
    /// `CZ(a, a)` is treated as `Z(a)`.
    CZ(usize, usize),
    /// Control first, target second.
    CNOT(usize, usize),
    /// `sqrt(-iX) = (I - iX)/sqrt(2)`: `Z -> -Y`, `Y -> Z`, `X -> X`.
    SqrtMinusIX(usize),
    /// `sqrt(iZ) = (I + iZ)/sqrt(2)`: `X -> -Y`, `Y -> X`, `Z -> Z`.
    SqrtIZ(usize),
}

impl Gate {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) | Gate::SqrtMinusIX(q) | Gate::SqrtIZ(q) => {
                (q, None)
            }
            Gate::CZ(a, b) | Gate::CNOT(a, b) => (a, Some(b)),
        }
    }

    /// Number of qubits the gate touches after `CZ(a, a)` routing.
    pub fn arity(&self) -> usize {
        match *self {
            Gate::CZ(a, b) | Gate::CNOT(a, b) if a != b => 2,
            _ => 1,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.arity() == 2
    }
}

/// Outcome of [`Tableau::measure_pauli`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measurement {
    pub outcome: Sign,
    pub deterministic: bool,
}

/// Whether a Pauli string belongs to a stabilizer group, and with which sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Plus,
    Minus,
    No,
}

/// Generators in reduced row echelon form over the `(x | z)` columns, with
/// products carried out on the Pauli strings so signs stay exact.
#[derive(Clone, Debug)]
pub struct StabilizerBasis {
    n: usize,
    rows: Vec<PauliString>,
    pivots: Vec<usize>,
}

impl StabilizerBasis {
    pub fn new(generators: &[PauliString], n: usize) -> Self {
        let mut rows = generators.to_vec();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..2 * n {
            if next == rows.len() {
                break;
            }
            let bit = |p: &PauliString| if col < n { p.x.get(col) } else { p.z.get(col - n) };
            let Some(p) = (next..rows.len()).find(|&r| bit(&rows[r])) else {
                continue;
            };
            rows.swap(next, p);
            let pivot = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && bit(row) {
                    row.mul_assign(&pivot);
                }
            }
            pivots.push(col);
            next += 1;
        }
        rows.truncate(next);
        StabilizerBasis { n, rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The group element with the same `(x | z)` bits as `p`, if any.
    pub fn decompose(&self, p: &PauliString) -> Option<PauliString> {
        let n = self.n;
        let mut residual = p.clone().with_sign(Sign::Plus);
        let mut acc = PauliString::identity(n);
        for (row, &col) in self.rows.iter().zip(&self.pivots) {
            let hit = if col < n {
                residual.x.get(col)
            } else {
                residual.z.get(col - n)
            };
            if hit {
                residual.x ^= &row.x;
                residual.z ^= &row.z;
                acc.mul_assign(row);
            }
        }
        residual.is_identity().then_some(acc)
    }

    pub fn membership(&self, p: &PauliString) -> Membership {
        match self.decompose(p) {
            None => Membership::No,
            Some(elem) if elem.sign() == p.sign() => Membership::Plus,
            Some(_) => Membership::Minus,
        }
    }
}

/// A stabilizer state with its own seeded random stream.
#[derive(Clone, Debug)]
pub struct Tableau {
    n: usize,
    generators: Vec<PauliString>,
    rng: ChaCha8Rng,
}

impl PartialEq for Tableau {
    /// Same qubit count and same generator list (not merely the same state).
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.generators == other.generators
    }
}

impl Tableau {
    /// `|+>^n`: generators `+X_i`.
    pub fn new_plus(n: usize, seed: u64) -> Self {
        Tableau {
            n,
            generators: (0..n).map(|q| PauliString::single(n, q, Pauli::X)).collect(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// `|0>^n`: generators `+Z_i`.
    pub fn new_zero(n: usize, seed: u64) -> Self {
        Tableau {
            n,
            generators: (0..n).map(|q| PauliString::single(n, q, Pauli::Z)).collect(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Builds a tableau from explicit generators, checking that they
    /// commute, are independent and carry real signs.
    pub fn from_generators(generators: Vec<PauliString>, seed: u64) -> Result<Self, TableauError> {
        let n = generators.len();
        if let Some(g) = generators.iter().find(|g| g.n() != n) {
            return Err(TableauError::SizeMismatch(g.n(), n));
        }
        let t = Tableau {
            n,
            generators,
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        if !t.is_valid() {
            return Err(TableauError::InvalidOperands(
                "generators must commute, be independent and Hermitian".into(),
            ));
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    /// Mutable access for tests that inject faults.
    pub fn generators_mut(&mut self) -> &mut [PauliString] {
        &mut self.generators
    }

    pub fn rng_mut(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn reseed(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
    }

    /// Generators pairwise commute, are Hermitian and independent.
    pub fn is_valid(&self) -> bool {
        let g = &self.generators;
        let commuting = (0..g.len()).all(|i| (i + 1..g.len()).all(|j| g[i].commutes_with(&g[j])));
        let hermitian = g.iter().all(PauliString::is_hermitian);
        let stacked = BitMatrix::from_rows(2 * self.n, g.iter().map(PauliString::symplectic).collect())
            .expect("generator lengths are uniform");
        commuting && hermitian && gf2::rank(&stacked) == self.n
    }

    fn check(&self, q: usize) -> Result<(), TableauError> {
        if q >= self.n {
            Err(TableauError::QubitOutOfRange { qubit: q, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Conjugates every generator by `gate`.
    pub fn apply_gate(&mut self, gate: Gate) -> Result<(), TableauError> {
        let (a, b) = gate.qubits();
        self.check(a)?;
        if let Some(b) = b {
            self.check(b)?;
        }
        match gate {
            Gate::CZ(a, b) if a == b => return self.apply_gate(Gate::Z(a)),
            Gate::CNOT(a, b) if a == b => {
                return Err(TableauError::InvalidOperands(format!(
                    "CNOT needs distinct qubits, got {a}"
                )))
            }
            _ => {}
        }
        for g in &mut self.generators {
            conjugate(g, gate);
        }
        Ok(())
    }

    pub fn apply_gates<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<(), TableauError> {
        gates.into_iter().try_for_each(|g| self.apply_gate(g))
    }

    pub fn basis(&self) -> StabilizerBasis {
        StabilizerBasis::new(&self.generators, self.n)
    }

    /// Whether `p` (with its sign) is in the stabilizer group, its negation
    /// is, or neither.
    pub fn contains_stabilizer(&self, p: &PauliString) -> Result<Membership, TableauError> {
        if p.n() != self.n {
            return Err(TableauError::SizeMismatch(p.n(), self.n));
        }
        Ok(self.basis().membership(p))
    }

    /// Measures `p` using the tableau's own random stream.
    pub fn measure_pauli(&mut self, p: &PauliString) -> Result<Measurement, TableauError> {
        let mut rng = std::mem::replace(&mut self.rng, ChaCha8Rng::seed_from_u64(0));
        let out = self.measure_pauli_with(p, &mut rng);
        self.rng = rng;
        out
    }

    /// Measures the Hermitian observable `p`, drawing any random outcome
    /// from `rng`.
    pub fn measure_pauli_with<R: Rng + ?Sized>(
        &mut self,
        p: &PauliString,
        rng: &mut R,
    ) -> Result<Measurement, TableauError> {
        if p.n() != self.n {
            return Err(TableauError::SizeMismatch(p.n(), self.n));
        }
        if !p.is_hermitian() || p.is_identity() {
            return Err(TableauError::InvalidOperands(format!("cannot measure {p}")));
        }
        let anti: Vec<usize> = (0..self.n).filter(|&i| !self.generators[i].commutes_with(p)).collect();
        let Some((&pivot, rest)) = anti.split_first() else {
            let outcome = match self.basis().membership(p) {
                Membership::Plus => Sign::Plus,
                Membership::Minus => Sign::Minus,
                Membership::No => unreachable!("a commuting Pauli lies in a maximal stabilizer group"),
            };
            return Ok(Measurement {
                outcome,
                deterministic: true,
            });
        };
        let pivot_row = self.generators[pivot].clone();
        for &i in rest {
            self.generators[i].mul_assign(&pivot_row);
        }
        let outcome = Sign::from_negative(rng.gen::<bool>());
        let signed = p.clone().with_sign(p.sign().times(outcome));
        self.generators[pivot] = signed;
        Ok(Measurement {
            outcome,
            deterministic: false,
        })
    }

    /// Appends a fresh qubit in `|+>` as qubit `n`.
    pub fn push_plus(&mut self) -> usize {
        for g in &mut self.generators {
            g.push_qubit(Pauli::I);
        }
        self.n += 1;
        self.generators.push(PauliString::single(self.n, self.n - 1, Pauli::X));
        self.n - 1
    }

    /// `self ⊗ other`; qubits of `other` follow those of `self`. The random
    /// stream of `self` is kept.
    pub fn tensor(&self, other: &Tableau) -> Tableau {
        let n = self.n + other.n;
        let left_pad = BitVector::zeros(self.n);
        let right_pad = BitVector::zeros(other.n);
        let mut generators = Vec::with_capacity(n);
        for g in &self.generators {
            generators.push(PauliString {
                x: g.x.concat(&right_pad),
                z: g.z.concat(&right_pad),
                phase: g.phase,
            });
        }
        for g in &other.generators {
            generators.push(PauliString {
                x: left_pad.concat(&g.x),
                z: left_pad.concat(&g.z),
                phase: g.phase,
            });
        }
        Tableau {
            n,
            generators,
            rng: self.rng.clone(),
        }
    }

    /// Removes `qubit`, which must be in an eigenstate of `pauli` (that is,
    /// `±pauli_qubit` is in the group). Returns the eigenvalue. Remaining
    /// qubits above `qubit` shift down by one.
    pub fn discard_qubit(&mut self, qubit: usize, pauli: Pauli) -> Result<Sign, TableauError> {
        self.check(qubit)?;
        let single = PauliString::single(self.n, qubit, pauli);
        let sign = match self.contains_stabilizer(&single)? {
            Membership::Plus => Sign::Plus,
            Membership::Minus => Sign::Minus,
            Membership::No => return Err(TableauError::NotProduct { qubit, pauli }),
        };
        // Every generator acts on `qubit` as I or `pauli`; clear all but one.
        let touching: Vec<usize> = (0..self.n)
            .filter(|&i| self.generators[i].get(qubit) != Pauli::I)
            .collect();
        let (&pivot, rest) = touching
            .split_first()
            .expect("the qubit is stabilized by some generator");
        let pivot_row = self.generators[pivot].clone();
        for &i in rest {
            self.generators[i].mul_assign(&pivot_row);
        }
        self.generators.remove(pivot);
        for g in &mut self.generators {
            g.remove_qubit(qubit);
        }
        self.n -= 1;
        Ok(sign)
    }

    /// Relabels qubits: qubit `q` of `self` becomes qubit `perm[q]`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Tableau, TableauError> {
        if perm.len() != self.n {
            return Err(TableauError::SizeMismatch(perm.len(), self.n));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(TableauError::InvalidOperands(format!("{perm:?} is not a permutation")));
            }
        }
        let generators = self
            .generators
            .iter()
            .map(|g| {
                let mut out = PauliString::identity(self.n);
                for (q, &target) in perm.iter().enumerate() {
                    out.set(target, g.get(q));
                }
                out.phase = g.phase;
                out
            })
            .collect();
        Ok(Tableau {
            n: self.n,
            generators,
            rng: self.rng.clone(),
        })
    }

    /// `|<self|other>|^2`, exactly.
    ///
    /// Zero when some Pauli is stabilized with opposite signs by the two
    /// groups, and `2^(k - n)` otherwise, where `k` is the dimension of the
    /// intersection of the groups taken up to sign.
    pub fn inner_product_mag2(&self, other: &Tableau) -> Result<Dyadic, TableauError> {
        if self.n != other.n {
            return Err(TableauError::SizeMismatch(self.n, other.n));
        }
        let n = self.n;
        let stacked = BitMatrix::from_rows(
            2 * n,
            self.generators
                .iter()
                .chain(&other.generators)
                .map(PauliString::symplectic)
                .collect(),
        )
        .expect("uniform lengths");
        let kernel = gf2::left_kernel(&stacked);
        for combo in &kernel {
            let mut left = PauliString::identity(n);
            let mut right = PauliString::identity(n);
            for i in combo.iter_ones() {
                if i < n {
                    left.mul_assign(&self.generators[i]);
                } else {
                    right.mul_assign(&other.generators[i - n]);
                }
            }
            debug_assert!(left.same_support(&right));
            if left.sign() != right.sign() {
                return Ok(Dyadic::ZERO);
            }
        }
        Ok(Dyadic::pow2_neg((n - kernel.len()) as u32))
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.generators {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Heisenberg update of a single Pauli string.
fn conjugate(g: &mut PauliString, gate: Gate) {
    let flip = |g: &mut PauliString, cond: bool| {
        if cond {
            g.phase = (g.phase + 2) % 4;
        }
    };
    match gate {
        Gate::H(q) => {
            let (x, z) = (g.x.get(q), g.z.get(q));
            flip(g, x & z);
            g.x.set(q, z);
            g.z.set(q, x);
        }
        Gate::S(q) => {
            let (x, z) = (g.x.get(q), g.z.get(q));
            flip(g, x & z);
            g.z.set(q, z ^ x);
        }
        Gate::X(q) => {
            let z = g.z.get(q);
            flip(g, z);
        }
        Gate::Y(q) => {
            let (x, z) = (g.x.get(q), g.z.get(q));
            flip(g, x ^ z);
        }
        Gate::Z(q) => {
            let x = g.x.get(q);
            flip(g, x);
        }
        Gate::CZ(a, b) => {
            let (xa, za, xb, zb) = (g.x.get(a), g.z.get(a), g.x.get(b), g.z.get(b));
            flip(g, xa & xb & (za ^ zb));
            g.z.set(a, za ^ xb);
            g.z.set(b, zb ^ xa);
        }
        Gate::CNOT(a, b) => {
            let (xa, za, xb, zb) = (g.x.get(a), g.z.get(a), g.x.get(b), g.z.get(b));
            flip(g, xa & zb & !(xb ^ za));
            g.x.set(b, xb ^ xa);
            g.z.set(a, za ^ zb);
        }
        Gate::SqrtMinusIX(q) => {
            let (x, z) = (g.x.get(q), g.z.get(q));
            flip(g, z & !x);
            g.x.set(q, x ^ z);
        }
        Gate::SqrtIZ(q) => {
            let (x, z) = (g.x.get(q), g.z.get(q));
            flip(g, x & !z);
            g.z.set(q, z ^ x);
        }
    }
}
