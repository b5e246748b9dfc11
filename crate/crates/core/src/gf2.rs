//! Bit-packed linear algebra over GF(2).
//!
//! Vectors pack bits little-endian into `u64` words; bit `i` lives in word
//! `i / 64` at position `i % 64`. Nothing at the operation level depends on
//! that layout. Bits past `len` are always zero, so word-wise equality and
//! popcounts are exact.
//!
//! Besides rank and linear solves, this module evaluates character sums of
//! quadratic forms, `sum_x (-1)^(x^T U x + d.x)`, exactly and in polynomial
//! time. Overlaps between graph states reduce to such sums.

use std::fmt;
use std::ops::{BitOr, BitXor, BitXorAssign};

use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
}

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// A vector of length `len` with ones at the given positions.
    ///
    /// Repeated indices toggle, so `[1, 1]` leaves bit 1 clear.
    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, ones: I) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    /// Vector whose low bits are taken from `value` (bit `i` of `value` is entry `i`).
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= WORD, "from_u64 supports at most 64 bits");
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len == WORD { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = value & mask;
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The packed words, least significant bit first.
    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Mod-2 inner product.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "dot of unequal lengths");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    /// Bitwise AND, as a new vector.
    pub fn and(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.len, other.len, "and of unequal lengths");
        BitVector {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD + t)
                }
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn push(&mut self, value: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        self.len += 1;
        if value {
            self.set(self.len - 1, true);
        }
    }

    /// Removes entry `i`, shifting higher entries down by one.
    pub fn remove(&mut self, i: usize) -> bool {
        let old = self.get(i);
        let mut out = BitVector::zeros(self.len - 1);
        for j in self.iter_ones() {
            if j < i {
                out.set(j, true);
            } else if j > i {
                out.set(j - 1, true);
            }
        }
        *self = out;
        old
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        for j in self.iter_ones() {
            out.set(j, true);
        }
        for j in other.iter_ones() {
            out.set(self.len + j, true);
        }
        out
    }

    /// Entries `start..end` as a new vector.
    pub fn slice(&self, start: usize, end: usize) -> BitVector {
        assert!(start <= end && end <= self.len);
        BitVector::from_indices(
            end - start,
            self.iter_ones().filter(|&j| j >= start && j < end).map(|j| j - start),
        )
    }

    pub fn to_bools(&self) -> Vec<bool> {
        self.iter().collect()
    }
}

impl BitXorAssign<&BitVector> for BitVector {
    fn bitxor_assign(&mut self, rhs: &BitVector) {
        assert_eq!(self.len, rhs.len, "xor of unequal lengths");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor for &BitVector {
    type Output = BitVector;
    fn bitxor(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl BitOr for &BitVector {
    type Output = BitVector;
    fn bitor(self, rhs: &BitVector) -> BitVector {
        assert_eq!(self.len, rhs.len, "or of unequal lengths");
        BitVector {
            len: self.len,
            words: self.words.iter().zip(&rhs.words).map(|(a, b)| a | b).collect(),
        }
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        write!(f, ")")
    }
}

/// A dense matrix over GF(2), stored as one [`BitVector`] per row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows, which must share one length. `cols` is
    /// needed to describe a matrix with no rows.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self, Gf2Error> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Gf2Error::Shape(format!(
                "row of length {} in a matrix with {cols} columns",
                r.len()
            )));
        }
        Ok(BitMatrix { cols, rows })
    }

    pub fn from_bools(rows: &[Vec<bool>]) -> Result<Self, Gf2Error> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(cols, rows.iter().map(|r| BitVector::from_bools(r)).collect())
    }

    /// Like [`BitMatrix::from_rows`], but also requires a square symmetric matrix.
    pub fn symmetric(rows: Vec<BitVector>) -> Result<Self, Gf2Error> {
        let n = rows.len();
        let m = Self::from_rows(n, rows)?;
        if !m.is_symmetric() {
            return Err(Gf2Error::Shape("matrix is not symmetric".into()));
        }
        Ok(m)
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.rows[r].flip(c)
    }

    pub fn row(&self, r: usize) -> &BitVector {
        &self.rows[r]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut BitVector {
        &mut self.rows[r]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_indices(
            self.nrows(),
            self.rows.iter().enumerate().filter(|(_, r)| r.get(c)).map(|(i, _)| i),
        )
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    /// `M x` over GF(2).
    pub fn mul_vec(&self, x: &BitVector) -> BitVector {
        assert_eq!(x.len(), self.cols, "mul_vec shape mismatch");
        BitVector::from_indices(
            self.nrows(),
            self.rows.iter().enumerate().filter(|(_, r)| r.dot(x)).map(|(i, _)| i),
        )
    }

    pub fn is_symmetric(&self) -> bool {
        self.nrows() == self.cols && (0..self.cols).all(|i| self.rows[i].iter_ones().all(|j| self.rows[j].get(i)))
    }

    pub fn push_row(&mut self, row: BitVector) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.rows.push(row);
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.nrows(), self.cols)?;
        for r in &self.rows {
            write!(f, "  ")?;
            for b in r.iter() {
                f.write_str(if b { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Reduces `rows` in place to reduced row echelon form, returning the pivot
/// column of each of the first `rank` rows (which are moved to the front).
/// Only columns `0..ncols` are used to choose pivots.
fn row_reduce(rows: &mut [BitVector], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        if next == rows.len() {
            break;
        }
        let Some(p) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(next, p);
        let (head, tail) = rows.split_at_mut(next + 1);
        let (above, pivot) = head.split_at_mut(next);
        let pivot_row = &pivot[0];
        for r in above.iter_mut().chain(tail.iter_mut()) {
            if r.get(col) {
                *r ^= pivot_row;
            }
        }
        pivots.push(col);
        next += 1;
    }
    pivots
}

/// GF(2) row rank of `m`.
pub fn rank(m: &BitMatrix) -> usize {
    let mut rows = m.rows.clone();
    row_reduce(&mut rows, m.cols).len()
}

/// Solves `A x = b` over GF(2).
///
/// Returns `None` when the system is inconsistent. Free variables are set
/// to zero, so the answer is the unique solution whenever `rank(A)` equals
/// the column count.
pub fn solve(a: &BitMatrix, b: &BitVector) -> Option<BitVector> {
    assert_eq!(
        a.nrows(),
        b.len(),
        "solve: A has {} rows but b has length {}",
        a.nrows(),
        b.len()
    );
    let n = a.cols;
    let mut rows: Vec<BitVector> = a
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut aug = r.clone();
            aug.push(b.get(i));
            aug
        })
        .collect();
    let pivots = row_reduce(&mut rows, n);
    if rows[pivots.len()..].iter().any(|r| r.get(n)) {
        return None;
    }
    let mut x = BitVector::zeros(n);
    for (r, &col) in pivots.iter().enumerate() {
        if rows[r].get(n) {
            x.set(col, true);
        }
    }
    Some(x)
}

/// Basis of the left kernel `{c : c^T M = 0}`, one vector of length
/// `M.nrows()` per basis element.
pub fn left_kernel(m: &BitMatrix) -> Vec<BitVector> {
    let r = m.nrows();
    let mut rows: Vec<BitVector> = m
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| row.concat(&BitVector::from_indices(r, [i])))
        .collect();
    let rank = row_reduce(&mut rows, m.cols).len();
    rows[rank..].iter().map(|row| row.slice(m.cols, m.cols + r)).collect()
}

/// Exact value of a character sum `sum_x (-1)^Q(x)`: zero or `±2^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CharSum {
    Zero,
    Signed { negative: bool, exponent: u32 },
}

impl CharSum {
    pub fn is_zero(&self) -> bool {
        matches!(self, CharSum::Zero)
    }

    /// The value as an integer, when it fits.
    pub fn to_i128(&self) -> Option<i128> {
        match *self {
            CharSum::Zero => Some(0),
            CharSum::Signed { negative, exponent } if exponent < 127 => {
                let m = 1i128 << exponent;
                Some(if negative { -m } else { m })
            }
            CharSum::Signed { .. } => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match *self {
            CharSum::Zero => 0.0,
            CharSum::Signed { negative, exponent } => {
                let m = 2f64.powi(exponent as i32);
                if negative {
                    -m
                } else {
                    m
                }
            }
        }
    }
}

/// Evaluates `sum over x in F_2^n of (-1)^(x^T U x + d.x)`.
///
/// `U` must be square, strictly upper triangular, and match `d` in
/// dimension. Variables are eliminated one or two at a time: summing out a
/// variable `x_k` whose coefficient is the affine form `L` leaves `2 [L = 0]`,
/// and the constraint `L = 0` is then substituted away. Runs in `O(n^3 / 64)`.
pub fn quad_char_sum(u: &BitMatrix, d: &BitVector) -> Result<CharSum, Gf2Error> {
    let n = d.len();
    if u.nrows() != n || u.ncols() != n {
        return Err(Gf2Error::Shape(format!(
            "form matrix is {}x{} but linear part has length {n}",
            u.nrows(),
            u.ncols()
        )));
    }
    for i in 0..n {
        if u.row(i).iter_ones().any(|j| j <= i) {
            return Err(Gf2Error::Shape(format!(
                "form matrix has an entry on or below the diagonal in row {i}"
            )));
        }
    }

    // Symmetric coupling matrix with zero diagonal: x^T U x = sum_{i<j} c_ij x_i x_j.
    let mut coupling: Vec<BitVector> = vec![BitVector::zeros(n); n];
    for i in 0..n {
        for j in u.row(i).iter_ones() {
            coupling[i].set(j, true);
            coupling[j].set(i, true);
        }
    }
    let mut linear = d.clone();
    let mut constant = false;
    let mut exponent = 0u32;
    let mut active: Vec<usize> = (0..n).collect();

    let clear = |coupling: &mut Vec<BitVector>, v: usize| {
        let row = std::mem::replace(&mut coupling[v], BitVector::zeros(n));
        for i in row.iter_ones() {
            coupling[i].set(v, false);
        }
        row
    };

    while let Some(k) = active.pop() {
        let lk = clear(&mut coupling, k);
        let dk = linear.get(k);
        linear.set(k, false);
        exponent += 1;
        let Some(m) = lk.first_one() else {
            if dk {
                return Ok(CharSum::Zero);
            }
            continue;
        };
        // On the surviving half x_m = dk + a.x.
        let mut a = lk;
        a.set(m, false);
        let c = clear(&mut coupling, m);
        let dm = linear.get(m);
        linear.set(m, false);
        active.retain(|&v| v != m);

        // x_m (dm + c.x) becomes (dk + a.x)(dm + c.x).
        constant ^= dk & dm;
        if dk {
            linear ^= &c;
        }
        if dm {
            linear ^= &a;
        }
        linear ^= &a.and(&c);
        for i in a.iter_ones() {
            coupling[i] ^= &c;
        }
        for i in c.iter_ones() {
            coupling[i] ^= &a;
        }
    }
    Ok(CharSum::Signed {
        negative: constant,
        exponent,
    })
}
