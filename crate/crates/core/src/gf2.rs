//! Bit-packed dense linear algebra over GF(2).
//!
//! Vectors pack 64 coordinates per word with the tail bits of the last word
//! kept at zero. Matrices are row-major lists of vectors; every elimination
//! runs on a copy so inputs are never mutated.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitXor, BitXorAssign};
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A vector in GF(2)^len.
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

    pub fn ones(len: usize) -> Self {
        let mut v = BitVector {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        v.clear_tail();
        v
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for bit in bits {
            if len % WORD_BITS == 0 {
                words.push(0);
            }
            if bit {
                words[len / WORD_BITS] |= 1 << (len % WORD_BITS);
            }
            len += 1;
        }
        BitVector { len, words }
    }

    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    /// Low `len` bits of `bits`, bit `i` becoming coordinate `i`.
    pub fn from_u64(len: usize, bits: u64) -> Self {
        assert!(len <= WORD_BITS);
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = bits;
            v.clear_tail();
        }
        v
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = BitVector {
            len,
            words: (0..words_for(len)).map(|_| rng.gen()).collect(),
        };
        v.clear_tail();
        v
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Hamming distance; lengths must agree.
    pub fn distance(&self, other: &BitVector) -> usize {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len);
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    pub fn and(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.len, other.len);
        BitVector {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of the set coordinates, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (wi, &word) in self.words.iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let bit = w.trailing_zeros() as usize;
                out.push(wi * WORD_BITS + bit);
                w &= w - 1;
            }
        }
        out
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    /// Sub-vector on the listed coordinates, in the listed order.
    pub fn restrict(&self, coords: &[usize]) -> BitVector {
        BitVector::from_bools(coords.iter().map(|&i| self.get(i)))
    }

    /// Lexicographic order of the bit strings, coordinate 0 first and 0 < 1.
    pub fn lex_cmp(&self, other: &BitVector) -> Ordering {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let bit = diff.trailing_zeros();
                return if (a >> bit) & 1 == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        Ordering::Equal
    }

    pub fn concat(&self, other: &BitVector) -> BitVector {
        BitVector::from_bools(self.iter().chain(other.iter()))
    }
}

impl BitXorAssign<&BitVector> for BitVector {
    #[inline]
    fn bitxor_assign(&mut self, rhs: &BitVector) {
        assert_eq!(self.len, rhs.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor<&BitVector> for &BitVector {
    type Output = BitVector;
    fn bitxor(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() || c == '_' => {}
                c => return Err(Error::parse(1, format!("unexpected character {c:?} in bit string"))),
            }
        }
        Ok(BitVector::from_bools(bits))
    }
}

/// Dense row-major matrix over GF(2).
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

    pub fn empty(cols: usize) -> Self {
        BitMatrix { cols, rows: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix {
            cols: n,
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        }
    }

    pub fn from_rows(rows: Vec<BitVector>, cols: usize) -> Result<Self> {
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::Shape(format!(
                "row {i} has length {} but the matrix has {cols} columns",
                r.len()
            )));
        }
        Ok(BitMatrix { cols, rows })
    }

    /// Parses rows written as bit strings, e.g. `["110", "011"]`.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let parsed: Vec<BitVector> = rows.iter().map(|r| r.parse()).collect::<Result<_>>()?;
        let cols = parsed.first().map_or(0, BitVector::len);
        Self::from_rows(parsed, cols)
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        BitMatrix {
            cols,
            rows: (0..rows).map(|_| BitVector::random(cols, rng)).collect(),
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::Shape(format!(
                "cannot push a row of length {} onto a matrix with {} columns",
                row.len(),
                self.cols
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.support() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// GF(2) product `self · other`.
    pub fn mat_mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.num_rows() {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.num_rows(),
                self.cols,
                other.num_rows(),
                other.cols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVector::zeros(other.cols);
                for k in row.support() {
                    acc ^= &other.rows[k];
                }
                acc
            })
            .collect();
        Ok(BitMatrix { cols: other.cols, rows })
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} against a matrix with {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(BitVector::from_bools(self.rows.iter().map(|r| r.dot(v))))
    }

    /// `coeffs · self`: the combination of rows selected by `coeffs`.
    pub fn combine_rows(&self, coeffs: &BitVector) -> Result<BitVector> {
        if coeffs.len() != self.rows.len() {
            return Err(Error::Shape(format!(
                "{} coefficients for {} rows",
                coeffs.len(),
                self.rows.len()
            )));
        }
        let mut acc = BitVector::zeros(self.cols);
        for i in coeffs.support() {
            acc ^= &self.rows[i];
        }
        Ok(acc)
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::Shape(format!(
                "cannot stack matrices with {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(BitMatrix { cols: self.cols, rows })
    }

    pub fn select_columns(&self, cols: &[usize]) -> BitMatrix {
        BitMatrix {
            cols: cols.len(),
            rows: self.rows.iter().map(|r| r.restrict(cols)).collect(),
        }
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.rows.iter().map(BitVector::weight).collect()
    }

    pub fn column_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for row in &self.rows {
            for j in row.support() {
                w[j] += 1;
            }
        }
        w
    }

    pub fn echelon(&self) -> RowEchelon {
        RowEchelon::new(self, false)
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Rank together with a basis of the right kernel `{v : self · v = 0}`.
    pub fn rank_and_nullspace(&self) -> (usize, Vec<BitVector>) {
        let ech = self.echelon();
        (ech.rank(), ech.nullspace())
    }

    pub fn nullspace_matrix(&self) -> BitMatrix {
        BitMatrix {
            cols: self.cols,
            rows: self.echelon().nullspace(),
        }
    }

    /// Coefficients `c` with `c · self = v`, or `None` when `v` is outside the row space.
    pub fn solve_membership(&self, v: &BitVector) -> Result<Option<BitVector>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} against a matrix with {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(RowEchelon::new(self, true).solve(v))
    }

    /// Reduced basis of the row space (nonzero RREF rows).
    pub fn row_basis(&self) -> BitMatrix {
        BitMatrix {
            cols: self.cols,
            rows: self.echelon().rows,
        }
    }

    /// True when both matrices span the same row space.
    pub fn same_row_space(&self, other: &BitMatrix) -> bool {
        self.cols == other.cols && self.row_basis() == other.row_basis()
    }

    /// Text form: `rows cols` then one line of `0`/`1` per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.num_rows(), self.cols);
        for r in &self.rows {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the text form. `first_line` is the 1-based line number of the
    /// `rows cols` header within the enclosing file, for error messages.
    pub fn parse_text_at(text: &str, first_line: usize) -> Result<BitMatrix> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + first_line, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(first_line, "missing `rows cols` header"))?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        let (rows, cols) = match dims.as_slice() {
            [r, c] => (
                r.parse::<usize>()
                    .map_err(|e| Error::parse(hline, format!("bad row count: {e}")))?,
                c.parse::<usize>()
                    .map_err(|e| Error::parse(hline, format!("bad column count: {e}")))?,
            ),
            _ => return Err(Error::parse(hline, "expected `rows cols`")),
        };
        let mut m = BitMatrix::empty(cols);
        for (lineno, line) in lines {
            if m.num_rows() == rows {
                return Err(Error::parse(lineno, format!("more than {rows} rows")));
            }
            let v: BitVector = line.parse().map_err(|e| match e {
                Error::Parse { message, .. } => Error::parse(lineno, message),
                other => other,
            })?;
            if v.len() != cols {
                return Err(Error::parse(
                    lineno,
                    format!("row has {} entries, expected {cols}", v.len()),
                ));
            }
            m.rows.push(v);
        }
        if m.num_rows() != rows {
            return Err(Error::parse(
                hline,
                format!("header declares {rows} rows but {} were given", m.num_rows()),
            ));
        }
        Ok(m)
    }
}

impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BitMatrix::parse_text_at(s, 1)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.num_rows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form of a copy of a matrix.
///
/// When built with tracking, `combos[i]` records which original rows sum to
/// `rows[i]`, which is what membership solving needs.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    cols: usize,
    rows: Vec<BitVector>,
    pivots: Vec<usize>,
    combos: Option<Vec<BitVector>>,
    n_orig: usize,
}

impl RowEchelon {
    fn new(m: &BitMatrix, track: bool) -> Self {
        let mut rows = m.rows.clone();
        let n_rows = rows.len();
        let mut combos: Option<Vec<BitVector>> =
            track.then(|| (0..n_rows).map(|i| BitVector::unit(n_rows, i)).collect());
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..m.cols {
            if next == n_rows {
                break;
            }
            let Some(p) = (next..n_rows).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(next, p);
            if let Some(c) = combos.as_mut() {
                c.swap(next, p);
            }
            let pivot_row = rows[next].clone();
            let pivot_combo = combos.as_ref().map(|c| c[next].clone());
            for r in (0..n_rows).filter(|&r| r != next) {
                if rows[r].get(col) {
                    rows[r] ^= &pivot_row;
                    if let (Some(c), Some(pc)) = (combos.as_mut(), pivot_combo.as_ref()) {
                        c[r] ^= pc;
                    }
                }
            }
            pivots.push(col);
            next += 1;
        }
        rows.truncate(next);
        if let Some(c) = combos.as_mut() {
            c.truncate(next);
        }
        RowEchelon {
            cols: m.cols,
            rows,
            pivots,
            combos,
            n_orig: n_rows,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn nullspace(&self) -> Vec<BitVector> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVector::unit(self.cols, free);
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if row.get(free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Reduces `v` against the pivots; zero residue means membership.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut r = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r.get(p) {
                r ^= row;
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    fn solve(&self, v: &BitVector) -> Option<BitVector> {
        let combos = self.combos.as_ref().expect("solve requires a tracked echelon form");
        let mut residue = v.clone();
        let mut coeffs = BitVector::zeros(self.n_orig);
        for ((row, &p), combo) in self.rows.iter().zip(&self.pivots).zip(combos) {
            if residue.get(p) {
                residue ^= row;
                coeffs ^= combo;
            }
        }
        residue.is_zero().then_some(coeffs)
    }
}

/// Row space grown one vector at a time, kept in reduced form.
#[derive(Clone, Debug)]
pub struct IncrementalBasis {
    cols: usize,
    rows: Vec<BitVector>,
    pivots: Vec<usize>,
}

impl IncrementalBasis {
    pub fn new(cols: usize) -> Self {
        IncrementalBasis {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut r = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r.get(p) {
                r ^= row;
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns false when it was already there.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        assert_eq!(v.len(), self.cols);
        let r = self.reduce(v);
        let Some(p) = r.first_one() else {
            return false;
        };
        for row in &mut self.rows {
            if row.get(p) {
                *row ^= &r;
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }
}

/// Key ordering coefficient vectors lexicographically (coefficient 0 most significant).
#[inline]
pub(crate) fn lex_key(mask: u64, k: usize) -> u64 {
    if k == 0 {
        0
    } else {
        mask.reverse_bits() >> (64 - k)
    }
}

/// Visits every vector in the span of `rows` exactly once, in Gray-code order,
/// passing the coefficient mask (bit `i` selects row `i`) and the combination.
///
/// Work is split by the high coefficient bits and run in parallel; `identity`,
/// `fold` and `reduce` combine per-chunk results in chunk order, so the output
/// does not depend on scheduling.
pub(crate) fn fold_span<T, F, R>(rows: &[BitVector], cols: usize, identity: impl Fn() -> T + Sync, fold: F, reduce: R) -> T
where
    T: Send,
    F: Fn(&mut T, u64, &BitVector) + Sync,
    R: Fn(T, T) -> T + Sync,
{
    let k = rows.len();
    assert!(k < 64, "span enumeration limited to fewer than 64 generators");
    let low = k.min(16);
    let high = k - low;
    let chunks: u64 = 1 << high;
    let run_chunk = |h: u64| {
        let mut acc = identity();
        let mut v = BitVector::zeros(cols);
        for j in 0..high {
            if (h >> j) & 1 == 1 {
                v ^= &rows[low + j];
            }
        }
        let base = h << low;
        let mut mask = base;
        fold(&mut acc, mask, &v);
        for step in 1u64..(1u64 << low) {
            let bit = step.trailing_zeros() as usize;
            v ^= &rows[bit];
            mask ^= 1 << bit;
            fold(&mut acc, mask, &v);
        }
        acc
    };
    if chunks == 1 {
        run_chunk(0)
    } else {
        let parts: Vec<T> = (0..chunks).into_par_iter().map(run_chunk).collect();
        parts.into_iter().reduce(&reduce).unwrap_or_else(&identity)
    }
}
