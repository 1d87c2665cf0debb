//! Binary linear codes, tensor and dual tensor codes, and grid-shaped words.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::gf2::{fold_span, lex_key, BitMatrix, BitVector, IncrementalBasis};

/// Largest dimension for exhaustive distance computation.
pub const DISTANCE_GUARD: usize = 26;
/// Largest dimension for brute-force nearest-codeword search.
pub const NEAREST_GUARD: usize = 22;

/// A binary linear code with both a generator and a parity-check matrix.
///
/// Both matrices are stored in reduced row echelon form, so two codes are
/// equal as sets exactly when their generators are equal.
#[derive(Clone)]
pub struct LinearCode {
    n: usize,
    generator: BitMatrix,
    parity: BitMatrix,
    distance: OnceLock<usize>,
}

impl LinearCode {
    fn from_parts(n: usize, generator: BitMatrix, parity: BitMatrix) -> Self {
        debug_assert_eq!(generator.num_rows() + parity.num_rows(), n);
        LinearCode {
            n,
            generator,
            parity,
            distance: OnceLock::new(),
        }
    }

    /// Code spanned by the rows of `g`; dependent rows are dropped.
    pub fn from_generator(g: &BitMatrix) -> Result<Self> {
        let n = g.num_cols();
        if n == 0 {
            return Err(Error::Shape("code length must be positive".into()));
        }
        let generator = g.row_basis();
        let parity = generator.nullspace_matrix().row_basis();
        Ok(Self::from_parts(n, generator, parity))
    }

    /// Kernel of `h`.
    pub fn from_parity(h: &BitMatrix) -> Result<Self> {
        let n = h.num_cols();
        if n == 0 {
            return Err(Error::Shape("code length must be positive".into()));
        }
        let parity = h.row_basis();
        let generator = parity.nullspace_matrix().row_basis();
        Ok(Self::from_parts(n, generator, parity))
    }

    pub fn repetition(n: usize) -> Self {
        Self::from_generator(&BitMatrix::from_rows(vec![BitVector::ones(n)], n).unwrap()).unwrap()
    }

    /// The [n, n-1, 2] even-weight code.
    pub fn single_parity(n: usize) -> Self {
        Self::repetition(n).dual()
    }

    pub fn full(n: usize) -> Self {
        Self::from_generator(&BitMatrix::identity(n)).unwrap()
    }

    pub fn zero(n: usize) -> Self {
        Self::from_parity(&BitMatrix::identity(n)).unwrap()
    }

    /// Generator (I₄ | P) with P rows 110, 101, 011, 111.
    pub fn hamming_generator() -> BitMatrix {
        BitMatrix::from_strs(&["1000110", "0100101", "0010011", "0001111"]).unwrap()
    }

    pub fn hamming_7_4() -> Self {
        Self::from_generator(&Self::hamming_generator()).unwrap()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dimension(&self) -> usize {
        self.generator.num_rows()
    }

    pub fn redundancy(&self) -> usize {
        self.parity.num_rows()
    }

    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.n as f64
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn parity(&self) -> &BitMatrix {
        &self.parity
    }

    pub fn dual(&self) -> LinearCode {
        Self::from_parts(self.n, self.parity.clone(), self.generator.clone())
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        assert_eq!(v.len(), self.n, "word length does not match code length");
        self.parity.rows().iter().all(|h| !h.dot(v))
    }

    pub fn syndrome(&self, v: &BitVector) -> BitVector {
        self.parity.mul_vec(v).expect("word length does not match code length")
    }

    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.n == other.n && self.generator == other.generator
    }

    /// Encodes a coefficient vector of length k.
    pub fn encode(&self, coeffs: &BitVector) -> Result<BitVector> {
        self.generator.combine_rows(coeffs)
    }

    /// Minimum weight of a nonzero codeword; the zero code reports `n + 1`.
    pub fn min_distance(&self) -> Result<usize> {
        if let Some(&d) = self.distance.get() {
            return Ok(d);
        }
        let k = self.dimension();
        if k > DISTANCE_GUARD {
            return Err(Error::Capacity {
                guard: "distance-dimension",
                limit: DISTANCE_GUARD,
                actual: k,
                hint: "; use a randomized upper bound instead",
            });
        }
        let d = min_nonzero_weight(self.generator.rows(), self.n).unwrap_or(self.n + 1);
        Ok(*self.distance.get_or_init(|| d))
    }

    pub fn relative_distance(&self) -> Result<f64> {
        Ok(self.min_distance()? as f64 / self.n as f64)
    }

    /// All codewords, in Gray-code order of the generator coefficients.
    pub fn codewords(&self) -> Result<Vec<BitVector>> {
        let k = self.dimension();
        if k > NEAREST_GUARD {
            return Err(Error::capacity("codeword-list-dimension", NEAREST_GUARD, k));
        }
        Ok(fold_span(
            self.generator.rows(),
            self.n,
            Vec::new,
            |acc, _, v| acc.push(v.clone()),
            |mut a, b| {
                a.extend(b);
                a
            },
        ))
    }

    /// Restriction of the code to the coordinates in `keep`, in that order.
    pub fn puncture(&self, keep: &[usize]) -> Result<LinearCode> {
        if keep.is_empty() {
            return Err(Error::Shape("puncturing must keep at least one coordinate".into()));
        }
        if let Some(&bad) = keep.iter().find(|&&i| i >= self.n) {
            return Err(Error::Shape(format!("coordinate {bad} out of range for length {}", self.n)));
        }
        Self::from_generator(&self.generator.select_columns(keep))
    }

    /// A closest codeword to `x` and its distance. Ties go to the codeword
    /// whose coefficient vector (over the stored generator) is smallest in
    /// lexicographic order, coefficient 0 first.
    pub fn nearest_codeword(&self, x: &BitVector) -> Result<(BitVector, usize)> {
        if x.len() != self.n {
            return Err(Error::Shape(format!(
                "word of length {} for a code of length {}",
                x.len(),
                self.n
            )));
        }
        let k = self.dimension();
        if k > NEAREST_GUARD {
            return Err(Error::capacity("nearest-codeword-dimension", NEAREST_GUARD, k));
        }
        if self.contains(x) {
            return Ok((x.clone(), 0));
        }
        let rows = self.generator.rows();
        let best = fold_span(
            rows,
            self.n,
            || (usize::MAX, u64::MAX, 0u64),
            |acc, mask, v| {
                let d = v.distance(x);
                let key = lex_key(mask, k);
                if (d, key) < (acc.0, acc.1) {
                    *acc = (d, key, mask);
                }
            },
            |a, b| if (b.0, b.1) < (a.0, a.1) { b } else { a },
        );
        let coeffs = BitVector::from_bools((0..k).map(|i| (best.2 >> i) & 1 == 1));
        Ok((self.encode(&coeffs)?, best.0))
    }

    pub fn distance_to(&self, x: &BitVector) -> Result<usize> {
        Ok(self.nearest_codeword(x)?.1)
    }

    /// A basis chosen greedily from codewords sorted by weight, then
    /// lexicographically.
    pub fn min_weight_basis(&self) -> Result<BitMatrix> {
        let mut words = self.codewords()?;
        words.retain(|w| !w.is_zero());
        words.sort_by(|a, b| a.weight().cmp(&b.weight()).then_with(|| a.lex_cmp(b)));
        let mut basis = IncrementalBasis::new(self.n);
        let mut rows = Vec::with_capacity(self.dimension());
        for w in words {
            if basis.insert(&w) {
                rows.push(w);
                if rows.len() == self.dimension() {
                    break;
                }
            }
        }
        BitMatrix::from_rows(rows, self.n)
    }

    /// Parses the code file format: a `generator` or `parity` line followed
    /// by a matrix in text form.
    pub fn parse_text(text: &str) -> Result<LinearCode> {
        let mut lines = text.lines().enumerate();
        let (lineno, kind) = loop {
            match lines.next() {
                None => return Err(Error::parse(1, "empty code file")),
                Some((i, l)) => {
                    let t = l.trim();
                    if !t.is_empty() && !t.starts_with('#') {
                        break (i + 1, t.to_ascii_lowercase());
                    }
                }
            }
        };
        let rest: String = text.lines().skip(lineno).map(|l| format!("{l}\n")).collect();
        let m = BitMatrix::parse_text_at(&rest, lineno + 1)?;
        match kind.as_str() {
            "generator" => Self::from_generator(&m),
            "parity" => Self::from_parity(&m),
            other => Err(Error::parse(
                lineno,
                format!("expected `generator` or `parity`, found `{other}`"),
            )),
        }
    }

    pub fn to_text(&self) -> String {
        format!("generator\n{}", self.generator.to_text())
    }
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearCode[n={}, k={}]", self.n, self.dimension())
    }
}

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        self.same_code(other)
    }
}

impl Eq for LinearCode {}

/// Smallest weight among nonzero vectors of the span, if there is one.
pub(crate) fn min_nonzero_weight(rows: &[BitVector], cols: usize) -> Option<usize> {
    let best = fold_span(
        rows,
        cols,
        || usize::MAX,
        |acc, _, v| {
            let w = v.weight();
            if w > 0 && w < *acc {
                *acc = w;
            }
        },
        |a, b| a.min(b),
    );
    (best != usize::MAX).then_some(best)
}

/// Outer product `u ⊗ v` flattened row-major: coordinate `a * |v| + b`.
pub fn outer(u: &BitVector, v: &BitVector) -> BitVector {
    let nb = v.len();
    let mut out = BitVector::zeros(u.len() * nb);
    for a in u.support() {
        for b in v.support() {
            out.set(a * nb + b, true);
        }
    }
    out
}

/// C_A ⊗ C_B: grids whose columns lie in C_A and rows in C_B.
pub fn tensor_code(ca: &LinearCode, cb: &LinearCode) -> LinearCode {
    let n = ca.len() * cb.len();
    let rows: Vec<BitVector> = ca
        .generator()
        .rows()
        .iter()
        .flat_map(|ga| cb.generator().rows().iter().map(move |gb| outer(ga, gb)))
        .collect();
    LinearCode::from_generator(&BitMatrix::from_rows(rows, n).unwrap()).unwrap()
}

/// Generator rows of C_A ⊗ C_B built from explicit bases, in (A row, B row) order.
pub fn tensor_rows(basis_a: &BitMatrix, basis_b: &BitMatrix) -> BitMatrix {
    let n = basis_a.num_cols() * basis_b.num_cols();
    let rows = basis_a
        .rows()
        .iter()
        .flat_map(|ga| basis_b.rows().iter().map(move |gb| outer(ga, gb)))
        .collect();
    BitMatrix::from_rows(rows, n).unwrap()
}

/// The split generating set of C_A ⊗ F₂^B + F₂^A ⊗ C_B: first the
/// column-type words `g_A ⊗ e_b`, then the row-type words `e_a ⊗ g_B`.
pub fn dual_tensor_spanning_set(ca: &LinearCode, cb: &LinearCode) -> (Vec<BitVector>, Vec<BitVector>) {
    let (na, nb) = (ca.len(), cb.len());
    let mut col_type = Vec::new();
    for ga in ca.generator().rows() {
        for b in 0..nb {
            col_type.push(outer(ga, &BitVector::unit(nb, b)));
        }
    }
    let mut row_type = Vec::new();
    for a in 0..na {
        for gb in cb.generator().rows() {
            row_type.push(outer(&BitVector::unit(na, a), gb));
        }
    }
    (col_type, row_type)
}

/// C_A ⊗ F₂^B + F₂^A ⊗ C_B.
pub fn dual_tensor_code(ca: &LinearCode, cb: &LinearCode) -> LinearCode {
    let n = ca.len() * cb.len();
    let (mut rows, row_type) = dual_tensor_spanning_set(ca, cb);
    rows.extend(row_type);
    LinearCode::from_generator(&BitMatrix::from_rows(rows, n).unwrap()).unwrap()
}

/// A word on an A×B grid, stored row-major (row index from A).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GridWord {
    rows: usize,
    cols: usize,
    bits: BitVector,
}

impl GridWord {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        GridWord {
            rows,
            cols,
            bits: BitVector::zeros(rows * cols),
        }
    }

    pub fn from_flat(rows: usize, cols: usize, bits: BitVector) -> Result<Self> {
        if bits.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} bits cannot fill a {rows}x{cols} grid",
                bits.len()
            )));
        }
        Ok(GridWord { rows, cols, bits })
    }

    pub fn from_matrix(m: &BitMatrix) -> Self {
        let bits = BitVector::from_bools(m.rows().iter().flat_map(|r| r.iter().collect::<Vec<_>>()));
        GridWord {
            rows: m.num_rows(),
            cols: m.num_cols(),
            bits,
        }
    }

    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        Ok(Self::from_matrix(&BitMatrix::from_strs(rows)?))
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn flat(&self) -> &BitVector {
        &self.bits
    }

    pub fn into_flat(self) -> BitVector {
        self.bits
    }

    pub fn get(&self, a: usize, b: usize) -> bool {
        self.bits.get(a * self.cols + b)
    }

    pub fn set(&mut self, a: usize, b: usize, value: bool) {
        self.bits.set(a * self.cols + b, value)
    }

    pub fn weight(&self) -> usize {
        self.bits.weight()
    }

    pub fn row(&self, a: usize) -> BitVector {
        BitVector::from_bools((0..self.cols).map(|b| self.get(a, b)))
    }

    pub fn col(&self, b: usize) -> BitVector {
        BitVector::from_bools((0..self.rows).map(|a| self.get(a, b)))
    }

    pub fn to_matrix(&self) -> BitMatrix {
        BitMatrix::from_rows((0..self.rows).map(|a| self.row(a)).collect(), self.cols).unwrap()
    }

    pub fn nonzero_rows(&self) -> Vec<usize> {
        (0..self.rows).filter(|&a| !self.row(a).is_zero()).collect()
    }

    pub fn nonzero_cols(&self) -> Vec<usize> {
        (0..self.cols).filter(|&b| !self.col(b).is_zero()).collect()
    }

    /// Sub-grid on the given rows and columns.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> GridWord {
        let mut g = GridWord::zeros(rows.len(), cols.len());
        for (i, &a) in rows.iter().enumerate() {
            for (j, &b) in cols.iter().enumerate() {
                g.set(i, j, self.get(a, b));
            }
        }
        g
    }
}

impl fmt::Debug for GridWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows).map(|a| self.row(a).to_string()).collect();
        write!(f, "GridWord[{}]", rows.join("/"))
    }
}
