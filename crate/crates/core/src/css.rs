//! The quantum Tanner CSS code built from a complex and two component codes.
//!
//! `h_z` carries C_A ⊗ C_B words on the V₀ views and `h_x` carries
//! C_A^⊥ ⊗ C_B^⊥ words on the V₁ views. Z-type logicals live in
//! ker h_x \ rowspace h_z and X-type logicals in ker h_z \ rowspace h_x.

use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::code::{tensor_rows, LinearCode, DISTANCE_GUARD};
use crate::complex::LeftRightComplex;
use crate::error::{Error, Result};
use crate::gf2::{fold_span, BitMatrix, BitVector, IncrementalBasis};

/// How the local generating sets β₀, β₁ are chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisChoice {
    /// Tensor products of the stored (reduced) generator rows.
    #[default]
    Generator,
    /// Tensor products of greedy minimum-weight bases of the component codes.
    MinWeight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PauliSide {
    X,
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogicalClass {
    Trivial,
    Logical,
    NotInCode,
}

#[derive(Clone, Debug)]
pub struct CssCode {
    n: usize,
    h_z: BitMatrix,
    h_x: BitMatrix,
    rank_z: usize,
    rank_x: usize,
    delta: usize,
    dims: (usize, usize),
    /// Logical operators of the opposite type, one per logical qubit; index 0
    /// serves side Z, index 1 side X.
    detectors: [OnceLock<BitMatrix>; 2],
    kernels: [OnceLock<BitMatrix>; 2],
}

/// Chooses the local basis of a component code.
fn component_basis(code: &LinearCode, choice: BasisChoice) -> Result<BitMatrix> {
    match choice {
        BasisChoice::Generator => Ok(code.generator().clone()),
        BasisChoice::MinWeight => code.min_weight_basis(),
    }
}

/// Embeds each local word through every view of one side.
fn embed_all(n: usize, views: &[Vec<usize>], local: &BitMatrix) -> BitMatrix {
    let rows: Vec<BitVector> = views
        .par_iter()
        .flat_map_iter(|view| {
            local
                .rows()
                .iter()
                .map(|y| {
                    let mut w = BitVector::zeros(n);
                    for k in y.support() {
                        w.flip(view[k]);
                    }
                    w
                })
                .collect::<Vec<_>>()
        })
        .collect();
    BitMatrix::from_rows(rows, n).expect("embedded rows have length n")
}

pub fn build_css(
    complex: &LeftRightComplex,
    ca: &LinearCode,
    cb: &LinearCode,
    choice: BasisChoice,
) -> Result<CssCode> {
    let delta = complex.delta();
    if ca.len() != delta || cb.len() != delta {
        return Err(Error::Shape(format!(
            "component codes have lengths {} and {}, expected Δ = {delta}",
            ca.len(),
            cb.len()
        )));
    }
    let n = complex.n_squares();
    let beta0 = tensor_rows(&component_basis(ca, choice)?, &component_basis(cb, choice)?);
    let beta1 = tensor_rows(
        &component_basis(&ca.dual(), choice)?,
        &component_basis(&cb.dual(), choice)?,
    );
    let h_z = embed_all(n, &complex.side_views(0), &beta0);
    let h_x = embed_all(n, &complex.side_views(1), &beta1);
    let product = h_z.mat_mul(&h_x.transpose())?;
    if !product.is_zero() {
        return Err(Error::Internal("h_z · h_xᵀ ≠ 0; local views are inconsistent".into()));
    }
    let (rank_z, rank_x) = rayon::join(|| h_z.rank(), || h_x.rank());
    Ok(CssCode {
        n,
        h_z,
        h_x,
        rank_z,
        rank_x,
        delta,
        dims: (ca.dimension(), cb.dimension()),
        detectors: Default::default(),
        kernels: Default::default(),
    })
}

fn side_index(side: PauliSide) -> usize {
    match side {
        PauliSide::Z => 0,
        PauliSide::X => 1,
    }
}

impl CssCode {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h_z(&self) -> &BitMatrix {
        &self.h_z
    }

    pub fn h_x(&self) -> &BitMatrix {
        &self.h_x
    }

    /// k = n − rank h_z − rank h_x.
    pub fn dimension(&self) -> usize {
        self.n - self.rank_z - self.rank_x
    }

    /// dim 𝒞₀ = dim ker h_z.
    pub fn dim_c0(&self) -> usize {
        self.n - self.rank_z
    }

    /// dim 𝒞₁ = dim ker h_x.
    pub fn dim_c1(&self) -> usize {
        self.n - self.rank_x
    }

    /// Checks a word of the given type must pass, and the stabilizers it is
    /// taken modulo.
    fn check_and_stabilizers(&self, side: PauliSide) -> (&BitMatrix, &BitMatrix) {
        match side {
            PauliSide::Z => (&self.h_x, &self.h_z),
            PauliSide::X => (&self.h_z, &self.h_x),
        }
    }

    /// Basis of the classical code containing `side`-type logicals.
    pub fn kernel_basis(&self, side: PauliSide) -> &BitMatrix {
        self.kernels[side_index(side)].get_or_init(|| self.check_and_stabilizers(side).0.nullspace_matrix())
    }

    /// k operators of the opposite type that detect nontrivial `side`-type
    /// words: a word in the kernel is trivial iff it is orthogonal to all of them.
    fn detectors(&self, side: PauliSide) -> &BitMatrix {
        self.detectors[side_index(side)].get_or_init(|| {
            let other = match side {
                PauliSide::Z => PauliSide::X,
                PauliSide::X => PauliSide::Z,
            };
            let (_, stabilizers_of_other) = self.check_and_stabilizers(other);
            let mut span = IncrementalBasis::new(self.n);
            for r in stabilizers_of_other.rows() {
                span.insert(r);
            }
            let rows: Vec<BitVector> = self
                .kernel_basis(other)
                .rows()
                .iter()
                .filter(|v| span.insert(v))
                .cloned()
                .collect();
            BitMatrix::from_rows(rows, self.n).unwrap()
        })
    }

    /// Classifies `w` as a `side`-type operator.
    pub fn is_logical(&self, w: &BitVector, side: PauliSide) -> Result<LogicalClass> {
        if w.len() != self.n {
            return Err(Error::Shape(format!("word of length {} for {} qubits", w.len(), self.n)));
        }
        let (check, stabilizers) = self.check_and_stabilizers(side);
        if !check.mul_vec(w)?.is_zero() {
            return Ok(LogicalClass::NotInCode);
        }
        Ok(if stabilizers.solve_membership(w)?.is_some() {
            LogicalClass::Trivial
        } else {
            LogicalClass::Logical
        })
    }

    fn is_nontrivial_in_kernel(&self, w: &BitVector, side: PauliSide) -> bool {
        self.detectors(side).rows().iter().any(|l| l.dot(w))
    }

    /// Exact minimum weight of a nontrivial `side`-type logical by enumerating
    /// the kernel. Returns `n + 1` when k = 0.
    pub fn exact_distance_small(&self, side: PauliSide, guard: usize) -> Result<ExactDistance> {
        let guard = guard.min(DISTANCE_GUARD);
        let kernel = self.kernel_basis(side);
        if kernel.num_rows() > guard {
            return Err(Error::Capacity {
                guard: "exact-distance-dimension",
                limit: guard,
                actual: kernel.num_rows(),
                hint: "; use distance_upper_bound instead",
            });
        }
        if self.dimension() == 0 {
            return Ok(ExactDistance {
                weight: self.n + 1,
                witness: None,
            });
        }
        let _ = self.detectors(side);
        let best = fold_span(
            kernel.rows(),
            self.n,
            || (usize::MAX, None::<BitVector>),
            |acc, _, v| {
                let w = v.weight();
                if w < acc.0 && self.is_nontrivial_in_kernel(v, side) {
                    *acc = (w, Some(v.clone()));
                }
            },
            |a, b| {
                if b.0 < a.0 || (b.0 == a.0 && b.1.as_ref().zip(a.1.as_ref()).is_some_and(|(x, y)| x.lex_cmp(y).is_lt())) {
                    b
                } else {
                    a
                }
            },
        );
        Ok(ExactDistance {
            weight: best.0,
            witness: best.1,
        })
    }

    /// Randomized upper bound on the `side`-type distance: each restart takes
    /// an information-set basis of the kernel under a random column order
    /// plus random kernel samples, keeps the nontrivial ones, and greedily
    /// adds stabilizer rows while that lowers the weight. The lightest
    /// witness wins, ties going to the earliest restart.
    pub fn distance_upper_bound(&self, side: PauliSide, trials: usize, seed: u64) -> Result<DistanceSearch> {
        if self.dimension() == 0 {
            return Ok(DistanceSearch::NoLogicals);
        }
        let kernel = self.kernel_basis(side).clone();
        let (_, stabilizers) = self.check_and_stabilizers(side);
        let stab_rows = stabilizers.row_basis();
        let _ = self.detectors(side);
        let best = (0..trials.max(1))
            .into_par_iter()
            .map(|restart| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(restart as u64);
                let out = self.one_restart(side, &kernel, &stab_rows, &mut rng);
                (out.weight(), restart, out)
            })
            .min_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)))
            .expect("at least one restart");
        let (weight, restart, witness) = best;
        if self.is_logical(&witness, side)? != LogicalClass::Logical {
            return Err(Error::Internal("distance search produced a non-logical witness".into()));
        }
        Ok(DistanceSearch::Found {
            weight,
            restart,
            witness,
        })
    }

    fn one_restart(&self, side: PauliSide, kernel: &BitMatrix, stabilizers: &BitMatrix, rng: &mut ChaCha8Rng) -> BitVector {
        let n = self.n;
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let ech = kernel.select_columns(&perm).echelon();
        let mut candidates: Vec<BitVector> = ech
            .rows()
            .iter()
            .map(|r| {
                let mut v = BitVector::zeros(n);
                for c in r.support() {
                    v.set(perm[c], true);
                }
                v
            })
            .collect();
        let m = kernel.num_rows();
        for _ in 0..m.max(8) {
            let coeffs = BitVector::random(m, rng);
            candidates.push(kernel.combine_rows(&coeffs).expect("coefficient length matches"));
        }
        // Pairs of information-set rows are often lighter than random samples.
        let base = m.min(candidates.len());
        for _ in 0..m {
            let (i, j) = (rng.gen_range(0..base), rng.gen_range(0..base));
            if i != j {
                candidates.push(&candidates[i] ^ &candidates[j]);
            }
        }
        let mut best: Option<BitVector> = None;
        for c in candidates {
            if !self.is_nontrivial_in_kernel(&c, side) {
                continue;
            }
            let reduced = greedy_reduce(c, stabilizers);
            if best.as_ref().is_none_or(|b| reduced.weight() < b.weight()) {
                best = Some(reduced);
            }
        }
        best.unwrap_or_else(|| {
            // Every candidate was trivial; the first detector-violating basis row exists since k ≥ 1.
            let row = kernel
                .rows()
                .iter()
                .find(|r| self.is_nontrivial_in_kernel(r, side))
                .expect("k ≥ 1 implies a nontrivial kernel basis row")
                .clone();
            greedy_reduce(row, stabilizers)
        })
    }

    pub fn row_weight_max(&self) -> usize {
        self.h_z.row_weights().into_iter().chain(self.h_x.row_weights()).max().unwrap_or(0)
    }

    /// Largest number of generators (of either type) touching one qubit.
    pub fn col_weight_max(&self) -> usize {
        let cz = self.h_z.column_weights();
        let cx = self.h_x.column_weights();
        cz.iter().zip(&cx).map(|(a, b)| a + b).max().unwrap_or(0)
    }

    /// 1 − 2(ρ_Aρ_B + (1−ρ_A)(1−ρ_B)), which is (2ρ−1)² when dim C_B = Δ − dim C_A.
    pub fn rate_bound(&self) -> f64 {
        let d = self.delta as f64;
        let (ra, rb) = (self.dims.0 as f64 / d, self.dims.1 as f64 / d);
        1.0 - 2.0 * (ra * rb + (1.0 - ra) * (1.0 - rb))
    }

    /// Full parameter report; exact distances are attempted when the kernel
    /// dimension is at most `guard`.
    pub fn report(&self, trials: usize, seed: u64, guard: usize) -> Result<CssReport> {
        let k = self.dimension();
        let upper = |side| -> Result<Option<usize>> {
            Ok(match self.distance_upper_bound(side, trials, seed)? {
                DistanceSearch::NoLogicals => None,
                DistanceSearch::Found { weight, .. } => Some(weight),
            })
        };
        let exact = |side| -> Result<Option<usize>> {
            if k == 0 || self.kernel_basis(side).num_rows() > guard.min(DISTANCE_GUARD) {
                return Ok(None);
            }
            Ok(Some(self.exact_distance_small(side, guard)?.weight))
        };
        Ok(CssReport {
            n: self.n,
            k,
            rate: k as f64 / self.n as f64,
            rate_bound: self.rate_bound(),
            row_weight_max: self.row_weight_max(),
            col_weight_max: self.col_weight_max(),
            dx_upper: upper(PauliSide::X)?,
            dz_upper: upper(PauliSide::Z)?,
            dx_exact: exact(PauliSide::X)?,
            dz_exact: exact(PauliSide::Z)?,
            seed,
        })
    }
}

/// Adds stabilizer rows while any single addition lowers the weight.
fn greedy_reduce(mut w: BitVector, stabilizers: &BitMatrix) -> BitVector {
    loop {
        let mut improved = false;
        for s in stabilizers.rows() {
            let cand = &w ^ s;
            if cand.weight() < w.weight() {
                w = cand;
                improved = true;
            }
        }
        if !improved {
            return w;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactDistance {
    /// `n + 1` when there are no logicals.
    pub weight: usize,
    pub witness: Option<BitVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistanceSearch {
    NoLogicals,
    Found {
        weight: usize,
        restart: usize,
        witness: BitVector,
    },
}

impl DistanceSearch {
    pub fn weight(&self) -> Option<usize> {
        match self {
            DistanceSearch::NoLogicals => None,
            DistanceSearch::Found { weight, .. } => Some(*weight),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CssReport {
    pub n: usize,
    pub k: usize,
    pub rate: f64,
    pub rate_bound: f64,
    pub row_weight_max: usize,
    pub col_weight_max: usize,
    pub dx_upper: Option<usize>,
    pub dz_upper: Option<usize>,
    pub dx_exact: Option<usize>,
    pub dz_exact: Option<usize>,
    pub seed: u64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteGroup, GeneratorSet, Side};

    fn toy_complex() -> LeftRightComplex {
        let g = FiniteGroup::cyclic_product(&[4, 2]).unwrap();
        let a = GeneratorSet::new(&g, vec![2, 4, 6], Side::Left).unwrap();
        let b = GeneratorSet::new(&g, vec![1, 3, 7], Side::Right).unwrap();
        LeftRightComplex::build(g, a, b).unwrap()
    }

    fn toy_css() -> CssCode {
        let r3 = LinearCode::repetition(3);
        build_css(&toy_complex(), &r3, &r3.dual(), BasisChoice::Generator).unwrap()
    }

    /// Oracle: enumerate the kernel and test row-space membership by elimination.
    fn brute_exact(code: &CssCode, side: PauliSide) -> usize {
        let kernel = code.kernel_basis(side);
        let (_, stab) = code.check_and_stabilizers(side);
        let stab_echelon = stab.echelon();
        let m = kernel.num_rows();
        (1u64..(1 << m))
            .map(|mask| kernel.combine_rows(&BitVector::from_u64(m, mask)).unwrap())
            .filter(|w| !stab_echelon.contains(w))
            .map(|w| w.weight())
            .min()
            .unwrap_or(code.n() + 1)
    }

    #[test]
    fn trivial_component_codes() {
        let x = toy_complex();
        let code = build_css(&x, &LinearCode::full(3), &LinearCode::zero(3), BasisChoice::Generator).unwrap();
        assert_eq!(code.h_z().num_rows(), 0);
        assert_eq!(code.h_x().num_rows(), 0);
        assert_eq!(code.dimension(), 36);
    }

    #[test]
    fn toy_code_parameters_and_logicals() {
        let code = toy_css();
        assert_eq!(code.n(), 36);
        assert_eq!(code.dimension(), code.dim_c0() + code.dim_c1() - code.n());
        assert!(code.dimension() as f64 >= code.rate_bound() * 36.0 - 1e-9);
        for r in code.h_z().rows() {
            assert_eq!(code.is_logical(r, PauliSide::Z).unwrap(), LogicalClass::Trivial);
        }
        assert_eq!(code.is_logical(&BitVector::zeros(36), PauliSide::X).unwrap(), LogicalClass::Trivial);
        if code.dimension() > 0 {
            let (_, null) = code.h_x().rank_and_nullspace();
            let logical = null
                .into_iter()
                .find(|v| code.h_z().solve_membership(v).unwrap().is_none())
                .expect("k > 0");
            assert_eq!(code.is_logical(&logical, PauliSide::Z).unwrap(), LogicalClass::Logical);
        }
        for side in [PauliSide::X, PauliSide::Z] {
            let exact = code.exact_distance_small(side, 26).unwrap();
            assert_eq!(exact.weight, brute_exact(&code, side));
            let upper = code.distance_upper_bound(side, 16, 5).unwrap();
            assert!(upper.weight().unwrap() >= exact.weight);
        }
    }

    #[test]
    fn dimension_does_not_depend_on_the_basis() {
        let x = toy_complex();
        let r3 = LinearCode::repetition(3);
        let a = build_css(&x, &r3, &r3.dual(), BasisChoice::Generator).unwrap();
        let b = build_css(&x, &r3, &r3.dual(), BasisChoice::MinWeight).unwrap();
        assert_eq!(a.dimension(), b.dimension());
    }

    #[test]
    fn no_logicals_when_k_is_zero() {
        let x = toy_complex();
        let code = build_css(&x, &LinearCode::repetition(3), &LinearCode::repetition(3), BasisChoice::Generator).unwrap();
        if code.dimension() == 0 {
            assert_eq!(code.distance_upper_bound(PauliSide::Z, 4, 1).unwrap(), DistanceSearch::NoLogicals);
            assert_eq!(code.exact_distance_small(PauliSide::Z, 26).unwrap().weight, 37);
        }
    }
}
