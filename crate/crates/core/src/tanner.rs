//! Tanner codes with per-vertex local views, and the locally testable code
//! on the square graph.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::code::{min_nonzero_weight, tensor_code, LinearCode, DISTANCE_GUARD};
use crate::complex::LeftRightComplex;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// A Tanner code: words of length `n` whose every local view lies in `local`.
#[derive(Clone, Debug)]
pub struct TannerInstance {
    n: usize,
    views: Vec<Vec<usize>>,
    local: LinearCode,
}

impl TannerInstance {
    pub fn new(n: usize, views: Vec<Vec<usize>>, local: LinearCode) -> Result<Self> {
        for (v, view) in views.iter().enumerate() {
            if view.len() != local.len() {
                return Err(Error::Shape(format!(
                    "view of vertex {v} has {} coordinates but the local code has length {}",
                    view.len(),
                    local.len()
                )));
            }
            if let Some(&bad) = view.iter().find(|&&q| q >= n) {
                return Err(Error::Shape(format!("vertex {v} sees coordinate {bad} >= {n}")));
            }
        }
        Ok(TannerInstance { n, views, local })
    }

    /// T(𝒢_side^□, local) on the complex's squares.
    pub fn on_complex(complex: &LeftRightComplex, side: u8, local: LinearCode) -> Result<Self> {
        Self::new(complex.n_squares(), complex.side_views(side), local)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn vertex_count(&self) -> usize {
        self.views.len()
    }

    pub fn views(&self) -> &[Vec<usize>] {
        &self.views
    }

    pub fn view(&self, v: usize) -> &[usize] {
        &self.views[v]
    }

    pub fn local_code(&self) -> &LinearCode {
        &self.local
    }

    /// How many vertex views contain each coordinate.
    pub fn coordinate_multiplicity(&self) -> Vec<usize> {
        let mut m = vec![0; self.n];
        for view in &self.views {
            for &q in view {
                m[q] += 1;
            }
        }
        m
    }

    /// One block of rows per vertex: the local parity rows mapped through the view.
    pub fn assemble_parity(&self) -> BitMatrix {
        let rows: Vec<BitVector> = self
            .views
            .par_iter()
            .flat_map_iter(|view| {
                self.local
                    .parity()
                    .rows()
                    .iter()
                    .map(|h| self.embed_with(view, h))
                    .collect::<Vec<_>>()
            })
            .collect();
        BitMatrix::from_rows(rows, self.n).expect("embedded rows have length n")
    }

    fn embed_with(&self, view: &[usize], y: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.n);
        for k in y.support() {
            out.flip(view[k]);
        }
        out
    }

    /// Places a local word `y` at vertex `v`.
    pub fn embed(&self, v: usize, y: &BitVector) -> BitVector {
        assert_eq!(y.len(), self.local.len());
        self.embed_with(&self.views[v], y)
    }

    /// x_v: the restriction of `x` to the view of `v`.
    pub fn local_view(&self, x: &BitVector, v: usize) -> BitVector {
        x.restrict(&self.views[v])
    }

    pub fn rejecting_vertices(&self, x: &BitVector) -> Vec<usize> {
        assert_eq!(x.len(), self.n, "word length does not match the instance");
        (0..self.views.len())
            .into_par_iter()
            .filter(|&v| !self.local.contains(&self.local_view(x, v)))
            .collect()
    }

    pub fn is_codeword(&self, x: &BitVector) -> bool {
        self.rejecting_vertices(x).is_empty()
    }

    /// ζ(x): the fraction of vertices whose local view is rejected.
    pub fn tester_exact(&self, x: &BitVector) -> f64 {
        self.rejecting_vertices(x).len() as f64 / self.views.len() as f64
    }

    /// Monte-Carlo estimate of ζ(x) from `trials` uniformly drawn vertices.
    pub fn tester_sampled(&self, x: &BitVector, trials: usize, seed: u64) -> f64 {
        if trials == 0 {
            return 0.0;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rejected = (0..trials)
            .filter(|_| {
                let v = rng.gen_range(0..self.views.len());
                !self.local.contains(&self.local_view(x, v))
            })
            .count();
        rejected as f64 / trials as f64
    }

    /// Basis of the Tanner code.
    pub fn codeword_basis(&self) -> BitMatrix {
        self.assemble_parity().nullspace_matrix()
    }

    pub fn dimension(&self) -> usize {
        self.n - self.assemble_parity().rank()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LtcReport {
    pub n: usize,
    pub k: usize,
    pub rate: f64,
    /// 2ρ_Aρ_B − 1, which is 2ρ² − 1 for equal rates.
    pub rate_bound: f64,
    pub delta_a: f64,
    pub delta_b: f64,
    /// max(λ(𝒢_A), λ(𝒢_B)).
    pub lambda: f64,
    /// δ²(δ − λ/Δ)·n with δ = min(δ_A, δ_B).
    pub distance_bound: f64,
    pub exact_distance: Option<usize>,
}

/// T(𝒢₀^□, C_A ⊗ C_B) with its parameter report. The exact distance is
/// computed by enumeration when k ≤ `distance_guard`.
pub fn build_ltc(
    complex: &LeftRightComplex,
    ca: &LinearCode,
    cb: &LinearCode,
    distance_guard: usize,
) -> Result<(TannerInstance, LtcReport)> {
    let delta = complex.delta();
    if ca.len() != delta || cb.len() != delta {
        return Err(Error::Shape(format!(
            "component codes have lengths {} and {}, expected Δ = {delta}",
            ca.len(),
            cb.len()
        )));
    }
    let inst = TannerInstance::on_complex(complex, 0, tensor_code(ca, cb))?;
    let basis = inst.codeword_basis();
    let n = inst.len();
    let k = basis.num_rows();
    let graphs = complex.graphs();
    let lambda = graphs.g_a.second_eigenvalue()?.max(graphs.g_b.second_eigenvalue()?);
    let (delta_a, delta_b) = (ca.relative_distance()?, cb.relative_distance()?);
    let d = delta_a.min(delta_b);
    let exact_distance = if k <= distance_guard.min(DISTANCE_GUARD) {
        Some(min_nonzero_weight(basis.rows(), n).unwrap_or(n + 1))
    } else {
        None
    };
    let report = LtcReport {
        n,
        k,
        rate: k as f64 / n as f64,
        rate_bound: 2.0 * ca.rate() * cb.rate() - 1.0,
        delta_a,
        delta_b,
        lambda,
        distance_bound: d * d * (d - lambda / delta as f64) * n as f64,
        exact_distance,
    };
    Ok((inst, report))
}
