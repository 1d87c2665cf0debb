//! Tester-driven mismatch decoder for the code T(𝒢₀^□, C_A ⊗ C_B).
//!
//! Each V₀ vertex decodes its local view to the nearest tensor codeword c_v;
//! the mismatch z = Σ c_v is then reduced greedily by local moves y_v ∈ C₀
//! until it vanishes, at which point the c_v are the views of one codeword.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::code::{dual_tensor_code, tensor_code, tensor_rows, LinearCode, NEAREST_GUARD};
use crate::complex::LeftRightComplex;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::tanner::TannerInstance;

/// Candidate local moves y_v.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MoveSet {
    /// Every nonzero word of C₀.
    #[default]
    Exhaustive,
    /// Tensor products of minimum-weight component basis words only.
    MinWeightGenerators,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecoderConfig {
    /// Relative distance δ used in the threshold; defaults to min(δ_A, δ_B).
    pub rel_distance: Option<f64>,
    pub epsilon: f64,
    /// Replaces δn/(4Δ^{3/2+ε}) when set.
    pub threshold_override: Option<f64>,
    pub moves: MoveSet,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            rel_distance: None,
            epsilon: 0.1,
            threshold_override: None,
            moves: MoveSet::Exhaustive,
        }
    }
}

/// Per-vertex local decodings and their mismatch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MismatchState {
    pub x: BitVector,
    /// c_v for every V₀ vertex, as local Δ²-bit words.
    pub local: Vec<BitVector>,
    pub z: BitVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub vertex: usize,
    pub y: BitVector,
    pub gain: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeOutcome {
    Decoded { codeword: BitVector },
    FarFromCode { z_weight: usize },
    Stalled { z: BitVector },
}

/// Outcome plus the trajectory of the mismatch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeRun {
    pub outcome: DecodeOutcome,
    /// |z| before the first step and after every step.
    pub z_weights: Vec<usize>,
    pub gains: Vec<usize>,
    /// Number of distinct vertices whose c_v changed.
    pub updated_vertices: usize,
}

impl DecodeRun {
    /// Smallest gain divided by Δ², the empirical constant a of this run.
    pub fn measured_a(&self, delta: usize) -> Option<f64> {
        self.gains.iter().min().map(|&g| g as f64 / (delta * delta) as f64)
    }
}

pub struct MismatchDecoder {
    ltc: TannerInstance,
    check: TannerInstance,
    candidates: Vec<BitVector>,
    delta: usize,
    threshold: f64,
    config: DecoderConfig,
    ltc_basis: BitMatrix,
}

impl MismatchDecoder {
    pub fn new(complex: &LeftRightComplex, ca: &LinearCode, cb: &LinearCode, config: DecoderConfig) -> Result<Self> {
        let delta = complex.delta();
        if ca.len() != delta || cb.len() != delta {
            return Err(Error::Shape(format!(
                "component codes have lengths {} and {}, expected Δ = {delta}",
                ca.len(),
                cb.len()
            )));
        }
        let c0 = tensor_code(ca, cb);
        if c0.dimension() > NEAREST_GUARD {
            return Err(Error::capacity("local-code-dimension", NEAREST_GUARD, c0.dimension()));
        }
        let mut candidates: Vec<BitVector> = match config.moves {
            MoveSet::Exhaustive => c0.codewords()?.into_iter().filter(|w| !w.is_zero()).collect(),
            MoveSet::MinWeightGenerators => tensor_rows(&ca.min_weight_basis()?, &cb.min_weight_basis()?)
                .into_rows(),
        };
        candidates.sort_by(|a, b| a.lex_cmp(b));
        candidates.dedup();
        let rel = match config.rel_distance {
            Some(d) => d,
            None => ca.relative_distance()?.min(cb.relative_distance()?),
        };
        let n = complex.n_squares();
        let threshold = config
            .threshold_override
            .unwrap_or_else(|| rel * n as f64 / (4.0 * (delta as f64).powf(1.5 + config.epsilon)));
        let ltc = TannerInstance::on_complex(complex, 0, c0)?;
        let check = TannerInstance::on_complex(complex, 1, dual_tensor_code(ca, cb))?;
        let ltc_basis = ltc.codeword_basis();
        Ok(MismatchDecoder {
            ltc,
            check,
            candidates,
            delta,
            threshold,
            config: DecoderConfig {
                rel_distance: Some(rel),
                ..config
            },
            ltc_basis,
        })
    }

    pub fn ltc(&self) -> &TannerInstance {
        &self.ltc
    }

    /// The Tanner code 𝒞₁ on V₁ with the dual tensor local code.
    pub fn mismatch_code(&self) -> &TannerInstance {
        &self.check
    }

    pub fn ltc_basis(&self) -> &BitMatrix {
        &self.ltc_basis
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.config
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn random_codeword<R: Rng + ?Sized>(&self, rng: &mut R) -> BitVector {
        let coeffs = BitVector::random(self.ltc_basis.num_rows(), rng);
        self.ltc_basis.combine_rows(&coeffs).expect("coefficient length matches")
    }

    pub fn local_decode_all(&self, x: &BitVector) -> Result<MismatchState> {
        let n = self.ltc.len();
        if x.len() != n {
            return Err(Error::Shape(format!("word of length {} for a code of length {n}", x.len())));
        }
        let code = self.ltc.local_code();
        let local: Vec<BitVector> = (0..self.ltc.vertex_count())
            .into_par_iter()
            .map(|v| code.nearest_codeword(&self.ltc.local_view(x, v)).map(|(c, _)| c))
            .collect::<Result<_>>()?;
        let mut z = BitVector::zeros(n);
        let mut e_sum = BitVector::zeros(n);
        for (v, c) in local.iter().enumerate() {
            z ^= &self.ltc.embed(v, c);
            e_sum ^= &self.ltc.embed(v, &(&self.ltc.local_view(x, v) ^ c));
        }
        // Every coordinate lies in two V₀ views, so Σ x_v = 0 and Σ c_v = Σ e_v.
        if z != e_sum {
            return Err(Error::Internal("Σ c_v ≠ Σ e_v; a coordinate is not seen exactly twice".into()));
        }
        if !self.check.is_codeword(&z) {
            return Err(Error::Internal("mismatch left the code 𝒞₁".into()));
        }
        Ok(MismatchState { x: x.clone(), local, z })
    }

    /// The best move: largest gain |z| − |z + y_v|, ties to the smallest
    /// vertex and then the lexicographically smallest y_v. `None` when no
    /// move has positive gain.
    pub fn reduce_step(&self, state: &MismatchState) -> Result<Option<Move>> {
        if state.z.is_zero() {
            return Err(Error::Contract("reduce_step needs a nonzero mismatch".into()));
        }
        let best = (0..self.ltc.vertex_count())
            .into_par_iter()
            .filter_map(|v| {
                let zv = self.ltc.local_view(&state.z, v);
                let w = zv.weight();
                if w == 0 {
                    return None;
                }
                let mut best: Option<(usize, usize)> = None;
                for (idx, y) in self.candidates.iter().enumerate() {
                    let after = zv.distance(y);
                    if after < w && best.is_none_or(|(g, _)| w - after > g) {
                        best = Some((w - after, idx));
                    }
                }
                best.map(|(gain, idx)| (gain, v, idx))
            })
            .reduce_with(|a, b| {
                // Larger gain wins; otherwise the smaller vertex.
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            });
        Ok(best.map(|(gain, vertex, idx)| Move {
            vertex,
            y: self.candidates[idx].clone(),
            gain,
        }))
    }

    pub fn apply(&self, state: &mut MismatchState, mv: &Move) {
        state.local[mv.vertex] ^= &mv.y;
        state.z ^= &self.ltc.embed(mv.vertex, &mv.y);
    }

    /// Reassembles the global word from consistent local views.
    fn glue(&self, state: &MismatchState) -> BitVector {
        let mut c = BitVector::zeros(self.ltc.len());
        for (v, local) in state.local.iter().enumerate() {
            for (k, &q) in self.ltc.view(v).iter().enumerate() {
                if local.get(k) {
                    c.set(q, true);
                }
            }
        }
        c
    }

    pub fn run(&self, x: &BitVector) -> Result<DecodeRun> {
        let mut state = self.local_decode_all(x)?;
        let mut z_weights = vec![state.z.weight()];
        let mut gains = Vec::new();
        let mut touched = vec![false; self.ltc.vertex_count()];
        if z_weights[0] as f64 >= self.threshold {
            return Ok(DecodeRun {
                outcome: DecodeOutcome::FarFromCode { z_weight: z_weights[0] },
                z_weights,
                gains,
                updated_vertices: 0,
            });
        }
        while !state.z.is_zero() {
            let Some(mv) = self.reduce_step(&state)? else {
                return Ok(DecodeRun {
                    outcome: DecodeOutcome::Stalled { z: state.z },
                    z_weights,
                    gains,
                    updated_vertices: touched.iter().filter(|&&t| t).count(),
                });
            };
            let before = state.z.weight();
            self.apply(&mut state, &mv);
            let after = state.z.weight();
            if after + mv.gain != before || !self.check.is_codeword(&state.z) {
                return Err(Error::Internal("mismatch update broke its invariants".into()));
            }
            touched[mv.vertex] = true;
            z_weights.push(after);
            gains.push(mv.gain);
        }
        let codeword = self.glue(&state);
        if !self.ltc.is_codeword(&codeword) {
            return Err(Error::Internal("zero mismatch did not glue to a codeword".into()));
        }
        Ok(DecodeRun {
            outcome: DecodeOutcome::Decoded { codeword },
            z_weights,
            gains,
            updated_vertices: touched.iter().filter(|&&t| t).count(),
        })
    }

    /// Decodes one word and summarizes the run. `original`, when known,
    /// is the codeword the word was derived from.
    pub fn decode_summary(&self, x: &BitVector, original: Option<&BitVector>) -> Result<DecodeSummary> {
        let zeta = self.ltc.tester_exact(x);
        let run = self.run(x)?;
        let n = self.ltc.len() as f64;
        let (outcome, output) = match &run.outcome {
            DecodeOutcome::Decoded { codeword } => ("decoded", Some(codeword)),
            DecodeOutcome::FarFromCode { .. } => ("far-from-code", None),
            DecodeOutcome::Stalled { .. } => ("stalled", None),
        };
        let factor = run.measured_a(self.delta).map_or(1.0, |a| 1.0 + 1.0 / a);
        Ok(DecodeSummary {
            outcome,
            input_weight_from_original: original.map(|c| c.distance(x)),
            zeta,
            z_weights: run.z_weights.clone(),
            gains: run.gains.clone(),
            updated_vertices: run.updated_vertices,
            distance_to_output: output.map(|c| c.distance(x)),
            recovered_original: match (output, original) {
                (Some(c), Some(o)) => Some(c == o),
                _ => None,
            },
            bound_holds: output.map(|c| c.distance(x) as f64 <= n * factor * zeta + 1e-9),
            output: output.map(|c| c.to_string()),
        })
    }

    /// Decodes `samples` random codewords hit by `error_weight` random flips.
    pub fn decode_experiment(&self, samples: usize, error_weight: usize, seed: u64) -> Result<DecodeExperiment> {
        let n = self.ltc.len();
        let runs: Vec<DecodeSummary> = (0..samples)
            .into_par_iter()
            .map(|s| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(s as u64);
                let c = self.random_codeword(&mut rng);
                let mut x = c.clone();
                for q in rand::seq::index::sample(&mut rng, n, error_weight.min(n)) {
                    x.flip(q);
                }
                self.decode_summary(&x, Some(&c))
            })
            .collect::<Result<_>>()?;
        let count = |o: &str| runs.iter().filter(|r| r.outcome == o).count();
        Ok(DecodeExperiment {
            samples,
            error_weight,
            threshold: self.threshold,
            decoded: count("decoded"),
            far_from_code: count("far-from-code"),
            stalled: count("stalled"),
            recovered: runs.iter().filter(|r| r.recovered_original == Some(true)).count(),
            seed,
            runs,
        })
    }

    /// min(a/(a+1), δ/(8Δ^{3/2+ε})); the first term is dropped when `a` is unknown.
    pub fn kappa_formula(&self, a: Option<f64>) -> f64 {
        let rel = self.config.rel_distance.unwrap_or(0.0);
        let second = rel / (8.0 * (self.delta as f64).powf(1.5 + self.config.epsilon));
        match a {
            Some(a) => (a / (a + 1.0)).min(second),
            None => second,
        }
    }

    /// Samples codeword + random error of each swept weight and measures
    /// ζ(x)·n / d̂(x, 𝒞), where d̂ is the smaller of the error weight and the
    /// distance to the decoder's output.
    pub fn testability_experiment(&self, samples: usize, weight_sweep: &[usize], seed: u64) -> Result<TestabilityReport> {
        let n = self.ltc.len();
        let jobs: Vec<(usize, usize)> = weight_sweep
            .iter()
            .flat_map(|&w| (0..samples).map(move |s| (w, s)))
            .collect();
        let results: Vec<SampleResult> = jobs
            .par_iter()
            .enumerate()
            .map(|(job, &(w, _))| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(job as u64);
                let c = self.random_codeword(&mut rng);
                let mut x = c.clone();
                for q in rand::seq::index::sample(&mut rng, n, w.min(n)) {
                    x.flip(q);
                }
                let zeta = self.ltc.tester_exact(&x);
                let run = self.run(&x)?;
                let decoded = match &run.outcome {
                    DecodeOutcome::Decoded { codeword } => Some(codeword.distance(&x)),
                    _ => None,
                };
                let d_hat = decoded.map_or(x.distance(&c), |d| d.min(x.distance(&c)));
                Ok(SampleResult {
                    zeta,
                    d_hat,
                    min_gain: run.gains.iter().min().copied(),
                    stalled: matches!(run.outcome, DecodeOutcome::Stalled { .. }),
                    far: matches!(run.outcome, DecodeOutcome::FarFromCode { .. }),
                })
            })
            .collect::<Result<_>>()?;
        let counted: Vec<&SampleResult> = results.iter().filter(|r| r.d_hat > 0).collect();
        let min_ratio = counted
            .iter()
            .map(|r| r.zeta * n as f64 / r.d_hat as f64)
            .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.min(x))));
        let min_gain = results.iter().filter_map(|r| r.min_gain).min();
        let a_measured = min_gain.map(|g| g as f64 / (self.delta * self.delta) as f64);
        Ok(TestabilityReport {
            samples: counted.len(),
            excluded_codewords: results.len() - counted.len(),
            weight_sweep: weight_sweep.to_vec(),
            min_ratio,
            a_measured,
            kappa_formula_value: self.kappa_formula(a_measured),
            stalls: results.iter().filter(|r| r.stalled).count(),
            far_count: results.iter().filter(|r| r.far).count(),
            threshold: self.threshold,
            seed,
        })
    }
}

struct SampleResult {
    zeta: f64,
    d_hat: usize,
    min_gain: Option<usize>,
    stalled: bool,
    far: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecodeSummary {
    pub outcome: &'static str,
    pub input_weight_from_original: Option<usize>,
    pub zeta: f64,
    pub z_weights: Vec<usize>,
    pub gains: Vec<usize>,
    pub updated_vertices: usize,
    pub distance_to_output: Option<usize>,
    pub recovered_original: Option<bool>,
    /// d(x, c′) ≤ n(1 + 1/â)ζ(x) with â measured on this run.
    pub bound_holds: Option<bool>,
    pub output: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecodeExperiment {
    pub samples: usize,
    pub error_weight: usize,
    pub threshold: f64,
    pub decoded: usize,
    pub far_from_code: usize,
    pub stalled: usize,
    pub recovered: usize,
    pub seed: u64,
    pub runs: Vec<DecodeSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestabilityReport {
    /// Samples that were not codewords and entered the ratio.
    pub samples: usize,
    pub excluded_codewords: usize,
    pub weight_sweep: Vec<usize>,
    pub min_ratio: Option<f64>,
    pub a_measured: Option<f64>,
    pub kappa_formula_value: f64,
    pub stalls: usize,
    pub far_count: usize,
    pub threshold: f64,
    pub seed: u64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteGroup, GeneratorSet, Side};

    fn toy_decoder(threshold: Option<f64>) -> MismatchDecoder {
        let g = FiniteGroup::cyclic_product(&[4, 2]).unwrap();
        let a = GeneratorSet::new(&g, vec![2, 4, 6], Side::Left).unwrap();
        let b = GeneratorSet::new(&g, vec![1, 3, 7], Side::Right).unwrap();
        let x = LeftRightComplex::build(g, a, b).unwrap();
        let r3 = LinearCode::repetition(3);
        let config = DecoderConfig {
            threshold_override: threshold,
            ..DecoderConfig::default()
        };
        MismatchDecoder::new(&x, &r3, &r3, config).unwrap()
    }

    #[test]
    fn codewords_decode_to_themselves() {
        let dec = toy_decoder(None);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let c = dec.random_codeword(&mut rng);
            let st = dec.local_decode_all(&c).unwrap();
            assert!(st.z.is_zero());
            let run = dec.run(&c).unwrap();
            assert_eq!(run.outcome, DecodeOutcome::Decoded { codeword: c });
            assert!(run.gains.is_empty());
        }
    }

    #[test]
    fn single_generator_mismatch_is_removed_in_one_step() {
        let dec = toy_decoder(Some(f64::INFINITY));
        let y = dec.ltc().local_code().generator().row(0).clone();
        let z = dec.ltc().embed(3, &y);
        let state = MismatchState {
            x: BitVector::zeros(36),
            local: vec![BitVector::zeros(9); 8],
            z: z.clone(),
        };
        let mv = dec.reduce_step(&state).unwrap().unwrap();
        assert_eq!(mv.gain, y.weight());
        let mut after = state.clone();
        dec.apply(&mut after, &mv);
        assert!(after.z.is_zero());
        let zero = MismatchState { z: BitVector::zeros(36), ..state };
        assert!(matches!(dec.reduce_step(&zero), Err(Error::Contract(_))));
    }

    #[test]
    fn heavy_mismatch_is_far_from_code() {
        let dec = toy_decoder(Some(0.5));
        let mut x = BitVector::zeros(36);
        x.flip(0);
        let run = dec.run(&x).unwrap();
        assert!(matches!(run.outcome, DecodeOutcome::FarFromCode { .. }) || run.z_weights[0] == 0);
    }

    #[test]
    fn default_threshold_value() {
        let dec = toy_decoder(None);
        let expected = 36.0 / (4.0 * 3f64.powf(1.6));
        assert!((dec.threshold() - expected).abs() < 1e-12);
    }

    #[test]
    fn mismatch_decreases_and_bound_holds_on_low_weight_errors() {
        let dec = toy_decoder(Some(f64::INFINITY));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let c = dec.random_codeword(&mut rng);
            let mut x = c.clone();
            x.flip(rng.gen_range(0..36));
            let run = dec.run(&x).unwrap();
            assert!(run.z_weights.windows(2).all(|w| w[1] < w[0]));
            if let DecodeOutcome::Decoded { codeword } = &run.outcome {
                let zeta = dec.ltc().tester_exact(&x);
                let factor = run.measured_a(3).map_or(1.0, |a| 1.0 + 1.0 / a);
                assert!(codeword.distance(&x) as f64 <= 36.0 * factor * zeta + 1e-9);
            }
        }
    }

    #[test]
    fn decode_experiment_is_reproducible() {
        let dec = toy_decoder(Some(f64::INFINITY));
        let a = dec.decode_experiment(12, 1, 5).unwrap();
        assert_eq!(a, dec.decode_experiment(12, 1, 5).unwrap());
        assert_eq!(a.decoded + a.far_from_code + a.stalled, 12);
        assert!(a.runs.iter().all(|r| r.input_weight_from_original == Some(1)));
        assert!(a.runs.iter().filter_map(|r| r.bound_holds).all(|b| b));
    }
}
