//! Robustness of dual tensor codes, resistance to puncturing, tensor
//! closeness, and Monte-Carlo checks on random codes.
//!
//! Grids are A×B with rows indexed by A. Row words belong to C_B and column
//! words to C_A, so a robust cover uses at most |c|/d_B rows and at most
//! |c|/d_A columns.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::code::{dual_tensor_code, dual_tensor_spanning_set, tensor_code, GridWord, LinearCode, NEAREST_GUARD};
use crate::error::{Error, Result};
use crate::gf2::{fold_span, BitMatrix, BitVector, IncrementalBasis};

/// Largest number of nonzero rows the cover search accepts.
pub const COVER_ROW_GUARD: usize = 20;
/// Largest dual tensor dimension for exhaustive robustness checks.
pub const ROBUST_DIM_GUARD: usize = 22;
/// Largest r·|V| for the random-code probability checks.
pub const RANDOM_CODE_GUARD: usize = 12;
const TRIAL_CHUNK: usize = 1024;

/// Rows A′ and columns B′ whose union contains a support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cover {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

fn row_masks(c: &GridWord) -> Result<Vec<u64>> {
    if c.num_cols() > 64 {
        return Err(Error::capacity("cover-columns", 64, c.num_cols()));
    }
    Ok((0..c.num_rows())
        .map(|a| (0..c.num_cols()).filter(|&b| c.get(a, b)).fold(0u64, |m, b| m | (1 << b)))
        .collect())
}

fn mask_to_vec(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| (mask >> i) & 1 == 1).collect()
}

/// Searches row sets of the nonzero rows by increasing size; for each, the
/// columns of the remaining support must fit in `max_cols`. The first cover
/// found uses the fewest rows.
pub fn cover_check(c: &GridWord, max_rows: usize, max_cols: usize) -> Result<Option<Cover>> {
    let masks = row_masks(c)?;
    let nonzero: Vec<usize> = (0..masks.len()).filter(|&a| masks[a] != 0).collect();
    let m = nonzero.len();
    if m > COVER_ROW_GUARD {
        return Err(Error::capacity("cover-nonzero-rows", COVER_ROW_GUARD, m));
    }
    for size in 0..=max_rows.min(m) {
        // Gosper's hack over m-bit masks with `size` bits set.
        let mut subset: u64 = (1u64 << size) - 1;
        let limit = 1u64 << m;
        while subset < limit {
            let residual = (0..m)
                .filter(|&i| (subset >> i) & 1 == 0)
                .fold(0u64, |acc, i| acc | masks[nonzero[i]]);
            if residual.count_ones() as usize <= max_cols {
                return Ok(Some(Cover {
                    rows: (0..m).filter(|&i| (subset >> i) & 1 == 1).map(|i| nonzero[i]).collect(),
                    cols: mask_to_vec(residual),
                }));
            }
            if subset == 0 {
                break;
            }
            let low = subset & subset.wrapping_neg();
            let ripple = subset + low;
            subset = (((ripple ^ subset) >> 2) / low) | ripple;
        }
    }
    Ok(None)
}

/// Budgets (rows, columns) for a codeword of weight `w`: ⌊w/d_B⌋ and ⌊w/d_A⌋.
pub fn robust_budgets(weight: usize, d_a: usize, d_b: usize) -> (usize, usize) {
    (weight / d_b, weight / d_a)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverStat {
    pub rows: usize,
    pub cols: usize,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RobustnessVerdict {
    pub robust: bool,
    pub w: usize,
    pub d_a: usize,
    pub d_b: usize,
    /// Nonzero codewords of weight ≤ w that were checked.
    pub checked: usize,
    /// Lightest failing codeword (lexicographically first among equals).
    pub witness: Option<Vec<String>>,
    /// Histogram of the minimal covers found, by (rows, columns).
    pub cover_stats: Vec<CoverStat>,
}

#[derive(Default)]
struct RobustAcc {
    checked: usize,
    witness: Option<BitVector>,
    stats: BTreeMap<(usize, usize), usize>,
    error: Option<Error>,
}

fn better_witness(current: &Option<BitVector>, v: &BitVector) -> bool {
    current
        .as_ref()
        .is_none_or(|c| (v.weight(), v.lex_cmp(c)) < (c.weight(), std::cmp::Ordering::Equal))
}

/// Exhaustive w-robustness check of C_A ⊗ F₂^B + F₂^A ⊗ C_B.
pub fn robustness_check(ca: &LinearCode, cb: &LinearCode, w: usize) -> Result<RobustnessVerdict> {
    let dual = dual_tensor_code(ca, cb);
    if dual.dimension() > ROBUST_DIM_GUARD {
        return Err(Error::capacity("dual-tensor-dimension", ROBUST_DIM_GUARD, dual.dimension()));
    }
    let (na, nb) = (ca.len(), cb.len());
    let (d_a, d_b) = (ca.min_distance()?, cb.min_distance()?);
    let acc = fold_span(
        dual.generator().rows(),
        dual.len(),
        RobustAcc::default,
        |acc, _, v| {
            let weight = v.weight();
            if weight == 0 || weight > w || acc.error.is_some() {
                return;
            }
            acc.checked += 1;
            let grid = GridWord::from_flat(na, nb, v.clone()).expect("dual tensor words fill the grid");
            let (max_rows, max_cols) = robust_budgets(weight, d_a, d_b);
            match cover_check(&grid, max_rows, max_cols) {
                Ok(Some(cover)) => *acc.stats.entry((cover.rows.len(), cover.cols.len())).or_default() += 1,
                Ok(None) => {
                    if better_witness(&acc.witness, v) {
                        acc.witness = Some(v.clone());
                    }
                }
                Err(e) => acc.error = Some(e),
            }
        },
        |mut a, b| {
            a.checked += b.checked;
            for (k, c) in b.stats {
                *a.stats.entry(k).or_default() += c;
            }
            if let Some(bw) = b.witness {
                if better_witness(&a.witness, &bw) {
                    a.witness = Some(bw);
                }
            }
            a.error = a.error.or(b.error);
            a
        },
    );
    if let Some(e) = acc.error {
        return Err(e);
    }
    let witness = acc.witness.map(|v| {
        let g = GridWord::from_flat(na, nb, v).unwrap();
        (0..na).map(|a| g.row(a).to_string()).collect()
    });
    Ok(RobustnessVerdict {
        robust: witness.is_none(),
        w,
        d_a,
        d_b,
        checked: acc.checked,
        witness,
        cover_stats: acc
            .stats
            .into_iter()
            .map(|((rows, cols), count)| CoverStat { rows, cols, count })
            .collect(),
    })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PuncturedVerdict {
    pub robust: bool,
    pub w: usize,
    pub p: usize,
    pub punctures_checked: usize,
    /// Kept coordinates (A′, B′) of the first failing puncture.
    pub failing_puncture: Option<(Vec<usize>, Vec<usize>)>,
    pub failing_verdict: Option<RobustnessVerdict>,
}

/// w-robustness of every puncture keeping |A′| = |B′| = Δ − w′ for w′ ≤ p.
/// Punctures are scanned by w′, then A′, then B′ in lexicographic order.
pub fn punctured_robustness_check(ca: &LinearCode, cb: &LinearCode, w: usize, p: usize) -> Result<PuncturedVerdict> {
    if ca.len() != cb.len() {
        return Err(Error::Shape("puncturing resistance needs codes of equal length".into()));
    }
    let delta = ca.len();
    let mut checked = 0;
    for removed in 0..=p.min(delta.saturating_sub(1)) {
        let keeps = combinations(delta, delta - removed);
        for ka in &keeps {
            let pa = ca.puncture(ka)?;
            for kb in &keeps {
                let pb = cb.puncture(kb)?;
                checked += 1;
                let verdict = robustness_check(&pa, &pb, w)?;
                if !verdict.robust {
                    return Ok(PuncturedVerdict {
                        robust: false,
                        w,
                        p,
                        punctures_checked: checked,
                        failing_puncture: Some((ka.clone(), kb.clone())),
                        failing_verdict: Some(verdict),
                    });
                }
            }
        }
    }
    Ok(PuncturedVerdict {
        robust: true,
        w,
        p,
        punctures_checked: checked,
        failing_puncture: None,
        failing_verdict: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensorCloseness {
    pub d_col: usize,
    pub d_row: usize,
    pub d_tensor: usize,
    /// d_tensor ≤ 3/2 (d_col + d_row).
    pub bound_holds: bool,
    /// d_col + d_row ≤ d_A d_B / 2, the radius the bound is stated for.
    pub within_radius: bool,
}

/// Exact distances of `x` to the column code, the row code and the tensor code.
pub fn tensor_closeness_check(ca: &LinearCode, cb: &LinearCode, x: &GridWord) -> Result<TensorCloseness> {
    if x.num_rows() != ca.len() || x.num_cols() != cb.len() {
        return Err(Error::Shape(format!(
            "{}x{} grid for codes of lengths {} and {}",
            x.num_rows(),
            x.num_cols(),
            ca.len(),
            cb.len()
        )));
    }
    let mut d_col = 0;
    for b in 0..x.num_cols() {
        d_col += ca.distance_to(&x.col(b))?;
    }
    let mut d_row = 0;
    for a in 0..x.num_rows() {
        d_row += cb.distance_to(&x.row(a))?;
    }
    let t = tensor_code(ca, cb);
    if t.dimension() > NEAREST_GUARD {
        return Err(Error::capacity("tensor-dimension", NEAREST_GUARD, t.dimension()));
    }
    let d_tensor = t.distance_to(x.flat())?;
    let (d_a, d_b) = (ca.min_distance()?, cb.min_distance()?);
    Ok(TensorCloseness {
        d_col,
        d_row,
        d_tensor,
        bound_holds: 2 * d_tensor <= 3 * (d_col + d_row),
        within_radius: 2 * (d_col + d_row) <= d_a * d_b,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowColDecomposition {
    /// Part in F₂^A ⊗ C_B, on the chosen rows.
    pub row_part: GridWord,
    /// Part in C_A ⊗ F₂^B, on the chosen columns.
    pub col_part: GridWord,
    pub premise_cover: Cover,
    pub row_part_rows: usize,
    pub col_part_cols: usize,
    /// c is covered by ≤ |c|/d_B rows and ≤ |c|/d_A columns.
    pub conclusion_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposed {
    /// c is not covered by ⌊d_A/2⌋ rows and ⌊d_B/2⌋ columns.
    PreconditionFails,
    Found(RowColDecomposition),
}

/// Splits a dual tensor codeword supported on few rows and columns into a
/// row part and a column part, by solving over the generating set
/// {g_A ⊗ e_b : b ∈ B′} ∪ {e_a ⊗ g_B : a ∈ A′}.
pub fn rowcol_decompose(ca: &LinearCode, cb: &LinearCode, c: &GridWord) -> Result<Decomposed> {
    let (na, nb) = (ca.len(), cb.len());
    if c.num_rows() != na || c.num_cols() != nb {
        return Err(Error::Shape("grid does not match the component codes".into()));
    }
    if !dual_tensor_code(ca, cb).contains(c.flat()) {
        return Err(Error::Contract("word is not in the dual tensor code".into()));
    }
    let (d_a, d_b) = (ca.min_distance()?, cb.min_distance()?);
    let Some(cover) = cover_check(c, d_a / 2, d_b / 2)? else {
        return Ok(Decomposed::PreconditionFails);
    };
    let (col_type, row_type) = dual_tensor_spanning_set(ca, cb);
    let (ka, kb) = (ca.dimension(), cb.dimension());
    // col_type is ordered (A generator i, column b); row_type is (row a, B generator j).
    let mut basis = Vec::new();
    let mut is_row = Vec::new();
    for i in 0..ka {
        for &b in &cover.cols {
            basis.push(col_type[i * nb + b].clone());
            is_row.push(false);
        }
    }
    for &a in &cover.rows {
        for j in 0..kb {
            basis.push(row_type[a * kb + j].clone());
            is_row.push(true);
        }
    }
    let m = BitMatrix::from_rows(basis, na * nb)?;
    let coeffs = m
        .solve_membership(c.flat())?
        .ok_or_else(|| Error::Internal("covered dual tensor word outside the split span".into()))?;
    let mut row_part = BitVector::zeros(na * nb);
    let mut col_part = BitVector::zeros(na * nb);
    for i in coeffs.support() {
        if is_row[i] {
            row_part ^= m.row(i);
        } else {
            col_part ^= m.row(i);
        }
    }
    if &(&row_part ^ &col_part) != c.flat() {
        return Err(Error::Internal("decomposition does not re-sum to the input".into()));
    }
    let row_part = GridWord::from_flat(na, nb, row_part)?;
    let col_part = GridWord::from_flat(na, nb, col_part)?;
    let weight = c.weight();
    let (max_rows, max_cols) = robust_budgets(weight, d_a, d_b);
    let conclusion_holds = cover_check(c, max_rows, max_cols)?.is_some();
    Ok(Decomposed::Found(RowColDecomposition {
        row_part_rows: row_part.nonzero_rows().len(),
        col_part_cols: col_part.nonzero_cols().len(),
        row_part,
        col_part,
        premise_cover: cover,
        conclusion_holds,
    }))
}

/// H_A · X: column b is the C_A-syndrome of column b of `x`.
pub fn syndrome_grid(ca: &LinearCode, x: &GridWord) -> Result<BitMatrix> {
    ca.parity().mat_mul(&x.to_matrix())
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * ((p * (1.0 - p) / n) + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Full-rank random `rows × n` matrix, redrawn until full rank; returns the
/// number of redraws too.
fn full_rank_matrix(rows: usize, n: usize, rng: &mut ChaCha8Rng) -> (BitMatrix, usize) {
    let mut redraws = 0;
    loop {
        let m = BitMatrix::random(rows, n, rng);
        if m.rank() == rows {
            return (m, redraws);
        }
        redraws += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McConfig {
    pub delta: usize,
    pub rho_a: f64,
    pub rho_b: f64,
    pub w: usize,
    pub p: usize,
    pub trials: usize,
    pub seed: u64,
    /// Relative distance δ for the distance-fraction statistic.
    pub rel_distance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McReport {
    pub delta: usize,
    pub rho_a: f64,
    pub rho_b: f64,
    pub w: usize,
    pub p: usize,
    pub trials: usize,
    pub pass_fraction: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub resamples: usize,
    pub seed: u64,
    pub generator_rows_a: usize,
    pub parity_rows_b: usize,
    pub rel_distance: Option<f64>,
    /// Fraction of trials with min(d_A, d_B) ≥ δΔ.
    pub distance_fraction: Option<f64>,
}

/// Draws C_A from a uniform ⌊ρ_AΔ⌋×Δ generator matrix and C_B from a
/// uniform ⌊(1−ρ_B)Δ⌋×Δ parity-check matrix, redrawing rank-deficient
/// matrices, and checks w-robustness with p-resistance per trial.
pub fn mc_robustness(cfg: &McConfig) -> Result<McReport> {
    let d = cfg.delta;
    if d == 0 || d > 64 {
        return Err(Error::Contract("Δ must be between 1 and 64".into()));
    }
    if !(0.0..=1.0).contains(&cfg.rho_a) || !(0.0..=1.0).contains(&cfg.rho_b) {
        return Err(Error::Contract("rates must lie in [0, 1]".into()));
    }
    let rows_a = (cfg.rho_a * d as f64 + 1e-9).floor() as usize;
    let rows_b = ((1.0 - cfg.rho_b) * d as f64 + 1e-9).floor() as usize;
    let outcomes: Vec<(bool, usize, bool)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t as u64);
            let (ga, ra) = full_rank_matrix(rows_a, d, &mut rng);
            let (hb, rb) = full_rank_matrix(rows_b, d, &mut rng);
            let ca = if rows_a == 0 { LinearCode::zero(d) } else { LinearCode::from_generator(&ga)? };
            let cb = if rows_b == 0 { LinearCode::full(d) } else { LinearCode::from_parity(&hb)? };
            let pass = cfg.w < 1 || punctured_robustness_check(&ca, &cb, cfg.w, cfg.p)?.robust;
            let far = match cfg.rel_distance {
                Some(delta) => {
                    let need = delta * d as f64 - 1e-9;
                    ca.min_distance()?.min(cb.min_distance()?) as f64 >= need
                }
                None => false,
            };
            Ok((pass, ra + rb, far))
        })
        .collect::<Result<_>>()?;
    let passes = outcomes.iter().filter(|o| o.0).count();
    let (ci_low, ci_high) = wilson_interval(passes, cfg.trials);
    let frac = |k: usize| if cfg.trials == 0 { 1.0 } else { k as f64 / cfg.trials as f64 };
    Ok(McReport {
        delta: d,
        rho_a: cfg.rho_a,
        rho_b: cfg.rho_b,
        w: cfg.w,
        p: cfg.p,
        trials: cfg.trials,
        pass_fraction: frac(passes),
        ci_low,
        ci_high,
        resamples: outcomes.iter().map(|o| o.1).sum(),
        seed: cfg.seed,
        generator_rows_a: rows_a,
        parity_rows_b: rows_b,
        rel_distance: cfg.rel_distance,
        distance_fraction: cfg.rel_distance.map(|_| frac(outcomes.iter().filter(|o| o.2).count())),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbabilityReport {
    pub r: usize,
    pub n: usize,
    /// Punctured coordinates (0 for the unpunctured check).
    pub p: usize,
    pub v_count: usize,
    pub trials: usize,
    pub hits: usize,
    pub frequency: f64,
    /// 2^{−r|V|}, or the upper bound 2^{−(r−p)|V|} when punctured.
    pub reference: f64,
    pub sigma: f64,
    /// |frequency − reference| ≤ 3σ, or frequency ≤ reference + 3σ when punctured.
    pub within_3_sigma: bool,
    pub seed: u64,
}

fn independent_set(len: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<BitVector> {
    let mut basis = IncrementalBasis::new(len);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v = BitVector::random(len, rng);
        if basis.insert(&v) {
            out.push(v);
        }
    }
    out
}

fn count_hits<F>(trials: usize, seed: u64, hit: F) -> usize
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    let chunks = trials.div_ceil(TRIAL_CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = trial_rng(seed, 1 + c as u64);
            let len = TRIAL_CHUNK.min(trials - c * TRIAL_CHUNK);
            (0..len).filter(|_| hit(&mut rng)).count()
        })
        .sum()
}

fn check_random_code_args(r: usize, n: usize, v_count: usize) -> Result<()> {
    if r * v_count > RANDOM_CODE_GUARD {
        return Err(Error::capacity("random-code-r-times-v", RANDOM_CODE_GUARD, r * v_count));
    }
    if v_count > n {
        return Err(Error::Contract(format!("{v_count} independent vectors do not fit in length {n}")));
    }
    Ok(())
}

/// Frequency with which a fixed independent set V lies in the kernel of a
/// uniform random r×n matrix.
pub fn random_code_probability_check(r: usize, n: usize, v_count: usize, trials: usize, seed: u64) -> Result<ProbabilityReport> {
    check_random_code_args(r, n, v_count)?;
    let v = independent_set(n, v_count, &mut trial_rng(seed, 0));
    let hits = count_hits(trials, seed, |rng| {
        let h = BitMatrix::random(r, n, rng);
        v.iter().all(|x| h.mul_vec(x).unwrap().is_zero())
    });
    let reference = 0.5f64.powi((r * v_count) as i32);
    let frequency = if trials == 0 { 1.0 } else { hits as f64 / trials as f64 };
    let sigma = if trials == 0 { 0.0 } else { (reference * (1.0 - reference) / trials as f64).sqrt() };
    Ok(ProbabilityReport {
        r,
        n,
        p: 0,
        v_count,
        trials,
        hits,
        frequency,
        reference,
        sigma,
        within_3_sigma: (frequency - reference).abs() <= 3.0 * sigma + 1e-12,
        seed,
    })
}

/// Frequency with which a fixed independent set V ⊂ F₂^{n−p} lies in the
/// code punctured on the first p coordinates: x is in it iff H_p x lies in
/// the span of the first p columns of H.
pub fn punctured_code_probability_check(
    r: usize,
    n: usize,
    p: usize,
    v_count: usize,
    trials: usize,
    seed: u64,
) -> Result<ProbabilityReport> {
    if p >= n {
        return Err(Error::Contract("puncturing must leave at least one coordinate".into()));
    }
    check_random_code_args(r, n - p, v_count)?;
    let v = independent_set(n - p, v_count, &mut trial_rng(seed, 0));
    let hits = count_hits(trials, seed, |rng| {
        let h = BitMatrix::random(r, n, rng);
        let ht = h.transpose();
        let mut w = IncrementalBasis::new(r);
        for col in &ht.rows()[..p] {
            w.insert(col);
        }
        let hp = BitMatrix::from_rows(ht.rows()[p..].to_vec(), r).unwrap().transpose();
        v.iter().all(|x| w.contains(&hp.mul_vec(x).unwrap()))
    });
    let reference = 0.5f64.powi((r.saturating_sub(p) * v_count) as i32);
    let frequency = if trials == 0 { 1.0 } else { hits as f64 / trials as f64 };
    let sigma = if trials == 0 { 0.0 } else { (reference * (1.0 - reference) / trials as f64).sqrt() };
    Ok(ProbabilityReport {
        r,
        n,
        p,
        v_count,
        trials,
        hits,
        frequency,
        reference,
        sigma,
        within_3_sigma: frequency <= reference + 3.0 * sigma + 1e-12,
        seed,
    })
}
