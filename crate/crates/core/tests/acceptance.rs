//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero on any failure other than a documented, oracle-confirmed one.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use qtanner_core::code::{dual_tensor_code, tensor_code, GridWord, LinearCode};
use qtanner_core::complex::{int_mat_mul, LeftRightComplex};
use qtanner_core::css::{build_css, BasisChoice, PauliSide};
use qtanner_core::decoder::{DecodeOutcome, DecoderConfig, MismatchDecoder};
use qtanner_core::group::{FiniteGroup, GeneratorSet, Side};
use qtanner_core::robust::{
    punctured_code_probability_check, random_code_probability_check, robust_budgets, robustness_check,
    tensor_closeness_check,
};
use qtanner_core::tanner::TannerInstance;
use qtanner_core::{BitMatrix, BitVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    /// The result differs from the stated target but matches an independent oracle.
    known: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome { pass, known: false, detail }
    }
}

fn tight_closeness() -> Outcome {
    let c = LinearCode::from_generator(&BitMatrix::from_strs(&["111100", "110011"]).unwrap()).unwrap();
    let x = GridWord::from_strs(&["111100", "110011", "100000", "100000", "010000", "010000"]).unwrap();
    let t = tensor_closeness_check(&c, &c, &x).unwrap();
    let triple = (t.d_col, t.d_row, t.d_tensor);
    // Brute force over all 16 tensor codewords, written out independently.
    let gens = c.generator().rows().to_vec();
    let mut oracle = usize::MAX;
    for m in 0u32..16 {
        let mut w = BitVector::zeros(36);
        for (k, (ga, gb)) in [(0, 0), (0, 1), (1, 0), (1, 1)].iter().enumerate() {
            if (m >> k) & 1 == 1 {
                for a in gens[*ga].support() {
                    for b in gens[*gb].support() {
                        w.flip(a * 6 + b);
                    }
                }
            }
        }
        oracle = oracle.min(w.distance(x.flat()));
    }
    let pass = triple == (4, 4, 6) && t.bound_holds;
    Outcome {
        pass,
        known: !pass && triple == (4, 4, oracle) && oracle == 12 && t.bound_holds,
        detail: format!(
            "(d_col, d_row, d_tensor) = {triple:?}, 3/2 bound holds: {}; brute-force tensor distance {oracle}, target was (4, 4, 6)",
            t.bound_holds
        ),
    }
}

fn z8z2_complex() -> LeftRightComplex {
    let g = FiniteGroup::cyclic_product(&[8, 2]).unwrap();
    let a = GeneratorSet::new(&g, (1..8).map(|a| a * 2).collect(), Side::Left).unwrap();
    let b = GeneratorSet::new(&g, (0..8).filter(|&b| b != 4).map(|b| b * 2 + 1).collect(), Side::Right).unwrap();
    LeftRightComplex::build(g, a, b).unwrap()
}

fn example_392() -> Outcome {
    let x = z8z2_complex();
    let h = LinearCode::hamming_7_4();
    let code = build_css(&x, &h, &h.dual(), BasisChoice::MinWeight).unwrap();
    let orth = code.h_z().mat_mul(&code.h_x().transpose()).unwrap().is_zero();
    let weights: Vec<usize> = code.h_z().row_weights().into_iter().chain(code.h_x().row_weights()).collect();
    let all12 = weights.iter().all(|&w| w == 12);
    let k = code.dimension();
    Outcome::new(
        code.n() == 392 && orth && k >= 8 && all12,
        format!("n = {}, k = {k}, h_z·h_xᵀ = 0: {orth}, {} generators all of weight 12: {all12}", code.n(), weights.len()),
    )
}

fn random_symmetric_set(g: &FiniteGroup, size: usize, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    let mut set: Vec<usize> = Vec::new();
    for _ in 0..64 {
        if set.len() == size {
            set.sort_unstable();
            return Some(set);
        }
        let e = rng.gen_range(1..g.order());
        let inv = g.inv(e);
        if set.contains(&e) {
            continue;
        }
        let add = if inv == e { 1 } else { 2 };
        if set.len() + add <= size {
            set.push(e);
            if inv != e {
                set.push(inv);
            }
        }
    }
    None
}

fn random_complex(rng: &mut ChaCha8Rng) -> Option<LeftRightComplex> {
    let g = match rng.gen_range(0..4) {
        0 => FiniteGroup::cyclic_product(&[rng.gen_range(4..13)]).unwrap(),
        1 => FiniteGroup::cyclic_product(&[rng.gen_range(2..7), 2]).unwrap(),
        2 => FiniteGroup::dihedral(rng.gen_range(3..7)).unwrap(),
        _ => FiniteGroup::from_permutations(4, &[vec![1, 0, 2, 3], vec![1, 2, 3, 0]]).unwrap(),
    };
    let delta = rng.gen_range(2..5);
    let a = random_symmetric_set(&g, delta, rng)?;
    let b = random_symmetric_set(&g, delta, rng)?;
    let a = GeneratorSet::new(&g, a, Side::Left).ok()?;
    let b = GeneratorSet::new(&g, b, Side::Right).ok()?;
    LeftRightComplex::build(g, a, b).ok()
}

fn random_code(n: usize, dim: usize, rng: &mut ChaCha8Rng) -> LinearCode {
    loop {
        let g = BitMatrix::random(dim, n, rng);
        if g.rank() == dim {
            return LinearCode::from_generator(&g).unwrap();
        }
    }
}

fn check_complex(x: &LeftRightComplex, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (d, n) = (x.delta(), x.side_size());
    let grp = x.group();
    let (a, b) = (x.a_set().elements(), x.b_set().elements());
    if 2 * x.n_squares() != d * d * n {
        return Err(format!("|Q| = {} for Δ = {d}, |G| = {n}", x.n_squares()));
    }
    for g in 0..n {
        for i in 0..d {
            for j in 0..d {
                let partner = (grp.mul(grp.mul(a[i], g), b[j]), x.inverse_a(i), x.inverse_b(j));
                if partner == (g, i, j) {
                    return Err(format!("square involution fixes ({g}, {i}, {j})"));
                }
                if x.square_id(g, i, j) != x.square_id(partner.0, partner.1, partner.2) {
                    return Err("involution partners name different squares".into());
                }
            }
        }
    }
    for q in 0..x.n_squares() {
        let v = x.square_vertices(q);
        if (0..4).any(|s| (s + 1..4).any(|t| v[s] == v[t])) {
            return Err(format!("square {q} has repeated vertices"));
        }
    }
    let gr = x.graphs();
    let (ma, mb) = (gr.g_a.adjacency(), gr.g_b.adjacency());
    if int_mat_mul(&ma, &mb) != int_mat_mul(&mb, &ma) {
        return Err("M_A M_B ≠ M_B M_A".into());
    }
    let mut counts = vec![0usize; x.n_squares()];
    for v in 0..2 * n {
        for q in x.local_view(v) {
            counts[q] += 1;
        }
    }
    if counts.iter().any(|&c| c != 4) {
        return Err("a square is not in exactly 4 views".into());
    }
    for g in 0..n {
        let view = x.local_view(g);
        for i in 0..d {
            let other = x.local_view(n + grp.mul(a[i], g));
            if (0..d).any(|j| view[i * d + j] != other[x.inverse_a(i) * d + j]) {
                return Err("row sharing fails".into());
            }
        }
        for j in 0..d {
            let other = x.local_view(n + grp.mul(g, b[j]));
            if (0..d).any(|i| view[i * d + j] != other[i * d + x.inverse_b(j)]) {
                return Err("column sharing fails".into());
            }
        }
    }
    let ka = rng.gen_range(1..d);
    let ca = random_code(d, ka, rng);
    // Half the draws use the balanced pair ρ_B = 1 − ρ_A.
    let cb = if rng.gen() { random_code(d, d - ka, rng) } else { random_code(d, rng.gen_range(1..d), rng) };
    let code = build_css(x, &ca, &cb, BasisChoice::Generator).map_err(|e| e.to_string())?;
    if !code.h_z().mat_mul(&code.h_x().transpose()).unwrap().is_zero() {
        return Err("CSS orthogonality fails".into());
    }
    let c0 = TannerInstance::on_complex(x, 0, dual_tensor_code(&ca.dual(), &cb.dual())).unwrap().dimension();
    let c1 = TannerInstance::on_complex(x, 1, dual_tensor_code(&ca, &cb)).unwrap().dimension();
    let nq = x.n_squares();
    if code.dimension() + nq != c0 + c1 {
        return Err(format!("k = {} but dim 𝒞₀ + dim 𝒞₁ − n = {}", code.dimension(), c0 + c1 - nq));
    }
    if ca.dimension() + cb.dimension() == d {
        let rho = ca.rate();
        if (code.dimension() as f64) < (2.0 * rho - 1.0).powi(2) * nq as f64 - 1e-9 {
            return Err("k below (2ρ − 1)² n".into());
        }
    }
    Ok(())
}

fn fuzz_structures() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x51);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 120 && attempts < 20_000 {
        attempts += 1;
        let Some(x) = random_complex(&mut rng) else { continue };
        if let Err(e) = check_complex(&x, &mut rng) {
            return Outcome::new(false, format!("complex #{checked} ({}): {e}", x.group().description()));
        }
        checked += 1;
    }
    Outcome::new(checked >= 100, format!("{checked} random complexes checked"))
}

fn code_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0DE);
    let mut pairs = 0;
    for _ in 0..400 {
        let (na, nb) = (rng.gen_range(2..7), rng.gen_range(2..7));
        let ca = random_code(na, rng.gen_range(1..=na), &mut rng);
        let cb = random_code(nb, rng.gen_range(1..=nb), &mut rng);
        let dual = dual_tensor_code(&ca, &cb);
        if dual.dimension() > 20 {
            continue;
        }
        let t = tensor_code(&ca, &cb);
        let (ka, kb) = (ca.dimension(), cb.dimension());
        let (da, db) = (ca.min_distance().unwrap(), cb.min_distance().unwrap());
        let fails = [
            (t.dimension() != ka * kb, "tensor dimension"),
            (t.min_distance().unwrap() != da * db, "tensor distance"),
            (dual.dimension() != ka * nb + na * kb - ka * kb, "dual tensor dimension"),
            (dual.min_distance().unwrap() != da.min(db), "dual tensor distance"),
        ];
        if let Some((_, what)) = fails.iter().find(|f| f.0) {
            return Outcome::new(false, format!("{what} fails for [{na},{ka},{da}] ⊗ [{nb},{kb},{db}]"));
        }
        pairs += 1;
    }
    Outcome::new(pairs >= 100, format!("{pairs} code pairs verified"))
}

/// Tries every (A′, B′) pair within the budgets.
fn brute_robust(ca: &LinearCode, cb: &LinearCode, w: usize) -> Option<BitVector> {
    let (na, nb) = (ca.len(), cb.len());
    let (da, db) = (ca.min_distance().unwrap(), cb.min_distance().unwrap());
    let mut worst: Option<BitVector> = None;
    for c in dual_tensor_code(ca, cb).codewords().unwrap() {
        let wt = c.weight();
        if wt == 0 || wt > w {
            continue;
        }
        let (max_rows, max_cols) = robust_budgets(wt, da, db);
        let covered = (0u32..1 << na).any(|rows| {
            rows.count_ones() as usize <= max_rows
                && (0u32..1 << nb).any(|cols| {
                    cols.count_ones() as usize <= max_cols
                        && c.support().iter().all(|&q| (rows >> (q / nb)) & 1 == 1 || (cols >> (q % nb)) & 1 == 1)
                })
        });
        if !covered {
            let better = worst
                .as_ref()
                .is_none_or(|o| wt < o.weight() || (wt == o.weight() && c.lex_cmp(o).is_lt()));
            if better {
                worst = Some(c);
            }
        }
    }
    worst
}

fn robustness_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x20B);
    let (mut instances, mut robust, mut fragile) = (0, 0, 0);
    while instances < 80 {
        let delta = rng.gen_range(3..7);
        // Two-dimensional components fail robustness more often.
        let dim = |rng: &mut ChaCha8Rng| if rng.gen() { 2 } else { rng.gen_range(1..delta) };
        let (ka, kb) = (dim(&mut rng), dim(&mut rng));
        let ca = random_code(delta, ka, &mut rng);
        let cb = random_code(delta, kb, &mut rng);
        if dual_tensor_code(&ca, &cb).dimension() > 16 {
            continue;
        }
        let w = if rng.gen() { delta * delta } else { rng.gen_range(1..=delta * delta) };
        let fast = robustness_check(&ca, &cb, w).unwrap();
        let oracle = brute_robust(&ca, &cb, w);
        let oracle_witness = oracle.as_ref().map(|v| {
            let g = GridWord::from_flat(delta, delta, v.clone()).unwrap();
            (0..delta).map(|a| g.row(a).to_string()).collect::<Vec<_>>()
        });
        if fast.robust != oracle.is_none() || fast.witness != oracle_witness {
            return Outcome::new(false, format!("disagreement at instance {instances}, Δ = {delta}, w = {w}"));
        }
        if fast.robust {
            robust += 1;
        } else {
            fragile += 1;
        }
        instances += 1;
    }
    Outcome::new(true, format!("{instances} instances agree ({robust} robust, {fragile} not)"))
}

fn toy_complex() -> LeftRightComplex {
    let g = FiniteGroup::cyclic_product(&[4, 2]).unwrap();
    let a = GeneratorSet::new(&g, vec![2, 4, 6], Side::Left).unwrap();
    let b = GeneratorSet::new(&g, vec![1, 3, 7], Side::Right).unwrap();
    LeftRightComplex::build(g, a, b).unwrap()
}

fn decoder_contract() -> Outcome {
    let x = toy_complex();
    let r3 = LinearCode::repetition(3);
    let n = x.n_squares();
    let config = DecoderConfig {
        threshold_override: Some(n as f64 + 1.0),
        ..DecoderConfig::default()
    };
    let dec = MismatchDecoder::new(&x, &r3, &r3, config).unwrap();
    let css = build_css(&x, &r3, &r3, BasisChoice::Generator).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xDEC);
    for _ in 0..20 {
        let c = dec.random_codeword(&mut rng);
        match dec.run(&c).unwrap().outcome {
            DecodeOutcome::Decoded { codeword } if codeword == c => {}
            _ => return Outcome::new(false, "a codeword did not decode to itself".into()),
        }
    }
    let generators: Vec<BitVector> = css.h_z().rows().iter().chain(css.h_x().rows()).cloned().collect();
    let (mut runs, mut good, mut bound_checked) = (0, 0, 0);
    for g in &generators {
        for _ in 0..5 {
            let input = &dec.random_codeword(&mut rng) ^ g;
            let zeta = dec.ltc().tester_exact(&input);
            let run = dec.run(&input).unwrap();
            runs += 1;
            if run.z_weights.windows(2).any(|w| w[1] >= w[0]) {
                return Outcome::new(false, "mismatch weight did not strictly decrease".into());
            }
            if let DecodeOutcome::Decoded { codeword } = &run.outcome {
                if dec.ltc().tester_exact(codeword) == 0.0 {
                    good += 1;
                }
                let factor = run.measured_a(x.delta()).map_or(1.0, |a| 1.0 + 1.0 / a);
                if codeword.distance(&input) as f64 > n as f64 * factor * zeta + 1e-9 {
                    return Outcome::new(false, "d(x, c′) ≤ n(1 + 1/â)ζ(x) fails".into());
                }
                bound_checked += 1;
            }
        }
    }
    let fraction = good as f64 / runs as f64;
    Outcome::new(
        fraction >= 0.95,
        format!("{good}/{runs} single-generator corruptions decoded to codewords; bound held on {bound_checked} converged runs"),
    )
}

fn random_code_statistics() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (i, &(r, v)) in [(1, 1), (2, 1), (2, 2)].iter().enumerate() {
        let rep = random_code_probability_check(r, 8, v, 100_000, 70 + i as u64).unwrap();
        pass &= rep.within_3_sigma;
        lines.push(format!("r={r},|V|={v}: {:.4} vs {:.4}", rep.frequency, rep.reference));
    }
    for (i, &(r, p, v)) in [(2, 1, 1), (3, 1, 2), (3, 2, 2), (4, 2, 3), (2, 2, 1)].iter().enumerate() {
        let rep = punctured_code_probability_check(r, 8, p, v, 100_000, 90 + i as u64).unwrap();
        pass &= rep.within_3_sigma;
        lines.push(format!("punctured r={r},p={p},|V|={v}: {:.4} ≤ {:.4}", rep.frequency, rep.reference));
    }
    Outcome::new(pass, lines.join("; "))
}

/// Exact distances of the toy code with C_A = rep3, C_B = its dual, frozen
/// after cross-checking the two routes.
const TOY_DX: usize = 3;
const TOY_DZ: usize = 3;

fn exact_distance() -> Outcome {
    let x = toy_complex();
    let r3 = LinearCode::repetition(3);
    let code = build_css(&x, &r3, &r3.dual(), BasisChoice::Generator).unwrap();
    let mut parts = Vec::new();
    let mut pass = code.dim_c1() <= 26;
    for (side, anchor) in [(PauliSide::Z, TOY_DZ), (PauliSide::X, TOY_DX)] {
        let exact = code.exact_distance_small(side, 26).unwrap().weight;
        let upper = code.distance_upper_bound(side, 200, 7).unwrap().weight().unwrap_or(code.n() + 1);
        pass &= exact == upper && exact == anchor;
        parts.push(format!("{side:?}: exact {exact}, search {upper}, anchor {anchor}"));
    }
    Outcome::new(
        pass,
        format!("n = {}, k = {}, dim 𝒞₁ = {}; {}", code.n(), code.dimension(), code.dim_c1(), parts.join("; ")),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("tensor closeness example", tight_closeness),
        ("392-qubit example", example_392),
        ("structural invariants fuzz", fuzz_structures),
        ("code-theory identities", code_identities),
        ("robustness oracle equivalence", robustness_oracle),
        ("mismatch decoder contract", decoder_contract),
        ("random code statistics", random_code_statistics),
        ("exact quantum distance", exact_distance),
    ];
    let mut hard_failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Outcome::new(false, "panicked".into()));
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        let note = if outcome.known { " [matches independent oracle; target value unattainable]" } else { "" };
        println!(
            "criterion {}: {verdict} {name} ({:.2}s): {}{note}",
            i + 1,
            start.elapsed().as_secs_f64(),
            outcome.detail
        );
        if !outcome.pass && !outcome.known {
            hard_failures += 1;
        }
    }
    if hard_failures > 0 {
        std::process::exit(1);
    }
}
