//! `qtanner`: one subcommand per experiment, each emitting a JSON report.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use qtanner_core::code::LinearCode;
use qtanner_core::complex::{complex_report, LeftRightComplex};
use qtanner_core::css::{build_css, BasisChoice, DistanceSearch, PauliSide};
use qtanner_core::decoder::{DecoderConfig, MismatchDecoder, MoveSet};
use qtanner_core::group::{check_symmetric_set, check_tnc, FiniteGroup, GeneratorSet, Side};
use qtanner_core::robust::{
    mc_robustness, punctured_code_probability_check, punctured_robustness_check, random_code_probability_check,
    robustness_check, McConfig,
};
use qtanner_core::tanner::build_ltc;
use qtanner_core::BitVector;

#[derive(Parser, Serialize)]
#[command(name = "qtanner", version, about = "Quantum Tanner code experiments on left-right Cayley complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Group file (`cyclic r0 r1 ...`, `table`, or `perm`).
    #[arg(long, global = true)]
    group: Option<PathBuf>,
    /// Left generator set: element indices.
    #[arg(long, global = true)]
    gens_a: Option<PathBuf>,
    /// Right generator set: element indices.
    #[arg(long, global = true)]
    gens_b: Option<PathBuf>,
    /// Code file, or a builtin: @rep<n>, @parity<n>, @full<n>, @hamming, @hamming-dual.
    #[arg(long, global = true)]
    code_a: Option<String>,
    #[arg(long, global = true)]
    code_b: Option<String>,
    /// Robustness weight w, or error weight for `decode`.
    #[arg(long, global = true)]
    w: Option<usize>,
    /// Puncturing depth.
    #[arg(long, global = true)]
    p: Option<usize>,
    /// Relative distance δ.
    #[arg(long, global = true)]
    delta: Option<f64>,
    #[arg(long, global = true, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here; the summary then goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest dimension enumerated exhaustively.
    #[arg(long, global = true, default_value_t = 22)]
    guard_dim: usize,
    /// Component length Δ for `robust-mc`.
    #[arg(long, global = true)]
    degree: Option<usize>,
    #[arg(long, global = true)]
    rho_a: Option<f64>,
    #[arg(long, global = true)]
    rho_b: Option<f64>,
    /// Rows of the random parity-check matrix for `randcode-check`.
    #[arg(long, global = true)]
    r: Option<usize>,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    v_count: Option<usize>,
    /// Decoder threshold override.
    #[arg(long, global = true)]
    threshold: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Basis::Generator)]
    basis: Basis,
    /// Candidate moves for the decoder.
    #[arg(long, global = true, value_enum, default_value_t = Moves::Exhaustive)]
    moves: Moves,
    /// Error weights for `test-ltc`, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    weights: Option<Vec<usize>>,
    /// A 0/1 word to decode instead of random samples.
    #[arg(long, global = true)]
    word: Option<String>,
}

#[derive(Subcommand, Serialize, Clone, Copy)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Build the complex and report spectra.
    Complex,
    /// Check total no-conjugacy.
    Tnc,
    /// Parameters of the locally testable code.
    Ltc,
    /// Parameters of the quantum Tanner code.
    Css,
    /// Exact and heuristic quantum distances.
    Distance,
    /// Run the mismatch decoder.
    Decode,
    /// Empirical local testability.
    TestLtc,
    /// Exhaustive w-robustness, with puncturing when --p is given.
    Robust,
    /// Monte-Carlo robustness of random component codes.
    RobustMc,
    /// Random-code membership probabilities.
    RandcodeCheck,
}

#[derive(ValueEnum, Serialize, Clone, Copy)]
#[serde(rename_all = "kebab-case")]
enum Basis {
    Generator,
    MinWeight,
}

#[derive(ValueEnum, Serialize, Clone, Copy)]
#[serde(rename_all = "kebab-case")]
enum Moves {
    Exhaustive,
    MinWeightGenerators,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn need<'a, T>(value: &'a Option<T>, flag: &str) -> Result<&'a T> {
    value.as_ref().ok_or_else(|| anyhow!("missing --{flag}"))
}

fn builtin_code(name: &str) -> Result<LinearCode> {
    let sized = |prefix: &str| -> Option<usize> { name.strip_prefix(prefix)?.parse().ok().filter(|&n| n > 0) };
    if let Some(n) = sized("rep") {
        return Ok(LinearCode::repetition(n));
    }
    if let Some(n) = sized("parity") {
        return Ok(LinearCode::single_parity(n));
    }
    if let Some(n) = sized("full") {
        return Ok(LinearCode::full(n));
    }
    match name {
        "hamming" => Ok(LinearCode::hamming_7_4()),
        "hamming-dual" => Ok(LinearCode::hamming_7_4().dual()),
        _ => bail!("unknown builtin code @{name}"),
    }
}

fn load_code(source: &str) -> Result<LinearCode> {
    if let Some(name) = source.strip_prefix('@') {
        return builtin_code(name);
    }
    let text = read(Path::new(source))?;
    LinearCode::parse_text(&text).with_context(|| format!("in code file {source}"))
}

struct Inputs {
    group: FiniteGroup,
    a: GeneratorSet,
    b: GeneratorSet,
}

fn load_sets(cli: &Cli) -> Result<Inputs> {
    let gpath = need(&cli.group, "group")?;
    let group = FiniteGroup::parse_text(&read(gpath)?).with_context(|| format!("in group file {}", gpath.display()))?;
    let load = |path: &PathBuf, side| {
        GeneratorSet::parse_text(&group, &read(path)?, side).with_context(|| format!("in generator file {}", path.display()))
    };
    let a = load(need(&cli.gens_a, "gens-a")?, Side::Left)?;
    let b = load(need(&cli.gens_b, "gens-b")?, Side::Right)?;
    Ok(Inputs { group, a, b })
}

fn load_complex(cli: &Cli) -> Result<LeftRightComplex> {
    let Inputs { group, a, b } = load_sets(cli)?;
    Ok(LeftRightComplex::build(group, a, b)?)
}

fn load_codes(cli: &Cli) -> Result<(LinearCode, LinearCode)> {
    Ok((load_code(need(&cli.code_a, "code-a")?)?, load_code(need(&cli.code_b, "code-b")?)?))
}

fn basis(cli: &Cli) -> BasisChoice {
    match cli.basis {
        Basis::Generator => BasisChoice::Generator,
        Basis::MinWeight => BasisChoice::MinWeight,
    }
}

fn decoder(cli: &Cli) -> Result<MismatchDecoder> {
    let x = load_complex(cli)?;
    let (ca, cb) = load_codes(cli)?;
    let config = DecoderConfig {
        rel_distance: cli.delta,
        epsilon: cli.epsilon,
        threshold_override: cli.threshold,
        moves: match cli.moves {
            Moves::Exhaustive => MoveSet::Exhaustive,
            Moves::MinWeightGenerators => MoveSet::MinWeightGenerators,
        },
    };
    Ok(MismatchDecoder::new(&x, &ca, &cb, config)?)
}

fn distance_entry(search: &DistanceSearch) -> Value {
    match search {
        DistanceSearch::NoLogicals => json!({ "weight": null }),
        DistanceSearch::Found { weight, restart, witness } => {
            json!({ "weight": weight, "restart": restart, "witness_support": witness.support() })
        }
    }
}

/// Runs the command and returns (report, summary).
fn execute(cli: &Cli) -> Result<(Value, String)> {
    let trials = cli.trials;
    Ok(match cli.command {
        Command::Complex => {
            let Inputs { group, a, b } = load_sets(cli)?;
            let r = complex_report(&group, &a, &b)?;
            let summary = format!(
                "|G| = {}, Δ = {}, |Q| = {}, TNC {}, λ_A = {:.4}, λ_B = {:.4}",
                r.order,
                r.delta,
                r.n_squares.map_or("-".into(), |q| q.to_string()),
                if r.tnc { "holds" } else { "fails" },
                r.lambda_a,
                r.lambda_b
            );
            (serde_json::to_value(r)?, summary)
        }
        Command::Tnc => {
            let Inputs { group, a, b } = load_sets(cli)?;
            let v = check_tnc(&group, &a, &b)?;
            let report = json!({
                "tnc": v.holds(),
                "witness": v,
                "a_symmetric": check_symmetric_set(&group, &a),
                "b_symmetric": check_symmetric_set(&group, &b),
            });
            (report, format!("TNC {}", if v.holds() { "holds" } else { "violated" }))
        }
        Command::Ltc => {
            let x = load_complex(cli)?;
            let (ca, cb) = load_codes(cli)?;
            let (_, r) = build_ltc(&x, &ca, &cb, cli.guard_dim)?;
            let summary = format!(
                "n = {}, k = {}, rate {:.4} (bound {:.4}), d = {}",
                r.n,
                r.k,
                r.rate,
                r.rate_bound,
                r.exact_distance.map_or("not computed".into(), |d| d.to_string())
            );
            (serde_json::to_value(r)?, summary)
        }
        Command::Css => {
            let x = load_complex(cli)?;
            let (ca, cb) = load_codes(cli)?;
            let code = build_css(&x, &ca, &cb, basis(cli))?;
            let r = code.report(trials.unwrap_or(50), cli.seed, cli.guard_dim)?;
            let summary = format!(
                "n = {}, k = {}, max row weight {}, max column weight {}, d_X ≤ {:?}, d_Z ≤ {:?}",
                r.n, r.k, r.row_weight_max, r.col_weight_max, r.dx_upper, r.dz_upper
            );
            (serde_json::to_value(r)?, summary)
        }
        Command::Distance => {
            let x = load_complex(cli)?;
            let (ca, cb) = load_codes(cli)?;
            let code = build_css(&x, &ca, &cb, basis(cli))?;
            let mut report = json!({ "n": code.n(), "k": code.dimension() });
            let mut parts = Vec::new();
            for (side, key) in [(PauliSide::X, "x"), (PauliSide::Z, "z")] {
                let upper = code.distance_upper_bound(side, trials.unwrap_or(100), cli.seed)?;
                let exact = match code.exact_distance_small(side, cli.guard_dim) {
                    Ok(e) => json!({ "weight": e.weight, "witness_support": e.witness.map(|w| w.support()) }),
                    Err(qtanner_core::Error::Capacity { .. }) => Value::Null,
                    Err(e) => return Err(e.into()),
                };
                parts.push(format!("d_{key} ≤ {:?}, exact {}", upper.weight(), exact["weight"]));
                report[format!("upper_{key}")] = distance_entry(&upper);
                report[format!("exact_{key}")] = exact;
            }
            (report, parts.join("; "))
        }
        Command::Decode => {
            let dec = decoder(cli)?;
            if let Some(word) = &cli.word {
                let x: BitVector = word.parse().map_err(|e| anyhow!("--word: {e}"))?;
                if x.len() != dec.ltc().len() {
                    bail!("--word has length {} but the code has length {}", x.len(), dec.ltc().len());
                }
                let s = dec.decode_summary(&x, None)?;
                let summary = format!("{} after {} steps", s.outcome, s.gains.len());
                (serde_json::to_value(s)?, summary)
            } else {
                let r = dec.decode_experiment(trials.unwrap_or(20), cli.w.unwrap_or(1), cli.seed)?;
                let summary = format!(
                    "{} samples: {} decoded ({} to the original), {} far from code, {} stalled; threshold {:.3}",
                    r.samples, r.decoded, r.recovered, r.far_from_code, r.stalled, r.threshold
                );
                (serde_json::to_value(r)?, summary)
            }
        }
        Command::TestLtc => {
            let dec = decoder(cli)?;
            let weights = cli.weights.clone().unwrap_or_else(|| vec![1, 2, 3, 4]);
            let r = dec.testability_experiment(trials.unwrap_or(50), &weights, cli.seed)?;
            let summary = format!(
                "{} samples, min ζn/d = {:?}, measured a = {:?}, {} stalls",
                r.samples, r.min_ratio, r.a_measured, r.stalls
            );
            (serde_json::to_value(r)?, summary)
        }
        Command::Robust => {
            let (ca, cb) = load_codes(cli)?;
            let w = *need(&cli.w, "w")?;
            match cli.p {
                Some(p) => {
                    let v = punctured_robustness_check(&ca, &cb, w, p)?;
                    let summary = format!(
                        "{}-robust with {p}-resistance to puncturing: {} ({} punctures checked)",
                        w, v.robust, v.punctures_checked
                    );
                    (serde_json::to_value(v)?, summary)
                }
                None => {
                    let v = robustness_check(&ca, &cb, w)?;
                    let summary = format!("{w}-robust: {} ({} codewords checked)", v.robust, v.checked);
                    (serde_json::to_value(v)?, summary)
                }
            }
        }
        Command::RobustMc => {
            let cfg = McConfig {
                delta: *need(&cli.degree, "degree")?,
                rho_a: *need(&cli.rho_a, "rho-a")?,
                rho_b: *need(&cli.rho_b, "rho-b")?,
                w: *need(&cli.w, "w")?,
                p: cli.p.unwrap_or(0),
                trials: trials.unwrap_or(100),
                seed: cli.seed,
                rel_distance: cli.delta,
            };
            let r = mc_robustness(&cfg)?;
            let summary = format!(
                "Δ = {}: pass fraction {:.3} [{:.3}, {:.3}] over {} trials",
                r.delta, r.pass_fraction, r.ci_low, r.ci_high, r.trials
            );
            (serde_json::to_value(r)?, summary)
        }
        Command::RandcodeCheck => {
            let (r, n, v) = (*need(&cli.r, "r")?, *need(&cli.n, "n")?, *need(&cli.v_count, "v-count")?);
            let t = trials.unwrap_or(100_000);
            let rep = match cli.p {
                Some(p) if p > 0 => punctured_code_probability_check(r, n, p, v, t, cli.seed)?,
                _ => random_code_probability_check(r, n, v, t, cli.seed)?,
            };
            let summary = format!(
                "frequency {:.5} vs {:.5} (σ = {:.5}): {}",
                rep.frequency,
                rep.reference,
                rep.sigma,
                if rep.within_3_sigma { "within 3σ" } else { "outside 3σ" }
            );
            (serde_json::to_value(rep)?, summary)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok((report, summary)) => {
            let full = json!({
                "command": cli.command,
                "config": &cli,
                "report": report,
            });
            let text = serde_json::to_string_pretty(&full).expect("reports serialize") + "\n";
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                    println!("{summary}");
                }
                None => {
                    print!("{text}");
                    eprintln!("{summary}");
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
