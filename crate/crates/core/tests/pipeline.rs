use qtanner_core::code::LinearCode;
use qtanner_core::complex::LeftRightComplex;
use qtanner_core::css::{build_css, BasisChoice, PauliSide};
use qtanner_core::decoder::{DecoderConfig, MismatchDecoder};
use qtanner_core::group::{FiniteGroup, GeneratorSet, Side};
use qtanner_core::robust::{mc_robustness, McConfig};
use qtanner_core::tanner::build_ltc;

fn z8z2() -> LeftRightComplex {
    let g = FiniteGroup::cyclic_product(&[8, 2]).unwrap();
    let a = GeneratorSet::new(&g, vec![2, 4, 6, 8, 10, 12, 14], Side::Left).unwrap();
    let b = GeneratorSet::new(&g, vec![1, 3, 5, 7, 11, 13, 15], Side::Right).unwrap();
    LeftRightComplex::build(g, a, b).unwrap()
}

#[test]
fn hamming_example_end_to_end() {
    let x = z8z2();
    let h = LinearCode::hamming_7_4();
    let code = build_css(&x, &h, &h.dual(), BasisChoice::Generator).unwrap();
    assert_eq!(code.n(), 392);
    assert_eq!(code.dimension(), 12);
    assert!(code.dimension() as f64 >= code.rate_bound() * 392.0);
    let search = code.distance_upper_bound(PauliSide::Z, 20, 1).unwrap();
    assert_eq!(search, code.distance_upper_bound(PauliSide::Z, 20, 1).unwrap());
    assert!(search.weight().is_some());

    let (_, ltc) = build_ltc(&x, &h, &h, 0).unwrap();
    assert_eq!(ltc.n, 392);
    assert!(ltc.rate >= ltc.rate_bound);
    assert_eq!(ltc.exact_distance, None);
}

#[test]
fn decoder_recovers_single_flips_on_the_hamming_ltc() {
    let x = z8z2();
    let h = LinearCode::hamming_7_4();
    let config = DecoderConfig { threshold_override: Some(1000.0), ..DecoderConfig::default() };
    let dec = MismatchDecoder::new(&x, &h, &h, config).unwrap();
    let r = dec.decode_experiment(6, 1, 2).unwrap();
    assert_eq!(r.stalled, 0);
    assert_eq!(r.recovered, 6);
}

#[test]
fn robustness_pass_fraction_by_degree() {
    // Reported only: at these sizes the trend need not be monotone.
    for delta in [4, 5, 6] {
        let cfg = McConfig {
            delta,
            rho_a: 1.0 / 3.0,
            rho_b: 1.0 / 3.0,
            w: delta * delta / 2,
            p: 1,
            trials: 20,
            seed: 17,
            rel_distance: Some(0.25),
        };
        let r = mc_robustness(&cfg).unwrap();
        println!("Δ = {delta}: pass {:.2} [{:.2}, {:.2}]", r.pass_fraction, r.ci_low, r.ci_high);
        assert!(r.ci_low <= r.pass_fraction && r.pass_fraction <= r.ci_high);
        assert!(r.distance_fraction.is_some());
    }
}
