//! Divergence thresholds for landscape pathologies.
//!
//! Read the trade-off bounds in reverse and they become detectors.  If a
//! parameter measure escapes a barren plateau (expected absolute gradient at
//! least `g_th` against a flat reference with value `e_bp`), its structural
//! divergence from the reference must be at least `(g_th - e_bp) / (||H_j||
//! ||O||)`.  If a cost moment moves by at least `delta`, the divergence must
//! be at least `delta / ||O||^k`.  Conversely, a noise channel that keeps
//! the divergence below those levels cannot restore gradients or shift
//! moments by more than the matching caps.  This example evaluates both
//! directions on concrete measures and cross-checks each verdict against
//! directly measured deviations.
//!
//! Run with `cargo run --example detection_thresholds`.

use fdiv::bounds::{
    bp_divergence_threshold, cc_divergence_threshold, expected_abs_gradient,
    noise_sufficiency_check,
};
use fdiv::circuit::product_tight_ansatz;
use fdiv::divergence::structural_divergence;
use fdiv::measure::binary_pair_points;
use fdiv::{GeneratorSpec, ParameterPoint, Result};

use std::f64::consts::FRAC_PI_2;

fn main() -> Result<()> {
    let (circuit, init, observable) = product_tight_ansatz(1)?;
    let zero = ParameterPoint::new(vec![0.0])?;
    let quarter = ParameterPoint::new(vec![FRAC_PI_2])?;
    let g = GeneratorSpec::total_variation();

    // P concentrates more mass on the quarter turn, where the gradient
    // magnitude is 1; Q is the nearly flat reference.
    let (p, q) = binary_pair_points(0.4, zero.clone(), quarter.clone())?;
    let actual = structural_divergence(&g, &p, &q)?;
    let grad_p = expected_abs_gradient(&p, &circuit, 0, &init, &observable)?;
    let grad_q = expected_abs_gradient(&q, &circuit, 0, &init, &observable)?;
    println!("E_P|grad| = {grad_p:.6}, E_Q|grad| = {grad_q:.6}, divergence = {actual:.6}\n");

    // Necessary condition: maintaining g_th = 0.5 against a reference at
    // e_bp = 0.3 forces divergence >= (0.5 - 0.3) / (0.5 * 1) = 0.4.
    let bp = bp_divergence_threshold(0.5, 0.5, 1.0, 0.3, actual)?;
    println!(
        "barren plateau escape: threshold {:.6}, actual {:.6}, possible: {}",
        bp.threshold, bp.actual_divergence, bp.verdict
    );
    assert_eq!(bp.threshold, 0.4);
    assert_eq!(bp.verdict, actual >= 0.4);

    // Moment deviation of delta = 0.2 at k = 2 needs divergence >= 0.2.
    let cc = cc_divergence_threshold(0.2, 1.0, 2, actual)?;
    println!(
        "cost moment shift:     threshold {:.6}, actual {:.6}, possible: {}",
        cc.threshold, cc.actual_divergence, cc.verdict
    );

    // Sufficiency: a tiny perturbation cannot move gradients or moments far.
    // The caps (2 g_th for gradients, C(k) delta for moments) are verified
    // against the measured deviations.
    let (noisy, clean) = binary_pair_points(0.02, zero.clone(), quarter.clone())?;
    let study = noise_sufficiency_check(
        &g, &noisy, &clean, &circuit, 0, 2, 0.05, 0.05, &init, &observable,
    )?;
    println!(
        "\nsmall perturbation: divergence {:.6}, grad verdict {}, moment verdict {}",
        study.grad.actual_divergence, study.grad.verdict, study.moment.verdict
    );
    println!(
        "measured gradient deviation {:.6} <= cap {:.6}",
        study.grad_deviation, study.grad_deviation_cap
    );
    println!(
        "measured moment deviation   {:.6} <= cap {:.6}",
        study.moment_deviation, study.moment_deviation_cap
    );
    assert!(study.coherent(), "verdicts must be backed by measurements");

    // A large perturbation fails the sufficiency test, and indeed the
    // measured gradient deviation exceeds what the small-divergence caps
    // would have allowed.
    let (noisy, clean) = binary_pair_points(0.9, zero.clone(), quarter.clone())?;
    let study = noise_sufficiency_check(
        &g, &noisy, &clean, &circuit, 0, 2, 0.05, 0.05, &init, &observable,
    )?;
    println!(
        "\nlarge perturbation: divergence {:.6}, grad verdict {}, measured deviation {:.6}",
        study.grad.actual_divergence, study.grad.verdict, study.grad_deviation
    );
    assert!(!study.grad.verdict);
    assert!(study.coherent());
    Ok(())
}
