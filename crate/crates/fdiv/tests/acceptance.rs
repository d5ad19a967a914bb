//! Acceptance suite: one test per advertised guarantee, each printing a
//! single PASS/FAIL line (visible with `cargo test -- --nocapture`).
//!
//! The guarantees are exact identities and inequalities, so every check runs
//! at full precision with explicit tolerances and, where promised, a wall
//! clock budget.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use rand::Rng;

use fdiv::bounds::{
    asymptotic_sweep, bernoulli_family, bp_divergence_threshold, cc_divergence_threshold,
    check_gradient_bound, check_moment_bound, infimum_search, noise_sufficiency_check,
    tightness_sweep, BoundKind, Space,
};
use fdiv::circuit::{
    cost, finite_difference_gradient, gradient, minimal_tight_ansatz, product_tight_ansatz,
};
use fdiv::divergence::{
    binary_divergence, fisher_information, invert_binary_divergence, structural_divergence,
    triangular_discrimination,
};
use fdiv::measure::{binary_pair_points, pushforward, PushforwardOptions};
use fdiv::random::{
    random_dpi_triple, random_instance, random_label_pair, random_point, random_point_pair,
    rng_from_seed,
};
use fdiv::{DiscreteMeasure, GeneratorSpec, ParameterPoint};

type Outcome = Result<(), String>;

fn criterion(name: &str, budget: Option<Duration>, body: impl FnOnce() -> Outcome) {
    let start = Instant::now();
    let mut outcome = body();
    let elapsed = start.elapsed();
    if outcome.is_ok() {
        if let Some(limit) = budget {
            if elapsed > limit {
                outcome = Err(format!("took {elapsed:.2?}, budget {limit:.2?}"));
            }
        }
    }
    match &outcome {
        Ok(()) => println!("acceptance: {name}: PASS ({elapsed:.2?})"),
        Err(reason) => println!("acceptance: {name}: FAIL ({reason})"),
    }
    if let Err(reason) = outcome {
        panic!("{name}: {reason}");
    }
}

fn fail<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn r_grid() -> Vec<f64> {
    (1..10).map(|i| i as f64 / 10.0).collect()
}

#[test]
fn criterion_01_gradient_bound_tightness() {
    criterion("gradient bound tight on swapped pairs", Some(Duration::from_secs(1)), || {
        let rows = fail(tightness_sweep(&r_grid(), &[], &GeneratorSpec::registry(), &[1]))?;
        if rows.len() != 45 {
            return Err(format!("expected 45 gradient rows, got {}", rows.len()));
        }
        for row in &rows {
            if row.kind != BoundKind::GradientBound {
                return Err(format!("unexpected row kind {}", row.kind));
            }
            let r = row.r.expect("sweep rows carry the bias");
            if (row.lhs - r).abs() > 1e-9 {
                return Err(format!("lhs {} drifted from bias {r}", row.lhs));
            }
            if row.slack.abs() > 1e-9 {
                return Err(format!(
                    "{} at r={r}: |slack| {}",
                    row.generator,
                    row.slack.abs()
                ));
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_02_moment_bound_tightness() {
    criterion("moment bounds tight in both spaces", Some(Duration::from_secs(10)), || {
        let rows = fail(tightness_sweep(
            &r_grid(),
            &[1, 2, 3, 4],
            &GeneratorSpec::registry(),
            &[1, 2, 3],
        ))?;
        let moment_rows = rows.iter().filter(|r| r.kind == BoundKind::MomentBound);
        let theta = moment_rows.clone().filter(|r| r.space == Space::ParameterSpace).count();
        let unitary = moment_rows.clone().filter(|r| r.space == Space::UnitaryGroup).count();
        if theta != 540 || unitary != 540 {
            return Err(format!("expected 540 moment rows per space, got {theta}/{unitary}"));
        }
        for row in &rows {
            if row.slack.abs() > 1e-9 {
                return Err(format!(
                    "{} {} k={:?} n={:?} r={:?}: |slack| {}",
                    row.kind,
                    row.generator,
                    row.k,
                    row.n,
                    row.r,
                    row.slack.abs()
                ));
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_03_randomized_soundness() {
    criterion("1000 random instances satisfy the bounds", Some(Duration::from_secs(60)), || {
        let registry = GeneratorSpec::registry();
        let mut rng = rng_from_seed(3_000_003);
        let opts = PushforwardOptions::default();
        for _ in 0..1000 {
            let inst = fail(random_instance(&mut rng, 3, 2, 2))?;
            let support = rng.random_range(2..=8);
            let (p, q) = fail(random_point_pair(&mut rng, inst.circuit.arity(), support))?;
            let j = rng.random_range(0..inst.circuit.arity());
            let pu = fail(pushforward(&p, &inst.circuit, opts))?;
            let qu = fail(pushforward(&q, &inst.circuit, opts))?;
            for g in &registry {
                // check_* returns an error on any violation beyond the
                // -1e-10 slack tolerance.
                fail(check_gradient_bound(
                    g,
                    &p,
                    &q,
                    &inst.circuit,
                    j,
                    &inst.init,
                    &inst.observable,
                ))?;
                for k in 1..=4 {
                    fail(check_moment_bound(
                        g,
                        &p,
                        &q,
                        Some(&inst.circuit),
                        k,
                        &inst.init,
                        &inst.observable,
                    ))?;
                    fail(check_moment_bound(
                        g,
                        &pu,
                        &qu,
                        None,
                        k,
                        &inst.init,
                        &inst.observable,
                    ))?;
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_04_data_processing_inequality() {
    criterion("post-processing never increases the divergence", None, || {
        let registry = GeneratorSpec::registry();
        let mut rng = rng_from_seed(4_000_004);

        for _ in 0..500 {
            let source = rng.random_range(2..=6);
            let target = rng.random_range(2..=6);
            let (p, q, kernel) = fail(random_dpi_triple(&mut rng, source, target))?;
            let kp = fail(kernel.apply(&p))?;
            let kq = fail(kernel.apply(&q))?;
            for g in &registry {
                let before = fail(structural_divergence(g, &p, &q))?;
                let after = fail(structural_divergence(g, &kp, &kq))?;
                if after > before + 1e-12 {
                    return Err(format!("{}: kernel raised {before} to {after}", g.name()));
                }
            }
        }

        // Push-forwards where distinct parameters collide on the same
        // unitary (theta and theta + 2 pi differ by a global phase).
        let (circuit, _, _) = minimal_tight_ansatz();
        let opts = PushforwardOptions::default();
        for _ in 0..100 {
            let base: f64 = rng.random_range(0.0..TAU);
            let offsets = [0.0, TAU, rng.random_range(0.5..5.0), rng.random_range(0.5..5.0)];
            let points: Vec<ParameterPoint> = offsets
                .iter()
                .map(|o| ParameterPoint::new(vec![base + o]))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let mut wp = Vec::new();
            let mut wq = Vec::new();
            let mut remaining = (1.0, 1.0);
            for _ in 0..3 {
                let a = rng.random_range(0.01..remaining.0 / 2.0);
                let b = rng.random_range(0.01..remaining.1 / 2.0);
                wp.push(a);
                wq.push(b);
                remaining.0 -= a;
                remaining.1 -= b;
            }
            wp.push(remaining.0);
            wq.push(remaining.1);
            let p = fail(DiscreteMeasure::from_points(
                points.iter().cloned().zip(wp).collect(),
            ))?;
            let q = fail(DiscreteMeasure::from_points(
                points.into_iter().zip(wq).collect(),
            ))?;
            let pu = fail(pushforward(&p, &circuit, opts))?;
            let qu = fail(pushforward(&q, &circuit, opts))?;
            if pu.support_size() != 3 {
                return Err(format!(
                    "expected the 2 pi collision to merge 4 atoms into 3, got {}",
                    pu.support_size()
                ));
            }
            for g in &registry {
                let before = fail(structural_divergence(g, &p, &q))?;
                let after = fail(structural_divergence(g, &pu, &qu))?;
                if after > before + 1e-12 {
                    return Err(format!("{}: push-forward raised {before} to {after}", g.name()));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_05_profile_monotone_convex_invertible() {
    criterion("binary profiles monotone, convex, invertible", None, || {
        for g in GeneratorSpec::registry() {
            let grid: Vec<f64> = (0..100).map(|i| i as f64 / 100.0).collect();
            let values: Vec<f64> = grid
                .iter()
                .map(|&s| fail(binary_divergence(&g, s))?.finite().map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
            for w in values.windows(2) {
                if w[1] <= w[0] {
                    return Err(format!("{}: profile not strictly increasing", g.name()));
                }
            }
            for w in values.windows(3) {
                let second = w[2] - 2.0 * w[1] + w[0];
                if second < -1e-10 {
                    return Err(format!("{}: second difference {second}", g.name()));
                }
            }
            for &s in &grid {
                let y = fail(binary_divergence(&g, s))?;
                let back = fail(invert_binary_divergence(&g, y))?;
                if (back - s).abs() > 1e-10 {
                    return Err(format!("{}: round trip {s} -> {back}", g.name()));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_06_infimum_oracle() {
    criterion("binary pairs minimize the symmetric divergence", None, || {
        for g in GeneratorSpec::registry() {
            for (i, t) in [0.1, 0.3, 0.5, 0.7, 0.9].into_iter().enumerate() {
                let study = fail(infimum_search(&g, t, 10_000, 6, 600 + i as u64))?;
                if study.min_found < study.profile_value - 1e-12 {
                    return Err(format!(
                        "{} at t={t}: sampled {} below profile {}",
                        g.name(),
                        study.min_found,
                        study.profile_value
                    ));
                }
                if (study.binary_value - study.profile_value).abs() > 1e-12 {
                    return Err(format!(
                        "{} at t={t}: binary pair missed the profile",
                        g.name()
                    ));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_07_gradient_correctness() {
    criterion("analytic gradients match finite differences", None, || {
        let mut rng = rng_from_seed(7_000_007);
        for _ in 0..200 {
            let inst = fail(random_instance(&mut rng, 3, 2, 2))?;
            let point = fail(random_point(&mut rng, inst.circuit.arity()))?;
            for j in 0..inst.circuit.arity() {
                let exact = fail(gradient(&inst.circuit, &point, j, &inst.init, &inst.observable))?;
                let approx = fail(finite_difference_gradient(
                    &inst.circuit,
                    &point,
                    j,
                    &inst.init,
                    &inst.observable,
                    1e-5,
                ))?;
                if (exact - approx).abs() > 1e-7 {
                    return Err(format!("gate {j}: exact {exact} vs central {approx}"));
                }
            }
        }

        let (circuit, init, observable) = minimal_tight_ansatz();
        for i in 0..100 {
            let theta = TAU * i as f64 / 100.0;
            let point = fail(ParameterPoint::new(vec![theta]))?;
            let c = fail(cost(&circuit, &point, &init, &observable))?;
            let d = fail(gradient(&circuit, &point, 0, &init, &observable))?;
            if (c - theta.cos()).abs() > 1e-12 || (d + theta.sin()).abs() > 1e-12 {
                return Err(format!("closed form failed at theta={theta}"));
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_08_asymptotic_ratio() {
    criterion("structural divergence approaches sqrt(triangular)", None, || {
        let smooth = vec![
            GeneratorSpec::squared_hellinger(),
            GeneratorSpec::jensen_shannon(),
            GeneratorSpec::jeffreys(),
            GeneratorSpec::triangular(),
        ];
        let rows = fail(asymptotic_sweep(&smooth, &bernoulli_family, 0.3, &[1e-2, 1e-3, 1e-4]))?;
        for row in &rows {
            if (row.ratio - 1.0).abs() > 10.0 * row.delta_alpha {
                return Err(format!(
                    "{} at dalpha={}: ratio {}",
                    row.generator, row.delta_alpha, row.ratio
                ));
            }
        }

        // The triangular generator gives the square root identically, not
        // just in the limit.
        let tri = vec![GeneratorSpec::triangular()];
        let rows = fail(asymptotic_sweep(&tri, &bernoulli_family, 0.3, &[0.5, 0.3, 0.1, 1e-2, 1e-4]))?;
        for row in &rows {
            if (row.ratio - 1.0).abs() > 1e-12 {
                return Err(format!(
                    "triangular ratio {} at separation {}",
                    row.ratio, row.delta_alpha
                ));
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_09_closed_form_cross_checks() {
    criterion("closed forms match generic evaluation", None, || {
        let hel = GeneratorSpec::squared_hellinger();
        let mut rng = rng_from_seed(9_000_009);
        for _ in 0..100 {
            let support = rng.random_range(2..=8);
            let (p, q) = fail(random_label_pair(&mut rng, support))?;
            let bc: f64 = p
                .atoms()
                .iter()
                .map(|a| (a.weight() * q.weight_of(a.label())).sqrt())
                .sum();
            let expected = (1.0 - bc * bc).sqrt();
            let got = fail(structural_divergence(&hel, &p, &q))?;
            if (got - expected).abs() > 1e-10 {
                return Err(format!("hellinger: {got} vs sqrt(1-BC^2) {expected}"));
            }
        }

        let jef = GeneratorSpec::jeffreys();
        let js = GeneratorSpec::jensen_shannon();
        for i in 0..100 {
            let s = i as f64 / 100.0;
            let jef_got = fail(fail(binary_divergence(&jef, s))?.finite())?;
            let jef_expected = 2.0 * s * s.atanh();
            if (jef_got - jef_expected).abs() > 1e-12 {
                return Err(format!("jeffreys profile at {s}: {jef_got} vs {jef_expected}"));
            }
            let js_got = fail(fail(binary_divergence(&js, s))?.finite())?;
            let js_expected = if s == 0.0 {
                0.0
            } else {
                0.5 * (1.0 + s) * (1.0 + s).ln() + 0.5 * (1.0 - s) * (1.0 - s).ln()
            };
            if (js_got - js_expected).abs() > 1e-12 {
                return Err(format!("js profile at {s}: {js_got} vs {js_expected}"));
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_10_fisher_expansion() {
    criterion("triangular discrimination matches the Fisher expansion", None, || {
        for alpha in [0.3, 0.5, 0.7] {
            let info = fail(fisher_information(&bernoulli_family, alpha, 1e-5))?;
            let exact = 1.0 / (alpha * (1.0 - alpha));
            if (info - exact).abs() > 1e-5 {
                return Err(format!("fisher information at {alpha}: {info} vs {exact}"));
            }
            for dalpha in [1e-2, 1e-3] {
                let p = fail(bernoulli_family(alpha))?;
                let q = fail(bernoulli_family(alpha + dalpha))?;
                let tri = fail(triangular_discrimination(&p, &q))?;
                let leading = dalpha * dalpha * info / 4.0;
                let cap = 5.0 * dalpha.powi(3) * (1.0 + info.powf(1.5));
                if (tri - leading).abs() > cap {
                    return Err(format!(
                        "alpha={alpha}, dalpha={dalpha}: |{tri} - {leading}| > {cap}"
                    ));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_11_threshold_coherence() {
    criterion("thresholds match hand values and verdicts are coherent", None, || {
        // Hand-plugged necessary thresholds.
        let bp = fail(bp_divergence_threshold(0.2, 0.5, 1.0, 0.0, 0.3))?;
        if bp.threshold != 0.4 {
            return Err(format!("gradient threshold {} != 0.4", bp.threshold));
        }
        if bp.verdict {
            return Err("divergence 0.3 cannot support a 0.4 threshold".into());
        }
        let bp = fail(bp_divergence_threshold(0.2, 0.5, 1.0, 0.0, 0.5))?;
        if !bp.verdict {
            return Err("divergence 0.5 clears a 0.4 threshold".into());
        }
        let cc = fail(cc_divergence_threshold(0.1, 2.0, 2, 0.01))?;
        if cc.threshold != 0.1 / 4.0 || cc.verdict {
            return Err(format!("moment threshold {} verdict {}", cc.threshold, cc.verdict));
        }

        // Constructed sufficiency examples: every verdict must be backed by
        // the directly measured deviation.
        let (circuit, init, observable) = fail(product_tight_ansatz(1))?;
        let zero = fail(ParameterPoint::new(vec![0.0]))?;
        let quarter = fail(ParameterPoint::new(vec![PI / 2.0]))?;
        let g = GeneratorSpec::total_variation();
        for r in [0.02, 0.05, 0.2, 0.5, 0.9] {
            for k in [1u32, 2, 3] {
                let (p, q) = fail(binary_pair_points(r, zero.clone(), quarter.clone()))?;
                let study = fail(noise_sufficiency_check(
                    &g, &p, &q, &circuit, 0, k, 0.05, 0.05, &init, &observable,
                ))?;
                if !study.coherent() {
                    return Err(format!("incoherent verdict at r={r}, k={k}"));
                }
                // For this pair the divergence is exactly r, so the verdict
                // is predictable from the caps alone.
                let expected_grad_verdict = r <= 0.05 / (0.5 * 1.0);
                if study.grad.verdict != expected_grad_verdict {
                    return Err(format!("gradient verdict flipped at r={r}"));
                }
            }
        }
        Ok(())
    });
}
