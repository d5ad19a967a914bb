//! f-divergences, their symmetrization, the binary profile, and the
//! structural divergence.
//!
//! For a generator `f` and measures with aligned weights `p_i`, `q_i`,
//!
//! ```text
//! D_f(P || Q)  = sum_i q_i f(p_i / q_i),
//! D~_f(P, Q)   = (D_f(P || Q) + D_f(Q || P)) / 2.
//! ```
//!
//! Terms with a vanishing weight follow the standard extended convention:
//! `q = 0, p > 0` contributes `p * lim f(x)/x`, `p = 0, q > 0` contributes
//! `q * f(0+)`, and `p = q = 0` contributes nothing.
//!
//! The *binary profile* `d_f(s)` is the symmetrized divergence of the swapped
//! pair `{(1-s)/2, (1+s)/2}` versus `{(1+s)/2, (1-s)/2}`:
//!
//! ```text
//! d_f(s) = ((1-s)/2) f((1+s)/(1-s)) + ((1+s)/2) f((1-s)/(1+s)),
//! ```
//!
//! strictly increasing and convex on `[0, 1]`.  The *structural divergence*
//! pulls the symmetrized divergence back through this profile,
//! `D_str(P, Q) = d_f^{-1}(D~_f(P, Q))`, which lands every generator on the
//! common scale `[0, 1]` where swapped binary pairs sit at exactly their bias.
//! Values at or above `sup d_f` clamp to 1.

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::generator::{GeneratorKind, GeneratorSpec};
use crate::measure::{align_supports, DiscreteMeasure};

/// Absolute tolerance of the bisection inverse of the binary profile.
pub const BISECTION_TOL: f64 = 1e-12;
/// Iteration cap of the bisection inverse.
pub const BISECTION_MAX_ITERS: usize = 200;
/// Probe point used to estimate `sup d_f` just below the endpoint.
const SUP_PROBE: f64 = 1.0 - 1e-9;

/// One term `q f(p/q)` of an f-divergence, with the vanishing-weight
/// convention applied.
pub fn weighted_term(g: &GeneratorSpec, p: f64, q: f64) -> Result<ExtendedReal> {
    if p.is_nan() || q.is_nan() || p < 0.0 || q < 0.0 {
        return Err(Error::OutOfDomain(format!(
            "weights must be non-negative, got p={p}, q={q}"
        )));
    }
    if q == 0.0 {
        if p == 0.0 {
            return Ok(ExtendedReal::ZERO);
        }
        // lim_{q -> 0} q f(p/q) = p * lim_{x -> inf} f(x)/x
        let slope = g.f_slope_at_infinity();
        return if slope.is_finite() {
            ExtendedReal::new(p * slope.value())
        } else {
            Ok(ExtendedReal::INFINITY)
        };
    }
    if p == 0.0 {
        let zero = g.f_at_zero();
        return if zero.is_finite() {
            ExtendedReal::new(q * zero.value())
        } else {
            Ok(ExtendedReal::INFINITY)
        };
    }
    let value = g.eval(p / q)?;
    if value.is_finite() {
        ExtendedReal::new(q * value.value())
    } else {
        Ok(ExtendedReal::INFINITY)
    }
}

/// Directed f-divergence `D_f(P || Q)` over the union support.
pub fn f_divergence(
    g: &GeneratorSpec,
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
) -> Result<ExtendedReal> {
    let aligned = align_supports(p, q)?;
    let mut total = ExtendedReal::ZERO;
    for (&wp, &wq) in aligned.p.iter().zip(&aligned.q) {
        total = total + weighted_term(g, wp, wq)?;
    }
    Ok(total)
}

/// Symmetrized f-divergence `(D_f(P||Q) + D_f(Q||P)) / 2`.
pub fn symmetric_f_divergence(
    g: &GeneratorSpec,
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
) -> Result<ExtendedReal> {
    let forward = f_divergence(g, p, q)?;
    let backward = f_divergence(g, q, p)?;
    if forward.is_finite() && backward.is_finite() {
        ExtendedReal::new((forward.value() + backward.value()) / 2.0)
    } else {
        Ok(ExtendedReal::INFINITY)
    }
}

/// The symmetrization `f~(x) = (f(x) + x f(1/x)) / 2` as a generator of its
/// own.  The directed divergence of `f~` equals the symmetrized divergence of
/// `f` on every pair of measures.
pub fn symmetrized(g: &GeneratorSpec) -> Result<GeneratorSpec> {
    let base = g.clone();
    let inner = move |x: f64| {
        let f = |y: f64| base.eval(y).map(|v| v.value()).unwrap_or(f64::NAN);
        0.5 * (f(x) + x * f(1.0 / x))
    };
    // Both boundary limits of the symmetrization average the two limits of f.
    let average = |a: ExtendedReal, b: ExtendedReal| -> Result<ExtendedReal> {
        if a.is_finite() && b.is_finite() {
            ExtendedReal::new((a.value() + b.value()) / 2.0)
        } else {
            Ok(ExtendedReal::INFINITY)
        }
    };
    let limit = average(g.f_at_zero(), g.f_slope_at_infinity())?;
    GeneratorSpec::custom(format!("{}~sym", g.name()), inner, limit, limit)
}

/// Total variation distance `(1/2) sum |p_i - q_i|`.
pub fn total_variation(p: &DiscreteMeasure, q: &DiscreteMeasure) -> Result<f64> {
    let aligned = align_supports(p, q)?;
    Ok(aligned
        .p
        .iter()
        .zip(&aligned.q)
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
        / 2.0)
}

/// Triangular discrimination `(1/2) sum (p_i - q_i)^2 / (p_i + q_i)`, with
/// empty atoms contributing nothing.
pub fn triangular_discrimination(p: &DiscreteMeasure, q: &DiscreteMeasure) -> Result<f64> {
    let aligned = align_supports(p, q)?;
    let mut total = 0.0;
    for (&a, &b) in aligned.p.iter().zip(&aligned.q) {
        if a + b > 0.0 {
            let d = a - b;
            total += d * d / (a + b);
        }
    }
    Ok(total / 2.0)
}

/// The binary profile `d_f(s)` for `s` in `[0, 1]`; the endpoint `s = 1`
/// returns the limit `f(0+) + lim f(x)/x`, which may be `+inf`.
pub fn binary_divergence(g: &GeneratorSpec, s: f64) -> Result<ExtendedReal> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::OutOfDomain(format!(
            "binary profile argument must lie in [0, 1], got {s}"
        )));
    }
    if s == 0.0 {
        return Ok(ExtendedReal::ZERO);
    }
    if s == 1.0 {
        let zero = g.f_at_zero();
        let slope = g.f_slope_at_infinity();
        return if zero.is_finite() && slope.is_finite() {
            ExtendedReal::new(zero.value() + slope.value())
        } else {
            Ok(ExtendedReal::INFINITY)
        };
    }
    let hi = (1.0 + s) / (1.0 - s);
    let lo = (1.0 - s) / (1.0 + s);
    let first = g.eval(hi)?;
    let second = g.eval(lo)?;
    if !first.is_finite() || !second.is_finite() {
        return Ok(ExtendedReal::INFINITY);
    }
    ExtendedReal::new(((1.0 - s) / 2.0) * first.value() + ((1.0 + s) / 2.0) * second.value())
}

/// Inverse of the binary profile on `[0, 1]`.
///
/// Values at or above the supremum of the profile clamp to 1 (the supremum is
/// probed just below the endpoint, so a profile that overflows there counts
/// as unbounded).  Generators whose profile inverts in closed form
/// (total variation, squared Hellinger, triangular) use it; the rest bisect
/// to absolute tolerance [`BISECTION_TOL`].
pub fn invert_binary_divergence(g: &GeneratorSpec, y: ExtendedReal) -> Result<f64> {
    if y < ExtendedReal::ZERO {
        return Err(Error::OutOfDomain(format!(
            "binary profile values are non-negative, got {y}"
        )));
    }
    if y == ExtendedReal::ZERO {
        return Ok(0.0);
    }
    if y.is_infinite() {
        return Ok(1.0);
    }
    let value = y.value();
    match g.kind() {
        GeneratorKind::TotalVariation => Ok(value.min(1.0)),
        GeneratorKind::Triangular => Ok(value.sqrt().min(1.0)),
        GeneratorKind::SquaredHellinger => {
            if value >= 1.0 {
                Ok(1.0)
            } else {
                // d_f(s) = 1 - sqrt(1 - s^2), so s = sqrt(y (2 - y)).
                Ok((value * (2.0 - value)).sqrt().min(1.0))
            }
        }
        _ => {
            let sup = binary_divergence(g, SUP_PROBE)?;
            if y >= sup {
                return Ok(1.0);
            }
            let (mut lo, mut hi) = (0.0f64, SUP_PROBE);
            let mut iterations = 0;
            while hi - lo > BISECTION_TOL && iterations < BISECTION_MAX_ITERS {
                let mid = 0.5 * (lo + hi);
                let at_mid = binary_divergence(g, mid)?;
                if at_mid >= y {
                    hi = mid;
                } else {
                    lo = mid;
                }
                iterations += 1;
            }
            Ok(0.5 * (lo + hi))
        }
    }
}

/// Structural divergence `d_f^{-1}(D~_f(P, Q))`, in `[0, 1]`.
///
/// For the total variation generator this is the total variation distance
/// itself.
pub fn structural_divergence(
    g: &GeneratorSpec,
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
) -> Result<f64> {
    if g.kind() == GeneratorKind::TotalVariation {
        return total_variation(p, q);
    }
    let symmetric = symmetric_f_divergence(g, p, q)?;
    invert_binary_divergence(g, symmetric)
}

/// Minimum of the structural divergence over a set of generators.  This is a
/// registry minimum, not a true infimum over all convex generators.
pub fn min_structural_divergence(
    generators: &[GeneratorSpec],
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
) -> Result<f64> {
    if generators.is_empty() {
        return Err(Error::InvalidArgument(
            "minimum over an empty generator set".into(),
        ));
    }
    let mut best = f64::INFINITY;
    for g in generators {
        best = best.min(structural_divergence(g, p, q)?);
    }
    Ok(best)
}

/// Fisher information of a one-parameter family of measures at `alpha`, from
/// central differences with step `step`:
/// `I(alpha) = sum_i (dp_i/dalpha)^2 / p_i(alpha)`.
///
/// Every atom appearing anywhere in the three-point stencil must carry
/// positive weight at all three points; otherwise the information is
/// undefined here and an error is returned.
pub fn fisher_information(
    family: &dyn Fn(f64) -> Result<DiscreteMeasure>,
    alpha: f64,
    step: f64,
) -> Result<f64> {
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "central-difference step must be positive and finite, got {step}"
        )));
    }
    let center = family(alpha)?;
    let up = family(alpha + step)?;
    let down = family(alpha - step)?;
    let mut labels: Vec<String> = center
        .atoms()
        .iter()
        .chain(up.atoms())
        .chain(down.atoms())
        .map(|a| a.label().to_string())
        .collect();
    labels.sort();
    labels.dedup();
    let mut info = 0.0;
    for label in &labels {
        let (w0, wu, wd) = (
            center.weight_of(label),
            up.weight_of(label),
            down.weight_of(label),
        );
        if w0 <= 0.0 || wu <= 0.0 || wd <= 0.0 {
            return Err(Error::OutOfDomain(format!(
                "atom `{label}` has vanishing weight inside the stencil; Fisher information \
                 is undefined"
            )));
        }
        let derivative = (wu - wd) / (2.0 * step);
        info += derivative * derivative / w0;
    }
    Ok(info)
}
