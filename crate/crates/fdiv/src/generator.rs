//! Convex generators for f-divergences.
//!
//! A generator is a convex function `f : (0, inf) -> R` with `f(1) = 0`.  The
//! smooth members of the class are twice continuously differentiable with
//! `f'' > 0`; total variation joins as the single non-smooth member
//! `f(x) = |x - 1| / 2`.  Each built-in records its one-sided limits
//! `f(0+)` and `lim f(x)/x` as extended reals; divergence code relies on both
//! when one of the compared measures vanishes on part of the support.
//!
//! Built-ins, selectable by name on the command line:
//!
//! | name         | f(x)                                      | f(0+)    | lim f(x)/x |
//! |--------------|-------------------------------------------|----------|------------|
//! | `tv`         | `|x-1|/2`                                 | 1/2      | 1/2        |
//! | `hellinger2` | `(sqrt(x)-1)^2/2`                         | 1/2      | 1/2        |
//! | `js`         | `(x/2)ln x - ((x+1)/2)ln((x+1)/2)`        | ln(2)/2  | ln(2)/2    |
//! | `jeffreys`   | `((x-1)/2)ln x`                           | +inf     | +inf       |
//! | `triangular` | `(x-1)^2/(2(x+1))`                        | 1/2      | 1/2        |
//!
//! All five are symmetric in the sense `x f(1/x) = f(x)`, so the directed and
//! symmetrized divergences they induce coincide.  `jeffreys` is stored in this
//! symmetric form (the average of the two Kullback-Leibler directions) so that
//! its behaviour on vanishing weights matches the divergence it names.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;

/// Tolerance on `f(1) = 0` for custom generators.
const CUSTOM_ROOT_TOL: f64 = 1e-14;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Which built-in (or custom) generator a [`GeneratorSpec`] carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    TotalVariation,
    SquaredHellinger,
    JensenShannon,
    Jeffreys,
    Triangular,
    Custom,
}

/// A generator function together with its derivatives (when available) and
/// boundary limits.
#[derive(Clone)]
pub struct GeneratorSpec {
    name: String,
    kind: GeneratorKind,
    f: ScalarFn,
    f_prime: Option<ScalarFn>,
    f_double_prime: Option<ScalarFn>,
    f_at_zero: ExtendedReal,
    f_slope_at_infinity: ExtendedReal,
}

impl fmt::Debug for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratorSpec")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("f_at_zero", &self.f_at_zero)
            .field("f_slope_at_infinity", &self.f_slope_at_infinity)
            .finish()
    }
}

impl GeneratorSpec {
    /// `f(x) = |x - 1| / 2`; the induced divergence is total variation.
    pub fn total_variation() -> Self {
        GeneratorSpec {
            name: "tv".into(),
            kind: GeneratorKind::TotalVariation,
            f: Arc::new(|x| (x - 1.0).abs() / 2.0),
            f_prime: None,
            f_double_prime: None,
            f_at_zero: ExtendedReal::new(0.5).unwrap(),
            f_slope_at_infinity: ExtendedReal::new(0.5).unwrap(),
        }
    }

    /// `f(x) = (sqrt(x) - 1)^2 / 2`; the induced divergence is the squared
    /// Hellinger distance `1 - sum sqrt(p q)`.
    pub fn squared_hellinger() -> Self {
        GeneratorSpec {
            name: "hellinger2".into(),
            kind: GeneratorKind::SquaredHellinger,
            f: Arc::new(|x| {
                let d = x.sqrt() - 1.0;
                d * d / 2.0
            }),
            f_prime: Some(Arc::new(|x: f64| (1.0 - 1.0 / x.sqrt()) / 2.0)),
            f_double_prime: Some(Arc::new(|x: f64| 0.25 / (x * x.sqrt()))),
            f_at_zero: ExtendedReal::new(0.5).unwrap(),
            f_slope_at_infinity: ExtendedReal::new(0.5).unwrap(),
        }
    }

    /// Jensen-Shannon generator `f(x) = (x/2) ln x - ((x+1)/2) ln((x+1)/2)`.
    pub fn jensen_shannon() -> Self {
        let half_ln2 = 0.5 * std::f64::consts::LN_2;
        GeneratorSpec {
            name: "js".into(),
            kind: GeneratorKind::JensenShannon,
            f: Arc::new(|x| 0.5 * x * x.ln() - 0.5 * (x + 1.0) * (0.5 * (x + 1.0)).ln()),
            f_prime: Some(Arc::new(|x: f64| 0.5 * (2.0 * x / (x + 1.0)).ln())),
            f_double_prime: Some(Arc::new(|x: f64| 0.5 / (x * (x + 1.0)))),
            f_at_zero: ExtendedReal::new(half_ln2).unwrap(),
            f_slope_at_infinity: ExtendedReal::new(half_ln2).unwrap(),
        }
    }

    /// Jeffreys generator `f(x) = ((x - 1)/2) ln x`, the symmetrization of
    /// `x ln x`; the induced divergence averages the two KL directions.
    pub fn jeffreys() -> Self {
        GeneratorSpec {
            name: "jeffreys".into(),
            kind: GeneratorKind::Jeffreys,
            f: Arc::new(|x| 0.5 * (x - 1.0) * x.ln()),
            f_prime: Some(Arc::new(|x: f64| 0.5 * x.ln() + 0.5 * (x - 1.0) / x)),
            f_double_prime: Some(Arc::new(|x: f64| 0.5 / x + 0.5 / (x * x))),
            f_at_zero: ExtendedReal::INFINITY,
            f_slope_at_infinity: ExtendedReal::INFINITY,
        }
    }

    /// `f(x) = (x - 1)^2 / (2 (x + 1))`; the induced divergence is the
    /// triangular discrimination `(1/2) sum (p - q)^2 / (p + q)`.
    pub fn triangular() -> Self {
        GeneratorSpec {
            name: "triangular".into(),
            kind: GeneratorKind::Triangular,
            f: Arc::new(|x| {
                let d = x - 1.0;
                d * d / (2.0 * (x + 1.0))
            }),
            f_prime: Some(Arc::new(|x: f64| {
                let u = x + 1.0;
                0.5 - 2.0 / (u * u)
            })),
            f_double_prime: Some(Arc::new(|x: f64| {
                let u = x + 1.0;
                4.0 / (u * u * u)
            })),
            f_at_zero: ExtendedReal::new(0.5).unwrap(),
            f_slope_at_infinity: ExtendedReal::new(0.5).unwrap(),
        }
    }

    /// A user-supplied generator.  `f(1)` must vanish (within `1e-14`) and a
    /// coarse sample of `f` must be NaN-free and midpoint-convex; both limits
    /// must be supplied explicitly.
    pub fn custom(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        f_at_zero: ExtendedReal,
        f_slope_at_infinity: ExtendedReal,
    ) -> Result<Self> {
        let name = name.into();
        let at_one = f(1.0);
        if at_one.is_nan() || at_one.abs() > CUSTOM_ROOT_TOL {
            return Err(Error::InvalidGenerator {
                name,
                reason: format!("f(1) = {at_one}, expected 0 within {CUSTOM_ROOT_TOL:e}"),
            });
        }
        // Sample a log grid to catch NaNs and gross non-convexity early.
        let mut exponent = -6.0;
        while exponent <= 6.0 {
            let x = 10f64.powf(exponent);
            let (lo, mid, hi) = (f(x / 2.0), f(x * 0.75), f(x));
            if lo.is_nan() || mid.is_nan() || hi.is_nan() {
                return Err(Error::InvalidGenerator {
                    name,
                    reason: format!("f evaluates to NaN near x = {x:e}"),
                });
            }
            if mid > 0.5 * (lo + hi) + 1e-9 * (1.0 + lo.abs() + hi.abs()) {
                return Err(Error::InvalidGenerator {
                    name,
                    reason: format!("f fails midpoint convexity near x = {x:e}"),
                });
            }
            exponent += 0.5;
        }
        Ok(GeneratorSpec {
            name,
            kind: GeneratorKind::Custom,
            f: Arc::new(f),
            f_prime: None,
            f_double_prime: None,
            f_at_zero,
            f_slope_at_infinity,
        })
    }

    /// All built-in generators, in canonical order.
    pub fn registry() -> Vec<GeneratorSpec> {
        vec![
            Self::total_variation(),
            Self::squared_hellinger(),
            Self::jensen_shannon(),
            Self::jeffreys(),
            Self::triangular(),
        ]
    }

    /// Looks a built-in up by its command-line name.
    pub fn by_name(name: &str) -> Result<GeneratorSpec> {
        match name {
            "tv" => Ok(Self::total_variation()),
            "hellinger2" => Ok(Self::squared_hellinger()),
            "js" => Ok(Self::jensen_shannon()),
            "jeffreys" => Ok(Self::jeffreys()),
            "triangular" => Ok(Self::triangular()),
            other => Err(Error::InvalidGenerator {
                name: other.into(),
                reason: "unknown generator; expected one of tv, hellinger2, js, jeffreys, \
                         triangular"
                    .into(),
            }),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    /// Smooth generators admit the curvature-based small-separation expansion;
    /// total variation does not.
    pub fn is_smooth(&self) -> bool {
        self.kind != GeneratorKind::TotalVariation
    }

    pub fn f_at_zero(&self) -> ExtendedReal {
        self.f_at_zero
    }

    pub fn f_slope_at_infinity(&self) -> ExtendedReal {
        self.f_slope_at_infinity
    }

    /// Evaluates `f` on `[0, inf]`, using the stored limits at the endpoints.
    pub fn eval(&self, x: f64) -> Result<ExtendedReal> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::OutOfDomain(format!(
                "generator argument must be in [0, inf], got {x}"
            )));
        }
        if x == 0.0 {
            return Ok(self.f_at_zero);
        }
        if x.is_infinite() {
            // Convex with positive limiting slope means f itself diverges.
            return if self.f_slope_at_infinity > ExtendedReal::ZERO {
                Ok(ExtendedReal::INFINITY)
            } else {
                Err(Error::Numeric(format!(
                    "f(inf) undefined for generator `{}` with non-positive limiting slope",
                    self.name
                )))
            };
        }
        let value = (self.f)(x);
        if value.is_nan() {
            return Err(Error::InvalidGenerator {
                name: self.name.clone(),
                reason: format!("f({x}) evaluated to NaN"),
            });
        }
        ExtendedReal::new(value)
    }

    /// Evaluates `f'` where a closed form is stored.
    pub fn eval_prime(&self, x: f64) -> Option<f64> {
        self.f_prime.as_ref().map(|g| g(x))
    }

    /// Evaluates `f''` where a closed form is stored.
    pub fn eval_double_prime(&self, x: f64) -> Option<f64> {
        self.f_double_prime.as_ref().map(|g| g(x))
    }
}
