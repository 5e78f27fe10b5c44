//! Evaluation of every mean family: closed forms for power/Gini/Stolarsky,
//! generator-based forms for quasiarithmetic, Bajraktarević and Cauchy means,
//! and the implicit evaluator for measure-generalized means.
//!
//! The generalized mean `M_{f,g;μ}(x, y)` is the unique `z` with
//! `f(z)·∫g dμ - g(z)·∫f dμ = 0` along the segment; since `g > 0` and `f/g`
//! is strictly monotone, `[min(x,y), max(x,y)]` is always a valid bracket and
//! the root is found by the safeguarded false-position solver.

use crate::expr::Expr;
use crate::generator::{GeneratorError, GeneratorPair, Interval, PairSpec};
use crate::jet::JetError;
use crate::measure::{Measure, MeasureError};
use crate::solve;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeanError {
    #[error("arguments must be positive, got ({x}, {y})")]
    NonPositiveArgument { x: f64, y: f64 },
    #[error("point {x} outside the domain ({lo}, {hi})")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },
    #[error("no sign change on the bracket: {0}")]
    BracketFailure(String),
    #[error("function evaluation failed: {0}")]
    EvalFailed(String),
    #[error("invalid mean specification: {0}")]
    Parse(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// Parameters within this distance of a branch boundary are evaluated by the
/// analytic limit branch instead of the unstable generic branch.
const PARAM_EPS: f64 = 1e-12;
/// Argument tolerance of the bracketed root finder.
const ROOT_XTOL: f64 = 1e-14;

fn check_positive(x: f64, y: f64) -> Result<(), MeanError> {
    if x > 0.0 && y > 0.0 {
        Ok(())
    } else {
        Err(MeanError::NonPositiveArgument { x, y })
    }
}

/// Power (Hölder) mean `((xᵃ+yᵃ)/2)^(1/a)`, geometric at `a = 0`.
///
/// The branch switch at `|a| < 1e-12` evaluates the geometric limit; the
/// omitted first-order correction is O(a).
pub fn eval_power(a: f64, x: f64, y: f64) -> Result<f64, MeanError> {
    check_positive(x, y)?;
    if x == y {
        return Ok(x);
    }
    if a.abs() < PARAM_EPS {
        Ok((x * y).sqrt())
    } else {
        Ok((0.5 * (x.powf(a) + y.powf(a))).powf(1.0 / a))
    }
}

/// Gini mean: `((xᵃ+yᵃ)/(xᵇ+yᵇ))^(1/(a-b))` for `a ≠ b`, with the
/// exponential limit branch on the diagonal `a = b`.
pub fn eval_gini(a: f64, b: f64, x: f64, y: f64) -> Result<f64, MeanError> {
    check_positive(x, y)?;
    if x == y {
        return Ok(x);
    }
    if (a - b).abs() < PARAM_EPS {
        let m = 0.5 * (a + b);
        let (xa, ya) = (x.powf(m), y.powf(m));
        Ok(((xa * x.ln() + ya * y.ln()) / (xa + ya)).exp())
    } else {
        Ok(((x.powf(a) + y.powf(a)) / (x.powf(b) + y.powf(b))).powf(1.0 / (a - b)))
    }
}

/// Stolarsky (extended) mean, all six branches.
///
/// Branch selection tests `|a-b|`, `|a|`, `|b|` and `|x-y|` against 1e-12,
/// in the order the branches are written: generic, `a = b ≠ 0`, `b = 0`,
/// `a = 0`, `a = b = 0`, and finally `x = y`.
pub fn eval_stolarsky(a: f64, b: f64, x: f64, y: f64) -> Result<f64, MeanError> {
    check_positive(x, y)?;
    let a_nz = a.abs() >= PARAM_EPS;
    let b_nz = b.abs() >= PARAM_EPS;
    let ab_distinct = (a - b).abs() >= PARAM_EPS;
    let xy_distinct = (x - y).abs() >= PARAM_EPS;
    if a_nz && b_nz && ab_distinct && xy_distinct {
        let num = b * (x.powf(a) - y.powf(a));
        let den = a * (x.powf(b) - y.powf(b));
        Ok((num / den).powf(1.0 / (a - b)))
    } else if !ab_distinct && a_nz && xy_distinct {
        let m = 0.5 * (a + b);
        let (xa, ya) = (x.powf(m), y.powf(m));
        Ok((-1.0 / m + (xa * x.ln() - ya * y.ln()) / (xa - ya)).exp())
    } else if !b_nz && a_nz && xy_distinct {
        Ok(((x.powf(a) - y.powf(a)) / (a * (x.ln() - y.ln()))).powf(1.0 / a))
    } else if !a_nz && b_nz && xy_distinct {
        Ok(((x.powf(b) - y.powf(b)) / (b * (x.ln() - y.ln()))).powf(1.0 / b))
    } else if !a_nz && !b_nz {
        Ok((x * y).sqrt())
    } else {
        Ok(x)
    }
}

/// Quasiarithmetic mean `φ⁻¹((φ(x)+φ(y))/2)` by monotone bracketed root
/// finding on `[min(x,y), max(x,y)]`.
pub fn eval_quasiarithmetic(
    phi: &Expr,
    domain: Interval,
    x: f64,
    y: f64,
) -> Result<f64, MeanError> {
    for v in [x, y] {
        if !domain.contains(v) {
            return Err(MeanError::OutOfDomain { x: v, lo: domain.lo(), hi: domain.hi() });
        }
    }
    if x == y {
        return Ok(x);
    }
    let px = phi.eval(x)?;
    let py = phi.eval(y)?;
    let target = 0.5 * (px + py);
    let scale = px.abs().max(py.abs()).max(1.0);
    root_on_segment(|z| phi.eval(z).map(|v| v - target), x, y, scale)
}

/// Generalized quasiarithmetic mean `M_{f,g;μ}(x, y)`: the unique solution of
/// `f(z)·G = g(z)·F` with `F = ∫f`, `G = ∫g` along the segment.
pub fn eval_generalized(
    pair: &GeneratorPair,
    m: &Measure,
    x: f64,
    y: f64,
) -> Result<f64, MeanError> {
    let domain = pair.domain();
    for v in [x, y] {
        if !domain.contains(v) {
            return Err(MeanError::OutOfDomain { x: v, lo: domain.lo(), hi: domain.hi() });
        }
    }
    if x == y {
        return Ok(x);
    }
    let bounds = (domain.lo(), domain.hi());
    let big_f = m.segment_integral(|s| pair.f().eval(s).unwrap_or(f64::NAN), x, y, bounds)?;
    let big_g = m.segment_integral(|s| pair.g().eval(s).unwrap_or(f64::NAN), x, y, bounds)?;
    if !big_f.is_finite() || !big_g.is_finite() {
        return Err(MeanError::EvalFailed(format!(
            "segment integrals are not finite on [{}, {}]",
            x.min(y),
            x.max(y)
        )));
    }
    let scale = big_f.abs().max(big_g.abs()).max(1.0);
    root_on_segment(
        |z| {
            let fz = pair.f().eval(z)?;
            let gz = pair.g().eval(z)?;
            Ok(fz * big_g - gz * big_f)
        },
        x,
        y,
        scale,
    )
}

/// Bajraktarević mean `B_{f,g}`: the generalized mean under ½(δ₀+δ₁).
pub fn eval_bajraktarevic(pair: &GeneratorPair, x: f64, y: f64) -> Result<f64, MeanError> {
    eval_generalized(pair, &Measure::endpoint_atoms(), x, y)
}

/// Cauchy (difference) mean `(f'/g')⁻¹((f(x)-f(y))/(g(x)-g(y)))`, with the
/// diagonal branch returning `x`.
///
/// `f` and `g` are the antiderivative pair appearing in the difference
/// quotient; the derivatives in the inverse are produced symbolically, so no
/// numeric antidifferentiation is involved.
pub fn eval_cauchy(f: &Expr, g: &Expr, domain: Interval, x: f64, y: f64) -> Result<f64, MeanError> {
    for v in [x, y] {
        if !domain.contains(v) {
            return Err(MeanError::OutOfDomain { x: v, lo: domain.lo(), hi: domain.hi() });
        }
    }
    if x == y {
        return Ok(x);
    }
    let df = f.derivative();
    let dg = g.derivative();
    let num = f.eval(x)? - f.eval(y)?;
    let den = g.eval(x)? - g.eval(y)?;
    if den == 0.0 {
        return Err(MeanError::BracketFailure(format!(
            "g(x) - g(y) vanishes for x = {x}, y = {y}"
        )));
    }
    let ratio = num / den;
    let scale = ratio.abs().max(1.0);
    root_on_segment(|z| Ok(df.eval(z)? - ratio * dg.eval(z)?), x, y, scale)
}

/// Solves `r(z) = 0` on `[min(x,y), max(x,y)]`, tolerating sign-change loss
/// from rounding when an endpoint residual is already negligible.
fn root_on_segment<R>(r: R, x: f64, y: f64, scale: f64) -> Result<f64, MeanError>
where
    R: Fn(f64) -> Result<f64, JetError>,
{
    let (lo, hi) = (x.min(y), x.max(y));
    let f_lo = r(lo).map_err(MeanError::Jet)?;
    let f_hi = r(hi).map_err(MeanError::Jet)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        // A mathematically guaranteed bracket can lose its sign change to
        // rounding when both residuals sit at the noise floor.
        if f_lo.abs().min(f_hi.abs()) <= 1e-11 * scale {
            return Ok(if f_lo.abs() <= f_hi.abs() { lo } else { hi });
        }
        return Err(MeanError::BracketFailure(format!(
            "r({lo}) = {f_lo:e} and r({hi}) = {f_hi:e} have the same sign"
        )));
    }
    let z = solve::solve_bracketed(|z| r(z).unwrap_or(f64::NAN), lo, hi, ROOT_XTOL)
        .map_err(|nb| MeanError::BracketFailure(format!("{nb:?}")))?;
    if z.is_nan() {
        return Err(MeanError::EvalFailed("root iteration produced NaN".into()));
    }
    Ok(z)
}

/// Tagged union selecting one mean family with its parameters, generators
/// and measure. This is the JSON surface the CLI consumes.
#[derive(Debug, Clone, Deserialize)]
#[serde(try_from = "MeanSpecJson")]
pub enum MeanSpec {
    Power { a: f64 },
    Gini { a: f64, b: f64 },
    Stolarsky { a: f64, b: f64 },
    Quasiarithmetic { phi: Expr, domain: Interval },
    Bajraktarevic { pair: GeneratorPair },
    Cauchy { f: Expr, g: Expr, domain: Interval },
    Generalized { pair: GeneratorPair, measure: Measure },
}

#[derive(Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
enum MeanSpecJson {
    Power { a: f64 },
    Gini { a: f64, b: f64 },
    Stolarsky { a: f64, b: f64 },
    Quasiarithmetic { phi: Expr, domain: Interval },
    Bajraktarevic { pair: PairSpec },
    Cauchy { f: Expr, g: Expr, domain: Interval },
    Generalized { pair: PairSpec, measure: Measure },
}

impl TryFrom<MeanSpecJson> for MeanSpec {
    type Error = MeanError;
    fn try_from(raw: MeanSpecJson) -> Result<Self, Self::Error> {
        Ok(match raw {
            MeanSpecJson::Power { a } => MeanSpec::Power { a },
            MeanSpecJson::Gini { a, b } => MeanSpec::Gini { a, b },
            MeanSpecJson::Stolarsky { a, b } => MeanSpec::Stolarsky { a, b },
            MeanSpecJson::Quasiarithmetic { phi, domain } => {
                // Monotonicity shows up as a nonvanishing Wronskian of (φ, 1).
                GeneratorPair::quasiarithmetic(phi.clone(), domain)?;
                MeanSpec::Quasiarithmetic { phi, domain }
            }
            MeanSpecJson::Bajraktarevic { pair } => {
                MeanSpec::Bajraktarevic { pair: GeneratorPair::from_spec(&pair)? }
            }
            MeanSpecJson::Cauchy { f, g, domain } => MeanSpec::cauchy(f, g, domain)?,
            MeanSpecJson::Generalized { pair, measure } => MeanSpec::Generalized {
                pair: GeneratorPair::from_spec(&pair)?,
                measure,
            },
        })
    }
}

impl MeanSpec {
    /// Builds a Cauchy mean spec, validating the derived pair `(f', g')`.
    pub fn cauchy(f: Expr, g: Expr, domain: Interval) -> Result<Self, MeanError> {
        GeneratorPair::cauchy_derived(&f, &g, domain)?;
        Ok(MeanSpec::Cauchy { f, g, domain })
    }

    /// Parses the JSON form.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, MeanError> {
        serde_json::from_value::<MeanSpec>(v.clone()).map_err(|e| MeanError::Parse(e.to_string()))
    }

    /// Evaluates the mean at `(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64, MeanError> {
        match self {
            MeanSpec::Power { a } => eval_power(*a, x, y),
            MeanSpec::Gini { a, b } => eval_gini(*a, *b, x, y),
            MeanSpec::Stolarsky { a, b } => eval_stolarsky(*a, *b, x, y),
            MeanSpec::Quasiarithmetic { phi, domain } => {
                eval_quasiarithmetic(phi, *domain, x, y)
            }
            MeanSpec::Bajraktarevic { pair } => eval_bajraktarevic(pair, x, y),
            MeanSpec::Cauchy { f, g, domain } => eval_cauchy(f, g, *domain, x, y),
            MeanSpec::Generalized { pair, measure } => eval_generalized(pair, measure, x, y),
        }
    }
}
