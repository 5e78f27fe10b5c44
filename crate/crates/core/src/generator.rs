//! Generator pairs `(f, g)` on an open interval: Wronskians, the second-order
//! signature functions Φ and Ψ, builtin families, and the linear-mixing
//! equivalence relation.
//!
//! A pair is accepted when `g > 0` and the Wronskian `W¹⁰ = f'g - fg'` is
//! bounded away from zero on a dense sample of the domain. Nonvanishing on
//! the whole interval cannot be decided numerically; validation is sampled
//! (257 Chebyshev points) and the sampled nature is part of the contract.

use crate::expr::{self, Expr};
use crate::jet::{Elementary, Jet, JetError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("derivative order {order} exceeds class order {class}")]
    OrderExceedsClass { order: usize, class: usize },
    #[error("point {x} outside the domain ({lo}, {hi})")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },
    #[error("degenerate pair: {0}")]
    DegeneratePair(String),
    #[error("transform matrix is singular (|ad - bc| = {0:e})")]
    SingularMatrix(f64),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// A nonempty bounded open interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl TryFrom<[f64; 2]> for Interval {
    type Error = GeneratorError;
    fn try_from(v: [f64; 2]) -> Result<Self, Self::Error> {
        Interval::new(v[0], v[1])
    }
}

impl From<Interval> for [f64; 2] {
    fn from(i: Interval) -> [f64; 2] {
        [i.lo, i.hi]
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, GeneratorError> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(GeneratorError::InvalidDomain(format!("({lo}, {hi})")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    /// Chebyshev sample points, strictly interior.
    pub fn chebyshev_points(&self, n: usize) -> Vec<f64> {
        let c = self.midpoint();
        let h = 0.5 * self.width();
        (0..n)
            .map(|k| {
                let theta = (2.0 * k as f64 + 1.0) * std::f64::consts::PI / (2.0 * n as f64);
                c + h * theta.cos()
            })
            .collect()
    }

    /// Uniform interior grid with a fractional margin at both ends.
    pub fn interior_grid(&self, n: usize, margin: f64) -> Vec<f64> {
        let lo = self.lo + margin * self.width();
        let hi = self.hi - margin * self.width();
        if n == 1 {
            return vec![0.5 * (lo + hi)];
        }
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }
}

/// Parameters of the sine/cosine type builtin family: the pair
/// `(S_a∘φ, C_a∘φ)`, optionally scaled by `φ'`.
///
/// `S_a` and `C_a` are the fundamental solutions of `h'' = a·h`
/// (`sin`/`cos` for `a < 0`, `x`/`1` for `a = 0`, `sinh`/`cosh` for `a > 0`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigPair {
    pub a: f64,
    pub phi: Expr,
    #[serde(default)]
    pub scale_by_phi_prime: bool,
}

impl TrigPair {
    fn build(&self) -> (Expr, Expr) {
        let phi = self.phi.clone();
        let (s, c) = if self.a < 0.0 {
            let k = (-self.a).sqrt();
            (
                Expr::apply(Elementary::Sin, expr::mul(Expr::Const(k), phi.clone())),
                Expr::apply(Elementary::Cos, expr::mul(Expr::Const(k), phi.clone())),
            )
        } else if self.a > 0.0 {
            let k = self.a.sqrt();
            (
                Expr::apply(Elementary::Sinh, expr::mul(Expr::Const(k), phi.clone())),
                Expr::apply(Elementary::Cosh, expr::mul(Expr::Const(k), phi.clone())),
            )
        } else {
            (phi.clone(), Expr::Const(1.0))
        };
        if self.scale_by_phi_prime {
            let dphi = self.phi.derivative();
            (expr::mul(dphi.clone(), s), expr::mul(dphi, c))
        } else {
            (s, c)
        }
    }
}

/// Builtin generator families, also the JSON schema for pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum PairSpec {
    /// `(x^a, x^b)` with `a ≠ b`; the Bajraktarević form of the Gini mean
    /// G_{a,b}. Domain must lie in (0, ∞).
    Power { a: f64, b: f64, domain: Interval },
    /// `(x^a log x, x^a)`, the `a = b` Gini generator.
    LogPower { a: f64, domain: Interval },
    Trig {
        a: f64,
        phi: Expr,
        #[serde(default)]
        scale: bool,
        domain: Interval,
    },
    /// `(φ, 1)`: the quasiarithmetic mean A_φ as a Bajraktarević pair.
    Quasiarithmetic { phi: Expr, domain: Interval },
    /// `(f', g')` built symbolically from an antiderivative pair; under the
    /// Lebesgue measure this realizes the Cauchy mean C_{f,g}.
    CauchyDerived { f: Expr, g: Expr, domain: Interval },
    Custom { f: Expr, g: Expr, domain: Interval },
}

const VALIDATION_POINTS: usize = 257;
const WRONSKIAN_FLOOR: f64 = 1e-10;

/// A validated pair of jet-evaluable generator functions of class order 8.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorPair {
    f: Expr,
    g: Expr,
    domain: Interval,
    class_order: usize,
}

impl GeneratorPair {
    /// Validates `g > 0` and `|W¹⁰| > 1e-10` on 257 Chebyshev points.
    pub fn new(f: Expr, g: Expr, domain: Interval) -> Result<Self, GeneratorError> {
        let pair = GeneratorPair { f, g, domain, class_order: 8 };
        pair.validate()?;
        Ok(pair)
    }

    /// Builds a pair from a builtin family description.
    pub fn from_spec(spec: &PairSpec) -> Result<Self, GeneratorError> {
        match spec {
            PairSpec::Power { a, b, domain } => Self::power(*a, *b, *domain),
            PairSpec::LogPower { a, domain } => Self::log_power(*a, *domain),
            PairSpec::Trig { a, phi, scale, domain } => Self::trig(
                &TrigPair { a: *a, phi: phi.clone(), scale_by_phi_prime: *scale },
                *domain,
            ),
            PairSpec::Quasiarithmetic { phi, domain } => Self::quasiarithmetic(phi.clone(), *domain),
            PairSpec::CauchyDerived { f, g, domain } => Self::cauchy_derived(f, g, *domain),
            PairSpec::Custom { f, g, domain } => Self::new(f.clone(), g.clone(), *domain),
        }
    }

    /// `(x^a, x^b)` on a domain inside (0, ∞).
    pub fn power(a: f64, b: f64, domain: Interval) -> Result<Self, GeneratorError> {
        if domain.lo() < 0.0 {
            return Err(GeneratorError::InvalidDomain(format!(
                "power pair needs a domain in (0, inf), got ({}, {})",
                domain.lo(),
                domain.hi()
            )));
        }
        Self::new(
            Expr::apply(Elementary::Pow(a), Expr::var()),
            Expr::apply(Elementary::Pow(b), Expr::var()),
            domain,
        )
    }

    /// `(x^a log x, x^a)` on a domain inside (0, ∞).
    pub fn log_power(a: f64, domain: Interval) -> Result<Self, GeneratorError> {
        if domain.lo() < 0.0 {
            return Err(GeneratorError::InvalidDomain(format!(
                "log-power pair needs a domain in (0, inf), got ({}, {})",
                domain.lo(),
                domain.hi()
            )));
        }
        Self::new(
            expr::mul(
                Expr::apply(Elementary::Pow(a), Expr::var()),
                Expr::apply(Elementary::Log, Expr::var()),
            ),
            Expr::apply(Elementary::Pow(a), Expr::var()),
            domain,
        )
    }

    /// `(S_a∘φ, C_a∘φ)`, optionally scaled by `φ'`.
    pub fn trig(tp: &TrigPair, domain: Interval) -> Result<Self, GeneratorError> {
        let (s, c) = tp.build();
        Self::new(s, c, domain)
    }

    /// `(φ, 1)`.
    pub fn quasiarithmetic(phi: Expr, domain: Interval) -> Result<Self, GeneratorError> {
        Self::new(phi, Expr::Const(1.0), domain)
    }

    /// `(f', g')` from the antiderivative pair `(f, g)`.
    pub fn cauchy_derived(f: &Expr, g: &Expr, domain: Interval) -> Result<Self, GeneratorError> {
        Self::new(f.derivative(), g.derivative(), domain)
    }

    /// Re-runs the sampled class checks (`g > 0`, `|W¹⁰|` bounded away from
    /// zero). Required after [`equivalent_transform`](Self::equivalent_transform).
    pub fn validate(&self) -> Result<(), GeneratorError> {
        for x in self.domain.chebyshev_points(VALIDATION_POINTS) {
            let g = self.g.jet(x, 0).map_err(GeneratorError::Jet)?.value();
            if g.is_nan() || g <= 0.0 {
                return Err(GeneratorError::DegeneratePair(format!(
                    "g({x}) = {g} is not positive"
                )));
            }
            let w = self.w10_jet(x, 0)?.value();
            if w.abs() <= WRONSKIAN_FLOOR {
                return Err(GeneratorError::DegeneratePair(format!(
                    "W10({x}) = {w:e} vanishes on the sample grid"
                )));
            }
        }
        Ok(())
    }

    pub fn f(&self) -> &Expr {
        &self.f
    }

    pub fn g(&self) -> &Expr {
        &self.g
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn class_order(&self) -> usize {
        self.class_order
    }

    fn check_domain(&self, x: f64) -> Result<(), GeneratorError> {
        if self.domain.contains(x) {
            Ok(())
        } else {
            Err(GeneratorError::OutOfDomain { x, lo: self.domain.lo, hi: self.domain.hi })
        }
    }

    pub fn f_jet(&self, x: f64, order: usize) -> Result<Jet, GeneratorError> {
        self.check_domain(x)?;
        Ok(self.f.jet(x, order)?)
    }

    pub fn g_jet(&self, x: f64, order: usize) -> Result<Jet, GeneratorError> {
        self.check_domain(x)?;
        Ok(self.g.jet(x, order)?)
    }

    /// Scalar values `(f(x), g(x))`.
    pub fn values(&self, x: f64) -> Result<(f64, f64), GeneratorError> {
        Ok((self.f_jet(x, 0)?.value(), self.g_jet(x, 0)?.value()))
    }

    /// The `(i, j)`-order Wronskian `f⁽ⁱ⁾g⁽ʲ⁾ - g⁽ⁱ⁾f⁽ʲ⁾` at `x`.
    pub fn wronskian(&self, i: usize, j: usize, x: f64) -> Result<f64, GeneratorError> {
        let order = i.max(j);
        if order > self.class_order {
            return Err(GeneratorError::OrderExceedsClass { order, class: self.class_order });
        }
        let fj = self.f_jet(x, order)?;
        let gj = self.g_jet(x, order)?;
        Ok(fj.derivative_value(i) * gj.derivative_value(j)
            - gj.derivative_value(i) * fj.derivative_value(j))
    }

    /// Jet of `W¹⁰ = f'g - fg'` at `x`, valid to `order` (at most 7).
    pub fn w10_jet(&self, x: f64, order: usize) -> Result<Jet, GeneratorError> {
        if order + 1 > self.class_order {
            return Err(GeneratorError::OrderExceedsClass {
                order: order + 1,
                class: self.class_order,
            });
        }
        self.check_domain(x)?;
        let f = self.f.jet(x, order + 1)?;
        let g = self.g.jet(x, order + 1)?;
        Ok(f.derivative() * g - g.derivative() * f)
    }

    /// Jets of `Φ = W²⁰/W¹⁰` and `Ψ = -W²¹/W¹⁰` at `x`, valid to `order`
    /// (at most 6: each needs two derivative orders of headroom).
    pub fn phi_psi_jets(&self, x: f64, order: usize) -> Result<(Jet, Jet), GeneratorError> {
        if order + 2 > self.class_order {
            return Err(GeneratorError::OrderExceedsClass {
                order: order + 2,
                class: self.class_order,
            });
        }
        self.check_domain(x)?;
        let f = self.f.jet(x, order + 2)?;
        let g = self.g.jet(x, order + 2)?;
        let f1 = f.derivative();
        let g1 = g.derivative();
        let f2 = f1.derivative();
        let g2 = g1.derivative();
        let w10 = f1 * g - g1 * f;
        let w20 = f2 * g - g2 * f;
        let w21 = f2 * g1 - g2 * f1;
        let phi = w20.try_div(w10).map_err(|_| {
            GeneratorError::DegeneratePair(format!("W10({x}) vanishes"))
        })?;
        let psi = -(w21.try_div(w10).map_err(|_| {
            GeneratorError::DegeneratePair(format!("W10({x}) vanishes"))
        })?);
        Ok((phi.truncated(order), psi.truncated(order)))
    }

    /// The linearly mixed pair `(af + bg, cf + dg)`.
    ///
    /// The Wronskian picks up the factor `ad - bc`, so nonvanishing survives
    /// automatically; positivity of the new second component is **not**
    /// checked here — call [`validate`](Self::validate) when it matters.
    pub fn equivalent_transform(
        &self,
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    ) -> Result<Self, GeneratorError> {
        let det = a * d - b * c;
        if det.abs() < 1e-14 {
            return Err(GeneratorError::SingularMatrix(det.abs()));
        }
        let h = expr::add(
            expr::mul(Expr::Const(a), self.f.clone()),
            expr::mul(Expr::Const(b), self.g.clone()),
        );
        let k = expr::add(
            expr::mul(Expr::Const(c), self.f.clone()),
            expr::mul(Expr::Const(d), self.g.clone()),
        );
        Ok(GeneratorPair { f: h, g: k, domain: self.domain, class_order: self.class_order })
    }

    /// Pairs are equivalent iff Φ and Ψ agree; checked on `grid` within `tol`.
    pub fn are_equivalent(
        &self,
        other: &GeneratorPair,
        grid: &[f64],
        tol: f64,
    ) -> Result<bool, GeneratorError> {
        for &x in grid {
            let (p1, s1) = self.phi_psi_jets(x, 0)?;
            let (p2, s2) = other.phi_psi_jets(x, 0)?;
            if (p1.value() - p2.value()).abs() > tol || (s1.value() - s2.value()).abs() > tol {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
