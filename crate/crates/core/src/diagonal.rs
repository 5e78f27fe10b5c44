//! High-order derivatives of the diagonal slice `m_x(u) = M(x+u/2, x-u/2)`
//! of a generalized mean with a symmetric measure.
//!
//! Two independent evaluation paths are provided:
//!
//! * [`diagonal_derivatives`] — closed forms in the recursion functions
//!   φ_i, ψ_i and the central moments μ_2, μ_4, μ_6, μ_8;
//! * [`implicit_series_oracle`] — stage-by-stage solution of the
//!   differentiated implicit equation, expanding compositions with the
//!   *recursive* incomplete Bell polynomials and never touching the closed
//!   forms.
//!
//! Their agreement is the main numerical witness that the closed forms are
//! implemented correctly; [`finite_difference_check`] corroborates orders 2
//! and 4 directly from the root-found mean (orders 6 and 8 are hopeless in
//! double precision: an 8th-order stencil loses ~12 digits).

use crate::generator::{GeneratorError, GeneratorPair};
use crate::jet::Jet;
use crate::mean::{self, MeanError};
use crate::measure::{binom, Measure};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagonalError {
    #[error("operation needs class order {needed}, pair has {class}")]
    OrderExceedsClass { needed: usize, class: usize },
    #[error("measure is not symmetric about 1/2")]
    AsymmetricMeasure,
    #[error("finite-difference stencil of half-width {h} leaves the domain at x = {x}")]
    StencilOutOfDomain { x: f64, h: f64 },
    #[error("no Bell polynomial B_{{{n},{k}}} in the supported table")]
    UnsupportedIndex { n: usize, k: usize },
    #[error("finite differences support orders 2 and 4 only, got {0}")]
    UnsupportedFdOrder(usize),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Mean(#[from] MeanError),
}

/// Default symmetry tolerance, matching the quadrature floor.
pub const SYMMETRY_TOL: f64 = 1e-11;

/// Jets of the recursion functions φ_0..φ_8 and ψ_0..ψ_8 at a point.
///
/// The recursion consumes one differentiation order per step, so the table
/// is triangular: φ_i and ψ_i are valid jets to order `8 - i` (entries 0 and
/// 1 are exact constants).
#[derive(Debug, Clone)]
pub struct RecursionTable {
    pub phi: [Jet; 9],
    pub psi: [Jet; 9],
}

impl RecursionTable {
    /// Residual of the two-step recursion identities for `i ∈ {0,…,4}`,
    /// checked at value level against independently supplied Φ and Ψ jets.
    pub fn two_step_residual(&self, phi_fg: &Jet, psi_fg: &Jet) -> f64 {
        let cap_phi = phi_fg.value();
        let cap_psi = psi_fg.value();
        let phi3 = self.phi[3].value();
        let psi3 = self.psi[3].value();
        let mut worst: f64 = 0.0;
        for i in 0..=4 {
            let (p, q) = (&self.phi[i], &self.psi[i]);
            let lhs_phi = self.phi[i + 2].value();
            let rhs_phi = p.derivative_value(2)
                + 2.0 * p.derivative_value(1) * cap_phi
                + p.value() * phi3
                + 2.0 * q.derivative_value(1)
                + q.value() * cap_phi;
            let lhs_psi = self.psi[i + 2].value();
            let rhs_psi = 2.0 * p.derivative_value(1) * cap_psi
                + p.value() * psi3
                + q.derivative_value(2)
                + q.value() * cap_psi;
            let scale = lhs_phi.abs().max(rhs_phi.abs()).max(1.0);
            worst = worst.max((lhs_phi - rhs_phi).abs() / scale);
            let scale = lhs_psi.abs().max(rhs_psi.abs()).max(1.0);
            worst = worst.max((lhs_psi - rhs_psi).abs() / scale);
        }
        worst
    }
}

fn require_class_8(pair: &GeneratorPair) -> Result<(), DiagonalError> {
    if pair.class_order() < 8 {
        return Err(DiagonalError::OrderExceedsClass { needed: 8, class: pair.class_order() });
    }
    Ok(())
}

/// Builds the φ_i/ψ_i jets at `x` by the one-step recursion
/// `φ_{i+1} = φ_i' + φ_i Φ + ψ_i`, `ψ_{i+1} = φ_i Ψ + ψ_i'`.
pub fn recursion_table(pair: &GeneratorPair, x: f64) -> Result<RecursionTable, DiagonalError> {
    require_class_8(pair)?;
    let (cap_phi, cap_psi) = pair.phi_psi_jets(x, 6)?;
    let mut phi = [Jet::constant(0.0); 9];
    let mut psi = [Jet::constant(0.0); 9];
    phi[0] = Jet::constant(0.0);
    psi[0] = Jet::constant(1.0);
    phi[1] = Jet::constant(1.0);
    psi[1] = Jet::constant(0.0);
    for i in 1..8 {
        phi[i + 1] = phi[i].derivative() + phi[i] * cap_phi + psi[i];
        psi[i + 1] = phi[i] * cap_psi + psi[i].derivative();
    }
    Ok(RecursionTable { phi, psi })
}

/// True iff both two-step recursion identities hold at `x` within `tol`.
pub fn two_step_check(pair: &GeneratorPair, x: f64, tol: f64) -> Result<bool, DiagonalError> {
    let (cap_phi, cap_psi) = pair.phi_psi_jets(x, 6)?;
    let table = recursion_table(pair, x)?;
    Ok(table.two_step_residual(&cap_phi, &cap_psi) <= tol)
}

/// Incomplete Bell polynomials at the argument patterns this crate needs:
/// odd coordinates identically zero.
pub mod bell {
    use super::DiagonalError;
    use crate::measure::binom;

    /// The general recursive definition
    /// `B_{n,k}(x_1,…) = Σ_j C(n-1, j-1) x_j B_{n-j,k-1}(x_1,…)`,
    /// with `B_{0,0} = 1` and `B_{n,0} = B_{0,k} = 0` otherwise.
    ///
    /// `xs[j-1]` holds `x_j`; the slice must cover `x_1..x_{n-k+1}`.
    pub fn recursive(n: usize, k: usize, xs: &[f64]) -> f64 {
        if n == 0 && k == 0 {
            return 1.0;
        }
        if n == 0 || k == 0 {
            return 0.0;
        }
        let mut sum = 0.0;
        for j in 1..=(n - k + 1) {
            sum += binom(n - 1, j - 1) * xs[j - 1] * recursive(n - j, k - 1, xs);
        }
        sum
    }

    /// Closed forms for even `n ≤ 8`, assuming odd coordinates vanish.
    ///
    /// For `k > n/2` the value is identically zero under that assumption.
    pub fn closed_form(n: usize, k: usize, xs: &[f64]) -> Result<f64, DiagonalError> {
        if !matches!(n, 2 | 4 | 6 | 8) || k == 0 || k > n {
            return Err(DiagonalError::UnsupportedIndex { n, k });
        }
        if k > n / 2 {
            return Ok(0.0);
        }
        let x = |j: usize| xs[j - 1];
        Ok(match (n, k) {
            (2, 1) => x(2),
            (4, 1) => x(4),
            (4, 2) => 3.0 * x(2) * x(2),
            (6, 1) => x(6),
            (6, 2) => 15.0 * x(2) * x(4),
            (6, 3) => 15.0 * x(2).powi(3),
            (8, 1) => x(8),
            (8, 2) => 28.0 * x(2) * x(6) + 35.0 * x(4) * x(4),
            (8, 3) => 210.0 * x(2) * x(2) * x(4),
            (8, 4) => 105.0 * x(2).powi(4),
            _ => unreachable!(),
        })
    }
}

/// Even-order diagonal derivatives `m_x⁽²ⁱ⁾(0)`; the odd orders vanish for
/// symmetric measures and are not stored.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DiagonalDerivatives {
    pub d2: f64,
    pub d4: f64,
    pub d6: f64,
    pub d8: f64,
}

impl DiagonalDerivatives {
    pub fn order(&self, n: usize) -> f64 {
        match n {
            2 => self.d2,
            4 => self.d4,
            6 => self.d6,
            8 => self.d8,
            _ => panic!("diagonal derivatives are stored for orders 2, 4, 6, 8"),
        }
    }
}

fn symmetric_moments(m: &Measure) -> Result<crate::measure::MomentVector, DiagonalError> {
    if !m.is_symmetric(SYMMETRY_TOL) {
        return Err(DiagonalError::AsymmetricMeasure);
    }
    Ok(m.moments())
}

/// Closed forms for the diagonal derivatives in terms of the recursion
/// functions and central moments.
pub fn diagonal_derivatives(
    pair: &GeneratorPair,
    m: &Measure,
    x: f64,
) -> Result<DiagonalDerivatives, DiagonalError> {
    let mom = symmetric_moments(m)?;
    let t = recursion_table(pair, x)?;
    let p = |i: usize| t.phi[i].value();
    let q = |i: usize| t.psi[i].value();
    let (mu2, mu4, mu6, mu8) =
        (mom.central(2), mom.central(4), mom.central(6), mom.central(8));
    let (p2, p3, p4, p6, p8) = (p(2), p(3), p(4), p(6), p(8));
    let (q2, q3, q4, q6) = (q(2), q(3), q(4), q(6));

    let d2 = mu2 * p2;
    let d4 = mu4 * p4 - 3.0 * mu2 * mu2 * (p2.powi(3) + 2.0 * q2 * p2);
    let d6 = mu6 * p6
        - 15.0 * mu4 * mu2 * (p4 * (p2 * p2 + q2) + p2 * q4)
        - 15.0
            * mu2.powi(3)
            * p2
            * (p3 * p2 * p2 - 3.0 * (p2 * p2 + q2) * (p2 * p2 + 2.0 * q2));
    let d8 = mu8 * p8
        - 28.0 * mu6 * mu2 * (p6 * (p2 * p2 + q2) + p2 * q6)
        - 35.0 * mu4 * mu4 * (p4 * p4 * p2 + 2.0 * p4 * q4)
        + 210.0
            * mu4
            * mu2
            * mu2
            * (p4 * (3.0 * p2.powi(4) + p2 * p2 * (7.0 * q2 - p3) + 2.0 * q2 * q2)
                + 2.0 * p2 * q4 * (p2 * p2 + 2.0 * q2))
        - 105.0
            * mu2.powi(4)
            * (p4 * p2.powi(4)
                + 15.0 * p2.powi(7)
                + 2.0 * p2.powi(3) * (5.0 * p2 * p2 + 6.0 * q2) * (6.0 * q2 - p3)
                + 4.0 * p2 * (6.0 * q2.powi(3) - p2.powi(3) * q3));
    Ok(DiagonalDerivatives { d2, d4, d6, d8 })
}

/// Independent evaluation of the same derivatives from the differentiated
/// implicit equation
/// `Σ_i C(n,2i) μ_{2i} |F⁽²ⁱ⁾(x), (F∘m_x)⁽ⁿ⁻²ⁱ⁾(0)| = 0`.
///
/// At each stage `n ∈ {2,4,6,8}` every lower-order derivative of `m_x` is
/// known, the composition derivatives are expanded through
/// [`bell::recursive`], and the single unknown `m_x⁽ⁿ⁾(0)` is isolated from
/// the `i = 0` term.
pub fn implicit_series_oracle(
    pair: &GeneratorPair,
    m: &Measure,
    x: f64,
) -> Result<DiagonalDerivatives, DiagonalError> {
    require_class_8(pair)?;
    let mom = symmetric_moments(m)?;
    let fj = pair.f_jet(x, 8)?;
    let gj = pair.g_jet(x, 8)?;
    let u: Vec<(f64, f64)> =
        (0..=8).map(|k| (fj.derivative_value(k), gj.derivative_value(k))).collect();
    let det = |a: (f64, f64), b: (f64, f64)| a.0 * b.1 - b.0 * a.1;
    let w10 = -det(u[0], u[1]);

    // m_x^(j)(0); odd entries stay zero.
    let mut d = [0.0_f64; 9];
    // (F∘m_x)^(j)(0) as 2-vectors; odd entries stay zero.
    let mut comp = [(0.0_f64, 0.0_f64); 9];
    comp[0] = u[0];
    for n in [2usize, 4, 6, 8] {
        // Known part of (F∘m_x)^(n): Bell terms with k >= 2 involve only
        // lower-order slice derivatives.
        let args: Vec<f64> = (1..=n).map(|j| d[j]).collect();
        let mut known = (0.0, 0.0);
        for k in 2..=n {
            let b = bell::recursive(n, k, &args);
            known.0 += u[k].0 * b;
            known.1 += u[k].1 * b;
        }
        let mut rhs = det(u[0], known);
        for i in 1..=n / 2 {
            rhs += binom(n, 2 * i) * mom.central(2 * i) * det(u[2 * i], comp[n - 2 * i]);
        }
        d[n] = rhs / w10;
        comp[n] = (known.0 + u[1].0 * d[n], known.1 + u[1].1 * d[n]);
    }
    Ok(DiagonalDerivatives { d2: d[2], d4: d[4], d6: d[6], d8: d[8] })
}

/// Residuals of Richardson-extrapolated central differences against the
/// closed forms, for the requested orders (2 and/or 4).
#[derive(Debug, Clone, Copy, Default)]
pub struct FdResiduals {
    pub d2: Option<f64>,
    pub d4: Option<f64>,
}

/// Central finite differences of the root-found slice, Richardson
/// extrapolated over three halvings of `h = width/100`.
pub fn finite_difference_check(
    pair: &GeneratorPair,
    m: &Measure,
    x: f64,
    orders: &[usize],
) -> Result<FdResiduals, DiagonalError> {
    for &n in orders {
        if n != 2 && n != 4 {
            return Err(DiagonalError::UnsupportedFdOrder(n));
        }
    }
    let closed = diagonal_derivatives(pair, m, x)?;
    let domain = pair.domain();
    let h0 = domain.width() * 1e-2;
    if !(domain.contains(x - h0) && domain.contains(x + h0)) {
        return Err(DiagonalError::StencilOutOfDomain { x, h: h0 });
    }
    let slice = |u: f64| -> Result<f64, DiagonalError> {
        Ok(mean::eval_generalized(pair, m, x + 0.5 * u, x - 0.5 * u)?)
    };
    let s0 = slice(0.0)?;
    let mut out = FdResiduals::default();
    if orders.contains(&2) {
        let stencil = |h: f64| -> Result<f64, DiagonalError> {
            Ok((slice(h)? - 2.0 * s0 + slice(-h)?) / (h * h))
        };
        let fd = richardson(stencil(h0)?, stencil(0.5 * h0)?, stencil(0.25 * h0)?);
        out.d2 = Some((fd - closed.d2).abs());
    }
    if orders.contains(&4) {
        // The stencil reads s(±2h), i.e. mean arguments x ± h; root-finder
        // noise scales like h⁻⁴, so the base level stays at h0.
        let stencil = |h: f64| -> Result<f64, DiagonalError> {
            Ok((slice(2.0 * h)? - 4.0 * slice(h)? + 6.0 * s0 - 4.0 * slice(-h)?
                + slice(-2.0 * h)?)
                / h.powi(4))
        };
        let fd = richardson(stencil(h0)?, stencil(0.5 * h0)?, stencil(0.25 * h0)?);
        out.d4 = Some((fd - closed.d4).abs());
    }
    Ok(out)
}

/// Two-level Richardson extrapolation for even-error central differences.
fn richardson(t0: f64, t1: f64, t2: f64) -> f64 {
    let a = (4.0 * t1 - t0) / 3.0;
    let b = (4.0 * t2 - t1) / 3.0;
    (16.0 * b - a) / 15.0
}
