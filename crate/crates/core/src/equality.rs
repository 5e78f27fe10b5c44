//! Equality certification for generalized quasiarithmetic means.
//!
//! Three layers, from ground truth to structure:
//!
//! * [`means_equal_grid`] — direct evaluation comparison on a grid with both
//!   near-diagonal and far-from-diagonal points; every verdict rests on it.
//! * [`check_equality_chain`] — the five equivalent conditions for two pairs with
//!   matching Ψ under one symmetric measure: means equal everywhere, equal
//!   near the diagonal, second diagonal derivatives equal, Φ equal, pairs
//!   linearly equivalent.
//! * [`check_bajraktarevic_cauchy`] — the condition suite for the Bajraktarević-vs-Cauchy
//!   setting (μ = ½(δ₀+δ₁), ν = λ): diagonal derivatives through order 8,
//!   `Φ_{h,k} = 3Φ_{f,g}` with the two extracted constants, the quadratic
//!   generator relations, the Wronskian cube law, and agreement of both
//!   means with the quasiarithmetic mean generated by `∫W¹⁰_{f,g}`.
//!
//! [`gini_stolarsky_scan`] runs the classical two-parameter families against
//! each other and classifies every coincidence, and [`intersection_demo`]
//! certifies explicitly constructed intersection instances.

use crate::diagonal::{self, DiagonalError};
use crate::expr::Expr;
use crate::generator::{GeneratorError, GeneratorPair, Interval};
use crate::jet::Elementary;
use crate::mean::{self, MeanError, MeanSpec};
use crate::measure::{modified_power, Measure, MeasureError};
use crate::{quad, solve};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EqualityError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("Phi relation fails: residual {residual:e} exceeds {tol:e}")]
    PhiMismatch { residual: f64, tol: f64 },
    #[error("quadratic fit is rank-deficient: {0}")]
    SingularFit(String),
    #[error("pairs live on different domains")]
    MismatchedDomains,
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Mean(#[from] MeanError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Diagonal(#[from] DiagonalError),
    #[error(transparent)]
    Jet(#[from] crate::jet::JetError),
}

/// Tolerances and grid sizes shared by the certification checks.
#[derive(Debug, Clone)]
pub struct CheckOptions {
    /// Mean-value comparison tolerance for conditions (i)/(ii).
    pub mean_tol: f64,
    /// Tolerance for the quasiarithmetic comparison (vii), where the
    /// generator is produced by cumulative quadrature.
    pub quasi_tol: f64,
    /// Function-level tolerance (Φ/Ψ relations, fits, derivatives).
    pub func_tol: f64,
    /// Maximum relative spread for a sample to count as a constant.
    pub spread_tol: f64,
    /// Number of Chebyshev points for function-level conditions.
    pub func_points: usize,
    /// Side length of the mean-comparison lattice.
    pub mean_grid: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            mean_tol: 1e-11,
            quasi_tol: 1e-10,
            func_tol: 1e-8,
            spread_tol: 1e-6,
            func_points: 64,
            mean_grid: 17,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Equal,
    NotEqual,
    Inconclusive,
}

/// One certified or refuted condition.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionRecord {
    pub id: String,
    pub description: String,
    pub passed: bool,
    pub max_residual: f64,
    /// Constants extracted while checking this condition.
    pub constants: BTreeMap<String, f64>,
}

/// Structured certification verdict with per-condition records.
#[derive(Debug, Clone, Serialize)]
pub struct EqualityReport {
    pub verdict: Verdict,
    pub conditions: Vec<ConditionRecord>,
}

impl EqualityReport {
    pub fn condition(&self, id: &str) -> Option<&ConditionRecord> {
        self.conditions.iter().find(|c| c.id == id)
    }

    pub fn all_passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }
}

fn record(
    id: &str,
    description: &str,
    passed: bool,
    max_residual: f64,
) -> ConditionRecord {
    ConditionRecord {
        id: id.into(),
        description: description.into(),
        passed,
        max_residual,
        constants: BTreeMap::new(),
    }
}

/// Mean of the samples and their spread relative to `max(|mean|, 1)`.
fn constancy(samples: &[f64]) -> (f64, f64) {
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &s in samples {
        lo = lo.min(s);
        hi = hi.max(s);
    }
    (mean, (hi - lo) / mean.abs().max(1.0))
}

/// Comparison grid on `I²`: an n×n lattice over the centered sub-square
/// (10% margin) plus near-diagonal pairs.
pub fn mean_comparison_grid(domain: Interval, n: usize) -> Vec<(f64, f64)> {
    let xs = domain.interior_grid(n, 0.1);
    let mut grid = Vec::with_capacity(n * n + 2 * n);
    for &x in &xs {
        for &y in &xs {
            grid.push((x, y));
        }
    }
    let delta = domain.width() / 200.0;
    for &x in &xs {
        if domain.contains(x + delta) {
            grid.push((x, x + delta));
            grid.push((x + delta, x));
        }
    }
    grid
}

/// Near-diagonal band only.
fn near_diagonal_grid(domain: Interval, n: usize) -> Vec<(f64, f64)> {
    let xs = domain.interior_grid(n, 0.1);
    let mut grid = Vec::new();
    for &x in &xs {
        for k in 1..=3 {
            let delta = k as f64 * domain.width() / 400.0;
            if domain.contains(x + delta) {
                grid.push((x, x + delta));
            }
            if domain.contains(x - delta) {
                grid.push((x, x - delta));
            }
        }
    }
    grid
}

fn means_equal_fn<F1, F2>(
    m1: F1,
    m2: F2,
    grid: &[(f64, f64)],
    tol: f64,
) -> Result<(bool, f64), MeanError>
where
    F1: Fn(f64, f64) -> Result<f64, MeanError>,
    F2: Fn(f64, f64) -> Result<f64, MeanError>,
{
    let mut worst: f64 = 0.0;
    for &(x, y) in grid {
        worst = worst.max((m1(x, y)? - m2(x, y)?).abs());
    }
    Ok((worst <= tol, worst))
}

/// Direct evaluation comparison of two mean specifications on a grid.
///
/// This is the ground truth behind every certification: returns the pass
/// flag and the maximum absolute residual.
pub fn means_equal_grid(
    spec1: &MeanSpec,
    spec2: &MeanSpec,
    grid: &[(f64, f64)],
    tol: f64,
) -> Result<(bool, f64), MeanError> {
    means_equal_fn(|x, y| spec1.eval(x, y), |x, y| spec2.eval(x, y), grid, tol)
}

/// The five-condition equality chain for pairs with matching Ψ under one
/// symmetric measure with `μ₂ ≠ 0`.
///
/// Conditions: (i) means equal on `I²`, (ii) equal near the diagonal,
/// (iii) second diagonal derivatives equal, (iv) Φ equal, (v) pairs
/// equivalent. These are equivalent in exact arithmetic; the report shows which
/// hold numerically.
pub fn check_equality_chain(
    pair1: &GeneratorPair,
    pair2: &GeneratorPair,
    m: &Measure,
    opts: &CheckOptions,
) -> Result<EqualityReport, EqualityError> {
    if pair1.domain() != pair2.domain() {
        return Err(EqualityError::MismatchedDomains);
    }
    let domain = pair1.domain();
    let mom = m.moments();
    if !m.is_symmetric(diagonal::SYMMETRY_TOL) {
        return Err(EqualityError::HypothesisViolated("measure is not symmetric".into()));
    }
    if mom.central(2).abs() < 1e-14 {
        return Err(EqualityError::HypothesisViolated("second central moment vanishes".into()));
    }
    let xs = domain.chebyshev_points(opts.func_points);
    // Hypothesis: Ψ agreement.
    let mut psi_resid: f64 = 0.0;
    for &x in &xs {
        let (_, psi1) = pair1.phi_psi_jets(x, 0)?;
        let (_, psi2) = pair2.phi_psi_jets(x, 0)?;
        psi_resid = psi_resid.max((psi1.value() - psi2.value()).abs());
    }
    if psi_resid > opts.func_tol {
        return Err(EqualityError::HypothesisViolated(format!(
            "Psi functions differ by {psi_resid:e}"
        )));
    }

    let mut conditions = Vec::new();

    let grid = mean_comparison_grid(domain, opts.mean_grid);
    let (eq_full, r_full) = means_equal_fn(
        |x, y| mean::eval_generalized(pair1, m, x, y),
        |x, y| mean::eval_generalized(pair2, m, x, y),
        &grid,
        opts.mean_tol,
    )?;
    conditions.push(record("i", "means equal on the full grid", eq_full, r_full));

    let band = near_diagonal_grid(domain, opts.mean_grid);
    let (eq_band, r_band) = means_equal_fn(
        |x, y| mean::eval_generalized(pair1, m, x, y),
        |x, y| mean::eval_generalized(pair2, m, x, y),
        &band,
        opts.mean_tol,
    )?;
    conditions.push(record("ii", "means equal near the diagonal", eq_band, r_band));

    let mut r_d2: f64 = 0.0;
    for &x in &xs {
        let a = diagonal::diagonal_derivatives(pair1, m, x)?.d2;
        let b = diagonal::diagonal_derivatives(pair2, m, x)?.d2;
        r_d2 = r_d2.max((a - b).abs() / a.abs().max(b.abs()).max(1.0));
    }
    conditions.push(record(
        "iii",
        "second diagonal derivatives equal",
        r_d2 <= opts.func_tol,
        r_d2,
    ));

    let mut r_phi: f64 = 0.0;
    for &x in &xs {
        let (phi1, _) = pair1.phi_psi_jets(x, 0)?;
        let (phi2, _) = pair2.phi_psi_jets(x, 0)?;
        r_phi = r_phi.max((phi1.value() - phi2.value()).abs());
    }
    conditions.push(record("iv", "Phi functions equal", r_phi <= opts.func_tol, r_phi));

    let equivalent = pair1.are_equivalent(pair2, &xs, opts.func_tol)?;
    conditions.push(record(
        "v",
        "pairs related by a nonsingular linear mixing",
        equivalent,
        if equivalent { 0.0 } else { f64::INFINITY },
    ));

    let verdict = if eq_full { Verdict::Equal } else { Verdict::NotEqual };
    Ok(EqualityReport { verdict, conditions })
}

/// Function samples and constants extracted under the shared-ℓ moment-family
/// hypothesis `μ = π(ℓ,p)`, `ν = π(ℓ,q)`.
#[derive(Debug, Clone, Serialize)]
pub struct EqualityWitness {
    pub grid: Vec<f64>,
    /// `V = |W¹⁰_{f,g}|⁻ᵖ` samples.
    pub v: Vec<f64>,
    /// `Φ = -V'/V` samples.
    pub phi: Vec<f64>,
    /// `B` samples recovered from the pair of Ψ-identities.
    pub b: Vec<f64>,
    /// Integration constant `c`, with its constancy spread.
    pub c: f64,
    pub c_spread: f64,
    /// Residual of `qΦ_{h,k} = pΦ_{f,g} = -V'/V`.
    pub phi_residual: f64,
    /// `Ψ_{f,g}/(W¹⁰_{f,g})²` when constant (p = 2 side).
    pub a_const: Option<f64>,
    /// Cauchy-side constant from the second Ψ-identity.
    pub b_const: Option<f64>,
    /// `W¹⁰_{h,k}/(W¹⁰_{f,g})³` when constant.
    pub eta: Option<f64>,
}

/// Recovers `V`, `Φ`, the function `B` and the constant `c` from the two
/// Ψ-identities
/// `Ψ_{f,g} = (B+c)/(6p⟨2⟩V) - (p-2)(Φ'-Φ²)/(6p²)` (and the `q`/`B-c`
/// mirror), after checking `qΦ_{h,k} = pΦ_{f,g} = -V'/V`.
pub fn extract_witness(
    pair_f: &GeneratorPair,
    pair_h: &GeneratorPair,
    p: f64,
    q: f64,
    opts: &CheckOptions,
) -> Result<EqualityWitness, EqualityError> {
    if pair_f.domain() != pair_h.domain() {
        return Err(EqualityError::MismatchedDomains);
    }
    let xs = pair_f.domain().chebyshev_points(opts.func_points);
    let p2 = modified_power(p, 2);
    let q2 = modified_power(q, 2);
    let mut v_samples = Vec::with_capacity(xs.len());
    let mut phi_samples = Vec::with_capacity(xs.len());
    let mut b_samples = Vec::with_capacity(xs.len());
    let mut c_samples = Vec::with_capacity(xs.len());
    let mut phi_residual: f64 = 0.0;
    for &x in &xs {
        let w10 = pair_f.w10_jet(x, 2)?;
        let v = Elementary::AbsPow(-p).apply(w10)?;
        let phi_j = -(v.derivative().try_div(v)?);
        let (v0, phi0, phi1) = (v.value(), phi_j.value(), phi_j.derivative_value(1));
        let (phi_f, psi_f) = pair_f.phi_psi_jets(x, 0)?;
        let (phi_h, psi_h) = pair_h.phi_psi_jets(x, 0)?;
        let scale = phi0.abs().max(1.0);
        phi_residual = phi_residual
            .max((p * phi_f.value() - phi0).abs() / scale)
            .max((q * phi_h.value() - phi0).abs() / scale);
        // Invert the two identities pointwise for B + c and B - c.
        let correction = |r: f64| (r - 2.0) * (phi1 - phi0 * phi0) / (6.0 * r * r);
        let u_p = 6.0 * p2 * v0 * (psi_f.value() + correction(p));
        let u_q = 6.0 * q2 * v0 * (psi_h.value() + correction(q));
        v_samples.push(v0);
        phi_samples.push(phi0);
        b_samples.push(0.5 * (u_p + u_q));
        c_samples.push(0.5 * (u_p - u_q));
    }
    if phi_residual > opts.func_tol {
        return Err(EqualityError::PhiMismatch { residual: phi_residual, tol: opts.func_tol });
    }
    let (c, c_spread) = constancy(&c_samples);
    Ok(EqualityWitness {
        grid: xs,
        v: v_samples,
        phi: phi_samples,
        b: b_samples,
        c,
        c_spread,
        phi_residual,
        a_const: None,
        b_const: None,
        eta: None,
    })
}

/// Least-squares fit of `coef · (m1, m2, m3) = rhs` over the sample rows;
/// returns the coefficients and the maximum pointwise residual.
fn quadratic_fit(
    rows: &[[f64; 3]],
    rhs: &[f64],
) -> Result<([f64; 3], f64), EqualityError> {
    // Normal equations, 3×3.
    let mut ata = [[0.0_f64; 3]; 3];
    let mut atb = [0.0_f64; 3];
    for (row, &b) in rows.iter().zip(rhs) {
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * b;
        }
    }
    let scale = ata.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
    // Gaussian elimination with partial pivoting.
    let mut m = ata;
    let mut rhs3 = atb;
    for col in 0..3 {
        let pivot = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())).unwrap();
        if m[pivot][col].abs() <= 1e-12 * scale.max(1e-300) {
            return Err(EqualityError::SingularFit(format!(
                "pivot {:e} in column {col}",
                m[pivot][col]
            )));
        }
        m.swap(col, pivot);
        rhs3.swap(col, pivot);
        for r in col + 1..3 {
            let f = m[r][col] / m[col][col];
            for c in col..3 {
                m[r][c] -= f * m[col][c];
            }
            rhs3[r] -= f * rhs3[col];
        }
    }
    let mut coef = [0.0_f64; 3];
    for r in (0..3).rev() {
        let mut s = rhs3[r];
        for c in r + 1..3 {
            s -= m[r][c] * coef[c];
        }
        coef[r] = s / m[r][r];
    }
    let mut resid: f64 = 0.0;
    for (row, &b) in rows.iter().zip(rhs) {
        let fitted: f64 = (0..3).map(|i| coef[i] * row[i]).sum();
        resid = resid.max((fitted - b).abs());
    }
    Ok((coef, resid))
}

/// The Bajraktarević-vs-Cauchy condition suite: `μ = ½(δ₀+δ₁)`, `ν = λ`
/// (the moment-family hypothesis at `(p, q) = (2, 2/3)`).
///
/// Checks, with ids in the report:
/// * `iii` — diagonal derivatives of orders 2..8 agree;
/// * `iv`  — `Φ_{h,k} = 3Φ_{f,g}`, plus constancy of the two Ψ-shape
///   quantities (extracting `a` and `b`);
/// * `v`   — quadratic relations `αf²+βfg+γg² = 1` and
///   `δh²+εhk+ζk² = |W¹⁰_{h,k}|^{2/3}`, plus constancy of
///   `W¹⁰_{h,k}/(W¹⁰_{f,g})³` (extracting `η`);
/// * `vi`  — the derivative form of the antiderivative relation:
///   `cbrt(W¹⁰_{h,k}) = cbrt(η)·W¹⁰_{f,g}` pointwise;
/// * `i`/`ii` — direct mean comparison on the full grid / near the diagonal;
/// * `vii` — both means agree with `A_φ`, `φ = ∫W¹⁰_{f,g}` built by
///   cumulative quadrature from the domain midpoint.
pub fn check_bajraktarevic_cauchy(
    pair_f: &GeneratorPair,
    pair_h: &GeneratorPair,
    opts: &CheckOptions,
) -> Result<EqualityReport, EqualityError> {
    if pair_f.domain() != pair_h.domain() {
        return Err(EqualityError::MismatchedDomains);
    }
    let domain = pair_f.domain();
    let mu = Measure::endpoint_atoms();
    let nu = Measure::lebesgue();
    let xs = domain.chebyshev_points(opts.func_points);
    let mut conditions = Vec::new();

    // (iii) diagonal derivatives of orders 2, 4, 6, 8.
    let mut r3: f64 = 0.0;
    for &x in &xs {
        let df = diagonal::diagonal_derivatives(pair_f, &mu, x)?;
        let dh = diagonal::diagonal_derivatives(pair_h, &nu, x)?;
        for n in [2usize, 4, 6, 8] {
            let (a, b) = (df.order(n), dh.order(n));
            r3 = r3.max((a - b).abs() / a.abs().max(b.abs()).max(1.0));
        }
    }
    conditions.push(record(
        "iii",
        "diagonal derivatives up to order 8 agree",
        r3 <= opts.func_tol,
        r3,
    ));

    // (iv) Phi tripling and the two Ψ-shape constants.
    let mut r_phi: f64 = 0.0;
    let mut a_samples = Vec::with_capacity(xs.len());
    let mut b_samples = Vec::with_capacity(xs.len());
    for &x in &xs {
        let (phi_f, psi_f) = pair_f.phi_psi_jets(x, 1)?;
        let (phi_h, psi_h) = pair_h.phi_psi_jets(x, 1)?;
        let w10_f = pair_f.w10_jet(x, 0)?.value();
        let w10_h = pair_h.w10_jet(x, 0)?.value();
        let scale = phi_h.value().abs().max(1.0);
        r_phi = r_phi.max((phi_h.value() - 3.0 * phi_f.value()).abs() / scale);
        a_samples.push(psi_f.value() / (w10_f * w10_f));
        b_samples.push(
            (psi_h.value() - phi_h.derivative_value(1) / 3.0
                + 2.0 / 9.0 * phi_h.value() * phi_h.value())
                / w10_h.abs().powf(2.0 / 3.0),
        );
    }
    let (a_const, a_spread) = constancy(&a_samples);
    let (b_const, b_spread) = constancy(&b_samples);
    let iv_pass =
        r_phi <= opts.func_tol && a_spread <= opts.spread_tol && b_spread <= opts.spread_tol;
    let mut cond = record(
        "iv",
        "Phi_{h,k} = 3 Phi_{f,g} with constant Psi shapes",
        iv_pass,
        r_phi.max(a_spread).max(b_spread),
    );
    cond.constants.insert("a".into(), a_const);
    cond.constants.insert("b".into(), b_const);
    conditions.push(cond);

    // (v) quadratic generator relations and the Wronskian cube law.
    let mut rows_f = Vec::with_capacity(xs.len());
    let mut rows_h = Vec::with_capacity(xs.len());
    let mut rhs_f = Vec::with_capacity(xs.len());
    let mut rhs_h = Vec::with_capacity(xs.len());
    let mut eta_samples = Vec::with_capacity(xs.len());
    for &x in &xs {
        let (f, g) = pair_f.values(x)?;
        let (h, k) = pair_h.values(x)?;
        rows_f.push([f * f, f * g, g * g]);
        rhs_f.push(1.0);
        let w10_h = pair_h.w10_jet(x, 0)?.value();
        rows_h.push([h * h, h * k, k * k]);
        rhs_h.push(w10_h.abs().powf(2.0 / 3.0));
        let w10_f = pair_f.w10_jet(x, 0)?.value();
        eta_samples.push(w10_h / w10_f.powi(3));
    }
    let (coef_f, resid_f) = quadratic_fit(&rows_f, &rhs_f)?;
    let (coef_h, resid_h) = quadratic_fit(&rows_h, &rhs_h)?;
    let (eta, eta_spread) = constancy(&eta_samples);
    let v_pass = resid_f <= opts.func_tol
        && resid_h <= opts.func_tol
        && eta_spread <= opts.spread_tol;
    let mut cond = record(
        "v",
        "quadratic generator relations with W_{h,k} = eta W_{f,g}^3",
        v_pass,
        resid_f.max(resid_h).max(eta_spread),
    );
    for (name, value) in [
        ("alpha", coef_f[0]),
        ("beta", coef_f[1]),
        ("gamma", coef_f[2]),
        ("delta", coef_h[0]),
        ("epsilon", coef_h[1]),
        ("zeta", coef_h[2]),
        ("eta", eta),
    ] {
        cond.constants.insert(name.into(), value);
    }
    conditions.push(cond);

    // (vi) derivative form of the antiderivative chain:
    // cbrt(W_{h,k}) = cbrt(eta) · W_{f,g}.
    let mut r6: f64 = 0.0;
    for &x in &xs {
        let w10_f = pair_f.w10_jet(x, 0)?.value();
        let w10_h = pair_h.w10_jet(x, 0)?.value();
        let lhs = w10_h.cbrt();
        let rhs = eta.cbrt() * w10_f;
        r6 = r6.max((lhs - rhs).abs() / lhs.abs().max(1.0));
    }
    conditions.push(record(
        "vi",
        "cube root of W_{h,k} is proportional to W_{f,g}",
        r6 <= opts.func_tol,
        r6,
    ));

    // (i)/(ii) direct mean comparison.
    let grid = mean_comparison_grid(domain, opts.mean_grid);
    let (eq_full, r_full) = means_equal_fn(
        |x, y| mean::eval_generalized(pair_f, &mu, x, y),
        |x, y| mean::eval_generalized(pair_h, &nu, x, y),
        &grid,
        opts.mean_tol,
    )?;
    conditions.push(record("i", "means equal on the full grid", eq_full, r_full));
    let band = near_diagonal_grid(domain, opts.mean_grid);
    let (eq_band, r_band) = means_equal_fn(
        |x, y| mean::eval_generalized(pair_f, &mu, x, y),
        |x, y| mean::eval_generalized(pair_h, &nu, x, y),
        &band,
        opts.mean_tol,
    )?;
    conditions.push(record("ii", "means equal near the diagonal", eq_band, r_band));

    // (vii) both means equal A_phi with phi = ∫ W¹⁰_{f,g}.
    let quasi = integrated_quasiarithmetic(pair_f);
    let mut r7: f64 = 0.0;
    for &(x, y) in &grid {
        let a_phi = quasi.eval(x, y)?;
        let m1 = mean::eval_generalized(pair_f, &mu, x, y)?;
        let m2 = mean::eval_generalized(pair_h, &nu, x, y)?;
        r7 = r7.max((m1 - a_phi).abs()).max((m2 - a_phi).abs());
    }
    conditions.push(record(
        "vii",
        "both means equal the quasiarithmetic mean of the integrated Wronskian",
        r7 <= opts.quasi_tol,
        r7,
    ));

    let verdict = if eq_full { Verdict::Equal } else { Verdict::NotEqual };
    Ok(EqualityReport { verdict, conditions })
}

/// The quasiarithmetic mean generated by `φ(t) = ∫_mid^t W¹⁰_{f,g}`, with φ
/// evaluated by adaptive quadrature. The additive normalization at the
/// midpoint is irrelevant to the mean.
struct IntegratedQuasi<'a> {
    pair: &'a GeneratorPair,
    mid: f64,
}

fn integrated_quasiarithmetic(pair: &GeneratorPair) -> IntegratedQuasi<'_> {
    IntegratedQuasi { pair, mid: pair.domain().midpoint() }
}

impl IntegratedQuasi<'_> {
    fn phi(&self, t: f64) -> f64 {
        let pair = self.pair;
        quad::integrate(
            &|s| pair.w10_jet(s, 0).map(|j| j.value()).unwrap_or(f64::NAN),
            self.mid,
            t,
            1e-13,
        )
    }

    fn eval(&self, x: f64, y: f64) -> Result<f64, MeanError> {
        if x == y {
            return Ok(x);
        }
        let target = 0.5 * (self.phi(x) + self.phi(y));
        let (lo, hi) = (x.min(y), x.max(y));
        solve::solve_bracketed(|z| self.phi(z) - target, lo, hi, 1e-14)
            .map_err(|nb| MeanError::BracketFailure(format!("{nb:?}")))
    }
}

/// One Gini-vs-Stolarsky coincidence found by the scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanHit {
    pub gini: (f64, f64),
    pub stolarsky: (f64, f64),
    pub max_residual: f64,
    pub classification: Classification,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Classification {
    /// Consistent with a power mean of the given exponent.
    Power { t: f64 },
    /// A coincidence not explained by a common power mean.
    Anomalous,
}

/// Parameter tolerance when classifying scan hits.
const SCAN_PARAM_EPS: f64 = 1e-9;

fn gini_power_exponent(a: f64, b: f64) -> Option<f64> {
    if b.abs() <= SCAN_PARAM_EPS {
        Some(a)
    } else if a.abs() <= SCAN_PARAM_EPS {
        Some(b)
    } else if (a + b).abs() <= SCAN_PARAM_EPS {
        Some(0.0)
    } else {
        None
    }
}

fn stolarsky_power_exponent(c: f64, d: f64) -> Option<f64> {
    if (c - 2.0 * d).abs() <= SCAN_PARAM_EPS {
        Some(d)
    } else if (d - 2.0 * c).abs() <= SCAN_PARAM_EPS {
        Some(c)
    } else if (c + d).abs() <= SCAN_PARAM_EPS {
        Some(0.0)
    } else {
        None
    }
}

/// Tests every Gini parameter pair against every Stolarsky parameter pair on
/// the point panel; hits below `tol` are classified as power-consistent or
/// anomalous.
///
/// Ordering is deterministic: Gini-major, Stolarsky-minor.
pub fn gini_stolarsky_scan(
    gini_params: &[(f64, f64)],
    stolarsky_params: &[(f64, f64)],
    panel: &[(f64, f64)],
    tol: f64,
) -> Result<Vec<ScanHit>, MeanError> {
    let mut hits = Vec::new();
    for &(a, b) in gini_params {
        // Gini values are reused across the whole Stolarsky row.
        let gini_vals: Vec<f64> = panel
            .iter()
            .map(|&(x, y)| mean::eval_gini(a, b, x, y))
            .collect::<Result<_, _>>()?;
        for &(c, d) in stolarsky_params {
            let mut worst: f64 = 0.0;
            for (&(x, y), &gv) in panel.iter().zip(&gini_vals) {
                let sv = mean::eval_stolarsky(c, d, x, y)?;
                worst = worst.max((gv - sv).abs());
                if worst > tol {
                    break;
                }
            }
            if worst <= tol {
                let classification = match (gini_power_exponent(a, b), stolarsky_power_exponent(c, d))
                {
                    (Some(t1), Some(t2)) if (t1 - t2).abs() <= SCAN_PARAM_EPS => {
                        Classification::Power { t: t1 }
                    }
                    _ => Classification::Anomalous,
                };
                hits.push(ScanHit {
                    gini: (a, b),
                    stolarsky: (c, d),
                    max_residual: worst,
                    classification,
                });
            }
        }
    }
    Ok(hits)
}

/// Evenly spaced parameter grid, endpoints included.
pub fn parameter_grid(lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    let axis: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let mut out = Vec::with_capacity(n * n);
    for &a in &axis {
        for &b in &axis {
            out.push((a, b));
        }
    }
    out
}

/// Default panel of positive points with pairwise-distinct coordinates.
pub fn default_scan_panel() -> Vec<(f64, f64)> {
    vec![(0.5, 2.0), (1.0, 3.0), (0.25, 0.75), (2.0, 5.0), (0.8, 1.25), (1.5, 4.5)]
}

/// One intersection instance: the pair family
/// `(S_a∘φ, C_a∘φ)` vs `(φ'·S_b∘φ, φ'·C_b∘φ)`.
#[derive(Debug, Clone)]
pub struct DemoInstance {
    pub label: String,
    pub phi: Expr,
    pub a: f64,
    pub b: f64,
    pub domain: Interval,
}

#[derive(Debug)]
pub struct DemoResult {
    pub label: String,
    pub report: EqualityReport,
    /// Residual of both means against the closed-form quasiarithmetic mean
    /// A_φ of the instance's generator.
    pub quasi_residual: f64,
    pub matches_quasiarithmetic: bool,
}

impl DemoResult {
    pub fn certified(&self) -> bool {
        self.report.verdict == Verdict::Equal && self.matches_quasiarithmetic
    }
}

/// The builtin demonstration suite: arithmetic (hyperbolic generators),
/// arithmetic (circular generators), geometric (logarithmic generators).
pub fn default_demo_suite() -> Vec<DemoInstance> {
    vec![
        DemoInstance {
            label: "phi=id, a=1, b=0".into(),
            phi: Expr::var(),
            a: 1.0,
            b: 0.0,
            domain: Interval::new(0.0, 2.0).expect("static"),
        },
        DemoInstance {
            label: "phi=id, a=-1, b=-1".into(),
            phi: Expr::var(),
            a: -1.0,
            b: -1.0,
            domain: Interval::new(0.1, std::f64::consts::FRAC_PI_2 - 0.1).expect("static"),
        },
        DemoInstance {
            label: "phi=log, a=0, b=0".into(),
            phi: Expr::apply(Elementary::Log, Expr::var()),
            a: 0.0,
            b: 0.0,
            domain: Interval::new(0.5, 4.0).expect("static"),
        },
    ]
}

/// Builds both generator pairs of an instance, certifies their equality, and
/// verifies that both means coincide with `A_φ`.
pub fn intersection_demo(
    instances: &[DemoInstance],
    opts: &CheckOptions,
) -> Result<Vec<DemoResult>, EqualityError> {
    let mut results = Vec::with_capacity(instances.len());
    for inst in instances {
        let pair_f = GeneratorPair::trig(
            &crate::generator::TrigPair {
                a: inst.a,
                phi: inst.phi.clone(),
                scale_by_phi_prime: false,
            },
            inst.domain,
        )?;
        let pair_h = GeneratorPair::trig(
            &crate::generator::TrigPair {
                a: inst.b,
                phi: inst.phi.clone(),
                scale_by_phi_prime: true,
            },
            inst.domain,
        )?;
        let report = check_bajraktarevic_cauchy(&pair_f, &pair_h, opts)?;
        let mu = Measure::endpoint_atoms();
        let nu = Measure::lebesgue();
        let grid = mean_comparison_grid(inst.domain, opts.mean_grid);
        let mut quasi_residual: f64 = 0.0;
        for &(x, y) in &grid {
            let a_phi = mean::eval_quasiarithmetic(&inst.phi, inst.domain, x, y)?;
            let m1 = mean::eval_generalized(&pair_f, &mu, x, y)?;
            let m2 = mean::eval_generalized(&pair_h, &nu, x, y)?;
            quasi_residual = quasi_residual.max((m1 - a_phi).abs()).max((m2 - a_phi).abs());
        }
        results.push(DemoResult {
            label: inst.label.clone(),
            matches_quasiarithmetic: quasi_residual <= opts.quasi_tol,
            quasi_residual,
            report,
        });
    }
    Ok(results)
}
