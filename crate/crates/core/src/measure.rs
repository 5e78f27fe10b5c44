//! Borel probability measures on [0, 1]: finite atoms plus a
//! piecewise-polynomial density.
//!
//! This constructive representation carries every measure the crate needs
//! (endpoint atom pairs, the Lebesgue measure, truncated uniforms, Dirac
//! masses and mixtures). The two-parameter moment family π(ℓ, p) is exposed
//! only through its moment vector, except at the anchor points where a
//! constructive realization exists (see [`mn_measure`]).
//!
//! The parameter set of π(ℓ, p) is only known to satisfy ℓ ≤ 1/16, p ≤ 2;
//! these bounds are necessary, not sufficient, and [`PiParams`] enforces
//! exactly them.

use crate::quad;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("invalid measure: {0}")]
    Invalid(String),
    #[error("(ell, p) = ({ell}, {p}) outside the admissible box ]0, 1/16] x ]0, 2]")]
    ParamsOutsidePi { ell: f64, p: f64 },
    #[error("tau = {0} outside [0, 1/2)")]
    InvalidTau(f64),
    #[error("moment order {0} exceeds the supported maximum 8")]
    UnsupportedOrder(usize),
    #[error("segment [{}, {}] leaves the function domain ({lo}, {hi})", x.min(*y), x.max(*y))]
    SegmentOutOfDomain { x: f64, y: f64, lo: f64, hi: f64 },
}

/// Point mass: position in [0, 1] and positive weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub t: f64,
    pub w: f64,
}

/// Polynomial density `poly[0] + poly[1]·t + …` supported on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityPiece {
    pub lo: f64,
    pub hi: f64,
    pub poly: Vec<f64>,
}

impl DensityPiece {
    /// Exact integral of `t^k · poly(t)` over the piece.
    fn monomial_integral(&self, k: usize) -> f64 {
        let mut sum = 0.0;
        for (i, &c) in self.poly.iter().enumerate() {
            let e = (k + i + 1) as i32;
            sum += c * (self.hi.powi(e) - self.lo.powi(e)) / e as f64;
        }
        sum
    }

    fn eval(&self, t: f64) -> f64 {
        self.poly.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }
}

/// A Borel probability measure on [0, 1], immutable after construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureJson")]
pub struct Measure {
    atoms: Vec<Atom>,
    density: Vec<DensityPiece>,
}

#[derive(Deserialize)]
struct MeasureJson {
    #[serde(default)]
    atoms: Vec<Atom>,
    #[serde(default)]
    density: Vec<DensityPiece>,
}

impl TryFrom<MeasureJson> for Measure {
    type Error = MeasureError;
    fn try_from(raw: MeasureJson) -> Result<Self, Self::Error> {
        Measure::new(raw.atoms, raw.density)
    }
}

const MASS_TOL: f64 = 1e-12;

impl Measure {
    /// Validates and builds a measure.
    ///
    /// Checks: atom positions within [0, 1] and pairwise distinct, positive
    /// weights, density pieces inside [0, 1] and nonnegative at Chebyshev
    /// sample points, and unit total mass (within 1e-12).
    pub fn new(atoms: Vec<Atom>, density: Vec<DensityPiece>) -> Result<Self, MeasureError> {
        for a in &atoms {
            if !(0.0..=1.0).contains(&a.t) {
                return Err(MeasureError::Invalid(format!("atom position {} outside [0,1]", a.t)));
            }
            if a.w <= 0.0 {
                return Err(MeasureError::Invalid(format!("atom weight {} not positive", a.w)));
            }
        }
        for (i, a) in atoms.iter().enumerate() {
            for b in &atoms[i + 1..] {
                if a.t == b.t {
                    return Err(MeasureError::Invalid(format!("duplicate atom position {}", a.t)));
                }
            }
        }
        let mut mass = atoms.iter().map(|a| a.w).sum::<f64>();
        for p in &density {
            if !(0.0..=1.0).contains(&p.lo) || !(0.0..=1.0).contains(&p.hi) || p.lo >= p.hi {
                return Err(MeasureError::Invalid(format!(
                    "density piece [{}, {}] is not a subinterval of [0,1]",
                    p.lo, p.hi
                )));
            }
            if p.poly.is_empty() {
                return Err(MeasureError::Invalid("density piece without coefficients".into()));
            }
            for k in 0..33 {
                let theta = (2.0 * k as f64 + 1.0) * std::f64::consts::PI / 66.0;
                let t = 0.5 * (p.lo + p.hi) + 0.5 * (p.hi - p.lo) * theta.cos();
                if p.eval(t) < -1e-12 {
                    return Err(MeasureError::Invalid(format!("density negative at t = {t}")));
                }
            }
            mass += p.monomial_integral(0);
        }
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(MeasureError::Invalid(format!("total mass {mass} differs from 1")));
        }
        Ok(Measure { atoms, density })
    }

    /// Dirac measure δ_τ.
    pub fn dirac(tau: f64) -> Result<Self, MeasureError> {
        Measure::new(vec![Atom { t: tau, w: 1.0 }], vec![])
    }

    /// The endpoint atom pair ½(δ₀ + δ₁), the measure behind Bajraktarević
    /// means.
    pub fn endpoint_atoms() -> Self {
        Measure::new(vec![Atom { t: 0.0, w: 0.5 }, Atom { t: 1.0, w: 0.5 }], vec![])
            .expect("static measure")
    }

    /// Lebesgue measure on [0, 1], the measure behind Cauchy means.
    pub fn lebesgue() -> Self {
        Measure::new(vec![], vec![DensityPiece { lo: 0.0, hi: 1.0, poly: vec![1.0] }])
            .expect("static measure")
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn density(&self) -> &[DensityPiece] {
        &self.density
    }

    /// Raw and centralized moments up to order 8, integrated exactly.
    pub fn moments(&self) -> MomentVector {
        let mut raw = [0.0; 9];
        for k in 0..=8 {
            raw[k] = self.atoms.iter().map(|a| a.w * a.t.powi(k as i32)).sum::<f64>()
                + self.density.iter().map(|p| p.monomial_integral(k)).sum::<f64>();
        }
        let mean = raw[1];
        let mut central = [0.0; 9];
        for k in 0..=8 {
            let mut c = self.atoms.iter().map(|a| a.w * (a.t - mean).powi(k as i32)).sum::<f64>();
            // ∫ (t-m)^k p(t) dt expanded binomially over exact monomial integrals.
            for piece in &self.density {
                for j in 0..=k {
                    c += binom(k, j) * (-mean).powi((k - j) as i32) * piece.monomial_integral(j);
                }
            }
            central[k] = c;
        }
        MomentVector { raw, central }
    }

    /// True iff the first moment is ½ and the odd centralized moments vanish
    /// within `tol` — symmetry with respect to the midpoint of [0, 1].
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let m = self.moments();
        (m.raw(1) - 0.5).abs() <= tol
            && [1, 3, 5, 7].iter().all(|&k| m.central(k).abs() <= tol)
    }

    /// ∫ h(t·x + (1-t)·y) dμ(t), the segment integral behind generalized
    /// quasiarithmetic means.
    ///
    /// Atom contributions are summed exactly; density pieces are integrated
    /// by adaptive 16-node Gauss–Legendre to absolute tolerance 1e-12. The
    /// segment must stay inside the open interval `domain`.
    pub fn segment_integral<F: Fn(f64) -> f64>(
        &self,
        h: F,
        x: f64,
        y: f64,
        domain: (f64, f64),
    ) -> Result<f64, MeasureError> {
        let (seg_lo, seg_hi) = (x.min(y), x.max(y));
        if !(seg_lo > domain.0 && seg_hi < domain.1) {
            return Err(MeasureError::SegmentOutOfDomain { x, y, lo: domain.0, hi: domain.1 });
        }
        let at = |t: f64| h(t * x + (1.0 - t) * y);
        let mut sum: f64 = self.atoms.iter().map(|a| a.w * at(a.t)).sum();
        for p in &self.density {
            sum += quad::integrate(&|t| p.eval(t) * at(t), p.lo, p.hi, 1e-12);
        }
        Ok(sum)
    }
}

/// Raw moments μ̂₀..μ̂₈ and centralized moments μ₀..μ₈ (about μ̂₁).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentVector {
    raw: [f64; 9],
    central: [f64; 9],
}

impl MomentVector {
    pub fn raw(&self, k: usize) -> f64 {
        self.raw[k]
    }

    pub fn central(&self, k: usize) -> f64 {
        self.central[k]
    }

    /// First raw moment μ̂₁.
    pub fn mean(&self) -> f64 {
        self.raw[1]
    }
}

/// Parameters (ℓ, p) of the moment family π(ℓ, p), restricted to the
/// necessary box ]0, 1/16] × ]0, 2].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PiParamsJson")]
pub struct PiParams {
    ell: f64,
    p: f64,
}

#[derive(Deserialize)]
struct PiParamsJson {
    ell: f64,
    p: f64,
}

impl TryFrom<PiParamsJson> for PiParams {
    type Error = MeasureError;
    fn try_from(raw: PiParamsJson) -> Result<Self, Self::Error> {
        PiParams::new(raw.ell, raw.p)
    }
}

impl PiParams {
    pub fn new(ell: f64, p: f64) -> Result<Self, MeasureError> {
        if !(ell > 0.0 && ell <= 1.0 / 16.0 && p > 0.0 && p <= 2.0) {
            return Err(MeasureError::ParamsOutsidePi { ell, p });
        }
        Ok(PiParams { ell, p })
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Modified power `p⟨n⟩ = Π_{i=0}^{n-1} p/(1+ip)`.
pub fn modified_power(p: f64, n: usize) -> f64 {
    (0..n).map(|i| p / (1.0 + i as f64 * p)).product()
}

/// Moment vector of π(ℓ, p): μ̂₁ = ½, vanishing odd centralized moments, and
/// even centralized moments `(2n)!/n! · ℓⁿ · p⟨n⟩`.
///
/// All orders up to 8 are filled; `max_k` only bounds the orders the caller
/// relies on and must not exceed 8.
pub fn pi_moments(params: PiParams, max_k: usize) -> Result<MomentVector, MeasureError> {
    if max_k > 8 {
        return Err(MeasureError::UnsupportedOrder(max_k));
    }
    let mut central = [0.0; 9];
    central[0] = 1.0;
    for n in 1..=4usize {
        let two_n = 2 * n;
        central[two_n] = crate::jet::factorial(two_n) / crate::jet::factorial(n)
            * params.ell.powi(n as i32)
            * modified_power(params.p, n);
    }
    let mut raw = [0.0; 9];
    for k in 0..=8usize {
        raw[k] = (0..=k)
            .map(|i| binom(k, i) * central[i] * 0.5_f64.powi((k - i) as i32))
            .sum();
    }
    Ok(MomentVector { raw, central })
}

/// The two constructive realizations anchoring the π family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MnKind {
    /// ½(δ_τ + δ_{1-τ}), which realizes π(((1-2τ)/4)², 2).
    TwoAtoms,
    /// (1-2τ)⁻¹ λ|_{[τ,1-τ]}, which realizes π(((1-2τ)/4)², 2/3).
    TruncatedUniform,
}

/// Builds the symmetric measure of the requested kind for `τ ∈ [0, ½)`.
pub fn mn_measure(tau: f64, kind: MnKind) -> Result<Measure, MeasureError> {
    if !(0.0..0.5).contains(&tau) {
        return Err(MeasureError::InvalidTau(tau));
    }
    match kind {
        MnKind::TwoAtoms => Measure::new(
            vec![Atom { t: tau, w: 0.5 }, Atom { t: 1.0 - tau, w: 0.5 }],
            vec![],
        ),
        MnKind::TruncatedUniform => Measure::new(
            vec![],
            vec![DensityPiece { lo: tau, hi: 1.0 - tau, poly: vec![1.0 / (1.0 - 2.0 * tau)] }],
        ),
    }
}

pub(crate) fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}
