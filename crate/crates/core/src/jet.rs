//! Truncated Taylor-series arithmetic ("jets") at a point, up to order 8.
//!
//! A [`Jet`] stores the coefficients `c[k] = h⁽ᵏ⁾(x₀)/k!` of a scalar function
//! `h` expanded at some point `x₀`, together with the number of coefficients
//! that are actually valid. All higher-order derivatives used elsewhere in the
//! crate (Wronskians, Φ/Ψ, the diagonal recursion) are obtained from jets, so
//! derivative values are exact up to rounding — no finite differences.

use thiserror::Error;

/// Highest supported derivative order.
pub const MAX_ORDER: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    /// Division by a jet whose leading coefficient is (numerically) zero.
    #[error("division by a jet with zero leading coefficient ({0:e})")]
    DivisionByZero(f64),
    /// An elementary function was evaluated outside its domain.
    #[error("{func} is undefined at {value}")]
    Domain { func: &'static str, value: f64 },
}

/// Leading coefficients with absolute value below this are treated as zero in
/// division, so we fail deterministically instead of propagating infinities.
const DIV_EPS: f64 = 1e-300;

/// Taylor coefficients of a function at a fixed expansion point.
///
/// `coeffs[k]` holds `h⁽ᵏ⁾(x₀)/k!`; entries beyond `order` are never read.
/// Arithmetic never increases `order` beyond the minimum order of the
/// operands, and differentiation consumes one order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    coeffs: [f64; MAX_ORDER + 1],
    order: usize,
}

impl Jet {
    /// Jet of the constant function `c` (valid to any order).
    pub fn constant(c: f64) -> Self {
        let mut coeffs = [0.0; MAX_ORDER + 1];
        coeffs[0] = c;
        Jet { coeffs, order: MAX_ORDER }
    }

    /// Jet of the identity function at `x0`: coefficients `(x0, 1, 0, …)`.
    pub fn variable(x0: f64) -> Self {
        let mut coeffs = [0.0; MAX_ORDER + 1];
        coeffs[0] = x0;
        coeffs[1] = 1.0;
        Jet { coeffs, order: MAX_ORDER }
    }

    /// Builds a jet from explicit Taylor coefficients (`order = len - 1`).
    ///
    /// # Panics
    /// Panics when `coeffs` is empty or longer than `MAX_ORDER + 1`.
    pub fn from_coeffs(coeffs: &[f64]) -> Self {
        assert!(!coeffs.is_empty() && coeffs.len() <= MAX_ORDER + 1);
        let mut c = [0.0; MAX_ORDER + 1];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Jet { coeffs: c, order: coeffs.len() - 1 }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Function value at the expansion point.
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Normalized Taylor coefficient `h⁽ᵏ⁾(x₀)/k!`.
    ///
    /// # Panics
    /// Panics if `k` exceeds the valid order.
    pub fn coeff(&self, k: usize) -> f64 {
        assert!(k <= self.order, "coefficient {k} beyond jet order {}", self.order);
        self.coeffs[k]
    }

    /// Raw derivative value `h⁽ᵏ⁾(x₀) = k! · coeff(k)`.
    pub fn derivative_value(&self, k: usize) -> f64 {
        self.coeff(k) * factorial(k)
    }

    /// Restricts the jet to a lower order.
    pub fn truncated(mut self, order: usize) -> Self {
        assert!(order <= self.order);
        for c in &mut self.coeffs[order + 1..] {
            *c = 0.0;
        }
        self.order = order;
        self
    }

    /// Jet of `h'` at the same point; one order shorter.
    ///
    /// # Panics
    /// Panics on a jet of order 0 (no derivative information left).
    pub fn derivative(&self) -> Self {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let mut coeffs = [0.0; MAX_ORDER + 1];
        for k in 0..self.order {
            coeffs[k] = (k + 1) as f64 * self.coeffs[k + 1];
        }
        Jet { coeffs, order: self.order - 1 }
    }

    /// Checked division; errors when the divisor's value is numerically zero.
    pub fn try_div(self, rhs: Jet) -> Result<Jet, JetError> {
        if rhs.coeffs[0].abs() < DIV_EPS {
            return Err(JetError::DivisionByZero(rhs.coeffs[0]));
        }
        let order = self.order.min(rhs.order);
        let mut q = [0.0; MAX_ORDER + 1];
        for n in 0..=order {
            let mut s = self.coeffs[n];
            for k in 1..=n {
                s -= rhs.coeffs[k] * q[n - k];
            }
            q[n] = s / rhs.coeffs[0];
        }
        Ok(Jet { coeffs: q, order })
    }

    fn scaled(mut self, s: f64) -> Self {
        for c in &mut self.coeffs[..=self.order] {
            *c *= s;
        }
        self
    }
}

impl std::ops::Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut coeffs = [0.0; MAX_ORDER + 1];
        for k in 0..=order {
            coeffs[k] = self.coeffs[k] + rhs.coeffs[k];
        }
        Jet { coeffs, order }
    }
}

impl std::ops::Sub for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)] // MAX_ORDER + 1 is an array size
    fn sub(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut coeffs = [0.0; MAX_ORDER + 1];
        for k in 0..=order {
            coeffs[k] = self.coeffs[k] - rhs.coeffs[k];
        }
        Jet { coeffs, order }
    }
}

impl std::ops::Mul for Jet {
    type Output = Jet;
    /// Cauchy product truncated at the smaller order.
    fn mul(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut coeffs = [0.0; MAX_ORDER + 1];
        for i in 0..=order {
            let a = self.coeffs[i];
            if a == 0.0 {
                continue;
            }
            for j in 0..=order - i {
                coeffs[i + j] += a * rhs.coeffs[j];
            }
        }
        Jet { coeffs, order }
    }
}

impl std::ops::Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scaled(-1.0)
    }
}

impl std::ops::Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, s: f64) -> Jet {
        self.scaled(s)
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    const TABLE: [f64; 9] = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0, 40320.0];
    TABLE[k]
}

/// Elementary outer functions available for jet composition.
///
/// `Pow(r)` is `x ↦ xʳ` (positive base for non-integer `r`), `AbsPow(r)` is
/// `x ↦ |x|ʳ` away from zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Elementary {
    Exp,
    Log,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Sqrt,
    Pow(f64),
    AbsPow(f64),
}

impl Elementary {
    /// Taylor coefficients of `outer ∘ inner` at the inner jet's point.
    ///
    /// Faà di Bruno in power-series form: the outer Taylor series at
    /// `inner.value()` is composed with the zero-constant part of `inner` by
    /// Horner evaluation with jet multiplication.
    pub fn apply(self, inner: Jet) -> Result<Jet, JetError> {
        let n = inner.order;
        let u0 = inner.value();
        // Integer powers reduce to repeated multiplication and stay valid on
        // the whole line (including u0 = 0 for nonnegative exponents).
        if let Elementary::Pow(r) = self {
            if is_integer(r) {
                return int_power(inner, r as i64);
            }
        }
        let series = self.series_at(u0, n)?;
        let mut shifted = inner;
        shifted.coeffs[0] = 0.0;
        let mut acc = Jet::constant(series[n]).truncated(n);
        for k in (0..n).rev() {
            acc = acc * shifted + Jet::constant(series[k]).truncated(n);
        }
        Ok(acc)
    }

    /// Scalar evaluation with the same domain rules as [`apply`](Self::apply).
    pub fn eval(self, x: f64) -> Result<f64, JetError> {
        Ok(self.apply(Jet::constant(x).truncated(0))?.value())
    }

    /// Normalized coefficients `outer⁽ᵏ⁾(u0)/k!` for `k = 0..=n`.
    fn series_at(self, u0: f64, n: usize) -> Result<[f64; MAX_ORDER + 1], JetError> {
        let mut g = [0.0; MAX_ORDER + 1];
        match self {
            Elementary::Exp => {
                let e = u0.exp();
                for (k, gk) in g.iter_mut().enumerate().take(n + 1) {
                    *gk = e / factorial(k);
                }
            }
            Elementary::Log => {
                if u0 <= 0.0 {
                    return Err(JetError::Domain { func: "log", value: u0 });
                }
                g[0] = u0.ln();
                // log⁽ᵏ⁾(u)/k! = (-1)^(k-1) / (k uᵏ)
                let mut upow = 1.0;
                for (k, gk) in g.iter_mut().enumerate().take(n + 1).skip(1) {
                    upow *= u0;
                    *gk = if k % 2 == 1 { 1.0 } else { -1.0 } / (k as f64 * upow);
                }
            }
            Elementary::Sin | Elementary::Cos => {
                let (s, c) = u0.sin_cos();
                let base = if self == Elementary::Sin { [s, c, -s, -c] } else { [c, -s, -c, s] };
                for (k, gk) in g.iter_mut().enumerate().take(n + 1) {
                    *gk = base[k % 4] / factorial(k);
                }
            }
            Elementary::Sinh | Elementary::Cosh => {
                let (sh, ch) = (u0.sinh(), u0.cosh());
                let base = if self == Elementary::Sinh { [sh, ch] } else { [ch, sh] };
                for (k, gk) in g.iter_mut().enumerate().take(n + 1) {
                    *gk = base[k % 2] / factorial(k);
                }
            }
            Elementary::Sqrt => return Elementary::Pow(0.5).series_at(u0, n),
            Elementary::Pow(r) => {
                // Non-integer exponents only; integer ones are handled in apply().
                if u0 <= 0.0 {
                    return Err(JetError::Domain { func: "pow", value: u0 });
                }
                // g_k = C(r,k) u0^(r-k)
                let mut coef = u0.powf(r);
                g[0] = coef;
                for k in 1..=n {
                    coef *= (r - (k - 1) as f64) / k as f64 / u0;
                    g[k] = coef;
                }
            }
            Elementary::AbsPow(r) => {
                if u0 == 0.0 {
                    return Err(JetError::Domain { func: "abspow", value: u0 });
                }
                let s = u0.signum();
                let a = u0.abs();
                // (|u|ʳ)⁽ᵏ⁾ = r(r-1)…(r-k+1) |u|^(r-k) sᵏ
                let mut coef = a.powf(r);
                g[0] = coef;
                for k in 1..=n {
                    coef *= s * (r - (k - 1) as f64) / k as f64 / a;
                    g[k] = coef;
                }
            }
        }
        Ok(g)
    }

    pub fn name(self) -> &'static str {
        match self {
            Elementary::Exp => "exp",
            Elementary::Log => "log",
            Elementary::Sin => "sin",
            Elementary::Cos => "cos",
            Elementary::Sinh => "sinh",
            Elementary::Cosh => "cosh",
            Elementary::Sqrt => "sqrt",
            Elementary::Pow(_) => "pow",
            Elementary::AbsPow(_) => "abspow",
        }
    }
}

fn is_integer(r: f64) -> bool {
    r.fract() == 0.0 && r.abs() < 1e15
}

fn int_power(base: Jet, mut e: i64) -> Result<Jet, JetError> {
    let negative = e < 0;
    if negative {
        e = -e;
    }
    let mut result = Jet::constant(1.0).truncated(base.order());
    let mut acc = base;
    let mut k = e;
    while k > 0 {
        if k & 1 == 1 {
            result = result * acc;
        }
        acc = acc * acc;
        k >>= 1;
    }
    if negative {
        Jet::constant(1.0).truncated(base.order()).try_div(result).map_err(|_| {
            JetError::Domain { func: "pow", value: base.value() }
        })
    } else {
        Ok(result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "expected {b}, got {a} (|Δ| = {:e})", (a - b).abs());
    }

    /// Independent series oracle: Taylor coefficients of sin(c·x)/d at 0.
    fn sin_scaled_series(c: f64, d: f64) -> [f64; 9] {
        let mut out = [0.0; 9];
        for k in 0..=4 {
            let n = 2 * k + 1;
            if n > 8 {
                break;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            out[n] = sign * c.powi(n as i32) / factorial(n) / d;
        }
        out
    }

    #[test]
    fn square_of_variable_at_three() {
        let x = Jet::variable(3.0);
        let sq = x * x;
        assert_eq!(sq.coeff(0), 9.0);
        assert_eq!(sq.coeff(1), 6.0);
        assert_eq!(sq.coeff(2), 1.0);
        for k in 3..=8 {
            assert_eq!(sq.coeff(k), 0.0);
        }
    }

    #[test]
    fn add_of_negation_is_zero() {
        let j = Elementary::Exp.apply(Jet::variable(0.7)).unwrap();
        let z = j + (-j);
        for k in 0..=z.order() {
            assert_eq!(z.coeff(k), 0.0);
        }
    }

    #[test]
    fn product_of_sin_and_cos_matches_half_sin_2x() {
        let x = Jet::variable(0.0);
        let p = Elementary::Sin.apply(x).unwrap() * Elementary::Cos.apply(x).unwrap();
        let oracle = sin_scaled_series(2.0, 2.0);
        for k in 0..=8 {
            assert_close(p.coeff(k), oracle[k], 1e-14);
        }
        assert_close(p.coeff(1), 1.0, 0.0);
    }

    #[test]
    fn division_by_self_is_unit() {
        let j = Elementary::Cosh.apply(Jet::variable(1.3)).unwrap();
        let one = j.try_div(j).unwrap();
        assert_eq!(one.coeff(0), 1.0);
        for k in 1..=one.order() {
            assert_close(one.coeff(k), 0.0, 1e-15);
        }
    }

    #[test]
    fn geometric_series_from_division() {
        let one = Jet::constant(1.0);
        let denom = Jet::variable(0.0) + Jet::constant(1.0);
        let q = one.try_div(denom).unwrap();
        for k in 0..=8 {
            assert_eq!(q.coeff(k), if k % 2 == 0 { 1.0 } else { -1.0 });
        }
    }

    #[test]
    fn tanh_coefficients_from_sinh_over_cosh() {
        let x = Jet::variable(0.0);
        let t = Elementary::Sinh
            .apply(x)
            .unwrap()
            .try_div(Elementary::Cosh.apply(x).unwrap())
            .unwrap();
        // tanh x = x - x³/3 + 2x⁵/15 - 17x⁷/315
        assert_close(t.coeff(1), 1.0, 1e-15);
        assert_close(t.coeff(3), -1.0 / 3.0, 1e-15);
        assert_close(t.coeff(5), 2.0 / 15.0, 1e-15);
        assert_close(t.coeff(7), -17.0 / 315.0, 1e-15);
    }

    #[test]
    fn exp_of_log_is_identity() {
        let j = Elementary::Log.apply(Jet::variable(2.0)).unwrap();
        let back = Elementary::Exp.apply(j).unwrap();
        assert_close(back.coeff(0), 2.0, 1e-14);
        assert_close(back.coeff(1), 1.0, 1e-14);
        for k in 2..=8 {
            assert_close(back.coeff(k), 0.0, 1e-13);
        }
    }

    #[test]
    fn exp_log_round_trip_on_random_positive_jets() {
        let mut state = 0x243f6a8885a308d3_u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..40 {
            let mut coeffs: [f64; 9] = std::array::from_fn(|_| next() * 4.0 - 2.0);
            coeffs[0] = 0.5 + 3.0 * next();
            let j = Jet::from_coeffs(&coeffs);
            let back = Elementary::Exp.apply(Elementary::Log.apply(j).unwrap()).unwrap();
            let scale = coeffs.iter().fold(1.0_f64, |m, c| m.max(c.abs()));
            for k in 0..=8 {
                assert_close(back.coeff(k), j.coeff(k), 1e-12 * scale);
            }
        }
    }

    #[test]
    fn sqrt_of_square_recovers_positive_identity() {
        let x = Jet::variable(3.0);
        let j = Elementary::Pow(0.5).apply(x * x).unwrap();
        assert_close(j.coeff(0), 3.0, 1e-14);
        assert_close(j.coeff(1), 1.0, 1e-14);
        for k in 2..=8 {
            assert_close(j.coeff(k), 0.0, 1e-13);
        }
    }

    #[test]
    fn binomial_series_of_sqrt_one_minus_quarter_square() {
        // √(1 - u²/4) at u = 0; frozen from the binomial series (1+z)^(1/2)
        // with z = -u²/4.
        let u = Jet::variable(0.0);
        let inner = Jet::constant(1.0) - (u * u) * 0.25;
        let j = Elementary::Sqrt.apply(inner).unwrap();
        let expected = [
            1.0,
            0.0,
            -1.0 / 8.0,
            0.0,
            -1.0 / 128.0,
            0.0,
            -1.0 / 1024.0,
            0.0,
            -5.0 / 32768.0,
        ];
        for k in 0..=8 {
            assert_close(j.coeff(k), expected[k], 1e-15);
        }
    }

    #[test]
    fn division_by_zero_jet_is_an_error() {
        let zero = Jet::constant(0.0);
        assert!(matches!(Jet::variable(1.0).try_div(zero), Err(JetError::DivisionByZero(_))));
    }

    #[test]
    fn log_of_nonpositive_leading_coefficient_is_an_error() {
        assert!(matches!(
            Elementary::Log.apply(Jet::variable(-2.0)),
            Err(JetError::Domain { func: "log", .. })
        ));
    }

    #[test]
    fn integer_power_works_across_zero() {
        let j = Elementary::Pow(3.0).apply(Jet::variable(0.0)).unwrap();
        assert_eq!(j.coeff(3), 1.0);
        assert_eq!(j.coeff(0), 0.0);
        let j = Elementary::Pow(2.0).apply(Jet::variable(-1.5)).unwrap();
        assert_eq!(j.value(), 2.25);
        assert_eq!(j.coeff(1), -3.0);
    }

    #[test]
    fn negative_integer_power_matches_division() {
        let x = Jet::variable(2.0);
        let direct = Elementary::Pow(-2.0).apply(x).unwrap();
        let manual = Jet::constant(1.0).try_div(x * x).unwrap();
        for k in 0..=8 {
            assert_close(direct.coeff(k), manual.coeff(k), 1e-15);
        }
    }

    #[test]
    fn abspow_handles_negative_base() {
        // |x|^1.5 at x = -2: value 2^1.5, derivative -1.5·2^0.5.
        let j = Elementary::AbsPow(1.5).apply(Jet::variable(-2.0)).unwrap();
        assert_close(j.value(), 2.0_f64.powf(1.5), 1e-14);
        assert_close(j.derivative_value(1), -1.5 * 2.0_f64.sqrt(), 1e-14);
    }

    #[test]
    fn derivative_shifts_coefficients() {
        let j = Elementary::Exp.apply(Jet::variable(0.3)).unwrap();
        let d = j.derivative();
        assert_eq!(d.order(), 7);
        for k in 0..=7 {
            assert_close(d.coeff(k), (k + 1) as f64 * j.coeff(k + 1), 0.0);
        }
    }

    #[test]
    fn jet_coefficients_match_central_differences() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        // Compositions outer(scale · x + shift) with x0 keeping the inner
        // argument safely inside each outer function's domain.
        let outers = [
            Elementary::Exp,
            Elementary::Log,
            Elementary::Sin,
            Elementary::Cos,
            Elementary::Sinh,
            Elementary::Cosh,
            Elementary::Sqrt,
            Elementary::Pow(1.7),
            Elementary::AbsPow(-0.6),
        ];
        let mut checked = 0;
        while checked < 60 {
            let outer = outers[rng.gen_range(0..outers.len())];
            let scale: f64 = rng.gen_range(0.3..1.5);
            let shift: f64 = rng.gen_range(1.0..2.0);
            let x0: f64 = rng.gen_range(0.5..2.0);
            let eval = |x: f64| outer.eval(scale * x + shift).unwrap();
            let jet = outer
                .apply(Jet::variable(x0) * scale + Jet::constant(shift))
                .unwrap();
            // Step sizes balancing truncation against rounding per order.
            let (h1, h2, h3) = (1e-5 / scale, 2e-4 / scale, 1.5e-3 / scale);
            let fd = [
                (eval(x0 + h1) - eval(x0 - h1)) / (2.0 * h1),
                (eval(x0 + h2) - 2.0 * eval(x0) + eval(x0 - h2)) / (h2 * h2),
                (eval(x0 + 2.0 * h3) - 2.0 * eval(x0 + h3) + 2.0 * eval(x0 - h3)
                    - eval(x0 - 2.0 * h3))
                    / (2.0 * h3 * h3 * h3),
            ];
            let magnitude = (0..=3)
                .map(|k| jet.derivative_value(k).abs())
                .fold(1.0_f64, f64::max);
            for (k, fd_k) in fd.iter().enumerate() {
                let exact = jet.derivative_value(k + 1);
                assert!(
                    ((exact - fd_k) / magnitude).abs() < 1e-6,
                    "{:?} order {}: jet {exact} vs fd {fd_k}",
                    outer,
                    k + 1
                );
            }
            checked += 1;
        }
    }

    #[test]
    fn algebraic_identities_on_random_jets() {
        // Deterministic LCG; coefficients in [-10, 10].
        let mut state = 0x9e3779b97f4a7c15_u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 20.0 - 10.0
        };
        for _ in 0..50 {
            let a = Jet::from_coeffs(&std::array::from_fn::<f64, 9, _>(|_| next()));
            let b = Jet::from_coeffs(&std::array::from_fn::<f64, 9, _>(|_| next()));
            let c = Jet::from_coeffs(&std::array::from_fn::<f64, 9, _>(|_| next()));
            let abc = (a * b) * c;
            let scale = (0..=8).map(|k| abc.coeff(k).abs()).fold(1.0, f64::max);
            let assoc = abc - a * (b * c);
            let distrib = a * (b + c) - (a * b + a * c);
            for k in 0..=8 {
                assert!(assoc.coeff(k).abs() <= 1e-13 * scale);
                assert!(distrib.coeff(k).abs() <= 1e-13 * scale);
            }
        }
    }
}
