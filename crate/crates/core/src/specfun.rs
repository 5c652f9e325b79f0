//! Dawson function, the imaginary error function in scaled form, and
//! signed accumulation of exponentially large terms.

use crate::error::{Error, Result};

/// 2/√π.
const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
/// 1/√π.
const INV_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Below this |x| the Maclaurin series is used.
const SERIES_LIMIT: f64 = 0.5;
/// At or above this |x| the asymptotic series is used.
const ASYMPTOTIC_LIMIT: f64 = 6.0;

/// Sampling step of the Rybicki mid-range sum.
const RYBICKI_H: f64 = 0.2;
/// Odd offsets `±1, ±3, …, ±(2N-1)` kept in the Rybicki sum.
const RYBICKI_TERMS: i32 = 24;

/// Relative size of a cancelled sum, against its largest term, that counts as precision loss.
const CANCELLATION_THRESHOLD: f64 = 1e-14;

/// A real number stored as `mantissa · exp(log_scale)`.
///
/// The mantissa carries the sign and is kept of moderate magnitude; the
/// exponent can be far outside the range of `f64::exp`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledExp {
    pub log_scale: f64,
    pub mantissa: f64,
}

impl ScaledExp {
    pub const ZERO: ScaledExp = ScaledExp {
        log_scale: 0.0,
        mantissa: 0.0,
    };

    pub fn new(mantissa: f64, log_scale: f64) -> Self {
        if mantissa == 0.0 {
            return Self::ZERO;
        }
        Self {
            log_scale,
            mantissa,
        }
    }

    pub fn from_f64(x: f64) -> Self {
        Self::new(x, 0.0)
    }

    /// `exp(x)` without evaluating it.
    pub fn exp(x: f64) -> Self {
        Self::new(1.0, x)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    pub fn signum(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.mantissa.signum()
        }
    }

    /// The plain value; overflows to ±∞ or underflows to 0 when out of range.
    pub fn value(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        self.mantissa * self.log_scale.exp()
    }

    /// `ln |value|`; −∞ for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mantissa.abs().ln() + self.log_scale
    }

    /// Moves the magnitude of the mantissa into the exponent.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        Self {
            log_scale: self.ln_abs(),
            mantissa: self.mantissa.signum(),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::new(self.mantissa * factor, self.log_scale)
    }

    pub fn mul(&self, other: &ScaledExp) -> Self {
        Self::new(
            self.mantissa * other.mantissa,
            self.log_scale + other.log_scale,
        )
    }

    /// `self / other` as a plain number.
    pub fn ratio(&self, other: &ScaledExp) -> f64 {
        (self.mantissa / other.mantissa) * (self.log_scale - other.log_scale).exp()
    }

    /// The same value with the exponent set to `log_scale`.
    pub fn rescaled(&self, log_scale: f64) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        Self {
            log_scale,
            mantissa: self.mantissa * (self.log_scale - log_scale).exp(),
        }
    }
}

impl std::ops::Neg for ScaledExp {
    type Output = ScaledExp;

    fn neg(self) -> ScaledExp {
        ScaledExp::new(-self.mantissa, self.log_scale)
    }
}

/// Result of a signed accumulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSum {
    pub value: ScaledExp,
    /// The sum cancelled to below 1e-14 of its largest term.
    pub precision_loss: bool,
    /// |sum| / max |term|.
    pub retained_fraction: f64,
}

/// Sums signed terms after rescaling them to the largest exponent.
///
/// Compensated (Neumaier) summation of the rescaled mantissas.
pub fn signed_log_sum(terms: &[ScaledExp]) -> Result<LogSum> {
    if terms.is_empty() {
        return Err(Error::Domain(
            "signed_log_sum needs at least one term".into(),
        ));
    }
    let top = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| t.log_scale)
        .fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return Ok(LogSum {
            value: ScaledExp::ZERO,
            precision_loss: false,
            retained_fraction: 1.0,
        });
    }

    let mut sum = 0.0_f64;
    let mut compensation = 0.0_f64;
    let mut largest = 0.0_f64;
    for t in terms.iter().filter(|t| !t.is_zero()) {
        let x = t.mantissa * (t.log_scale - top).exp();
        largest = largest.max(x.abs());
        let s = sum + x;
        if sum.abs() >= x.abs() {
            compensation += (sum - s) + x;
        } else {
            compensation += (x - s) + sum;
        }
        sum = s;
    }
    let total = sum + compensation;
    let retained = if largest > 0.0 {
        total.abs() / largest
    } else {
        1.0
    };
    let precision_loss = retained < CANCELLATION_THRESHOLD;
    if precision_loss {
        log::warn!(
            "signed sum cancelled to {retained:e} of its largest term ({} terms)",
            terms.len()
        );
    }
    Ok(LogSum {
        value: ScaledExp::new(total, top),
        precision_loss,
        retained_fraction: retained,
    })
}

/// Dawson's integral `D(x) = exp(-x²) ∫₀ˣ exp(t²) dt`.
pub fn dawson(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax < SERIES_LIMIT {
        dawson_series(ax)
    } else if ax < ASYMPTOTIC_LIMIT {
        dawson_rybicki(ax)
    } else {
        dawson_asymptotic(ax).0
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `(D, D', D'')` at x.
pub fn dawson_derivatives(x: f64) -> (f64, f64, f64) {
    let ax = x.abs();
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    if ax >= ASYMPTOTIC_LIMIT {
        let (d, d1, d2) = dawson_asymptotic(ax);
        return (sign * d, d1, sign * d2);
    }
    let d = dawson(x);
    let d1 = 1.0 - 2.0 * x * d;
    let d2 = -2.0 * d - 2.0 * x * d1;
    (d, d1, d2)
}

/// Even kernels of the Dawson function used by the partition function:
/// `G0 = D(u)/u`, `G1 = D'(u) - D(u)/u`, `G2 = u D''(u) - 3 D'(u) + 3 D(u)/u`.
///
/// With `m(c) = D(√t c)/√t` these give `m = c G0`, `dm/dt = c G1 / (2t)` and
/// `d²m/dt² = c G2 / (4t²)` at `u = √t c`.
pub fn dawson_kernels(u: f64) -> (f64, f64, f64) {
    let au = u.abs();
    if au < 1.0 {
        // Σ a_k u^{2k} with a_k = (-2)^k / (2k+1)!!.
        let u2 = au * au;
        let (mut g0, mut g1, mut g2) = (0.0, 0.0, 0.0);
        let mut term = 1.0;
        for k in 0..40 {
            let kf = f64::from(k);
            g0 += term;
            g1 += 2.0 * kf * term;
            g2 += 4.0 * kf * (kf - 1.0) * term;
            term *= -2.0 * u2 / (2.0 * kf + 3.0);
            if term.abs() < 1e-18 {
                break;
            }
        }
        return (g0, g1, g2);
    }
    let (d, d1, d2) = dawson_derivatives(au);
    let g0 = d / au;
    (g0, d1 - g0, au * d2 - 3.0 * d1 + 3.0 * g0)
}

/// `erfi(x)` as `(2/√π) D(x) · exp(x²)`.
pub fn erfi_scaled(x: f64) -> ScaledExp {
    ScaledExp::new(TWO_OVER_SQRT_PI * dawson(x), x * x)
}

/// `erfi(x)` as a plain number; overflows past |x| ≈ 26.6.
pub fn erfi(x: f64) -> f64 {
    erfi_scaled(x).value()
}

fn dawson_series(x: f64) -> f64 {
    // x Σ (-2x²)^k / (2k+1)!!
    let x2 = x * x;
    let mut term = x;
    let mut sum = 0.0;
    for k in 0..40 {
        sum += term;
        term *= -2.0 * x2 / (2.0 * f64::from(k) + 3.0);
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Rybicki's exponentially convergent sampling formula.
fn dawson_rybicki(x: f64) -> f64 {
    let n0 = 2.0 * (0.5 * x / RYBICKI_H).round();
    let xp = x - n0 * RYBICKI_H;
    let mut sum = 0.0;
    for i in 0..RYBICKI_TERMS {
        let n = f64::from(2 * i + 1);
        let up = xp - n * RYBICKI_H;
        let down = xp + n * RYBICKI_H;
        sum += (-up * up).exp() / (n0 + n) + (-down * down).exp() / (n0 - n);
    }
    INV_SQRT_PI * sum
}

/// Asymptotic series `D ~ Σ (2k-1)!! / (2^{k+1} x^{2k+1})` with its first two derivatives.
fn dawson_asymptotic(x: f64) -> (f64, f64, f64) {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // c_k = (2k-1)!! / 2^{k+1}; term_k = c_k x^{-(2k+1)}.
    let mut term = 0.5 * inv;
    let (mut d, mut d1, mut d2) = (0.0, 0.0, 0.0);
    let mut previous = f64::INFINITY;
    for k in 0..60 {
        let kf = f64::from(k);
        if term.abs() >= previous {
            break;
        }
        d += term;
        d1 -= (2.0 * kf + 1.0) * term * inv;
        d2 += (2.0 * kf + 1.0) * (2.0 * kf + 2.0) * term * inv2;
        previous = term.abs();
        if term.abs() < 1e-18 * d.abs() {
            break;
        }
        term *= (2.0 * kf + 1.0) * 0.5 * inv2;
    }
    (d, d1, d2)
}
