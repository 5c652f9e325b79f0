//! Bound-state radial wave functions built from terminating Gauss
//! hypergeometric polynomials.
//!
//! With `z = q e^{-2αr}` the level-n function is
//! `(1-z)^{η₂} z^{ε} ₂F₁(-n, n + 2η₂ + 2ε; 2η₂; 1-z)` where
//! `ε = -Q_l/(2α) = ½(η₁/(n+η₂) - (n+η₂))`, so that the tail decays as
//! `e^{Q_l r}`. Amplitudes are normalized by quadrature.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::model::Model;
use crate::quad::{integrate, QuadConfig};
use crate::spectrum::{constants_with_form, q_l, IndexForm, SpectrumConstants};

/// Envelope level, relative to its peak, that bounds the integration range.
const ENVELOPE_CUT: f64 = 1e-16;

/// `₂F₁(-n, b; c; z)` by forward accumulation of the Pochhammer series.
pub fn hyp2f1_terminating(n: u32, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = f64::from(k);
        if c + kf == 0.0 {
            return Err(Error::HypergeometricPole { c, k });
        }
        term *= (kf - f64::from(n)) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
    }
    Ok(sum)
}

/// `₂F₁(-n, b; c; y)` through the three-term recurrence of the Jacobi
/// polynomial `P_n^{(c-1, b-n-c)}(1-2y)`, scaled so that the value at y = 0 is 1.
///
/// Stable for large `b` and `c`, where the power series cancels.
pub fn hyp2f1_jacobi(n: u32, b: f64, c: f64, y: f64) -> Result<f64> {
    let (mantissa, ln_scale) = hyp2f1_jacobi_scaled(n, b, c, y)?;
    Ok(mantissa * ln_scale.exp())
}

/// [`hyp2f1_jacobi`] as `(mantissa, ln_scale)` with the value `mantissa · e^{ln_scale}`.
pub fn hyp2f1_jacobi_scaled(n: u32, b: f64, c: f64, y: f64) -> Result<(f64, f64)> {
    const BIG: f64 = 1e150;
    let ja = c - 1.0;
    let jb = b - f64::from(n) - c;
    let x = 1.0 - 2.0 * y;
    if n == 0 {
        return Ok((1.0, 0.0));
    }
    if c == 0.0 {
        return Err(Error::HypergeometricPole { c, k: 0 });
    }
    let s = ja + jb;
    let mut prev = 1.0;
    let mut cur = 1.0 - (s + 2.0) / c * y;
    let mut ln_scale = 0.0;
    for k in 2..=n {
        let kf = f64::from(k);
        let denom = (ja + kf) * (kf + s) * (2.0 * kf + s - 2.0);
        if denom == 0.0 {
            if ja + kf == 0.0 {
                return Err(Error::HypergeometricPole { c, k: k - 1 });
            }
            return Ok((hyp2f1_terminating(n, b, c, y)?, 0.0));
        }
        let lead = 0.5
            * (2.0 * kf + s - 1.0)
            * ((2.0 * kf + s) * (2.0 * kf + s - 2.0) * x + ja * ja - jb * jb);
        let back = (kf - 1.0) * (kf + jb - 1.0) * (2.0 * kf + s);
        let next = (lead * cur - back * prev) / denom;
        prev = cur;
        cur = next;
        let size = cur.abs().max(prev.abs());
        if size > BIG || (size < 1.0 / BIG && size > 0.0) {
            prev /= size;
            cur /= size;
            ln_scale += size.ln();
        }
    }
    Ok((cur, ln_scale))
}

/// A numerically normalized bound-state wave function.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    pub n: u32,
    pub l: u32,
    pub sc: SpectrumConstants,
    /// Q_l, 1/Å.
    pub q_l: f64,
    /// Exponent of `1 - z`, equal to P_l/(αq).
    pub inner_exponent: f64,
    /// Exponent of `z`, equal to -Q_l/(2α).
    pub outer_exponent: f64,
    /// Normalization constant of the closed form, `∫χ² dr = 1` convention.
    pub norm_analytic: f64,
    /// Normalization constant obtained by quadrature.
    pub norm_numeric: f64,
    /// Singularity radius r₀, Å.
    pub r0: f64,
    /// Inner edge where |χ| drops below 1e-16 of its peak, Å.
    pub r_inner: f64,
    /// Outer edge where |χ| drops below 1e-16 of its peak, Å.
    pub r_cut: f64,
    /// Position of the largest |χ|, Å.
    pub r_peak: f64,
    /// Classical turning points of the effective potential at this level, Å.
    pub turning_points: (f64, f64),
    /// ln|χ| at `r_peak` in the unnormalized convention.
    ln_peak: f64,
    /// 1/√(∫ scaled χ² dr).
    scale: f64,
}

impl WaveFunction {
    pub fn new(model: &Model, n: u32, l: u32, form: IndexForm) -> Result<Self> {
        let sc = constants_with_form(model, l, form);
        match sc.lambda_max {
            Some(m) if n <= m => {}
            other => {
                return Err(Error::LevelOutOfRange {
                    n,
                    lambda_max: other,
                })
            }
        }
        let q = q_l(&sc, f64::from(n));
        if !(q < 0.0) {
            return Err(Error::LevelOutOfRange {
                n,
                lambda_max: sc.lambda_max,
            });
        }
        let eta2 = sc.eta2;
        let eps = -q / (2.0 * sc.alpha);
        let r0 = model.singularity_radius();

        let energy = sc.energy_at(f64::from(n));
        let (tp_in, tp_out) = model.turning_points(l, energy)?;

        let mut wf = WaveFunction {
            n,
            l,
            sc,
            q_l: q,
            inner_exponent: eta2,
            outer_exponent: eps,
            norm_analytic: 0.0,
            norm_numeric: 0.0,
            r0,
            r_inner: tp_in,
            r_cut: tp_out,
            r_peak: tp_in,
            turning_points: (tp_in, tp_out),
            ln_peak: 0.0,
            scale: 1.0,
        };

        // |χ| peaks inside the classically allowed region.
        let samples = 256 * (n as usize + 1);
        let (mut r_peak, mut ln_peak) = (tp_in, f64::NEG_INFINITY);
        for i in 0..=samples {
            let r = tp_in + (tp_out - tp_in) * i as f64 / samples as f64;
            let value = wf.ln_abs(r);
            if value > ln_peak {
                ln_peak = value;
                r_peak = r;
            }
        }
        wf.r_peak = r_peak;
        wf.ln_peak = ln_peak;

        // Outside the turning points |χ| decays monotonically.
        let above_cut = |r: f64| wf.ln_abs(r) - ln_peak > ENVELOPE_CUT.ln();
        let width = tp_out - tp_in;
        let mut far = tp_out + width;
        while above_cut(far) {
            far = tp_out + 2.0 * (far - tp_out);
        }
        let r_cut = bisect(above_cut, tp_out, far);
        let mut near = (tp_in - width).max(r0);
        if near > r0 && above_cut(near) {
            near = r0;
        }
        let r_inner = bisect(above_cut, tp_in, near);
        wf.r_cut = r_cut;
        wf.r_inner = r_inner;

        let cfg = QuadConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_intervals: 50_000,
            initial_pieces: 16 + 4 * n as usize,
        };
        let norm2 = integrate(
            |r| {
                let v = wf.scaled(r);
                v * v
            },
            wf.r_inner,
            wf.r_cut,
            &[tp_in, r_peak, tp_out],
            &cfg,
        )?;
        wf.scale = 1.0 / norm2.value.sqrt();
        wf.norm_numeric = (wf.scale.ln() - ln_peak).exp();
        wf.norm_analytic = wf.ln_norm_analytic().exp();
        Ok(wf)
    }

    /// Normalized amplitude at r, Å^{-1/2}.
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        if !(r > self.r0) || !r.is_finite() {
            return Err(Error::Domain(format!(
                "r = {r} lies outside the physical region r > r0 = {}",
                self.r0
            )));
        }
        Ok(self.scale * self.scaled(r))
    }

    /// `(norm_numeric, norm_analytic / norm_numeric)`.
    pub fn normalize_numeric(&self) -> (f64, f64) {
        (self.norm_numeric, self.normalization_ratio())
    }

    pub fn normalization_ratio(&self) -> f64 {
        (self.ln_norm_analytic() - self.norm_numeric.ln()).exp()
    }

    /// Interior sign changes on `(r_inner, r_cut)`, by a grid scan refined
    /// until two successive doublings agree.
    pub fn count_nodes(&self) -> u32 {
        let mut points = 64 * (self.n as usize + 1);
        let mut last = self.sign_changes(points);
        loop {
            points *= 2;
            let next = self.sign_changes(points);
            if next == last || points > 1 << 22 {
                return next;
            }
            last = next;
        }
    }

    /// Samples `(r, amplitude)` on a uniform grid over `[r_inner, r_cut]`.
    pub fn sample(&self, points: usize) -> Vec<(f64, f64)> {
        let points = points.max(2);
        let h = (self.r_cut - self.r_inner) / (points - 1) as f64;
        (0..points)
            .map(|i| {
                let r = self.r_inner + h * i as f64;
                (r, self.scale * self.scaled(r))
            })
            .collect()
    }

    /// Samples on a grid refined by bisection wherever linear interpolation
    /// misses the midpoint by more than `tol` times the peak amplitude.
    pub fn adaptive_sample(&self, tol: f64) -> Vec<(f64, f64)> {
        let peak = self.evaluate(self.r_peak).map_or(1.0, f64::abs);
        let f = |r: f64| self.scale * self.scaled(r);
        let coarse = self.sample(32 * (self.n as usize + 1) + 1);
        let mut out = vec![coarse[0]];
        let mut stack = Vec::new();
        for pair in coarse.windows(2) {
            stack.push((pair[0], pair[1], 0u32));
            while let Some((a, b, depth)) = stack.pop() {
                let m = 0.5 * (a.0 + b.0);
                let fm = f(m);
                if depth < 20 && (fm - 0.5 * (a.1 + b.1)).abs() > tol * peak {
                    // Right half first so the left half is processed next.
                    stack.push(((m, fm), b, depth + 1));
                    stack.push((a, (m, fm), depth + 1));
                } else {
                    out.push(b);
                }
            }
        }
        out
    }

    /// `∫ χ_self χ_other dr` over the union of both integration ranges.
    pub fn overlap(&self, other: &WaveFunction) -> Result<f64> {
        let lo = self.r_inner.min(other.r_inner);
        let hi = self.r_cut.max(other.r_cut);
        let cfg = QuadConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_intervals: 50_000,
            initial_pieces: 16 + 4 * (self.n + other.n) as usize,
        };
        let res = integrate(
            |r| self.scale * self.scaled(r) * other.scale * other.scaled(r),
            lo,
            hi,
            &[self.r_peak, other.r_peak],
            &cfg,
        )?;
        Ok(res.value)
    }

    fn sign_changes(&self, points: usize) -> u32 {
        let h = (self.r_cut - self.r_inner) / points as f64;
        let mut count = 0;
        let mut last_sign = 0.0;
        for i in 1..points {
            let r = self.r_inner + h * i as f64;
            let f = self.polynomial(r).0;
            if f == 0.0 {
                continue;
            }
            let s = f.signum();
            if last_sign != 0.0 && s != last_sign {
                count += 1;
            }
            last_sign = s;
        }
        count
    }

    /// `ln z` and `1 - z` at r, computed without cancellation near r₀.
    fn coordinates(&self, r: f64) -> (f64, f64) {
        let ln_z = self.sc.q.ln() - 2.0 * self.sc.alpha * r;
        (ln_z, -ln_z.exp_m1())
    }

    fn polynomial(&self, r: f64) -> (f64, f64) {
        let (_, y) = self.coordinates(r);
        let b = f64::from(self.n) + 2.0 * self.inner_exponent + 2.0 * self.outer_exponent;
        hyp2f1_jacobi_scaled(self.n, b, 2.0 * self.inner_exponent, y).unwrap_or((f64::NAN, 0.0))
    }

    /// `ln |χ|` without normalization; −∞ at nodes and at r₀.
    fn ln_abs(&self, r: f64) -> f64 {
        if r <= self.r0 {
            return f64::NEG_INFINITY;
        }
        let (ln_z, y) = self.coordinates(r);
        let (m, ln_scale) = self.polynomial(r);
        self.inner_exponent * y.ln() + self.outer_exponent * ln_z + m.abs().ln() + ln_scale
    }

    /// Amplitude with its peak scaled to 1, unnormalized.
    fn scaled(&self, r: f64) -> f64 {
        if r <= self.r0 {
            return 0.0;
        }
        let (ln_z, y) = self.coordinates(r);
        let (m, ln_scale) = self.polynomial(r);
        let ln_env = self.inner_exponent * y.ln() + self.outer_exponent * ln_z;
        m * (ln_env + ln_scale - self.ln_peak).exp()
    }

    /// Closed-form constant with the Γ-ratios in log space:
    /// `[-Q (αqn + P - qQ)/(αqn + P) · Γ(n+2η₂) Γ(n+2η₂+2ε) / (n! Γ(n+2ε+1))]^{1/2} / Γ(2η₂)`.
    fn ln_norm_analytic(&self) -> f64 {
        let n = f64::from(self.n);
        let sc = &self.sc;
        let k = sc.alpha * sc.q * n + sc.p_l;
        let prefactor = -self.q_l * (k - sc.q * self.q_l) / k;
        let two_eta = 2.0 * self.inner_exponent;
        let two_eps = 2.0 * self.outer_exponent;
        0.5 * (prefactor.ln() + ln_gamma(n + two_eta) + ln_gamma(n + two_eta + two_eps)
            - ln_gamma(n + 1.0)
            - ln_gamma(n + two_eps + 1.0))
            - ln_gamma(two_eta)
    }
}

/// Last point between `inside` (where `pred` holds) and `outside` (where it
/// fails or is undefined) at which `pred` still holds.
fn bisect<F: Fn(f64) -> bool>(pred: F, mut inside: f64, mut outside: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if pred(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}
