//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
    /// Equal-width pieces the range is cut into before adapting.
    pub initial_pieces: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_intervals: 20_000,
            initial_pieces: 8,
        }
    }
}

/// Converged integral with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[a, b]` to `max(abs_tol, rel_tol·|I|)`.
///
/// `breakpoints` inside `(a, b)` are honoured as initial cuts in addition to
/// the uniform pieces. Non-finite integrand values are an error.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!(
            "integration limits must be finite, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            intervals: 0,
            evaluations: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    let pieces = cfg.initial_pieces.max(1);
    let mut cuts: Vec<f64> = (0..=pieces)
        .map(|i| lo + (hi - lo) * i as f64 / pieces as f64)
        .collect();
    cuts.extend(breakpoints.iter().copied().filter(|&x| x > lo && x < hi));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    let mut total = 0.0;
    let mut error = 0.0;
    for w in cuts.windows(2) {
        let s = kronrod(&mut f, w[0], w[1]);
        evaluations += 15;
        total += s.value;
        error += s.error;
        heap.push(s);
    }

    loop {
        if !total.is_finite() {
            return Err(Error::Quadrature {
                estimate: total,
                error_estimate: error,
                intervals: heap.len(),
            });
        }
        let target = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if error <= target {
            break;
        }
        if heap.len() >= cfg.max_intervals {
            return Err(Error::Quadrature {
                estimate: sign * total,
                error_estimate: error,
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval cannot be split further in floating point.
            return Err(Error::Quadrature {
                estimate: sign * total,
                error_estimate: error,
                intervals: heap.len() + 1,
            });
        }
        let left = kronrod(&mut f, worst.a, mid);
        let right = kronrod(&mut f, mid, worst.b);
        evaluations += 30;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // Re-sum periodically so the running totals do not drift.
        if heap.len() % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            error = heap.iter().map(|s| s.error).sum();
        }
    }

    Ok(QuadResult {
        value: sign * heap.iter().map(|s| s.value).sum::<f64>(),
        error_estimate: heap.iter().map(|s| s.error).sum(),
        intervals: heap.len(),
        evaluations,
    })
}
