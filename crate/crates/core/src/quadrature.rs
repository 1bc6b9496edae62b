//! Globally adaptive Gauss-Kronrod (7/15) quadrature for vector-valued integrands.
//!
//! All components share one panel partition; the panel with the largest
//! component-wise error is bisected until the summed error of every component
//! is below the absolute tolerance. Panel processing order is fixed, so results
//! are bit-for-bit reproducible.

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
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    /// Absolute tolerance per component.
    pub abs_tol: f64,
    /// Refinement budget.
    pub max_panels: usize,
    /// Uniform panels to start from (useful for oscillatory integrands).
    pub initial_panels: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            max_panels: 1 << 14,
            initial_panels: 8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct QuadratureResult {
    pub values: Vec<f64>,
    /// Largest per-component summed error estimate.
    pub error_estimate: f64,
    pub panels: usize,
}

struct Panel {
    a: f64,
    b: f64,
    values: Vec<f64>,
    errors: Vec<f64>,
    worst: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.worst
            .total_cmp(&other.worst)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk15<F>(f: &F, a: f64, b: f64, dim: usize, scratch: &mut [f64]) -> Panel
where
    F: Fn(f64, &mut [f64]),
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kron = vec![0.0; dim];
    let mut gauss = vec![0.0; dim];
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let nodes: &[f64] = if x == 0.0 {
            &[center]
        } else {
            &[center - half * x, center + half * x]
        };
        let wg = if j % 2 == 1 { WG[j / 2] } else { 0.0 };
        for &t in nodes {
            f(t, scratch);
            for c in 0..dim {
                kron[c] += wk * scratch[c];
                gauss[c] += wg * scratch[c];
            }
        }
    }
    let mut errors = vec![0.0; dim];
    let mut worst = 0.0f64;
    for c in 0..dim {
        kron[c] *= half;
        gauss[c] *= half;
        errors[c] = (kron[c] - gauss[c]).abs();
        worst = worst.max(errors[c]);
    }
    Panel {
        a,
        b,
        values: kron,
        errors,
        worst,
    }
}

/// Integrates the `dim`-component function `f` over `[a, b]`. The closure
/// writes its value at `x` into the provided buffer.
pub fn integrate<F>(f: F, a: f64, b: f64, dim: usize, opts: &QuadratureOptions) -> Result<QuadratureResult>
where
    F: Fn(f64, &mut [f64]),
{
    if !(b > a) || dim == 0 {
        return Err(Error::Domain(format!("invalid quadrature interval [{a}, {b}]")));
    }
    let mut scratch = vec![0.0; dim];
    let n0 = opts.initial_panels.max(1);
    let width = (b - a) / n0 as f64;
    let mut heap = BinaryHeap::with_capacity(opts.max_panels);
    for i in 0..n0 {
        let lo = a + width * i as f64;
        let hi = if i + 1 == n0 { b } else { a + width * (i + 1) as f64 };
        heap.push(gk15(&f, lo, hi, dim, &mut scratch));
    }
    let mut sums = vec![0.0; dim];
    for p in heap.iter() {
        for c in 0..dim {
            sums[c] += p.errors[c];
        }
    }
    let max_of = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max);
    let mut err = max_of(&sums);
    while err > opts.abs_tol {
        if heap.len() >= opts.max_panels {
            return Err(Error::QuadratureNonConvergence {
                achieved: err,
                tolerance: opts.abs_tol,
                panels: heap.len(),
            });
        }
        // at least one panel exists
        let worst = heap.pop().expect("non-empty panel heap");
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk15(&f, worst.a, mid, dim, &mut scratch);
        let right = gk15(&f, mid, worst.b, dim, &mut scratch);
        for c in 0..dim {
            sums[c] += left.errors[c] + right.errors[c] - worst.errors[c];
        }
        heap.push(left);
        heap.push(right);
        err = max_of(&sums);
    }
    // sum panels left to right for a fixed reduction order
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut values = vec![0.0; dim];
    for p in &panels {
        for c in 0..dim {
            values[c] += p.values[c];
        }
    }
    Ok(QuadratureResult {
        values,
        error_estimate: err,
        panels: panels.len(),
    })
}

/// Scalar convenience wrapper.
pub fn integrate_scalar<F>(f: F, a: f64, b: f64, opts: &QuadratureOptions) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate(|x, out: &mut [f64]| out[0] = f(x), a, b, 1, opts).map(|r| r.values[0])
}
