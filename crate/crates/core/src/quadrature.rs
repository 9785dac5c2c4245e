//! Gauss-Legendre rules and the adaptive drivers built on them.
//!
//! Both drivers are globally adaptive: each cell carries the difference between
//! an `m`-point and a `2m`-point estimate, and the cell with the largest
//! difference is bisected until the summed difference drops below the
//! tolerance. Final sums are taken in cell-position order so results are
//! bit-stable.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 64;
/// Per-cell order used by the adaptive drivers.
pub const DEFAULT_ORDER: usize = 8;

/// Nodes and weights of an `m`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1D {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Applies the rule on `[a, b]`.
    #[inline]
    pub fn apply<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(c + h * x);
        }
        acc * h
    }

    /// Tensor-product rule on `[x0,x1] x [y0,y1]`.
    pub fn apply_2d<F: FnMut(f64, f64) -> f64>(
        &self,
        (x0, x1): (f64, f64),
        (y0, y1): (f64, f64),
        mut f: F,
    ) -> f64 {
        let cx = 0.5 * (x0 + x1);
        let hx = 0.5 * (x1 - x0);
        let cy = 0.5 * (y0 + y1);
        let hy = 0.5 * (y1 - y0);
        let mut acc = 0.0;
        for (xi, wi) in self.nodes.iter().zip(&self.weights) {
            let x = cx + hx * xi;
            let mut row = 0.0;
            for (yj, wj) in self.nodes.iter().zip(&self.weights) {
                row += wj * f(x, cy + hy * yj);
            }
            acc += wi * row;
        }
        acc * hx * hy
    }
}

fn compute_rule(m: usize) -> Rule1D {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        // Chebyshev-like initial guess, refined by Newton on P_m.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(m, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    Rule1D { nodes, weights }
}

/// `(P_m(x), P_m'(x))` by the three-term recurrence.
fn legendre(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let mf = m as f64;
    let dp = mf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

static RULES: [OnceLock<Rule1D>; MAX_ORDER] = [const { OnceLock::new() }; MAX_ORDER];

/// The cached `m`-point Gauss-Legendre rule, `1 <= m <= 64`.
pub fn gauss_legendre(m: usize) -> Result<&'static Rule1D> {
    if m == 0 || m > MAX_ORDER {
        return Err(Error::OutOfRange(format!(
            "Gauss-Legendre order {m} not in 1..={MAX_ORDER}"
        )));
    }
    Ok(RULES[m - 1].get_or_init(|| compute_rule(m)))
}

fn rule(m: usize) -> &'static Rule1D {
    gauss_legendre(m).expect("order checked by caller")
}

/// Outcome of an adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdaptiveResult {
    pub value: f64,
    pub error_estimate: f64,
    pub cells_used: usize,
    pub converged: bool,
}

impl AdaptiveResult {
    /// Converts a non-converged result into an accuracy error.
    pub fn into_result(self) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::Accuracy {
                estimate: self.value,
                error_bound: self.error_estimate,
            })
        }
    }
}

struct Cell<K> {
    err: f64,
    seq: usize,
    key: K,
    value: f64,
}

impl<K> PartialEq for Cell<K> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<K> Eq for Cell<K> {}
impl<K> PartialOrd for Cell<K> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<K> Ord for Cell<K> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Integrates `f` over `[a, b]` with the default per-cell order.
pub fn integrate_1d<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    cap: usize,
) -> AdaptiveResult {
    integrate_1d_with(f, a, b, tol, cap, DEFAULT_ORDER)
}

/// Adaptive 1-D integration with an `(m, 2m)` error model. `b < a` is
/// allowed and flips the sign of the result.
pub fn integrate_1d_with<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    cap: usize,
    order: usize,
) -> AdaptiveResult {
    if a == b {
        return AdaptiveResult {
            value: 0.0,
            error_estimate: 0.0,
            cells_used: 0,
            converged: true,
        };
    }
    if b < a {
        let r = integrate_1d_with(f, b, a, tol, cap, order);
        return AdaptiveResult {
            value: -r.value,
            ..r
        };
    }
    let order = order.clamp(1, MAX_ORDER / 2);
    let coarse = rule(order);
    let fine = rule(2 * order);
    let mut seq = 0usize;
    let mut eval = |lo: f64, hi: f64, seq: &mut usize| -> Cell<(f64, f64)> {
        let c = coarse.apply(lo, hi, &mut f);
        let v = fine.apply(lo, hi, &mut f);
        let err = if v.is_finite() && c.is_finite() {
            (v - c).abs()
        } else {
            f64::INFINITY
        };
        *seq += 1;
        Cell {
            err,
            seq: *seq,
            key: (lo, hi),
            value: v,
        }
    };
    let mut heap = BinaryHeap::new();
    let first = eval(a, b, &mut seq);
    let mut total_err = first.err;
    heap.push(first);
    let cap = cap.max(1);
    while total_err > tol && heap.len() < cap {
        let worst = heap.pop().expect("heap is never empty");
        let (lo, hi) = worst.key;
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            heap.push(worst);
            break;
        }
        let left = eval(lo, mid, &mut seq);
        let right = eval(mid, hi, &mut seq);
        total_err = total_err - worst.err + left.err + right.err;
        heap.push(left);
        heap.push(right);
        // Re-sum occasionally to shed accumulated cancellation in total_err.
        if seq % 64 == 0 {
            total_err = heap.iter().map(|c| c.err).sum();
        }
    }
    let mut cells: Vec<_> = heap.into_vec();
    cells.sort_by(|x, y| x.key.0.total_cmp(&y.key.0));
    let value: f64 = cells.iter().map(|c| c.value).sum();
    let err: f64 = cells.iter().map(|c| c.err).sum();
    AdaptiveResult {
        value,
        error_estimate: err,
        cells_used: cells.len(),
        converged: err <= tol && value.is_finite(),
    }
}

/// Integrates `f` over the unit square.
pub fn integrate_2d<F: FnMut(f64, f64) -> f64>(f: F, tol: f64, cap: usize) -> AdaptiveResult {
    integrate_rect(f, (0.0, 1.0), (0.0, 1.0), tol, cap)
}

/// Quad-tree adaptive integration over a rectangle, `8x8` against `16x16`
/// tensor Gauss-Legendre per cell.
pub fn integrate_rect<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    xr: (f64, f64),
    yr: (f64, f64),
    tol: f64,
    cap: usize,
) -> AdaptiveResult {
    if xr.0 == xr.1 || yr.0 == yr.1 {
        return AdaptiveResult {
            value: 0.0,
            error_estimate: 0.0,
            cells_used: 0,
            converged: true,
        };
    }
    let coarse = rule(DEFAULT_ORDER);
    let fine = rule(2 * DEFAULT_ORDER);
    type Rect = ((f64, f64), (f64, f64));
    let mut seq = 0usize;
    let mut eval = |r: Rect, seq: &mut usize| -> Cell<Rect> {
        let c = coarse.apply_2d(r.0, r.1, &mut f);
        let v = fine.apply_2d(r.0, r.1, &mut f);
        let err = if v.is_finite() && c.is_finite() {
            (v - c).abs()
        } else {
            f64::INFINITY
        };
        *seq += 1;
        Cell {
            err,
            seq: *seq,
            key: r,
            value: v,
        }
    };
    let mut heap = BinaryHeap::new();
    let first = eval((xr, yr), &mut seq);
    let mut total_err = first.err;
    heap.push(first);
    let cap = cap.max(1);
    while total_err > tol && heap.len() + 3 <= cap {
        let worst = heap.pop().expect("heap is never empty");
        let ((x0, x1), (y0, y1)) = worst.key;
        let xm = 0.5 * (x0 + x1);
        let ym = 0.5 * (y0 + y1);
        total_err -= worst.err;
        for child in [
            ((x0, xm), (y0, ym)),
            ((xm, x1), (y0, ym)),
            ((x0, xm), (ym, y1)),
            ((xm, x1), (ym, y1)),
        ] {
            let c = eval(child, &mut seq);
            total_err += c.err;
            heap.push(c);
        }
        if seq % 64 == 0 {
            total_err = heap.iter().map(|c| c.err).sum();
        }
    }
    let mut cells: Vec<_> = heap.into_vec();
    cells.sort_by(|a, b| {
        let ((ax, _), (ay, _)) = a.key;
        let ((bx, _), (by, _)) = b.key;
        ay.total_cmp(&by).then(ax.total_cmp(&bx))
    });
    let value: f64 = cells.iter().map(|c| c.value).sum();
    let err: f64 = cells.iter().map(|c| c.err).sum();
    AdaptiveResult {
        value,
        error_estimate: err,
        cells_used: cells.len(),
        converged: err <= tol && value.is_finite(),
    }
}

/// Central difference `(f(x+h) - f(x-h)) / 2h`, error `O(h^2)`.
pub fn central_diff<F: FnMut(f64) -> f64>(mut f: F, x0: f64, h: f64) -> f64 {
    (f(x0 + h) - f(x0 - h)) / (2.0 * h)
}

/// One Richardson step on the central difference, error `O(h^4)`.
pub fn richardson<F: FnMut(f64) -> f64>(mut f: F, x0: f64, h: f64) -> f64 {
    let d1 = central_diff(&mut f, x0, h);
    let d2 = central_diff(&mut f, x0, 0.5 * h);
    (4.0 * d2 - d1) / 3.0
}
