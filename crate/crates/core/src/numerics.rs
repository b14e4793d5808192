//! Shared numeric kernels: golden-section search, numeric Legendre-Fenchel
//! conjugates, the 2x2 Perron root and log-domain accumulation.
//!
//! Everything here works on plain `f64` closures. Extended-real results use
//! `f64::INFINITY` as the `+∞` sentinel.

// `!(a < b)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use crate::error::{Error, Result};

/// Default absolute tolerance on the argument of every 1-D search.
pub const ARG_TOL: f64 = 1e-10;

/// Brackets are never grown beyond this magnitude.
pub const BRACKET_CAP: f64 = 1e6;

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const MAX_GOLDEN_ITERS: usize = 500;

/// A sampled function, `ys[i] = f(xs[i])`. `ys` may hold `+∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveGrid {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl CurveGrid {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::InvalidParameter {
                name: "grid length",
                value: xs.len().min(ys.len()) as f64,
            });
        }
        if let Some(w) = xs.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidBracket { lo: w[0], hi: w[1] });
        }
        Ok(Self { xs, ys })
    }

    /// Samples `f` on `n` evenly spaced points of `[lo, hi]`, endpoints included.
    pub fn sample<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || !(lo < hi) {
            return Err(Error::InvalidBracket { lo, hi });
        }
        let xs: Vec<f64> = (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect();
        let ys = xs.iter().map(|&x| f(x)).collect();
        Self::new(xs, ys)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// Discrete convexity test on the finite part of the grid: every
    /// second divided difference is at least `-tol`.
    pub fn is_convex(&self, tol: f64) -> bool {
        let pts: Vec<(f64, f64)> = self.iter().filter(|(_, y)| y.is_finite()).collect();
        pts.windows(3).all(|w| {
            let s1 = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
            let s2 = (w[2].1 - w[1].1) / (w[2].0 - w[1].0);
            s2 - s1 >= -tol
        })
    }
}

/// Location and value of a 1-D extremum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub arg: f64,
    pub value: f64,
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { at: x })
    }
}

/// Golden-section search for the maximum of a concave `f` on `[lo, hi]`.
///
/// The endpoints are evaluated as well, so a maximum sitting on the boundary
/// is returned with its exact value rather than a value `tol` inside.
pub fn maximize_concave_1d<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<Extremum> {
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::InvalidBracket { lo, hi });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter { name: "tolerance", value: tol });
    }
    let f_lo = eval(&f, lo)?;
    if lo == hi {
        return Ok(Extremum { arg: lo, value: f_lo });
    }
    let f_hi = eval(&f, hi)?;

    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(&f, c)?;
    let mut fd = eval(&f, d)?;
    for _ in 0..MAX_GOLDEN_ITERS {
        // The spacing of doubles limits how narrow the bracket can get.
        let floor = 4.0 * f64::EPSILON * a.abs().max(b.abs());
        if b - a <= tol.max(floor) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(&f, c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(&f, d)?;
        }
    }

    let best = [(c, fc), (d, fd), (lo, f_lo), (hi, f_hi)]
        .into_iter()
        .fold((c, fc), |acc, p| if p.1 > acc.1 { p } else { acc });
    Ok(Extremum { arg: best.0, value: best.1 })
}

/// Golden-section search for the minimum of a convex `f` on `[lo, hi]`.
pub fn minimize_convex_1d<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<Extremum> {
    let ext = maximize_concave_1d(|x| -f(x), lo, hi, tol)?;
    Ok(Extremum { arg: ext.arg, value: -ext.value })
}

enum Edge {
    At(f64),
    Unbounded,
}

/// Walks away from `start` in direction `dir` with doubling steps until the
/// concave objective stops increasing, or reports that it keeps increasing
/// with slope at least `tol` once the step reaches [`BRACKET_CAP`].
fn grow_edge<F: Fn(f64) -> f64>(
    phi: &F,
    start: f64,
    f_start: f64,
    dir: f64,
    limit: f64,
    tol: f64,
) -> Result<Edge> {
    if limit.is_finite() {
        return Ok(Edge::At(limit));
    }
    let (mut prev, mut f_prev) = (start, f_start);
    let mut step = 1.0;
    loop {
        let cand = start + dir * step;
        let f_cand = eval(phi, cand)?;
        if f_cand <= f_prev {
            return Ok(Edge::At(cand));
        }
        if step >= BRACKET_CAP {
            let slope = (f_cand - f_prev) / (cand - prev).abs();
            return Ok(if slope >= tol { Edge::Unbounded } else { Edge::At(cand) });
        }
        prev = cand;
        f_prev = f_cand;
        step *= 2.0;
    }
}

/// Numeric Legendre-Fenchel conjugate `sup_{a ∈ [lo, hi]} (x·a − f(a))` of a
/// convex `f`. Either bound may be infinite; infinite sides are bracketed by
/// geometric growth and a sup that keeps growing past [`BRACKET_CAP`] is
/// reported as `+∞`.
pub fn legendre_conjugate<F: Fn(f64) -> f64>(
    f: F,
    x: f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64> {
    legendre_conjugate_point(f, x, lo, hi, tol).map(|e| e.map_or(f64::INFINITY, |e| e.value))
}

/// As [`legendre_conjugate`], also returning the maximizing argument.
/// `None` means the sup is `+∞`.
pub fn legendre_conjugate_point<F: Fn(f64) -> f64>(
    f: F,
    x: f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<Option<Extremum>> {
    if lo.is_nan() || hi.is_nan() || lo > hi {
        return Err(Error::InvalidBracket { lo, hi });
    }
    let phi = |a: f64| x * a - f(a);
    let start = 0.0_f64.clamp(lo, hi);
    let f_start = eval(&phi, start)?;
    let right = match grow_edge(&phi, start, f_start, 1.0, hi, tol)? {
        Edge::At(r) => r,
        Edge::Unbounded => return Ok(None),
    };
    let left = match grow_edge(&phi, start, f_start, -1.0, lo, tol)? {
        Edge::At(l) => l,
        Edge::Unbounded => return Ok(None),
    };
    maximize_concave_1d(phi, left, right, tol).map(Some)
}

/// Cancellation-safe larger eigenvalue of a 2x2 matrix with nonnegative
/// off-diagonal product. No irreducibility check.
pub(crate) fn larger_eigenvalue(m11: f64, m12: f64, m21: f64, m22: f64) -> f64 {
    let diff = m11 - m22;
    let disc = (diff * diff + 4.0 * m12 * m21).sqrt();
    0.5 * (m11 + m22 + disc)
}

/// Perron root of a nonnegative irreducible 2x2 matrix `[[m11, m12], [m21, m22]]`.
pub fn perron_eigenvalue_2x2(m: [[f64; 2]; 2]) -> Result<f64> {
    if m.iter().flatten().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::NegativeEntry);
    }
    if m[0][1] <= 0.0 || m[1][0] <= 0.0 {
        return Err(Error::Reducible);
    }
    Ok(larger_eigenvalue(m[0][0], m[0][1], m[1][0], m[1][1]))
}

/// `log Σ exp(v)` with max shifting; `−∞` for an empty slice.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    log_sum_exp_iter(values.iter().copied())
}

/// Streaming form of [`log_sum_exp`] using a running max.
pub fn log_sum_exp_iter<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = LogSumExp::default();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Online log-domain accumulator.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    scaled: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self { max: f64::NEG_INFINITY, scaled: 0.0 }
    }
}

impl LogSumExp {
    pub fn add(&mut self, v: f64) {
        if v == f64::NEG_INFINITY {
            return;
        }
        if v <= self.max {
            self.scaled += (v - self.max).exp();
        } else {
            self.scaled = self.scaled * (self.max - v).exp() + 1.0;
            self.max = v;
        }
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}

/// `log(e^a + e^b)`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Central finite difference `(f(x+h) − f(x−h)) / 2h`.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}
