//! Globally adaptive Gauss–Kronrod (G10/K21) quadrature plus an
//! epsilon-accelerated integrator for oscillatory tails on half-lines.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525634760,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9].
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Integral estimate with its error bound and the number of intervals used.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

/// Single 21-point Kronrod evaluation on `[a, b]` with the QUADPACK error
/// heuristic.
pub fn gauss_kronrod_21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv = [(0.0, 0.0); 10];
    for (j, slot) in fv.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        *slot = (f1, f2);
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for (j, (f1, f2)) in fv.iter().enumerate() {
        res_asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let hl = half.abs();
    let result = res_k * half;
    res_abs *= hl;
    res_asc *= hl;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err)
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
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

/// Adaptive integration over the consecutive intervals defined by
/// `breakpoints` (sorted, at least two entries). The interval with the
/// largest error is bisected until the summed error meets
/// `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    breakpoints: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<Estimate> {
    debug_assert!(breakpoints.len() >= 2);
    let mut heap = BinaryHeap::with_capacity(breakpoints.len() * 2);
    let mut settled = Vec::new();
    for w in breakpoints.windows(2) {
        if w[1] > w[0] {
            let (value, error) = gauss_kronrod_21(f, w[0], w[1]);
            heap.push(Segment { a: w[0], b: w[1], value, error });
        }
    }
    let mut count = heap.len();
    let totals = |heap: &BinaryHeap<Segment>, settled: &[Segment]| {
        heap.iter().chain(settled.iter()).fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error))
    };
    let (mut value, mut error) = totals(&heap, &settled);
    let mut since_resum = 0usize;
    loop {
        let tol = abs_tol.max(rel_tol * value.abs());
        if error <= tol {
            // Resum to shed drift from the running updates before accepting.
            let (v, e) = totals(&heap, &settled);
            if e <= abs_tol.max(rel_tol * v.abs()) {
                return Ok(Estimate { value: v, error: e, subdivisions: count });
            }
            (value, error) = (v, e);
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::QuadratureFailure { error_estimate: error, subdivisions: count });
        };
        if count >= max_subdivisions {
            heap.push(worst);
            return Err(Error::QuadratureFailure { error_estimate: error, subdivisions: count });
        }
        let mid = 0.5 * (worst.a + worst.b);
        // Interval cannot be resolved further in floating point.
        if (worst.b - worst.a) <= 128.0 * f64::EPSILON * mid.abs().max(1.0) {
            settled.push(worst);
            if heap.is_empty() {
                let (_, e) = totals(&heap, &settled);
                return Err(Error::QuadratureFailure { error_estimate: e, subdivisions: count });
            }
            continue;
        }
        let (v1, e1) = gauss_kronrod_21(f, worst.a, mid);
        let (v2, e2) = gauss_kronrod_21(f, mid, worst.b);
        value += v1 + v2 - worst.value;
        error += e1 + e2 - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
        count += 1;
        since_resum += 1;
        if since_resum == 256 {
            since_resum = 0;
            (value, error) = totals(&heap, &settled);
        }
    }
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums; returns
/// the highest-order even-column entry.
pub fn wynn_epsilon(sums: &[f64]) -> f64 {
    let Some(&last) = sums.last() else {
        return 0.0;
    };
    let mut prev = vec![0.0; sums.len() + 1];
    let mut cur = sums.to_vec();
    let mut best = last;
    let mut order = 0usize;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for n in 0..cur.len() - 1 {
            let diff = cur[n + 1] - cur[n];
            if diff == 0.0 || !diff.is_finite() {
                return if order.is_multiple_of(2) { cur[n + 1] } else { best };
            }
            next.push(prev[n + 1] + 1.0 / diff);
        }
        order += 1;
        if order.is_multiple_of(2) {
            best = *next.last().unwrap();
        }
        prev = cur;
        cur = next;
    }
    best
}

const MAX_TAIL_CYCLES: usize = 400;
const EPSILON_WINDOW: usize = 20;

/// Integral of `f` over the half-line beyond `start` (`[start, inf)` for a
/// positive `half_period`, `(-inf, start]` for a negative one), where `f`
/// changes sign every `|half_period|`.
/// Lobes are integrated one at a time and the partial sums are
/// accelerated with the epsilon algorithm.
pub fn integrate_oscillatory_tail<F: Fn(f64) -> f64>(
    f: &F,
    start: f64,
    half_period: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<Estimate> {
    let mut sums: Vec<f64> = Vec::new();
    let mut total = 0.0;
    let mut subdivisions = 0usize;
    let mut previous: Option<f64> = None;
    let mut last_change = f64::INFINITY;
    for k in 0..MAX_TAIL_CYCLES {
        let a = start + k as f64 * half_period;
        let b = a + half_period;
        let (lo, hi) = if half_period > 0.0 { (a, b) } else { (b, a) };
        let lobe = integrate(f, &[lo, hi], 0.1 * abs_tol, rel_tol, max_subdivisions)?;
        subdivisions += lobe.subdivisions;
        total += lobe.value;
        sums.push(total);
        if sums.len() < 4 {
            continue;
        }
        let window = &sums[sums.len().saturating_sub(EPSILON_WINDOW)..];
        let estimate = wynn_epsilon(window);
        if let Some(prev) = previous {
            let change = (estimate - prev).abs();
            let tol = abs_tol.max(rel_tol * estimate.abs());
            if change <= tol && last_change <= tol {
                return Ok(Estimate { value: estimate, error: change.max(last_change), subdivisions });
            }
            last_change = change;
        }
        previous = Some(estimate);
    }
    Err(Error::QuadratureFailure { error_estimate: last_change, subdivisions })
}
