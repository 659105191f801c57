//! Bracketed bisection.

use crate::math;

/// Bisection on a bracketing interval. Assumes `f(lo)` and `f(hi)` have
/// opposite signs (zero endpoints are returned directly); refines until the
/// bracket shrinks to roughly machine precision relative to its location.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return lo;
    }
    if fhi == 0.0 {
        return hi;
    }
    debug_assert!(
        (flo < 0.0) != (fhi < 0.0),
        "bisect needs a sign change: f({lo}) = {flo}, f({hi}) = {fhi}"
    );
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // no representable point strictly inside
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * (math::abs(lo).max(math::abs(hi)).max(1.0)) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Bisection that first locates a sign change by scanning `n` subintervals.
/// Returns `None` when no sign change is found.
pub fn bisect_scan<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> Option<f64> {
    let mut prev_t = lo;
    let mut prev_v = f(lo);
    if prev_v == 0.0 {
        return Some(lo);
    }
    for i in 1..=n {
        let t = lo + (hi - lo) * i as f64 / n as f64;
        let v = f(t);
        if v == 0.0 {
            return Some(t);
        }
        if (prev_v < 0.0) != (v < 0.0) {
            return Some(bisect(&f, prev_t, t));
        }
        prev_t = t;
        prev_v = v;
    }
    None
}
