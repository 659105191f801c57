//! Zero/extremum extraction, semicycle lengths, boundedness classification,
//! and the post-zero envelope bounds.

use alloc::format;
use alloc::vec::Vec;

use crate::dde::DdeSpec;
use crate::error::{Error, Result};
use crate::math;
use crate::myshkis::myshkis_solution;
use crate::piecewise::{PiecewiseFn, Segment};
use crate::threshold::threshold_record;
use crate::tol;
use crate::trajectory::{find_roots, Trajectory};

/// Zeros, per-semicycle extrema, and semicycle lengths over a window.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SemicycleReport {
    /// Ordered zero times; flat zero stretches contribute both endpoints.
    pub zeros: Vec<f64>,
    /// One extremum (time, value) per semicycle.
    pub extrema: Vec<(f64, f64)>,
    /// Lengths of the one-signed stretches between consecutive zero events.
    pub lengths: Vec<f64>,
    /// Largest semicycle length in the window.
    pub alpha: f64,
    /// Largest lag of the producing problem.
    pub tau_m: f64,
}

/// Extract semicycles of an oscillatory trajectory on `[a, b]`.
pub fn semicycles(x: &Trajectory, a: f64, b: f64, tau_m: f64) -> Result<SemicycleReport> {
    let roots = find_roots(x, a, b)?;
    if roots.degenerate {
        return Err(Error::NotOscillatory { zeros: 0 });
    }
    // Zero events as (start, end) with points collapsing to both ends equal.
    let mut events: Vec<(f64, f64)> = roots.points.iter().map(|&p| (p, p)).collect();
    events.extend(roots.intervals.iter().copied());
    events.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    if events.len() < 3 {
        return Err(Error::NotOscillatory {
            zeros: events.len(),
        });
    }

    let mut zeros = Vec::new();
    for &(s, e) in &events {
        zeros.push(s);
        if e > s {
            zeros.push(e);
        }
    }

    let mut lengths = Vec::new();
    let mut extrema = Vec::new();
    for w in events.windows(2) {
        let (start, end) = (w[0].1, w[1].0);
        if end <= start {
            continue;
        }
        lengths.push(end - start);
        extrema.push(extremum_on(x, start, end));
    }
    let alpha = lengths.iter().copied().fold(0.0_f64, f64::max);
    Ok(SemicycleReport {
        zeros,
        extrema,
        lengths,
        alpha,
        tau_m,
    })
}

/// Location and value of the largest |x| over `(a, b)`.
fn extremum_on(x: &Trajectory, a: f64, b: f64) -> (f64, f64) {
    let n = 512;
    let mut best_t = a;
    let mut best = -1.0;
    for i in 0..=n {
        let t = a + (b - a) * i as f64 / n as f64;
        if let Ok(v) = x.eval(t) {
            if math::abs(v) > best {
                best = math::abs(v);
                best_t = t;
            }
        }
    }
    let h = (b - a) / n as f64;
    let (tm, neg) = math::golden_min(
        |t| -math::abs(x.eval(t).unwrap_or(0.0)),
        (best_t - h).max(a),
        (best_t + h).min(b),
        1e-12 * (b - a).max(1.0),
    );
    let val = x.eval(tm).unwrap_or(-neg);
    (tm, val)
}

/// Boundedness class relative to the critical semicycle length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BoundednessClass {
    TendsToZero,
    Bounded,
    AboveThreshold,
}

/// Classify an oscillatory trajectory by its largest semicycle length
/// against `Lambda(tau_m)`: below by more than the margin means decay, at
/// the threshold means bounded, above means unbounded solutions exist.
pub fn classify(x: &Trajectory, spec: &DdeSpec, a: f64, b: f64) -> Result<BoundednessClass> {
    // The classification applies to the normalized form.
    let probes = 64;
    for i in 0..probes {
        let t = a + (b - a) * (i as f64 + 0.5) / probes as f64;
        let v = spec.p.eval(t)?;
        if (math::abs(v) - 1.0).abs() > 1e-9 {
            return Err(Error::BadParameter(format!(
                "classification needs |p| = 1 (|p({t})| = {})",
                math::abs(v)
            )));
        }
    }
    let tau_m = spec.tau_m(b);
    if !(tau_m > math::INV_E + tol::TAU_GUARD && tau_m <= 2.0 + 1e-9) {
        return Err(Error::BadParameter(format!(
            "tau_m = {tau_m} outside (1/e, 2]"
        )));
    }
    let rep = semicycles(x, a, b, tau_m)?;
    let lambda = threshold_record(tau_m)?.lambda;
    if rep.alpha < lambda - tol::CLASSIFY_MARGIN {
        Ok(BoundednessClass::TendsToZero)
    } else if rep.alpha <= lambda + tol::CLASSIFY_MARGIN {
        Ok(BoundednessClass::Bounded)
    } else {
        Ok(BoundednessClass::AboveThreshold)
    }
}

/// A threshold-profile problem with the exponential ascent truncated at an
/// adjustable semicycle length `alpha = ascent + rho`. At
/// `alpha = Lambda(tau)` this is the critical profile; shorter ascents decay
/// by a fixed factor per cycle, longer ones grow.
pub fn capped_profile_spec(tau: f64, alpha: f64) -> Result<DdeSpec> {
    let rec = threshold_record(tau)?;
    let comparison = myshkis_solution(tau)?;
    let (rho, xi) = (rec.rho, rec.xi);
    let ascent = alpha - rho;
    if !(ascent > xi + 1e-9) {
        return Err(Error::BadParameter(format!(
            "semicycle length {alpha} leaves no exponential regime (needs > rho + xi)"
        )));
    }
    let mut d_segs: Vec<Segment> = Vec::new();
    let mut p_segs: Vec<Segment> = Vec::new();
    if tau > rho {
        d_segs.push(Segment::constant(0.0, tau - rho, -rho));
    }
    let lag_start = (tau - rho).max(0.0);
    d_segs.push(Segment::affine(lag_start, xi, -tau, 1.0));
    d_segs.push(Segment::affine(xi, ascent, 0.0, 1.0));
    d_segs.push(Segment::constant(ascent, ascent + tau.min(rho), ascent));
    if tau < rho {
        d_segs.push(Segment::affine(ascent + tau, alpha, -tau, 1.0));
    }
    p_segs.push(Segment::constant(0.0, ascent, 1.0));
    p_segs.push(Segment::constant(ascent, alpha, -1.0));

    let delay = crate::dde::DelayFn::with_period(PiecewiseFn::new(d_segs)?, alpha)?;
    let p = PiecewiseFn::new(p_segs)?.with_periodicity(alpha, 1)?;
    // History: the comparison descent ending at t = 0.
    let history = comparison
        .x_tau
        .exact
        .as_ref()
        .unwrap()
        .shifted(-rho)
        .restricted(-rho - tau, 0.0)?;
    Ok(DdeSpec {
        p,
        tau: delay,
        t0: 0.0,
        history,
        unnormalized: false,
        label: format!("capped profile tau={tau} alpha={alpha}"),
    })
}

/// Post-zero envelope violations across a window.
#[derive(Debug, Clone, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnvelopeReport {
    /// Zeros whose lookback window fits inside the trajectory span.
    pub zeros_checked: usize,
    /// Probe points evaluated.
    pub probes: usize,
    /// Worst violation of `|x(t)| <= max over the lookback window` for
    /// `t >= t0` (positive = violated).
    pub max_bound_excess: f64,
    /// Worst violation of the envelope bound `|x(t)| <= M psi(t - t0)`.
    pub max_envelope_excess: f64,
    /// Worst violation of the backward bound
    /// `|x(t)| <= M x_tau(rho - (t0 - t))` on `[t0 - tau_m, t0]`.
    pub max_descent_excess: f64,
}

/// Check the post-zero bounds at every zero of the trajectory in the window:
/// with `M` the largest `|x|` over `[t0 - tau_m - rho, t0]`, the solution
/// never exceeds `M` after `t0`, stays under `M psi_tau(t - t0)`, and under
/// `M x_tau(rho - (t0 - t))` just before `t0`.
pub fn envelope_check(
    x: &Trajectory,
    tau_m: f64,
    a: f64,
    b: f64,
) -> Result<EnvelopeReport> {
    let rec = threshold_record(tau_m)?;
    let comparison = myshkis_solution(tau_m)?;
    let rho = rec.rho;
    let psi = rec.psi.exact.as_ref().unwrap();
    let roots = find_roots(x, a, b)?;
    if roots.degenerate {
        return Ok(EnvelopeReport::default());
    }
    let mut zeros: Vec<f64> = roots.points.clone();
    for &(s, e) in &roots.intervals {
        zeros.push(s);
        zeros.push(e);
    }
    zeros.sort_by(|p, q| p.partial_cmp(q).unwrap());

    let (span_lo, _) = x.span();
    let mut rep = EnvelopeReport::default();
    for &t0 in &zeros {
        let look_lo = t0 - tau_m - rho;
        if look_lo < span_lo.max(a) - 1e-12 {
            continue; // not enough past to form the bound
        }
        rep.zeros_checked += 1;
        let m0 = sup_abs_dense(x, look_lo, t0);
        let slack = 1e-9 * m0 + 1e-12;
        // Forward: |x| <= M and |x| <= M psi(t - t0).
        let (_, span_hi) = x.span();
        let fwd_end = b.min(span_hi);
        let n = 512;
        for i in 1..=n {
            let t = (t0 + (fwd_end - t0) * i as f64 / n as f64).min(fwd_end);
            let v = math::abs(x.eval(t)?);
            rep.probes += 1;
            rep.max_bound_excess = rep.max_bound_excess.max(v - m0 - slack);
            let arg = t - t0;
            let env = if arg <= psi.end() {
                psi.eval(arg)?
            } else {
                continue; // envelope grows without bound past its domain
            };
            rep.max_envelope_excess = rep.max_envelope_excess.max(v - m0 * env - slack);
        }
        // Backward: |x(t)| <= M x_tau(rho - (t0 - t)) on [t0 - tau_m, t0].
        let n_back = 256;
        for i in 0..=n_back {
            let t = t0 - tau_m + tau_m * i as f64 / n_back as f64;
            if t < a || t < span_lo {
                continue;
            }
            let v = math::abs(x.eval(t)?);
            let bound = m0 * comparison.eval(rho - (t0 - t));
            rep.probes += 1;
            rep.max_descent_excess = rep.max_descent_excess.max(v - bound - slack);
        }
    }
    Ok(rep)
}

fn sup_abs_dense(x: &Trajectory, a: f64, b: f64) -> f64 {
    let mut m = x.sup_abs(a, b);
    let n = 1024;
    for i in 0..=n {
        let t = a + (b - a) * i as f64 / n as f64;
        if let Ok(v) = x.eval(t) {
            m = m.max(math::abs(v));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dde::{integrate, IntegrateOpts};
    use crate::periodic::{build, PeriodicKind};

    #[test]
    fn sawtooth_semicycles_have_the_antiperiod_length() {
        let m = build(PeriodicKind::Minus, None).unwrap();
        let rep = semicycles(&m.solution, 0.0, 10.0, 1.5).unwrap();
        assert!(rep.lengths.len() >= 3, "{:?}", rep.lengths);
        for l in &rep.lengths {
            assert!((l - 2.5).abs() < 1e-8, "length {l}");
        }
        assert!((rep.alpha - 2.5).abs() < 1e-8);
    }

    #[test]
    fn plus_semicycles_have_the_antiperiod_length() {
        let p = build(PeriodicKind::Plus, None).unwrap();
        let rep = semicycles(&p.solution, 0.0, 12.0, p.spec.tau_m(12.0)).unwrap();
        let want = 13.0 / 8.0 + math::ln(2.0);
        for l in &rep.lengths {
            assert!((l - want).abs() < 1e-8, "length {l}");
        }
    }

    #[test]
    fn varpi_semicycles_have_period_length() {
        let v = build(PeriodicKind::Varpi, Some(1.5)).unwrap();
        let rep = semicycles(&v.solution, 0.0, 10.0, 1.5).unwrap();
        for l in &rep.lengths {
            assert!((l - v.period).abs() < 1e-7, "length {l} vs {}", v.period);
        }
    }

    #[test]
    fn too_few_zeros_is_an_error() {
        let f = PiecewiseFn::new(alloc::vec![Segment::affine(0.0, 2.0, 1.0, -1.0)]).unwrap();
        let x = Trajectory::from_exact(f, 1e-3, "one zero");
        assert!(matches!(
            semicycles(&x, 0.0, 2.0, 1.0),
            Err(Error::NotOscillatory { .. })
        ));
    }

    #[test]
    fn critical_profile_classifies_as_bounded() {
        let v = build(PeriodicKind::Varpi, Some(1.5)).unwrap();
        let x = integrate(&v.spec, 8.0 * v.period, IntegrateOpts::default()).unwrap();
        let class = classify(&x, &v.spec, 0.0, 8.0 * v.period).unwrap();
        assert_eq!(class, BoundednessClass::Bounded);
    }

    #[test]
    fn subcritical_profile_decays() {
        let tau = 1.0;
        let lambda = crate::threshold::lambda(tau).unwrap();
        let spec = capped_profile_spec(tau, 0.9 * lambda).unwrap();
        let horizon = 12.0 * 0.9 * lambda;
        let x = integrate(&spec, horizon, IntegrateOpts::default()).unwrap();
        let class = classify(&x, &spec, 0.0, horizon).unwrap();
        assert_eq!(class, BoundednessClass::TendsToZero);
        // Window maxima decay.
        let alpha = 0.9 * lambda;
        let mut prev = f64::INFINITY;
        for k in 0..10 {
            let m = sup_abs_dense(&x, k as f64 * alpha, (k + 1) as f64 * alpha);
            assert!(m < prev + 1e-12, "window {k}: {m} vs {prev}");
            prev = m;
        }
        let first = sup_abs_dense(&x, 0.0, alpha);
        let last = sup_abs_dense(&x, 9.0 * alpha, 10.0 * alpha);
        assert!(last < 0.7 * first, "no visible decay: {first} -> {last}");
    }

    #[test]
    fn supercritical_profile_classifies_above_threshold_and_grows() {
        let tau = 1.0;
        let lambda = crate::threshold::lambda(tau).unwrap();
        let alpha = 1.1 * lambda;
        let spec = capped_profile_spec(tau, alpha).unwrap();
        let horizon = 10.0 * alpha;
        let x = integrate(&spec, horizon, IntegrateOpts::default()).unwrap();
        let class = classify(&x, &spec, 0.0, horizon).unwrap();
        assert_eq!(class, BoundednessClass::AboveThreshold);
        // The longer exponential regime grows the amplitude every cycle.
        let first = sup_abs_dense(&x, 0.0, alpha);
        let last = sup_abs_dense(&x, 9.0 * alpha, 10.0 * alpha);
        assert!(last > 2.0 * first, "no growth: {first} -> {last}");
    }

    #[test]
    fn envelope_bounds_hold_for_the_critical_profile() {
        let v = build(PeriodicKind::Varpi, Some(1.2)).unwrap();
        let x = integrate(&v.spec, 10.0 * v.period, IntegrateOpts::default()).unwrap();
        let rep = envelope_check(&x, 1.2, 0.0, 10.0 * v.period).unwrap();
        assert!(rep.zeros_checked >= 5);
        assert!(rep.max_bound_excess <= 0.0, "{}", rep.max_bound_excess);
        assert!(rep.max_envelope_excess <= 0.0, "{}", rep.max_envelope_excess);
        assert!(rep.max_descent_excess <= 0.0, "{}", rep.max_descent_excess);
    }
}
