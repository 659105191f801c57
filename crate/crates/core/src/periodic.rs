//! The special (anti)periodic solutions sitting exactly on the boundedness
//! threshold: the negative-feedback sawtooth, the positive-feedback profile,
//! and the mixed-feedback family with its antiperiodic positive-feedback
//! counterpart.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dde::{integrate, residual, DdeSpec, DelayFn, IntegrateOpts};
use crate::error::{Error, Result};
use crate::math;
use crate::myshkis::myshkis_solution;
use crate::piecewise::{PiecewiseFn, Segment};
use crate::threshold::threshold_record;
use crate::tol;
use crate::trajectory::Trajectory;

/// Which special solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PeriodicKind {
    /// Negative feedback, antiperiod 5/2, largest lag 3/2.
    Minus,
    /// Positive feedback, antiperiod 13/8 + ln 2, largest lag 2 + 3/4 + ln 2.
    Plus,
    /// Mixed feedback, nonnegative, period `Lambda(tau)`.
    Varpi,
    /// Positive feedback, antiperiod `Lambda(tau)`, largest lag
    /// `Lambda(tau) + tau`.
    VarpiTilde,
}

/// A constructed threshold solution together with its defining problem.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PeriodicSolution {
    pub kind: PeriodicKind,
    pub tau: Option<f64>,
    /// Exact solution over one base period, extended by the periodicity rule.
    pub solution: Trajectory,
    pub spec: DdeSpec,
    /// Base period of the extension rule (the antiperiod when `sign = -1`).
    pub period: f64,
    /// `+1` periodic, `-1` antiperiodic.
    pub sign: i8,
}

impl PeriodicSolution {
    /// Full period of the solution values (`2 * period` when antiperiodic).
    pub fn full_period(&self) -> f64 {
        if self.sign == 1 {
            self.period
        } else {
            2.0 * self.period
        }
    }
}

fn push_nonempty(segs: &mut Vec<Segment>, seg: Segment) {
    if seg.right - seg.left > 1e-13 * (1.0 + math::abs(seg.right)) {
        segs.push(seg);
    }
}

/// Build one of the special solutions. `tau` is required (and must lie in
/// `(1/e + guard, 2]`) for the mixed-feedback kinds, ignored otherwise.
pub fn build(kind: PeriodicKind, tau: Option<f64>) -> Result<PeriodicSolution> {
    match kind {
        PeriodicKind::Minus => build_minus(),
        PeriodicKind::Plus => build_plus(),
        PeriodicKind::Varpi | PeriodicKind::VarpiTilde => {
            let tau = tau.ok_or_else(|| {
                Error::BadParameter(String::from("this kind requires a tau parameter"))
            })?;
            if !(tau > math::INV_E + tol::TAU_GUARD && tau <= 2.0 + 1e-12) {
                return Err(Error::BadParameter(format!(
                    "tau = {tau} outside (1/e, 2]"
                )));
            }
            build_varpi_family(kind, tau)
        }
    }
}

fn build_minus() -> Result<PeriodicSolution> {
    let period = 2.5;
    let value = PiecewiseFn::new(vec![
        Segment::affine(0.0, 1.5, 1.0, -1.0),
        // -1/2 - s + s^2/2 in local coordinates s = t - 3/2.
        Segment::poly(1.5, 2.5, vec![-0.5, -1.0, 0.5]),
    ])?
    .with_periodicity(period, -1)?;
    let p = PiecewiseFn::constant(0.0, period, -1.0).with_periodicity(period, 1)?;
    let delay = DelayFn::with_period(
        PiecewiseFn::new(vec![
            Segment::constant(0.0, 1.5, 0.0),
            Segment::affine(1.5, 2.5, -1.5, 1.0),
        ])?,
        period,
    )?;
    finish(PeriodicKind::Minus, None, value, p, delay, period, -1)
}

fn build_plus() -> Result<PeriodicSolution> {
    let ln2 = math::ln(2.0);
    let period = 13.0 / 8.0 + ln2;
    let lag0 = ln2 + 13.0 / 8.0;
    let value = PiecewiseFn::new(vec![
        Segment::affine(0.0, 9.0 / 8.0, 1.0, -1.0),
        // -1/8 - s + s^2/2, s = t - 9/8.
        Segment::poly(9.0 / 8.0, 13.0 / 8.0, vec![-0.125, -1.0, 0.5]),
        Segment::exponential(13.0 / 8.0, period, -0.5, 1.0, 13.0 / 8.0),
    ])?
    .with_periodicity(period, -1)?;
    let p = PiecewiseFn::constant(0.0, period, 1.0).with_periodicity(period, 1)?;
    let delay = DelayFn::with_period(
        PiecewiseFn::new(vec![
            Segment::constant(0.0, 9.0 / 8.0, -lag0),
            Segment::affine(9.0 / 8.0, 13.0 / 8.0, -lag0 - 9.0 / 8.0, 1.0),
            Segment::affine(13.0 / 8.0, period, 0.0, 1.0),
        ])?,
        period,
    )?;
    finish(PeriodicKind::Plus, None, value, p, delay, period, -1)
}

fn build_varpi_family(kind: PeriodicKind, tau: f64) -> Result<PeriodicSolution> {
    let rec = threshold_record(tau)?;
    let comparison = myshkis_solution(tau)?;
    let (rho, lambda, xi) = (rec.rho, rec.lambda, rec.xi);
    let ascent_len = lambda - rho;

    // Values over one period: envelope ascent, then the comparison descent.
    let mut segs: Vec<Segment> = Vec::new();
    let psi_exact = rec
        .psi
        .exact
        .as_ref()
        .ok_or_else(|| Error::Numeric(String::from("envelope lacks exact form")))?;
    for s in psi_exact.restricted(0.0, ascent_len)?.segments() {
        push_nonempty(&mut segs, s.clone());
    }
    let descent = comparison
        .x_tau
        .exact
        .as_ref()
        .unwrap()
        .shifted(ascent_len)
        .restricted(ascent_len, lambda)?;
    for s in descent.segments() {
        push_nonempty(&mut segs, s.clone());
    }
    let sign = if kind == PeriodicKind::Varpi { 1 } else { -1 };
    let value = PiecewiseFn::new(segs)?.with_periodicity(lambda, sign)?;

    // One period of the coefficient and the delay. The antiperiodic variant
    // keeps p = +1 and reaches one extra period into the past wherever the
    // referenced values change sign.
    let tilde = kind == PeriodicKind::VarpiTilde;
    let shift = if tilde { -lambda } else { 0.0 };
    let mut delay_segs: Vec<Segment> = Vec::new();
    if tau > rho {
        // Frozen at the previous maximum while the delayed argument is still
        // in the flat history of the comparison profile.
        push_nonempty(
            &mut delay_segs,
            Segment::constant(0.0, tau - rho, -rho + shift),
        );
    }
    let ascent_lag_start = (tau - rho).max(0.0);
    push_nonempty(
        &mut delay_segs,
        Segment::affine(ascent_lag_start, xi, -tau + shift, 1.0),
    );
    push_nonempty(&mut delay_segs, Segment::affine(xi, ascent_len, 0.0, 1.0));
    push_nonempty(
        &mut delay_segs,
        Segment::constant(ascent_len, ascent_len + tau.min(rho), ascent_len + shift),
    );
    if tau < rho {
        push_nonempty(
            &mut delay_segs,
            Segment::affine(ascent_len + tau, lambda, -tau + shift, 1.0),
        );
    }
    let delay = DelayFn::with_period(PiecewiseFn::new(delay_segs)?, lambda)?;

    let p = if tilde {
        PiecewiseFn::constant(0.0, lambda, 1.0).with_periodicity(lambda, 1)?
    } else {
        PiecewiseFn::new(vec![
            Segment::constant(0.0, ascent_len, 1.0),
            Segment::constant(ascent_len, lambda, -1.0),
        ])?
        .with_periodicity(lambda, 1)?
    };
    finish(kind, Some(tau), value, p, delay, lambda, sign)
}

fn finish(
    kind: PeriodicKind,
    tau: Option<f64>,
    value: PiecewiseFn,
    p: PiecewiseFn,
    delay: DelayFn,
    period: f64,
    sign: i8,
) -> Result<PeriodicSolution> {
    let label = match kind {
        PeriodicKind::Minus => String::from("minus"),
        PeriodicKind::Plus => String::from("plus"),
        PeriodicKind::Varpi => format!("varpi:{}", tau.unwrap()),
        PeriodicKind::VarpiTilde => format!("varpi_tilde:{}", tau.unwrap()),
    };
    let spec = DdeSpec {
        p,
        tau: delay,
        t0: 0.0,
        history: value.clone(),
        unnormalized: false,
        label,
    };
    let solution = Trajectory::from_exact(value, tol::GRID_STEP.max(period / 100_000.0), &spec.label);
    Ok(PeriodicSolution {
        kind,
        tau,
        solution,
        spec,
        period,
        sign,
    })
}

/// Rotate a periodic base function left by `sigma`: the result represents
/// `t -> f(t - sigma)` on the same base window `[0, period]`. When
/// `shift_values` is set, segment values are treated as time points and move
/// with the rotation (the delay-function shift rule).
fn rotate_periodic(
    base: &PiecewiseFn,
    sigma: f64,
    period: f64,
    shift_values: bool,
) -> Result<PiecewiseFn> {
    let offset_kind = |seg: &Segment, off: f64| -> Segment {
        if !shift_values {
            return seg.clone();
        }
        let mut c = seg.clone();
        c.kind = match &seg.kind {
            crate::piecewise::SegmentKind::Constant { value } => {
                crate::piecewise::SegmentKind::Constant { value: value + off }
            }
            crate::piecewise::SegmentKind::Affine { a, b } => {
                crate::piecewise::SegmentKind::Affine { a: a + off, b: *b }
            }
            other => other.clone(),
        };
        c
    };
    let mut segs: Vec<Segment> = Vec::new();
    // Tail of the previous period covers [0, sigma).
    for s in base.segments() {
        let moved = offset_kind(s, sigma - period).shifted(sigma - period);
        if moved.right > 1e-13 && moved.left < sigma - 1e-13 {
            segs.push(moved);
        }
    }
    for s in base.segments() {
        let moved = offset_kind(s, sigma).shifted(sigma);
        if moved.right > sigma + 1e-13 && moved.left < period - 1e-13 {
            segs.push(moved);
        }
    }
    // Clip to [0, period].
    let mut clipped: Vec<Segment> = Vec::new();
    for mut s in segs {
        if s.right <= 1e-13 || s.left >= period - 1e-13 {
            continue;
        }
        if s.left < 0.0 {
            if let crate::piecewise::SegmentKind::Polynomial { coeffs } = &s.kind {
                s.kind = crate::piecewise::SegmentKind::Polynomial {
                    coeffs: crate::piecewise::poly_compose_affine(coeffs, 1.0, -s.left),
                };
            }
            s.left = 0.0;
        }
        if s.right > period {
            s.right = period;
        }
        clipped.push(s);
    }
    clipped.sort_by(|a, b| a.left.partial_cmp(&b.left).unwrap());
    PiecewiseFn::new(clipped)
}

/// The problem whose solution is `scale * profile(t - sigma)`: coefficient
/// and delay rotated by the phase, history scaled accordingly.
pub fn shifted_profile_spec(
    sol: &PeriodicSolution,
    sigma: f64,
    scale: f64,
) -> Result<DdeSpec> {
    let period = sol.period;
    let sigma = math::rem_euclid(sigma, period);
    if sigma == 0.0 {
        let mut spec = sol.spec.clone();
        spec.history = spec.history.scaled(scale);
        return Ok(spec);
    }
    let p_rot = rotate_periodic(&strip_periodicity(&sol.spec.p), sigma, period, false)?
        .with_periodicity(period, sol.spec.p.periodicity.map(|p| p.sign).unwrap_or(1))?;
    let d_rot = DelayFn::with_period(
        rotate_periodic(&sol.spec.tau.base, sigma, period, true)?,
        period,
    )?;
    let history = sol
        .solution
        .exact
        .as_ref()
        .ok_or_else(|| Error::Numeric(String::from("profile lacks exact form")))?
        .shifted(sigma)
        .scaled(scale);
    Ok(DdeSpec {
        p: p_rot,
        tau: d_rot,
        t0: 0.0,
        history,
        unnormalized: false,
        label: format!("{} shifted {sigma} scaled {scale}", sol.spec.label),
    })
}

fn strip_periodicity(f: &PiecewiseFn) -> PiecewiseFn {
    let mut g = f.clone();
    g.periodicity = None;
    g
}

/// Verification report for a constructed solution.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerifyReport {
    /// Residual of the built profile in its own equation, off breakpoints.
    pub residual: f64,
    /// `sup |x(t + P) - sign x(t)|` of a trajectory re-integrated from the
    /// history over three periods.
    pub periodicity_defect: f64,
    /// Sup distance between the re-integrated trajectory and the built one.
    pub reintegration_error: f64,
    /// Most negative value over a period (mixed-feedback kind only).
    pub min_value: Option<f64>,
}

/// Residual, true periodicity defect (via re-integration), and the
/// nonnegativity check for the mixed-feedback kind.
pub fn verify(sol: &PeriodicSolution) -> Result<VerifyReport> {
    let horizon = 3.0 * sol.full_period();
    let x = integrate(&sol.spec, horizon, IntegrateOpts::default())?;
    let res = residual(&x, &sol.spec, 1e-3)?;

    let p_full = sol.full_period();
    let n = 4096;
    let mut defect: f64 = 0.0;
    let mut reint: f64 = 0.0;
    for i in 0..=n {
        let t = (horizon - p_full) * i as f64 / n as f64;
        let a = x.eval(t)?;
        let b = x.eval(t + sol.period)?;
        let s = if sol.sign == 1 { 1.0 } else { -1.0 };
        defect = defect.max(math::abs(b - s * a));
        reint = reint.max(math::abs(a - sol.solution.eval(t)?));
    }
    let min_value = if sol.kind == PeriodicKind::Varpi {
        let mut m = f64::INFINITY;
        for i in 0..=n {
            let t = sol.period * i as f64 / n as f64;
            m = m.min(sol.solution.eval(t)?);
        }
        Some(m)
    } else {
        None
    };
    Ok(VerifyReport {
        residual: res,
        periodicity_defect: defect,
        reintegration_error: reint,
        min_value,
    })
}

fn full_period_of(x: &Trajectory) -> Result<f64> {
    let f = x
        .exact
        .as_ref()
        .ok_or_else(|| Error::BadParameter(String::from("need an exact periodic trajectory")))?;
    let p = f
        .periodicity
        .ok_or_else(|| Error::BadParameter(String::from("trajectory is not periodic")))?;
    Ok(if p.sign == 1 { p.period } else { 2.0 * p.period })
}

/// Best time shift aligning two periodic trajectories: minimises
/// `sup_t |a(t) - b(t + shift)|` over one common period by a coarse scan
/// (step `period/1000`) refined by golden-section search. Periods must be
/// commensurate (small integer ratio).
pub fn shift_equivalence(a: &Trajectory, b: &Trajectory) -> Result<(f64, f64)> {
    let pa = full_period_of(a)?;
    let pb = full_period_of(b)?;
    // Common period: smallest m*pa = n*pb within tolerance.
    let mut common = None;
    'outer: for m in 1..=64u32 {
        for n in 1..=64u32 {
            let ca = pa * m as f64;
            let cb = pb * n as f64;
            if math::abs(ca - cb) <= tol::PERIOD_MATCH * ca.max(cb) {
                common = Some(ca);
                break 'outer;
            }
        }
    }
    let Some(common) = common else {
        return Err(Error::PeriodMismatch { a: pa, b: pb });
    };

    let n_grid = 2048usize;
    let distance = |shift: f64| -> f64 {
        let mut sup: f64 = 0.0;
        for i in 0..n_grid {
            let t = common * i as f64 / n_grid as f64;
            let va = a.eval(t).unwrap_or(f64::NAN);
            let vb = b.eval(t + shift).unwrap_or(f64::NAN);
            sup = sup.max(math::abs(va - vb));
        }
        sup
    };
    let coarse = 1000usize;
    let mut best = (0usize, f64::INFINITY);
    for k in 0..coarse {
        let s = common * k as f64 / coarse as f64;
        let d = distance(s);
        if d < best.1 {
            best = (k, d);
        }
    }
    let step = common / coarse as f64;
    let centre = common * best.0 as f64 / coarse as f64;
    let (mut s_opt, mut d_opt) = math::golden_min(distance, centre - step, centre + step, 1e-12);
    if d_opt > best.1 {
        s_opt = centre;
        d_opt = best.1;
    }
    let mut s_norm = s_opt % common;
    if s_norm < 0.0 {
        s_norm += common;
    }
    Ok((s_norm, d_opt))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minus_profile_values() {
        let m = build(PeriodicKind::Minus, None).unwrap();
        let x = &m.solution;
        assert_eq!(x.eval(0.0).unwrap(), 1.0);
        assert_eq!(x.eval(1.0).unwrap(), 0.0);
        assert!((x.eval(1.5).unwrap() + 0.5).abs() < 1e-15);
        assert!((x.eval(2.5).unwrap() + 1.0).abs() < 1e-15);
        assert!((m.spec.tau_m(2.5) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn minus_verifies() {
        let m = build(PeriodicKind::Minus, None).unwrap();
        let rep = verify(&m).unwrap();
        assert!(rep.residual <= 1e-9, "residual = {}", rep.residual);
        assert!(rep.periodicity_defect <= 1e-10, "defect = {}", rep.periodicity_defect);
        assert!(rep.reintegration_error <= 1e-10);
    }

    #[test]
    fn plus_profile_values() {
        let p = build(PeriodicKind::Plus, None).unwrap();
        let x = &p.solution;
        let ln2 = math::ln(2.0);
        assert!((x.eval(13.0 / 8.0).unwrap() + 0.5).abs() < 1e-15);
        assert!((x.eval(13.0 / 8.0 + ln2).unwrap() + 1.0).abs() < 1e-14);
        // Largest lag 2 + 3/4 + ln 2.
        assert!((p.spec.tau_m(p.period) - (2.75 + ln2)).abs() < 1e-12);
        let rep = verify(&p).unwrap();
        assert!(rep.residual <= 1e-9, "residual = {}", rep.residual);
        assert!(rep.periodicity_defect <= 1e-10);
    }

    #[test]
    fn varpi_two_is_the_triangle_wave() {
        let v = build(PeriodicKind::Varpi, Some(2.0)).unwrap();
        assert!((v.period - 2.0).abs() < 1e-9);
        let x = &v.solution;
        assert!((x.eval(1.0).unwrap() - 1.0).abs() < 1e-12);
        // Max 1 attained at t = 1.
        for i in 0..=100 {
            let t = 2.0 * i as f64 / 100.0;
            assert!(x.eval(t).unwrap() <= 1.0 + 1e-12);
        }
        let rep = verify(&v).unwrap();
        assert!(rep.residual <= 1e-9);
        assert!(rep.periodicity_defect <= 1e-10);
    }

    #[test]
    fn varpi_nonnegative_with_zeros_at_period_multiples() {
        let tau = 1.5;
        let v = build(PeriodicKind::Varpi, Some(tau)).unwrap();
        let rep = verify(&v).unwrap();
        assert!(rep.residual <= 1e-9, "residual = {}", rep.residual);
        assert!(rep.min_value.unwrap() >= -1e-12);
        // Root scan over [0, 10]: zeros exactly at multiples of the period.
        let roots = crate::trajectory::find_roots(&v.solution, 0.0, 10.0).unwrap();
        let lambda = v.period;
        for r in &roots.points {
            let k = (r / lambda + 0.5).floor();
            assert!((r - k * lambda).abs() < 1e-8, "root {r} not at a multiple of {lambda}");
        }
        assert_eq!(roots.points.len(), 5, "{:?}", roots.points);
    }

    #[test]
    fn varpi_descent_matches_comparison_solution() {
        for &tau in &[0.5, 1.0, 1.5] {
            let v = build(PeriodicKind::Varpi, Some(tau)).unwrap();
            let rec = myshkis_solution(tau).unwrap();
            let lambda = v.period;
            let start = lambda - rec.rho;
            for i in 0..=200 {
                let t = start + rec.rho * i as f64 / 200.0;
                let got = v.solution.eval(t).unwrap();
                let expect = rec.eval(t - start);
                assert!((got - expect).abs() < 1e-9, "tau = {tau}, t = {t}");
            }
        }
    }

    #[test]
    fn varpi_derivative_separated_from_zero() {
        for &tau in &[0.8, 1.5] {
            let v = build(PeriodicKind::Varpi, Some(tau)).unwrap();
            let f = v.solution.exact.as_ref().unwrap();
            let mut min_abs = f64::INFINITY;
            for i in 0..2000 {
                let t = v.period * (i as f64 + 0.5) / 2000.0;
                min_abs = min_abs.min(math::abs(f.derivative(t).unwrap()));
            }
            assert!(min_abs > 1e-3, "tau = {tau}: min |x'| = {min_abs}");
        }
    }

    #[test]
    fn varpi_tilde_antiperiodic_positive_feedback() {
        for &tau in &[1.0, 1.125, 1.5] {
            let v = build(PeriodicKind::VarpiTilde, Some(tau)).unwrap();
            assert_eq!(v.sign, -1);
            let rep = verify(&v).unwrap();
            assert!(rep.residual <= 1e-9, "tau = {tau}: residual = {}", rep.residual);
            assert!(rep.periodicity_defect <= 1e-9, "tau = {tau}: defect = {}", rep.periodicity_defect);
            // Largest lag: period + tau.
            let want = 2.0 + 2.0 * tau - math::sqrt(2.0 * tau) - math::ln(math::sqrt(2.0 * tau) - 1.0);
            let got = v.spec.tau_m(v.period);
            assert!((got - want).abs() < 1e-9, "tau = {tau}: lag {got} vs {want}");
        }
    }

    #[test]
    fn reintegrating_varpi_spec_reproduces_it() {
        // Method-of-steps over three periods stays on the profile.
        let v = build(PeriodicKind::Varpi, Some(2.0)).unwrap();
        let x = integrate(&v.spec, 6.0, IntegrateOpts::default()).unwrap();
        let mut sup: f64 = 0.0;
        for i in 0..=600 {
            let t = 6.0 * i as f64 / 600.0;
            sup = sup.max((x.eval(t).unwrap() - v.solution.eval(t).unwrap()).abs());
        }
        assert!(sup <= 1e-9, "sup error = {sup}");
    }

    #[test]
    fn broken_profile_has_large_residual() {
        // Steepen the first descent segment of the positive-feedback profile
        // by 10%: the defining equation is violated by a visible margin.
        let p = build(PeriodicKind::Plus, None).unwrap();
        let exact = p.solution.exact.as_ref().unwrap();
        let mut segs: Vec<Segment> = exact.segments().to_vec();
        segs[0] = Segment::affine(segs[0].left, segs[0].right, 1.0, -1.1);
        let broken = PiecewiseFn::new(segs)
            .unwrap()
            .with_periodicity(p.period, -1)
            .unwrap();
        let traj = Trajectory::from_exact(broken, 1e-3, "broken");
        let r = residual(&traj, &p.spec, 1e-3).unwrap();
        assert!(r >= 0.05, "residual = {r}");
    }

    #[test]
    fn shift_recovers_translation() {
        let m = build(PeriodicKind::Minus, None).unwrap();
        let shifted = Trajectory::from_exact(
            m.solution.exact.as_ref().unwrap().shifted(0.7),
            1e-3,
            "shifted",
        );
        let (s, d) = shift_equivalence(&m.solution, &shifted).unwrap();
        assert!((s - 0.7).abs() < 1e-9, "shift = {s}");
        assert!(d <= 1e-10, "distance = {d}");
    }

    #[test]
    fn plus_equals_varpi_tilde_nine_eighths_up_to_translation() {
        let p = build(PeriodicKind::Plus, None).unwrap();
        let vt = build(PeriodicKind::VarpiTilde, Some(1.125)).unwrap();
        let (_, d) = shift_equivalence(&p.solution, &vt.solution).unwrap();
        assert!(d <= 1e-8, "distance = {d}");
    }

    #[test]
    fn minus_and_varpi_two_are_not_equivalent() {
        let m = build(PeriodicKind::Minus, None).unwrap();
        let v2 = build(PeriodicKind::Varpi, Some(2.0)).unwrap();
        let (_, d) = shift_equivalence(&m.solution, &v2.solution).unwrap();
        assert!(d > 0.1, "distance = {d}");
    }

    #[test]
    fn requires_tau_in_range() {
        assert!(build(PeriodicKind::Varpi, None).is_err());
        assert!(build(PeriodicKind::Varpi, Some(0.2)).is_err());
        assert!(build(PeriodicKind::Varpi, Some(2.5)).is_err());
    }
}
