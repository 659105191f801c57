//! Method-of-steps integration of `x'(t) = p(t) x(tau(t))`.
//!
//! The integrator partitions time by the union of breakpoints of `p`, `tau`,
//! and the preimages of already-known solution breakpoints under `tau`, so
//! that on each cell the right side is a single closed form. Cells where
//! `tau(t) = t` are local linear ODEs and are solved as exact exponential
//! flows rather than by quadrature. Exact mode fails over to a dense
//! predictor-corrector grid for right sides outside the segment algebra.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::piecewise::{poly_add, poly_antiderivative, poly_compose_affine, poly_mul};
use crate::piecewise::{PiecewiseFn, Segment, SegmentKind};
use crate::tol;
use crate::trajectory::Trajectory;

/// Delay function `tau` with affine segments, optionally extended by the
/// shift rule `tau(t + period) = tau(t) + period`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DelayFn {
    pub base: PiecewiseFn,
    pub period: Option<f64>,
}

impl DelayFn {
    pub fn new(base: PiecewiseFn) -> Result<Self> {
        let d = DelayFn { base, period: None };
        d.validate()?;
        Ok(d)
    }

    pub fn with_period(base: PiecewiseFn, period: f64) -> Result<Self> {
        if !(period > 0.0) {
            return Err(Error::InvalidSpec(String::from("delay period must be > 0")));
        }
        let d = DelayFn {
            base,
            period: Some(period),
        };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        for seg in self.base.segments() {
            match seg.kind {
                SegmentKind::Constant { .. } | SegmentKind::Affine { .. } => {}
                _ => {
                    return Err(Error::InvalidSpec(String::from(
                        "delay segments must be constant or affine",
                    )))
                }
            }
            // tau(t) <= t on the whole segment: affine vs identity, so it
            // suffices to check both endpoints.
            let slack = 1e-9 * (1.0 + math::abs(seg.right));
            if seg.eval(seg.left) > seg.left + slack || seg.eval(seg.right) > seg.right + slack {
                return Err(Error::InvariantViolation(format!(
                    "tau(t) > t on segment [{}, {}]",
                    seg.left, seg.right
                )));
            }
        }
        Ok(())
    }

    /// Affine representation `tau(t) = m t + q` valid near `t` (right-limit
    /// convention at breakpoints), after periodic reduction.
    pub fn piece_at(&self, t: f64) -> Result<(f64, f64)> {
        let (tr, shift) = self.reduce(t)?;
        let idx = self
            .base
            .segments()
            .partition_point(|s| s.right <= tr)
            .min(self.base.segments().len() - 1);
        let seg = &self.base.segments()[idx];
        let (m, q) = match seg.kind {
            SegmentKind::Constant { value } => (0.0, value),
            SegmentKind::Affine { a, b } => (b, a),
            _ => unreachable!("validated"),
        };
        // tau(t) = m (t - shift) + q + shift
        Ok((m, q + shift * (1.0 - m)))
    }

    fn reduce(&self, t: f64) -> Result<(f64, f64)> {
        let (start, end) = (self.base.start(), self.base.end());
        if t >= start && t <= end {
            return Ok((t, 0.0));
        }
        let Some(p) = self.period else {
            return Err(Error::OutOfDomain { t, start, end });
        };
        let k = math::floor((t - start) / p);
        let mut tr = t - k * p;
        if tr < start {
            tr = start;
        }
        if tr > end {
            tr = end;
        }
        Ok((tr, k * p))
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let (m, q) = self.piece_at(t)?;
        Ok(m * t + q)
    }

    /// Breakpoints of the delay inside `(a, b)`, unrolled over periods.
    pub fn breakpoints_in(&self, a: f64, b: f64) -> Vec<f64> {
        unroll_breakpoints(&self.base.breakpoints(), self.base.start(), self.period, a, b)
    }

    /// Largest lag `t - tau(t)` over `[a, b]`.
    pub fn max_lag(&self, a: f64, b: f64) -> f64 {
        let mut pts = self.breakpoints_in(a, b);
        pts.push(a);
        pts.push(b);
        let mut m: f64 = 0.0;
        for &t in &pts {
            if let Ok(v) = self.eval(t.clamp(a, b)) {
                m = m.max(t.clamp(a, b) - v);
            }
            // Just right of each breakpoint, for jump discontinuities.
            let tr = (t + 1e-12 * (1.0 + math::abs(t))).clamp(a, b);
            if let Ok(v) = self.eval(tr) {
                m = m.max(tr - v);
            }
        }
        m
    }

    /// Smallest delayed argument over `[a, b]`.
    pub fn min_image(&self, a: f64, b: f64) -> f64 {
        let mut pts = self.breakpoints_in(a, b);
        pts.push(a);
        pts.push(b);
        let mut m = f64::INFINITY;
        for &t in &pts {
            let tc = t.clamp(a, b);
            if let Ok(v) = self.eval(tc) {
                m = m.min(v);
            }
            let tr = (tc + 1e-12 * (1.0 + math::abs(tc))).clamp(a, b);
            if let Ok(v) = self.eval(tr) {
                m = m.min(v);
            }
        }
        m
    }
}

fn unroll_breakpoints(
    base: &[f64],
    base_start: f64,
    period: Option<f64>,
    a: f64,
    b: f64,
) -> Vec<f64> {
    let mut out = Vec::new();
    match period {
        None => {
            for &t in base {
                if t > a && t < b {
                    out.push(t);
                }
            }
        }
        Some(p) => {
            let k0 = math::floor((a - base_start) / p) - 1.0;
            let k1 = math::floor((b - base_start) / p) + 1.0;
            let mut k = k0;
            while k <= k1 {
                for &t in base {
                    let u = t + k * p;
                    if u > a && u < b {
                        out.push(u);
                    }
                }
                k += 1.0;
            }
        }
    }
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    crate::piecewise::dedup_points(&mut out, 1e-12 * (b - a).max(1.0));
    out
}

/// A problem instance: coefficient, delay, initial point, history.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DdeSpec {
    pub p: PiecewiseFn,
    pub tau: DelayFn,
    pub t0: f64,
    /// History on `[inf tau, t0]`; may carry its own periodic extension.
    pub history: PiecewiseFn,
    /// When set, `|p| <= 1` is not required (pre-rescaling form).
    #[cfg_attr(feature = "serde", serde(default))]
    pub unnormalized: bool,
    /// Identifier carried into trajectory metadata.
    #[cfg_attr(feature = "serde", serde(default))]
    pub label: String,
}

impl DdeSpec {
    /// Validate against an integration horizon.
    pub fn validate(&self, t_end: f64) -> Result<()> {
        if !(t_end > self.t0) {
            return Err(Error::BadParameter(format!(
                "t_end = {t_end} must exceed t0 = {}",
                self.t0
            )));
        }
        // Coefficient magnitude bound (normalized form).
        if !self.unnormalized {
            let bps = unroll_breakpoints(
                &self.p.breakpoints(),
                self.p.start(),
                self.p.periodicity.map(|p| p.period),
                self.t0,
                t_end,
            );
            let mut probes = bps.clone();
            probes.push(self.t0);
            probes.push(t_end);
            for w in probes.windows(2) {
                let mid = 0.5 * (w[0] + w[1]);
                if let Ok(v) = self.p.eval(mid) {
                    if math::abs(v) > 1.0 + 1e-9 {
                        return Err(Error::InvalidSpec(format!(
                            "|p({mid})| = {} exceeds 1 on a normalized spec",
                            math::abs(v)
                        )));
                    }
                }
            }
        }
        // History must cover the delay image.
        let lo = self.tau.min_image(self.t0, t_end);
        if lo < self.t0 {
            let hist_lo = if self.history.periodicity.is_some() {
                f64::NEG_INFINITY
            } else {
                self.history.start()
            };
            if lo < hist_lo - 1e-9 {
                return Err(Error::InvalidSpec(format!(
                    "delay image reaches {lo} before history start {hist_lo}"
                )));
            }
        }
        Ok(())
    }

    /// Largest lag over `[t0, t_end]`.
    pub fn tau_m(&self, t_end: f64) -> f64 {
        self.tau.max_lag(self.t0, t_end)
    }
}

/// Integration mode: exact closed-form cells, dense grid, or exact with
/// automatic fallback.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Grid,
    Auto,
}

/// Integration options.
#[derive(Debug, Clone, Copy)]
pub struct IntegrateOpts {
    /// Output/grid step.
    pub step: f64,
    pub mode: Mode,
}

impl Default for IntegrateOpts {
    fn default() -> Self {
        IntegrateOpts {
            step: tol::GRID_STEP,
            mode: Mode::Auto,
        }
    }
}

struct Known<'a> {
    hist: &'a PiecewiseFn,
    t0: f64,
    segs: Vec<Segment>,
}

impl<'a> Known<'a> {
    /// The single closed-form segment covering `v` (history segments are
    /// materialised through periodic reduction when needed).
    fn segment_covering(&self, v_lo: f64, v_hi: f64) -> Result<Segment> {
        let mid = 0.5 * (v_lo + v_hi);
        if mid <= self.t0 {
            // Locate the history segment after periodic reduction.
            let (vr, sign) = self.hist.reduce(mid)?;
            let segs = self.hist.segments();
            let idx = segs.partition_point(|s| s.right <= vr).min(segs.len() - 1);
            let shift = mid - vr;
            let seg = segs[idx].shifted(shift).scaled(sign);
            Ok(seg)
        } else {
            let idx = self.segs.partition_point(|s| s.right <= mid);
            let idx = idx.min(self.segs.len().saturating_sub(1));
            if self.segs.is_empty() {
                return Err(Error::OutOfDomain {
                    t: mid,
                    start: self.t0,
                    end: self.t0,
                });
            }
            Ok(self.segs[idx].clone())
        }
    }

    /// Breakpoints of the known solution inside the open interval `(a, b)`.
    fn breakpoints_in(&self, a: f64, b: f64) -> Vec<f64> {
        let mut out = Vec::new();
        if a < self.t0 {
            let hist_bps = unroll_breakpoints(
                &self.hist.breakpoints(),
                self.hist.start(),
                self.hist.periodicity.map(|p| p.period),
                a,
                b.min(self.t0),
            );
            out.extend(hist_bps);
            if self.t0 > a && self.t0 < b {
                out.push(self.t0);
            }
        }
        // Computed segments are ordered; scan only those touching (a, b).
        let start_idx = self.segs.partition_point(|s| s.right <= a);
        for s in &self.segs[start_idx..] {
            if s.left >= b {
                break;
            }
            if s.right > a && s.right < b {
                out.push(s.right);
            }
            if s.left > a && s.left < b {
                out.push(s.left);
            }
        }
        out.sort_by(|x, y| x.partial_cmp(y).unwrap());
        crate::piecewise::dedup_points(&mut out, 1e-13 * (b - a).max(1.0));
        out
    }
}

/// Product of a coefficient segment and a delayed-value segment, when the
/// result stays inside the segment algebra.
fn mul_kinds(p: &Segment, x: &Segment, left: f64) -> Option<SegmentKind> {
    use SegmentKind::*;
    let scale_of = |s: &Segment| match s.kind {
        Constant { value } => Some(value),
        _ => None,
    };
    if let Some(c) = scale_of(p) {
        return Some(x.scaled(c).kind);
    }
    if let Some(c) = scale_of(x) {
        return Some(p.scaled(c).kind);
    }
    // Both non-constant: polynomial algebra only.
    let pl = p.as_local_poly()?;
    let xl = x.as_local_poly()?;
    // Re-anchor both to `left`.
    let pa = poly_compose_affine(&pl, 1.0, left - p.left);
    let xa = poly_compose_affine(&xl, 1.0, left - x.left);
    Some(Polynomial {
        coeffs: poly_mul(&pa, &xa),
    })
}

/// Integrate the right-side segment from `left` with initial value `x0`,
/// producing a solution segment on `[left, right]`.
fn solution_segment(rhs: &SegmentKind, left: f64, right: f64, x0: f64) -> Option<Segment> {
    match rhs {
        SegmentKind::Constant { value } => {
            Some(Segment::poly(left, right, vec![x0, *value]))
        }
        SegmentKind::Affine { a, b } => {
            Some(Segment::poly(left, right, vec![x0, a + b * left, 0.5 * b]))
        }
        SegmentKind::Polynomial { coeffs } => {
            // coeffs are local to `left` by construction in this module.
            let mut anti = poly_antiderivative(coeffs);
            anti = poly_add(&anti, &[x0]);
            Some(Segment::poly(left, right, anti))
        }
        SegmentKind::Exponential { coeff, rate, t_ref } => {
            if *rate == 0.0 {
                return Some(Segment::poly(left, right, vec![x0, *coeff]));
            }
            let c = coeff / rate;
            let offset = x0 - c * math::exp(rate * (left - t_ref));
            let scale = math::abs(x0).max(math::abs(c));
            if math::abs(offset) <= 1e-12 * scale.max(1e-300) {
                Some(Segment::exponential(left, right, c, *rate, *t_ref))
            } else {
                None // offset exponential: outside the segment algebra
            }
        }
    }
}

/// Forward integration by the method of steps.
///
/// Exact mode produces a trajectory whose `exact` field tiles `[t0, t_end]`
/// with closed-form segments; `Auto` falls back to the grid scheme when a
/// right side leaves the segment algebra.
pub fn integrate(spec: &DdeSpec, t_end: f64, opts: IntegrateOpts) -> Result<Trajectory> {
    spec.validate(t_end)?;
    match opts.mode {
        Mode::Grid => integrate_grid(spec, t_end, opts.step),
        Mode::Exact => integrate_exact(spec, t_end, opts.step),
        Mode::Auto => match integrate_exact(spec, t_end, opts.step) {
            Ok(t) => Ok(t),
            Err(Error::Numeric(_)) => integrate_grid(spec, t_end, opts.step),
            Err(e) => Err(e),
        },
    }
}

fn integrate_exact(spec: &DdeSpec, t_end: f64, step: f64) -> Result<Trajectory> {
    let t0 = spec.t0;
    let time_scale = (t_end - t0).max(1.0);
    let eps = 1e-13 * time_scale;

    // Global events: breakpoints of p and tau over the horizon.
    let mut events = unroll_breakpoints(
        &spec.p.breakpoints(),
        spec.p.start(),
        spec.p.periodicity.map(|p| p.period),
        t0,
        t_end,
    );
    events.extend(spec.tau.breakpoints_in(t0, t_end));
    events.push(t_end);
    events.sort_by(|x, y| x.partial_cmp(y).unwrap());
    crate::piecewise::dedup_points(&mut events, eps);

    let mut known = Known {
        hist: &spec.history,
        t0,
        segs: Vec::new(),
    };
    let mut x_cur = spec.history.eval(t0)?;
    let mut t_cur = t0;
    let mut guard = 0usize;

    while t_cur < t_end - eps {
        guard += 1;
        if guard > 10_000_000 {
            return Err(Error::Numeric(String::from(
                "exact integration exceeded the cell budget",
            )));
        }
        let next_event = events
            .iter()
            .copied()
            .find(|&e| e > t_cur + eps)
            .unwrap_or(t_end);
        // Select the active pieces from the cell midpoint: slivers narrower
        // than the event tolerance are absorbed into their neighbours
        // (measure-zero effect on an absolutely continuous solution).
        let probe = 0.5 * (t_cur + next_event.min(t_end));
        let (m, q) = spec.tau.piece_at(probe)?;
        if spec.tau.eval(probe)? > probe + 1e-9 * (1.0 + math::abs(probe)) {
            return Err(Error::InvariantViolation(format!(
                "tau({probe}) exceeds t during integration"
            )));
        }
        let identity_delay = math::abs(m - 1.0) <= 1e-14 && math::abs(q) <= eps;
        let mut cell_end = next_event.min(t_end);

        if identity_delay {
            // Local ODE x' = p(t) x; exact exponential flow for constant p.
            let p_seg = p_segment_at(spec, probe)?;
            let SegmentKind::Constant { value: c } = p_seg.kind else {
                return Err(Error::Numeric(String::from(
                    "non-constant coefficient on an undelayed cell",
                )));
            };
            let seg = if c == 0.0 || x_cur == 0.0 {
                Segment::constant(t_cur, cell_end, x_cur)
            } else {
                Segment::exponential(t_cur, cell_end, x_cur, c, t_cur)
            };
            x_cur = seg.eval(cell_end);
            known.segs.push(seg);
            t_cur = cell_end;
            continue;
        }

        // Advance at most to where the delayed argument catches up with the
        // known front.
        if m > 0.0 {
            let tau_end = m * cell_end + q;
            if tau_end > t_cur + eps {
                let catch = (t_cur - q) / m;
                if catch > t_cur + eps {
                    cell_end = cell_end.min(catch);
                } else {
                    return Err(Error::Numeric(format!(
                        "vanishing lag at t = {t_cur} stalls the method of steps"
                    )));
                }
            }
        }

        // Split the cell by preimages of known breakpoints under tau.
        let (tau_a, tau_b) = (m * t_cur + q, m * cell_end + q);
        let (v_lo, v_hi) = if tau_a <= tau_b {
            (tau_a, tau_b)
        } else {
            (tau_b, tau_a)
        };
        let mut cuts = vec![t_cur, cell_end];
        if m != 0.0 {
            for b in known.breakpoints_in(v_lo - eps, v_hi + eps) {
                let s = (b - q) / m;
                if s > t_cur + eps && s < cell_end - eps {
                    cuts.push(s);
                }
            }
        }
        cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        crate::piecewise::dedup_points(&mut cuts, eps);

        let p_seg = p_segment_at(spec, probe)?;
        for w in cuts.windows(2) {
            let (s0, s1) = (w[0], w[1]);
            if s1 - s0 <= eps {
                continue;
            }
            let smid = 0.5 * (s0 + s1);
            let (va, vb) = (m * s0 + q, m * s1 + q);
            let (vlo, vhi) = if va <= vb { (va, vb) } else { (vb, va) };
            let src = known.segment_covering(vlo, vhi)?;
            if vlo < spec_history_floor(spec) - 1e-9 {
                return Err(Error::InvalidSpec(format!(
                    "delay image {vlo} precedes the history start"
                )));
            }
            let xseg = src.compose_affine(m, q, s0, s1);
            let Some(rhs) = mul_kinds(&p_seg, &xseg, s0) else {
                return Err(Error::Numeric(String::from(
                    "right side left the exact segment algebra",
                )));
            };
            let Some(seg) = solution_segment(&rhs, s0, s1, x_cur) else {
                return Err(Error::Numeric(String::from(
                    "right side left the exact segment algebra",
                )));
            };
            debug_assert!(smid > s0 && smid < s1);
            x_cur = seg.eval(s1);
            known.segs.push(seg);
        }
        t_cur = cell_end;
    }

    let exact = PiecewiseFn::new(known.segs)?;
    let mut traj = Trajectory::from_exact(exact, step, &spec.label);
    traj.meta = spec.label.clone();
    Ok(traj)
}

fn spec_history_floor(spec: &DdeSpec) -> f64 {
    if spec.history.periodicity.is_some() {
        f64::NEG_INFINITY
    } else {
        spec.history.start()
    }
}

/// The coefficient as a single segment valid around `probe` (global events
/// guarantee no wide `p` piece boundary strictly inside the current cell).
fn p_segment_at(spec: &DdeSpec, probe: f64) -> Result<Segment> {
    let (tr, sign) = spec.p.reduce(probe)?;
    let segs = spec.p.segments();
    let idx = segs.partition_point(|s| s.right <= tr).min(segs.len() - 1);
    Ok(segs[idx].shifted(probe - tr).scaled(sign))
}

fn integrate_grid(spec: &DdeSpec, t_end: f64, step: f64) -> Result<Trajectory> {
    let t0 = spec.t0;
    let n = math::ceil((t_end - t0) / step).max(1.0) as usize;
    let h = (t_end - t0) / n as f64;
    let mut grid = Vec::with_capacity(n + 1);
    let mut values = Vec::with_capacity(n + 1);
    grid.push(t0);
    values.push(spec.history.eval(t0)?);

    let eval_known = |grid: &[f64], values: &[f64], v: f64, pred: Option<(f64, f64)>| -> Result<f64> {
        if v <= t0 {
            return spec.history.eval(v);
        }
        let t_last = *grid.last().unwrap();
        if v <= t_last + 1e-12 {
            let idx = grid.partition_point(|&g| g <= v).min(grid.len() - 1);
            if idx == 0 {
                return Ok(values[0]);
            }
            let (ta, tb) = (grid[idx - 1], grid[idx]);
            let (xa, xb) = (values[idx - 1], values[idx]);
            return Ok(xa + (v - ta) / (tb - ta) * (xb - xa));
        }
        // Between the last accepted node and the node being built.
        if let Some((t_next, x_next)) = pred {
            if v <= t_next + 1e-12 {
                let xa = *values.last().unwrap();
                return Ok(xa + (v - t_last) / (t_next - t_last) * (x_next - xa));
            }
        }
        Err(Error::OutOfDomain {
            t: v,
            start: t0,
            end: t_last,
        })
    };

    for k in 0..n {
        let t_k = grid[k];
        let t_next = if k + 1 == n { t_end } else { t0 + (k + 1) as f64 * h };
        let x_k = values[k];
        let f0 = spec.p.eval(t_k + 1e-13 * (1.0 + math::abs(t_k)))?
            * eval_known(&grid, &values, spec.tau.eval(t_k)?, None)?;
        // Predict, then two corrector passes of the trapezoid rule.
        let mut x_next = x_k + (t_next - t_k) * f0;
        for _ in 0..2 {
            let tau_next = spec.tau.eval(t_next)?;
            let delayed = eval_known(&grid, &values, tau_next, Some((t_next, x_next)))?;
            let f1 = spec.p.eval(t_next)? * delayed;
            x_next = x_k + 0.5 * (t_next - t_k) * (f0 + f1);
        }
        grid.push(t_next);
        values.push(x_next);
    }

    let mut traj = Trajectory::from_grid(grid, values, &spec.label)?;
    traj.meta = spec.label.clone();
    Ok(traj)
}

/// Essential supremum of `|x'(t) - p(t) x(tau(t))|` over a probe grid,
/// excluding a half-width-one-step neighbourhood of breakpoints. The
/// derivative is taken segmentwise when the trajectory is exact, by symmetric
/// difference otherwise.
pub fn residual(x: &Trajectory, spec: &DdeSpec, probe_step: f64) -> Result<f64> {
    let (lo_span, hi_span) = x.span();
    let lo = lo_span.max(spec.t0);
    let hi = hi_span;
    if hi <= lo {
        return Err(Error::BadParameter(String::from(
            "trajectory does not extend past t0",
        )));
    }
    let mut excluded = unroll_breakpoints(
        &spec.p.breakpoints(),
        spec.p.start(),
        spec.p.periodicity.map(|p| p.period),
        lo - probe_step,
        hi + probe_step,
    );
    excluded.extend(spec.tau.breakpoints_in(lo - probe_step, hi + probe_step));
    excluded.push(spec.t0);
    match &x.exact {
        Some(f) => excluded.extend(f.breakpoints()),
        None => {
            // Grid output: the solution's curvature kinks sit at preimages of
            // earlier breakpoints under the delay; propagate them forward.
            let mut frontier = excluded.clone();
            frontier.extend(
                unroll_breakpoints(
                    &spec.history.breakpoints(),
                    spec.history.start(),
                    spec.history.periodicity.map(|p| p.period),
                    lo - hi,
                    spec.t0,
                )
                .iter()
                .copied(),
            );
            let mut tau_cells = spec.tau.breakpoints_in(lo, hi);
            tau_cells.insert(0, lo);
            tau_cells.push(hi);
            for _ in 0..64 {
                let mut fresh = Vec::new();
                for w in tau_cells.windows(2) {
                    let (a, b) = (w[0], w[1]);
                    if b - a < 1e-12 {
                        continue;
                    }
                    let Ok((m, q)) = spec.tau.piece_at(0.5 * (a + b)) else {
                        continue;
                    };
                    if m == 0.0 {
                        continue;
                    }
                    for &bp in &frontier {
                        let s = (bp - q) / m;
                        if s > a + 1e-10 && s < b - 1e-10 && s > bp + 1e-10 {
                            let known = frontier.iter().chain(fresh.iter());
                            if !known.into_iter().any(|&k| (k - s).abs() < 1e-10) {
                                fresh.push(s);
                            }
                        }
                    }
                }
                if fresh.is_empty() || frontier.len() > 100_000 {
                    break;
                }
                frontier.extend(fresh);
            }
            excluded.extend(frontier);
        }
    }
    excluded.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let near_breakpoint = |t: f64| -> bool {
        let idx = excluded.partition_point(|&b| b < t);
        (idx < excluded.len() && math::abs(excluded[idx] - t) < probe_step)
            || (idx > 0 && math::abs(excluded[idx - 1] - t) < probe_step)
    };
    let rhs_at = |t: f64| -> Result<f64> {
        let v = spec.tau.eval(t)?;
        let delayed = if v <= spec.t0 {
            spec.history.eval(v)?
        } else {
            x.eval(v)?
        };
        Ok(spec.p.eval(t)? * delayed)
    };
    let mut sup: f64 = 0.0;
    match &x.exact {
        Some(f) => {
            let n = math::ceil((hi - lo) / probe_step).max(8.0) as usize;
            for i in 0..=n {
                let t = lo + (hi - lo) * i as f64 / n as f64;
                if near_breakpoint(t) {
                    continue;
                }
                let deriv = f.derivative(t)?;
                sup = sup.max(math::abs(deriv - rhs_at(t)?));
            }
        }
        None => {
            // Probe at the solution nodes: the centred node difference has no
            // interpolation error and the smooth part of the global error
            // cancels.
            let n_nodes = x.grid.len();
            let stride = ((hi - lo) / probe_step).max(8.0);
            let stride = (n_nodes as f64 / stride).max(1.0) as usize;
            let mut i = 1;
            while i + 1 < n_nodes {
                let t = x.grid[i];
                if t > lo && t < hi && !near_breakpoint(t) {
                    let deriv =
                        (x.values[i + 1] - x.values[i - 1]) / (x.grid[i + 1] - x.grid[i - 1]);
                    sup = sup.max(math::abs(deriv - rhs_at(t)?));
                }
                i += stride;
            }
        }
    }
    Ok(sup)
}
