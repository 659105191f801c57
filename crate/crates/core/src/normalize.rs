//! Time rescaling to `|p| = 1` and the absolute-value transform.
//!
//! The rescaling runs the clock at speed `|p|`: `f(t) = int_0^t |p|`,
//! `g = inf`-inverse, and the rescaled unknown solves the same equation with
//! coefficient `sgn(p(g(s)))` and delay `f(tau(g(s)))`. Plateaus of `f`
//! (zero coefficient) collapse to points of the new time axis.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dde::{residual, DdeSpec, DelayFn};
use crate::error::{Error, Result};
use crate::math;
use crate::piecewise::{PiecewiseFn, Segment, SegmentKind};
use crate::trajectory::Trajectory;

/// The clock change `f` with its generalized (infimum) inverse.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TimeRescaleMap {
    /// `f(t) = int_0^t |p|` for `t >= 0`, identity for `t <= 0`.
    pub f: PiecewiseFn,
    /// Breakpoints of `f` paired with their images, for the inverse.
    knots: Vec<(f64, f64)>,
}

impl TimeRescaleMap {
    pub fn forward(&self, t: f64) -> Result<f64> {
        self.f.eval(t)
    }

    /// `g(s) = inf { u >= 0 : f(u) = s }` (identity for `s <= 0`): exact
    /// inverse on strictly increasing pieces, left endpoint on plateaus.
    pub fn inverse(&self, s: f64) -> Result<f64> {
        if s <= 0.0 {
            return Ok(s);
        }
        let last = self.knots.last().unwrap();
        if s > last.1 + 1e-12 * (1.0 + math::abs(last.1)) {
            return Err(Error::OutOfDomain {
                t: s,
                start: 0.0,
                end: last.1,
            });
        }
        // First knot whose image reaches s.
        let idx = self.knots.partition_point(|&(_, fv)| fv < s);
        if idx == 0 {
            return Ok(self.knots[0].0);
        }
        if idx >= self.knots.len() {
            return Ok(last.0);
        }
        let (t0, f0) = self.knots[idx - 1];
        let (t1, f1) = self.knots[idx];
        if f1 - f0 <= 0.0 {
            return Ok(t0);
        }
        // The segment is affine in all supported cases.
        Ok(t0 + (s - f0) / (f1 - f0) * (t1 - t0))
    }
}

/// Split the coefficient into sign-constant pieces over `[0, t_end]`.
fn sign_split(p: &PiecewiseFn, t_end: f64) -> Result<Vec<(f64, f64, f64)>> {
    // (left, right, constant value)
    let mut cuts: Vec<f64> = alloc::vec![0.0, t_end];
    match p.periodicity {
        Some(per) => {
            let mut k = 0.0;
            loop {
                let base = k * per.period;
                if base > t_end {
                    break;
                }
                for b in p.breakpoints() {
                    let u = b + base;
                    if u > 0.0 && u < t_end {
                        cuts.push(u);
                    }
                }
                k += 1.0;
            }
        }
        None => {
            for b in p.breakpoints() {
                if b > 0.0 && b < t_end {
                    cuts.push(b);
                }
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    crate::piecewise::dedup_points(&mut cuts, 1e-12 * t_end.max(1.0));
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = 0.5 * (a + b);
        let v = p.eval(mid)?;
        // Piecewise-constant coefficients only: verify flatness.
        let probe = p.eval(a + 0.25 * (b - a))?;
        if math::abs(probe - v) > 1e-12 * (1.0 + math::abs(v)) {
            return Err(Error::BadParameter(String::from(
                "time rescaling supports piecewise-constant coefficients",
            )));
        }
        out.push((a, b, v));
    }
    Ok(out)
}

/// Rescale a problem to `|p| = 1` over `[0, t_end]`.
///
/// Requires `t0 = 0` and a piecewise-constant coefficient that is not
/// eventually zero on the window. Returns the rescaled problem and the map.
pub fn time_rescale(spec: &DdeSpec, t_end: f64) -> Result<(DdeSpec, TimeRescaleMap)> {
    if spec.t0 != 0.0 {
        return Err(Error::BadParameter(String::from(
            "rescaling is anchored at t0 = 0",
        )));
    }
    let pieces = sign_split(&spec.p, t_end)?;
    // f as a piecewise-affine function with slope |p|.
    let hist_floor = spec.tau.min_image(0.0, t_end).min(0.0) - 1.0;
    let mut segs = alloc::vec![Segment::affine(hist_floor, 0.0, 0.0, 1.0)];
    let mut knots = alloc::vec![(0.0, 0.0)];
    let mut acc = 0.0;
    for &(a, b, v) in &pieces {
        let slope = math::abs(v);
        segs.push(Segment::poly(a, b, alloc::vec![acc, slope]));
        acc += slope * (b - a);
        knots.push((b, acc));
    }
    if acc <= 0.0 {
        return Err(Error::BadParameter(String::from(
            "coefficient vanishes on the whole window; the new clock never advances",
        )));
    }
    // Trailing plateau check: the clock must keep advancing at the horizon.
    if let Some(&(_, _, v_last)) = pieces.last() {
        if v_last == 0.0 {
            return Err(Error::BadParameter(String::from(
                "coefficient is eventually zero on the window (unbounded plateau)",
            )));
        }
    }
    let f = PiecewiseFn::new(segs)?;
    let map = TimeRescaleMap { f, knots };

    // Cut points for the rescaled delay: sign pieces of p, breakpoints of
    // tau, and preimages of every f-knot under tau.
    let mut cuts: Vec<f64> = alloc::vec![0.0, t_end];
    for &(a, b, _) in &pieces {
        cuts.push(a);
        cuts.push(b);
    }
    for b in spec.tau.breakpoints_in(0.0, t_end) {
        cuts.push(b);
    }
    // Preimages of f-knots under the affine tau pieces.
    let mut tau_bps = spec.tau.breakpoints_in(0.0, t_end);
    tau_bps.insert(0, 0.0);
    tau_bps.push(t_end);
    for w in tau_bps.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a < 1e-13 {
            continue;
        }
        let (m, q) = spec.tau.piece_at(0.5 * (a + b))?;
        if m == 0.0 {
            continue;
        }
        for &(kt, _) in &map.knots {
            let s = (kt - q) / m;
            if s > a && s < b {
                cuts.push(s);
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    crate::piecewise::dedup_points(&mut cuts, 1e-12 * t_end.max(1.0));

    // Build the rescaled coefficient and delay atom by atom, skipping the
    // collapsed plateaus.
    let mut p_segs: Vec<Segment> = Vec::new();
    let mut d_segs: Vec<Segment> = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a < 1e-13 {
            continue;
        }
        let mid = 0.5 * (a + b);
        let pv = spec.p.eval(mid)?;
        if pv == 0.0 {
            continue; // plateau: zero length in the new clock
        }
        let sa = map.forward(a)?;
        let sb = map.forward(b)?;
        if sb - sa < 1e-13 {
            continue;
        }
        let sign = if pv > 0.0 { 1.0 } else { -1.0 };
        p_segs.push(Segment::constant(sa, sb, sign));
        // New delay: affine through its exact endpoint values.
        let da = map.forward(spec.tau.eval(a)?)?;
        let db = map.forward(spec.tau.eval(b)?)?;
        let slope = (db - da) / (sb - sa);
        d_segs.push(Segment::affine(sa, sb, da - slope * sa, slope));
    }
    let p_new = PiecewiseFn::new(p_segs)?;
    let d_new = DelayFn::new(PiecewiseFn::new(d_segs)?)?;
    let normalized = DdeSpec {
        p: p_new,
        tau: d_new,
        t0: 0.0,
        history: spec.history.clone(),
        unnormalized: false,
        label: format!("{} (rescaled)", spec.label),
    };
    Ok((normalized, map))
}

/// Result of the absolute-value transform.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AbsTransform {
    pub abs_trajectory: Trajectory,
    pub abs_spec: DdeSpec,
    /// Zeros of the solution, where the transformed coefficient keeps the
    /// original value by convention (a measure-zero set).
    pub gap_points: Vec<f64>,
}

/// Absolute-value transform: `|x|` solves the equation with coefficient
/// `sgn(x(t) x(tau(t))) p(t)` off the zero set (original `p` on it).
pub fn abs_transform(x: &Trajectory, spec: &DdeSpec) -> Result<AbsTransform> {
    let r = residual(x, spec, 1e-3)?;
    if r > crate::tol::RESIDUAL_ANY {
        return Err(Error::BadParameter(format!(
            "trajectory does not solve the problem (residual {r})"
        )));
    }
    let exact = x
        .exact
        .as_ref()
        .ok_or_else(|| Error::BadParameter(String::from("need an exact trajectory")))?;
    let (abs_exact, roots) = exact.abs();
    let (span_lo, span_hi) = (exact.start().max(spec.t0), exact.end());

    // Cut points: roots of x, their preimages under tau, p and tau breaks.
    let mut cuts: Vec<f64> = alloc::vec![span_lo, span_hi];
    for &r in &roots {
        if r > span_lo && r < span_hi {
            cuts.push(r);
        }
    }
    let mut tau_bps = spec.tau.breakpoints_in(span_lo, span_hi);
    for &b in &tau_bps {
        cuts.push(b);
    }
    tau_bps.insert(0, span_lo);
    tau_bps.push(span_hi);
    for w in tau_bps.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a < 1e-13 {
            continue;
        }
        let (m, q) = spec.tau.piece_at(0.5 * (a + b))?;
        if m == 0.0 {
            continue;
        }
        for &r in &roots {
            let s = (r - q) / m;
            if s > a && s < b {
                cuts.push(s);
            }
        }
    }
    match spec.p.periodicity {
        Some(per) => {
            let mut k = 0.0;
            loop {
                let base = k * per.period;
                if base > span_hi {
                    break;
                }
                for b in spec.p.breakpoints() {
                    let u = b + base;
                    if u > span_lo && u < span_hi {
                        cuts.push(u);
                    }
                }
                k += 1.0;
            }
        }
        None => {
            for b in spec.p.breakpoints() {
                if b > span_lo && b < span_hi {
                    cuts.push(b);
                }
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    crate::piecewise::dedup_points(&mut cuts, 1e-11 * (span_hi - span_lo).max(1.0));

    let mut p_segs: Vec<Segment> = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a < 1e-12 {
            continue;
        }
        let mid = 0.5 * (a + b);
        let prod = x.eval(mid)? * x.eval(spec.tau.eval(mid)?).unwrap_or_else(|_| {
            spec.history.eval(spec.tau.eval(mid).unwrap()).unwrap_or(0.0)
        });
        let sign = if prod > 0.0 {
            1.0
        } else if prod < 0.0 {
            -1.0
        } else {
            1.0 // convention: keep p on the zero set
        };
        // The original coefficient piece over [a, b], scaled by the sign.
        let (tr, psign) = spec.p.reduce(mid)?;
        let segs = spec.p.segments();
        let idx = segs.partition_point(|s| s.right <= tr).min(segs.len() - 1);
        let piece = segs[idx].shifted(mid - tr).scaled(psign * sign);
        let mut piece = piece;
        piece.left = a;
        piece.right = b;
        if let SegmentKind::Polynomial { coeffs } = &segs[idx].kind {
            // Re-anchor local coordinates at the new left edge.
            let shifted_left = segs[idx].left + (mid - tr);
            piece.kind = SegmentKind::Polynomial {
                coeffs: crate::piecewise::poly_compose_affine(coeffs, 1.0, a - shifted_left)
                    .iter()
                    .map(|c| c * psign * sign)
                    .collect(),
            };
        }
        p_segs.push(piece);
    }
    let p_new = PiecewiseFn::new(p_segs)?;
    let (hist_abs, _) = spec.history.abs();
    let abs_spec = DdeSpec {
        p: p_new,
        tau: spec.tau.clone(),
        t0: spec.t0,
        history: hist_abs,
        unnormalized: spec.unnormalized,
        label: format!("|{}|", spec.label),
    };
    let abs_trajectory = Trajectory::from_exact(
        abs_exact,
        crate::tol::GRID_STEP.max((span_hi - span_lo) / 400_000.0),
        &abs_spec.label,
    );
    Ok(AbsTransform {
        abs_trajectory,
        abs_spec,
        gap_points: roots,
    })
}
