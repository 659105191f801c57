//! Explicit constructions whose amplitudes converge while the phase drifts
//! without bound: strong (shifted-scaled) convergence to the periodic
//! profile fails even though the amplitude limit exists.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dde::{integrate, DdeSpec, DelayFn, IntegrateOpts};
use crate::error::{Error, Result};
use crate::math;
use crate::periodic::{build, PeriodicKind};
use crate::piecewise::{PiecewiseFn, Segment};
use crate::trajectory::Trajectory;

/// Which construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CounterexampleKind {
    /// Blocks of the negative-feedback sawtooth with harmonic phase drift.
    SlowPhase,
    /// The lag-2 triangle profile with harmonic gaps between semicycles.
    Tau2,
}

/// Amplitudes, phase drift, and the strong-convergence failure witness.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CounterexampleReport {
    pub kind: CounterexampleKind,
    /// Amplitude after each block (the partial products).
    pub amplitudes: Vec<f64>,
    /// Tail-corrected estimate of the amplitude limit.
    pub amplitude_limit_estimate: f64,
    /// Cumulative zero shift after each block (partial harmonic sums).
    pub phase_drifts: Vec<f64>,
    /// `inf` over shifts of the final-window sup distance to the scaled
    /// periodic profile, relative to the amplitude estimate; bounded away
    /// from zero despite the amplitude limit.
    pub witness_distance: f64,
    /// Estimated limiting amplitude used by the witness.
    pub amplitude_estimate: f64,
}

/// Build and run a counterexample. `param` is the number of blocks for the
/// drifting-sawtooth kind and the harmonic offset `N` for the lag-2 kind.
pub fn counterexample(
    kind: CounterexampleKind,
    param: usize,
) -> Result<(Trajectory, DdeSpec, CounterexampleReport)> {
    match kind {
        CounterexampleKind::SlowPhase => slow_phase(param),
        CounterexampleKind::Tau2 => tau2(param),
    }
}

fn slow_phase(blocks: usize) -> Result<(Trajectory, DdeSpec, CounterexampleReport)> {
    if blocks < 2 {
        return Err(Error::BadParameter(String::from("need at least 2 blocks")));
    }
    let minus = build(PeriodicKind::Minus, None)?;
    let profile = minus.solution.exact.as_ref().unwrap().clone();

    // Block m >= 1 starts at s_m = m 5/2 - H_m and plays the sawtooth from
    // its local maximum; the drift eats 1/(m+1) of each antiperiod.
    let mut p_segs: Vec<Segment> = Vec::new();
    let mut d_segs: Vec<Segment> = Vec::new();
    let push = |segs: &mut Vec<Segment>, s: Segment| {
        if s.right - s.left > 1e-13 {
            segs.push(s);
        }
    };
    // Up to the first reset the problem is the sawtooth's own.
    let mut harmonic = 1.0; // H_1
    let mut s_m = 2.5 - harmonic; // s_1 = 3/2
    push(&mut p_segs, Segment::constant(0.0, s_m, -1.0));
    push(&mut d_segs, Segment::constant(0.0, s_m, 0.0));
    let mut amplitudes = Vec::with_capacity(blocks);
    let mut phase_drifts = Vec::with_capacity(blocks);
    let mut amp = 1.0;
    for m in 1..=blocks {
        // Amplitude picked up entering this block.
        amp *= 1.0 - 1.0 / (2.0 * (m as f64) * (m as f64));
        amplitudes.push(amp);
        phase_drifts.push(harmonic);
        let next_h = harmonic + 1.0 / (m as f64 + 1.0);
        let s_next = (m as f64 + 1.0) * 2.5 - next_h;
        // The sawtooth delay, restarted at s_m.
        push(&mut p_segs, Segment::constant(s_m, s_next, -1.0));
        push(&mut d_segs, Segment::constant(s_m, (s_m + 1.5).min(s_next), s_m));
        if s_next > s_m + 1.5 {
            push(&mut d_segs, Segment::affine(s_m + 1.5, s_next, -1.5, 1.0));
        }
        harmonic = next_h;
        s_m = s_next;
    }
    let horizon = s_m;
    let spec = DdeSpec {
        p: PiecewiseFn::new(p_segs)?,
        tau: DelayFn::new(PiecewiseFn::new(d_segs)?)?,
        t0: 0.0,
        history: profile,
        unnormalized: false,
        label: format!("drifting sawtooth, {blocks} blocks"),
    };
    let step = (horizon / 2.0e6).max(crate::tol::GRID_STEP);
    let x = integrate(&spec, horizon, IntegrateOpts { step, ..IntegrateOpts::default() })?;

    let (witness, m_hat) = strong_convergence_witness(&x, &minus.solution, 5.0, horizon);
    let report = CounterexampleReport {
        kind: CounterexampleKind::SlowPhase,
        amplitude_limit_estimate: tail_corrected_limit(&amplitudes, 1, 0),
        amplitudes,
        phase_drifts,
        witness_distance: witness,
        amplitude_estimate: m_hat,
    };
    Ok((x, spec, report))
}

fn tau2(n_offset: usize) -> Result<(Trajectory, DdeSpec, CounterexampleReport)> {
    if n_offset < 4 {
        return Err(Error::BadParameter(String::from("need N >= 4")));
    }
    let blocks = 400usize;
    let v2 = build(PeriodicKind::Varpi, Some(2.0))?;
    let profile = v2.solution.exact.as_ref().unwrap().clone();

    let mut p_segs: Vec<Segment> = Vec::new();
    let mut d_segs: Vec<Segment> = Vec::new();
    let push = |segs: &mut Vec<Segment>, s: Segment| {
        if s.right - s.left > 1e-13 {
            segs.push(s);
        }
    };
    // Block n: gap, constant-slope ascent referencing the previous maximum,
    // quadratic round-top referencing the previous descent via lag 2, then
    // the frozen linear descent.
    let mut t_n = -2.0;
    let mut amplitudes = Vec::with_capacity(blocks);
    let mut phase_drifts = Vec::with_capacity(blocks);
    let mut amp = 1.0;
    let mut drift = 0.0;
    for n in 0..blocks {
        let g = 1.0 / (n as f64 + n_offset as f64);
        let t_next = t_n + 2.0 + g;
        // Gap [t_n + 2, t_next]: frozen on the zero.
        push(&mut p_segs, Segment::constant(t_n + 2.0, t_next, 1.0));
        push(&mut d_segs, Segment::constant(t_n + 2.0, t_next, t_n + 2.0));
        // Ascent [t_next, t_next + 1 - g]: frozen on the previous maximum.
        push(&mut p_segs, Segment::constant(t_next, t_next + 1.0 - g, 1.0));
        push(&mut d_segs, Segment::constant(t_next, t_next + 1.0 - g, t_n + 1.0));
        // Round-top [t_next + 1 - g, t_next + 1]: lag 2 into the descent.
        push(&mut p_segs, Segment::constant(t_next + 1.0 - g, t_next + 1.0, 1.0));
        push(&mut d_segs, Segment::affine(t_next + 1.0 - g, t_next + 1.0, -2.0, 1.0));
        // Descent [t_next + 1, t_next + 2]: frozen on the fresh maximum.
        push(&mut p_segs, Segment::constant(t_next + 1.0, t_next + 2.0, -1.0));
        push(&mut d_segs, Segment::constant(t_next + 1.0, t_next + 2.0, t_next + 1.0));
        amp *= 1.0 - 0.5 * g * g;
        drift += g;
        amplitudes.push(amp);
        phase_drifts.push(drift);
        t_n = t_next;
    }
    let horizon = t_n + 2.0;
    // Clip the leading history-side piece of the first gap at t = 0.
    let clip = |segs: Vec<Segment>| -> Vec<Segment> {
        let mut out = Vec::new();
        for mut s in segs {
            if s.right <= 1e-12 {
                continue;
            }
            if s.left < 0.0 {
                s.left = 0.0;
            }
            out.push(s);
        }
        out
    };
    let spec = DdeSpec {
        p: PiecewiseFn::new(clip(p_segs))?,
        tau: DelayFn::new(PiecewiseFn::new(clip(d_segs))?)?,
        t0: 0.0,
        history: profile,
        unnormalized: false,
        label: format!("gapped triangle, N = {n_offset}"),
    };
    let step = (horizon / 2.0e6).max(crate::tol::GRID_STEP);
    let x = integrate(&spec, horizon, IntegrateOpts { step, ..IntegrateOpts::default() })?;

    let (witness, m_hat) = strong_convergence_witness(&x, &v2.solution, 2.0, horizon);
    let report = CounterexampleReport {
        kind: CounterexampleKind::Tau2,
        amplitude_limit_estimate: tail_corrected_limit(&amplitudes, blocks, n_offset),
        amplitudes,
        phase_drifts,
        witness_distance: witness,
        amplitude_estimate: m_hat,
    };
    Ok((x, spec, report))
}

/// Tail-corrected limit of partial products `prod (1 - 1/(2 i^2))` starting
/// at `i = start_offset` (0 means the drifting-sawtooth indexing from 1).
/// The correction sums the remaining logarithms via the `1/i^2` tail.
fn tail_corrected_limit(amplitudes: &[f64], _blocks: usize, start_offset: usize) -> f64 {
    let last = *amplitudes.last().unwrap();
    let m = amplitudes.len() as f64 + start_offset as f64;
    // sum_{i > m} 1/i^2 = 1/m - 1/(2 m^2) + 1/(6 m^3) - ...
    let inv = 1.0 / m;
    let tail2 = inv - 0.5 * inv * inv + inv * inv * inv / 6.0;
    // sum_{i > m} 1/i^4 ~ 1/(3 m^3)
    let tail4 = inv * inv * inv / 3.0;
    // ln(1 - u) = -u - u^2/2 - ... with u = 1/(2 i^2)
    last * math::exp(-0.5 * tail2 - 0.125 * tail4)
}

/// Infimum over shifts of the final-window sup distance between the signed
/// trajectory and the scaled periodic profile. The window is the final fifth
/// of the horizon, long enough for the phase drift to spoil any single shift.
fn strong_convergence_witness(
    x: &Trajectory,
    profile: &Trajectory,
    full_period: f64,
    horizon: f64,
) -> (f64, f64) {
    let a = 0.8 * horizon;
    let b = horizon;
    let mut m_hat: f64 = 0.0;
    let n = 8192;
    for i in 0..=n {
        let t = a + (b - a) * i as f64 / n as f64;
        if let Ok(v) = x.eval(t) {
            m_hat = m_hat.max(math::abs(v));
        }
    }
    let distance = |shift: f64| -> f64 {
        let mut sup: f64 = 0.0;
        let k = 4096;
        for i in 0..=k {
            let t = a + (b - a) * i as f64 / k as f64;
            let xv = x.eval(t).unwrap_or(f64::NAN);
            let pv = profile.eval(t + shift).unwrap_or(f64::NAN);
            sup = sup.max(math::abs(xv - m_hat * pv));
        }
        sup
    };
    let coarse = 500usize;
    let mut best = (0.0, f64::INFINITY);
    for i in 0..coarse {
        let s = full_period * i as f64 / coarse as f64;
        let d = distance(s);
        if d < best.1 {
            best = (s, d);
        }
    }
    let step = full_period / coarse as f64;
    let (_, refined) = math::golden_min(distance, best.0 - step, best.0 + step, 1e-9);
    (refined.min(best.1) / m_hat.max(1e-300), m_hat)
}
