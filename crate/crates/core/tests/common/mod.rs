//! Shared generators for the acceptance suite: randomized admissible
//! comparison trajectories and randomized piecewise problems.

use semicycle_core::rng::SplitMix64;
use semicycle_core::{DdeSpec, DelayFn, MyshkisRecord, PiecewiseFn, Segment, Trajectory};

/// An admissible comparison trajectory together with the randomized
/// coefficient/delay pair realizing it.
pub struct AdmissibleSample {
    #[allow(dead_code)]
    pub beta: f64,
    #[allow(dead_code)]
    pub shift: f64,
    /// Sampled (t, y, c, sigma) rows on [0, rho].
    pub rows: Vec<(f64, f64, f64, f64)>,
    pub trajectory: Trajectory,
}

/// Scaled, advanced, zero-frozen comparison function: the one family that
/// stays admissible (`|c| <= 1`, `0 <= sigma <= tau`, zero at the first
/// root). The delay representation is randomized wherever the dynamics give
/// slack: the history-fed stretch and the frozen tail.
pub fn admissible_sample(rec: &MyshkisRecord, rng: &mut SplitMix64) -> AdmissibleSample {
    let tau = rec.tau;
    let rho = rec.rho;
    let beta = rng.uniform(0.0, 0.5);
    let shift = rng.uniform(0.0, 0.4 * tau);
    let scale = 1.0 - beta;

    let y = |t: f64| -> f64 {
        if t >= rho - shift {
            0.0
        } else {
            scale * rec.eval(t + shift)
        }
    };
    // dy/dt = -scale * x_tau(t + shift - tau) before the freeze.
    let dy = |t: f64| -> f64 {
        if t >= rho - shift {
            0.0
        } else {
            -scale * rec.eval(t + shift - tau)
        }
    };

    let n = 64;
    let mut rows = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let t = rho * i as f64 / n as f64;
        let value = y(t);
        let slope = dy(t);
        let (c, sigma) = if t >= rho - shift {
            // Frozen tail: point anywhere into the zero stretch.
            let span = (t - (rho - shift)).min(tau);
            (0.0, rng.uniform(0.0, span.max(0.0)))
        } else if t + shift <= tau {
            // History-fed: any delay that still lands in the flat history.
            let lo = (t + shift).min(tau);
            (1.0, rng.uniform(lo, tau))
        } else {
            // Interior: the dynamics pin the representation.
            (1.0, tau)
        };
        // The representation must solve y' = -c y(t - sigma).
        let residual = slope + c * y(t - sigma);
        assert!(
            residual.abs() <= 1e-9,
            "representation residual {residual} at t = {t}"
        );
        rows.push((t, value, c, sigma));
    }

    // Exact trajectory for envelope checks: history, advanced profile, zero
    // tail.
    let exact = rec.x_tau.exact.as_ref().unwrap();
    let mut segs: Vec<Segment> = Vec::new();
    segs.push(Segment::constant(-tau - rho - 1.0, -shift, scale));
    for s in exact
        .shifted(-shift)
        .restricted(-shift, rho - shift)
        .unwrap()
        .segments()
    {
        segs.push(s.scaled(scale));
    }
    if shift > 1e-12 {
        segs.push(Segment::constant(rho - shift, rho, 0.0));
    }
    let traj = Trajectory::from_exact(PiecewiseFn::new(segs).unwrap(), 1e-3, "admissible sample");

    AdmissibleSample {
        beta,
        shift,
        rows,
        trajectory: traj,
    }
}

/// Randomized piecewise-constant problem with optional zero plateaus, for
/// the rescaling round-trip.
pub fn random_plateau_spec(rng: &mut SplitMix64, case: usize) -> Option<(DdeSpec, f64)> {
    let mut segs = Vec::new();
    let mut t = 0.0;
    let mut total_nonzero = 0.0;
    while t < 6.0 {
        let w = rng.uniform(0.4, 1.2);
        let v = if rng.next_f64() < 0.3 && t > 0.5 && t + w < 5.0 {
            0.0
        } else {
            let mag = rng.uniform(0.2, 1.0);
            total_nonzero += mag * w;
            if rng.next_f64() < 0.5 {
                mag
            } else {
                -mag
            }
        };
        segs.push(Segment::constant(t, t + w, v));
        t += w;
    }
    if total_nonzero <= 0.5 {
        return None;
    }
    if let Some(last) = segs.last_mut() {
        if matches!(last.kind, semicycle_core::SegmentKind::Constant { value } if value == 0.0) {
            last.kind = semicycle_core::SegmentKind::Constant { value: 1.0 };
        }
    }
    let t_end = t.min(6.5);
    let lag = rng.uniform(0.3, 1.0);
    let spec = DdeSpec {
        p: PiecewiseFn::new(segs).unwrap(),
        tau: DelayFn::new(
            PiecewiseFn::new(vec![Segment::affine(0.0, t + 0.1, -lag, 1.0)]).unwrap(),
        )
        .unwrap(),
        t0: 0.0,
        history: PiecewiseFn::constant(-lag - 0.1, 0.0, 1.0),
        unnormalized: false,
        label: format!("round trip {case}"),
    };
    Some((spec, t_end))
}
