//! Solution records: exact segments where available, dense grid fallback.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::piecewise::{dedup_points, PiecewiseFn};
use crate::tol;

/// A computed solution: optional exact piecewise form plus a sampled grid.
/// Linear interpolation between grid points defines evaluation everywhere on
/// the span; exact segments take precedence when present.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Trajectory {
    pub exact: Option<PiecewiseFn>,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Identifier of the producing problem, for reports.
    pub meta: String,
}

impl Trajectory {
    /// Sample an exact function on its breakpoints plus a uniform grid.
    pub fn from_exact(f: PiecewiseFn, step: f64, meta: &str) -> Trajectory {
        let (grid, values) = f.sample(step);
        Trajectory {
            exact: Some(f),
            grid,
            values,
            meta: String::from(meta),
        }
    }

    pub fn from_grid(grid: Vec<f64>, values: Vec<f64>, meta: &str) -> Result<Trajectory> {
        if grid.len() != values.len() || grid.len() < 2 {
            return Err(Error::InvalidSpec(String::from(
                "trajectory grid and values must have equal length >= 2",
            )));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSpec(String::from(
                "trajectory grid must be strictly increasing",
            )));
        }
        Ok(Trajectory {
            exact: None,
            grid,
            values,
            meta: String::from(meta),
        })
    }

    pub fn span(&self) -> (f64, f64) {
        (self.grid[0], *self.grid.last().unwrap())
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if let Some(f) = &self.exact {
            return f.eval(t);
        }
        let (lo, hi) = self.span();
        if t < lo - 1e-12 || t > hi + 1e-12 {
            return Err(Error::OutOfDomain {
                t,
                start: lo,
                end: hi,
            });
        }
        let t = t.clamp(lo, hi);
        let idx = self.grid.partition_point(|&g| g <= t).min(self.grid.len() - 1);
        if idx == 0 {
            return Ok(self.values[0]);
        }
        let (t0, t1) = (self.grid[idx - 1], self.grid[idx]);
        let (v0, v1) = (self.values[idx - 1], self.values[idx]);
        let w = (t - t0) / (t1 - t0);
        Ok(v0 + w * (v1 - v0))
    }

    /// Largest sampled `|x|` over `[a, b]` (grid points and exact breakpoints).
    pub fn sup_abs(&self, a: f64, b: f64) -> f64 {
        let mut m: f64 = 0.0;
        for (&t, &v) in self.grid.iter().zip(&self.values) {
            if t >= a && t <= b {
                m = m.max(math::abs(v));
            }
        }
        if let Some(f) = &self.exact {
            for t in f.breakpoints() {
                if t >= a && t <= b {
                    if let Ok(v) = f.eval(t) {
                        m = m.max(math::abs(v));
                    }
                }
            }
        }
        m
    }

    pub fn scaled(&self, c: f64) -> Trajectory {
        Trajectory {
            exact: self.exact.as_ref().map(|f| f.scaled(c)),
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
            meta: self.meta.clone(),
        }
    }
}

/// Roots found on a window: isolated points plus intervals where the
/// trajectory vanishes identically.
#[derive(Debug, Clone, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RootSet {
    pub points: Vec<f64>,
    pub intervals: Vec<(f64, f64)>,
    /// Set when the trajectory vanishes identically over the whole window.
    pub degenerate: bool,
}

impl RootSet {
    /// All root locations in order, with interval zeros represented by their
    /// endpoints' midpoint-free positions (left edge first).
    pub fn all_points(&self) -> Vec<f64> {
        let mut out = self.points.clone();
        for &(a, b) in &self.intervals {
            out.push(a);
            out.push(b);
        }
        out.sort_by(|x, y| x.partial_cmp(y).unwrap());
        out
    }
}

/// Extract the zeros of a trajectory on `[a, b]`. Sign changes bracketed on
/// the grid are refined by bisection on the exact segments when present (the
/// interpolant otherwise); tangential zeros are reported once; intervals
/// where the trajectory vanishes identically become interval records. An
/// identically-zero window yields a degenerate result, not an error.
pub fn find_roots(x: &Trajectory, a: f64, b: f64) -> Result<RootSet> {
    let (lo, hi) = x.span();
    let has_periodic_exact = x
        .exact
        .as_ref()
        .map(|f| f.periodicity.is_some())
        .unwrap_or(false);
    if !has_periodic_exact && (a < lo - 1e-12 || b > hi + 1e-12 || a >= b) {
        return Err(Error::OutOfDomain {
            t: a,
            start: lo,
            end: hi,
        });
    }

    let scale = if has_periodic_exact {
        x.exact.as_ref().unwrap().sup_abs_estimate()
    } else {
        x.sup_abs(a, b)
    };
    let tol_abs = tol::ROOT_ABS * scale.max(f64::MIN_POSITIVE);
    if scale == 0.0 {
        return Ok(RootSet {
            points: Vec::new(),
            intervals: alloc::vec![(a, b)],
            degenerate: true,
        });
    }

    let eval = |t: f64| x.eval(t).unwrap_or(f64::NAN);

    // Candidate grid: trajectory grid clipped to the window, a uniform scan,
    // and (for periodic exact functions) breakpoints unrolled over all
    // periods covered by the window.
    let mut ts: Vec<f64> = Vec::new();
    ts.push(a);
    for &t in &x.grid {
        if t > a && t < b {
            ts.push(t);
        }
    }
    let n = 1024usize;
    for i in 1..n {
        ts.push(a + (b - a) * i as f64 / n as f64);
    }
    if let Some(f) = &x.exact {
        match f.periodicity {
            Some(p) => {
                let k0 = math::floor((a - f.start()) / p.period) - 1.0;
                let k1 = math::floor((b - f.start()) / p.period) + 1.0;
                let mut k = k0;
                while k <= k1 {
                    for bp in f.breakpoints() {
                        let u = bp + k * p.period;
                        if u > a && u < b {
                            ts.push(u);
                        }
                    }
                    k += 1.0;
                }
            }
            None => {
                for bp in f.breakpoints() {
                    if bp > a && bp < b {
                        ts.push(bp);
                    }
                }
            }
        }
    }
    ts.push(b);
    ts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    dedup_points(&mut ts, 1e-14 * (b - a).max(1.0));

    let mut points: Vec<f64> = Vec::new();
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let mut flat_start: Option<f64> = None;

    let vs: Vec<f64> = ts.iter().map(|&t| eval(t)).collect();
    for i in 0..ts.len() {
        let zero_here = math::abs(vs[i]) <= tol_abs;
        if zero_here {
            if flat_start.is_none() {
                flat_start = Some(ts[i]);
            }
        } else {
            if let Some(s) = flat_start.take() {
                let e = ts[i - 1];
                if e - s > 16.0 * tol::GRID_STEP {
                    intervals.push((s, e));
                } else {
                    points.push(0.5 * (s + e));
                }
            }
            if i > 0 && math::abs(vs[i - 1]) > tol_abs && (vs[i - 1] < 0.0) != (vs[i] < 0.0) {
                points.push(crate::roots::bisect(eval, ts[i - 1], ts[i]));
            }
        }
    }
    if let Some(s) = flat_start.take() {
        let e = *ts.last().unwrap();
        if e - s > 16.0 * tol::GRID_STEP {
            intervals.push((s, e));
        } else {
            points.push(0.5 * (s + e));
        }
    }

    // Tangential zeros between grid points (local minima of |x| dipping to 0)
    // are caught by refining brackets where the value shrinks on both sides.
    for i in 1..ts.len().saturating_sub(1) {
        let (p, c, n) = (math::abs(vs[i - 1]), math::abs(vs[i]), math::abs(vs[i + 1]));
        if c > tol_abs && c < p && c <= n && (vs[i - 1] < 0.0) == (vs[i + 1] < 0.0) {
            let (tm, fm) = math::golden_min(
                |t| math::abs(eval(t)),
                ts[i - 1],
                ts[i + 1],
                1e-13 * (b - a).max(1.0),
            );
            if fm <= tol_abs {
                points.push(tm);
            }
        }
    }

    points.sort_by(|x, y| x.partial_cmp(y).unwrap());
    dedup_points(&mut points, 1e-9 * (b - a).max(1.0));
    // Drop point roots swallowed by flat intervals.
    points.retain(|&p| {
        !intervals
            .iter()
            .any(|&(s, e)| p >= s - 1e-12 && p <= e + 1e-12)
    });

    Ok(RootSet {
        points,
        intervals,
        degenerate: false,
    })
}
