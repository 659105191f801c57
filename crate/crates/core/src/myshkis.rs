//! The comparison solution `x_tau` of `x'(t) + x(t - tau) = 0` with unit
//! history, its first root `rho(tau)`, and the monotone iteration that
//! squeezes admissible comparison functions onto it.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::piecewise::{poly_antiderivative, poly_eval};
use crate::piecewise::{PiecewiseFn, Segment, SegmentKind};
use crate::tol;
use crate::trajectory::Trajectory;

/// Coefficient of the first-root blow-up near the threshold:
/// `rho(tau) ~ rho_critical_coeff() * (tau - 1/e)^(-1/2)`.
pub fn rho_critical_coeff() -> f64 {
    math::PI / math::sqrt(2.0 * math::powi(math::E, 3))
}

/// Exact record of the comparison solution for one `tau`.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MyshkisRecord {
    pub tau: f64,
    /// Exact polynomial segments on `[-tau, rho + tau]` (constant 1 history).
    pub x_tau: Trajectory,
    /// First root.
    pub rho: f64,
}

impl MyshkisRecord {
    /// Evaluate `x_tau(t)`, treating everything left of `-tau` as history 1.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            1.0
        } else {
            self.x_tau.eval(t).unwrap_or(f64::NAN)
        }
    }
}

fn guard_tau(tau: f64) -> Result<()> {
    if !(tau > math::INV_E + tol::TAU_GUARD) {
        return Err(Error::BelowThreshold { tau });
    }
    Ok(())
}

/// Method-of-steps construction of `x_tau` and its first root.
///
/// On `[k tau, (k+1) tau]` the solution is a polynomial of degree `k + 1`,
/// built by exact integration of the previous segment; the first root is
/// located on the first segment whose endpoint values bracket zero and
/// refined by bisection (ties at segment ends resolve to the earlier time).
pub fn myshkis_solution(tau: f64) -> Result<MyshkisRecord> {
    guard_tau(tau)?;
    let mut polys: Vec<Vec<f64>> = Vec::new();
    let mut current = vec![1.0, -1.0]; // 1 - u on [0, tau], local coordinates
    let mut left_value = 1.0;
    let mut rho = None;
    let mut k = 0usize;
    while rho.is_none() {
        let right_value = poly_eval(&current, tau);
        let seg_left = k as f64 * tau;
        if left_value <= 0.0 {
            rho = Some(seg_left);
        } else if right_value <= 0.0 || has_sign_change(&current, tau) {
            let hi = first_nonpositive(&current, tau);
            let r = crate::roots::bisect(|u| poly_eval(&current, u), 0.0, hi);
            rho = Some(seg_left + r);
        }
        polys.push(current.clone());
        if rho.is_none() {
            // next(u) = x((k+1) tau) - int_0^u current(v) dv
            left_value = right_value;
            let mut anti = poly_antiderivative(&current);
            for c in anti.iter_mut() {
                *c = -*c;
            }
            anti[0] = left_value;
            current = anti;
            k += 1;
            if k > 5000 {
                return Err(Error::Numeric(format!(
                    "first root not reached after {k} delay intervals (tau = {tau})"
                )));
            }
        }
    }
    let rho = rho.unwrap();

    // Extend segments to cover [0, rho + tau].
    while (polys.len() as f64) * tau < rho + tau {
        let last = polys.last().unwrap();
        let right_value = poly_eval(last, tau);
        let mut anti = poly_antiderivative(last);
        for c in anti.iter_mut() {
            *c = -*c;
        }
        anti[0] = right_value;
        polys.push(anti);
    }

    let mut segs = vec![Segment::constant(-tau, 0.0, 1.0)];
    for (k, p) in polys.iter().enumerate() {
        let left = k as f64 * tau;
        segs.push(Segment::poly(left, left + tau, p.clone()));
    }
    let exact = PiecewiseFn::new(segs)?;
    let x_tau = Trajectory::from_exact(exact, tol::GRID_STEP.max(tau / 4096.0), "myshkis");
    Ok(MyshkisRecord { tau, rho, x_tau })
}

fn has_sign_change(poly: &[f64], width: f64) -> bool {
    let n = 64;
    let mut prev = poly_eval(poly, 0.0);
    for i in 1..=n {
        let v = poly_eval(poly, width * i as f64 / n as f64);
        if (prev > 0.0) != (v > 0.0) {
            return true;
        }
        prev = v;
    }
    false
}

/// Right end of the first bracket `[0, u]` with `poly(u) <= 0`.
fn first_nonpositive(poly: &[f64], width: f64) -> f64 {
    let n = 64;
    for i in 1..=n {
        let u = width * i as f64 / n as f64;
        if poly_eval(poly, u) <= 0.0 {
            return u;
        }
    }
    width
}

/// The monotone iteration `phi_0 = 1`,
/// `phi_{k+1}(t) = min(int_t^rho phi_k(s - tau) ds, 1)`, returned as
/// trajectories on `[-tau, rho]`. Exact piecewise polynomials are used until
/// the degree would exceed 30; later iterates switch to a dense grid, which
/// keeps the 1e-6 comparison target intact.
pub fn phi_iteration(tau: f64, n: usize) -> Result<Vec<Trajectory>> {
    guard_tau(tau)?;
    if n == 0 {
        return Err(Error::BadParameter(String::from("need n >= 1")));
    }
    let record = myshkis_solution(tau)?;
    let rho = record.rho;
    const MAX_DEGREE: usize = 30;

    let mut out: Vec<Trajectory> = Vec::with_capacity(n + 1);
    let mut exact: Option<PiecewiseFn> =
        Some(PiecewiseFn::new(vec![Segment::constant(-tau, rho, 1.0)]).unwrap());
    out.push(Trajectory::from_exact(
        exact.clone().unwrap(),
        grid_step_for(rho),
        "phi_0",
    ));

    // Dense fallback grid shared by all grid-mode iterates.
    let m = (math::ceil((rho + tau) / 1e-4) as usize).clamp(1024, 400_000);
    let grid: Vec<f64> = (0..=m)
        .map(|i| -tau + (rho + tau) * i as f64 / m as f64)
        .collect();
    let mut grid_values: Option<Vec<f64>> = None;

    for k in 1..=n {
        if let Some(f) = &exact {
            match phi_step_exact(f, tau, rho) {
                Some(next) if max_degree(&next) <= MAX_DEGREE => {
                    out.push(Trajectory::from_exact(
                        next.clone(),
                        grid_step_for(rho),
                        &format!("phi_{k}"),
                    ));
                    exact = Some(next);
                    continue;
                }
                _ => {
                    let vals = grid.iter().map(|&t| f.eval(t).unwrap()).collect::<Vec<f64>>();
                    grid_values = Some(vals);
                    exact = None;
                }
            }
        }
        let prev = grid_values.as_ref().unwrap();
        let next = phi_step_grid(prev, &grid, tau, rho);
        out.push(Trajectory::from_grid(
            grid.clone(),
            next.clone(),
            &format!("phi_{k}"),
        )?);
        grid_values = Some(next);
    }
    Ok(out)
}

fn grid_step_for(rho: f64) -> f64 {
    (rho / 4096.0).min(tol::GRID_STEP)
}

fn max_degree(f: &PiecewiseFn) -> usize {
    f.segments()
        .iter()
        .map(|s| match &s.kind {
            SegmentKind::Polynomial { coeffs } => coeffs.len().saturating_sub(1),
            _ => 1,
        })
        .max()
        .unwrap_or(0)
}

/// One exact iteration step.
fn phi_step_exact(phi: &PiecewiseFn, tau: f64, rho: f64) -> Option<PiecewiseFn> {
    // g(s) = phi(s - tau) on [0, rho]
    let shifted = phi.shifted(tau).restricted(0.0, rho).ok()?;
    let total = shifted.integrate(0.0, rho).ok()?;
    let mut segs: Vec<Segment> = Vec::new();
    let mut acc = 0.0; // int_0^{left} g
    for s in shifted.segments() {
        let local = s.as_local_poly()?;
        let anti = poly_antiderivative(&local);
        // I(t) = int_t^rho g = (total - acc) - int_{left}^t g
        let mut coeffs = anti.iter().map(|c| -c).collect::<Vec<f64>>();
        coeffs[0] = total - acc;
        segs.push(Segment::poly(s.left, s.right, coeffs));
        acc += s.integral(s.left, s.right);
    }
    let integral_fn = PiecewiseFn::new(segs).ok()?;
    // Cap at 1: I is decreasing, so a single crossing at most.
    let mut out: Vec<Segment> = Vec::new();
    if integral_fn.eval(0.0).ok()? > 1.0 {
        let mut t_star = 0.0;
        for s in integral_fn.segments() {
            let (a, b) = (s.eval(s.left), s.eval(s.right));
            if (a - 1.0) >= 0.0 && (b - 1.0) <= 0.0 {
                t_star = crate::roots::bisect(|t| s.eval(t) - 1.0, s.left, s.right);
                break;
            }
        }
        if t_star > 1e-12 {
            out.push(Segment::constant(-tau, t_star, 1.0));
            out.extend(
                integral_fn
                    .restricted(t_star, rho)
                    .ok()?
                    .segments()
                    .iter()
                    .cloned(),
            );
        } else {
            out.push(Segment::constant(-tau, 0.0, 1.0));
            out.extend(integral_fn.segments().iter().cloned());
        }
    } else {
        out.push(Segment::constant(-tau, 0.0, 1.0));
        out.extend(integral_fn.segments().iter().cloned());
    }
    PiecewiseFn::new(out).ok()
}

fn phi_step_grid(values: &[f64], grid: &[f64], tau: f64, rho: f64) -> Vec<f64> {
    let eval_shifted = |t: f64| -> f64 {
        let v = t - tau;
        if v <= grid[0] {
            return 1.0;
        }
        let idx = grid.partition_point(|&g| g <= v).min(grid.len() - 1);
        if idx == 0 {
            return values[0];
        }
        let (a, b) = (grid[idx - 1], grid[idx]);
        values[idx - 1] + (v - a) / (b - a) * (values[idx] - values[idx - 1])
    };
    let n = grid.len();
    let mut integral = vec![0.0; n];
    for i in (0..n - 1).rev() {
        if grid[i] >= rho {
            integral[i] = 0.0;
            continue;
        }
        let (a, b) = (grid[i], grid[i + 1].min(rho));
        let seg = 0.5 * (b - a) * (eval_shifted(a) + eval_shifted(b));
        integral[i] = integral[i + 1] + seg;
    }
    integral
        .iter()
        .zip(grid)
        .map(|(&v, &t)| if t <= 0.0 { 1.0 } else { v.min(1.0) })
        .collect()
}

/// One row of the near-threshold first-root table.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RhoAsymptoticsRow {
    pub tau: f64,
    pub rho: f64,
    /// `rho(tau) * sqrt(tau - 1/e)`.
    pub product: f64,
}

/// Near-threshold report: the product table, its extrapolated limit (when
/// the last three grid points form a geometric ladder in `tau - 1/e`), and
/// the target coefficient.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RhoAsymptotics {
    pub rows: Vec<RhoAsymptoticsRow>,
    pub extrapolated: Option<f64>,
    pub target: f64,
}

/// Products `rho(tau) sqrt(tau - 1/e)` over a grid approaching the threshold.
pub fn rho_asymptotics(taus: &[f64]) -> Result<RhoAsymptotics> {
    if taus.len() < 2 {
        return Err(Error::BadParameter(String::from(
            "need at least two grid points",
        )));
    }
    let mut rows = Vec::with_capacity(taus.len());
    for &tau in taus {
        guard_tau(tau)?;
        if tau > math::INV_E + 0.05 + 1e-12 {
            return Err(Error::BadParameter(format!(
                "tau = {tau} outside the near-threshold window (1/e, 1/e + 0.05]"
            )));
        }
        let rec = myshkis_solution(tau)?;
        let h = tau - math::INV_E;
        rows.push(RhoAsymptoticsRow {
            tau,
            rho: rec.rho,
            product: rec.rho * math::sqrt(h),
        });
    }
    Ok(RhoAsymptotics {
        extrapolated: extrapolate_tail(
            &rows.iter().map(|r| (r.tau, r.product)).collect::<Vec<_>>(),
        ),
        rows,
        target: rho_critical_coeff(),
    })
}

/// Two-level Richardson on the last three rows when their `tau - 1/e`
/// offsets form a geometric ladder.
pub(crate) fn extrapolate_tail(rows: &[(f64, f64)]) -> Option<f64> {
    if rows.len() < 3 {
        return None;
    }
    let tail = &rows[rows.len() - 3..];
    let h: Vec<f64> = tail.iter().map(|r| r.0 - math::INV_E).collect();
    let s01 = h[0] / h[1];
    let s12 = h[1] / h[2];
    if !(s01 > 1.0) || math::abs(s01 - s12) > 1e-6 * s01 {
        return None;
    }
    Some(math::richardson_two_level(
        [tail[0].1, tail[1].1, tail[2].1],
        s01,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_is_one_for_large_delay() {
        for &tau in &[1.0, 1.3, 2.0] {
            let r = myshkis_solution(tau).unwrap();
            assert!((r.rho - 1.0).abs() < 1e-12, "tau = {tau}: rho = {}", r.rho);
        }
    }

    #[test]
    fn rho_and_value_for_tau_half() {
        // Exact second segment: x = 1.125 - 1.5 t + 0.5 t^2 on [0.5, 1],
        // so x(1) = 0.125 and the root lies in [1, 1.5].
        let r = myshkis_solution(0.5).unwrap();
        assert!((r.eval(1.0) - 0.125).abs() < 1e-13);
        assert!((r.rho - 1.37).abs() < 5e-3, "rho = {}", r.rho);
        // Independent check: integrating the quadratic by hand gives
        // x(t) = 31/24 - 2t + t^2 - t^3/6 on [1, 1.5].
        let cubic = |t: f64| 31.0 / 24.0 - 2.0 * t + t * t - t * t * t / 6.0;
        let oracle = crate::roots::bisect(cubic, 1.0, 1.5);
        assert!((r.rho - oracle).abs() < 1e-10, "rho = {}, oracle = {oracle}", r.rho);
    }

    #[test]
    fn record_invariants() {
        for &tau in &[0.45, 0.7, 1.0, 1.6] {
            let r = myshkis_solution(tau).unwrap();
            assert!((r.eval(0.0) - 1.0).abs() < 1e-14);
            assert!(r.eval(r.rho).abs() < 1e-10);
            let mut prev = r.eval(0.0);
            for i in 1..=200 {
                let t = r.rho * i as f64 / 200.0;
                let v = r.eval(t);
                assert!(v < prev + 1e-12, "not decreasing at t = {t} (tau = {tau})");
                prev = v;
            }
            // Derivative bounds -1 <= x' <= -x(rho - tau) on (0, rho).
            let floor = r.eval(r.rho - tau);
            let exact = r.x_tau.exact.as_ref().unwrap();
            for i in 1..200 {
                let t = r.rho * i as f64 / 200.0;
                let d = exact.derivative(t).unwrap();
                assert!(
                    d >= -1.0 - 1e-12 && d <= -floor + 1e-9,
                    "d = {d} at t = {t}, tau = {tau}"
                );
            }
        }
    }

    #[test]
    fn below_threshold_is_rejected() {
        assert!(matches!(
            myshkis_solution(math::INV_E),
            Err(Error::BelowThreshold { .. })
        ));
        assert!(matches!(
            myshkis_solution(0.3),
            Err(Error::BelowThreshold { .. })
        ));
    }

    #[test]
    fn comparison_of_first_roots() {
        // rho strictly decreasing on (1/e, 1], and the reversed-time profiles
        // are strictly ordered.
        let taus = [0.4, 0.5, 0.65, 0.8, 1.0];
        let recs: Vec<_> = taus.iter().map(|&t| myshkis_solution(t).unwrap()).collect();
        for w in recs.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            assert!(a.rho > b.rho + 1e-9);
            for i in 1..=50 {
                let t = b.rho * i as f64 / 50.0;
                let va = a.eval(a.rho - t);
                let vb = b.eval(b.rho - t);
                assert!(va < vb + 1e-10, "tau pair ({}, {}), t = {t}", a.tau, b.tau);
            }
        }
    }

    #[test]
    fn phi_zero_and_one() {
        let tau = 0.8;
        let rec = myshkis_solution(tau).unwrap();
        let phis = phi_iteration(tau, 2).unwrap();
        assert_eq!(phis[0].eval(0.3).unwrap(), 1.0);
        // phi_1(t) = min(rho - t, 1) on [0, rho].
        for i in 0..=20 {
            let t = rec.rho * i as f64 / 20.0;
            let expect = (rec.rho - t).min(1.0);
            assert!((phis[1].eval(t).unwrap() - expect).abs() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn phi_monotone_and_above_x_tau() {
        let tau = 0.5;
        let rec = myshkis_solution(tau).unwrap();
        let phis = phi_iteration(tau, 40).unwrap();
        let mut sups = Vec::new();
        for phi in &phis {
            let mut sup: f64 = 0.0;
            for i in 0..=400 {
                let t = rec.rho * i as f64 / 400.0;
                let gap = phi.eval(t).unwrap() - rec.eval(t);
                assert!(gap > -5e-9, "phi below x_tau at t = {t}: {gap}");
                sup = sup.max(gap);
            }
            sups.push(sup);
        }
        for w in sups.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "sup sequence not nonincreasing: {sups:?}");
        }
        assert!(*sups.last().unwrap() < 1e-3, "slow convergence: {sups:?}");
    }

    #[test]
    fn rho_blowup_product_near_threshold() {
        let taus = [
            math::INV_E + 0.016,
            math::INV_E + 0.004,
            math::INV_E + 0.001,
        ];
        let rep = rho_asymptotics(&taus).unwrap();
        let target = rep.target;
        assert!((target - 0.49567).abs() < 1e-4);
        // Raw product at 1/e + 0.01 is within 10% of the limit.
        let rec = myshkis_solution(math::INV_E + 0.01).unwrap();
        let raw = rec.rho * math::sqrt(0.01);
        assert!((raw - target).abs() / target < 0.10, "raw = {raw}");
        for w in rep.rows.windows(2) {
            assert!(w[0].rho < w[1].rho, "rho should grow toward the threshold");
        }
        let ex = rep.extrapolated.unwrap();
        assert!((ex - target).abs() / target < 0.02, "extrapolated = {ex}");
    }
}
