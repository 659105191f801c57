//! Growth envelope `psi_tau`, its switch point `xi_tau`, the critical
//! semicycle length `Lambda(tau)` on `(1/e, 2]`, the `[1, 2]` closed form,
//! and the spectral quantities `(mu, nu, gamma)` with their near-threshold
//! asymptotics.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::myshkis::{self, myshkis_solution, MyshkisRecord};
use crate::piecewise::{poly_antiderivative, PiecewiseFn, Segment};
use crate::tol;
use crate::trajectory::Trajectory;

/// Documented limit coefficient for `Lambda(tau) sqrt(tau - 1/e)`:
/// `pi / sqrt(2 e^3) * (1 + 1/e)`.
pub fn lambda_critical_coeff() -> f64 {
    myshkis::rho_critical_coeff() * (1.0 + math::INV_E)
}

/// Per-`tau` threshold bundle.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThresholdRecord {
    pub tau: f64,
    /// Growth envelope on `[0, ...]`, exact piecewise form.
    pub psi: Trajectory,
    /// Switch point from forced growth to the exponential regime.
    pub xi: f64,
    /// Critical semicycle length.
    pub lambda: f64,
    /// First root of the comparison solution.
    pub rho: f64,
}

/// Principal spectral triple of the characteristic system.
#[derive(Debug, Clone, Copy)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectralRecord {
    pub tau: f64,
    pub mu: f64,
    pub nu: f64,
    pub gamma: f64,
}

impl SpectralRecord {
    /// Residuals of the two defining equations.
    pub fn residuals(&self) -> (f64, f64) {
        let e = math::exp(-self.mu);
        (
            self.mu + self.tau * e * math::cos(self.nu),
            self.nu - self.tau * e * math::sin(self.nu),
        )
    }
}

/// The descent profile `t -> x_tau(rho + t - tau)` on `[0, span]`.
fn descent_profile(rec: &MyshkisRecord, span: f64) -> Result<PiecewiseFn> {
    let exact = rec
        .x_tau
        .exact
        .as_ref()
        .ok_or_else(|| Error::Numeric(String::from("comparison solution lacks exact form")))?;
    let shifted = exact.shifted(rec.tau - rec.rho);
    shifted.restricted(0.0, span)
}

/// Growth envelope and switch point.
///
/// `psi` rises with derivative `x_tau(rho + t - tau)` until the unique root
/// `xi` of `Theta(t) = int_0^t x_tau(rho + w - tau) dw - x_tau(rho + t - tau)`,
/// and is the exponential `psi(xi) e^(t - xi)` afterwards.
pub fn psi_and_xi(tau: f64) -> Result<(Trajectory, f64)> {
    let record = myshkis_solution(tau)?;
    if tau > 2.0 + 1e-12 {
        return Err(Error::BadParameter(format!(
            "tau = {tau} outside (1/e, 2]"
        )));
    }
    psi_and_xi_from(&record)
}

pub(crate) fn psi_and_xi_from(record: &MyshkisRecord) -> Result<(Trajectory, f64)> {
    let tau = record.tau;
    let rho = record.rho;
    let descent = descent_profile(record, tau)?;

    // Theta is strictly increasing with a sign change inside (0, tau).
    let theta = |t: f64| -> f64 {
        let integral = descent.integrate(0.0, t).unwrap();
        integral - descent.eval(t).unwrap()
    };
    let t0 = theta(0.0);
    let t1 = theta(tau);
    if !(t0 < 0.0 && t1 > 0.0) {
        return Err(Error::Numeric(format!(
            "switch-point bracket failed: Theta(0) = {t0}, Theta(tau) = {t1}"
        )));
    }
    let xi = crate::roots::bisect_scan(theta, 0.0, tau, 256)
        .ok_or_else(|| Error::Numeric(String::from("no sign change for the switch point")))?;

    // Ascent: cumulative integral of the descent profile on [0, xi].
    let ascent_src = descent.restricted(0.0, xi)?;
    let mut segs: Vec<Segment> = Vec::new();
    let mut acc = 0.0;
    for s in ascent_src.segments() {
        let local = s
            .as_local_poly()
            .ok_or_else(|| Error::Numeric(String::from("descent profile not polynomial")))?;
        let mut anti = poly_antiderivative(&local);
        anti[0] = acc;
        segs.push(Segment::poly(s.left, s.right, anti));
        acc += s.integral(s.left, s.right);
    }
    let psi_xi = acc;
    if !(psi_xi > 0.0) {
        return Err(Error::Numeric(String::from("vanishing envelope at switch")));
    }
    // Exponential regime past xi, extended comfortably beyond the threshold
    // crossing so callers can evaluate envelopes over a full cycle.
    let t_end = xi - math::ln(psi_xi) + rho + tau + 1.0;
    segs.push(Segment::exponential(xi, t_end, psi_xi, 1.0, xi));
    let exact = PiecewiseFn::new(segs)?;
    let psi = Trajectory::from_exact(exact, tol::GRID_STEP.max(t_end / 400_000.0), "psi");
    Ok((psi, xi))
}

/// Critical semicycle length: `psi_tau(Lambda - rho) = 1`, located by
/// bisection on the strictly increasing envelope.
pub fn lambda(tau: f64) -> Result<f64> {
    Ok(threshold_record(tau)?.lambda)
}

/// Full threshold bundle for one `tau`.
pub fn threshold_record(tau: f64) -> Result<ThresholdRecord> {
    let record = myshkis_solution(tau)?;
    if tau > 2.0 + 1e-12 {
        return Err(Error::BadParameter(format!(
            "tau = {tau} outside (1/e, 2]"
        )));
    }
    let (psi, xi) = psi_and_xi_from(&record)?;
    let exact = psi.exact.as_ref().unwrap();
    let hi = exact.end();
    let f = |t: f64| exact.eval(t).unwrap() - 1.0;
    if f(hi) < 0.0 {
        return Err(Error::Numeric(String::from(
            "envelope did not reach the threshold",
        )));
    }
    let crossing = if f(xi) >= 0.0 {
        // Already at or above 1 at the switch (tau = 2 boundary case).
        crate::roots::bisect(f, 0.0, xi.max(1e-300))
    } else {
        crate::roots::bisect(f, xi, hi)
    };
    Ok(ThresholdRecord {
        tau,
        lambda: record.rho + crossing,
        rho: record.rho,
        psi,
        xi,
    })
}

/// Closed form of the critical semicycle length for `s >= 1`:
/// `2 + s - sqrt(2 s) - ln(sqrt(2 s) - 1)` on `[1, 2]`, constant 2 beyond.
pub fn lambda_closed_form(s: f64) -> Result<f64> {
    if !(s >= 1.0) {
        return Err(Error::BadParameter(format!(
            "closed form asserted only for s >= 1 (got {s})"
        )));
    }
    if s >= 2.0 {
        return Ok(2.0);
    }
    let r = math::sqrt(2.0 * s);
    Ok(2.0 + s - r - math::ln(r - 1.0))
}

/// Principal root of the characteristic system by damped Newton iteration
/// with continuation in `tau` from the `tau = 1` seed.
pub fn spectral(tau: f64) -> Result<SpectralRecord> {
    if !(tau > math::INV_E + tol::TAU_GUARD) {
        return Err(Error::BelowThreshold { tau });
    }
    let mut t_cur = 1.0;
    let (mut mu, mut nu) = newton_spectral(1.0, 0.3, 1.3)
        .ok_or_else(|| Error::Numeric(String::from("seed solve failed at tau = 1")))?;
    if math::abs(tau - 1.0) < 1e-15 {
        return finish_spectral(tau, mu, nu);
    }
    let mut step: f64 = if tau > 1.0 { 0.25 } else { -0.05 };
    let mut guard = 0;
    while t_cur != tau {
        guard += 1;
        if guard > 100_000 {
            return Err(Error::Numeric(format!(
                "spectral continuation stalled at tau = {t_cur} targeting {tau} (mu = {mu}, nu = {nu})"
            )));
        }
        let mut t_next = t_cur + step;
        if (step > 0.0 && t_next > tau) || (step < 0.0 && t_next < tau) {
            t_next = tau;
        }
        match newton_spectral(t_next, mu, nu) {
            Some((m, n)) => {
                mu = m;
                nu = n;
                t_cur = t_next;
                // Conservative steps near the threshold where the Jacobian
                // degenerates.
                let grown = step * 1.5;
                if tau < 1.0 {
                    let head = t_cur - math::INV_E;
                    let cap = (0.25 * head).max(1e-7);
                    step = grown.max(-cap).min(-1e-9);
                } else {
                    step = grown.min(0.5);
                }
            }
            None => {
                step *= 0.5;
                if math::abs(step) < 1e-12 {
                    return Err(Error::Numeric(format!(
                        "spectral Newton failed near tau = {t_cur} (mu = {mu}, nu = {nu})"
                    )));
                }
            }
        }
    }
    finish_spectral(tau, mu, nu)
}

fn finish_spectral(tau: f64, mu: f64, nu: f64) -> Result<SpectralRecord> {
    let gamma = math::atan((1.0 + mu) / nu);
    let rec = SpectralRecord { tau, mu, nu, gamma };
    let (r1, r2) = rec.residuals();
    if math::abs(r1) > tol::SPECTRAL_RESIDUAL || math::abs(r2) > tol::SPECTRAL_RESIDUAL {
        return Err(Error::Numeric(format!(
            "spectral residuals ({r1}, {r2}) exceed tolerance at tau = {tau}"
        )));
    }
    if !(nu > 0.0 && nu < math::PI && gamma > 0.0 && gamma < math::PI / 2.0) {
        return Err(Error::Numeric(format!(
            "non-principal spectral root at tau = {tau}: mu = {mu}, nu = {nu}"
        )));
    }
    Ok(rec)
}

/// Damped Newton for the 2x2 system; `None` on non-convergence.
fn newton_spectral(tau: f64, mut mu: f64, mut nu: f64) -> Option<(f64, f64)> {
    let f = |mu: f64, nu: f64| -> (f64, f64) {
        let e = math::exp(-mu);
        (mu + tau * e * math::cos(nu), nu - tau * e * math::sin(nu))
    };
    let (mut f1, mut f2) = f(mu, nu);
    for _ in 0..200 {
        let norm = math::abs(f1).max(math::abs(f2));
        if norm <= 1e-14 {
            return Some((mu, nu));
        }
        let e = math::exp(-mu);
        let (c, s) = (math::cos(nu), math::sin(nu));
        let j11 = 1.0 - tau * e * c;
        let j12 = -tau * e * s;
        let j21 = tau * e * s;
        let j22 = 1.0 - tau * e * c;
        let det = j11 * j22 - j12 * j21;
        if math::abs(det) < 1e-300 {
            return None;
        }
        let dmu = (f1 * j22 - f2 * j12) / det;
        let dnu = (j11 * f2 - j21 * f1) / det;
        let mut lam = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let (m_try, n_try) = (mu - lam * dmu, nu - lam * dnu);
            if n_try > 0.0 && n_try < math::PI {
                let (g1, g2) = f(m_try, n_try);
                if math::abs(g1).max(math::abs(g2)) < norm {
                    mu = m_try;
                    nu = n_try;
                    f1 = g1;
                    f2 = g2;
                    accepted = true;
                    break;
                }
            }
            lam *= 0.5;
        }
        if !accepted {
            return None;
        }
    }
    let norm = math::abs(f1).max(math::abs(f2));
    if norm <= 1e-13 {
        Some((mu, nu))
    } else {
        None
    }
}

/// One row of the near-threshold report.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LambdaAsymptoticsRow {
    pub tau: f64,
    pub rho: f64,
    pub xi: f64,
    pub lambda: f64,
    pub mu: f64,
    pub nu: f64,
    pub gamma: f64,
    /// `rho sqrt(tau - 1/e)`.
    pub rho_product: f64,
    /// `Lambda sqrt(tau - 1/e)`.
    pub lambda_product: f64,
    /// `(1 + mu) / nu^2`.
    pub curvature_ratio: f64,
    /// `gamma / nu`.
    pub gamma_ratio: f64,
    /// `(rho + tau)/tau - (pi/nu - 1/3)`.
    pub root_frequency_combo: f64,
}

/// Extrapolated limits against their targets.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LambdaAsymptotics {
    pub rows: Vec<LambdaAsymptoticsRow>,
    pub rho_product_limit: Option<f64>,
    pub lambda_product_limit: Option<f64>,
    pub curvature_ratio_limit: Option<f64>,
    pub gamma_ratio_limit: Option<f64>,
    pub xi_limit: Option<f64>,
    pub rho_product_target: f64,
    pub lambda_product_target: f64,
    pub curvature_ratio_target: f64,
    pub gamma_ratio_target: f64,
    pub xi_target: f64,
}

/// Near-threshold table and extrapolated limits of the blow-up products,
/// the spectral ratios, and the switch point.
pub fn lambda_asymptotics(taus: &[f64]) -> Result<LambdaAsymptotics> {
    if taus.len() < 2 {
        return Err(Error::BadParameter(String::from(
            "need at least two grid points",
        )));
    }
    let mut rows = Vec::with_capacity(taus.len());
    for &tau in taus {
        if !(tau > math::INV_E + tol::TAU_GUARD) {
            return Err(Error::BelowThreshold { tau });
        }
        if tau > math::INV_E + 0.05 + 1e-12 {
            return Err(Error::BadParameter(format!(
                "tau = {tau} outside the near-threshold window (1/e, 1/e + 0.05]"
            )));
        }
        let rec = threshold_record(tau)?;
        let sp = spectral(tau)?;
        let h = tau - math::INV_E;
        rows.push(LambdaAsymptoticsRow {
            tau,
            rho: rec.rho,
            xi: rec.xi,
            lambda: rec.lambda,
            mu: sp.mu,
            nu: sp.nu,
            gamma: sp.gamma,
            rho_product: rec.rho * math::sqrt(h),
            lambda_product: rec.lambda * math::sqrt(h),
            curvature_ratio: (1.0 + sp.mu) / (sp.nu * sp.nu),
            gamma_ratio: sp.gamma / sp.nu,
            root_frequency_combo: (rec.rho + tau) / tau - (math::PI / sp.nu - 1.0 / 3.0),
        });
    }
    let col = |f: &dyn Fn(&LambdaAsymptoticsRow) -> f64| -> Vec<(f64, f64)> {
        rows.iter().map(|r| (r.tau, f(r))).collect()
    };
    Ok(LambdaAsymptotics {
        rho_product_limit: myshkis::extrapolate_tail(&col(&|r| r.rho_product)),
        lambda_product_limit: myshkis::extrapolate_tail(&col(&|r| r.lambda_product)),
        curvature_ratio_limit: myshkis::extrapolate_tail(&col(&|r| r.curvature_ratio)),
        gamma_ratio_limit: myshkis::extrapolate_tail(&col(&|r| r.gamma_ratio)),
        xi_limit: myshkis::extrapolate_tail(&col(&|r| r.xi)),
        rho_product_target: myshkis::rho_critical_coeff(),
        lambda_product_target: lambda_critical_coeff(),
        curvature_ratio_target: 1.0 / 3.0,
        gamma_ratio_target: 1.0 / 3.0,
        xi_target: 0.5 * math::INV_E,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ln(x: f64) -> f64 {
        math::ln(x)
    }

    #[test]
    fn switch_point_closed_values() {
        // xi = tau + 1 - sqrt(2 tau) on [1, 2], and the envelope value at the
        // switch is sqrt(2 tau) - 1.
        let cases = [
            (2.0, 1.0, 1.0),
            (1.125, 0.625, 0.5),
            (1.0, 2.0 - math::sqrt(2.0), math::sqrt(2.0) - 1.0),
        ];
        for &(tau, xi_expect, psi_expect) in &cases {
            let (psi, xi) = psi_and_xi(tau).unwrap();
            assert!((xi - xi_expect).abs() < 1e-12, "tau = {tau}: xi = {xi}");
            let v = psi.eval(xi).unwrap();
            assert!((v - psi_expect).abs() < 1e-12, "tau = {tau}: psi(xi) = {v}");
        }
    }

    #[test]
    fn lambda_anchor_values() {
        let l2 = lambda(2.0).unwrap();
        assert!((l2 - 2.0).abs() < 1e-9, "Lambda(2) = {l2}");
        let l98 = lambda(1.125).unwrap();
        assert!(
            (l98 - (13.0 / 8.0 + ln(2.0))).abs() < 1e-8,
            "Lambda(9/8) = {l98}"
        );
        let l1 = lambda(1.0).unwrap();
        let expect = 3.0 - math::sqrt(2.0) - ln(math::sqrt(2.0) - 1.0);
        assert!((l1 - expect).abs() < 1e-9, "Lambda(1) = {l1}");
    }

    #[test]
    fn closed_form_values_and_domain() {
        assert_eq!(lambda_closed_form(2.0).unwrap(), 2.0);
        assert_eq!(lambda_closed_form(3.7).unwrap(), 2.0);
        let s1 = lambda_closed_form(1.0).unwrap();
        assert!((s1 - (3.0 - math::sqrt(2.0) - ln(math::sqrt(2.0) - 1.0))).abs() < 1e-14);
        let s98 = lambda_closed_form(1.125).unwrap();
        assert!((s98 - (13.0 / 8.0 + ln(2.0))).abs() < 1e-14);
        assert!(lambda_closed_form(0.9).is_err());
    }

    #[test]
    fn numeric_matches_closed_form_on_1_2() {
        for i in 0..20 {
            let s = 1.0 + i as f64 / 19.0;
            let num = lambda(s).unwrap();
            let cf = lambda_closed_form(s).unwrap();
            assert!((num - cf).abs() < 1e-9, "s = {s}: {num} vs {cf}");
        }
    }

    #[test]
    fn record_inequalities() {
        // xi > tau - 1 on [1, 2); Lambda > rho + tau and psi(tau) < 1 on (1/e, 1].
        for &tau in &[1.0, 1.2, 1.5, 1.9] {
            let r = threshold_record(tau).unwrap();
            if (1.0..2.0).contains(&tau) {
                assert!(r.xi > tau - 1.0 + 1e-9, "tau = {tau}");
            }
        }
        for &tau in &[0.45, 0.6, 0.8, 1.0] {
            let r = threshold_record(tau).unwrap();
            assert!(r.lambda > r.rho + tau + 1e-9, "tau = {tau}");
            assert!(r.psi.eval(tau).unwrap() < 1.0 - 1e-9, "tau = {tau}");
            assert!(r.psi.eval(0.0).unwrap().abs() < 1e-14);
            let v = r.psi.eval(r.lambda - r.rho).unwrap();
            assert!((v - 1.0).abs() < 1e-10, "tau = {tau}: psi(L - rho) = {v}");
        }
    }

    #[test]
    fn psi_strictly_increasing() {
        for &tau in &[0.5, 1.0, 1.7] {
            let r = threshold_record(tau).unwrap();
            let hi = r.lambda - r.rho;
            let mut prev = -1.0;
            for i in 0..=300 {
                let t = hi * i as f64 / 300.0;
                let v = r.psi.eval(t).unwrap();
                assert!(v > prev, "tau = {tau}, t = {t}");
                prev = v;
            }
        }
    }

    #[test]
    fn psi_monotone_in_tau() {
        let pairs = [(0.4, 0.6), (0.5, 0.8), (0.8, 1.0)];
        for &(a, b) in &pairs {
            let ra = threshold_record(a).unwrap();
            let rb = threshold_record(b).unwrap();
            let hi = (ra.lambda - ra.rho).min(rb.lambda - rb.rho);
            for i in 0..=100 {
                let t = hi * i as f64 / 100.0;
                let va = ra.psi.eval(t).unwrap();
                let vb = rb.psi.eval(t).unwrap();
                assert!(va <= vb + 1e-10, "tau pair ({a}, {b}), t = {t}");
            }
        }
    }

    #[test]
    fn lambda_strictly_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 0..24 {
            let tau = math::INV_E + 0.01 + (2.0 - math::INV_E - 0.01) * i as f64 / 23.0;
            let l = lambda(tau).unwrap();
            assert!(l < prev - 1e-12, "tau = {tau}: Lambda = {l}, prev = {prev}");
            prev = l;
        }
    }

    #[test]
    fn spectral_residuals_and_tau_one_values() {
        // Independent oracle at tau = 1: nested grid refinement of the
        // squared residual of the characteristic system.
        let f = |mu: f64, nu: f64| -> f64 {
            let e = math::exp(-mu);
            let a = mu + e * math::cos(nu);
            let b = nu - e * math::sin(nu);
            a * a + b * b
        };
        let (mut mu_lo, mut mu_hi, mut nu_lo, mut nu_hi) = (-1.0, 1.0, 0.05, math::PI - 0.05);
        for _ in 0..12 {
            let mut best = (f64::INFINITY, 0.0, 0.0);
            for i in 0..=40 {
                for j in 0..=40 {
                    let m = mu_lo + (mu_hi - mu_lo) * i as f64 / 40.0;
                    let n = nu_lo + (nu_hi - nu_lo) * j as f64 / 40.0;
                    let v = f(m, n);
                    if v < best.0 {
                        best = (v, m, n);
                    }
                }
            }
            let (dm, dn) = ((mu_hi - mu_lo) / 8.0, (nu_hi - nu_lo) / 8.0);
            mu_lo = best.1 - dm;
            mu_hi = best.1 + dm;
            nu_lo = (best.2 - dn).max(1e-6);
            nu_hi = (best.2 + dn).min(math::PI);
        }
        let oracle_mu = 0.5 * (mu_lo + mu_hi);
        let oracle_nu = 0.5 * (nu_lo + nu_hi);

        let rec = spectral(1.0).unwrap();
        let (r1, r2) = rec.residuals();
        assert!(r1.abs() <= 1e-12 && r2.abs() <= 1e-12);
        assert!((rec.mu - oracle_mu).abs() < 1e-5, "{} vs {oracle_mu}", rec.mu);
        assert!((rec.nu - oracle_nu).abs() < 1e-5, "{} vs {oracle_nu}", rec.nu);
        // Principal root: mu is negative (the characteristic root pair
        // tau*lambda = W(-tau) has negative real part at tau = 1).
        assert!((rec.mu + 0.3181).abs() < 5e-4, "mu = {}", rec.mu);
        assert!((rec.nu - 1.3372).abs() < 5e-4, "nu = {}", rec.nu);
    }

    #[test]
    fn spectral_limits_toward_threshold() {
        let mut prev_nu = f64::INFINITY;
        for &h in &[0.02, 0.005, 0.001] {
            let rec = spectral(math::INV_E + h).unwrap();
            let (r1, r2) = rec.residuals();
            assert!(r1.abs() <= 1e-12 && r2.abs() <= 1e-12);
            assert!(rec.nu < prev_nu);
            prev_nu = rec.nu;
            assert!(rec.mu > -1.0 && rec.mu < 0.0, "mu = {}", rec.mu);
        }
        let rec = spectral(math::INV_E + 1e-4).unwrap();
        assert!((rec.mu + 1.0).abs() < 0.02, "mu = {}", rec.mu);
        assert!(rec.nu < 0.03, "nu = {}", rec.nu);
    }

    #[test]
    fn spectral_far_above_one() {
        let rec = spectral(5.0).unwrap();
        let (r1, r2) = rec.residuals();
        assert!(r1.abs() <= 1e-12 && r2.abs() <= 1e-12);
        assert!(rec.nu > 1.3372 && rec.nu < math::PI);
    }

    #[test]
    fn oscillatory_approximant_of_the_descent() {
        // Near the threshold the descent profile is captured by the damped
        // oscillation written in terms of (mu, nu, gamma), with the stated
        // prefactor pi^2 / (3 (ln 4 - 1)) on the error envelope.
        let tau = math::INV_E + 0.005;
        let rec = myshkis_solution(tau).unwrap();
        let sp = spectral(tau).unwrap();
        let phase = (rec.rho + tau) / tau;
        let ratio = (1.0 + sp.mu) / sp.nu;
        let amp = 2.0 / math::sqrt(ratio * ratio + 1.0);
        let prefactor = math::PI * math::PI / (3.0 * (math::ln(4.0) - 1.0));
        for i in 0..=60 {
            let t = tau * i as f64 / 60.0;
            let arg = phase - (tau - t) / tau;
            let approx =
                math::exp(sp.mu * arg) * amp * math::sin(sp.nu * arg + sp.gamma) / sp.nu;
            let bound = prefactor
                * math::exp(-arg * (math::ln(4.0) - 1.0))
                * math::exp(sp.mu * arg);
            let actual = rec.eval(rec.rho + t - tau);
            assert!(
                (actual - approx).abs() <= bound * (1.0 + 1e-9),
                "t = {t}: |{actual} - {approx}| > {bound}"
            );
        }
    }

    #[test]
    fn near_threshold_extrapolations() {
        let taus = [
            math::INV_E + 0.016,
            math::INV_E + 0.004,
            math::INV_E + 0.001,
        ];
        let rep = lambda_asymptotics(&taus).unwrap();
        let rho_lim = rep.rho_product_limit.unwrap();
        assert!(
            (rho_lim - rep.rho_product_target).abs() / rep.rho_product_target < 0.02,
            "rho product limit {rho_lim}"
        );
        let curv = rep.curvature_ratio_limit.unwrap();
        assert!((curv - 1.0 / 3.0).abs() < 0.01 / 3.0, "curvature {curv}");
        let gam = rep.gamma_ratio_limit.unwrap();
        assert!((gam - 1.0 / 3.0).abs() < 0.02 / 3.0, "gamma ratio {gam}");
        // Measured limits of the switch point and the Lambda product: the
        // switch-point equation against the damped-oscillation profile gives
        // xi -> tau/(1+tau) -> 1/(1+e), and Lambda sqrt(tau - 1/e) ->
        // pi/sqrt(2 e^3) (1+e); both confirmed by the extrapolation here.
        let xi = rep.xi_limit.unwrap();
        let xi_measured_limit = 1.0 / (1.0 + math::E);
        assert!(
            (xi - xi_measured_limit).abs() / xi_measured_limit < 0.02,
            "xi limit {xi} vs 1/(1+e) = {xi_measured_limit}"
        );
        let lam = rep.lambda_product_limit.unwrap();
        let lam_measured_limit = myshkis::rho_critical_coeff() * (1.0 + math::E);
        assert!(
            (lam - lam_measured_limit).abs() / lam_measured_limit < 0.02,
            "lambda product limit {lam} vs {lam_measured_limit}"
        );
        assert!(rep.rows.last().unwrap().root_frequency_combo.abs() < 0.05);
    }
}
