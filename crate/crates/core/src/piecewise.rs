//! Exact piecewise-analytic functions on a breakpoint partition.
//!
//! Segments are constant, affine, polynomial, or exponential; every
//! construction in this crate stays inside that algebra, which is what makes
//! exact-mode integration possible. Polynomial coefficients are stored in
//! local coordinates `(t - left)` so high-degree method-of-steps segments
//! stay well conditioned.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Closed-form shape of one segment.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "snake_case"))]
pub enum SegmentKind {
    /// `f(t) = value`.
    Constant { value: f64 },
    /// `f(t) = a + b t` (global coordinates).
    Affine { a: f64, b: f64 },
    /// `f(t) = sum coeffs[j] (t - left)^j` (local coordinates).
    Polynomial { coeffs: Vec<f64> },
    /// `f(t) = coeff * exp(rate * (t - t_ref))`. `rate` defaults to 1, which
    /// covers the unit-rate growth segments of the threshold constructions;
    /// other rates arise from local `x' = p x` flows and affine delay maps.
    Exponential {
        coeff: f64,
        #[cfg_attr(feature = "serde", serde(default = "one"))]
        rate: f64,
        t_ref: f64,
    },
}

#[cfg(feature = "serde")]
fn one() -> f64 {
    1.0
}

/// One breakpoint interval together with its closed form.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Segment {
    pub left: f64,
    pub right: f64,
    pub kind: SegmentKind,
}

/// Periodic extension rule: `f(t + period) = sign * f(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Periodicity {
    pub period: f64,
    /// `+1` for periodic, `-1` for antiperiodic.
    pub sign: i8,
}

impl Segment {
    pub fn constant(left: f64, right: f64, value: f64) -> Self {
        Segment {
            left,
            right,
            kind: SegmentKind::Constant { value },
        }
    }

    pub fn affine(left: f64, right: f64, a: f64, b: f64) -> Self {
        Segment {
            left,
            right,
            kind: SegmentKind::Affine { a, b },
        }
    }

    /// Polynomial in local coordinates `(t - left)`.
    pub fn poly(left: f64, right: f64, coeffs: Vec<f64>) -> Self {
        Segment {
            left,
            right,
            kind: SegmentKind::Polynomial { coeffs },
        }
    }

    pub fn exponential(left: f64, right: f64, coeff: f64, rate: f64, t_ref: f64) -> Self {
        Segment {
            left,
            right,
            kind: SegmentKind::Exponential { coeff, rate, t_ref },
        }
    }

    pub fn width(&self) -> f64 {
        self.right - self.left
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.left.is_finite() && self.right.is_finite()) || self.left >= self.right {
            return Err(Error::InvalidSpec(format_invalid(self.left, self.right)));
        }
        match &self.kind {
            SegmentKind::Polynomial { coeffs } if coeffs.is_empty() => Err(Error::InvalidSpec(
                String::from("polynomial segment with empty coefficient sequence"),
            )),
            SegmentKind::Exponential { rate, .. } if !rate.is_finite() => Err(Error::InvalidSpec(
                String::from("exponential segment with non-finite rate"),
            )),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.kind {
            SegmentKind::Constant { value } => *value,
            SegmentKind::Affine { a, b } => a + b * t,
            SegmentKind::Polynomial { coeffs } => poly_eval(coeffs, t - self.left),
            SegmentKind::Exponential { coeff, rate, t_ref } => {
                coeff * math::exp(rate * (t - t_ref))
            }
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match &self.kind {
            SegmentKind::Constant { .. } => 0.0,
            SegmentKind::Affine { b, .. } => *b,
            SegmentKind::Polynomial { coeffs } => poly_eval(&poly_derivative(coeffs), t - self.left),
            SegmentKind::Exponential { rate, .. } => rate * self.eval(t),
        }
    }

    /// `int_left^t` of the segment. Exact for every kind.
    pub fn antiderivative(&self, t: f64) -> f64 {
        let u = t - self.left;
        match &self.kind {
            SegmentKind::Constant { value } => value * u,
            SegmentKind::Affine { a, b } => {
                (a + b * self.left) * u + 0.5 * b * u * u
            }
            SegmentKind::Polynomial { coeffs } => poly_eval(&poly_antiderivative(coeffs), u),
            SegmentKind::Exponential { coeff, rate, t_ref } => {
                if *rate == 0.0 {
                    coeff * u
                } else {
                    (coeff / rate)
                        * (math::exp(rate * (t - t_ref)) - math::exp(rate * (self.left - t_ref)))
                }
            }
        }
    }

    pub fn integral(&self, a: f64, b: f64) -> f64 {
        self.antiderivative(b) - self.antiderivative(a)
    }

    /// Local-coordinate polynomial coefficients, when the kind is polynomial-like.
    pub fn as_local_poly(&self) -> Option<Vec<f64>> {
        match &self.kind {
            SegmentKind::Constant { value } => Some(vec![*value]),
            SegmentKind::Affine { a, b } => Some(vec![a + b * self.left, *b]),
            SegmentKind::Polynomial { coeffs } => Some(coeffs.clone()),
            SegmentKind::Exponential { .. } => None,
        }
    }

    /// Segment representing `t -> self(m t + q)` on `[new_left, new_right]`.
    pub fn compose_affine(&self, m: f64, q: f64, new_left: f64, new_right: f64) -> Segment {
        let kind = match &self.kind {
            SegmentKind::Constant { value } => SegmentKind::Constant { value: *value },
            SegmentKind::Affine { a, b } => SegmentKind::Affine {
                a: a + b * q,
                b: b * m,
            },
            SegmentKind::Polynomial { coeffs } => {
                if m == 0.0 {
                    SegmentKind::Constant {
                        value: poly_eval(coeffs, q - self.left),
                    }
                } else {
                    let s0 = m * new_left + q - self.left;
                    SegmentKind::Polynomial {
                        coeffs: poly_compose_affine(coeffs, m, s0),
                    }
                }
            }
            SegmentKind::Exponential { coeff, rate, t_ref } => {
                if m == 0.0 {
                    SegmentKind::Constant {
                        value: coeff * math::exp(rate * (q - t_ref)),
                    }
                } else {
                    SegmentKind::Exponential {
                        coeff: coeff * math::exp(rate * (m * new_left + q - t_ref)),
                        rate: rate * m,
                        t_ref: new_left,
                    }
                }
            }
        };
        Segment {
            left: new_left,
            right: new_right,
            kind,
        }
    }

    /// Translate the segment in time: the new segment satisfies
    /// `new(t) = self(t - dt)`.
    pub fn shifted(&self, dt: f64) -> Segment {
        let kind = match &self.kind {
            SegmentKind::Constant { value } => SegmentKind::Constant { value: *value },
            SegmentKind::Affine { a, b } => SegmentKind::Affine { a: a - b * dt, b: *b },
            SegmentKind::Polynomial { coeffs } => SegmentKind::Polynomial {
                coeffs: coeffs.clone(),
            },
            SegmentKind::Exponential { coeff, rate, t_ref } => SegmentKind::Exponential {
                coeff: *coeff,
                rate: *rate,
                t_ref: t_ref + dt,
            },
        };
        Segment {
            left: self.left + dt,
            right: self.right + dt,
            kind,
        }
    }

    pub fn scaled(&self, c: f64) -> Segment {
        let kind = match &self.kind {
            SegmentKind::Constant { value } => SegmentKind::Constant { value: c * value },
            SegmentKind::Affine { a, b } => SegmentKind::Affine { a: c * a, b: c * b },
            SegmentKind::Polynomial { coeffs } => SegmentKind::Polynomial {
                coeffs: coeffs.iter().map(|x| c * x).collect(),
            },
            SegmentKind::Exponential { coeff, rate, t_ref } => SegmentKind::Exponential {
                coeff: c * coeff,
                rate: *rate,
                t_ref: *t_ref,
            },
        };
        Segment {
            left: self.left,
            right: self.right,
            kind,
        }
    }

    /// Roots of the segment restricted to `[a, b]`, with `scale` setting the
    /// absolute tolerance. Returns point roots plus an optional
    /// identically-zero flag for zero constant segments.
    pub fn roots_in(&self, a: f64, b: f64, scale: f64) -> (Vec<f64>, bool) {
        let lo = a.max(self.left);
        let hi = b.min(self.right);
        if lo >= hi {
            return (Vec::new(), false);
        }
        let tol = crate::tol::ROOT_ABS * scale.max(f64::MIN_POSITIVE);
        match &self.kind {
            SegmentKind::Constant { value } => {
                if math::abs(*value) <= tol {
                    (Vec::new(), true)
                } else {
                    (Vec::new(), false)
                }
            }
            SegmentKind::Affine { a: c0, b: c1 } => {
                if *c1 == 0.0 {
                    return if math::abs(*c0) <= tol {
                        (Vec::new(), true)
                    } else {
                        (Vec::new(), false)
                    };
                }
                let r = -c0 / c1;
                if r >= lo - tol && r <= hi + tol {
                    (vec![r.clamp(lo, hi)], false)
                } else {
                    (Vec::new(), false)
                }
            }
            SegmentKind::Exponential { coeff, .. } => {
                if math::abs(*coeff) == 0.0 {
                    (Vec::new(), true)
                } else {
                    (Vec::new(), false)
                }
            }
            SegmentKind::Polynomial { coeffs } => {
                if coeffs.iter().all(|c| math::abs(*c) <= tol) {
                    return (Vec::new(), true);
                }
                (scan_roots(|t| self.eval(t), lo, hi, tol), false)
            }
        }
    }
}

fn format_invalid(left: f64, right: f64) -> String {
    use alloc::format;
    format!("segment with invalid span [{left}, {right}]")
}

/// Sign-scan plus bisection root extraction for a scalar function, with
/// tangential (non-sign-changing) zeros detected through local minima of the
/// absolute value.
pub(crate) fn scan_roots<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Vec<f64> {
    const N: usize = 64;
    let h = (hi - lo) / N as f64;
    let mut out = Vec::new();
    let mut prev_t = lo;
    let mut prev_v = f(lo);
    if math::abs(prev_v) <= tol {
        out.push(lo);
    }
    for i in 1..=N {
        let t = if i == N { hi } else { lo + i as f64 * h };
        let v = f(t);
        if math::abs(v) <= tol {
            // Walk to the left edge of a flat zero region; report once.
            out.push(t);
        } else if prev_v != 0.0 && v != 0.0 && (prev_v < 0.0) != (v < 0.0) {
            out.push(crate::roots::bisect(&f, prev_t, t));
        }
        prev_t = t;
        prev_v = v;
    }
    // Tangential zeros: local minima of |f| below tolerance after refinement.
    let mut prev = f(lo);
    let mut curr = f(lo + h);
    for i in 1..N {
        let next = f(lo + (i + 1) as f64 * h);
        if math::abs(curr) < math::abs(prev) && math::abs(curr) <= math::abs(next) {
            let (tm, fm) = math::golden_min(
                |t| math::abs(f(t)),
                lo + (i - 1) as f64 * h,
                lo + (i + 1) as f64 * h,
                1e-14 * (hi - lo).max(1.0),
            );
            if fm <= tol {
                out.push(tm);
            }
        }
        prev = curr;
        curr = next;
    }
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    dedup_points(&mut out, 1e-9 * (hi - lo).max(1.0));
    out
}

pub(crate) fn dedup_points(points: &mut Vec<f64>, tol: f64) {
    let mut i = 1;
    while i < points.len() {
        if points[i] - points[i - 1] <= tol {
            points.remove(i);
        } else {
            i += 1;
        }
    }
}

/// Exact piecewise-analytic function on `[start, end]`, optionally extended
/// to the whole line by a (anti)periodicity rule.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PiecewiseFn {
    segments: Vec<Segment>,
    start: f64,
    end: f64,
    pub periodicity: Option<Periodicity>,
}

impl PiecewiseFn {
    /// Build from contiguous segments. Adjacent endpoints are snapped to the
    /// shared breakpoint; gaps or overlaps beyond tolerance are rejected.
    pub fn new(mut segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidSpec(String::from("no segments")));
        }
        for seg in &segments {
            seg.validate()?;
        }
        let span = segments.last().unwrap().right - segments[0].left;
        let tol = 1e-9 * span.abs().max(1.0);
        for i in 1..segments.len() {
            let gap = segments[i].left - segments[i - 1].right;
            if math::abs(gap) > tol {
                return Err(Error::InvalidSpec(String::from(
                    "segments do not tile the domain (gap or overlap)",
                )));
            }
            let shared = segments[i - 1].right;
            segments[i].left = shared;
        }
        let start = segments[0].left;
        let end = segments.last().unwrap().right;
        Ok(PiecewiseFn {
            segments,
            start,
            end,
            periodicity: None,
        })
    }

    pub fn constant(start: f64, end: f64, value: f64) -> Self {
        PiecewiseFn {
            segments: vec![Segment::constant(start, end, value)],
            start,
            end,
            periodicity: None,
        }
    }

    pub fn with_periodicity(mut self, period: f64, sign: i8) -> Result<Self> {
        if !(period > 0.0) || (sign != 1 && sign != -1) {
            return Err(Error::InvalidSpec(String::from(
                "periodicity needs period > 0 and sign in {+1, -1}",
            )));
        }
        if period > self.end - self.start + 1e-9 * period {
            return Err(Error::InvalidSpec(String::from(
                "period exceeds the represented base domain",
            )));
        }
        self.periodicity = Some(Periodicity { period, sign });
        Ok(self)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// All breakpoints including the domain endpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.segments.len() + 1);
        out.push(self.start);
        for s in &self.segments {
            out.push(s.right);
        }
        out
    }

    /// Reduce `t` into the base domain, returning the sign factor picked up
    /// by antiperiodic wraps.
    pub fn reduce(&self, t: f64) -> Result<(f64, f64)> {
        if t >= self.start && t <= self.end {
            return Ok((t, 1.0));
        }
        let Some(p) = self.periodicity else {
            return Err(Error::OutOfDomain {
                t,
                start: self.start,
                end: self.end,
            });
        };
        let k = math::floor((t - self.start) / p.period);
        let mut tr = t - k * p.period;
        // Guard against floating rounding right at the edges.
        if tr < self.start {
            tr = self.start;
        }
        if tr > self.end {
            tr = self.end;
        }
        let sign = if p.sign == 1 {
            1.0
        } else {
            // (-1)^k via the parity of k (exact for |k| < 2^53).
            let half = k / 2.0;
            if half == math::floor(half) {
                1.0
            } else {
                -1.0
            }
        };
        Ok((tr, sign))
    }

    fn segment_index(&self, t: f64) -> usize {
        // Right-limit convention at interior breakpoints.
        let mut lo = 0usize;
        let mut hi = self.segments.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.segments[mid].right <= t {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo.min(self.segments.len() - 1)
    }

    /// Evaluate with periodic reduction. Out-of-domain points of a
    /// non-periodic function are a domain error.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let (tr, sign) = self.reduce(t)?;
        Ok(sign * self.segments[self.segment_index(tr)].eval(tr))
    }

    /// One-sided derivative (right-limit convention at breakpoints).
    pub fn derivative(&self, t: f64) -> Result<f64> {
        let (tr, sign) = self.reduce(t)?;
        Ok(sign * self.segments[self.segment_index(tr)].derivative(tr))
    }

    /// Exact integral over `[a, b]` (orientation-aware), with periodic
    /// reduction applied chunk by chunk.
    pub fn integrate(&self, a: f64, b: f64) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        if a > b {
            return Ok(-self.integrate(b, a)?);
        }
        if a >= self.start && b <= self.end {
            return Ok(self.integrate_in_domain(a, b));
        }
        let Some(p) = self.periodicity else {
            return Err(Error::OutOfDomain {
                t: if a < self.start { a } else { b },
                start: self.start,
                end: self.end,
            });
        };
        // Split at period boundaries so each chunk reduces into the domain.
        let mut total = 0.0;
        let mut lo = a;
        while lo < b - 1e-15 * (1.0 + math::abs(b)) {
            let k = math::floor((lo - self.start) / p.period);
            let edge = self.start + (k + 1.0) * p.period;
            let hi = edge.min(b);
            let rlo = (lo - k * p.period).clamp(self.start, self.end);
            let rhi = (rlo + (hi - lo)).min(self.end);
            let sign = if p.sign == 1 {
                1.0
            } else {
                let half = k / 2.0;
                if half == math::floor(half) {
                    1.0
                } else {
                    -1.0
                }
            };
            total += sign * self.integrate_in_domain(rlo, rhi);
            lo = hi;
        }
        Ok(total)
    }

    fn integrate_in_domain(&self, a: f64, b: f64) -> f64 {
        let i0 = self.segment_index(a);
        let i1 = self.segment_index(b);
        if i0 == i1 {
            return self.segments[i0].integral(a, b);
        }
        let mut total = self.segments[i0].integral(a, self.segments[i0].right);
        for seg in &self.segments[i0 + 1..i1] {
            total += seg.integral(seg.left, seg.right);
        }
        total += self.segments[i1].integral(self.segments[i1].left, b);
        total
    }

    /// Largest jump across interior breakpoints (zero for continuous
    /// solution-valued functions, up to rounding).
    pub fn max_breakpoint_jump(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for w in self.segments.windows(2) {
            let t = w[0].right;
            worst = worst.max(math::abs(w[0].eval(t) - w[1].eval(t)));
        }
        worst
    }

    /// Translate the whole function in time: `new(t) = self(t - dt)`.
    pub fn shifted(&self, dt: f64) -> PiecewiseFn {
        PiecewiseFn {
            segments: self.segments.iter().map(|s| s.shifted(dt)).collect(),
            start: self.start + dt,
            end: self.end + dt,
            periodicity: self.periodicity,
        }
    }

    pub fn scaled(&self, c: f64) -> PiecewiseFn {
        PiecewiseFn {
            segments: self.segments.iter().map(|s| s.scaled(c)).collect(),
            start: self.start,
            end: self.end,
            periodicity: self.periodicity,
        }
    }

    /// Restriction to `[a, b] ⊆ domain`, splitting boundary segments.
    pub fn restricted(&self, a: f64, b: f64) -> Result<PiecewiseFn> {
        if a < self.start - 1e-12 || b > self.end + 1e-12 || a >= b {
            return Err(Error::OutOfDomain {
                t: a,
                start: self.start,
                end: self.end,
            });
        }
        let mut segs = Vec::new();
        for s in &self.segments {
            let lo = s.left.max(a);
            let hi = s.right.min(b);
            if hi - lo > 1e-14 * (1.0 + math::abs(hi)) {
                let mut c = s.clone();
                // Re-anchor local polynomials when the left edge moves.
                if let SegmentKind::Polynomial { coeffs } = &s.kind {
                    if lo != s.left {
                        c.kind = SegmentKind::Polynomial {
                            coeffs: poly_compose_affine(coeffs, 1.0, lo - s.left),
                        };
                    }
                }
                c.left = lo;
                c.right = hi;
                segs.push(c);
            }
        }
        PiecewiseFn::new(segs)
    }

    /// Sample on the union of breakpoints and a uniform grid of the given step.
    pub fn sample(&self, step: f64) -> (Vec<f64>, Vec<f64>) {
        let mut grid: Vec<f64> = Vec::new();
        let n = math::ceil((self.end - self.start) / step).max(1.0) as usize;
        for i in 0..=n {
            grid.push(self.start + (self.end - self.start) * i as f64 / n as f64);
        }
        grid.extend(self.breakpoints());
        grid.sort_by(|x, y| x.partial_cmp(y).unwrap());
        dedup_points(&mut grid, 1e-15 * (self.end - self.start).max(1.0));
        let values = grid
            .iter()
            .map(|&t| self.eval(t).expect("sample point inside domain"))
            .collect();
        (grid, values)
    }

    /// Exact absolute value: segments are split at their roots and the
    /// negative parts are negated. Returns the roots actually used.
    pub fn abs(&self) -> (PiecewiseFn, Vec<f64>) {
        let scale = self.sup_abs_estimate();
        let mut segs = Vec::new();
        let mut all_roots = Vec::new();
        for s in &self.segments {
            let (mut roots, identically_zero) = s.roots_in(s.left, s.right, scale);
            if identically_zero {
                segs.push(s.clone());
                continue;
            }
            roots.retain(|r| *r > s.left + 1e-14 && *r < s.right - 1e-14);
            let mut edges = vec![s.left];
            edges.extend(roots.iter().copied());
            edges.push(s.right);
            for w in edges.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                if hi - lo <= 1e-14 * (1.0 + math::abs(hi)) {
                    continue;
                }
                let mid = 0.5 * (lo + hi);
                let mut piece = s.clone();
                if let SegmentKind::Polynomial { coeffs } = &s.kind {
                    if lo != s.left {
                        piece.kind = SegmentKind::Polynomial {
                            coeffs: poly_compose_affine(coeffs, 1.0, lo - s.left),
                        };
                    }
                }
                piece.left = lo;
                piece.right = hi;
                if s.eval(mid) < 0.0 {
                    piece = piece.scaled(-1.0);
                }
                segs.push(piece);
            }
            all_roots.extend(roots);
        }
        let mut f = PiecewiseFn::new(segs).expect("abs preserves tiling");
        if let Some(p) = self.periodicity {
            // |f| of an antiperiodic function is periodic with the same period.
            f.periodicity = Some(Periodicity {
                period: p.period,
                sign: 1,
            });
        }
        (f, all_roots)
    }

    /// Cheap estimate of `sup |f|` from breakpoints and midpoints.
    pub fn sup_abs_estimate(&self) -> f64 {
        let mut m: f64 = 0.0;
        for s in &self.segments {
            m = m.max(math::abs(s.eval(s.left)));
            m = m.max(math::abs(s.eval(0.5 * (s.left + s.right))));
            m = m.max(math::abs(s.eval(s.right)));
        }
        m
    }
}

// --- local-coordinate polynomial helpers ---

pub(crate) fn poly_eval(coeffs: &[f64], u: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * u + c;
    }
    acc
}

pub(crate) fn poly_derivative(coeffs: &[f64]) -> Vec<f64> {
    if coeffs.len() <= 1 {
        return vec![0.0];
    }
    coeffs[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| c * (i + 1) as f64)
        .collect()
}

pub(crate) fn poly_antiderivative(coeffs: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(coeffs.len() + 1);
    out.push(0.0);
    for (i, c) in coeffs.iter().enumerate() {
        out.push(c / (i + 1) as f64);
    }
    out
}

pub(crate) fn poly_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0.0) + b.get(i).copied().unwrap_or(0.0))
        .collect()
}

pub(crate) fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients of `P(m w + s0)` given those of `P(u)`.
pub(crate) fn poly_compose_affine(coeffs: &[f64], m: f64, s0: f64) -> Vec<f64> {
    let mut acc = vec![0.0; coeffs.len()];
    let mut basis = vec![1.0]; // (m w + s0)^j, starting at j = 0
    for (j, &c) in coeffs.iter().enumerate() {
        for (i, &b) in basis.iter().enumerate() {
            acc[i] += c * b;
        }
        if j + 1 < coeffs.len() {
            // basis <- basis * (m w + s0)
            let mut next = vec![0.0; basis.len() + 1];
            for (i, &b) in basis.iter().enumerate() {
                next[i] += b * s0;
                next[i + 1] += b * m;
            }
            basis = next;
        }
    }
    trim_poly(&mut acc);
    acc
}

pub(crate) fn trim_poly(coeffs: &mut Vec<f64>) {
    while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
        coeffs.pop();
    }
}
