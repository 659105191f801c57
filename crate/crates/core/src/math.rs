//! Scalar math shims (std intrinsics or `libm`) and small numeric helpers.

#![allow(clippy::excessive_precision)]

/// Euler's number.
pub const E: f64 = core::f64::consts::E;
/// Pi.
pub const PI: f64 = core::f64::consts::PI;
/// The oscillation threshold `1/e`.
pub const INV_E: f64 = 1.0 / core::f64::consts::E;

macro_rules! shim {
    ($name:ident) => {
        #[inline]
        pub fn $name(x: f64) -> f64 {
            #[cfg(feature = "std")]
            {
                x.$name()
            }
            #[cfg(not(feature = "std"))]
            {
                libm::$name(x)
            }
        }
    };
}

shim!(exp);
shim!(sqrt);
shim!(sin);
shim!(cos);
shim!(atan);
shim!(floor);
shim!(ceil);

/// Euclidean remainder with a positive modulus.
#[inline]
pub fn rem_euclid(x: f64, modulus: f64) -> f64 {
    let r = x - modulus * floor(x / modulus);
    if r < 0.0 {
        r + modulus
    } else if r >= modulus {
        r - modulus
    } else {
        r
    }
}

#[inline]
pub fn ln(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.ln()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::log(x)
    }
}

#[inline]
pub fn abs(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.abs()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::fabs(x)
    }
}

/// Integer power by repeated multiplication (exact for small exponents).
#[inline]
pub fn powi(x: f64, n: i32) -> f64 {
    #[cfg(feature = "std")]
    {
        x.powi(n)
    }
    #[cfg(not(feature = "std"))]
    {
        libm::pow(x, n as f64)
    }
}

/// Two-level Richardson extrapolation of a three-term sequence sampled at
/// steps `h, h/s, h/s^2`, assuming an error expansion `a h^(1/2) + b h + ...`.
/// The first level removes the square-root term, the second the linear term.
pub fn richardson_two_level(f: [f64; 3], s: f64) -> f64 {
    let sp = sqrt(s); // s^(1/2)
    let g0 = (sp * f[1] - f[0]) / (sp - 1.0);
    let g1 = (sp * f[2] - f[1]) / (sp - 1.0);
    (s * g1 - g0) / (s - 1.0)
}

/// Golden-section minimisation of a unimodal function on `[a, b]`.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    let m = 0.5 * (a + b);
    let fm = f(m);
    if fm < fc && fm < fd {
        (m, fm)
    } else if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn richardson_recovers_limit_of_sqrt_plus_linear() {
        // f(h) = 3 + 2 sqrt(h) - 5 h, sampled at h, h/4, h/16.
        let f = |h: f64| 3.0 + 2.0 * sqrt(h) - 5.0 * h;
        let est = richardson_two_level([f(0.016), f(0.004), f(0.001)], 4.0);
        assert!((est - 3.0).abs() < 1e-12, "est = {est}");
    }

    #[test]
    fn golden_finds_parabola_min() {
        let (x, _) = golden_min(|x| (x - 0.3) * (x - 0.3), -1.0, 2.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-9);
    }
}
