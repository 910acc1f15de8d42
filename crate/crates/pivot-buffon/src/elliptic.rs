//! Complete elliptic integral of the second kind,
//! `E(k) = int_0^{pi/2} sqrt(1 - k^2 sin^2 theta) dtheta`.
//!
//! The fast path is the arithmetic-geometric mean iteration; an adaptive
//! quadrature of the defining integral serves as an independent oracle.

use std::f64::consts::FRAC_PI_2;

use thiserror::Error;

use crate::quadrature::{self, QuadratureError};

/// Slack for `k^2` values that land outside `[0, 1]` by construction rounding.
const DOMAIN_TOLERANCE: f64 = 1e-12;

/// Relative gap between the arithmetic and geometric means at which the
/// AGM iteration stops. A few ulp: any tighter is unreachable in f64, and
/// iterating past convergence poisons the sum through the 2^n weights.
const AGM_EPSILON: f64 = 4.0 * f64::EPSILON;

/// AGM iteration cap; convergence is quadratic, so this is never reached.
const AGM_MAX_ITER: usize = 64;

#[derive(Debug, Error, PartialEq)]
pub enum EllipticError {
    #[error("k^2 = {0} lies outside [0, 1]")]
    ModulusOutOfRange(f64),
    #[error("quadrature tolerance must be in (0, 1e-6], got {0:e}")]
    InvalidTolerance(f64),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Elliptic modulus `k`, stored as `k^2`.
///
/// The canonical construction path takes `k^2`: the needle's modulus
/// `k^2 = 4ab/(a+b)^2` arrives in that form, and a square root would cost a
/// bit of precision for nothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    k_squared: f64,
}

impl Modulus {
    /// Accepts `k^2` in `[0, 1]`, tolerating rounding overshoot up to 1e-12
    /// (clamped back into range). Anything further out is a domain error.
    pub fn from_k_squared(k_squared: f64) -> Result<Self, EllipticError> {
        if !(-DOMAIN_TOLERANCE..=1.0 + DOMAIN_TOLERANCE).contains(&k_squared) {
            return Err(EllipticError::ModulusOutOfRange(k_squared));
        }
        Ok(Self {
            k_squared: k_squared.clamp(0.0, 1.0),
        })
    }

    pub fn from_k(k: f64) -> Result<Self, EllipticError> {
        Self::from_k_squared(k * k)
    }

    pub fn k_squared(self) -> f64 {
        self.k_squared
    }

    pub fn k(self) -> f64 {
        self.k_squared.sqrt()
    }
}

/// `E(k)` by the AGM iteration.
///
/// With `a_0 = 1`, `b_0 = sqrt(1 - k^2)`, `c_0 = k` and the usual updates
/// `a_{n+1} = (a_n + b_n)/2`, `b_{n+1} = sqrt(a_n b_n)`,
/// `c_{n+1} = (a_n - b_n)/2`:
///
/// ```text
/// E(k) = (1 - sum_{n>=0} 2^{n-1} c_n^2) * pi / (2 * agm(1, b_0))
/// ```
///
/// Converges quadratically; the result is exact at both endpoints
/// (`E(0) = pi/2`, `E(1) = 1`, where the iteration for `E` degenerates and
/// is special-cased) and accurate to full double precision in between.
pub fn complete_e(m: Modulus) -> f64 {
    let m2 = m.k_squared();
    if m2 == 0.0 {
        return FRAC_PI_2;
    }
    if m2 == 1.0 {
        return 1.0;
    }

    let mut a = 1.0_f64;
    let mut b = (1.0 - m2).sqrt();
    let mut sum = 0.5 * m2; // 2^{-1} c_0^2
    let mut weight = 0.5;

    for _ in 0..AGM_MAX_ITER {
        let c = 0.5 * (a - b);
        let next_a = 0.5 * (a + b);
        let next_b = (a * b).sqrt();
        weight *= 2.0;
        sum += weight * c * c;
        a = next_a;
        b = next_b;
        if (a - b).abs() <= AGM_EPSILON * a {
            break;
        }
    }

    (1.0 - sum) * FRAC_PI_2 / a
}

/// `E(k)` by adaptive quadrature of the defining integral, to absolute
/// tolerance `tol` in `(0, 1e-6]`.
///
/// This is the oracle route: it shares nothing with the AGM iteration and is
/// meant for tests and validation runs, not hot paths. Non-convergence is an
/// explicit error.
pub fn complete_e_quadrature(m: Modulus, tol: f64) -> Result<f64, EllipticError> {
    if !(tol > 0.0_f64 && tol <= 1e-6) {
        return Err(EllipticError::InvalidTolerance(tol));
    }
    let m2 = m.k_squared();
    let integrand = move |theta: f64| {
        let s = theta.sin();
        (1.0 - m2 * s * s).max(0.0).sqrt()
    };
    Ok(quadrature::integrate(integrand, 0.0, FRAC_PI_2, tol)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(got: f64, want: f64, tol: f64, msg: &str) {
        assert!(
            (got - want).abs() <= tol,
            "{msg}: got {got}, want {want}, diff {:e}",
            (got - want).abs()
        );
    }

    fn modulus(k_squared: f64) -> Modulus {
        Modulus::from_k_squared(k_squared).unwrap()
    }

    #[test]
    fn endpoint_values_are_exact() {
        assert_eq!(complete_e(modulus(0.0)), FRAC_PI_2);
        assert_eq!(complete_e(modulus(1.0)), 1.0);
    }

    #[test]
    fn reference_values() {
        // mpmath ellipe, 30 digits
        assert_close(
            complete_e(modulus(0.75)),
            1.211_056_027_568_459_5,
            1e-13,
            "E at k^2=0.75",
        );
        assert_close(
            complete_e(modulus(0.5)),
            1.350_643_881_047_675_5,
            1e-13,
            "E at k^2=0.5",
        );
        assert_close(
            complete_e(modulus(0.9375)),
            1.072_302_721_894_604_3,
            1e-13,
            "E at k^2=0.9375",
        );
    }

    #[test]
    fn quadrature_endpoint_examples() {
        let e0 = complete_e_quadrature(modulus(0.0), 1e-10).unwrap();
        assert_close(e0, FRAC_PI_2, 1e-10, "quadrature at k=0");
        let e1 = complete_e_quadrature(modulus(1.0), 1e-10).unwrap();
        assert_close(e1, 1.0, 1e-9, "quadrature at k=1");
    }

    #[test]
    fn quadrature_reference_value() {
        let e = complete_e_quadrature(modulus(0.5), 1e-6).unwrap();
        assert_close(e, 1.350_643_881_047_675_5, 1e-6, "quadrature at k^2=0.5");
    }

    #[test]
    fn quadrature_tolerance_bounds() {
        assert_eq!(
            complete_e_quadrature(modulus(0.5), 0.0),
            Err(EllipticError::InvalidTolerance(0.0))
        );
        assert_eq!(
            complete_e_quadrature(modulus(0.5), 1e-3),
            Err(EllipticError::InvalidTolerance(1e-3))
        );
    }

    #[test]
    fn agm_and_quadrature_agree() {
        for i in 0..=50 {
            let m2 = i as f64 / 50.0;
            let m = modulus(m2);
            let fast = complete_e(m);
            let slow = complete_e_quadrature(m, 1e-12).unwrap();
            assert_close(fast, slow, 1e-11, &format!("routes at k^2={m2}"));
        }
    }

    #[test]
    fn bounded_and_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 0..=100 {
            let e = complete_e(modulus(i as f64 / 100.0));
            assert!((1.0..=FRAC_PI_2).contains(&e), "E out of [1, pi/2]: {e}");
            assert!(e < prev || i == 0, "E not strictly decreasing at i={i}");
            prev = e;
        }
    }

    #[test]
    fn modulus_domain_tolerance() {
        assert_eq!(Modulus::from_k_squared(-1e-13).unwrap().k_squared(), 0.0);
        assert_eq!(
            Modulus::from_k_squared(1.0 + 1e-13).unwrap().k_squared(),
            1.0
        );
        assert!(Modulus::from_k_squared(-1e-9).is_err());
        assert!(Modulus::from_k_squared(1.1).is_err());
        assert!(Modulus::from_k_squared(f64::NAN).is_err());
        assert_eq!(Modulus::from_k(0.5).unwrap().k_squared(), 0.25);
    }
}
