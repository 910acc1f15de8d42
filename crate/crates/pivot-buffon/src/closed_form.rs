//! Closed-form hit probabilities and related quantities.
//!
//! Everything here reduces to the complete elliptic integral `E(k)` with
//! `k^2 = 4ab/(a+b)^2`:
//!
//! ```text
//! p(0) = 1 - (a+b)(pi + 2E(k)) / (pi^2 d)
//! p(1) = 4(a+b)E(k) / (pi^2 d)
//! p(2) = (a+b)(pi - 2E(k)) / (pi^2 d)
//! ```
//!
//! valid for `a + b <= d`. Longer needles are a hard error: the formulas do
//! not extrapolate, and returning plausible-looking wrong numbers is worse
//! than refusing.

use std::f64::consts::PI;

use thiserror::Error;

use crate::elliptic::{self, Modulus};
use crate::geometry::{
    chord_length, DistributionSource, GeometryError, HitDistribution, Lattice, PivotNeedle,
};

#[derive(Debug, Error, PartialEq)]
pub enum ClosedFormError {
    #[error("needle length a + b = {total} exceeds lattice spacing d = {spacing}: the closed forms require a + b <= d")]
    NeedleExceedsSpacing { total: f64, spacing: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn require_fits(needle: &PivotNeedle, lattice: &Lattice) -> Result<(), ClosedFormError> {
    let total = needle.total_length();
    let spacing = lattice.spacing();
    if total > spacing {
        return Err(ClosedFormError::NeedleExceedsSpacing { total, spacing });
    }
    Ok(())
}

/// Elliptic modulus of the needle: `k^2 = 4ab/(a+b)^2`.
///
/// By AM-GM this is at most 1 (equality only for `a = b`) and it is 0 when
/// one segment is absent.
pub fn modulus(needle: &PivotNeedle) -> Modulus {
    let total = needle.total_length();
    let k_squared = 4.0 * needle.a() * needle.b() / (total * total);
    Modulus::from_k_squared(k_squared).expect("4ab/(a+b)^2 lies in [0,1] up to rounding")
}

/// Mean endpoint distance over a uniform opening angle:
/// `(1/2pi) int_0^{2pi} c(phi) dphi = 2(a+b)E(k)/pi`.
pub fn mean_chord(needle: &PivotNeedle) -> f64 {
    2.0 * needle.total_length() * elliptic::complete_e(modulus(needle)) / PI
}

/// Probability that at least one segment crosses a line:
/// `(a+b)(pi + 2E(k)) / (pi^2 d)`.
pub fn p_union(needle: &PivotNeedle, lattice: &Lattice) -> Result<f64, ClosedFormError> {
    require_fits(needle, lattice)?;
    let e = elliptic::complete_e(modulus(needle));
    Ok(needle.total_length() * (PI + 2.0 * e) / (PI * PI * lattice.spacing()))
}

/// Probability that both segments cross: `(a+b)(pi - 2E(k)) / (pi^2 d)`.
pub fn p_both(needle: &PivotNeedle, lattice: &Lattice) -> Result<f64, ClosedFormError> {
    require_fits(needle, lattice)?;
    let e = elliptic::complete_e(modulus(needle));
    Ok(needle.total_length() * (PI - 2.0 * e) / (PI * PI * lattice.spacing()))
}

/// The exact triple `(p0, p1, p2)` for a uniformly random opening angle.
pub fn hit_distribution(
    needle: &PivotNeedle,
    lattice: &Lattice,
) -> Result<HitDistribution, ClosedFormError> {
    let union = p_union(needle, lattice)?;
    let both = p_both(needle, lattice)?;
    Ok(HitDistribution::from_exact(
        1.0 - union,
        union - both,
        both,
        DistributionSource::Exact,
    )?)
}

/// Mean number of crossing points per throw: `2(a+b)/(pi d)`.
///
/// The formula itself holds for needles of any length; the `a + b <= d`
/// constraint is kept here so the result always equals `p1 + 2 p2` from
/// [`hit_distribution`].
pub fn expected_intersections(
    needle: &PivotNeedle,
    lattice: &Lattice,
) -> Result<f64, ClosedFormError> {
    require_fits(needle, lattice)?;
    Ok(2.0 * needle.total_length() / (PI * lattice.spacing()))
}

/// The triple when the opening angle is held constant at `phi`, with
/// `c = c(phi)`:
///
/// ```text
/// p(0) = 1 - (a+b+c)/(pi d),  p(1) = 2c/(pi d),  p(2) = (a+b-c)/(pi d)
/// ```
///
/// Averaging this over uniform `phi` recovers [`hit_distribution`].
pub fn fixed_angle_distribution(
    needle: &PivotNeedle,
    lattice: &Lattice,
    phi: f64,
) -> Result<HitDistribution, ClosedFormError> {
    require_fits(needle, lattice)?;
    let c = chord_length(needle, phi);
    let total = needle.total_length();
    let pi_d = PI * lattice.spacing();
    Ok(HitDistribution::from_exact(
        1.0 - (total + c) / pi_d,
        2.0 * c / pi_d,
        (total - c) / pi_d,
        DistributionSource::FixedAngleExact,
    )?)
}

#[cfg(test)]
// expected values are frozen decimals from an independent computation; some
// happen to be recognizable multiples of pi, which is the point
#[allow(clippy::approx_constant, clippy::excessive_precision)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn needle(a: f64, b: f64) -> PivotNeedle {
        PivotNeedle::new(a, b).unwrap()
    }

    fn lattice(d: f64) -> Lattice {
        Lattice::new(d).unwrap()
    }

    fn assert_close(got: f64, want: f64, tol: f64, msg: &str) {
        assert!(
            (got - want).abs() <= tol,
            "{msg}: got {got}, want {want}, diff {:e}",
            (got - want).abs()
        );
    }

    #[test]
    fn modulus_examples() {
        assert_eq!(modulus(&needle(0.7, 0.7)).k_squared(), 1.0);
        assert_eq!(modulus(&needle(1.0, 0.0)).k_squared(), 0.0);
        assert_eq!(modulus(&needle(1.0, 3.0)).k_squared(), 0.75);
    }

    #[test]
    fn mean_chord_examples() {
        // (1/2pi) int 2 sin(phi/2) dphi = 4/pi for the unit rhombus case
        assert_close(
            mean_chord(&needle(1.0, 1.0)),
            1.273_239_544_735_162_7,
            1e-14,
            "a=b=1",
        );
        // single segment: c(phi) = a identically
        assert_close(mean_chord(&needle(1.0, 0.0)), 1.0, 1e-15, "b=0");
        // quadrature of the c(phi) integrand, frozen at 1e-12
        assert_close(
            mean_chord(&needle(1.0, 3.0)),
            3.083_928_850_380_080_1,
            1e-12,
            "a=1,b=3",
        );
    }

    #[test]
    fn union_and_both_examples() {
        let d = lattice(1.0);
        // classical single-needle hit probability 2a/(pi d)
        assert_close(
            p_union(&needle(0.5, 0.0), &d).unwrap(),
            0.318_309_886_183_790_7,
            1e-14,
            "b=0 union",
        );
        assert_close(
            p_union(&needle(0.0, 0.5), &d).unwrap(),
            0.318_309_886_183_790_7,
            1e-14,
            "a=0 union",
        );
        assert_close(
            p_union(&needle(0.5, 0.5), &d).unwrap(),
            0.520_952_253_468_466_2,
            1e-14,
            "a=b union",
        );
        assert_eq!(p_both(&needle(0.5, 0.0), &d).unwrap(), 0.0);
        assert_close(
            p_both(&needle(0.5, 0.5), &d).unwrap(),
            0.115_667_518_899_115_13,
            1e-14,
            "a=b both",
        );
        assert_eq!(
            p_both(&needle(0.3, 0.5), &d).unwrap(),
            p_both(&needle(0.5, 0.3), &d).unwrap()
        );
    }

    #[test]
    fn hit_distribution_examples() {
        let d = lattice(1.0);

        let even = hit_distribution(&needle(0.5, 0.5), &d).unwrap();
        assert_close(even.p1(), 0.405_284_734_569_351_1, 1e-14, "p1 = 4/pi^2");

        let classic = hit_distribution(&needle(0.5, 0.0), &d).unwrap();
        assert_close(classic.p0(), 1.0 - 0.318_309_886_183_790_7, 1e-14, "p0");
        assert_close(classic.p1(), 0.318_309_886_183_790_7, 1e-14, "p1 = 1/pi");
        assert_eq!(classic.p2(), 0.0);

        // k^2 = 0.9375; frozen from E(0.9375) = 1.0723027218946043
        let uneven = hit_distribution(&needle(0.3, 0.5), &d).unwrap();
        assert_close(uneven.p0(), 0.571_516_921_444_548_5, 1e-14, "p0");
        assert_close(uneven.p1(), 0.347_670_339_216_837_9, 1e-14, "p1");
        assert_close(uneven.p2(), 0.080_812_739_338_613_58, 1e-14, "p2");
        assert_eq!(uneven.source(), DistributionSource::Exact);
    }

    #[test]
    fn expected_intersections_examples() {
        let d = lattice(1.0);
        assert_close(
            expected_intersections(&needle(0.5, 0.5), &d).unwrap(),
            0.636_619_772_367_581_3,
            1e-14,
            "2/pi",
        );
        assert_close(
            expected_intersections(&needle(0.5, 0.0), &d).unwrap(),
            0.318_309_886_183_790_7,
            1e-14,
            "1/pi",
        );
        assert_close(
            expected_intersections(&needle(0.3, 0.5), &d).unwrap(),
            0.509_295_817_894_065_1,
            1e-14,
            "1.6/pi",
        );
    }

    #[test]
    fn fixed_angle_examples() {
        let d = lattice(1.0);

        // straight needle: no double crossing, p1 = 2(a+b)/(pi d)
        let straight = fixed_angle_distribution(&needle(0.3, 0.5), &d, std::f64::consts::PI)
            .unwrap();
        assert!(straight.p2().abs() <= 1e-16, "p2 = {}", straight.p2());
        assert_close(
            straight.p1(),
            0.509_295_817_894_065_1,
            1e-14,
            "p1 straight",
        );

        // folded: c = |a-b|, p2 = 2 min(a,b)/(pi d)
        let folded = fixed_angle_distribution(&needle(0.3, 0.5), &d, 0.0).unwrap();
        assert_close(folded.p2(), 0.190_985_931_710_274_4, 1e-14, "p2 folded");

        // right angle with a = b = 0.5: p1 = sqrt(2)/pi
        let square = fixed_angle_distribution(&needle(0.5, 0.5), &d, FRAC_PI_2).unwrap();
        assert_close(square.p1(), 0.450_158_158_078_553, 1e-14, "p1 = sqrt2/pi");
        assert_eq!(square.source(), DistributionSource::FixedAngleExact);
    }

    #[test]
    fn long_needle_is_refused() {
        let d = lattice(1.0);
        let long = needle(0.6, 0.6);
        assert!(matches!(
            hit_distribution(&long, &d),
            Err(ClosedFormError::NeedleExceedsSpacing { .. })
        ));
        assert!(p_union(&long, &d).is_err());
        assert!(p_both(&long, &d).is_err());
        assert!(expected_intersections(&long, &d).is_err());
        assert!(fixed_angle_distribution(&long, &d, 1.0).is_err());
        // the boundary case a + b = d is allowed
        assert!(hit_distribution(&needle(0.5, 0.5), &d).is_ok());
    }

    proptest! {
        #[test]
        fn simplex_identity_and_symmetry(
            a in 0.0..0.5_f64,
            b in 0.0..0.5_f64,
            d in 0.1..10.0_f64,
        ) {
            prop_assume!(a + b > 1e-9);
            let scale = d;
            let n = needle(a * scale, b * scale);
            let lat = lattice(scale);

            let h = hit_distribution(&n, &lat).unwrap();
            let [p0, p1, p2] = h.as_array();
            prop_assert!((p0 + p1 + p2 - 1.0).abs() <= 1e-12);

            let mean = expected_intersections(&n, &lat).unwrap();
            prop_assert!((p1 + 2.0 * p2 - mean).abs() <= 1e-12);

            let swapped = hit_distribution(&needle(b * scale, a * scale), &lat).unwrap();
            for (x, y) in h.as_array().iter().zip(swapped.as_array()) {
                prop_assert!((x - y).abs() <= 1e-15);
            }
        }

        #[test]
        fn scale_invariance(
            a in 1e-3..0.5_f64,
            b in 0.0..0.5_f64,
            s in 1e-3..1e3_f64,
        ) {
            let base = hit_distribution(&needle(a, b), &lattice(1.0)).unwrap();
            let scaled = hit_distribution(&needle(s * a, s * b), &lattice(s)).unwrap();
            for (x, y) in base.as_array().iter().zip(scaled.as_array()) {
                prop_assert!((x - y).abs() <= 1e-13);
            }
        }

        #[test]
        fn fixed_angle_simplex(
            a in 1e-3..0.5_f64,
            b in 0.0..0.5_f64,
            phi in 0.0..10.0_f64,
        ) {
            let lat = lattice(1.0);
            let f = fixed_angle_distribution(&needle(a, b), &lat, phi).unwrap();
            let [p0, p1, p2] = f.as_array();
            prop_assert!((p0 + p1 + p2 - 1.0).abs() <= 1e-12);
            prop_assert!(p2 >= 0.0);
        }
    }
}
