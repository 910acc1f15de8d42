//! The needle, the lattice, a single throw, and exact crossing counts.
//!
//! The lattice lines are `y = m*d` for all integers `m`. A throw is reduced
//! to the pivot height `y` and the two segment directions: crossing counts
//! are invariant under translation parallel to the lines, so the pivot's
//! x-coordinate never enters the model.

use std::f64::consts::TAU;

use thiserror::Error;

/// Simplex slack for closed-form probability triples; anything further off
/// is a bug upstream, not rounding.
const SIMPLEX_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("segment lengths must be finite and non-negative, got a = {a}, b = {b}")]
    InvalidLengths { a: f64, b: f64 },
    #[error("degenerate needle: a + b must be positive")]
    DegenerateNeedle,
    #[error("lattice spacing must be positive and finite, got {0}")]
    InvalidSpacing(f64),
    #[error("probabilities ({p0}, {p1}, {p2}) break the simplex beyond 1e-12")]
    InconsistentProbabilities { p0: f64, p1: f64, p2: f64 },
}

/// Two rigid segments of lengths `a` and `b` joined at a pivot point, each
/// free to rotate independently about it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PivotNeedle {
    a: f64,
    b: f64,
}

impl PivotNeedle {
    /// Requires `a >= 0`, `b >= 0`, `a + b > 0`. A single segment (`b = 0`)
    /// is a valid needle; the fully degenerate point is not.
    pub fn new(a: f64, b: f64) -> Result<Self, GeometryError> {
        if !(a.is_finite() && b.is_finite()) || a < 0.0 || b < 0.0 {
            return Err(GeometryError::InvalidLengths { a, b });
        }
        if a + b <= 0.0 {
            return Err(GeometryError::DegenerateNeedle);
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn total_length(&self) -> f64 {
        self.a + self.b
    }
}

/// Infinite family of parallel lines with constant spacing `d > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    spacing: f64,
}

impl Lattice {
    pub fn new(spacing: f64) -> Result<Self, GeometryError> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(GeometryError::InvalidSpacing(spacing));
        }
        Ok(Self { spacing })
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }
}

fn reduce(x: f64, modulus: f64) -> f64 {
    let r = x.rem_euclid(modulus);
    // rem_euclid can round a tiny negative up to the modulus itself.
    if r >= modulus {
        0.0
    } else {
        r
    }
}

/// One throw: pivot height above the line below it, plus the directions of
/// both segments measured against the lattice lines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThrowSample {
    y: f64,
    alpha: f64,
    beta: f64,
}

impl ThrowSample {
    /// Reduces `y` into `[0, d)` and both angles into `[0, 2*pi)`.
    pub fn new(y: f64, alpha: f64, beta: f64, lattice: &Lattice) -> Self {
        Self {
            y: reduce(y, lattice.spacing()),
            alpha: reduce(alpha, TAU),
            beta: reduce(beta, TAU),
        }
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Opening angle `phi = beta - alpha`, reduced into `[0, 2*pi)`.
    pub fn opening_angle(&self) -> f64 {
        reduce(self.beta - self.alpha, TAU)
    }
}

/// Tags where a probability triple came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionSource {
    Exact,
    FixedAngleExact,
    MonteCarlo,
}

/// Probabilities of hitting the lattice in exactly 0, 1, or 2 points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HitDistribution {
    p0: f64,
    p1: f64,
    p2: f64,
    source: DistributionSource,
}

impl HitDistribution {
    /// Checked constructor for the closed-form paths: the components must
    /// sum to 1 and each sit in `[0, 1]`, all within 1e-12. Only after that
    /// check are they clamped into range.
    pub fn from_exact(
        p0: f64,
        p1: f64,
        p2: f64,
        source: DistributionSource,
    ) -> Result<Self, GeometryError> {
        let in_range = |p: f64| (-SIMPLEX_TOLERANCE..=1.0 + SIMPLEX_TOLERANCE).contains(&p);
        let consistent = (p0 + p1 + p2 - 1.0).abs() <= SIMPLEX_TOLERANCE
            && in_range(p0)
            && in_range(p1)
            && in_range(p2);
        if !consistent {
            return Err(GeometryError::InconsistentProbabilities { p0, p1, p2 });
        }
        Ok(Self {
            p0: p0.clamp(0.0, 1.0),
            p1: p1.clamp(0.0, 1.0),
            p2: p2.clamp(0.0, 1.0),
            source,
        })
    }

    /// Estimator constructor: components are `c_i / n` exactly, consistent
    /// by integer construction.
    pub fn from_counts(c0: u64, c1: u64, c2: u64, n: u64) -> Self {
        assert!(n > 0, "estimate over zero throws");
        let n = n as f64;
        Self {
            p0: c0 as f64 / n,
            p1: c1 as f64 / n,
            p2: c2 as f64 / n,
            source: DistributionSource::MonteCarlo,
        }
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn source(&self) -> DistributionSource {
        self.source
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.p0, self.p1, self.p2]
    }
}

/// Distance `c(phi) = sqrt(a^2 + b^2 - 2ab cos phi)` between the two free
/// endpoints at opening angle `phi`, clamped into `[|a-b|, a+b]` against
/// rounding at the folded and straight configurations.
pub fn chord_length(needle: &PivotNeedle, phi: f64) -> f64 {
    let (a, b) = (needle.a(), needle.b());
    let c_squared = a * a + b * b - 2.0 * a * b * phi.cos();
    c_squared.max(0.0).sqrt().clamp((a - b).abs(), a + b)
}

/// Perimeter `u(phi) = a + b + c(phi)` of the convex hull of the needle,
/// the (possibly degenerate) triangle spanned by the pivot and both free
/// endpoints.
pub fn hull_perimeter(needle: &PivotNeedle, phi: f64) -> f64 {
    needle.total_length() + chord_length(needle, phi)
}

/// Multiples of `d` in the half-open interval `(lo, hi]`, computed from the
/// floors of both endpoints. O(1) and exact; a segment endpoint exactly on a
/// line counts only when it is the upper end.
fn crossings_in(lo: f64, hi: f64, d: f64) -> u32 {
    ((hi / d).floor() - (lo / d).floor()) as u32
}

/// Exact number of points where the needle's two segments cross lattice
/// lines. For `a + b <= d` this is 0, 1, or 2 except on the measure-zero
/// boundary set that the half-open convention resolves deterministically.
pub fn count_intersections(needle: &PivotNeedle, lattice: &Lattice, throw: &ThrowSample) -> u32 {
    let d = lattice.spacing();
    let y = throw.y();
    let segment = |length: f64, angle: f64| {
        let y_end = y + length * angle.sin();
        crossings_in(y.min(y_end), y.max(y_end), d)
    };
    segment(needle.a(), throw.alpha()) + segment(needle.b(), throw.beta())
}

/// Whether some lattice line meets the closed hull triangle: the min and max
/// of the three vertex heights straddle a multiple of `d`, under the same
/// half-open convention as [`count_intersections`].
pub fn hull_hits_lattice(needle: &PivotNeedle, lattice: &Lattice, throw: &ThrowSample) -> bool {
    let d = lattice.spacing();
    let y = throw.y();
    let y_a = y + needle.a() * throw.alpha().sin();
    let y_b = y + needle.b() * throw.beta().sin();
    crossings_in(y.min(y_a).min(y_b), y.max(y_a).max(y_b), d) >= 1
}
