//! Agreement between Monte Carlo estimates and closed-form values:
//! Wilson intervals, exact-null z-scores, and a chi-square goodness-of-fit
//! test over the three outcome categories.

use thiserror::Error;

use crate::geometry::HitDistribution;
use crate::montecarlo::{EstimateReport, TallyCounts};

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("successes {successes} exceed trials {n}")]
    SuccessesExceedTrials { successes: u64, n: u64 },
    #[error("need at least one trial")]
    NoTrials,
    #[error("z must be positive and finite, got {0}")]
    InvalidZ(f64),
    #[error("tallies contain {0} throws with 3+ crossings; the categorical test does not apply")]
    UnexpectedCategories(u64),
    #[error("category {0} has zero probability under the null; use the collapsed 2-category test")]
    CollapsedTestRequired(usize),
    #[error("expected count {expected:.2} in category {category} is below 5; increase n_throws")]
    ExpectedCountTooLow { category: usize, expected: f64 },
}

/// Wilson score interval for a binomial proportion at critical value `z`.
///
/// Always contains the point estimate and stays inside `[0, 1]`; the
/// zero- and full-count endpoints are pinned exactly.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> Result<(f64, f64), StatsError> {
    if n == 0 {
        return Err(StatsError::NoTrials);
    }
    if successes > n {
        return Err(StatsError::SuccessesExceedTrials { successes, n });
    }
    if !(z > 0.0 && z.is_finite()) {
        return Err(StatsError::InvalidZ(z));
    }

    let nf = n as f64;
    let p_hat = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = p_hat + z2 / (2.0 * nf);
    let radius = z * (p_hat * (1.0 - p_hat) / nf + z2 / (4.0 * nf * nf)).sqrt();

    let lo = if successes == 0 {
        0.0
    } else {
        ((center - radius) / denom).max(0.0)
    };
    let hi = if successes == n {
        1.0
    } else {
        ((center + radius) / denom).min(1.0)
    };
    Ok((lo, hi))
}

/// Per-component `z_i = (p_hat_i - p_i) / sqrt(p_i (1 - p_i) / n)`.
///
/// The null variance uses the exact `p_i`, not the estimate: the null
/// hypothesis is fully specified. A degenerate category (`p_i` of 0 or 1)
/// scores 0 when the estimate agrees exactly and +/-inf when it does not.
pub fn z_scores(report: &EstimateReport, exact: &HitDistribution) -> [f64; 3] {
    let n = report.n_throws as f64;
    let p_hat = report.p_hat.as_array();
    let p = exact.as_array();
    std::array::from_fn(|i| {
        let variance = p[i] * (1.0 - p[i]) / n;
        if variance > 0.0 {
            (p_hat[i] - p[i]) / variance.sqrt()
        } else if p_hat[i] == p[i] {
            0.0
        } else {
            f64::INFINITY.copysign(p_hat[i] - p[i])
        }
    })
}

/// Outcome of a chi-square goodness-of-fit test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GofResult {
    pub statistic: f64,
    pub dof: u32,
    pub p_value: f64,
}

fn pearson_statistic(observed: &[f64], expected: &[f64]) -> f64 {
    observed
        .iter()
        .zip(expected)
        .map(|(o, e)| {
            let diff = o - e;
            diff * diff / e
        })
        .sum()
}

fn check_categories(
    n: u64,
    null: &[(usize, f64)],
) -> Result<(), StatsError> {
    for &(category, p) in null {
        if p == 0.0 {
            return Err(StatsError::CollapsedTestRequired(category));
        }
        let expected = n as f64 * p;
        if expected < 5.0 {
            return Err(StatsError::ExpectedCountTooLow { category, expected });
        }
    }
    Ok(())
}

/// Pearson test of the observed `(c0, c1, c2)` against the exact triple.
///
/// Three categories under a fully specified null give dof = 2, whose
/// survival function is the closed form `exp(-x/2)` — no incomplete-gamma
/// machinery. Degenerate nulls (some `p_i = 0`, e.g. a single-segment
/// needle) are rejected toward [`chi_square_gof_collapsed`].
pub fn chi_square_gof(counts: &TallyCounts, exact: &HitDistribution) -> Result<GofResult, StatsError> {
    if counts.c_other != 0 {
        return Err(StatsError::UnexpectedCategories(counts.c_other));
    }
    let n = counts.n_total();
    if n == 0 {
        return Err(StatsError::NoTrials);
    }
    let p = exact.as_array();
    check_categories(n, &[(0, p[0]), (1, p[1]), (2, p[2])])?;

    let nf = n as f64;
    let observed = [counts.c0 as f64, counts.c1 as f64, counts.c2 as f64];
    let expected = [nf * p[0], nf * p[1], nf * p[2]];
    let statistic = pearson_statistic(&observed, &expected);
    Ok(GofResult {
        statistic,
        dof: 2,
        p_value: (-statistic / 2.0).exp(),
    })
}

/// Two-category collapse of [`chi_square_gof`]: no-hit versus hit
/// (`c1 + c2`). This is the right test when a category has zero null
/// probability. dof = 1, survival `erfc(sqrt(x/2))`.
pub fn chi_square_gof_collapsed(
    counts: &TallyCounts,
    exact: &HitDistribution,
) -> Result<GofResult, StatsError> {
    if counts.c_other != 0 {
        return Err(StatsError::UnexpectedCategories(counts.c_other));
    }
    let n = counts.n_total();
    if n == 0 {
        return Err(StatsError::NoTrials);
    }
    let p_miss = exact.p0();
    let p_hit = exact.p1() + exact.p2();
    check_categories(n, &[(0, p_miss), (1, p_hit)])?;

    let nf = n as f64;
    let observed = [counts.c0 as f64, (counts.c1 + counts.c2) as f64];
    let expected = [nf * p_miss, nf * p_hit];
    let statistic = pearson_statistic(&observed, &expected);
    Ok(GofResult {
        statistic,
        dof: 1,
        p_value: erfc((statistic / 2.0).sqrt()),
    })
}

/// Complementary error function via the classic Chebyshev fit; relative
/// error below 1.2e-7 everywhere, ample for p-values.
fn erfc(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let poly = -z * z - 1.26551223
        + t * (1.00002368
            + t * (0.37409196
                + t * (0.09678418
                    + t * (-0.18628806
                        + t * (0.27886807
                            + t * (-1.13520398
                                + t * (1.48851587 + t * (-0.82215223 + t * 0.17087277))))))));
    let value = t * poly.exp();
    if x >= 0.0 {
        value
    } else {
        2.0 - value
    }
}
