//! Student-t and standard normal distribution functions.
//!
//! The t CDF is evaluated through the regularized incomplete beta function
//! (continued-fraction form) and quantiles are obtained by bisection on the
//! CDF. The normal quantile goes through the same bisection routine so that
//! the two can be compared like-for-like at very large degrees of freedom.

use thiserror::Error;

/// Absolute bisection tolerance on the quantile.
pub const QUANTILE_TOLERANCE: f64 = 1e-10;

const BETA_CF_MAX_ITER: usize = 20_000;
const BETA_CF_EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistributionError {
    #[error("probability must lie strictly between 0 and 1, got {0}")]
    ProbabilityOutOfRange(f64),
    #[error("degrees of freedom must be at least 1, got {0}")]
    DegreesOfFreedom(f64),
}

/// Natural log of the beta function.
fn ln_beta(a: f64, b: f64) -> f64 {
    libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b)
}

/// Continued fraction for the incomplete beta (modified Lentz).
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=BETA_CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < BETA_CF_EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta `I_x(a, b)`, taking both `x` and `1 - x` so
/// callers that know the complement exactly do not lose it to cancellation.
fn inc_beta_pair(a: f64, b: f64, x: f64, one_minus_x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if one_minus_x <= 0.0 {
        return 1.0;
    }
    let ln_front = a * x.ln() + b * one_minus_x.ln() - ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front.exp() * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - ln_front.exp() * beta_continued_fraction(b, a, one_minus_x) / b
    }
}

/// Regularized incomplete beta function `I_x(a, b)` for `x` in `[0, 1]`.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    inc_beta_pair(a, b, x, 1.0 - x)
}

/// Upper tail `P(T > t)` for `t >= 0`.
fn t_upper_tail(t: f64, df: f64) -> f64 {
    let t2 = t * t;
    let denom = df + t2;
    // x = df / (df + t^2); I_x(df/2, 1/2) is twice the upper tail.
    0.5 * inc_beta_pair(0.5 * df, 0.5, df / denom, t2 / denom)
}

/// Cumulative distribution function of Student's t with `df` degrees of freedom.
pub fn student_t_cdf(t: f64, df: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t == f64::INFINITY {
        return 1.0;
    }
    if t == f64::NEG_INFINITY {
        return 0.0;
    }
    if t >= 0.0 {
        1.0 - t_upper_tail(t, df)
    } else {
        t_upper_tail(-t, df)
    }
}

/// Survival function `P(T > t)`; accurate in the far upper tail.
pub fn student_t_sf(t: f64, df: f64) -> f64 {
    student_t_cdf(-t, df)
}

/// Density of Student's t.
pub fn student_t_pdf(t: f64, df: f64) -> f64 {
    let ln_norm = libm::lgamma(0.5 * (df + 1.0))
        - libm::lgamma(0.5 * df)
        - 0.5 * (df * std::f64::consts::PI).ln();
    (ln_norm - 0.5 * (df + 1.0) * (t * t / df).ln_1p()).exp()
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Inverts a continuous, strictly increasing CDF that is symmetric about
/// zero by bisection. Only the upper half is searched; lower quantiles are
/// reflected, which makes `q(p) == -q(1 - p)` hold structurally.
fn invert_symmetric_cdf(cdf: impl Fn(f64) -> f64, p: f64) -> f64 {
    if p == 0.5 {
        return 0.0;
    }
    let (target, sign) = if p > 0.5 { (p, 1.0) } else { (1.0 - p, -1.0) };
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    while cdf(hi) < target {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return sign * f64::INFINITY;
        }
    }
    while hi - lo > QUANTILE_TOLERANCE * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    sign * 0.5 * (lo + hi)
}

fn check_probability(p: f64) -> Result<(), DistributionError> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(DistributionError::ProbabilityOutOfRange(p))
    }
}

/// Quantile (inverse CDF) of Student's t with `df` degrees of freedom.
pub fn student_t_quantile(df: f64, p: f64) -> Result<f64, DistributionError> {
    if !(df >= 1.0) {
        return Err(DistributionError::DegreesOfFreedom(df));
    }
    check_probability(p)?;
    Ok(invert_symmetric_cdf(|t| student_t_cdf(t, df), p))
}

/// Standard normal quantile, by the same bisection as [`student_t_quantile`].
pub fn normal_quantile(p: f64) -> Result<f64, DistributionError> {
    check_probability(p)?;
    Ok(invert_symmetric_cdf(normal_cdf, p))
}
