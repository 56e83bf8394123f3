//! Ordinary least squares with optional intercept, residual diagnostics and
//! Student-t prediction intervals.

use rand::Rng;
use rand_distr::{Distribution, StudentT};
use serde::Serialize;
use thiserror::Error;

use crate::distributions::{self, DistributionError};
use crate::linalg::{dot, Matrix, QrDecomposition};

/// Designs whose triangular factor has a reciprocal condition number below
/// this are rejected as collinear.
pub const RANK_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegressionError {
    #[error("need more observations than coefficients: {observations} rows for {coefficients} coefficients")]
    TooFewObservations {
        observations: usize,
        coefficients: usize,
    },
    #[error("design matrix is rank deficient (reciprocal condition {rcond:.3e}); predictors are collinear")]
    RankDeficient { rcond: f64 },
    #[error("predictor vector has {got} entries, fit expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("ragged design: row {row} has {got} predictors, expected {expected}")]
    RaggedDesign {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("response has {response} entries but design has {rows} rows")]
    ResponseLength { rows: usize, response: usize },
    #[error("non-finite value in regression input")]
    NonFinite,
    #[error("no coefficients to estimate")]
    EmptyModel,
    #[error(transparent)]
    Distribution(#[from] DistributionError),
}

/// A fitted least-squares model. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionFit {
    /// Intercept first when present, then one slope per predictor column.
    pub coefficients: Vec<f64>,
    pub include_intercept: bool,
    pub residual_std_error: f64,
    pub degrees_of_freedom: usize,
    pub r_squared: f64,
    /// `(XᵀX)⁻¹` of the design actually fitted (including the intercept column).
    pub normal_matrix_inverse: Vec<Vec<f64>>,
    pub n_observations: usize,
    pub residuals: Vec<f64>,
}

/// Symmetric prediction interval around a point forecast.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PredictionInterval {
    pub point: f64,
    pub lo: f64,
    pub hi: f64,
    pub predictive_std: f64,
}

fn design_matrix(
    predictors: &[Vec<f64>],
    include_intercept: bool,
) -> Result<Matrix, RegressionError> {
    let p = predictors.first().map_or(0, Vec::len);
    let rows: Vec<Vec<f64>> = predictors
        .iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != p {
                return Err(RegressionError::RaggedDesign {
                    row: i,
                    expected: p,
                    got: row.len(),
                });
            }
            let mut r = Vec::with_capacity(p + 1);
            if include_intercept {
                r.push(1.0);
            }
            r.extend_from_slice(row);
            Ok(r)
        })
        .collect::<Result<_, _>>()?;
    Ok(Matrix::from_rows(&rows))
}

/// Fits `response ~ predictors` by least squares through a Householder QR of
/// the design matrix.
///
/// `predictors` is row-major (`n` rows of `p` values each). The fitted
/// coefficient vector has `p + 1` entries when `include_intercept` is set.
pub fn fit_ols(
    predictors: &[Vec<f64>],
    response: &[f64],
    include_intercept: bool,
) -> Result<RegressionFit, RegressionError> {
    let n = predictors.len();
    if response.len() != n {
        return Err(RegressionError::ResponseLength {
            rows: n,
            response: response.len(),
        });
    }
    if predictors
        .iter()
        .flatten()
        .chain(response)
        .any(|v| !v.is_finite())
    {
        return Err(RegressionError::NonFinite);
    }
    let x = design_matrix(predictors, include_intercept)?;
    let k = if n == 0 {
        usize::from(include_intercept)
    } else {
        x.cols()
    };
    if k == 0 {
        return Err(RegressionError::EmptyModel);
    }
    if n <= k {
        return Err(RegressionError::TooFewObservations {
            observations: n,
            coefficients: k,
        });
    }

    let qr = QrDecomposition::new(&x);
    let rcond = qr.reciprocal_condition();
    if !(rcond >= RANK_TOLERANCE) {
        return Err(RegressionError::RankDeficient { rcond });
    }
    let qty = qr.apply_qt(response);
    let coefficients = qr.solve_r(&qty[..k]);

    let residuals: Vec<f64> = (0..n)
        .map(|i| response[i] - dot(x.row(i), &coefficients))
        .collect();
    let rss: f64 = residuals.iter().map(|r| r * r).sum();
    let df = n - k;
    let residual_std_error = (rss / df as f64).sqrt();

    let tss = if include_intercept {
        let mean = response.iter().sum::<f64>() / n as f64;
        response.iter().map(|y| (y - mean).powi(2)).sum::<f64>()
    } else {
        // Uncentered total sum of squares for regressions through the origin.
        response.iter().map(|y| y * y).sum::<f64>()
    };
    let r_squared = if tss > 0.0 { 1.0 - rss / tss } else { 1.0 };

    let r_inv = qr.r_inverse();
    let xtx_inv = r_inv.matmul(&r_inv.transpose());

    Ok(RegressionFit {
        coefficients,
        include_intercept,
        residual_std_error,
        degrees_of_freedom: df,
        r_squared,
        normal_matrix_inverse: xtx_inv.to_rows(),
        n_observations: n,
        residuals,
    })
}

impl RegressionFit {
    /// Number of predictor columns, excluding the intercept.
    pub fn n_predictors(&self) -> usize {
        self.coefficients.len() - usize::from(self.include_intercept)
    }

    pub fn intercept(&self) -> Option<f64> {
        self.include_intercept.then(|| self.coefficients[0])
    }

    /// Slopes only, in predictor-column order.
    pub fn slopes(&self) -> &[f64] {
        &self.coefficients[usize::from(self.include_intercept)..]
    }

    fn augmented(&self, x: &[f64]) -> Result<Vec<f64>, RegressionError> {
        if x.len() != self.n_predictors() {
            return Err(RegressionError::DimensionMismatch {
                expected: self.n_predictors(),
                got: x.len(),
            });
        }
        let mut v = Vec::with_capacity(self.coefficients.len());
        if self.include_intercept {
            v.push(1.0);
        }
        v.extend_from_slice(x);
        Ok(v)
    }

    pub fn predict_point(&self, x: &[f64]) -> Result<f64, RegressionError> {
        Ok(dot(&self.coefficients, &self.augmented(x)?))
    }

    /// Standard deviation of a new observation at `x`:
    /// `s · sqrt(1 + x̃ᵀ (XᵀX)⁻¹ x̃)`.
    pub fn predictive_std(&self, x: &[f64]) -> Result<f64, RegressionError> {
        let aug = self.augmented(x)?;
        let inv = Matrix::from_rows(&self.normal_matrix_inverse);
        let leverage = inv.quadratic_form(&aug).max(0.0);
        Ok(self.residual_std_error * (1.0 + leverage).sqrt())
    }

    pub fn prediction_interval(
        &self,
        x: &[f64],
        level: f64,
    ) -> Result<PredictionInterval, RegressionError> {
        let point = self.predict_point(x)?;
        let predictive_std = self.predictive_std(x)?;
        let t =
            distributions::student_t_quantile(self.degrees_of_freedom as f64, 0.5 * (1.0 + level))?;
        let half = t * predictive_std;
        Ok(PredictionInterval {
            point,
            lo: point - half,
            hi: point + half,
            predictive_std,
        })
    }

    /// One draw from the predictive distribution at `x`.
    pub fn sample_predictive<R: Rng + ?Sized>(
        &self,
        x: &[f64],
        rng: &mut R,
    ) -> Result<f64, RegressionError> {
        let point = self.predict_point(x)?;
        let s = self.predictive_std(x)?;
        let t = StudentT::new(self.degrees_of_freedom as f64)
            .map_err(|_| DistributionError::DegreesOfFreedom(self.degrees_of_freedom as f64))?;
        let draw = t.sample(rng);
        Ok(if s == 0.0 { point } else { point + s * draw })
    }
}
