//! Rectangular grids and error scans of binary64 evaluators against the
//! oracle.

use faddeeva::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{oracle_w, OracleConfig, OracleError};

/// Reference magnitudes below this are left out of the relative error.
pub const REL_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScanError {
    #[error("grid has no points")]
    EmptyGrid,
    #[error("evaluator failed at {point}: {message}")]
    Evaluator { point: Complex64, message: String },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("evaluator returned {got} values for {expected} points")]
    LengthMismatch { expected: usize, got: usize },
}

/// Tensor grid `x_values x y_values`. Points are ordered y-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
}

/// `n` evenly spaced values `start + k * step`, computed without
/// accumulation.
pub fn stepped(start: f64, step: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| start + k as f64 * step).collect()
}

impl GridSpec {
    /// `x` in `[-10, 10]` step 0.05, `y = 10^-3 .. 10^2` in half decades.
    pub fn default_validation() -> Self {
        Self {
            x_values: (0..=400).map(|k| (k as f64 - 200.0) * 0.05).collect(),
            y_values: (0..=10).map(|k| 10f64.powf(-3.0 + 0.5 * k as f64)).collect(),
        }
    }

    /// `x` in `[-10, 10]` step 0.1, `y = 10^-1 .. 10^1` in quarter decades.
    pub fn benchmark() -> Self {
        Self {
            x_values: (0..=200).map(|k| (k as f64 - 100.0) * 0.1).collect(),
            y_values: (0..=8).map(|k| 10f64.powf(-1.0 + 0.25 * k as f64)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.x_values.len() * self.y_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Vec<Complex64> {
        self.y_values
            .iter()
            .flat_map(|&y| self.x_values.iter().map(move |&x| Complex64::new(x, y)))
            .collect()
    }
}

/// Worst errors over a grid. Ties keep the first point in grid order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub max_abs_err: f64,
    pub max_rel_err: f64,
    /// Point of the largest relative error.
    pub argmax_point: (f64, f64),
    pub points_scanned: usize,
    /// Points whose reference magnitude is below [`REL_FLOOR`].
    pub rel_excluded: usize,
}

impl ErrorReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_rel_err <= tol
    }
}

/// Oracle values for every grid point, rounded to binary64. Computing these
/// is the expensive part of a scan, so they can be reused across evaluators.
#[derive(Debug, Clone)]
pub struct ReferenceGrid {
    pub points: Vec<Complex64>,
    pub values: Vec<Complex64>,
}

impl ReferenceGrid {
    pub fn compute(grid: &GridSpec, config: &OracleConfig) -> Result<Self, ScanError> {
        Self::from_points(grid.points(), config)
    }

    pub fn from_points(points: Vec<Complex64>, config: &OracleConfig) -> Result<Self, ScanError> {
        if points.is_empty() {
            return Err(ScanError::EmptyGrid);
        }
        let values = points
            .par_iter()
            .map(|&z| oracle_w(z, config).map(|v| v.to_c64()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { points, values })
    }

    /// Scans a batch evaluator over the reference points.
    pub fn scan_against<F, E>(&self, eval: F) -> Result<ErrorReport, ScanError>
    where
        F: FnOnce(&[Complex64]) -> Result<Vec<Complex64>, E>,
        E: std::fmt::Display + HasIndex,
    {
        let got = eval(&self.points).map_err(|e| ScanError::Evaluator {
            point: e.index().map_or(Complex64::new(f64::NAN, f64::NAN), |i| self.points[i]),
            message: e.to_string(),
        })?;
        if got.len() != self.points.len() {
            return Err(ScanError::LengthMismatch { expected: self.points.len(), got: got.len() });
        }
        Ok(self.report(&got))
    }

    /// Scans a pointwise evaluator.
    pub fn scan_pointwise<F, E>(&self, eval: F) -> Result<ErrorReport, ScanError>
    where
        F: Fn(Complex64) -> Result<Complex64, E>,
        E: std::fmt::Display,
    {
        let got = self
            .points
            .iter()
            .map(|&z| eval(z).map_err(|e| ScanError::Evaluator { point: z, message: e.to_string() }))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.report(&got))
    }

    fn report(&self, got: &[Complex64]) -> ErrorReport {
        let mut r = ErrorReport {
            max_abs_err: 0.0,
            max_rel_err: 0.0,
            argmax_point: (self.points[0].re, self.points[0].im),
            points_scanned: self.points.len(),
            rel_excluded: 0,
        };
        for ((z, want), have) in self.points.iter().zip(&self.values).zip(got) {
            let abs = (have - want).norm();
            let abs = if abs.is_nan() { f64::INFINITY } else { abs };
            r.max_abs_err = r.max_abs_err.max(abs);
            let m = want.norm();
            if m < REL_FLOOR {
                r.rel_excluded += 1;
                continue;
            }
            let rel = abs / m;
            if rel > r.max_rel_err {
                r.max_rel_err = rel;
                r.argmax_point = (z.re, z.im);
            }
        }
        r
    }
}

/// Error types that may name the failing input index.
pub trait HasIndex {
    fn index(&self) -> Option<usize>;
}

impl HasIndex for faddeeva::FaddeevaError {
    fn index(&self) -> Option<usize> {
        faddeeva::FaddeevaError::index(self)
    }
}

/// One-shot scan: computes the reference grid then the report.
pub fn error_scan<F, E>(grid: &GridSpec, config: &OracleConfig, eval: F) -> Result<ErrorReport, ScanError>
where
    F: FnOnce(&[Complex64]) -> Result<Vec<Complex64>, E>,
    E: std::fmt::Display + HasIndex,
{
    ReferenceGrid::compute(grid, config)?.scan_against(eval)
}
