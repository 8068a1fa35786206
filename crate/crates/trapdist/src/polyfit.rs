//! Least-squares polynomial approximation of the densities.
//!
//! The density of each case is sampled on a uniform grid over its support
//! and a single polynomial is fitted by QR-factorizing the Vandermonde
//! matrix with Householder reflections. Normal equations are avoided on
//! purpose: squaring the Vandermonde matrix would lose roughly half the
//! available precision at degree 12.

use std::io::{self, Write};

use thiserror::Error;

use crate::{dist, fmt_f64, CaseId};

/// Fit configuration: polynomial degree and uniform grid size over the
/// support (endpoints included).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FitConfig {
    pub degree: usize,
    pub grid_points: usize,
}

impl Default for FitConfig {
    /// Degree 12 on a 1000-point grid.
    fn default() -> Self {
        FitConfig {
            degree: 12,
            grid_points: 1000,
        }
    }
}

/// Error for ill-posed fit configurations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FitError {
    #[error("degree must be at least 1")]
    DegreeTooSmall,
    #[error("grid must be overdetermined: need more than degree + 1 = {min} points, got {got}")]
    GridTooSmall { min: usize, got: usize },
}

/// A fitted polynomial for one case.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub case: CaseId,
    /// Coefficients in descending degree order, `degree + 1` of them.
    pub coefficients: Vec<f64>,
    /// Euclidean norm of `pdf(d_i) - p(d_i)` over the fit grid.
    pub norm_residuals: f64,
}

impl FitResult {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Evaluates the fitted polynomial at `d`.
    pub fn eval(&self, d: f64) -> f64 {
        eval_poly(&self.coefficients, d)
    }
}

/// Horner evaluation of a polynomial given in descending degree order.
pub fn eval_poly(coefficients: &[f64], d: f64) -> f64 {
    assert!(!coefficients.is_empty(), "need at least one coefficient");
    coefficients.iter().fold(0.0, |acc, &c| acc * d + c)
}

/// Fits a polynomial of `cfg.degree` to the density of `case` on a uniform
/// grid of `cfg.grid_points` points over the support.
pub fn fit_pdf(case: CaseId, cfg: &FitConfig) -> Result<FitResult, FitError> {
    if cfg.degree < 1 {
        return Err(FitError::DegreeTooSmall);
    }
    if cfg.grid_points <= cfg.degree + 1 {
        return Err(FitError::GridTooSmall {
            min: cfg.degree + 2,
            got: cfg.grid_points,
        });
    }

    let d_max = case.d_max();
    let m = cfg.grid_points;
    let grid: Vec<f64> = (0..m).map(|i| d_max * i as f64 / (m - 1) as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&d| dist::pdf(case, d)).collect();

    // Vandermonde columns in descending powers, matching the coefficient
    // order of the result.
    let n = cfg.degree + 1;
    let mut columns: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let power = (cfg.degree - j) as i32;
            grid.iter().map(|&d| d.powi(power)).collect()
        })
        .collect();
    let mut rhs = values.clone();
    let coefficients = householder_lstsq(&mut columns, &mut rhs);

    let norm_residuals = grid
        .iter()
        .zip(&values)
        .map(|(&d, &y)| {
            let r = y - eval_poly(&coefficients, d);
            r * r
        })
        .sum::<f64>()
        .sqrt();

    Ok(FitResult {
        case,
        coefficients,
        norm_residuals,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves the overdetermined system `A x = b` in the least-squares sense,
/// where `A` is given by columns. Householder QR: numerically stable for
/// the ill-conditioned Vandermonde matrices arising at degree 12.
fn householder_lstsq(columns: &mut [Vec<f64>], rhs: &mut [f64]) -> Vec<f64> {
    let m = rhs.len();
    let n = columns.len();
    debug_assert!(m > n, "system must be overdetermined");
    for k in 0..n {
        let norm = dot(&columns[k][k..], &columns[k][k..]).sqrt();
        debug_assert!(norm > 0.0, "rank-deficient design matrix");
        // Reflector v = x - alpha e1 with alpha sign-opposed to x[0] to
        // avoid cancellation.
        let alpha = if columns[k][k] > 0.0 { -norm } else { norm };
        let mut v = columns[k][k..].to_vec();
        v[0] -= alpha;
        let vtv = dot(&v, &v);
        if vtv == 0.0 {
            continue;
        }
        for column in columns[k..].iter_mut() {
            let w = 2.0 * dot(&v, &column[k..]) / vtv;
            for (vi, c) in v.iter().zip(column[k..].iter_mut()) {
                *c -= w * vi;
            }
        }
        let w = 2.0 * dot(&v, &rhs[k..]) / vtv;
        for (vi, r) in v.iter().zip(rhs[k..].iter_mut()) {
            *r -= w * vi;
        }
    }
    // Back-substitution against the upper triangle left in the columns.
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        for j in i + 1..n {
            s -= columns[j][i] * x[j];
        }
        x[i] = s / columns[i][i];
    }
    x
}

/// Writes fit results as CSV: `case,degree,normr,c_<degree>,...,c_0`, one
/// row per result. All results must share one degree so the header fits.
pub fn write_fit_csv<W: Write + ?Sized>(writer: &mut W, fits: &[FitResult]) -> io::Result<()> {
    assert!(!fits.is_empty(), "need at least one fit");
    let degree = fits[0].degree();
    assert!(
        fits.iter().all(|f| f.degree() == degree),
        "all fits in one export must share a degree"
    );
    write!(writer, "case,degree,normr")?;
    for power in (0..=degree).rev() {
        write!(writer, ",c_{power}")?;
    }
    writeln!(writer)?;
    for fit in fits {
        write!(
            writer,
            "{},{},{}",
            fit.case,
            degree,
            fmt_f64(fit.norm_residuals)
        )?;
        for c in &fit.coefficients {
            write!(writer, ",{}", fmt_f64(*c))?;
        }
        writeln!(writer)?;
    }
    Ok(())
}
