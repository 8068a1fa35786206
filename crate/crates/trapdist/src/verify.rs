//! Simulation-based and analytic verification of the closed forms.
//!
//! Two independent lines of evidence back each distribution: a
//! Kolmogorov-Smirnov comparison of simulated distances against the
//! closed-form distribution function, and a deterministic consistency suite
//! (normalization, continuity, monotonicity, density/distribution
//! agreement) that needs no random input.

use std::io::{self, Write};

use crate::{dist, fmt_f64, geom, quad, CaseId};

/// A sorted sample with right-continuous empirical distribution steps.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    /// Takes ownership of the samples and sorts them. Panics on an empty
    /// or NaN-containing input.
    pub fn from_samples(mut samples: Vec<f64>) -> Self {
        assert!(!samples.is_empty(), "need at least one sample");
        assert!(
            samples.iter().all(|s| !s.is_nan()),
            "samples must not contain NaN"
        );
        samples.sort_unstable_by(f64::total_cmp);
        EmpiricalCdf { sorted: samples }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    /// Always false; construction rejects empty samples.
    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// The samples in ascending order.
    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of samples at or below `x`; steps by `k/n` at a value
    /// occurring `k` times.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&s| s <= x) as f64 / self.sorted.len() as f64
    }
}

/// Draws `n` endpoint-pair distances for `case` in generation order.
pub fn sample_distances(case: CaseId, n: usize, seed: u64) -> Vec<f64> {
    let arrangement = geom::make_arrangement(case);
    let mut rng = geom::rng_from_seed(seed);
    (0..n)
        .map(|_| arrangement.sample_distance(&mut rng))
        .collect()
}

/// Draws `n` distances and wraps them in an [`EmpiricalCdf`].
pub fn simulate_distances(case: CaseId, n: usize, seed: u64) -> EmpiricalCdf {
    EmpiricalCdf::from_samples(sample_distances(case, n, seed))
}

/// Kolmogorov-Smirnov critical value at the five percent level,
/// `1.36 / sqrt(n)` (asymptotic; intended for `n >= 100`).
pub fn ks_critical_value(n: usize) -> f64 {
    1.36 / (n as f64).sqrt()
}

/// The Kolmogorov-Smirnov statistic of the sample against the closed-form
/// distribution function:
/// `D = sup_i max(|i/n - F(x_i)|, |(i-1)/n - F(x_i)|)` over the sorted
/// samples `x_1 <= ... <= x_n`.
pub fn ks_statistic(empirical: &EmpiricalCdf, case: CaseId) -> f64 {
    ks_statistic_with_location(empirical, case).0
}

/// [`ks_statistic`] plus the sample value at which the supremum is
/// attained.
pub fn ks_statistic_with_location(empirical: &EmpiricalCdf, case: CaseId) -> (f64, f64) {
    let n = empirical.len() as f64;
    let mut best = f64::NEG_INFINITY;
    let mut location = empirical.samples()[0];
    for (i, &x) in empirical.samples().iter().enumerate() {
        let f = dist::cdf(case, x);
        let deviation = ((i + 1) as f64 / n - f).abs().max((i as f64 / n - f).abs());
        if deviation > best {
            best = deviation;
            location = x;
        }
    }
    (best, location)
}

/// One Kolmogorov-Smirnov comparison.
#[derive(Debug, Clone)]
pub struct KsReport {
    pub case: CaseId,
    pub n: usize,
    pub seed: u64,
    pub statistic: f64,
    pub critical_value: f64,
    /// Sample value where the largest deviation occurred.
    pub location: f64,
    pub pass: bool,
}

/// One deterministic consistency check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub case: CaseId,
    pub name: &'static str,
    pub statistic: f64,
    pub threshold: f64,
    /// Where the worst deviation occurred, for grid-based checks.
    pub location: Option<f64>,
    /// Number of evaluation points, for grid-based checks.
    pub grid_points: Option<usize>,
    pub pass: bool,
}

/// Everything [`run_verification`] produced for one case.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub case: CaseId,
    pub ks: Vec<KsReport>,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    /// Fraction of seeds whose KS statistic stayed below the critical
    /// value.
    pub fn ks_pass_fraction(&self) -> f64 {
        let passed = self.ks.iter().filter(|r| r.pass).count();
        passed as f64 / self.ks.len() as f64
    }

    pub fn all_checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Overall verdict: every consistency check holds and at least ninety
    /// percent of the seeds pass the KS test.
    pub fn passed(&self) -> bool {
        self.all_checks_passed() && self.ks_pass_fraction() >= 0.90
    }
}

/// Runs the KS ensemble (one simulation of `n` distances per seed) plus
/// the deterministic consistency suite for `case`.
pub fn run_verification(case: CaseId, n: usize, seeds: &[u64]) -> VerificationReport {
    assert!(n >= 1, "need at least one sample per seed");
    assert!(!seeds.is_empty(), "need at least one seed");
    let critical_value = ks_critical_value(n);
    let ks = seeds
        .iter()
        .map(|&seed| {
            let empirical = simulate_distances(case, n, seed);
            let (statistic, location) = ks_statistic_with_location(&empirical, case);
            KsReport {
                case,
                n,
                seed,
                statistic,
                critical_value,
                location,
                pass: statistic < critical_value,
            }
        })
        .collect();
    VerificationReport {
        case,
        ks,
        checks: consistency_suite(case),
    }
}

/// Deterministic checks of the closed forms for one case. All should pass;
/// each result records the observed worst deviation and its threshold.
pub fn consistency_suite(case: CaseId) -> Vec<CheckResult> {
    let (lo, hi) = dist::support(case);
    let breaks = dist::breakpoints(case);
    let mut results = Vec::new();
    let mut push = |name, statistic: f64, threshold: f64, location, grid_points| {
        results.push(CheckResult {
            case,
            name,
            statistic,
            threshold,
            location,
            grid_points,
            pass: statistic <= threshold,
        });
    };

    // Total probability mass of the density.
    let mass = quad::integrate_segments(|d| dist::pdf(case, d), breaks, 1e-11);
    push("normalization", (mass - 1.0).abs(), 1e-9, None, None);

    // The additive-constant chain must put F(d_max) at 1. Measured on the
    // raw branch value, before the public clamp.
    let defect = dist::solve_continuity_constants(case)
        .expect("constants solve")
        .endpoint_defect();
    push("cdf_endpoint", defect.abs(), 1e-10, Some(hi), None);

    push("cdf_zero", dist::cdf(case, 0.0).abs(), 0.0, Some(lo), None);

    // Branch hand-off: both neighboring branches evaluated exactly at each
    // interior breakpoint.
    let mut worst = (0.0f64, breaks[0]);
    let mut worst_cdf = (0.0f64, breaks[0]);
    let branches = dist::branch_count(case);
    for (i, &b) in breaks.iter().enumerate().take(branches).skip(1) {
        let (pdf_left, cdf_left) = dist::branch_eval(case, i - 1, b);
        let (pdf_right, cdf_right) = dist::branch_eval(case, i, b);
        if (pdf_left - pdf_right).abs() > worst.0 {
            worst = ((pdf_left - pdf_right).abs(), b);
        }
        if (cdf_left - cdf_right).abs() > worst_cdf.0 {
            worst_cdf = ((cdf_left - cdf_right).abs(), b);
        }
    }
    push("pdf_continuity", worst.0, 1e-9, Some(worst.1), None);
    push("cdf_continuity", worst_cdf.0, 1e-9, Some(worst_cdf.1), None);

    // Sign and range scans.
    let grid = 100_000;
    let mut min_pdf = (f64::INFINITY, lo);
    let mut max_decrease = (f64::NEG_INFINITY, lo);
    let mut range_excess = (0.0f64, lo);
    let mut prev_cdf = dist::cdf(case, lo);
    for i in 0..=grid {
        let d = lo + (hi - lo) * i as f64 / grid as f64;
        let p = dist::pdf(case, d);
        if p < min_pdf.0 {
            min_pdf = (p, d);
        }
        let c = dist::cdf(case, d);
        let excess = (c - 1.0).max(-c);
        if excess > range_excess.0 {
            range_excess = (excess, d);
        }
        if i > 0 && prev_cdf - c > max_decrease.0 {
            max_decrease = (prev_cdf - c, d);
        }
        prev_cdf = c;
    }
    push(
        "pdf_nonnegative",
        (-min_pdf.0).max(0.0),
        1e-12,
        Some(min_pdf.1),
        Some(grid + 1),
    );
    // Non-decreasing up to evaluation rounding: near the end of the
    // support the true increase per grid step drops below the ~1e-15
    // wobble of the branch expressions, so exact zero is not testable.
    push(
        "cdf_monotone",
        max_decrease.0.max(0.0),
        1e-12,
        Some(max_decrease.1),
        Some(grid + 1),
    );
    push(
        "cdf_in_unit_range",
        range_excess.0,
        0.0,
        Some(range_excess.1),
        Some(grid + 1),
    );

    // Central finite differences of F against f, away from breakpoints.
    let h = 1e-6;
    let fd_points = 1000;
    let mut worst_fd = (0.0f64, lo);
    for w in breaks.windows(2) {
        let (a, b) = (w[0] + 20.0 * h, w[1] - 20.0 * h);
        let per_branch = fd_points / (breaks.len() - 1);
        for i in 0..per_branch {
            let d = a + (b - a) * (i as f64 + 0.5) / per_branch as f64;
            let fd = (dist::cdf(case, d + h) - dist::cdf(case, d - h)) / (2.0 * h);
            let p = dist::pdf(case, d);
            let ratio = (fd - p).abs() / (1e-4 * p.abs()).max(1e-6);
            if ratio > worst_fd.0 {
                worst_fd = (ratio, d);
            }
        }
    }
    push(
        "pdf_cdf_consistency",
        worst_fd.0,
        1.0,
        Some(worst_fd.1),
        Some(fd_points),
    );

    // Conventions outside the support.
    let outside = dist::cdf(case, lo - 1.0)
        .abs()
        .max((1.0 - dist::cdf(case, hi + 1.0)).abs())
        .max(dist::pdf(case, lo - 1.0).abs())
        .max(dist::pdf(case, hi + 1.0).abs());
    push("support_convention", outside, 0.0, None, None);

    results
}

/// Writes verification reports as CSV:
/// `case,check,n,seed,statistic,threshold,location,pass`; KS rows first
/// (check name `ks`), then the consistency rows. Fields that do not apply
/// are left empty.
pub fn write_report_csv<W: Write + ?Sized>(
    writer: &mut W,
    reports: &[VerificationReport],
) -> io::Result<()> {
    writeln!(
        writer,
        "case,check,n,seed,statistic,threshold,location,pass"
    )?;
    for report in reports {
        for ks in &report.ks {
            writeln!(
                writer,
                "{},ks,{},{},{},{},{},{}",
                ks.case,
                ks.n,
                ks.seed,
                fmt_f64(ks.statistic),
                fmt_f64(ks.critical_value),
                fmt_f64(ks.location),
                ks.pass
            )?;
        }
        for check in &report.checks {
            writeln!(
                writer,
                "{},{},{},,{},{},{},{}",
                check.case,
                check.name,
                check.grid_points.map_or(String::new(), |g| g.to_string()),
                fmt_f64(check.statistic),
                fmt_f64(check.threshold),
                check.location.map_or(String::new(), fmt_f64),
                check.pass
            )?;
        }
    }
    Ok(())
}
