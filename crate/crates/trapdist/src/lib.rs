//! Distance distributions for a unit trapezoid and its reflected neighbors.
//!
//! The trapezoid has long base 2, short base 1, legs 1, and base angles of
//! sixty degrees, so it tiles into three unit equilateral triangles. Four
//! endpoint placements are covered, each naming the polygon pair the two
//! endpoints are drawn from:
//!
//! * [`CaseId::Ab`]: both endpoints in the same trapezoid,
//! * [`CaseId::Cd`]: second endpoint in the reflection across the long base
//!   (the union is a regular hexagon),
//! * [`CaseId::Ef`]: second endpoint in the reflection across a leg,
//! * [`CaseId::Gh`]: second endpoint in the reflection across the short base.
//!
//! [`geom`] builds the polygon pairs and samples points uniformly from them,
//! [`dist`] evaluates the closed-form densities and distribution functions,
//! [`verify`] checks the closed forms against simulation, and [`polyfit`]
//! produces polynomial approximations of the densities.
//!
//! ```
//! use trapdist::{cdf, pdf, sample_distances, CaseId};
//!
//! let density = pdf(CaseId::Ef, 1.25);
//! let mass = cdf(CaseId::Ef, 1.25);
//! assert!(density > 0.0 && (0.0..1.0).contains(&mass));
//!
//! let draws = sample_distances(CaseId::Ef, 1_000, 42);
//! assert!(draws.iter().all(|d| (0.0..=CaseId::Ef.d_max()).contains(d)));
//! ```

pub mod dist;
pub mod geom;
pub mod polyfit;
pub mod quad;
pub mod verify;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use dist::{
    breakpoints, cdf, mean_distance, pdf, scaled_cdf, scaled_pdf, solve_continuity_constants,
    support, ContinuityConstants, DistError, ScaledDistribution,
};
pub use geom::{make_arrangement, rng_from_seed, Arrangement, Point2, Trapezoid};
pub use polyfit::{eval_poly, fit_pdf, write_fit_csv, FitConfig, FitError, FitResult};
pub use verify::{
    consistency_suite, ks_critical_value, ks_statistic, ks_statistic_with_location,
    run_verification, sample_distances, simulate_distances, write_report_csv, CheckResult,
    EmpiricalCdf, KsReport, VerificationReport,
};

pub(crate) const SQRT_3: f64 = 1.7320508075688772;

/// Identifies one of the four endpoint placements.
///
/// The discriminants index the internal distribution tables; `ALL` lists the
/// cases in that order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseId {
    Ab = 0,
    Cd = 1,
    Ef = 2,
    Gh = 3,
}

impl CaseId {
    /// All cases, in table order.
    pub const ALL: [CaseId; 4] = [CaseId::Ab, CaseId::Cd, CaseId::Ef, CaseId::Gh];

    /// Lowercase two-letter label used in CLI arguments and CSV output.
    pub fn label(self) -> &'static str {
        match self {
            CaseId::Ab => "ab",
            CaseId::Cd => "cd",
            CaseId::Ef => "ef",
            CaseId::Gh => "gh",
        }
    }

    /// Largest attainable distance between the two endpoints.
    pub fn d_max(self) -> f64 {
        match self {
            // Diameter of a single trapezoid and of the hexagon union alike.
            CaseId::Ab | CaseId::Cd => 2.0,
            CaseId::Ef => 2.0 * SQRT_3,
            CaseId::Gh => 7f64.sqrt(),
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Error returned when parsing a case label fails.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown case {0:?}, expected one of: ab, cd, ef, gh")]
pub struct ParseCaseError(String);

impl FromStr for CaseId {
    type Err = ParseCaseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ab" => Ok(CaseId::Ab),
            "cd" => Ok(CaseId::Cd),
            "ef" => Ok(CaseId::Ef),
            "gh" => Ok(CaseId::Gh),
            _ => Err(ParseCaseError(s.to_owned())),
        }
    }
}

/// Formats a float so that parsing the result recovers the exact bits.
///
/// `Display` on `f64` picks the shortest decimal string that round-trips,
/// which keeps CSV output free of spurious trailing digits while losing no
/// precision.
pub fn fmt_f64(value: f64) -> String {
    format!("{value}")
}
