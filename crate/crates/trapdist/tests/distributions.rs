//! Monte Carlo validation of the closed forms: the simulation pipeline and
//! the analytic distributions must agree with each other at scale, and the
//! agreement must sharpen at the expected sqrt(n) rate.

use trapdist::{
    dist, ks_critical_value, ks_statistic, make_arrangement, mean_distance, sample_distances,
    simulate_distances, CaseId,
};

#[test]
fn paper_scale_ensemble_passes_ks() {
    // Five percent of seeds are expected to fail by construction; the
    // bound allows binomial fluctuation around 95 of 100.
    let n = 10_000;
    let critical = ks_critical_value(n);
    let passes = (1..=100u64)
        .filter(|&seed| {
            ks_statistic(&simulate_distances(CaseId::Ab, n, seed), CaseId::Ab) < critical
        })
        .count();
    assert!(passes >= 93, "only {passes}/100 seeds passed");
}

#[test]
fn one_million_sample_ks_is_tight() {
    let n = 1_000_000;
    for case in CaseId::ALL {
        let ks = ks_statistic(&simulate_distances(case, n, 1), case);
        assert!(ks < 0.002, "{case}: KS {ks}");
        assert!(ks < ks_critical_value(n) * 1.5, "{case}: KS {ks}");
    }
}

#[test]
fn empirical_mean_matches_quadrature() {
    let n = 10_000_000;
    for case in CaseId::ALL {
        let samples = sample_distances(case, n, 1);
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        let want = mean_distance(case);
        assert!(
            (mean - want).abs() <= 3.0 * se,
            "{case}: mean {mean} vs {want}, z = {}",
            (mean - want).abs() / se
        );
    }
}

#[test]
fn histogram_matches_density() {
    // Bin frequency around interior points against the density; half-width
    // 0.01 keeps the curvature bias two orders below the sampling noise.
    let n = 2_000_000;
    let half_width = 0.01;
    for case in CaseId::ALL {
        let samples = sample_distances(case, n, 2);
        for frac in [0.3, 0.55, 0.8] {
            let center = frac * case.d_max();
            let (lo, hi) = (center - half_width, center + half_width);
            let hits = samples.iter().filter(|&&d| d > lo && d <= hi).count();
            let p_hat = hits as f64 / n as f64;
            let density_estimate = p_hat / (2.0 * half_width);
            let se = (p_hat * (1.0 - p_hat) / n as f64).sqrt() / (2.0 * half_width);
            let want = dist::pdf(case, center);
            assert!(
                (density_estimate - want).abs() <= 4.0 * se,
                "{case} at d = {center}: estimate {density_estimate} vs pdf {want} (se {se})"
            );
        }
    }
}

#[test]
fn empirical_max_approaches_diameter() {
    let n = 1_000_000;
    for case in CaseId::ALL {
        let arrangement = make_arrangement(case);
        let d_max = case.d_max();
        assert!((arrangement.diameter() - d_max).abs() <= 1e-12);
        let emp = simulate_distances(case, n, 1);
        let max = *emp.samples().last().unwrap();
        assert!(
            max <= d_max && max >= 0.97 * d_max,
            "{case}: max {max} outside [{}, {d_max}]",
            0.97 * d_max
        );
    }
}

#[test]
fn doubling_n_shrinks_ks_like_sqrt() {
    let median_ks = |case: CaseId, n: usize| {
        let mut values: Vec<f64> = (1..=60u64)
            .map(|seed| ks_statistic(&simulate_distances(case, n, seed), case))
            .collect();
        values.sort_unstable_by(f64::total_cmp);
        0.5 * (values[29] + values[30])
    };
    for case in CaseId::ALL {
        let ratio = median_ks(case, 10_000) / median_ks(case, 20_000);
        assert!(
            (1.2..=1.7).contains(&ratio),
            "{case}: doubling ratio {ratio}"
        );
    }
}
