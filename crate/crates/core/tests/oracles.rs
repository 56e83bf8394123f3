//! Independent oracles: every expected value here is computed a second way,
//! not read back from the code under test.

use approx::assert_abs_diff_eq;
use housecast_core::distributions::{
    normal_cdf, normal_quantile, student_t_cdf, student_t_pdf, student_t_quantile,
};
use housecast_core::models::seat_distribution;
use housecast_core::simulation::{simulate_election, substream, DistrictBaseline};
use housecast_core::{fit_ols, ingest::Party, ModelId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Solves A·x = b by Gaussian elimination with partial pivoting.
fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

/// Coefficients from the normal equations XᵀX β = Xᵀy.
fn normal_equations(x: &[Vec<f64>], y: &[f64], intercept: bool) -> Vec<f64> {
    let rows: Vec<Vec<f64>> = x
        .iter()
        .map(|r| {
            if intercept {
                std::iter::once(1.0).chain(r.iter().copied()).collect()
            } else {
                r.clone()
            }
        })
        .collect();
    let p = rows[0].len();
    let mut xtx = vec![vec![0.0; p]; p];
    let mut xty = vec![0.0; p];
    for (r, yi) in rows.iter().zip(y) {
        for i in 0..p {
            xty[i] += r[i] * yi;
            for j in 0..p {
                xtx[i][j] += r[i] * r[j];
            }
        }
    }
    gauss_solve(xtx, xty)
}

#[test]
fn ols_matches_normal_equations_on_random_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..100 {
        let p = rng.gen_range(1..=4);
        let n = rng.gen_range(p + 3..=p + 20);
        let intercept = case % 2 == 0;
        let x: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..p).map(|_| rng.gen_range(-5.0..5.0)).collect())
            .collect();
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let fit = fit_ols(&x, &y, intercept).unwrap();
        let oracle = normal_equations(&x, &y, intercept);
        for (a, b) in fit.coefficients.iter().zip(&oracle) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-8);
        }
    }
}

#[test]
fn residual_std_error_matches_direct_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let x: Vec<Vec<f64>> = (0..15)
        .map(|_| vec![rng.gen_range(0.0..3.0), rng.gen_range(-1.0..1.0)])
        .collect();
    let y: Vec<f64> = x
        .iter()
        .map(|r| 2.0 * r[0] - r[1] + rng.gen_range(-0.5..0.5))
        .collect();
    let fit = fit_ols(&x, &y, true).unwrap();
    let beta = normal_equations(&x, &y, true);
    let rss: f64 = x
        .iter()
        .zip(&y)
        .map(|(r, yi)| (yi - beta[0] - beta[1] * r[0] - beta[2] * r[1]).powi(2))
        .sum();
    assert_eq!(fit.degrees_of_freedom, 12);
    assert_abs_diff_eq!(fit.residual_std_error, (rss / 12.0).sqrt(), epsilon = 1e-10);
}

/// Composite Simpson integral of the t density from 0 to `t`, plus one half.
fn integrated_t_cdf(t: f64, df: f64) -> f64 {
    let n = 4_000;
    let h = t / n as f64;
    let mut s = student_t_pdf(0.0, df) + student_t_pdf(t, df);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * student_t_pdf(i as f64 * h, df);
    }
    0.5 + s * h / 3.0
}

#[test]
fn t_cdf_matches_numeric_integration() {
    for df in [1.0, 2.5, 5.0, 17.0, 60.0] {
        for t in [0.3, 1.0, 2.2, 4.0] {
            assert_abs_diff_eq!(
                student_t_cdf(t, df),
                integrated_t_cdf(t, df),
                epsilon = 1e-9
            );
        }
    }
}

#[test]
fn t_quantile_symmetry_median_and_normal_limit() {
    for df in [1.0, 3.0, 9.0, 30.0] {
        assert_eq!(student_t_quantile(df, 0.5).unwrap(), 0.0);
        for p in [0.001, 0.025, 0.1, 0.3] {
            let lo = student_t_quantile(df, p).unwrap();
            let hi = student_t_quantile(df, 1.0 - p).unwrap();
            assert_eq!(lo, -hi);
            assert_abs_diff_eq!(student_t_cdf(hi, df), 1.0 - p, epsilon = 1e-9);
        }
    }
    for p in [0.01, 0.05, 0.2, 0.5, 0.8, 0.95, 0.99] {
        let t = student_t_quantile(1e6, p).unwrap();
        let z = normal_quantile(p).unwrap();
        assert!((t - z).abs() < 1e-3, "p={p}: {t} vs {z}");
    }
}

#[test]
fn prediction_interval_endpoints_by_brute_force_search() {
    let x: Vec<Vec<f64>> = (0..12)
        .map(|i| vec![i as f64, (i * i % 7) as f64])
        .collect();
    let y: Vec<f64> = x
        .iter()
        .enumerate()
        .map(|(i, r)| 1.0 + 0.5 * r[0] - 0.3 * r[1] + ((i * 37 % 11) as f64 - 5.0) / 10.0)
        .collect();
    let fit = fit_ols(&x, &y, true).unwrap();
    let x0 = [6.5, 2.0];
    let pi = fit.prediction_interval(&x0, 0.9).unwrap();
    let sd = fit.predictive_std(&x0).unwrap();
    let df = fit.degrees_of_freedom as f64;
    // Where the integrated density crosses 0.95.
    let (mut lo, mut hi) = (0.0, 20.0);
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if integrated_t_cdf(mid, df) < 0.95 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let crit = 0.5 * (lo + hi);
    assert_abs_diff_eq!(pi.hi - pi.point, crit * sd, epsilon = 1e-4 * sd);
    assert_abs_diff_eq!(pi.point - pi.lo, pi.hi - pi.point, epsilon = 1e-12);
}

#[test]
fn seat_distributions_sum_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let point = rng.gen_range(-120.0..120.0);
        let sd = rng.gen_range(0.0..40.0);
        let df = rng.gen_range(1..60);
        let held = rng.gen_range(0..=435);
        let f = seat_distribution(ModelId::GenericBallot, point, sd, df, held);
        let total: f64 = f.distribution.values().sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-9);
        assert!(f
            .distribution
            .keys()
            .all(|k| (0..=435).contains(&(held + k))));
    }
}

#[test]
fn seat_distribution_bins_match_cdf_differences() {
    let (point, sd, df, held) = (-20.0, 10.0, 12, 240);
    let f = seat_distribution(ModelId::GenericBallot, point, sd, df, held);
    // Far from truncation the renormalization constant is ~1.
    let p = |k: f64| {
        student_t_cdf((k + 0.5 - point) / sd, df as f64)
            - student_t_cdf((k - 0.5 - point) / sd, df as f64)
    };
    for k in [-40, -20, -5, 3] {
        assert_abs_diff_eq!(f.distribution[&k], p(k as f64), epsilon = 1e-9);
    }
    let dem: f64 = (-240..=(217 - 240)).map(|k| p(k as f64)).sum();
    assert_abs_diff_eq!(f.prob_dem_control, dem, epsilon = 1e-8);
}

#[test]
fn monotone_coupling_over_random_swing_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let baselines: Vec<DistrictBaseline> = (0..60)
        .map(|i| match i % 10 {
            0 => DistrictBaseline::Conceded(Party::R),
            1 => DistrictBaseline::Conceded(Party::D),
            _ => DistrictBaseline::Contested {
                dem_share: rng.gen_range(35.0..65.0),
                sigma: rng.gen_range(0.0..7.0),
            },
        })
        .collect();
    for pair in 0..50 {
        let a: f64 = rng.gen_range(-10.0..10.0);
        let b: f64 = a + rng.gen_range(0.0..10.0);
        let lo = simulate_election(&baselines, a, &mut substream(99, pair));
        let hi = simulate_election(&baselines, b, &mut substream(99, pair));
        for (wa, wb) in lo.dem_wins.iter().zip(&hi.dem_wins) {
            assert!(!wa || *wb, "a Democratic win at swing {a} was lost at {b}");
        }
        assert!(hi.rep_seats <= lo.rep_seats);
    }
}

#[test]
fn three_district_toy_matches_normal_tails() {
    let districts = [(48.0, 3.0), (52.0, 5.0), (45.0, 6.0)];
    let baselines: Vec<DistrictBaseline> = districts
        .iter()
        .map(|&(s, sigma)| DistrictBaseline::Contested {
            dem_share: s,
            sigma,
        })
        .collect();
    let swing = 1.5;
    let n = 100_000u64;
    let mut wins = [0u64; 3];
    for i in 0..n {
        let draw = simulate_election(&baselines, swing, &mut substream(5, i));
        for (w, d) in wins.iter_mut().zip(&draw.dem_wins) {
            *w += *d as u64;
        }
    }
    for (&(s, sigma), w) in districts.iter().zip(wins) {
        let analytic = 1.0 - normal_cdf((50.0 - s - swing) / sigma);
        assert!((w as f64 / n as f64 - analytic).abs() < 0.01);
    }
}
