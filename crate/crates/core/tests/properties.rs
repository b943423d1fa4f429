mod common;

use common::{profile, spectrum_strategy, spiked_strategy};
use pppca::likelihood::{admissible_sup, competition_sup, stationary_delta};
use pppca::select::maximizer_at;
use pppca::spectrum::{sample_spectrum, DataMatrix};
use pppca::{
    bound_u_a, bound_u_b, exact_delta_interval, lawley_statistic, penalized_difference,
    penalized_profile_gradient, penalized_profile_loglik, profile_loglik, sigma_tilde,
    vard_select, LawleyScale,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn profile_likelihood_is_non_decreasing(v in spectrum_strategy(), m in 2usize..20000) {
        let sp = profile(v, m);
        let mf = m as f64;
        for k in 1..sp.n() - 1 {
            let (a, b) = (profile_loglik(&sp, mf, k).unwrap(), profile_loglik(&sp, mf, k + 1).unwrap());
            prop_assert!(b >= a - 1e-12 * a.abs(), "k = {k}: {a} > {b}");
        }
    }

    #[test]
    fn recursion_identity(v in spectrum_strategy()) {
        let sp = profile(v, 10);
        let n = sp.n();
        for k in 2..n {
            let lhs = sp.lambda(k);
            let rhs = (n - k + 1) as f64 * sp.sigma2(k - 1) - (n - k) as f64 * sp.sigma2(k);
            prop_assert!((lhs - rhs).abs() <= 1e-10, "k = {k}");
        }
    }

    #[test]
    fn zero_penalty_identity(v in spectrum_strategy(), m in 2usize..20000) {
        let sp = profile(v, m);
        for k in 1..sp.n() {
            let (a, b) = (
                penalized_profile_loglik(&sp, m as f64, k, 0.0).unwrap(),
                profile_loglik(&sp, m as f64, k).unwrap(),
            );
            prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
            prop_assert_eq!(sigma_tilde(&sp, k, 0.0).unwrap(), sp.sigma2(k));
        }
    }

    #[test]
    fn gradient_matches_central_differences(
        v in spectrum_strategy(),
        kf in 0.0f64..1.0,
        t in 0.05f64..0.95,
    ) {
        let sp = profile(v, 200);
        let n = sp.n();
        let k = 1 + ((n - 2) as f64 * kf) as usize;
        let d = t * admissible_sup::<f64>(n, k);
        let h = 1e-7;
        prop_assume!(d > h);
        let f = |x| penalized_profile_loglik(&sp, 200.0, k, x).unwrap();
        let fd = (f(d + h) - f(d - h)) / (2.0 * h);
        let g = penalized_profile_gradient(&sp, 200.0, k, d).unwrap();
        prop_assert!((fd - g).abs() <= 1e-4 * g.abs().max(1.0), "fd {fd} vs {g}");
    }

    #[test]
    fn penalized_likelihood_falls_until_its_stationary_point(v in spectrum_strategy(), kf in 0.0f64..1.0) {
        let sp = profile(v, 50);
        let k = 1 + ((sp.n() - 2) as f64 * kf) as usize;
        let top = stationary_delta(&sp, k).unwrap();
        prop_assume!(top > 1e-9);
        for i in 1..20 {
            let d = top * i as f64 / 20.0;
            prop_assert!(penalized_profile_gradient(&sp, 50.0, k, d).unwrap() < 0.0);
        }
    }

    #[test]
    fn up_difference_increases_on_the_competition_region(v in spectrum_strategy(), kf in 0.0f64..1.0) {
        let Some((up, _, tol)) = shape_samples(v, kf) else { return Ok(()) };
        for w in up.windows(2) {
            prop_assert!(w[1] >= w[0] - tol, "l(k) − l(k+1) must increase: {up:?}");
        }
    }

    #[test]
    fn up_difference_is_concave(v in spectrum_strategy(), kf in 0.0f64..1.0) {
        let Some((up, _, tol)) = shape_samples(v, kf) else { return Ok(()) };
        for w in up.windows(3) {
            prop_assert!(w[0] - 2.0 * w[1] + w[2] <= tol);
        }
    }

    #[test]
    fn down_difference_decreases(v in spectrum_strategy(), kf in 0.0f64..1.0) {
        let Some((_, down, tol)) = shape_samples(v, kf) else { return Ok(()) };
        for w in down.windows(2) {
            prop_assert!(w[1] <= w[0] + tol);
        }
    }

    #[test]
    fn down_difference_is_convex(v in spectrum_strategy(), kf in 0.0f64..1.0) {
        let Some((_, down, tol)) = shape_samples(v, kf) else { return Ok(()) };
        for w in down.windows(3) {
            prop_assert!(w[0] - 2.0 * w[1] + w[2] >= -tol);
        }
    }

    #[test]
    fn m_only_scales_the_likelihood(v in spectrum_strategy(), c in 1.5f64..50.0, t in 0.0f64..0.9) {
        let sp = profile(v, 100);
        let n = sp.n();
        let d = t * admissible_sup::<f64>(n, n - 1);
        for k in 1..n - 1 {
            let base = penalized_difference(&sp, 100.0, k, k + 1, d).unwrap();
            let scaled = penalized_difference(&sp, 100.0 * c, k, k + 1, d).unwrap();
            prop_assert!((scaled - c * base).abs() <= 1e-9 * scaled.abs().max(1.0));
        }
        prop_assert_eq!(maximizer_at(&sp, 100.0, d).unwrap(), maximizer_at(&sp, 100.0 * c, d).unwrap());
    }

    #[test]
    fn bounds_sit_inside_the_exact_interval(v in spiked_strategy()) {
        let sp = profile(v, 2000);
        for k in 2..sp.n() - 1 {
            let (Ok(ua), Ok(ub)) = (bound_u_a(&sp, k), bound_u_b(&sp, k)) else { continue };
            let Some((a, b)) = exact_delta_interval(&sp, 2000.0, k).unwrap().bounds() else { continue };
            prop_assert!(a <= ua + 1e-10, "k = {k}: a = {a} > u_a = {ua}");
            prop_assert!(ub <= b + 1e-10, "k = {k}: u_b = {ub} > b = {b}");
        }
    }

    #[test]
    fn consecutive_bounds_do_not_overlap(v in spiked_strategy()) {
        let sp = profile(v, 2000);
        for k in 1..sp.n() - 2 {
            if let (Ok(ua), Ok(ub_next)) = (bound_u_a(&sp, k), bound_u_b(&sp, k + 1)) {
                prop_assert!(ub_next <= ua * (1.0 + 1e-12) + 1e-12, "k = {k}");
            }
        }
    }

    #[test]
    fn lawley_statistic_vanishes_only_on_constant_tails(v in spectrum_strategy(), flat in 2usize..5) {
        let n = v.len();
        let j = n + 1 - flat;
        let sp = profile(v.clone(), 500);
        let s = lawley_statistic(&sp, 500.0, j, LawleyScale::Corrected).unwrap();
        prop_assert!(s.statistic > 0.0);
        let mut w = v;
        let mean = w[j - 1..].iter().sum::<f64>() / flat as f64;
        w[j - 1..].iter_mut().for_each(|x| *x = mean);
        prop_assume!(w[j - 2] > mean);
        let sp = profile(w, 500);
        prop_assert_eq!(lawley_statistic(&sp, 500.0, j, LawleyScale::Corrected).unwrap().statistic, 0.0);
    }

    #[test]
    fn vard_criterion_is_non_negative(v in spectrum_strategy()) {
        let r = vard_select(&profile(v, 10)).unwrap();
        prop_assert!(r.diagnostics["criterion"].iter().all(|&c| c >= 0.0));
    }
}

/// `l(k) − l(k±1)` at 20 interior points of `(0, competition_sup(k))`, with
/// a round-off tolerance.
fn shape_samples(v: Vec<f64>, kf: f64) -> Option<(Vec<f64>, Vec<f64>, f64)> {
    let sp = profile(v, 100);
    let n = sp.n();
    let k = 2 + ((n - 4) as f64 * kf) as usize;
    let top = competition_sup(&sp, k).unwrap();
    if top <= 1e-6 {
        return None;
    }
    let pts: Vec<f64> = (1..=20).map(|i| top * i as f64 / 21.0).collect();
    let up: Vec<f64> = pts.iter().map(|&d| penalized_difference(&sp, 100.0, k, k + 1, d).unwrap()).collect();
    let down: Vec<f64> = pts.iter().map(|&d| penalized_difference(&sp, 100.0, k, k - 1, d).unwrap()).collect();
    let scale = up.iter().chain(&down).fold(1.0f64, |a, x| a.max(x.abs()));
    Some((up, down, 1e-9 * scale))
}

fn data_strategy() -> impl Strategy<Value = (usize, usize, Vec<f64>)> {
    (3usize..8, 2usize..8).prop_flat_map(|(n, m)| {
        (Just(n), Just(m), prop::collection::vec(-5.0f64..5.0, n * m))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectrum_has_trace_n_and_ignores_feature_order((n, m, vals) in data_strategy(), seed in any::<u64>()) {
        let d = DataMatrix::new(n, m, vals.clone()).unwrap();
        let Ok(sp) = sample_spectrum(&d) else { return Ok(()) };
        prop_assert!((sp.trace() - n as f64).abs() <= 1e-8 * n as f64);
        // rotate the columns by a seed-dependent shift
        let shift = (seed % m as u64) as usize;
        let permuted: Vec<f64> = (0..n)
            .flat_map(|i| (0..m).map(move |j| (i, (j + shift) % m)))
            .map(|(i, j)| vals[i * m + j])
            .collect();
        let sp2 = sample_spectrum(&DataMatrix::new(n, m, permuted).unwrap()).unwrap();
        for (a, b) in sp.eigenvalues().iter().zip(sp2.eigenvalues()) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }
}
