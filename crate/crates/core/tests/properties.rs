use nlbs::numerics::{thomas_solve, Tridiag};
use nlbs::prelude::*;
use proptest::prelude::*;

const TOL: f64 = 1e-9;

/// Nonincreasing cost functions with a positive floor.
fn decreasing_cost() -> impl Strategy<Value = CostFunction> {
    prop_oneof![
        (1e-3..0.05f64).prop_map(|c0| CostFunction::constant(c0).unwrap()),
        (1e-3..0.05f64, 0.0..0.99f64, 0.0..0.3f64, 1e-3..0.5f64).prop_map(|(c0, frac, xm, w)| {
            CostFunction::piecewise_linear(c0, frac * c0 / w, xm, xm + w).unwrap()
        }),
        (1e-3..0.05f64, 0.0..300.0f64).prop_map(|(c0, k)| CostFunction::exponential(c0, k).unwrap()),
    ]
}

fn vtc_model() -> impl Strategy<Value = BetaModel> {
    (decreasing_cost(), 0.1..0.6f64, 1.0..1000.0f64).prop_filter_map("parabolic", |(c, sigma, per_year)| {
        BetaModel::vtc(sigma, 1.0 / per_year, c).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mean_value_between_floor_and_c0(c in decreasing_cost(), xi in 0.0..50.0f64) {
        let v = c.mean_value_modification(xi);
        prop_assert!(v <= c.c0() + TOL);
        prop_assert!(v >= c.floor().unwrap() - TOL);
    }

    #[test]
    fn mean_value_nonincreasing(c in decreasing_cost(), a in 0.0..10.0f64, b in 0.0..10.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(c.mean_value_modification(hi) <= c.mean_value_modification(lo) + TOL);
    }

    #[test]
    fn mean_value_over_xi_convex(c in decreasing_cost(), x in 1e-3..5.0f64, step in 1e-3..0.5f64) {
        let f = |x: f64| c.mean_value_modification(x) / x;
        let dd = f(x) - 2.0 * f(x + step) + f(x + 2.0 * step);
        prop_assert!(dd >= -TOL, "second difference {dd}");
    }

    #[test]
    fn beta_prime_lower_estimate(c in decreasing_cost(), xi in 0.0..20.0f64) {
        let lhs = c.mean_value_modification(xi) + xi * c.mean_value_modification_derivative(xi);
        prop_assert!(lhs >= 2.0 * c.floor().unwrap() - c.c0() - TOL);
    }

    #[test]
    fn mean_value_even(c in decreasing_cost(), xi in 0.0..5.0f64) {
        prop_assert_eq!(c.mean_value_modification(xi), c.mean_value_modification(-xi));
    }

    #[test]
    fn beta_prime_within_leland_band(m in vtc_model(), h in 0.0..50.0f64) {
        let ln = m.leland_numbers().unwrap();
        let half = 0.5 * m.sigma().powi(2);
        let bp = m.beta_prime(h).unwrap();
        prop_assert!(bp >= half * (1.0 - ln.upper) * (1.0 - 1e-12));
        prop_assert!(bp <= half * (1.0 - 2.0 * ln.lower.unwrap() + ln.upper) * (1.0 + 1e-12));
    }

    #[test]
    fn beta_strictly_increasing_on_positive_axis(m in vtc_model(), a in 0.0..30.0f64, d in 1e-3..5.0f64) {
        prop_assert!(m.beta(a + d).unwrap() > m.beta(a).unwrap());
    }

    #[test]
    fn leland_beta_is_odd_consistent(sigma in 0.05..0.8f64, le in 0.0..0.99f64, h in 1e-6..10.0f64) {
        let m = BetaModel::leland(sigma, le).unwrap();
        let half = 0.5 * sigma * sigma;
        prop_assert!((m.beta(h).unwrap() - half * (1.0 - le) * h).abs() <= 1e-15 * h);
        prop_assert!((m.beta(-h).unwrap() + half * (1.0 + le) * h).abs() <= 1e-15 * h);
    }

    #[test]
    fn thomas_residual_small(
        n in 1usize..200,
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let sub: Vec<f64> = (1..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let sup: Vec<f64> = (1..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let diag: Vec<f64> = (0..n)
            .map(|i| {
                let off = if i > 0 { sub[i - 1].abs() } else { 0.0 } + sup.get(i).map_or(0.0, |v| v.abs());
                off + rng.gen_range(0.1..3.0)
            })
            .collect();
        let x_true: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let m = Tridiag::new(sub, diag, sup).unwrap();
        let rhs = m.mul(&x_true);
        let x = thomas_solve(&m, &rhs).unwrap();
        for (a, b) in x.iter().zip(&x_true) {
            prop_assert!((a - b).abs() <= 1e-11 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn closed_form_parity(s in 1.0..100.0f64, e in 1.0..100.0f64, r in 0.0..0.1f64, sigma in 0.05..1.0f64, tau in 0.01..3.0f64) {
        let p = BsInputs::new(s, e, r, sigma, tau).unwrap();
        let lhs = bs_call(&p) - bs_put(&p);
        prop_assert!((lhs - (s - e * (-r * tau).exp())).abs() <= 1e-12 * (s + e));
        prop_assert!(bs_call_delta(&p) - bs_put_delta(&p) - 1.0 <= 1e-15);
    }
}

mod reconstruction {
    use super::*;
    use std::sync::OnceLock;

    fn solution() -> &'static GammaSolution {
        static SOL: OnceLock<GammaSolution> = OnceLock::new();
        SOL.get_or_init(|| {
            let cost = CostFunction::piecewise_linear(0.02, 0.3, 0.05, 0.1).unwrap();
            let market =
                MarketParams { rate: 0.011, numeraire: 25.0, model: BetaModel::vtc(0.3, 1.0 / 261.0, cost).unwrap() };
            solve(&GridSpec::new(2.5, 250, 200, 1.0, 0.005).unwrap(), &market).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn call_monotone_and_convex_put_monotone(j in 0usize..=200, lo in 5.0..45.0f64, ds in 0.01..1.0f64) {
            let sol = solution();
            let call = OptionContract::call(25.0, 1.0, 0.011).unwrap();
            let put = OptionContract::put(25.0, 1.0, 0.011).unwrap();
            let c: Vec<f64> = (0..3).map(|k| reconstruct_price(sol, &call, lo + k as f64 * ds, j).unwrap()).collect();
            let p: Vec<f64> = (0..3).map(|k| reconstruct_price(sol, &put, lo + k as f64 * ds, j).unwrap()).collect();
            prop_assert!(c[1] >= c[0] && c[2] >= c[1]);
            prop_assert!(p[1] <= p[0] && p[2] <= p[1]);
            prop_assert!((c[0] - 2.0 * c[1] + c[2]) / (ds * ds) >= -1e-8);
            prop_assert!((p[0] - 2.0 * p[1] + p[2]) / (ds * ds) >= -1e-8);
            prop_assert!(c.iter().chain(&p).all(|v| *v >= 0.0));
        }

        #[test]
        fn delta_is_cumulative_mass(j in 0usize..=200, s in 5.0..60.0f64) {
            let sol = solution();
            let call = OptionContract::call(25.0, 1.0, 0.011).unwrap();
            let put = OptionContract::put(25.0, 1.0, 0.011).unwrap();
            let dc = reconstruct_delta(sol, &call, s, j).unwrap();
            let dp = reconstruct_delta(sol, &put, s, j).unwrap();
            prop_assert!((dc - dp - 1.0).abs() <= 1e-15);
            prop_assert!((0.0..=sol.grid.h() * sol.level(j).iter().sum::<f64>() + 1e-15).contains(&dc));
        }
    }
}
