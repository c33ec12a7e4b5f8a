//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line with the
//! measured quantity; run with `cargo test --test acceptance -- --nocapture --test-threads 1`.

use std::time::Instant;

use nlbs::numerics::{central_diff, thomas_solve, Tridiag};
use nlbs::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(id: &str, pass: bool, detail: String) {
    println!("{} criterion {id}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} failed: {detail}");
}

fn reference_cost() -> CostFunction {
    CostFunction::piecewise_linear(0.02, 0.3, 0.05, 0.1).unwrap()
}

fn reference_market(cost: CostFunction) -> MarketParams {
    MarketParams { rate: 0.011, numeraire: 25.0, model: BetaModel::vtc(0.3, 1.0 / 261.0, cost).unwrap() }
}

fn reference_grid() -> GridSpec {
    GridSpec::new(2.5, 250, 200, 1.0, 0.005).unwrap()
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

const SPOTS: [f64; 5] = [20.0, 23.0, 25.0, 28.0, 30.0];

#[test]
fn c1_table_regression() {
    let sigma_max = [0.709, 1.752, 2.768, 4.722, 6.256];
    let vtc = [0.127, 0.844, 1.748, 3.695, 5.321];
    let sigma_min = [0.029, 0.421, 1.257, 3.474, 5.327];

    let market = reference_market(reference_cost());
    let call = OptionContract::call(25.0, 1.0, 0.011).unwrap();
    let start = Instant::now();
    let rows = bounds_report(&reference_grid(), &market, &call, &SPOTS, &SolverOptions::default()).unwrap();
    let elapsed = start.elapsed().as_secs_f64();

    let mut worst = [0.0f64; 3];
    for (i, r) in rows.iter().enumerate() {
        worst[0] = worst[0].max((r.v_sigma_max - sigma_max[i]).abs());
        worst[1] = worst[1].max((r.v_vtc - vtc[i]).abs());
        worst[2] = worst[2].max((r.v_sigma_min - sigma_min[i]).abs());
    }
    // reference prices carry 3 decimals, so rounding alone contributes up to 5e-4
    let pass = worst[0] <= 0.002 && worst[2] <= 0.002 && worst[1] <= 0.02 && elapsed < 5.0;
    verdict(
        "1 (reference price table)",
        pass,
        format!(
            "max |dV| sigma_max {:.5} <= 0.002, vtc {:.5} <= 0.02, sigma_min {:.5} <= 0.002; solve {elapsed:.3} s < 5 s; V_vtc = {:?}",
            worst[0],
            worst[1],
            worst[2],
            rows.iter().map(|r| (r.v_vtc * 1e4).round() / 1e4).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn c2_leland_numbers() {
    let ln = reference_market(reference_cost()).model.leland_numbers().unwrap();
    let lower = ln.lower.unwrap();
    let five = |v: f64| (v * 1e5).round() as i64;
    verdict(
        "2 (Leland numbers)",
        five(ln.upper) == 85935 && five(lower) == 21484,
        format!("Le = {:.5}, Le_lower = {:.5}", ln.upper, lower),
    );
}

#[test]
fn c3_closed_form_matches_quadrature() {
    let variants = [
        ("constant", CostFunction::constant(0.02).unwrap()),
        ("linear", CostFunction::linear(0.02, 0.3).unwrap()),
        ("piecewise reference", reference_cost()),
        ("piecewise steep", CostFunction::piecewise_linear(0.02, 1.0, 0.01, 0.02).unwrap()),
        ("exponential steep", CostFunction::exponential(0.02, 100.0).unwrap()),
        ("exponential mild", CostFunction::exponential(0.02, 2.0).unwrap()),
    ];
    let xs = log_space(1e-4, 10.0, 50);
    let mut worst = (0.0f64, "", 0.0);
    for (name, c) in &variants {
        for &xi in &xs {
            let err = (c.mean_value_modification(xi) - c.mean_value_modification_quadrature(xi).unwrap()).abs();
            if err > worst.0 {
                worst = (err, name, xi);
            }
        }
    }
    verdict(
        "3 (closed form vs quadrature)",
        worst.0 <= 1e-8,
        format!("max abs error {:.3e} <= 1e-8 ({} at xi = {:.4e}) over 50 log-spaced xi x 6 cost sets", worst.0, worst.1, worst.2),
    );
}

#[test]
fn c4_mean_value_properties() {
    let tol = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut costs = vec![
        CostFunction::constant(0.02).unwrap(),
        reference_cost(),
        CostFunction::piecewise_linear(0.02, 1.0, 0.01, 0.02).unwrap(),
        CostFunction::exponential(0.02, 100.0).unwrap(),
    ];
    for _ in 0..20 {
        let c0 = rng.gen_range(0.001..0.05);
        let xm = rng.gen_range(0.0..0.2);
        let width = rng.gen_range(1e-3..0.3);
        let kappa = rng.gen_range(0.0..0.99) * c0 / width;
        costs.push(CostFunction::piecewise_linear(c0, kappa, xm, xm + width).unwrap());
        costs.push(CostFunction::exponential(c0, rng.gen_range(0.0..200.0)).unwrap());
    }
    let xs = log_space(1e-4, 20.0, 400);
    let mut violations = Vec::new();
    for c in &costs {
        let c0 = c.c0();
        let floor = c.floor().unwrap();
        let vals: Vec<f64> = xs.iter().map(|&x| c.mean_value_modification(x)).collect();
        for (k, (&x, &v)) in xs.iter().zip(&vals).enumerate() {
            if v < floor - tol || v > c0 + tol {
                violations.push(format!("{c:?}: bounds at xi={x}"));
            }
            if k > 0 && v > vals[k - 1] + tol {
                violations.push(format!("{c:?}: monotonicity at xi={x}"));
            }
            let d = c.mean_value_modification_derivative(x);
            if v + x * d < 2.0 * floor - c0 - tol {
                violations.push(format!("{c:?}: C + xi C' at xi={x}"));
            }
        }
        // divided differences on the nonuniform grid
        for k in 1..xs.len() - 1 {
            let (x0, x1, x2) = (xs[k - 1], xs[k], xs[k + 1]);
            let f = |i: usize| vals[i] / xs[i];
            let dd = ((f(k + 1) - f(k)) / (x2 - x1) - (f(k) - f(k - 1)) / (x1 - x0)) / (x2 - x0);
            if dd < -tol {
                violations.push(format!("{c:?}: convexity at xi={x1}, dd={dd:e}"));
            }
        }
    }
    verdict(
        "4 (mean value properties)",
        violations.is_empty(),
        format!("{} cost functions x {} xi: {} violations {:?}", costs.len(), xs.len(), violations.len(), violations.first()),
    );
}

#[test]
fn c5_beta_prime_bounds() {
    let model = reference_market(reference_cost()).model;
    let ln = model.leland_numbers().unwrap();
    let (le, le_low) = (ln.upper, ln.lower.unwrap());
    let half = 0.5 * 0.3f64.powi(2);
    let (lo, hi) = (half * (1.0 - le), half * (1.0 - 2.0 * le_low + le));
    let mut out_of_band = 0;
    let mut worst_fd = 0.0f64;
    for i in 0..1000 {
        let h = 50.0 * i as f64 / 999.0;
        let bp = model.beta_prime(h).unwrap();
        if bp < lo || bp > hi {
            out_of_band += 1;
        }
        // sgn(H) jumps at 0; C̃ is smooth for ξ > 0 so no other exclusions
        if h > 1e-3 {
            let fd = central_diff(|x| model.beta(x).unwrap(), h, 1e-5 * h.max(1.0));
            worst_fd = worst_fd.max((fd - bp).abs() / bp.abs());
        }
    }
    verdict(
        "5 (beta' bounds)",
        out_of_band == 0 && worst_fd <= 1e-6,
        format!("{out_of_band} of 1000 samples outside [{lo:.6}, {hi:.6}]; max FD relative error {worst_fd:.2e} <= 1e-6"),
    );
}

#[test]
fn c6_linear_limit() {
    let market = reference_market(CostFunction::constant(0.02).unwrap());
    let (var_min, _) = market.model.sigma_bounds().unwrap();
    let opts = SolverOptions { initial_volatility: InitialVolatility::RightLimit, ..Default::default() };
    let call = OptionContract::call(25.0, 1.0, 0.011).unwrap();
    let spots: Vec<f64> = (0..=40).map(|i| 15.0 + 0.5 * i as f64).collect();
    let err = |grid: GridSpec| {
        let sol = solve_with(&grid, &market, &opts).unwrap();
        spots
            .iter()
            .map(|&s| {
                let v = reconstruct_price(&sol, &call, s, grid.time_steps).unwrap();
                (v - bs_call(&BsInputs::new(s, 25.0, 0.011, var_min.sqrt(), 1.0).unwrap())).abs()
            })
            .fold(0.0, f64::max)
    };
    let base = err(reference_grid());
    let fine = err(reference_grid().refined(2));
    verdict(
        "6 (linear limit)",
        base <= 2e-2 && fine <= 5e-3,
        format!("max |V - bs_call| on S in [15, 35]: n=250,m=200 {base:.5} <= 2e-2; n=500,m=400 {fine:.5} <= 5e-3"),
    );
}

#[test]
fn c7_comparison_principle() {
    let sol = solve(&reference_grid(), &reference_market(reference_cost())).unwrap();
    let top = sol.initial_max();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for level in sol.levels() {
        for &v in level {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    verdict(
        "7 (comparison principle)",
        lo >= -1e-8 * top && hi <= (1.0 + 1e-8) * top,
        format!("min H = {lo:.3e} >= {:.3e}, max H = {hi:.6} <= {:.6}", -1e-8 * top, (1.0 + 1e-8) * top),
    );
}

#[test]
fn c8_put_call_parity() {
    let grid = reference_grid();
    let sol = solve(&grid, &reference_market(reference_cost())).unwrap();
    let call = OptionContract::call(25.0, 1.0, 0.011).unwrap();
    let put = OptionContract::put(25.0, 1.0, 0.011).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let s = rng.gen_range(5.0..60.0);
        let j = rng.gen_range(0..=grid.time_steps);
        let lhs = reconstruct_price(&sol, &call, s, j).unwrap() - reconstruct_price(&sol, &put, s, j).unwrap();
        let rhs = nlbs::pricing::parity_sum(&sol, 25.0, s, j);
        worst = worst.max((lhs - rhs).abs() / rhs.abs());
    }
    verdict("8 (put-call parity)", worst <= 1e-10, format!("max relative deviation {worst:.2e} <= 1e-10 over 100 (S, j)"));
}

/// Gaussian elimination with partial pivoting on the dense matrix.
fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, p);
        b.swap(col, p);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                let (pivot, rest) = a.split_at_mut(row);
                for (t, p) in rest[0][col..].iter_mut().zip(&pivot[col][col..]) {
                    *t -= f * p;
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

#[test]
fn c9_thomas_against_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n: usize = rng.gen_range(1..=1000);
        let sub: Vec<f64> = (0..n.saturating_sub(1)).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let sup: Vec<f64> = (0..n.saturating_sub(1)).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let diag: Vec<f64> = (0..n)
            .map(|i| {
                let off = if i > 0 { sub[i - 1].abs() } else { 0.0 } + if i + 1 < n { sup[i].abs() } else { 0.0 };
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                sign * (off + rng.gen_range(0.01..1.0))
            })
            .collect();
        let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let m = Tridiag::new(sub.clone(), diag.clone(), sup.clone()).unwrap();
        let x = thomas_solve(&m, &rhs).unwrap();
        let mut dense = vec![vec![0.0; n]; n];
        for i in 0..n {
            dense[i][i] = diag[i];
            if i > 0 {
                dense[i][i - 1] = sub[i - 1];
            }
            if i + 1 < n {
                dense[i][i + 1] = sup[i];
            }
        }
        let y = dense_solve(dense, rhs);
        let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let err = x.iter().zip(&y).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        worst = worst.max(err / scale);
    }
    verdict("9 (Thomas vs dense)", worst <= 1e-10, format!("max relative error {worst:.2e} <= 1e-10 on 100 systems, N <= 1000"));
}

#[test]
fn shape_single_interior_maximum() {
    let sol = solve(&reference_grid(), &reference_market(reference_cost())).unwrap();
    let h = sol.terminal();
    let peak = h.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    let rising = h[..=peak].windows(2).all(|w| w[1] >= w[0]);
    let falling = h[peak..].windows(2).all(|w| w[1] <= w[0]);
    verdict(
        "shape (H single interior maximum)",
        rising && falling && peak > 0 && peak < h.len() - 1,
        format!("peak at x = {:.3}, unimodal = {}", sol.grid.x_at(peak), rising && falling),
    );
}

#[test]
fn shape_delta_monotone() {
    let grid = reference_grid();
    let sol = solve(&grid, &reference_market(reference_cost())).unwrap();
    let call = OptionContract::call(25.0, 1.0, 0.011).unwrap();
    let spots: Vec<f64> = (0..=300).map(|i| 10.0 + 0.1 * i as f64).collect();
    let mut ok = true;
    for j in [0, grid.time_steps / 3, 2 * grid.time_steps / 3, grid.time_steps] {
        let d: Vec<f64> = spots.iter().map(|&s| reconstruct_delta(&sol, &call, s, j).unwrap()).collect();
        ok &= d.windows(2).all(|w| w[1] >= w[0]) && d.iter().all(|v| (0.0..=1.0 + 1e-12).contains(v));
    }
    verdict("shape (delta monotone in S)", ok, "levels t in {0, T/3, 2T/3, T}, S in [10, 40]".into());
}

#[test]
fn shape_time_paths_inside_envelope() {
    let grid = reference_grid();
    let market = reference_market(reference_cost());
    let sol = solve(&grid, &market).unwrap();
    let call = OptionContract::call(25.0, 1.0, 0.011).unwrap();
    let (var_min, var_max) = market.model.sigma_bounds().unwrap();
    // level j carries H(·, τ* + τ_j): the smoothed initial data already has age τ*
    let tol = 0.01;
    let (mut aged, mut raw) = ((0.0f64, 0.0, 0), (0.0f64, 0.0, 0));
    let mut raw_last = 0;
    for j in 1..=grid.time_steps {
        for s in [20.0, 23.0, 25.0] {
            let v = reconstruct_price(&sol, &call, s, j).unwrap();
            for (tau, worst) in [(grid.tau(j) + grid.tau_star, &mut aged), (grid.tau(j), &mut raw)] {
                let lo = call.black_scholes(s, var_min.sqrt(), tau).unwrap();
                let hi = call.black_scholes(s, var_max.sqrt(), tau).unwrap();
                let excess = (lo - v).max(v - hi);
                if tau == grid.tau(j) && excess > tol {
                    raw_last = j;
                }
                if excess > worst.0 {
                    *worst = (excess, s, j);
                }
            }
        }
    }
    verdict(
        "shape (time paths inside envelope)",
        aged.0 <= tol,
        format!(
            "S in {{20, 23, 25}}, all levels: largest excursion {:.5} <= {tol} against bounds at tau_j + tau*; \
             against bounds at tau_j alone {:.5} (S = {}, j = {}), above tol only for j <= {raw_last}",
            aged.0, raw.0, raw.1, raw.2
        ),
    );
}
