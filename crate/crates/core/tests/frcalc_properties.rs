use fracstefan::frcalc::*;
use fracstefan::specfun::{gamma, SeriesAccuracy, WrightEval};
use fracstefan::Alpha;
use proptest::prelude::*;

fn power(n: usize, g: f64) -> SampledFunction {
    SampledFunction::from_fn(1.0, n, move |t| t.powf(g)).unwrap()
}

/// Error at t = 1 for n = 256, 512, 1024.
fn errors(op: impl Fn(&SampledFunction, usize) -> f64, g: f64, exact: f64) -> Vec<f64> {
    [256usize, 512, 1024]
        .iter()
        .map(|&n| (op(&power(n, g), n) - exact).abs())
        .collect()
}

fn assert_converges(label: &str, errs: &[f64]) {
    for pair in errs.windows(2) {
        // linear inputs are reproduced exactly; nothing left to halve
        if pair[0] < 1e-13 {
            assert!(pair[1] < 1e-13, "{label}: {errs:?}");
            continue;
        }
        assert!(pair[0] / pair[1] >= 1.7, "{label}: {errs:?}");
    }
}

#[test]
fn power_rule_convergence() {
    for &g in &[0.25, 0.5, 1.0, 1.5] {
        for &mu in &[0.3, 0.5, 0.7] {
            let g1 = gamma(g + 1.0).unwrap();
            let int_exact = g1 / gamma(g + 1.0 + mu).unwrap();
            let der_exact = g1 / gamma(g + 1.0 - mu).unwrap();
            let a = Alpha::new(mu).unwrap();
            assert_converges(
                &format!("I^{mu} t^{g}"),
                &errors(|f, n| rl_integral(f, mu, n).unwrap(), g, int_exact),
            );
            assert_converges(
                &format!("C D^{mu} t^{g}"),
                &errors(|f, n| caputo_derivative(f, a, n).unwrap(), g, der_exact),
            );
            assert_converges(
                &format!("RL D^{mu} t^{g}"),
                &errors(|f, n| rl_derivative(f, mu, n).unwrap(), g, der_exact),
            );
        }
    }
}

#[test]
fn caputo_power_example() {
    // ᶜD^{1/2} t^{1/4} at t = 1 is Γ(1.25)/Γ(0.75)
    let f = power(4096, 0.25);
    let v = caputo_derivative(&f, Alpha::new(0.5).unwrap(), 4096).unwrap();
    assert!((v - 0.739_668_779_797_159_7).abs() < 1e-4);
}

#[test]
fn left_inverse_improves_with_grid() {
    let f = |t: f64| (1.0 + t).ln() * t;
    let sup_err = |n: usize| {
        let s = SampledFunction::from_fn(1.0, n, f).unwrap();
        let i = rl_integral_nodes(&s, 0.4).unwrap();
        (2..=n)
            .map(|m| (rl_derivative(&i, 0.4, m).unwrap() - s.values()[m]).abs())
            .fold(0.0, f64::max)
    };
    let e: Vec<f64> = [64, 128, 256].iter().map(|&n| sup_err(n)).collect();
    assert!(e[1] < e[0] && e[2] < e[1], "{e:?}");
    assert!(e[2] < 1e-3);
}

/// Fractional integral identity for Wright profiles:
/// I^a [x^{b−1} W(−c x^{−r}, −r, b)] = x^{b+a−1} W(−c x^{−r}, −r, b+a).
fn wright_profile_check(r: f64, b: f64, a: f64, c: f64) {
    let acc = SeriesAccuracy::new(1e-15, 5000).unwrap();
    let profile = move |x: f64, beta: f64| -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        fracstefan::specfun::wright_decaying(c * x.powf(-r), r, beta, acc).unwrap()
    };
    let exact = profile(1.0, b + a);
    let integrand = move |x: f64| {
        if x == 0.0 {
            0.0
        } else {
            x.powf(b - 1.0) * profile(x, b)
        }
    };
    let value = |n: usize| {
        let s = SampledFunction::from_fn(1.0, n, integrand).unwrap();
        rl_integral(&s, a, n).unwrap()
    };
    let (coarse, fine) = (value(2048), value(4096));
    let measured = (coarse - fine).abs();
    let err = (fine - exact).abs();
    assert!(
        err <= 5.0 * measured,
        "r={r} b={b} a={a} c={c}: err {err:e} vs measured {measured:e}"
    );
    assert!(err < 1e-5);

    // the singular-endpoint variant sees only the smooth factor W(·)
    let g = SampledFunction::from_fn(1.0, 4096, move |x| profile(x, b)).unwrap();
    let v = rl_integral_singular(&g, b - 1.0, a, 4096).unwrap();
    assert!((v - exact).abs() < 1e-4, "singular variant {v} vs {exact}");
}

#[test]
fn wright_profile_integral_identity() {
    wright_profile_check(0.25, 0.8, 0.3, 1.0);
    wright_profile_check(0.375, 0.625, 0.5, 2.0);
}

#[test]
fn wright_decaying_matches_plain_series_in_range() {
    for &z in &[0.0, 0.5, 2.0, 4.0] {
        let a =
            fracstefan::specfun::wright_decaying(z, 0.3, 0.7, SeriesAccuracy::default()).unwrap();
        let b = WrightEval::new(-z, -0.3, 0.7).eval().unwrap();
        assert_eq!(a, b);
    }
}

proptest! {
    #[test]
    fn operators_are_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, at in 2usize..64, mu in 0.05f64..0.95) {
        let n = 64;
        let f = SampledFunction::from_fn(1.0, n, |t| (3.0 * t).sin()).unwrap();
        let g = SampledFunction::from_fn(1.0, n, |t| t * t + 1.0).unwrap();
        let combo = SampledFunction::new(
            1.0,
            f.values().iter().zip(g.values()).map(|(x, y)| a * x + b * y).collect(),
        ).unwrap();
        let alpha = Alpha::new(mu).unwrap();
        let tol = 1e-12 * (1.0 + a.abs() + b.abs());
        let lin = |op: &dyn Fn(&SampledFunction) -> f64| {
            (op(&combo) - (a * op(&f) + b * op(&g))).abs()
        };
        prop_assert!(lin(&|s| rl_integral(s, mu, at).unwrap()) < tol);
        prop_assert!(lin(&|s| caputo_derivative(s, alpha, at).unwrap()) < tol * 10.0);
        prop_assert!(lin(&|s| rl_derivative(s, mu, at).unwrap()) < tol * 100.0);
    }
}
