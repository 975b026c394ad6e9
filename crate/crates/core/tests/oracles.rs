//! Independent numerical oracles checked against the closed forms in the library.

use std::f64::consts::{E, PI};

use qcarnot::{
    cosine_series, eigenenergy, eigenfunction_value, expectation_energy, overlap_coefficient, verify_energy_identity,
    wall_force, ExpansionRatio, MixedState64, Stroke64, WellParams64,
};

/// Composite 5-point Gauss-Legendre rule; kept separate from the library's adaptive routine.
fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 5] = [
        0.0,
        0.538_469_310_105_683_1,
        -0.538_469_310_105_683_1,
        0.906_179_845_938_664,
        -0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let c = a + (p as f64 + 0.5) * h;
        total += X.iter().zip(W).map(|(x, w)| w * f(c + 0.5 * h * x)).sum::<f64>() * 0.5 * h;
    }
    total
}

/// `int_0^L phi_n(x) chi_m(x) dx`, with `chi_m` the level-`m` eigenfunction of the `alpha L` well.
fn overlap_by_integration(n: u32, m: u32, alpha: f64) -> f64 {
    let l = 1.0;
    gauss_legendre(
        |x| eigenfunction_value(n, l, x).unwrap() * eigenfunction_value(m, alpha * l, x).unwrap(),
        0.0,
        l,
        400,
    )
}

#[test]
fn overlap_matches_direct_integration() {
    let mut worst: f64 = 0.0;
    for alpha in [1.3, 2.0, 2.5] {
        let ratio = ExpansionRatio::new(alpha).unwrap();
        for n in 1..=20 {
            for m in 1..=20 {
                let closed = overlap_coefficient(n, m, ratio).unwrap();
                let brute = overlap_by_integration(n, m, alpha);
                worst = worst.max((closed - brute).abs());
                assert!((closed - brute).abs() <= 1e-9, "n={n} m={m} alpha={alpha}: {closed} vs {brute}");
            }
        }
    }
    println!("worst overlap discrepancy {worst:e}");
}

#[test]
fn overlap_spec_examples_by_integration() {
    assert!((overlap_by_integration(1, 1, 2.0) - 4.0 * 2f64.sqrt() / (3.0 * PI)).abs() < 1e-13);
    assert!((overlap_by_integration(1, 2, 2.0) - 0.5f64.sqrt()).abs() < 1e-13);
    assert!((overlap_by_integration(3, 3, 1.0) - 1.0).abs() < 1e-13);
}

/// Partial sum of `cos(m x)/(m^2 - u^2)` with an Abel-summation tail bound.
fn cosine_partial(x: f64, u: f64, terms: usize) -> (f64, f64) {
    let sum: f64 = (1..=terms).map(|m| (m as f64 * x).cos() / ((m * m) as f64 - u * u)).sum();
    let next = (terms + 1) as f64;
    let bound = 1.0 / ((next * next - u * u) * (x / 2.0).sin().abs());
    (sum, bound)
}

#[test]
fn cosine_series_matches_partial_sums() {
    let (s, bound) = cosine_partial(PI, 0.5, 200_000);
    assert!(bound < 1e-9);
    assert!((s - (2.0 - PI)).abs() < 1e-9);
    assert!((cosine_series(PI, 0.5).unwrap() - s).abs() <= 1e-8);

    let (s, bound) = cosine_partial(PI / 2.0, 0.25, 200_000);
    assert!(bound < 1e-9);
    assert!((cosine_series(PI / 2.0, 0.25).unwrap() - s).abs() <= 1e-8);
}

#[test]
fn energy_identity_via_cosine_series() {
    // sum_m 4 alpha m^2 sin^2(m pi/alpha) / (pi^2 (m^2 - a^2)^2) = (nu d/dnu + 2) G(nu) at nu = n, with
    // G(nu) = alpha/pi^2 * [C(0, alpha nu) - C(2 pi/alpha, alpha nu)] and C the cosine-series closed form.
    for alpha in [1.1, E, 3.7] {
        let g = |nu: f64| {
            alpha / (PI * PI)
                * (cosine_series(0.0, alpha * nu).unwrap() - cosine_series(2.0 * PI / alpha, alpha * nu).unwrap())
        };
        for n in 1..=5 {
            let nu = f64::from(n);
            let h = 1e-5;
            let derivative = (g(nu + h) - g(nu - h)) / (2.0 * h);
            let value = nu * derivative + 2.0 * g(nu);
            assert!((value - 1.0).abs() < 1e-7, "alpha={alpha} n={n}: {value}");

            let direct = verify_energy_identity(n, ExpansionRatio::new(alpha).unwrap(), 1e-6).unwrap();
            assert!((direct.achieved_sum - value).abs() < 2e-6);
        }
    }
}

#[test]
fn wall_force_is_negative_energy_gradient() {
    let p = WellParams64::default();
    let states = [
        MixedState64::pure(1).unwrap(),
        MixedState64::new([(1, 0.5), (2, 0.5)]).unwrap(),
        MixedState64::new([(2, 0.1), (5, 0.3), (9, 0.6)]).unwrap(),
    ];
    for s in &states {
        for l in [0.3, 1.0, 2.7] {
            let h = 1e-6 * l;
            let fd = -(expectation_energy(s, l + h, &p).unwrap() - expectation_energy(s, l - h, &p).unwrap()) / (2.0 * h);
            let f = wall_force(s, l, &p).unwrap();
            assert!((f - fd).abs() <= 1e-6 * f, "L={l}");
        }
    }
}

#[test]
fn adiabatic_work_matches_antiderivative() {
    // int_{La}^{Lb} c / L^3 dL = c/2 (1/La^2 - 1/Lb^2)
    let p = WellParams64::new(1.3, 0.7).unwrap();
    let s = MixedState64::new([(1, 0.2), (3, 0.8)]).unwrap();
    let (la, lb) = (0.8, 2.9);
    let c = wall_force(&s, 1.0, &p).unwrap();
    let exact = 0.5 * c * (1.0 / (la * la) - 1.0 / (lb * lb));
    let st = Stroke64::adiabatic(s, la, lb, p).unwrap();
    assert!((st.work() - exact).abs() <= 1e-14 * exact);
    assert!((st.work_quadrature(1e-10).unwrap().value - exact).abs() <= 1e-10 * exact);
}

#[test]
fn pure_state_energy_consistency() {
    let p = WellParams64::default();
    for n in 1..10 {
        for l in [0.5, 1.0, 3.0] {
            let e = expectation_energy(&MixedState64::pure(n).unwrap(), l, &p).unwrap();
            let en = eigenenergy(n, l, &p).unwrap();
            assert!((e - en).abs() <= 4.0 * f64::EPSILON * en);
        }
    }
}
