//! Cross-checks between the quadrature and closed-form dephasing
//! integrals, the spacing solves built on them, and the shape of the
//! spacing-versus-cutoff curves.

use spatialbb::bound::{
    delta_bound, delta_closed, figure_curve, gamma_closed_zero_t, gamma_low_t_estimate,
    gamma_quadrature, BoundQuery, SpectralDensity, SPEED_OF_LIGHT,
};

const FIBER_VELOCITY: f64 = SPEED_OF_LIGHT / 1.6;
const TRANSIT_10KM: f64 = 1.6e-5 / 3.0;

fn zero_t(exponent: u32, cutoff: f64) -> SpectralDensity {
    SpectralDensity::new(exponent, 1.0, cutoff).unwrap()
}

#[test]
fn quadrature_matches_closed_form_over_the_whole_grid() {
    for exponent in 1..=3 {
        for &x in &[0.01, 0.1, 1.0, 10.0, 100.0, 1000.0] {
            let sd = zero_t(exponent, 1.0);
            let closed = gamma_closed_zero_t(&sd, x).unwrap();
            let quad = gamma_quadrature(&sd, x).unwrap();
            let rel = (quad - closed).abs() / closed;
            assert!(rel < 1e-8, "n {exponent} x {x}: rel {rel:.3e}");
        }
    }
}

#[test]
fn quadrature_survives_the_extreme_oscillation_regime() {
    // the 10 km transit against a 2e13 rad/s cutoff packs ~1e8 periods
    // into the support; the split head/tail scheme has to hold there too
    let cutoff = 2e13;
    for exponent in 1..=3 {
        let sd = zero_t(exponent, cutoff);
        let closed = gamma_closed_zero_t(&sd, TRANSIT_10KM).unwrap();
        let quad = gamma_quadrature(&sd, TRANSIT_10KM).unwrap();
        let rel = (quad - closed).abs() / closed;
        assert!(rel < 1e-8, "n {exponent}: rel {rel:.3e}");
    }
}

#[test]
fn dephasing_is_nonnegative_and_grows_for_soft_spectra() {
    // n = 1 and n = 2 accumulate monotonically; n = 3 overshoots its
    // asymptote near x = sqrt(3) before settling, so only positivity is
    // checked there
    for exponent in [1u32, 2, 3] {
        let sd = zero_t(exponent, 1.0);
        let mut last = 0.0;
        for &x in &[0.3, 1.0, 3.0, 10.0, 100.0] {
            let g = gamma_quadrature(&sd, x).unwrap();
            assert!(g >= 0.0, "n {exponent} x {x}: gamma {g}");
            if exponent < 3 {
                assert!(g >= last - 1e-12, "n {exponent} x {x}: {g} < {last}");
            }
            last = g;
        }
    }
    // the n = 3 hump: larger at x = sqrt(3) than at the tail
    let sd = zero_t(3, 1.0);
    let peak = gamma_quadrature(&sd, 3f64.sqrt()).unwrap();
    let tail = gamma_quadrature(&sd, 1e3).unwrap();
    assert!(peak > tail, "peak {peak} vs tail {tail}");
}

#[test]
fn bisection_and_closed_form_agree_at_the_reference_points() {
    let cases = [
        (1u32, 616_331.0),
        (2, 0.5925),
        (3, 1.325e-7),
    ];
    for &(exponent, approx) in &cases {
        let sd = zero_t(exponent, 2e13);
        let q = BoundQuery::with_transit_time(1e-4, FIBER_VELOCITY, TRANSIT_10KM).unwrap();
        let closed = delta_closed(&sd, &q).unwrap();
        let solved = delta_bound(&sd, &q).unwrap();
        let rel = (solved.delta_m - closed).abs() / closed;
        assert!(rel < 1e-8, "n {exponent}: closed {closed} vs solved {}", solved.delta_m);
        // sanity-pin the scale so both routes can't drift together
        assert!((closed / approx - 1.0).abs() < 1e-3, "n {exponent}: {closed}");
    }
}

#[test]
fn low_temperature_rule_stays_within_five_percent_in_its_regime() {
    // the doubled-and-substituted-cutoff rule treats every thermal photon
    // as Boltzmann-suppressed; once the transit outlasts the thermal time
    // (x >> beta*omega_c) the classically occupied window omega < 1/beta
    // dominates the thermal part and the rule undershoots, sooner for
    // softer spectra
    let rel = |exponent: u32, beta_omega_c: f64, x: f64| {
        let sd = zero_t(exponent, 1.0).with_beta(beta_omega_c).unwrap();
        let estimate = gamma_low_t_estimate(&sd, x).unwrap();
        let exact = gamma_quadrature(&sd, x).unwrap();
        (estimate - exact).abs() / exact
    };
    for &x in &[1.0, 10.0, 100.0, 1000.0] {
        assert!(rel(2, 100.0, x) < 0.05, "n 2 x {x}");
        assert!(rel(3, 50.0, x) < 5e-3, "n 3 x {x}");
    }
    for &x in &[1.0, 10.0] {
        assert!(rel(1, 50.0, x) < 0.05, "n 1 x {x}");
        assert!(rel(2, 50.0, x) < 0.05, "n 2 x {x}");
    }
    // lock the edge of validity: transit far past the thermal time
    let edge = rel(2, 50.0, 1000.0);
    assert!((0.05..0.15).contains(&edge), "edge moved: {edge:.3}");
}

#[test]
fn temperature_never_reduces_the_spacing_requirement() {
    // finite temperature adds dephasing, so the admissible spacing shrinks
    let q = BoundQuery::with_transit_time(1e-4, FIBER_VELOCITY, TRANSIT_10KM).unwrap();
    let cold = delta_bound(&zero_t(2, 2e13), &q).unwrap();
    let warm = delta_bound(&zero_t(2, 2e13).with_beta(50.0 / 2e13).unwrap(), &q).unwrap();
    assert!(warm.gamma > cold.gamma);
    assert!(warm.delta_m < cold.delta_m);
}

#[test]
fn spacing_curves_fall_with_the_cutoff() {
    let q = BoundQuery::with_transit_time(1e-4, FIBER_VELOCITY, TRANSIT_10KM).unwrap();
    for exponent in [2u32, 3] {
        let curve = figure_curve(exponent, 1.0, 1e12, 1e14, 9, &q).unwrap();
        assert_eq!(curve.len(), 9);
        for pair in curve.windows(2) {
            assert!(pair[0].0 < pair[1].0, "cutoffs must ascend");
            assert!(
                pair[1].1 < pair[0].1,
                "n {exponent}: spacing rose from {} to {}",
                pair[0].1,
                pair[1].1
            );
        }
    }
}

#[test]
fn deep_cutoff_slope_is_minus_one_half() {
    // for n = 2 and x >> 1 the dephasing saturates at (alpha/2) omega_c,
    // so the spacing scales like omega_c^(-1/2)
    let q = BoundQuery::with_transit_time(1e-4, FIBER_VELOCITY, TRANSIT_10KM).unwrap();
    let curve = figure_curve(2, 1.0, 1e12, 1e14, 12, &q).unwrap();
    let xs: Vec<f64> = curve.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = curve.iter().map(|p| p.1.ln()).collect();
    let xm = xs.iter().sum::<f64>() / xs.len() as f64;
    let ym = ys.iter().sum::<f64>() / ys.len() as f64;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    let slope = num / den;
    assert!((slope + 0.5).abs() < 0.02, "slope {slope}");
}

#[test]
fn debye_point_on_the_curve_matches_the_standalone_solve() {
    let q = BoundQuery::with_transit_time(1e-4, FIBER_VELOCITY, TRANSIT_10KM).unwrap();
    let point = figure_curve(2, 1.0, 2e13, 2e13, 1, &q).unwrap();
    assert_eq!(point.len(), 1);
    assert!((point[0].0 - 2e13).abs() < 1.0);
    assert!((point[0].1 - 0.59253).abs() < 1e-4, "spacing {}", point[0].1);
}
