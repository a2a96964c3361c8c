use std::sync::OnceLock;

use mgcl_core::conformal::{dirichlet_energy, solve_chart, ConformalChart, Reparametrization, SolveOptions};
use mgcl_core::curvature::{curvature_report, minimality_residual};
use mgcl_core::surface::{graph_area, make_family, FamilyKind, GraphSurface};
use proptest::prelude::*;

fn scherk() -> GraphSurface {
    make_family(FamilyKind::Scherk, &[], 1.0).unwrap()
}

fn scherk_chart() -> &'static ConformalChart {
    static CHART: OnceLock<ConformalChart> = OnceLock::new();
    CHART.get_or_init(|| solve_chart(&scherk(), &SolveOptions::default()).unwrap())
}

fn scherk_area() -> f64 {
    static AREA: OnceLock<f64> = OnceLock::new();
    *AREA.get_or_init(|| graph_area(&scherk(), 48, 256).unwrap())
}

fn disc(count: usize, r: f64) -> Vec<(f64, f64)> {
    (0..count)
        .map(|i| {
            let rho = r * ((i * 7919 % count) as f64 / count as f64).sqrt();
            let t = 2.3999632297 * i as f64;
            (rho * t.cos(), rho * t.sin())
        })
        .collect()
}

#[test]
fn scherk_chart_is_minimal_within_chart_tolerance() {
    let res = minimality_residual(scherk_chart(), &disc(100, 0.95)).unwrap();
    assert!(res < 5e-3, "{res}");
}

#[test]
fn scherk_chart_satisfies_the_gauss_equation() {
    let chart = scherk_chart();
    for p in disc(40, 0.9) {
        let r = curvature_report(chart, p).unwrap();
        let k = r.k_intrinsic.unwrap();
        assert!((r.k_total - k).abs() <= 10.0 * chart.tol() * r.k_total.abs().max(1.0));
    }
}

#[test]
fn scherk_chart_is_conformal_on_its_grid() {
    let chart = scherk_chart();
    let r = chart.residuals();
    assert!(r.conformality <= chart.tol());
    assert!(r.min_jacobian > 0.0);
    assert!((r.energy - r.area).abs() <= 2.0 * chart.tol() * r.area);
}

#[test]
fn holomorphic_charts_scale_with_radius() {
    for radius in [0.5, 1.0, 3.0] {
        let s = make_family(FamilyKind::Holomorphic, &[0.0, 0.0, 1.0, 1.0, 0.5, 0.0], radius).unwrap();
        let c = solve_chart(&s, &SolveOptions::default()).unwrap();
        assert!(c.fast_path());
        for (u, v) in disc(10, 0.9) {
            let a = c.series().value(u, v);
            let b = s.point(radius * u, radius * v);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() <= 1e-11 * radius.powi(2).max(1.0));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn energy_dominates_area(
        a1 in -0.05f64..0.05, a2 in -0.05f64..0.05, a3 in -0.02f64..0.02,
        b1 in -0.05f64..0.05, b2 in -0.05f64..0.05, b3 in -0.02f64..0.02,
    ) {
        let psi = Reparametrization { sin: vec![a1, a2, a3], cos: vec![b1, b2, b3] };
        let e = dirichlet_energy(&psi, &scherk(), 120).unwrap();
        prop_assert!(e >= scherk_area() * (1.0 - 1e-9));
        let at_minimizer = scherk_chart().residuals().energy;
        prop_assert!(e >= at_minimizer * (1.0 - 1e-9));
    }

    #[test]
    fn boundary_map_is_monotone(t in 0.0f64..6.2, dt in 1e-4f64..0.1) {
        let b = scherk_chart().boundary();
        prop_assert!(b.eval(t + dt) > b.eval(t));
        prop_assert!((b.eval(t + 2.0 * std::f64::consts::PI) - b.eval(t) - 2.0 * std::f64::consts::PI).abs() < 1e-9);
    }
}
