//! End-to-end acceptance checks, one per criterion, each with a wall-clock
//! budget. Shared by the `acceptance` test target and `mgcl verify-all`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conformal::{solve_chart, ConformalChart, SolveOptions};
use crate::curvature::{
    curvature_in_direction, curvature_report, fundamental_forms, gauss_decomposition,
    graph_curvature_report, minimality_residual, CurvatureSource,
};
use crate::estimate::{
    bernstein_decay, bound_ratio, heinz_probe, heinz_value, schauder_probe, theorem_bound_check,
    theta_sweep, HeinzSampler, SchauderSampler,
};
use crate::linalg::modified_gram_schmidt;
use crate::surface::{
    custom_surface, make_family, FamilyKind, FamilySpec, GraphSurface, Jet2, NormalFrame,
};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget_seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} [{}] {} ({:.2} s / {:.0} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.budget_seconds,
            self.detail
        )
    }
}

/// Outcome of the checks of one criterion, before timing.
struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.notes.push(what);
        } else {
            self.failures.push(what);
        }
    }
}

pub const CRITERIA: [(u32, &str, u64); 9] = [
    (1, "H_N vanishes on minimal fixtures", 5),
    (2, "z^2 sharpness fixture at the origin", 1),
    (3, "Gauss decomposition equals intrinsic curvature", 5),
    (4, "conformal mapper", 60),
    (5, "theorem bound mechanics", 1),
    (6, "Theta sweep on z^2", 120),
    (7, "Bernstein decay", 1),
    (8, "Schauder and Heinz probes", 30),
    (9, "invariance suite", 30),
];

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().map(|(id, ..)| run_criterion(*id)).collect()
}

pub fn run_criterion(id: u32) -> CriterionResult {
    let (_, name, budget) = *CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .expect("unknown criterion");
    let start = Instant::now();
    let outcome = match id {
        1 => criterion_minimality(),
        2 => criterion_sharpness(),
        3 => criterion_gauss(),
        4 => criterion_conformal(),
        5 => criterion_theorem(),
        6 => criterion_sweep(),
        7 => criterion_bernstein(),
        8 => criterion_probes(),
        _ => criterion_invariance(),
    };
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget);
    let (passed, detail) = match outcome {
        Ok(mut o) => {
            o.check(
                elapsed < budget,
                format!(
                    "runtime {:.2} s < {} s",
                    elapsed.as_secs_f64(),
                    budget.as_secs()
                ),
            );
            if o.failures.is_empty() {
                (true, o.notes.join("; "))
            } else {
                (false, o.failures.join("; "))
            }
        }
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult {
        id,
        name: name.to_string(),
        passed,
        detail,
        seconds: elapsed.as_secs_f64(),
        budget_seconds: budget.as_secs_f64(),
    }
}

fn holo(params: &[f64], radius: f64) -> GraphSurface {
    make_family(FamilyKind::Holomorphic, params, radius).expect("valid holomorphic fixture")
}

fn z2(radius: f64) -> GraphSurface {
    holo(&[0.0, 0.0, 0.0, 0.0, 1.0, 0.0], radius)
}

fn z3() -> GraphSurface {
    holo(&[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0], 1.0)
}

fn z2_plus_3z() -> GraphSurface {
    holo(&[0.0, 0.0, 3.0, 0.0, 1.0, 0.0], 1.0)
}

fn scherk() -> GraphSurface {
    make_family(FamilyKind::Scherk, &[], 1.0).expect("valid scherk fixture")
}

/// Uniform points in the open disc of radius `0.99 r`.
pub fn random_disc_points(count: usize, r: f64, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let rho = 0.99 * r * rng.random::<f64>().sqrt();
            let t = rng.random_range(0.0..2.0 * PI);
            (rho * t.cos(), rho * t.sin())
        })
        .collect()
}

/// Central-difference jet of the graph parametrization (step `h`).
pub fn finite_difference_jet(surface: &GraphSurface, point: (f64, f64), h: f64) -> Jet2 {
    let (x, y) = point;
    let p = |dx: f64, dy: f64| surface.point(x + dx, y + dy);
    let c = p(0.0, 0.0);
    let (xp, xm, yp, ym) = (p(h, 0.0), p(-h, 0.0), p(0.0, h), p(0.0, -h));
    let (pp, pm, mp, mm) = (p(h, h), p(h, -h), p(-h, h), p(-h, -h));
    let n = c.len();
    let mut jet = Jet2::zeros([x, y], n);
    for k in 0..n {
        jet.value[k] = c[k];
        jet.d1[0][k] = (xp[k] - xm[k]) / (2.0 * h);
        jet.d1[1][k] = (yp[k] - ym[k]) / (2.0 * h);
        jet.d2[0][k] = (xp[k] - 2.0 * c[k] + xm[k]) / (h * h);
        jet.d2[1][k] = (pp[k] - pm[k] - mp[k] + mm[k]) / (4.0 * h * h);
        jet.d2[2][k] = (yp[k] - 2.0 * c[k] + ym[k]) / (h * h);
    }
    jet
}

fn criterion_minimality() -> Result<Outcome> {
    let mut o = Outcome::new();
    let fixtures: Vec<(&str, GraphSurface)> = vec![
        (
            "plane",
            make_family(FamilyKind::Plane, &[1.0, 0.5, -0.3, 2.0], 1.0)?,
        ),
        ("z^2", z2(1.0)),
        ("z^3", z3()),
        ("z^2+3z", z2_plus_3z()),
        ("scherk", scherk()),
    ];
    for (i, (label, s)) in fixtures.iter().enumerate() {
        let pts = random_disc_points(100, s.radius(), 100 + i as u64);
        let res = minimality_residual(s, &pts)?;
        o.check(res < 1e-10, format!("{label} residual {res:.1e} < 1e-10"));
    }
    let para = custom_surface(&["x^2".to_string()], 1.0)?;
    let res = minimality_residual(&para, &random_disc_points(100, 1.0, 99))?;
    o.check(res > 0.5, format!("paraboloid residual {res:.3} > 0.5"));
    Ok(o)
}

fn criterion_sharpness() -> Result<Outcome> {
    let mut o = Outcome::new();
    let s = z2(1.0);
    let (_, _, forms) = s.forms_at((0.0, 0.0))?;
    let g = gauss_decomposition(&forms)?;
    for i in 0..2 {
        let c = curvature_in_direction(&forms, i)?;
        o.check((c.k + 4.0).abs() <= 1e-9, format!("K_N{} = {}", i + 1, c.k));
        o.check(
            (c.kappa_sq_sum() - 8.0).abs() <= 1e-9,
            format!("kappa^2 sum N{} = {}", i + 1, c.kappa_sq_sum()),
        );
    }
    o.check(
        (g.k_total + 8.0).abs() <= 1e-9,
        format!("K_total = {}", g.k_total),
    );
    // Oracle: finite-difference jet, frame from tangents.
    let jet = finite_difference_jet(&s, (0.0, 0.0), 1e-4);
    let frame = NormalFrame::from_chart_jet(&jet)?;
    let fd = gauss_decomposition(&fundamental_forms(&jet, &frame)?)?;
    o.check(
        (fd.k_total + 8.0).abs() <= 1e-5,
        format!("finite-difference K_total = {:.8}", fd.k_total),
    );
    Ok(o)
}

fn criterion_gauss() -> Result<Outcome> {
    let mut o = Outcome::new();
    let opts = SolveOptions::default();
    let fixtures: Vec<(&str, GraphSurface)> = vec![
        ("z^2", z2(1.0)),
        ("z^3", z3()),
        ("z^2+3z", z2_plus_3z()),
        ("plane", make_family(FamilyKind::Plane, &[0.0, 0.0], 1.0)?),
    ];
    for (i, (label, s)) in fixtures.iter().enumerate() {
        let chart = solve_chart(s, &opts)?;
        let mut worst: f64 = 0.0;
        for p in random_disc_points(50, 1.0, 300 + i as u64) {
            let r = curvature_report(&chart, p)?;
            worst = worst.max((r.k_total - r.k_intrinsic.unwrap_or(f64::NAN)).abs());
        }
        o.check(
            worst < 1e-6,
            format!("{label} max |sum K - K_intr| = {worst:.1e}"),
        );
    }
    let chart = solve_chart(&z2(1.0), &opts)?;
    let r = curvature_report(&chart, (0.25, 0.0))?;
    let expected = -8.0 / 1.25f64.powi(3);
    let ki = r.k_intrinsic.unwrap_or(f64::NAN);
    o.check(
        (r.k_total - expected).abs() < 1e-6 && (ki - expected).abs() < 1e-6,
        format!(
            "z^2 at |z| = 0.25: {:.9} vs {ki:.9} (closed form {expected:.9})",
            r.k_total
        ),
    );
    Ok(o)
}

fn criterion_conformal() -> Result<Outcome> {
    let mut o = Outcome::new();
    let opts = SolveOptions::default();
    for (label, s) in [("z^2", z2(1.0)), ("z^3", z3()), ("z^2+3z", z2_plus_3z())] {
        let c = solve_chart(&s, &opts)?;
        o.check(
            c.fast_path() && c.residuals().conformality < 1e-10,
            format!(
                "{label} fast path residual {:.1e}",
                c.residuals().conformality
            ),
        );
    }
    let c = solve_chart(&scherk(), &opts)?;
    let r = c.residuals();
    o.check(
        r.conformality <= 1e-3,
        format!("scherk residual {:.2e} <= 1e-3", r.conformality),
    );
    o.check(
        r.min_jacobian > 0.0,
        format!("min det grad F* = {:.3}", r.min_jacobian),
    );
    let [x, y] = c.center_image();
    o.check(
        x.hypot(y) <= 1e-8,
        format!("|F*(0,0)| = {:.1e}", x.hypot(y)),
    );
    let gap = r.energy_area_gap().abs();
    o.check(gap <= 2e-3, format!("energy-area gap {gap:.1e} <= 2e-3"));
    Ok(o)
}

fn criterion_theorem() -> Result<Outcome> {
    let mut o = Outcome::new();
    let s = z2(1.0);
    let opts = SolveOptions::default();
    let t = theorem_bound_check(&s, 2.0, 2.0, &opts)?;
    o.check(
        (t.chain.two_w - 2.0).abs() <= 1e-12 && (t.chain.grad_f_star_sq - 2.0).abs() <= 1e-12,
        format!(
            "2W(0,0) = {}, R^2 |grad F|^2 = {}",
            t.chain.two_w, t.chain.grad_f_star_sq
        ),
    );
    let mut all = true;
    for c1 in [2.0, 2.5, 4.0, 10.0] {
        for c2 in [2.0, 1.0, 0.5, 0.1] {
            all &= theorem_bound_check(&s, c1, c2, &opts)?.satisfied;
        }
    }
    o.check(all, "bound satisfied for C1 >= 2, C2 <= 2");
    Ok(o)
}

/// Radii `2, 4, …, 128`.
pub fn sweep_radii() -> Vec<f64> {
    (1..=7).map(|p| 2f64.powi(p)).collect()
}

fn criterion_sweep() -> Result<Outcome> {
    let mut o = Outcome::new();
    let spec = FamilySpec::new(
        FamilyKind::Holomorphic,
        vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        1.0,
    );
    let curve = theta_sweep(&spec, &sweep_radii())?;
    let mut worst: f64 = 0.0;
    let mut ratios = Vec::new();
    for p in &curve.points {
        let Some(v) = p.value else {
            o.check(false, format!("R = {} failed", p.radius));
            continue;
        };
        let exact = 8.0 * p.radius.powi(4) / (p.radius.powi(2) + p.radius.powi(4));
        worst = worst.max((v.ratio - exact).abs() / exact);
        ratios.push(v.ratio);
    }
    o.check(
        worst <= 1e-6,
        format!("max relative deviation from 8R^4/(R^2+R^4) {worst:.1e}"),
    );
    let a = curve.asymptote.unwrap_or(f64::NAN);
    o.check(
        (7.9..=8.0).contains(&a),
        format!("asymptote {a:.9} in [7.9, 8.0]"),
    );
    o.check(
        ratios.windows(2).all(|w| w[1] > w[0]),
        "ratio strictly increasing",
    );
    Ok(o)
}

fn criterion_bernstein() -> Result<Outcome> {
    let mut o = Outcome::new();
    for omega in [0.0, 1.0, 1.5, 1.99] {
        let t = bernstein_decay(1.0, omega, 8.0, &sweep_radii())?;
        o.check(
            t.slope_ok,
            format!(
                "omega {omega}: slope {:.4} vs {}",
                t.slope, t.expected_slope
            ),
        );
    }
    let plane = FamilySpec::new(FamilyKind::Plane, vec![0.7, -0.2], 1.0);
    let curve = theta_sweep(&plane, &sweep_radii())?;
    o.check(
        curve.ratios().iter().all(|r| *r == Some(0.0)),
        "plane ratios identically 0",
    );
    Ok(o)
}

fn criterion_probes() -> Result<Outcome> {
    let mut o = Outcome::new();
    let s = SchauderSampler::default();
    let a = schauder_probe(&s, 10_000, 42)?;
    o.check(
        a.statistic >= 2.0,
        format!("schauder statistic {:.6} >= 2", a.statistic),
    );
    let b = schauder_probe(&s, 10_000, 42)?;
    o.check(
        serde_json::to_string(&a)? == serde_json::to_string(&b)?,
        "schauder reproducible",
    );
    let id = heinz_value(|t| t, 512, 64);
    o.check(id == Some(2.0), format!("heinz identity witness {id:?}"));
    let h = HeinzSampler::default();
    let a = heinz_probe(&h, 1000, 7)?;
    o.check(
        a.statistic > 0.0,
        format!("heinz minimum {:.6} > 0", a.statistic),
    );
    let b = heinz_probe(&h, 1000, 7)?;
    o.check(
        serde_json::to_string(&a)? == serde_json::to_string(&b)?,
        "heinz reproducible",
    );
    Ok(o)
}

/// Random `k × k` orthogonal matrix.
pub fn random_orthogonal(k: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    loop {
        let m: Vec<Vec<f64>> = (0..k)
            .map(|_| (0..k).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        if let Some(q) = modified_gram_schmidt(&m, 1e-3) {
            return q;
        }
    }
}

/// Largest relative change of `K_total` and `Σ(κ₁² + κ₂²)` under random
/// orthogonal mixing of the frame.
pub fn frame_mixing_defect(
    surface: &GraphSurface,
    points: &[(f64, f64)],
    seed: u64,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for &p in points {
        let (jet, frame, forms) = surface.forms_at(p)?;
        let q = random_orthogonal(frame.len(), &mut rng);
        let mixed = fundamental_forms(&jet, &frame.mixed(&q))?;
        let totals = |f: &crate::curvature::FundamentalForms| -> Result<(f64, f64)> {
            let k = gauss_decomposition(f)?.k_total;
            let mut s = 0.0;
            for i in 0..f.l.len() {
                s += curvature_in_direction(f, i)?.kappa_sq_sum();
            }
            Ok((k, s))
        };
        let (k0, s0) = totals(&forms)?;
        let (k1, s1) = totals(&mixed)?;
        worst = worst
            .max((k0 - k1).abs() / k0.abs().max(1.0))
            .max((s0 - s1).abs() / s0.abs().max(1.0));
    }
    Ok(worst)
}

/// Largest difference of per-normal curvatures between chart and graph
/// coordinates at matched points, relative to the curvature scale.
pub fn parametrization_defect(chart: &ConformalChart, points: &[(f64, f64)]) -> Result<f64> {
    let surface = chart.surface();
    let mut worst: f64 = 0.0;
    for &p in points {
        let c = curvature_report(chart, p)?;
        let x = chart.series().value(p.0, p.1);
        let g = graph_curvature_report(surface, (x[0], x[1]))?;
        for (a, b) in c.per_normal.iter().zip(&g.per_normal) {
            let scale = b
                .kappa1
                .abs()
                .max(b.kappa2.abs())
                .max(1.0 / surface.radius());
            for (u, v) in [(a.h, b.h), (a.kappa1, b.kappa1), (a.kappa2, b.kappa2)] {
                worst = worst.max((u - v).abs() / scale);
            }
            worst = worst.max((a.k - b.k).abs() / (scale * scale));
        }
    }
    Ok(worst)
}

/// Largest relative change of [`bound_ratio`] under random rotations of
/// the domain.
pub fn rotation_defect(surface: &GraphSurface, rotations: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = bound_ratio(surface)?.ratio;
    let mut worst: f64 = 0.0;
    for _ in 0..rotations {
        let angle = rng.random_range(0.0..2.0 * PI);
        let r = bound_ratio(&surface.rotated(angle))?.ratio;
        worst = worst.max((r - base).abs() / base.abs().max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}

fn criterion_invariance() -> Result<Outcome> {
    let mut o = Outcome::new();
    let wide = custom_surface(
        &[
            "x^2 - y^2".into(),
            "2*x*y".into(),
            "x^3 - 3*x*y^2".into(),
            "exp(x)*sin(y)".into(),
        ],
        1.0,
    )?;
    for (label, s) in [("z^2", z2(1.0)), ("n=6 graph", wide)] {
        let d = frame_mixing_defect(&s, &random_disc_points(25, 1.0, 900), 901)?;
        o.check(d <= 1e-9, format!("{label} frame mixing {d:.1e} <= 1e-9"));
    }
    let opts = SolveOptions::default();
    for (label, s) in [("z^2", z2(1.0)), ("scherk", scherk())] {
        let chart = solve_chart(&s, &opts)?;
        let tol = if chart.fast_path() {
            1e-10
        } else {
            10.0 * chart.tol()
        };
        let d = parametrization_defect(&chart, &random_disc_points(25, 0.9, 902))?;
        o.check(
            d <= tol,
            format!("{label} chart vs graph {d:.1e} <= {tol:.0e}"),
        );
    }
    for (label, s) in [("z^2", z2(3.0)), ("z^3", z3()), ("scherk", scherk())] {
        let d = rotation_defect(&s, 5, 903)?;
        o.check(d <= 1e-8, format!("{label} rotation {d:.1e} <= 1e-8"));
    }
    Ok(o)
}
