//! Scenario execution. Each scenario produces in-memory artifacts; writing
//! them is left to the caller.

use mgcl_core::acceptance::run_all;
use mgcl_core::conformal::solve_chart;
use mgcl_core::curvature::{curvature_report, graph_curvature_report, reports_to_csv};
use mgcl_core::estimate::{
    bernstein_decay, heinz_probe, schauder_probe, theorem_bound_check, theta_sweep, ProbeReport,
};
use mgcl_core::report::fmt_f64;
use serde::Serialize;

use crate::config::{Format, Scenario, ScenarioConfig};
use crate::svg::PlotStyle;

pub struct Plot {
    pub points: Vec<(f64, f64)>,
    pub style: PlotStyle,
}

#[derive(Default)]
pub struct Artifacts {
    /// `(file name, format, contents)`
    pub files: Vec<(String, Format, String)>,
    pub plot: Option<Plot>,
    /// Human-readable lines for stdout.
    pub summary: Vec<String>,
    /// Numerical failure that still produced output.
    pub failure: Option<String>,
}

impl Artifacts {
    fn add(&mut self, name: &str, format: Format, contents: String) {
        self.files.push((name.to_string(), format, contents));
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), String> {
        let mut s = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
        s.push('\n');
        self.add(name, Format::Json, s);
        Ok(())
    }
}

type Outcome = Result<Artifacts, String>;

pub fn run(scenario: Scenario, cfg: &ScenarioConfig) -> Outcome {
    match scenario {
        Scenario::Analyze => analyze(cfg),
        Scenario::Conformal => conformal(cfg),
        Scenario::ThetaSweep => sweep(cfg),
        Scenario::ProbeSchauder => probe(cfg, true),
        Scenario::ProbeHeinz => probe(cfg, false),
        Scenario::Bernstein => bernstein(cfg),
        Scenario::VerifyAll => verify_all(),
    }
}

fn e(err: mgcl_core::Error) -> String {
    err.to_string()
}

fn analyze(cfg: &ScenarioConfig) -> Outcome {
    let surface = cfg.surface.as_ref().expect("validated").build().map_err(e)?;
    let reports = cfg
        .numeric
        .points
        .iter()
        .map(|&p| graph_curvature_report(&surface, p))
        .collect::<Result<Vec<_>, _>>()
        .map_err(e)?;
    let mut out = Artifacts::default();
    for r in &reports {
        out.summary.push(format!(
            "({}, {}): K_total = {}, sum kappa^2 = {}",
            r.point[0],
            r.point[1],
            r.k_total,
            r.total_kappa_sq()
        ));
    }
    out.add("analyze.csv", Format::Csv, reports_to_csv(&reports));
    match (cfg.numeric.c1, cfg.numeric.c2) {
        (Some(c1), Some(c2)) => {
            let check = theorem_bound_check(&surface, c1, c2, &cfg.numeric.solve_options()).map_err(e)?;
            out.summary.push(format!(
                "bound check: {} <= {} is {}",
                check.lhs, check.rhs, check.satisfied
            ));
            #[derive(Serialize)]
            struct Analysis<'a, R, C> {
                reports: &'a R,
                theorem_check: C,
            }
            out.json(
                "analyze.json",
                &Analysis {
                    reports: &reports,
                    theorem_check: check,
                },
            )?;
        }
        _ => out.json("analyze.json", &reports)?,
    }
    Ok(out)
}

fn conformal(cfg: &ScenarioConfig) -> Outcome {
    let surface = cfg.surface.as_ref().expect("validated").build().map_err(e)?;
    let chart = solve_chart(&surface, &cfg.numeric.solve_options()).map_err(e)?;
    let res = chart.residuals();
    let mut out = Artifacts::default();
    out.summary.push(format!(
        "conformality residual {:e}, min Jacobian {}, energy {}, area {}, {} iterations{}",
        res.conformality,
        res.min_jacobian,
        res.energy,
        res.area,
        chart.iterations(),
        if chart.fast_path() { " (closed form)" } else { "" }
    ));
    let reports = cfg
        .numeric
        .points
        .iter()
        .map(|&p| curvature_report(&chart, p))
        .collect::<Result<Vec<_>, _>>()
        .map_err(e)?;
    out.add("conformal.csv", Format::Csv, chart.to_csv());
    out.add("conformal_curvature.csv", Format::Csv, reports_to_csv(&reports));
    out.json("conformal.json", &chart.to_sidecar())?;
    out.json("conformal_curvature.json", &reports)?;
    let b = chart.boundary();
    let n = 256;
    out.plot = Some(Plot {
        points: (0..=n)
            .map(|j| {
                let t = std::f64::consts::TAU * j as f64 / n as f64;
                (t, b.eval(t))
            })
            .collect(),
        style: PlotStyle {
            title: "boundary reparametrization".into(),
            x_label: "theta".into(),
            y_label: "psi(theta)".into(),
            ..Default::default()
        },
    });
    Ok(out)
}

fn sweep(cfg: &ScenarioConfig) -> Outcome {
    let family = cfg.surface.as_ref().expect("validated");
    let curve = theta_sweep(family, &cfg.numeric.radii).map_err(e)?;
    let mut out = Artifacts::default();
    for p in &curve.points {
        out.summary.push(match (&p.value, &p.failure) {
            (Some(v), _) => format!("R = {}: ratio {}", p.radius, v.ratio),
            (None, f) => format!("R = {}: failed ({})", p.radius, f.as_deref().unwrap_or("unknown")),
        });
    }
    if let Some(a) = curve.asymptote {
        out.summary.push(format!("extrapolated asymptote {a}"));
    }
    if curve.degenerate_zero {
        out.summary.push("all ratios vanish; no exponent or asymptote fitted".into());
    }
    out.add("theta-sweep.csv", Format::Csv, curve.to_csv());
    out.json("theta-sweep.json", &curve)?;
    out.plot = Some(Plot {
        points: curve
            .points
            .iter()
            .filter_map(|p| p.value.as_ref().map(|v| (p.radius, v.ratio)))
            .collect(),
        style: PlotStyle {
            title: "curvature bound ratio".into(),
            x_label: "R".into(),
            y_label: "R^4 max(kappa1^2 + kappa2^2) / |X|^2".into(),
            log_x: true,
            log_y: false,
            asymptote: curve.asymptote,
        },
    });
    if curve.failed() {
        let n = curve.points.iter().filter(|p| p.value.is_none()).count();
        out.failure = Some(format!("{n} of {} radii failed", curve.points.len()));
    }
    Ok(out)
}

fn probe_csv(r: &ProbeReport) -> String {
    format!(
        "kind,samples,statistic,seed,skipped\n{:?},{},{},{},{}\n",
        r.kind,
        r.samples,
        fmt_f64(r.statistic),
        r.seed,
        r.skipped
    )
    .to_lowercase()
}

fn probe(cfg: &ScenarioConfig, schauder: bool) -> Outcome {
    let n = &cfg.numeric;
    let (report, name) = if schauder {
        (schauder_probe(&n.schauder, n.samples, n.seed).map_err(e)?, "probe-schauder")
    } else {
        (heinz_probe(&n.heinz, n.samples, n.seed).map_err(e)?, "probe-heinz")
    };
    let mut out = Artifacts::default();
    out.summary.push(format!(
        "{name}: statistic {} over {} samples (seed {}, {} skipped)",
        report.statistic, report.samples, report.seed, report.skipped
    ));
    out.add(&format!("{name}.csv"), Format::Csv, probe_csv(&report));
    out.json(&format!("{name}.json"), &report)?;
    Ok(out)
}

fn bernstein(cfg: &ScenarioConfig) -> Outcome {
    let n = &cfg.numeric;
    let table = bernstein_decay(n.omega_cap, n.omega, n.theta, &n.radii).map_err(e)?;
    let mut out = Artifacts::default();
    out.summary.push(format!(
        "slope {} (expected {}), final bound {}",
        table.slope, table.expected_slope, table.final_value
    ));
    out.add("bernstein.csv", Format::Csv, table.to_csv());
    out.json("bernstein.json", &table)?;
    out.plot = Some(Plot {
        points: table.rows.iter().map(|r| (r.radius, r.bound)).collect(),
        style: PlotStyle {
            title: format!("curvature bound decay, omega = {}", n.omega),
            x_label: "R".into(),
            y_label: "Theta Omega^2 R^(2 omega - 4)".into(),
            log_x: true,
            log_y: true,
            asymptote: None,
        },
    });
    Ok(out)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn verify_all() -> Outcome {
    let results = run_all();
    let mut out = Artifacts::default();
    let mut csv = String::from("id,name,passed,seconds,budget_seconds,detail\n");
    for r in &results {
        out.summary.push(r.line());
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.id,
            csv_field(&r.name),
            r.passed,
            fmt_f64(r.seconds),
            fmt_f64(r.budget_seconds),
            csv_field(&r.detail)
        ));
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    out.summary.push(format!(
        "{} passed, {failed} failed",
        results.len() - failed
    ));
    out.add("verify-all.csv", Format::Csv, csv);
    out.json("verify-all.json", &results)?;
    if failed > 0 {
        out.failure = Some(format!("{failed} acceptance criteria failed"));
    }
    Ok(out)
}
