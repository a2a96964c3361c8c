//! Fundamental forms, normal curvatures and the Gauss decomposition
//! `K = Σ K_Σ` of a two-dimensional surface in `ℝⁿ`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conformal::{chart_jet, ConformalChart};
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::surface::{eval_jet, orthonormal_frame, GraphSurface, Jet2, NormalBasis, NormalFrame};

/// Discriminants `H² − K` in `[-DISCRIMINANT_CLAMP, 0)` are treated as zero.
pub const DISCRIMINANT_CLAMP: f64 = 1e-12;
/// Tolerance of checks on exact (analytic-jet) quantities.
pub const ANALYTIC_TOL: f64 = 1e-10;
/// `K_total` against `K_intrinsic` on analytic charts.
pub const GAUSS_ANALYTIC_TOL: f64 = 1e-6;
/// Checks on solved charts use this multiple of the chart tolerance.
pub const CHART_TOL_FACTOR: f64 = 10.0;

pub type Sym2 = [[f64; 2]; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FundamentalForms {
    pub h: Sym2,
    #[serde(rename = "W")]
    pub w: f64,
    /// `L_{N,ij} = X_{uⁱuʲ}·N`, one matrix per frame normal.
    #[serde(rename = "L")]
    pub l: Vec<Sym2>,
    pub basis: NormalBasis,
}

impl FundamentalForms {
    /// `|W² − det h| / det h`.
    pub fn determinant_defect(&self) -> f64 {
        let det = self.h[0][0] * self.h[1][1] - self.h[0][1] * self.h[1][0];
        (self.w * self.w - det).abs() / det
    }
}

/// Fundamental forms against the orthonormal frame.
pub fn fundamental_forms(jet: &Jet2, frame: &NormalFrame) -> Result<FundamentalForms> {
    fundamental_forms_in(jet, frame, NormalBasis::Orthonormal)
}

pub fn fundamental_forms_in(
    jet: &Jet2,
    frame: &NormalFrame,
    basis: NormalBasis,
) -> Result<FundamentalForms> {
    if frame.at != jet.point {
        return Err(Error::Precondition(format!(
            "frame built at {:?} but jet evaluated at {:?}",
            frame.at, jet.point
        )));
    }
    let h11 = dot(&jet.d1[0], &jet.d1[0]);
    let h12 = dot(&jet.d1[0], &jet.d1[1]);
    let h22 = dot(&jet.d1[1], &jet.d1[1]);
    let det = h11 * h22 - h12 * h12;
    if !(det > f64::EPSILON * h11 * h22) || !det.is_finite() {
        return Err(Error::Geometry(format!(
            "degenerate metric (det h = {det:e})"
        )));
    }
    let normals = match basis {
        NormalBasis::Raw => &frame.raw,
        NormalBasis::Orthonormal => &frame.ortho,
    };
    let l = normals
        .iter()
        .map(|nv| {
            let l11 = dot(&jet.d2[0], nv);
            let l12 = dot(&jet.d2[1], nv);
            let l22 = dot(&jet.d2[2], nv);
            [[l11, l12], [l12, l22]]
        })
        .collect();
    Ok(FundamentalForms {
        h: [[h11, h12], [h12, h22]],
        w: det.sqrt(),
        l,
        basis,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalCurvature {
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub kappa1: f64,
    pub kappa2: f64,
}

impl NormalCurvature {
    pub fn kappa_sq_sum(&self) -> f64 {
        self.kappa1 * self.kappa1 + self.kappa2 * self.kappa2
    }
}

/// `H_N`, `K_N` and the principal curvatures `κ₁ ≥ κ₂` along normal `idx`.
pub fn curvature_in_direction(forms: &FundamentalForms, idx: usize) -> Result<NormalCurvature> {
    let l = forms.l.get(idx).ok_or_else(|| {
        Error::Precondition(format!(
            "normal index {idx} out of range (frame has {})",
            forms.l.len()
        ))
    })?;
    let h = forms.h;
    let w2 = forms.w * forms.w;
    let mean = (l[0][0] * h[1][1] - 2.0 * l[0][1] * h[0][1] + l[1][1] * h[0][0]) / (2.0 * w2);
    let gauss = (l[0][0] * l[1][1] - l[0][1] * l[0][1]) / w2;
    let mut disc = mean * mean - gauss;
    if disc < 0.0 {
        if disc < -DISCRIMINANT_CLAMP {
            return Err(Error::Consistency { discriminant: disc });
        }
        disc = 0.0;
    }
    let root = disc.sqrt();
    Ok(NormalCurvature {
        h: mean,
        k: gauss,
        kappa1: mean + root,
        kappa2: mean - root,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussDecomposition {
    #[serde(rename = "K_total")]
    pub k_total: f64,
    pub parts: Vec<f64>,
}

/// `K = Σ_Σ K_Σ` over an orthonormal frame.
pub fn gauss_decomposition(forms: &FundamentalForms) -> Result<GaussDecomposition> {
    if forms.basis != NormalBasis::Orthonormal {
        return Err(Error::Precondition(
            "the Gauss decomposition needs an orthonormal normal frame".into(),
        ));
    }
    let parts = (0..forms.l.len())
        .map(|i| curvature_in_direction(forms, i).map(|c| c.k))
        .collect::<Result<Vec<_>>>()?;
    Ok(GaussDecomposition {
        k_total: parts.iter().sum(),
        parts,
    })
}

/// Something a curvature can be evaluated on: a jet and the matching
/// orthonormal frame at a coordinate point.
pub trait CurvatureSource {
    fn jet_at(&self, point: (f64, f64)) -> Result<Jet2>;
    fn frame_at(&self, jet: &Jet2) -> Result<NormalFrame>;
    /// Radius of the underlying graph.
    fn length_scale(&self) -> f64;

    fn forms_at(&self, point: (f64, f64)) -> Result<(Jet2, NormalFrame, FundamentalForms)> {
        let jet = self.jet_at(point)?;
        let frame = self.frame_at(&jet)?;
        let forms = fundamental_forms(&jet, &frame)?;
        Ok((jet, frame, forms))
    }
}

impl CurvatureSource for GraphSurface {
    fn jet_at(&self, point: (f64, f64)) -> Result<Jet2> {
        eval_jet(self, point)
    }

    fn frame_at(&self, jet: &Jet2) -> Result<NormalFrame> {
        orthonormal_frame(jet)
    }

    fn length_scale(&self) -> f64 {
        self.radius()
    }
}

impl CurvatureSource for ConformalChart {
    fn jet_at(&self, point: (f64, f64)) -> Result<Jet2> {
        chart_jet(self, point)
    }

    fn frame_at(&self, jet: &Jet2) -> Result<NormalFrame> {
        NormalFrame::from_chart_jet(jet)
    }

    fn length_scale(&self) -> f64 {
        self.surface().radius()
    }
}

/// `max |H_N| / max(1/R, κ_rms)` over points and frame normals, where
/// `κ_rms = √((κ₁² + κ₂²)/2)`. Scale free; equals `1/√2` for any
/// parabolic cylinder.
pub fn minimality_residual<S: CurvatureSource + ?Sized>(
    source: &S,
    points: &[(f64, f64)],
) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Precondition(
            "minimality residual needs at least one point".into(),
        ));
    }
    let floor = 1.0 / source.length_scale();
    let mut worst: f64 = 0.0;
    for &p in points {
        let (_, _, forms) = source.forms_at(p)?;
        for i in 0..forms.l.len() {
            let c = curvature_in_direction(&forms, i)?;
            let scale = (0.5 * c.kappa_sq_sum()).sqrt().max(floor);
            worst = worst.max(c.h.abs() / scale);
        }
    }
    Ok(worst)
}

/// `K = −Δ log W / (2W)` for the chart, with `Δ log W` in closed form from
/// the holomorphic derivatives `g = f'` of the series:
/// `K = −4(|g|²|g'|² − |⟨g, g'⟩|²)/|g|⁶` where `W = |g|²/2`.
pub fn intrinsic_gauss(chart: &ConformalChart, point: (f64, f64)) -> Result<f64> {
    let (u, v) = point;
    if !(u * u + v * v < 1.0) {
        return Err(Error::Domain(format!(
            "({u}, {v}) is not interior to the unit disc"
        )));
    }
    let derivs = chart.series().holomorphic_derivatives(Complex64::new(u, v));
    let (mut g2, mut gp2) = (0.0, 0.0);
    let mut inner = Complex64::new(0.0, 0.0);
    for [_, g, gp, _] in derivs {
        g2 += g.norm_sqr();
        gp2 += gp.norm_sqr();
        inner += g.conj() * gp;
    }
    if !(0.5 * g2 >= 1e-12) {
        return Err(Error::Geometry(format!(
            "area element {:e} below 1e-12",
            0.5 * g2
        )));
    }
    let num = (g2 * gp2 - inner.norm_sqr()).max(0.0);
    Ok(-4.0 * num / (g2 * g2 * g2))
}

/// Finite-difference variant of [`intrinsic_gauss`]: five-point Laplacian
/// of `log W` at steps `h` and `h/2`, Richardson-extrapolated.
pub fn intrinsic_gauss_fd<S: CurvatureSource + ?Sized>(
    source: &S,
    point: (f64, f64),
    h: f64,
) -> Result<f64> {
    let log_w = |p: (f64, f64)| -> Result<f64> {
        let jet = source.jet_at(p)?;
        let w = crate::surface::area_element(&jet);
        if !(w >= 1e-12) {
            return Err(Error::Geometry(format!("area element {w:e} below 1e-12")));
        }
        Ok(w.ln())
    };
    let (u, v) = point;
    let centre = log_w(point)?;
    let lap = |s: f64| -> Result<f64> {
        let sum = log_w((u + s, v))? + log_w((u - s, v))? + log_w((u, v + s))? + log_w((u, v - s))?;
        Ok((sum - 4.0 * centre) / (s * s))
    };
    let coarse = lap(h)?;
    let fine = lap(0.5 * h)?;
    let lap_log_w = (4.0 * fine - coarse) / 3.0;
    Ok(-lap_log_w / (2.0 * centre.exp()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coordinates {
    Graph,
    Chart,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub point: [f64; 2],
    pub coordinates: Coordinates,
    pub per_normal: Vec<NormalCurvature>,
    #[serde(rename = "K_total")]
    pub k_total: f64,
    /// Only available in conformal chart coordinates.
    #[serde(rename = "K_intrinsic")]
    pub k_intrinsic: Option<f64>,
    pub frame: NormalFrame,
}

impl CurvatureReport {
    /// `Σ_N (κ₁² + κ₂²)`.
    pub fn total_kappa_sq(&self) -> f64 {
        self.per_normal
            .iter()
            .map(NormalCurvature::kappa_sq_sum)
            .sum()
    }
}

fn check_kappa_identity(per_normal: &[NormalCurvature]) -> Result<()> {
    for c in per_normal {
        let lhs = c.kappa_sq_sum();
        let rhs = 2.0 * (2.0 * c.h * c.h - c.k);
        if (lhs - rhs).abs() > ANALYTIC_TOL * lhs.abs().max(1.0) {
            return Err(Error::Geometry(format!(
                "κ₁² + κ₂² = {lhs} but 2(2H² − K) = {rhs}"
            )));
        }
    }
    Ok(())
}

fn assemble(
    point: (f64, f64),
    coordinates: Coordinates,
    frame: NormalFrame,
    forms: &FundamentalForms,
) -> Result<CurvatureReport> {
    let per_normal = (0..forms.l.len())
        .map(|i| curvature_in_direction(forms, i))
        .collect::<Result<Vec<_>>>()?;
    check_kappa_identity(&per_normal)?;
    let k_total = gauss_decomposition(forms)?.k_total;
    Ok(CurvatureReport {
        point: [point.0, point.1],
        coordinates,
        per_normal,
        k_total,
        k_intrinsic: None,
        frame,
    })
}

/// Report at a point `(u, v)` of the unit disc, in chart coordinates, with
/// the Gauss equation `K_total = K_intrinsic` checked at
/// [`GAUSS_ANALYTIC_TOL`] on fast-path charts and `10·tol` otherwise.
pub fn curvature_report(chart: &ConformalChart, point: (f64, f64)) -> Result<CurvatureReport> {
    let (_, frame, forms) = chart.forms_at(point)?;
    let mut report = assemble(point, Coordinates::Chart, frame, &forms)?;
    let k_intr = intrinsic_gauss(chart, point)?;
    let tol = gauss_tolerance(chart);
    let scale = report.k_total.abs().max(chart.surface().radius().powi(-2));
    if (report.k_total - k_intr).abs() > tol * scale.max(1.0) {
        return Err(Error::Geometry(format!(
            "Gauss equation violated: ΣK_Σ = {} but −Δlog W/(2W) = {k_intr}",
            report.k_total
        )));
    }
    report.k_intrinsic = Some(k_intr);
    Ok(report)
}

/// Report at `(x, y)` in graph coordinates; no intrinsic cross-check.
pub fn graph_curvature_report(
    surface: &GraphSurface,
    point: (f64, f64),
) -> Result<CurvatureReport> {
    let (_, frame, forms) = surface.forms_at(point)?;
    assemble(point, Coordinates::Graph, frame, &forms)
}

/// Tolerance of the Gauss-equation cross-check for a chart.
pub fn gauss_tolerance(chart: &ConformalChart) -> f64 {
    if chart.fast_path() {
        GAUSS_ANALYTIC_TOL
    } else {
        CHART_TOL_FACTOR * chart.tol()
    }
}

/// Tolerance of curvature comparisons against a chart.
pub fn chart_check_tolerance(chart: &ConformalChart) -> f64 {
    if chart.fast_path() {
        ANALYTIC_TOL
    } else {
        CHART_TOL_FACTOR * chart.tol()
    }
}

/// One row per point and normal:
/// `x,y,normal,H,K,kappa1,kappa2,K_total,K_intrinsic`.
pub fn reports_to_csv(reports: &[CurvatureReport]) -> String {
    use crate::report::fmt_f64;
    let mut out = String::from("x,y,normal,H,K,kappa1,kappa2,K_total,K_intrinsic\n");
    for r in reports {
        for (i, c) in r.per_normal.iter().enumerate() {
            let row = [
                fmt_f64(r.point[0]),
                fmt_f64(r.point[1]),
                (i + 1).to_string(),
                fmt_f64(c.h),
                fmt_f64(c.k),
                fmt_f64(c.kappa1),
                fmt_f64(c.kappa2),
                fmt_f64(r.k_total),
                r.k_intrinsic.map(fmt_f64).unwrap_or_default(),
            ];
            out.push_str(&row.join(","));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::{solve_chart, SolveOptions};
    use crate::surface::{make_family, FamilyKind};

    fn z2(radius: f64) -> GraphSurface {
        make_family(
            FamilyKind::Holomorphic,
            &[0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
            radius,
        )
        .unwrap()
    }

    fn forms_at(s: &GraphSurface, p: (f64, f64)) -> FundamentalForms {
        s.forms_at(p).unwrap().2
    }

    /// Eigenvalues of the shape operator `h⁻¹L`.
    fn shape_operator_eigenvalues(h: Sym2, l: Sym2) -> (f64, f64) {
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        let inv = [
            [h[1][1] / det, -h[0][1] / det],
            [-h[1][0] / det, h[0][0] / det],
        ];
        let s = [
            [
                inv[0][0] * l[0][0] + inv[0][1] * l[1][0],
                inv[0][0] * l[0][1] + inv[0][1] * l[1][1],
            ],
            [
                inv[1][0] * l[0][0] + inv[1][1] * l[1][0],
                inv[1][0] * l[0][1] + inv[1][1] * l[1][1],
            ],
        ];
        let tr = s[0][0] + s[1][1];
        let dt = s[0][0] * s[1][1] - s[0][1] * s[1][0];
        let d = (0.25 * tr * tr - dt).max(0.0).sqrt();
        (0.5 * tr + d, 0.5 * tr - d)
    }

    #[test]
    fn z2_forms_at_origin() {
        let f = forms_at(&z2(1.0), (0.0, 0.0));
        assert_eq!(f.h, [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(f.w, 1.0);
        assert_eq!(f.l[0], [[2.0, 0.0], [0.0, -2.0]]);
        assert_eq!(f.l[1], [[0.0, 2.0], [2.0, 0.0]]);
    }

    #[test]
    fn z2_metric_off_origin() {
        let f = forms_at(&z2(1.0), (0.5, 0.0));
        assert!((f.h[0][0] - 2.0).abs() < 1e-14 && (f.h[1][1] - 2.0).abs() < 1e-14);
        assert!(f.h[0][1].abs() < 1e-14);
        assert!((f.w - 2.0).abs() < 1e-14);
        assert!(f.determinant_defect() < 1e-14);
    }

    #[test]
    fn plane_is_flat() {
        let s = make_family(FamilyKind::Plane, &[0.3, -1.2, 2.0, 0.5], 2.0).unwrap();
        let f = forms_at(&s, (0.7, -0.4));
        assert!(f.l.iter().flatten().flatten().all(|v| *v == 0.0));
        for i in 0..2 {
            let c = curvature_in_direction(&f, i).unwrap();
            assert_eq!((c.h, c.k, c.kappa1, c.kappa2), (0.0, 0.0, 0.0, 0.0));
        }
        assert_eq!(gauss_decomposition(&f).unwrap().k_total, 0.0);
    }

    #[test]
    fn z2_curvatures_at_origin() {
        let f = forms_at(&z2(1.0), (0.0, 0.0));
        for i in 0..2 {
            let c = curvature_in_direction(&f, i).unwrap();
            assert_eq!((c.h, c.k, c.kappa1, c.kappa2), (0.0, -4.0, 2.0, -2.0));
            assert_eq!(c.kappa_sq_sum(), 8.0);
        }
        let g = gauss_decomposition(&f).unwrap();
        assert_eq!(g.parts, vec![-4.0, -4.0]);
        assert_eq!(g.k_total, -8.0);
    }

    #[test]
    fn principal_curvatures_match_shape_operator() {
        let s =
            crate::surface::custom_surface(&["x^2 + x*y".into(), "sin(x)*y".into()], 1.0).unwrap();
        for p in [(0.1, 0.2), (-0.4, 0.3), (0.5, -0.5)] {
            let f = forms_at(&s, p);
            for (i, l) in f.l.iter().enumerate() {
                let c = curvature_in_direction(&f, i).unwrap();
                let (k1, k2) = shape_operator_eigenvalues(f.h, *l);
                assert!((c.kappa1 - k1).abs() < 1e-12 && (c.kappa2 - k2).abs() < 1e-12);
                assert!(c.kappa1 >= c.kappa2);
                assert!((0.5 * (c.kappa1 + c.kappa2) - c.h).abs() < 1e-10);
                assert!((c.kappa1 * c.kappa2 - c.k).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn discriminant_window() {
        let forms = |l: Sym2, h: Sym2| FundamentalForms {
            w: (h[0][0] * h[1][1] - h[0][1] * h[1][0]).sqrt(),
            h,
            l: vec![l],
            basis: NormalBasis::Orthonormal,
        };
        let id = [[1.0, 0.0], [0.0, 1.0]];
        let c = curvature_in_direction(&forms(id, id), 0).unwrap();
        assert_eq!((c.kappa1, c.kappa2), (1.0, 1.0));
        // W inconsistent with h: H = a, K = 1, so H² − K = a² − 1.
        let mut f = forms(id, id);
        f.h = [[1.0 - 4e-13, 0.0], [0.0, 1.0 - 4e-13]];
        let c = curvature_in_direction(&f, 0).unwrap();
        assert_eq!(c.kappa1, c.kappa2);
        f.h = [[0.9, 0.0], [0.0, 0.9]];
        assert!(matches!(
            curvature_in_direction(&f, 0),
            Err(Error::Consistency { .. })
        ));
        assert!(matches!(
            curvature_in_direction(&f, 3),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn raw_basis_is_rejected_by_decomposition() {
        let s = z2(1.0);
        let jet = eval_jet(&s, (0.2, 0.1)).unwrap();
        let frame = orthonormal_frame(&jet).unwrap();
        let raw = fundamental_forms_in(&jet, &frame, NormalBasis::Raw).unwrap();
        assert!(matches!(
            gauss_decomposition(&raw),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn mismatched_frame_is_rejected() {
        let s = z2(1.0);
        let j1 = eval_jet(&s, (0.2, 0.1)).unwrap();
        let j2 = eval_jet(&s, (0.1, 0.1)).unwrap();
        let frame = orthonormal_frame(&j1).unwrap();
        assert!(matches!(
            fundamental_forms(&j2, &frame),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn minimality_residual_separates_minimal_from_paraboloid() {
        let pts: Vec<(f64, f64)> = (0..20)
            .map(|i| (0.04 * i as f64 - 0.4, 0.3 - 0.03 * i as f64))
            .collect();
        assert!(minimality_residual(&z2(1.0), &pts).unwrap() < ANALYTIC_TOL);
        let scherk = make_family(FamilyKind::Scherk, &[], 1.0).unwrap();
        assert!(minimality_residual(&scherk, &pts).unwrap() < ANALYTIC_TOL);
        let para = crate::surface::custom_surface(&["x^2".into()], 1.0).unwrap();
        let at_origin = minimality_residual(&para, &[(0.0, 0.0)]).unwrap();
        assert!((at_origin - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(minimality_residual(&para, &pts).unwrap() > 0.5);
        assert!(matches!(
            minimality_residual(&para, &[]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn intrinsic_gauss_on_z2_chart() {
        let chart = solve_chart(&z2(1.0), &SolveOptions::default()).unwrap();
        assert!((intrinsic_gauss(&chart, (0.0, 0.0)).unwrap() + 8.0).abs() < 1e-12);
        let expected = -8.0 / 1.25f64.powi(3);
        assert!((intrinsic_gauss(&chart, (0.25, 0.0)).unwrap() - expected).abs() < 1e-12);
        let fd = intrinsic_gauss_fd(&chart, (0.25, 0.0), 1e-3).unwrap();
        assert!((fd - expected).abs() < 1e-5, "{fd}");
        assert!((intrinsic_gauss_fd(&chart, (0.0, 0.0), 1e-3).unwrap() + 8.0).abs() < 1e-5);
        assert!(matches!(
            intrinsic_gauss(&chart, (1.0, 0.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn intrinsic_gauss_on_flat_chart() {
        let flat = make_family(FamilyKind::Plane, &[0.0, 0.0], 1.0).unwrap();
        let chart = solve_chart(&flat, &SolveOptions::default()).unwrap();
        assert!(intrinsic_gauss(&chart, (0.3, -0.2)).unwrap().abs() < 1e-10);
    }

    #[test]
    fn report_on_z2_chart() {
        let chart = solve_chart(&z2(1.0), &SolveOptions::default()).unwrap();
        let r = curvature_report(&chart, (0.0, 0.0)).unwrap();
        assert!((r.k_total + 8.0).abs() < 1e-12);
        assert!((r.k_intrinsic.unwrap() + 8.0).abs() < 1e-12);
        for c in &r.per_normal {
            assert!((c.kappa_sq_sum() - 8.0).abs() < 1e-12);
        }
        let json = serde_json::to_value(&r).unwrap();
        for key in ["point", "per_normal", "K_total", "K_intrinsic"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert!(json["per_normal"][0].get("kappa1").is_some());
        let csv = reports_to_csv(&[r]);
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn graph_report_has_no_intrinsic_value() {
        let r = graph_curvature_report(&z2(1.0), (0.0, 0.0)).unwrap();
        assert_eq!(r.k_total, -8.0);
        assert!(r.k_intrinsic.is_none());
        assert!(reports_to_csv(&[r]).lines().nth(1).unwrap().ends_with(','));
    }

    #[test]
    fn scherk_single_normal() {
        let scherk = make_family(FamilyKind::Scherk, &[], 1.0).unwrap();
        let f = forms_at(&scherk, (0.3, 0.2));
        let g = gauss_decomposition(&f).unwrap();
        assert_eq!(g.parts.len(), 1);
        assert_eq!(g.k_total, g.parts[0]);
        assert!(g.k_total < 0.0);
    }
}
