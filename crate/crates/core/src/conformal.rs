//! Conformal reparametrization of a graph over the closed unit disc.
//!
//! The chart is the harmonic extension of the boundary contour composed with
//! a reparametrization `ψ` of the circle. Minimizing the Dirichlet energy over
//! `ψ` (Douglas' functional) makes the extension conformal. After the solve
//! the chart is precomposed with a disc automorphism so that the plane map
//! `F* = (X¹, X²)` sends the origin to the origin, and with a rotation so
//! that `ψ(0) = 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonic::{harmonic_extension, polar_nodes, twiddles, HarmonicSeries};
use crate::linalg::{dot, modified_gram_schmidt};
use crate::surface::{eval_jet, graph_area, FamilySpec, GraphSurface, Jet2};

/// Angles held fixed by the three-point normalization during the solve.
const ANCHORS: [f64; 3] = [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveOptions {
    /// Harmonic truncation `K`.
    pub modes: usize,
    /// Polar grid `(n_r, n_θ)` used for diagnostics and export.
    pub grid: (usize, usize),
    /// Conformality tolerance.
    pub tol: f64,
    /// Fourier modes `M` of `ψ(θ) − θ`; `None` means `2K`.
    pub psi_modes: Option<usize>,
    pub max_iterations: usize,
    #[serde(default)]
    pub gauge: Gauge,
}

/// How the three-dimensional disc automorphism group is removed during the
/// solve.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gauge {
    /// First harmonic of `ψ − θ` held at zero; the rotation is fixed by
    /// `ψ(0) = 0` afterwards.
    #[default]
    MobiusFree,
    /// `ψ(t) = t` at `t ∈ {0, 2π/3, 4π/3}`.
    ThreePoint,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            modes: 32,
            grid: (64, 256),
            tol: 1e-3,
            psi_modes: None,
            max_iterations: 2000,
            gauge: Gauge::MobiusFree,
        }
    }
}

impl SolveOptions {
    pub fn psi_modes(&self) -> usize {
        self.psi_modes.unwrap_or(2 * self.modes).max(2)
    }

    /// Number of boundary samples used by the solver.
    pub fn samples(&self) -> usize {
        self.grid.1.max(8 * self.modes).max(256)
    }
}

/// `ψ(θ) = θ + Σ_{m=1}^{M} (α_m sin mθ + β_m cos mθ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reparametrization {
    pub sin: Vec<f64>,
    pub cos: Vec<f64>,
}

impl Reparametrization {
    pub fn identity(modes: usize) -> Self {
        Self {
            sin: vec![0.0; modes],
            cos: vec![0.0; modes],
        }
    }

    fn from_params(c: &[f64]) -> Self {
        let m = c.len() / 2;
        Self {
            sin: c[..m].to_vec(),
            cos: c[m..].to_vec(),
        }
    }

    pub fn modes(&self) -> usize {
        self.sin.len()
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut s = t;
        for (m, (a, b)) in self.sin.iter().zip(&self.cos).enumerate() {
            let (sn, cs) = ((m + 1) as f64 * t).sin_cos();
            s += a * sn + b * cs;
        }
        s
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let mut d = 1.0;
        for (m, (a, b)) in self.sin.iter().zip(&self.cos).enumerate() {
            let mf = (m + 1) as f64;
            let (sn, cs) = (mf * t).sin_cos();
            d += mf * (a * cs - b * sn);
        }
        d
    }

    /// Minimum of `ψ'` on `samples` uniform angles.
    pub fn min_derivative(&self, samples: usize) -> f64 {
        (0..samples)
            .map(|j| self.derivative(2.0 * PI * j as f64 / samples as f64))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Disc automorphism `w ↦ μ(e^{iθ₀} w)`, `μ(w) = (w + w₀)/(1 + w̄₀ w)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CenterShift {
    pub w0: [f64; 2],
    pub rotation: f64,
}

impl CenterShift {
    pub const IDENTITY: CenterShift = CenterShift {
        w0: [0.0, 0.0],
        rotation: 0.0,
    };

    /// Lifted boundary action: angle of `μ(e^{i(θ+θ₀)})` as a continuous function.
    pub fn boundary_angle(&self, t: f64) -> f64 {
        let w0 = Complex64::new(self.w0[0], self.w0[1]);
        let s = t + self.rotation;
        let e = Complex64::from_polar(1.0, s);
        s + (1.0 + w0 * e.conj()).arg() - (1.0 + w0.conj() * e).arg()
    }
}

/// Boundary correspondence of a chart: `θ ↦ ψ(shift(θ))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryMap {
    /// Reparametrization found by the energy minimization.
    pub solve: Reparametrization,
    pub shift: CenterShift,
    /// `ψ_final(θ_j)` at the solver's boundary samples.
    pub samples: Vec<f64>,
    /// `(a_k, b_k)` of the periodic part `ψ_final(θ) − θ`, `k = 0..=K`.
    pub fourier: Vec<[f64; 2]>,
}

impl BoundaryMap {
    pub fn eval(&self, t: f64) -> f64 {
        self.solve.eval(self.shift.boundary_angle(t))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualStats {
    /// `sup (| |X_u|² − |X_v|² | + 2|X_u·X_v|) / (|X_u|² + |X_v|²)` over the grid.
    pub conformality: f64,
    /// `sup |ΔX| h² / sup|X|` with `h = 1/n_r`.
    pub harmonicity: f64,
    /// Dirichlet energy of the chart.
    pub energy: f64,
    /// Area of the graph by quadrature.
    pub area: f64,
    /// Smallest `det ∇F*` over the grid.
    pub min_jacobian: f64,
}

impl ResidualStats {
    pub fn energy_area_gap(&self) -> f64 {
        (self.energy - self.area) / self.area
    }
}

#[derive(Clone, Debug)]
pub struct ConformalChart {
    surface: GraphSurface,
    series: HarmonicSeries,
    boundary: BoundaryMap,
    grid: (usize, usize),
    values: Vec<Vec<f64>>,
    residuals: ResidualStats,
    iterations: usize,
    fast_path: bool,
    tol: f64,
}

/// `X(R cos ψ, R sin ψ)`.
pub fn boundary_curve(surface: &GraphSurface, psi: f64) -> Vec<f64> {
    let r = surface.radius();
    surface.point(r * psi.cos(), r * psi.sin())
}

/// `(X, dX/dψ)` along the boundary contour.
fn boundary_point_and_tangent(surface: &GraphSurface, psi: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let r = surface.radius();
    let (s, c) = psi.sin_cos();
    let jet = eval_jet(surface, (r * c, r * s))?;
    let t = jet.d1[0]
        .iter()
        .zip(&jet.d1[1])
        .map(|(xx, xy)| r * (-s * xx + c * xy))
        .collect();
    Ok((jet.value, t))
}

/// Dirichlet energy of the harmonic extension of `θ ↦ boundary_curve(ψ(θ))`.
pub fn dirichlet_energy(
    psi: &Reparametrization,
    surface: &GraphSurface,
    modes: usize,
) -> Result<f64> {
    let n = (8 * modes).max(256);
    if psi.min_derivative(4 * n) <= 0.0 {
        return Err(Error::Precondition(
            "reparametrization is not strictly increasing".into(),
        ));
    }
    let samples: Vec<Vec<f64>> = (0..n)
        .map(|j| boundary_curve(surface, psi.eval(2.0 * PI * j as f64 / n as f64)))
        .collect();
    Ok(harmonic_extension(&samples, modes)?.dirichlet_energy())
}

/// Energy and gradient of the discretized Douglas functional in the Fourier
/// coefficients of `ψ(θ) − θ`.
struct Douglas<'a> {
    surface: &'a GraphSurface,
    samples: usize,
    modes: usize,
    psi_modes: usize,
    cos_tab: Vec<f64>,
    sin_tab: Vec<f64>,
}

impl<'a> Douglas<'a> {
    fn new(surface: &'a GraphSurface, samples: usize, modes: usize, psi_modes: usize) -> Self {
        let (cos_tab, sin_tab) = twiddles(samples);
        Self {
            surface,
            samples,
            modes,
            psi_modes,
            cos_tab,
            sin_tab,
        }
    }

    fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.samples as f64
    }

    /// `None` if `ψ` is not strictly increasing.
    fn evaluate(&self, c: &[f64]) -> Result<Option<(f64, Vec<f64>)>> {
        let n = self.samples;
        let m_count = self.psi_modes;
        let psi = Reparametrization::from_params(c);
        if psi.min_derivative(4 * n) <= 0.0 {
            return Ok(None);
        }
        let mut points = Vec::with_capacity(n);
        let mut tangents = Vec::with_capacity(n);
        for j in 0..n {
            let (p, t) = boundary_point_and_tangent(self.surface, psi.eval(self.theta(j)))?;
            points.push(p);
            tangents.push(t);
        }
        let dim = points[0].len();
        // γ_k = (2/N) Σ g_j e^{-ikθ_j}, k = 1..=K
        let mut gamma = vec![vec![Complex64::new(0.0, 0.0); self.modes + 1]; dim];
        for k in 1..=self.modes {
            for (j, p) in points.iter().enumerate() {
                let idx = (k * j) % n;
                let (cs, sn) = (self.cos_tab[idx], self.sin_tab[idx]);
                for c in 0..dim {
                    gamma[c][k] += Complex64::new(p[c] * cs, -p[c] * sn);
                }
            }
        }
        let w = 2.0 / n as f64;
        let mut energy = 0.0;
        for g in gamma.iter_mut() {
            for (k, z) in g.iter_mut().enumerate() {
                *z *= w;
                energy += k as f64 * z.norm_sqr();
            }
        }
        energy *= PI / 2.0;
        // G_j = (2π/N) (𝒩g)(θ_j) · dΓ/dψ
        let mut grad = vec![0.0; 2 * m_count];
        for j in 0..n {
            let mut gj = 0.0;
            for c in 0..dim {
                let mut dn = 0.0;
                for k in 1..=self.modes {
                    let idx = (k * j) % n;
                    let z = gamma[c][k];
                    dn += k as f64 * (z.re * self.cos_tab[idx] - z.im * self.sin_tab[idx]);
                }
                gj += dn * tangents[j][c];
            }
            gj *= 2.0 * PI / n as f64;
            for m in 1..=m_count {
                let idx = (m * j) % n;
                grad[m - 1] += gj * self.sin_tab[idx];
                grad[m_count + m - 1] += gj * self.cos_tab[idx];
            }
        }
        Ok(Some((energy, grad)))
    }
}

/// Orthogonal projector onto the gauge-fixed coefficient subspace.
struct AnchorProjector {
    rows: Vec<Vec<f64>>,
}

impl AnchorProjector {
    /// Removes the first-harmonic coefficients, the infinitesimal disc
    /// automorphisms at the identity.
    fn mobius_free(psi_modes: usize) -> Self {
        let mut a = vec![0.0; 2 * psi_modes];
        a[0] = 1.0;
        let mut b = vec![0.0; 2 * psi_modes];
        b[psi_modes] = 1.0;
        Self { rows: vec![a, b] }
    }

    fn three_point(psi_modes: usize) -> Self {
        let raw: Vec<Vec<f64>> = ANCHORS
            .iter()
            .map(|&t| {
                let mut row: Vec<f64> = (1..=psi_modes).map(|m| (m as f64 * t).sin()).collect();
                row.extend((1..=psi_modes).map(|m| (m as f64 * t).cos()));
                row
            })
            .collect();
        // Drop dependent rows (small M); MGS in sequence.
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for r in raw {
            let mut cand = rows.clone();
            cand.push(r);
            if let Some(q) = modified_gram_schmidt(&cand, 1e-10) {
                rows = q;
            }
        }
        Self { rows }
    }

    fn project(&self, v: &mut [f64]) {
        for q in &self.rows {
            let c = dot(v, q);
            for (a, b) in v.iter_mut().zip(q) {
                *a -= c * b;
            }
        }
    }
}

struct MinimizeOutcome {
    params: Vec<f64>,
    iterations: usize,
}

/// Projected L-BFGS with backtracking; monotonicity violations shrink the step.
fn minimize(problem: &Douglas<'_>, gauge: Gauge, max_iterations: usize) -> Result<MinimizeOutcome> {
    let dim = 2 * problem.psi_modes;
    let proj = match gauge {
        Gauge::MobiusFree => AnchorProjector::mobius_free(problem.psi_modes),
        Gauge::ThreePoint => AnchorProjector::three_point(problem.psi_modes),
    };
    let mut x = vec![0.0; dim];
    let (mut f, mut g) = problem
        .evaluate(&x)?
        .expect("identity reparametrization is monotone");
    proj.project(&mut g);
    let f0 = f;
    let memory = 12;
    let mut s_hist: Vec<Vec<f64>> = Vec::new();
    let mut y_hist: Vec<Vec<f64>> = Vec::new();
    let mut iterations = 0;
    let mut stalls = 0;
    while iterations < max_iterations {
        let gnorm = dot(&g, &g).sqrt();
        if gnorm <= 1e-13 * f0.max(1.0) {
            break;
        }
        // two-loop recursion
        let mut d = g.clone();
        let mut alphas = Vec::with_capacity(s_hist.len());
        for (s, y) in s_hist.iter().zip(&y_hist).rev() {
            let rho = 1.0 / dot(y, s);
            let a = rho * dot(s, &d);
            for (di, yi) in d.iter_mut().zip(y) {
                *di -= a * yi;
            }
            alphas.push((a, rho));
        }
        let gamma = match (s_hist.last(), y_hist.last()) {
            (Some(s), Some(y)) => dot(s, y) / dot(y, y),
            _ => 0.1 / gnorm.max(1e-300),
        };
        for di in d.iter_mut() {
            *di *= gamma;
        }
        for ((s, y), (a, rho)) in s_hist.iter().zip(&y_hist).zip(alphas.into_iter().rev()) {
            let b = rho * dot(y, &d);
            for (di, si) in d.iter_mut().zip(s) {
                *di += (a - b) * si;
            }
        }
        for di in d.iter_mut() {
            *di = -*di;
        }
        proj.project(&mut d);
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            d = g.iter().map(|v| -v * 0.1 / gnorm).collect();
            slope = dot(&g, &d);
            s_hist.clear();
            y_hist.clear();
        }
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + step * b).collect();
            if let Some((ft, mut gt)) = problem.evaluate(&trial)? {
                if ft <= f + 1e-4 * step * slope {
                    proj.project(&mut gt);
                    accepted = Some((trial, ft, gt));
                    break;
                }
            }
            step *= 0.5;
        }
        iterations += 1;
        let Some((xn, fn_, gn)) = accepted else {
            break;
        };
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        if dot(&s, &y) > 1e-300 {
            if s_hist.len() == memory {
                s_hist.remove(0);
                y_hist.remove(0);
            }
            s_hist.push(s);
            y_hist.push(y);
        }
        if (f - fn_).abs() <= 1e-16 * f.abs() {
            stalls += 1;
            if stalls >= 5 {
                x = xn;
                break;
            }
        } else {
            stalls = 0;
        }
        x = xn;
        f = fn_;
        g = gn;
    }
    Ok(MinimizeOutcome {
        params: x,
        iterations,
    })
}

/// Boundary samples of `Γ ∘ ψ ∘ shift` at the solver's angles.
fn final_samples(
    surface: &GraphSurface,
    psi: &Reparametrization,
    shift: &CenterShift,
    n: usize,
) -> (Vec<f64>, Vec<Vec<f64>>) {
    let angles: Vec<f64> = (0..n)
        .map(|j| psi.eval(shift.boundary_angle(2.0 * PI * j as f64 / n as f64)))
        .collect();
    let pts = angles.iter().map(|&a| boundary_curve(surface, a)).collect();
    (angles, pts)
}

/// Rotation `θ₀` with `ψ(μ(e^{iθ₀})) ≡ 0 (mod 2π)`.
fn rotation_fixing_origin(psi: &Reparametrization, w0: [f64; 2]) -> f64 {
    let h = |t: f64| psi.eval(CenterShift { w0, rotation: 0.0 }.boundary_angle(t));
    let target = {
        // Nearest multiple of 2π to h(0).
        (h(0.0) / (2.0 * PI)).round() * 2.0 * PI
    };
    let (mut lo, mut hi) = (-2.0 * PI, 2.0 * PI);
    while h(lo) > target {
        lo -= 2.0 * PI;
    }
    while h(hi) < target {
        hi += 2.0 * PI;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Finds the automorphism that makes the extended chart satisfy `F*(0) = 0`
/// exactly in the discrete sense (the mean of the first two boundary
/// components vanishes).
fn normalize_center(
    surface: &GraphSurface,
    psi: &Reparametrization,
    n: usize,
    modes: usize,
) -> Result<(CenterShift, Vec<f64>, HarmonicSeries)> {
    let mut shift = CenterShift::IDENTITY;
    let (mut angles, mut pts) = final_samples(surface, psi, &shift, n);
    let mut series = harmonic_extension(&pts, modes)?;
    let scale = surface.radius();
    for _ in 0..50 {
        let c0 = series.value(0.0, 0.0);
        if c0[0].hypot(c0[1]) <= 1e-13 * scale {
            break;
        }
        // Newton on the current chart: solve F*(w) = 0 in the shifted frame.
        let mut w = [0.0, 0.0];
        for _ in 0..50 {
            let j = series.jet(w[0], w[1]);
            let (fx, fy) = (j.value[0], j.value[1]);
            let (a, b, c, d) = (j.d1[0][0], j.d1[1][0], j.d1[0][1], j.d1[1][1]);
            let det = a * d - b * c;
            if det <= 0.0 {
                return Err(Error::Geometry(
                    "plane map lost orientation during centering".into(),
                ));
            }
            let du = (d * fx - b * fy) / det;
            let dv = (a * fy - c * fx) / det;
            let mut nw = [w[0] - du, w[1] - dv];
            let rr = nw[0].hypot(nw[1]);
            if rr > 0.9 {
                nw = [nw[0] * 0.9 / rr, nw[1] * 0.9 / rr];
            }
            w = nw;
            if du.hypot(dv) < 1e-15 {
                break;
            }
        }
        // S ∘ μ_w is again μ_c up to rotation, with c = S(w); the rotation is
        // then re-fixed by ψ(0) = 0.
        let w0 = shift_point(&shift, w);
        shift = CenterShift {
            w0,
            rotation: rotation_fixing_origin(psi, w0),
        };
        (angles, pts) = final_samples(surface, psi, &shift, n);
        series = harmonic_extension(&pts, modes)?;
    }
    let c0 = series.value(0.0, 0.0);
    if c0[0].hypot(c0[1]) > 1e-10 * scale {
        return Err(Error::Geometry(format!(
            "could not center the plane map (|F*(0)| = {:e})",
            c0[0].hypot(c0[1])
        )));
    }
    Ok((shift, angles, series))
}

/// `S(w)` for the automorphism `S(z) = μ_{w₀}(e^{iθ₀} z)`.
fn shift_point(shift: &CenterShift, w: [f64; 2]) -> [f64; 2] {
    let a = Complex64::new(shift.w0[0], shift.w0[1]);
    let t = Complex64::from_polar(1.0, shift.rotation) * Complex64::new(w[0], w[1]);
    let c = (t + a) / (1.0 + a.conj() * t);
    [c.re, c.im]
}

fn residual_stats(
    series: &HarmonicSeries,
    surface: &GraphSurface,
    grid: (usize, usize),
) -> Result<ResidualStats> {
    let (n_r, n_t) = grid;
    let mut conformality: f64 = 0.0;
    let mut lap: f64 = 0.0;
    let mut sup: f64 = 0.0;
    let mut min_jac = f64::INFINITY;
    for (u, v) in polar_nodes(n_r, n_t) {
        let j = series.jet(u, v);
        conformality = conformality.max(conformality_defect(&j));
        for c in 0..j.dim() {
            lap = lap.max((j.d2[0][c] + j.d2[2][c]).abs());
        }
        sup = sup.max(dot(&j.value, &j.value).sqrt());
        let det = j.d1[0][0] * j.d1[1][1] - j.d1[1][0] * j.d1[0][1];
        min_jac = min_jac.min(det);
    }
    let h = 1.0 / n_r as f64;
    let area = graph_area(surface, 48, 256)?;
    Ok(ResidualStats {
        conformality,
        harmonicity: lap * h * h / sup.max(f64::MIN_POSITIVE),
        energy: series.dirichlet_energy(),
        area,
        min_jacobian: min_jac,
    })
}

/// `(| |X_u|² − |X_v|² | + 2|X_u·X_v|) / (|X_u|² + |X_v|²)` at one jet.
pub fn conformality_defect(jet: &Jet2) -> f64 {
    let e = dot(&jet.d1[0], &jet.d1[0]);
    let g = dot(&jet.d1[1], &jet.d1[1]);
    let f = dot(&jet.d1[0], &jet.d1[1]);
    ((e - g).abs() + 2.0 * f.abs()) / (e + g)
}

fn periodic_fourier(samples: &[f64], modes: usize) -> Vec<[f64; 2]> {
    let n = samples.len();
    let (cos_tab, sin_tab) = twiddles(n);
    (0..=modes.min(n / 2 - 1))
        .map(|k| {
            let (mut a, mut b) = (0.0, 0.0);
            for (j, s) in samples.iter().enumerate() {
                let p = s - 2.0 * PI * j as f64 / n as f64;
                a += p * cos_tab[(k * j) % n];
                b += p * sin_tab[(k * j) % n];
            }
            let w = 2.0 / n as f64;
            [a * w, b * w]
        })
        .collect()
}

/// Builds the conformal chart of `surface` over the unit disc.
pub fn solve_chart(surface: &GraphSurface, opts: &SolveOptions) -> Result<ConformalChart> {
    if opts.modes < 8 {
        return Err(Error::Precondition(format!(
            "need at least 8 modes, got {}",
            opts.modes
        )));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    if opts.grid.0 < 2 || opts.grid.1 < 4 {
        return Err(Error::Precondition("grid too small".into()));
    }
    let n = opts.samples();
    if 2 * opts.psi_modes() >= n {
        return Err(Error::Aliasing {
            samples: n,
            modes: opts.psi_modes(),
        });
    }
    let identity = Reparametrization::identity(opts.psi_modes());

    // Fast path: graph coordinates already isothermal.
    let (_, pts) = final_samples(surface, &identity, &CenterShift::IDENTITY, n);
    let series = harmonic_extension(&pts, opts.modes)?;
    let stats = residual_stats(&series, surface, opts.grid)?;
    if stats.conformality < opts.tol {
        let c0 = series.value(0.0, 0.0);
        if c0[0].hypot(c0[1]) <= 1e-10 * surface.radius() {
            let samples: Vec<f64> = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
            return Ok(ConformalChart::assemble(
                surface.clone(),
                series,
                BoundaryMap {
                    solve: identity,
                    shift: CenterShift::IDENTITY,
                    fourier: periodic_fourier(&samples, opts.modes),
                    samples,
                },
                opts,
                stats,
                0,
                true,
            ));
        }
    }

    // The energy keeps every resolvable mode so that the minimization cannot
    // hide energy above the chart truncation.
    let problem = Douglas::new(surface, n, n / 2 - 1, opts.psi_modes());
    let outcome = minimize(&problem, opts.gauge, opts.max_iterations)?;
    let psi = Reparametrization::from_params(&outcome.params);
    let (shift, angles, series) = normalize_center(surface, &psi, n, opts.modes)?;
    let stats = residual_stats(&series, surface, opts.grid)?;
    if stats.conformality > opts.tol || stats.min_jacobian <= 0.0 {
        return Err(Error::Convergence {
            best_residual: stats.conformality,
            iterations: outcome.iterations,
        });
    }
    let fourier = periodic_fourier(&angles, opts.modes);
    Ok(ConformalChart::assemble(
        surface.clone(),
        series,
        BoundaryMap {
            solve: psi,
            shift,
            samples: angles,
            fourier,
        },
        opts,
        stats,
        outcome.iterations,
        false,
    ))
}

impl ConformalChart {
    fn assemble(
        surface: GraphSurface,
        series: HarmonicSeries,
        boundary: BoundaryMap,
        opts: &SolveOptions,
        residuals: ResidualStats,
        iterations: usize,
        fast_path: bool,
    ) -> Self {
        let values = series.grid_values(opts.grid.0, opts.grid.1);
        Self {
            surface,
            series,
            boundary,
            grid: opts.grid,
            values,
            residuals,
            iterations,
            fast_path,
            tol: opts.tol,
        }
    }

    pub fn surface(&self) -> &GraphSurface {
        &self.surface
    }

    pub fn series(&self) -> &HarmonicSeries {
        &self.series
    }

    pub fn boundary(&self) -> &BoundaryMap {
        &self.boundary
    }

    pub fn residuals(&self) -> &ResidualStats {
        &self.residuals
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn fast_path(&self) -> bool {
        self.fast_path
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn grid(&self) -> (usize, usize) {
        self.grid
    }

    pub fn grid_values(&self) -> &[Vec<f64>] {
        &self.values
    }

    /// `F*(0, 0)`.
    pub fn center_image(&self) -> [f64; 2] {
        let v = self.series.value(0.0, 0.0);
        [v[0], v[1]]
    }

    /// Jet of the chart at an interior point of the unit disc.
    pub fn jet(&self, point: (f64, f64)) -> Result<Jet2> {
        chart_jet(self, point)
    }

    pub fn to_sidecar(&self) -> ChartSidecar {
        ChartSidecar {
            surface: self.surface.spec().clone(),
            modes: self.series.modes(),
            coefficients: self.series.clone(),
            boundary: self.boundary.clone(),
            grid: self.grid,
            residuals: self.residuals.clone(),
            iterations: self.iterations,
            fast_path: self.fast_path,
            tol: self.tol,
        }
    }

    pub fn from_sidecar(sidecar: ChartSidecar) -> Result<Self> {
        let surface = sidecar.surface.build()?;
        let values = sidecar
            .coefficients
            .grid_values(sidecar.grid.0, sidecar.grid.1);
        Ok(Self {
            surface,
            series: sidecar.coefficients,
            boundary: sidecar.boundary,
            grid: sidecar.grid,
            values,
            residuals: sidecar.residuals,
            iterations: sidecar.iterations,
            fast_path: sidecar.fast_path,
            tol: sidecar.tol,
        })
    }

    /// Grid table with columns `u, v, X1..Xn`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let n = self.series.dim();
        let mut out = String::from("u,v");
        for c in 1..=n {
            out.push_str(&format!(",X{c}"));
        }
        out.push('\n');
        for ((u, v), x) in polar_nodes(self.grid.0, self.grid.1).zip(&self.values) {
            out.push_str(&crate::report::fmt_f64(u));
            out.push(',');
            out.push_str(&crate::report::fmt_f64(v));
            for val in x {
                out.push(',');
                out.push_str(&crate::report::fmt_f64(*val));
            }
            out.push('\n');
        }
        out
    }
}

/// JSON sidecar of a chart; reproduces [`chart_jet`] bit-exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSidecar {
    pub surface: FamilySpec,
    pub modes: usize,
    pub coefficients: HarmonicSeries,
    pub boundary: BoundaryMap,
    pub grid: (usize, usize),
    pub residuals: ResidualStats,
    pub iterations: usize,
    pub fast_path: bool,
    pub tol: f64,
}

/// Value, first and second derivatives of the chart at an interior point.
pub fn chart_jet(chart: &ConformalChart, point: (f64, f64)) -> Result<Jet2> {
    let (u, v) = point;
    if !(u * u + v * v < 1.0) {
        return Err(Error::Domain(format!(
            "chart point ({u}, {v}) is not interior to the unit disc"
        )));
    }
    Ok(chart.series.jet(u, v))
}
