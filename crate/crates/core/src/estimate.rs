//! Empirical probes of the curvature estimate: the ratio
//! `R⁴ max_N (κ₁² + κ₂²)(0,0) / ‖X‖²`, its behaviour as `R → ∞`, the
//! Schauder and Heinz constants, and the Bernstein-type decay.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conformal::{solve_chart, SolveOptions};
use crate::curvature::{curvature_in_direction, CurvatureSource};
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::report::fmt_f64;
use crate::surface::{sup_norm, FamilySpec, GraphSurface};

/// Grid parameter of the sup norm in ratios and sweeps (128 radii × 512 angles).
pub const SWEEP_SUP_SAMPLES: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRatio {
    pub radius: f64,
    pub ratio: f64,
    /// `max_N (κ₁² + κ₂²)` at the origin.
    pub kappa_sq_max: f64,
    pub sup_norm: f64,
}

/// Maximizes `f` on `[a, b]` by golden-section search.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd)
}

/// Refines the largest values of a periodic sampled function `f` around its
/// discrete local maxima.
fn periodic_sup(f: impl Fn(f64) -> f64, samples: usize) -> f64 {
    let step = 2.0 * PI / samples as f64;
    let vals: Vec<f64> = (0..samples).map(|j| f(j as f64 * step)).collect();
    let mut best = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for j in 0..samples {
        let prev = vals[(j + samples - 1) % samples];
        let next = vals[(j + 1) % samples];
        if vals[j] >= prev && vals[j] >= next {
            let t = j as f64 * step;
            best = best.max(golden_max(&f, t - step, t + step, 1e-10 * step));
        }
    }
    best
}

/// `‖X‖_{C⁰}` over the closed disc: the fixed grid of [`sup_norm`] plus a
/// refinement of the boundary maxima, where `|X|` attains its supremum.
pub fn sup_norm_refined(surface: &GraphSurface, samples_per_axis: usize) -> Result<f64> {
    let grid = sup_norm(surface, samples_per_axis)?;
    let r = surface.radius();
    let boundary = periodic_sup(
        |t| {
            let p = surface.point(r * t.cos(), r * t.sin());
            dot(&p, &p).sqrt()
        },
        4 * samples_per_axis,
    );
    if !boundary.is_finite() {
        return Err(Error::Evaluation(
            "non-finite sup norm on the boundary".into(),
        ));
    }
    Ok(grid.max(boundary))
}

/// `R⁴ max_N (κ₁² + κ₂²)(0,0) / ‖X‖²`. Curvatures are taken at the point
/// the normalized chart sends the origin to, i.e. the graph point over
/// `(0, 0)`, from the exact graph jet.
pub fn bound_ratio(surface: &GraphSurface) -> Result<BoundRatio> {
    let (_, _, forms) = surface.forms_at((0.0, 0.0))?;
    let mut kappa_sq_max: f64 = 0.0;
    for i in 0..forms.l.len() {
        kappa_sq_max = kappa_sq_max.max(curvature_in_direction(&forms, i)?.kappa_sq_sum());
    }
    let sup = sup_norm_refined(surface, SWEEP_SUP_SAMPLES)?;
    if !(sup > 0.0) {
        return Err(Error::Geometry("surface has zero sup norm".into()));
    }
    let r = surface.radius();
    Ok(BoundRatio {
        radius: r,
        ratio: r.powi(4) * kappa_sq_max / (sup * sup),
        kappa_sq_max,
        sup_norm: sup,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub radius: f64,
    /// `None` marks a failed radius.
    pub value: Option<BoundRatio>,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    pub family: FamilySpec,
    pub points: Vec<SweepPoint>,
    /// Log-log slope of the ratio curve over the upper half of the radii.
    pub fitted_exponent: Option<f64>,
    /// Log-log slope of `max_N (κ₁² + κ₂²)(0,0)` against `R`.
    pub kappa_exponent: Option<f64>,
    pub asymptote: Option<f64>,
    /// Every ratio is zero; exponents are undefined.
    pub degenerate_zero: bool,
}

impl BoundCurve {
    pub fn radii(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.radius).collect()
    }

    pub fn ratios(&self) -> Vec<Option<f64>> {
        self.points
            .iter()
            .map(|p| p.value.map(|v| v.ratio))
            .collect()
    }

    pub fn failed(&self) -> bool {
        self.points.iter().any(|p| p.value.is_none())
    }

    /// Columns `R,ratio,kappa_sq_max,sup_norm,status`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("R,ratio,kappa_sq_max,sup_norm,status\n");
        for p in &self.points {
            match (&p.value, &p.failure) {
                (Some(v), _) => out.push_str(&format!(
                    "{},{},{},{},ok\n",
                    fmt_f64(p.radius),
                    fmt_f64(v.ratio),
                    fmt_f64(v.kappa_sq_max),
                    fmt_f64(v.sup_norm)
                )),
                (None, msg) => out.push_str(&format!(
                    "{},,,,failed: {}\n",
                    fmt_f64(p.radius),
                    msg.as_deref()
                        .unwrap_or("unknown")
                        .replace([',', '\n'], ";")
                )),
            }
        }
        out
    }
}

/// Least-squares slope of `log y` against `log x` over the upper half of the
/// points (the last `⌈n/2⌉`).
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len().min(ys.len());
    let start = n / 2;
    let pts: Vec<(f64, f64)> = xs[start..n]
        .iter()
        .zip(&ys[start..n])
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Richardson extrapolation from the last two values, assuming a leading
/// correction proportional to `R⁻²`.
pub fn richardson_limit(radii: &[f64], values: &[f64]) -> Option<f64> {
    let n = radii.len().min(values.len());
    if n < 2 {
        return None;
    }
    let (r1, r2) = (radii[n - 2] * radii[n - 2], radii[n - 1] * radii[n - 1]);
    let (v1, v2) = (values[n - 2], values[n - 1]);
    (r2 > r1).then(|| (r2 * v2 - r1 * v1) / (r2 - r1))
}

/// Ratio curve of a family over the given radii.
pub fn theta_sweep(family: &FamilySpec, radii: &[f64]) -> Result<BoundCurve> {
    if radii.len() < 4 {
        return Err(Error::Precondition(format!(
            "need at least 4 radii, got {}",
            radii.len()
        )));
    }
    if radii.windows(2).any(|w| !(w[1] > w[0])) || !(radii[0] > 0.0) {
        return Err(Error::Precondition(
            "radii must be positive and strictly increasing".into(),
        ));
    }
    let points: Vec<SweepPoint> = radii
        .par_iter()
        .map(
            |&r| match family.with_radius(r).build().and_then(|s| bound_ratio(&s)) {
                Ok(v) => SweepPoint {
                    radius: r,
                    value: Some(v),
                    failure: None,
                },
                Err(e) => SweepPoint {
                    radius: r,
                    value: None,
                    failure: Some(e.to_string()),
                },
            },
        )
        .collect();
    let ok: Vec<BoundRatio> = points.iter().filter_map(|p| p.value).collect();
    let degenerate_zero = !ok.is_empty() && ok.iter().all(|v| v.ratio == 0.0);
    let xs: Vec<f64> = ok.iter().map(|v| v.radius).collect();
    let ratios: Vec<f64> = ok.iter().map(|v| v.ratio).collect();
    let kappas: Vec<f64> = ok.iter().map(|v| v.kappa_sq_max).collect();
    let (fitted_exponent, kappa_exponent, asymptote) = if degenerate_zero {
        (None, None, Some(0.0))
    } else {
        (
            loglog_slope(&xs, &ratios),
            loglog_slope(&xs, &kappas),
            richardson_limit(&xs, &ratios),
        )
    };
    Ok(BoundCurve {
        family: family.clone(),
        points,
        fitted_exponent,
        kappa_exponent,
        asymptote,
        degenerate_zero,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeKind {
    Schauder,
    Heinz,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub kind: ProbeKind,
    /// Random samples drawn; the deterministic witness comes on top.
    pub samples: usize,
    /// Schauder: max ratio. Heinz: min of `|∇F(0,0)|²`.
    pub statistic: f64,
    pub witness: serde_json::Value,
    pub seed: u64,
    /// Samples dropped as degenerate or non-convergent.
    pub skipped: usize,
    pub notes: Vec<String>,
}

/// Random harmonic fields `X = Re Σ_k γ_k z^k` with
/// `a_k, b_k ~ U(−1, 1)/max(k, 1)²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchauderSampler {
    pub degree: usize,
    pub components: usize,
}

impl Default for SchauderSampler {
    fn default() -> Self {
        Self {
            degree: 16,
            components: 3,
        }
    }
}

/// Random boundary homeomorphisms
/// `ψ(θ) = θ + ρ + Σ_{m≤M} (α_m sin mθ + β_m cos mθ)` with
/// `α_m, β_m ~ amplitude · U(−1, 1)/m²` and `ρ ~ U(0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeinzSampler {
    pub modes: usize,
    pub amplitude: f64,
}

impl Default for HeinzSampler {
    fn default() -> Self {
        Self {
            modes: 6,
            amplitude: 0.6,
        }
    }
}

/// Independent stream for sample `index`.
fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

struct Scored {
    index: usize,
    value: Option<f64>,
    note: Option<String>,
    witness: serde_json::Value,
}

/// Deterministic reduction: best value, ties to the lowest index.
fn reduce(
    scored: Vec<Scored>,
    better: impl Fn(f64, f64) -> bool,
) -> (Option<Scored>, usize, Vec<String>) {
    let mut best: Option<Scored> = None;
    let mut skipped = 0;
    let mut notes = Vec::new();
    for s in scored {
        let Some(v) = s.value else {
            skipped += 1;
            if let Some(n) = &s.note {
                notes.push(format!("sample {}: {n}", s.index));
            }
            continue;
        };
        if best.as_ref().is_none_or(|b| better(v, b.value.unwrap())) {
            best = Some(s);
        }
    }
    (best, skipped, notes)
}

/// `max_{i,j} |X_{uⁱuʲ}(0,0)| / ‖X‖_{C⁰(B)}` for `X = Re f`, `f = Σ γ_k z^k`.
pub fn schauder_ratio(coeffs: &[Vec<Complex64>]) -> Option<f64> {
    // X_uu = −X_vv = Re f''(0) = 2 Re γ₂, X_uv = −Im f''(0) = −2 Im γ₂
    let g2 = |c: &Vec<Complex64>| c.get(2).copied().unwrap_or_default();
    let uu = coeffs
        .iter()
        .map(|c| (2.0 * g2(c).re).powi(2))
        .sum::<f64>()
        .sqrt();
    let uv = coeffs
        .iter()
        .map(|c| (2.0 * g2(c).im).powi(2))
        .sum::<f64>()
        .sqrt();
    let boundary = |t: f64| {
        let z = Complex64::from_polar(1.0, t);
        coeffs
            .iter()
            .map(|c| {
                let mut f = Complex64::new(0.0, 0.0);
                for g in c.iter().rev() {
                    f = f * z + g;
                }
                f.re * f.re
            })
            .sum::<f64>()
            .sqrt()
    };
    let degree = coeffs.iter().map(Vec::len).max().unwrap_or(0);
    let sup = periodic_sup(boundary, (64 * degree).max(256));
    (sup > 0.0).then(|| uu.max(uv) / sup)
}

fn schauder_sample(sampler: &SchauderSampler, seed: u64, index: usize) -> Vec<Vec<Complex64>> {
    let mut rng = substream(seed, index as u64);
    (0..sampler.components)
        .map(|_| {
            (0..=sampler.degree)
                .map(|k| {
                    let s = 1.0 / (k.max(1) as f64).powi(2);
                    let a: f64 = rng.random_range(-1.0..1.0) * s;
                    let b: f64 = if k == 0 {
                        0.0
                    } else {
                        rng.random_range(-1.0..1.0) * s
                    };
                    Complex64::new(a, -b)
                })
                .collect()
        })
        .collect()
}

fn coeff_json(coeffs: &[Vec<Complex64>]) -> serde_json::Value {
    coeffs
        .iter()
        .map(|c| c.iter().map(|z| vec![z.re, z.im]).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into()
}

/// Empirical lower bound for the best Schauder constant `C₁`. The pool is
/// the witness `Re z²` followed by `count` random fields.
pub fn schauder_probe(sampler: &SchauderSampler, count: usize, seed: u64) -> Result<ProbeReport> {
    if count < 1 {
        return Err(Error::Precondition("schauder probe needs count ≥ 1".into()));
    }
    if sampler.components < 1 {
        return Err(Error::Precondition(
            "schauder sampler needs at least one component".into(),
        ));
    }
    let witness = vec![vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
    ]];
    let scored: Vec<Scored> = (0..=count)
        .into_par_iter()
        .map(|i| {
            let (coeffs, label) = if i == 0 {
                (witness.clone(), "Re z^2")
            } else {
                (schauder_sample(sampler, seed, i), "random")
            };
            let value = schauder_ratio(&coeffs);
            Scored {
                index: i,
                value,
                note: value.is_none().then(|| "zero sup norm".to_string()),
                witness: serde_json::json!({ "index": i, "label": label, "coefficients": coeff_json(&coeffs) }),
            }
        })
        .collect();
    let (best, skipped, notes) = reduce(scored, |a, b| a > b);
    let best =
        best.ok_or_else(|| Error::Evaluation("every schauder sample was degenerate".into()))?;
    Ok(ProbeReport {
        kind: ProbeKind::Schauder,
        samples: count,
        statistic: best.value.unwrap(),
        witness: best.witness,
        seed,
        skipped,
        notes,
    })
}

/// Coefficients `c_k`, `k = −K..=K`, of `e^{iψ(θ)}` from `n` samples;
/// `out[K + k] = c_k`.
fn circle_coefficients(psi: impl Fn(f64) -> f64, n: usize, k_max: usize) -> Vec<Complex64> {
    let thetas: Vec<f64> = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
    let psis: Vec<f64> = thetas.iter().map(|&t| psi(t)).collect();
    (-(k_max as i64)..=k_max as i64)
        .map(|k| {
            let mut s = Complex64::new(0.0, 0.0);
            for (t, p) in thetas.iter().zip(&psis) {
                s += Complex64::from_polar(1.0, p - k as f64 * t);
            }
            s / n as f64
        })
        .collect()
}

/// `F(w) = Σ_{k≥0} c_k w^k + Σ_{k≥1} c_{−k} w̄^k` with `(F, F_w, F_w̄)`.
fn harmonic_map(c: &[Complex64], w: Complex64) -> (Complex64, Complex64, Complex64) {
    let k_max = (c.len() - 1) / 2;
    let zero = Complex64::new(0.0, 0.0);
    let (mut f_pos, mut d_pos) = (zero, zero);
    let (mut f_neg, mut d_neg) = (zero, zero);
    let wb = w.conj();
    for k in (0..=k_max).rev() {
        d_pos = d_pos * w + f_pos;
        f_pos = f_pos * w + c[k_max + k];
        let cn = if k == 0 { zero } else { c[k_max - k] };
        d_neg = d_neg * wb + f_neg;
        f_neg = f_neg * wb + cn;
    }
    (f_pos + f_neg, d_pos, d_neg)
}

/// `|∇F(0,0)|²` after moving the zero of the harmonic extension of `e^{iψ}`
/// to the origin; `None` if the zero is not found.
pub fn heinz_value(psi: impl Fn(f64) -> f64, samples: usize, k_max: usize) -> Option<f64> {
    let c = circle_coefficients(psi, samples, k_max);
    let mut w = Complex64::new(0.0, 0.0);
    let mut converged = false;
    for _ in 0..100 {
        let (f, a, b) = harmonic_map(&c, w);
        if f.norm() <= 1e-15 {
            converged = true;
            break;
        }
        // solve a·dw + b·conj(dw) = −f
        let det = a.norm_sqr() - b.norm_sqr();
        if !(det > 0.0) {
            return None;
        }
        let dw = (-f * a.conj() + b * f.conj()) / det;
        let mut next = w + dw;
        if next.norm() > 0.95 {
            next *= 0.95 / next.norm();
        }
        w = next;
    }
    if !converged {
        return None;
    }
    let (_, a, b) = harmonic_map(&c, w);
    // G = F∘μ, μ(ζ) = (ζ + w)/(1 + w̄ζ): G_ζ(0) = F_w(w)(1 − |w|²), likewise for G_ζ̄.
    let s = (1.0 - w.norm_sqr()).powi(2);
    Some(2.0 * s * (a.norm_sqr() + b.norm_sqr()))
}

const HEINZ_SAMPLES: usize = 512;
const HEINZ_MODES: usize = 64;

fn heinz_sample(
    sampler: &HeinzSampler,
    seed: u64,
    index: usize,
) -> Option<(f64, Vec<f64>, Vec<f64>)> {
    let mut rng = substream(seed, index as u64);
    for _ in 0..100 {
        let rot: f64 = rng.random_range(0.0..2.0 * PI);
        let mut sin = Vec::with_capacity(sampler.modes);
        let mut cos = Vec::with_capacity(sampler.modes);
        for m in 1..=sampler.modes {
            let s = sampler.amplitude / (m * m) as f64;
            sin.push(rng.random_range(-1.0..1.0) * s);
            cos.push(rng.random_range(-1.0..1.0) * s);
        }
        let deriv = |t: f64| {
            1.0 + (1..=sampler.modes)
                .map(|m| {
                    let (sn, cs) = (m as f64 * t).sin_cos();
                    m as f64 * (sin[m - 1] * cs - cos[m - 1] * sn)
                })
                .sum::<f64>()
        };
        let n = 8 * HEINZ_SAMPLES;
        if (0..n).all(|j| deriv(2.0 * PI * j as f64 / n as f64) > 0.0) {
            return Some((rot, sin, cos));
        }
    }
    None
}

fn eval_psi(rot: f64, sin: &[f64], cos: &[f64], t: f64) -> f64 {
    let mut s = t + rot;
    for (m, (a, b)) in sin.iter().zip(cos).enumerate() {
        let (sn, cs) = ((m + 1) as f64 * t).sin_cos();
        s += a * sn + b * cs;
    }
    s
}

/// Empirical upper bound for the best Heinz constant `C₂`. The pool is the
/// identity boundary map followed by `count` random homeomorphisms.
pub fn heinz_probe(sampler: &HeinzSampler, count: usize, seed: u64) -> Result<ProbeReport> {
    if count < 1 {
        return Err(Error::Precondition("heinz probe needs count ≥ 1".into()));
    }
    if !(sampler.amplitude >= 0.0) {
        return Err(Error::Precondition(
            "heinz sampler amplitude must be nonnegative".into(),
        ));
    }
    let scored: Vec<Scored> = (0..=count)
        .into_par_iter()
        .map(|i| {
            let drawn = if i == 0 {
                Some((0.0, vec![], vec![]))
            } else {
                heinz_sample(sampler, seed, i)
            };
            let Some((rot, sin, cos)) = drawn else {
                return Scored {
                    index: i,
                    value: None,
                    note: Some("no monotone reparametrization in 100 draws".into()),
                    witness: serde_json::Value::Null,
                };
            };
            let value = heinz_value(|t| eval_psi(rot, &sin, &cos, t), HEINZ_SAMPLES, HEINZ_MODES);
            Scored {
                index: i,
                value,
                note: value
                    .is_none()
                    .then(|| "zero relocation did not converge".to_string()),
                witness: serde_json::json!({
                    "index": i,
                    "label": if i == 0 { "identity" } else { "random" },
                    "rotation": rot,
                    "sin": sin,
                    "cos": cos,
                }),
            }
        })
        .collect();
    let (best, skipped, notes) = reduce(scored, |a, b| a < b);
    let best = best.ok_or_else(|| Error::Evaluation("every heinz sample was discarded".into()))?;
    Ok(ProbeReport {
        kind: ProbeKind::Heinz,
        samples: count,
        statistic: best.value.unwrap(),
        witness: best.witness,
        seed,
        skipped,
        notes,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WChain {
    /// `2W(0,0)` of the chart.
    pub two_w: f64,
    /// `|∇F*(0,0)|² = R²|∇F(0,0)|²`.
    pub grad_f_star_sq: f64,
    /// `|∇F(0,0)|²` with `F = F*/R`.
    pub grad_f_sq: f64,
    pub satisfied: bool,
    /// `|∇F(0,0)|² ≥ C₂`.
    pub heinz_satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremCheck {
    /// `max_N (κ₁² + κ₂²)(0,0)`.
    pub lhs: f64,
    /// `16 C₁² ‖X‖² / (C₂² R⁴)`.
    pub rhs: f64,
    pub satisfied: bool,
    pub chain: WChain,
}

/// Both sides of `κ₁² + κ₂² ≤ 16C₁²C₂⁻² ‖X‖²/R⁴` at the origin, plus the
/// intermediate `2W(0,0) ≥ |∇F*(0,0)|²` read off the conformal chart.
pub fn theorem_bound_check(
    surface: &GraphSurface,
    c1: f64,
    c2: f64,
    opts: &SolveOptions,
) -> Result<TheoremCheck> {
    if !(c1 > 0.0 && c2 > 0.0) {
        return Err(Error::Precondition("C1 and C2 must be positive".into()));
    }
    let ratio = bound_ratio(surface)?;
    let r = surface.radius();
    let rhs = 16.0 * c1 * c1 / (c2 * c2) * ratio.sup_norm * ratio.sup_norm / r.powi(4);
    let lhs = ratio.kappa_sq_max;

    let chart = solve_chart(surface, opts)?;
    let jet = chart.jet_at((0.0, 0.0))?;
    let e = dot(&jet.d1[0], &jet.d1[0]);
    let g = dot(&jet.d1[1], &jet.d1[1]);
    let f = dot(&jet.d1[0], &jet.d1[1]);
    let w = (e * g - f * f).sqrt();
    let grad_f_star_sq =
        jet.d1[0][0].powi(2) + jet.d1[0][1].powi(2) + jet.d1[1][0].powi(2) + jet.d1[1][1].powi(2);
    let grad_f_sq = grad_f_star_sq / (r * r);
    let slack = if chart.fast_path() {
        1e-12
    } else {
        chart.tol()
    };
    let chain = WChain {
        two_w: 2.0 * w,
        grad_f_star_sq,
        grad_f_sq,
        satisfied: 2.0 * w >= grad_f_star_sq * (1.0 - slack),
        heinz_satisfied: grad_f_sq >= c2,
    };
    Ok(TheoremCheck {
        lhs,
        rhs,
        satisfied: lhs <= rhs,
        chain,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub radius: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayTable {
    pub omega_cap: f64,
    pub omega: f64,
    pub theta: f64,
    pub rows: Vec<DecayRow>,
    pub slope: f64,
    pub expected_slope: f64,
    pub final_value: f64,
    /// `|slope − (2ω − 4)| ≤ 0.05`.
    pub slope_ok: bool,
    pub decays_to_zero: bool,
}

impl DecayTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("R,bound\n");
        for r in &self.rows {
            out.push_str(&format!("{},{}\n", fmt_f64(r.radius), fmt_f64(r.bound)));
        }
        out
    }
}

/// Tabulates `ΘΩ² R^{2ω−4}` and its fitted log-log slope.
pub fn bernstein_decay(
    omega_cap: f64,
    omega: f64,
    theta: f64,
    radii: &[f64],
) -> Result<DecayTable> {
    if !(omega < 2.0) {
        return Err(Error::Precondition(format!(
            "growth exponent ω = {omega} must be below 2; ω = 2 is realized by the non-planar z² graph"
        )));
    }
    if !(omega >= 0.0 && omega_cap > 0.0 && theta > 0.0) {
        return Err(Error::Precondition("need Ω > 0, Θ > 0 and ω ≥ 0".into()));
    }
    if radii.len() < 2 || radii.windows(2).any(|w| !(w[1] > w[0])) || !(radii[0] > 0.0) {
        return Err(Error::Precondition(
            "need at least 2 positive increasing radii".into(),
        ));
    }
    let rows: Vec<DecayRow> = radii
        .iter()
        .map(|&r| DecayRow {
            radius: r,
            bound: theta * omega_cap * omega_cap * r.powf(2.0 * omega - 4.0),
        })
        .collect();
    let bounds: Vec<f64> = rows.iter().map(|r| r.bound).collect();
    let slope = loglog_slope(radii, &bounds).unwrap_or(f64::NAN);
    let expected_slope = 2.0 * omega - 4.0;
    let final_value = *bounds.last().unwrap();
    Ok(DecayTable {
        omega_cap,
        omega,
        theta,
        slope,
        expected_slope,
        final_value,
        slope_ok: (slope - expected_slope).abs() <= 0.05,
        decays_to_zero: slope < 0.0 && final_value < bounds[0],
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub label: String,
    pub ratio: f64,
    pub theta_empirical: f64,
}

/// Surfaces whose ratio exceeds `Θ = 16C₁²/C₂²`. With `C₁` from
/// [`schauder_probe`] (a lower bound) and `C₂` from [`heinz_probe`] (an
/// upper bound) this `Θ` underestimates the true constant, so a finding is
/// a conflict with the bracketing, not a proof of anything.
pub fn consistency_findings(ratios: &[(String, f64)], c1: f64, c2: f64) -> Vec<Finding> {
    let theta = 16.0 * c1 * c1 / (c2 * c2);
    ratios
        .iter()
        .filter(|(_, r)| *r > theta)
        .map(|(label, r)| Finding {
            label: label.clone(),
            ratio: *r,
            theta_empirical: theta,
        })
        .collect()
}
