//! Graph surfaces `X(x, y) = (x, y, φ₁, …, φ_{n−2})` over a disc, their
//! second-order jets, and the normal frames built from the height gradients.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::linalg::{dot, gram_determinant, modified_gram_schmidt, norm};
use crate::quadrature::gauss_legendre;

/// Largest admissible radius for the Scherk fixture.
pub const SCHERK_MAX_RADIUS: f64 = FRAC_PI_2 - 1e-9;

/// Gram determinant below which the raw normal basis is rejected.
pub const MIN_GRAM_DET: f64 = 1e-14;

/// A named height function `φ(x, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField2D {
    pub expression: Expr,
    pub name: String,
}

impl ScalarField2D {
    pub fn new(expression: Expr, name: impl Into<String>) -> Self {
        Self {
            expression,
            name: name.into(),
        }
    }

    pub fn parse(src: &str) -> Result<Self> {
        Ok(Self::new(Expr::parse(src)?, src.trim()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// `φ_Σ = a_Σ x + b_Σ y`; params are `(a, b)` pairs.
    Plane,
    /// Heights `Re Φ`, `Im Φ` of `Φ(z) = Σ c_k z^k`; params are `(Re c_k, Im c_k)` pairs.
    Holomorphic,
    /// `φ = log(cos x / cos y)`.
    Scherk,
    /// Heights given as expression strings.
    Custom,
}

/// Serializable recipe for a [`GraphSurface`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    #[serde(default)]
    pub params: Vec<f64>,
    #[serde(default)]
    pub expressions: Vec<String>,
    pub radius: f64,
    /// Rotation of the parameter domain, radians.
    #[serde(default)]
    pub rotation: f64,
    /// Number of identically zero heights appended.
    #[serde(default)]
    pub padding: usize,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, params: Vec<f64>, radius: f64) -> Self {
        Self {
            kind,
            params,
            expressions: Vec::new(),
            radius,
            rotation: 0.0,
            padding: 0,
        }
    }

    pub fn custom(expressions: Vec<String>, radius: f64) -> Self {
        Self {
            kind: FamilyKind::Custom,
            params: Vec::new(),
            expressions,
            radius,
            rotation: 0.0,
            padding: 0,
        }
    }

    pub fn with_radius(&self, radius: f64) -> Self {
        Self {
            radius,
            ..self.clone()
        }
    }

    pub fn build(&self) -> Result<GraphSurface> {
        let mut s = match self.kind {
            FamilyKind::Custom => custom_surface(&self.expressions, self.radius)?,
            kind => make_family(kind, &self.params, self.radius)?,
        };
        if self.rotation != 0.0 {
            s = s.rotated(self.rotation);
        }
        if self.padding > 0 {
            s = s.padded(self.padding);
        }
        Ok(s)
    }
}

/// The graph `X(x, y) = (x, y, φ₁, …, φ_{n−2})` over the closed disc of radius `R`.
#[derive(Clone, Debug)]
pub struct GraphSurface {
    heights: Vec<ScalarField2D>,
    radius: f64,
    spec: FamilySpec,
}

impl GraphSurface {
    pub fn new(heights: Vec<ScalarField2D>, radius: f64, spec: FamilySpec) -> Result<Self> {
        if heights.is_empty() {
            return Err(Error::Arity(
                "a graph surface needs at least one height field".into(),
            ));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::Domain(format!(
                "radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Self {
            heights,
            radius,
            spec,
        })
    }

    pub fn heights(&self) -> &[ScalarField2D] {
        &self.heights
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn ambient_dim(&self) -> usize {
        2 + self.heights.len()
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    /// The same geometric surface with the parameter domain rotated by `angle`:
    /// heights become `φ(x cos a + y sin a, −x sin a + y cos a)`.
    pub fn rotated(&self, angle: f64) -> GraphSurface {
        let (s, c) = angle.sin_cos();
        let sx = Expr::add(
            Expr::mul(Expr::Const(c), Expr::X),
            Expr::mul(Expr::Const(s), Expr::Y),
        );
        let sy = Expr::sub(
            Expr::mul(Expr::Const(c), Expr::Y),
            Expr::mul(Expr::Const(s), Expr::X),
        );
        let heights = self
            .heights
            .iter()
            .map(|h| {
                ScalarField2D::new(
                    h.expression.substitute(&sx, &sy),
                    format!("rot({})", h.name),
                )
            })
            .collect();
        let mut spec = self.spec.clone();
        spec.rotation += angle;
        GraphSurface {
            heights,
            radius: self.radius,
            spec,
        }
    }

    /// Appends `extra` identically zero heights (embedding into higher codimension).
    pub fn padded(&self, extra: usize) -> GraphSurface {
        let mut heights = self.heights.clone();
        heights.extend((0..extra).map(|_| ScalarField2D::new(Expr::Const(0.0), "0")));
        let mut spec = self.spec.clone();
        spec.padding += extra;
        GraphSurface {
            heights,
            radius: self.radius,
            spec,
        }
    }

    /// Point of the surface, without derivatives.
    pub fn point(&self, x: f64, y: f64) -> Vec<f64> {
        let mut p = Vec::with_capacity(self.ambient_dim());
        p.push(x);
        p.push(y);
        p.extend(self.heights.iter().map(|h| h.expression.eval(x, y)));
        p
    }
}

/// Value plus first and second partials of an `ℝⁿ`-valued map at one point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jet2 {
    pub point: [f64; 2],
    pub value: Vec<f64>,
    /// `[∂₁X, ∂₂X]`
    pub d1: [Vec<f64>; 2],
    /// `[∂₁₁X, ∂₁₂X, ∂₂₂X]`
    pub d2: [Vec<f64>; 3],
}

impl Jet2 {
    pub fn zeros(point: [f64; 2], n: usize) -> Self {
        Self {
            point,
            value: vec![0.0; n],
            d1: [vec![0.0; n], vec![0.0; n]],
            d2: [vec![0.0; n], vec![0.0; n], vec![0.0; n]],
        }
    }

    pub fn dim(&self) -> usize {
        self.value.len()
    }

    pub fn is_finite(&self) -> bool {
        self.value
            .iter()
            .chain(self.d1.iter().flatten())
            .chain(self.d2.iter().flatten())
            .all(|v| v.is_finite())
    }

    /// True when the first two coordinates are exactly `(x, y)` to first order.
    pub fn is_graph_form(&self) -> bool {
        self.d1[0][0] == 1.0 && self.d1[0][1] == 0.0 && self.d1[1][0] == 0.0 && self.d1[1][1] == 1.0
    }
}

pub fn make_family(kind: FamilyKind, params: &[f64], radius: f64) -> Result<GraphSurface> {
    let spec = FamilySpec::new(kind, params.to_vec(), radius);
    let heights = match kind {
        FamilyKind::Plane => {
            if params.is_empty() || params.len() % 2 != 0 {
                return Err(Error::Arity(format!(
                    "plane needs a non-empty list of (a, b) pairs, got {} values",
                    params.len()
                )));
            }
            params
                .chunks(2)
                .map(|ab| {
                    let e = Expr::add(
                        Expr::mul(Expr::Const(ab[0]), Expr::X),
                        Expr::mul(Expr::Const(ab[1]), Expr::Y),
                    );
                    ScalarField2D::new(e, format!("{}*x + {}*y", ab[0], ab[1]))
                })
                .collect()
        }
        FamilyKind::Holomorphic => {
            if params.is_empty() || params.len() % 2 != 0 {
                return Err(Error::Arity(format!(
                    "holomorphic needs (re, im) coefficient pairs, got {} values",
                    params.len()
                )));
            }
            let (re, im) = holomorphic_heights(params);
            vec![
                ScalarField2D::new(re, "Re Phi"),
                ScalarField2D::new(im, "Im Phi"),
            ]
        }
        FamilyKind::Scherk => {
            if radius >= SCHERK_MAX_RADIUS {
                return Err(Error::Domain(format!(
                    "scherk surface requires R < pi/2, got {radius}"
                )));
            }
            let e = Expr::Log(Box::new(Expr::div(
                Expr::Cos(Box::new(Expr::X)),
                Expr::Cos(Box::new(Expr::Y)),
            )));
            vec![ScalarField2D::new(e, "log(cos x / cos y)")]
        }
        FamilyKind::Custom => {
            return Err(Error::Precondition(
                "custom surfaces are built from expression strings".into(),
            ))
        }
    };
    GraphSurface::new(heights, radius, spec)
}

/// Builds a surface from height expression strings and spot-checks that the
/// jets are finite over the closed disc.
pub fn custom_surface(expressions: &[String], radius: f64) -> Result<GraphSurface> {
    if expressions.is_empty() {
        return Err(Error::Arity(
            "custom surface needs at least one expression".into(),
        ));
    }
    let heights = expressions
        .iter()
        .map(|s| ScalarField2D::parse(s))
        .collect::<Result<Vec<_>>>()?;
    let spec = FamilySpec::custom(expressions.to_vec(), radius);
    let surface = GraphSurface::new(heights, radius, spec)?;
    for i in 0..=8 {
        let r = radius * i as f64 / 8.0;
        for j in 0..32 {
            let t = 2.0 * PI * j as f64 / 32.0;
            eval_jet(&surface, (r * t.cos(), r * t.sin()))?;
        }
    }
    Ok(surface)
}

/// Real and imaginary parts of `Σ c_k z^k` as polynomial expressions in `x`, `y`.
fn holomorphic_heights(params: &[f64]) -> (Expr, Expr) {
    let degree = params.len() / 2 - 1;
    // coefficient of x^(k-j) y^j, indexed [k][j]
    let mut re = vec![vec![0.0; degree + 1]; degree + 1];
    let mut im = vec![vec![0.0; degree + 1]; degree + 1];
    for k in 0..=degree {
        let (cr, ci) = (params[2 * k], params[2 * k + 1]);
        let mut binom = 1.0;
        for j in 0..=k {
            // i^j = (1, i, -1, -i)
            let (ir, ii) = match j % 4 {
                0 => (1.0, 0.0),
                1 => (0.0, 1.0),
                2 => (-1.0, 0.0),
                _ => (0.0, -1.0),
            };
            // c * binom * i^j
            re[k][j] += binom * (cr * ir - ci * ii);
            im[k][j] += binom * (cr * ii + ci * ir);
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
    }
    (poly_expr(&re), poly_expr(&im))
}

fn poly_expr(coef: &[Vec<f64>]) -> Expr {
    let mut acc: Option<Expr> = None;
    for (k, row) in coef.iter().enumerate() {
        for (j, &c) in row.iter().enumerate().take(k + 1) {
            if c == 0.0 {
                continue;
            }
            let mut term = Expr::Const(c);
            if k - j > 0 {
                term = Expr::mul(term, Expr::Pow(Box::new(Expr::X), (k - j) as i32));
            }
            if j > 0 {
                term = Expr::mul(term, Expr::Pow(Box::new(Expr::Y), j as i32));
            }
            acc = Some(match acc {
                None => term,
                Some(a) => Expr::add(a, term),
            });
        }
    }
    acc.unwrap_or(Expr::Const(0.0))
}

/// Exact second-order jet of the graph parametrization at `(x, y)`.
pub fn eval_jet(surface: &GraphSurface, point: (f64, f64)) -> Result<Jet2> {
    let (x, y) = point;
    let r = surface.radius;
    if !(x.is_finite() && y.is_finite()) || x * x + y * y > r * r * (1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "point ({x}, {y}) outside the closed disc of radius {r}"
        )));
    }
    let n = surface.ambient_dim();
    let mut jet = Jet2::zeros([x, y], n);
    jet.value[0] = x;
    jet.value[1] = y;
    jet.d1[0][0] = 1.0;
    jet.d1[1][1] = 1.0;
    for (s, h) in surface.heights.iter().enumerate() {
        let j = h.expression.jet(x, y);
        if !j.is_finite() {
            return Err(Error::Evaluation(format!(
                "height '{}' has a non-finite jet at ({x}, {y})",
                h.name
            )));
        }
        let k = 2 + s;
        jet.value[k] = j.v;
        jet.d1[0][k] = j.dx;
        jet.d1[1][k] = j.dy;
        jet.d2[0][k] = j.dxx;
        jet.d2[1][k] = j.dxy;
        jet.d2[2][k] = j.dyy;
    }
    Ok(jet)
}

/// The unit normals `(−φ_x, −φ_y, 0, …, 1, …, 0)/√(1+|∇φ|²)`, one per height,
/// for a jet in graph form.
pub fn raw_normals(jet: &Jet2) -> Result<Vec<Vec<f64>>> {
    if !jet.is_graph_form() {
        return Err(Error::Precondition(
            "raw_normals needs a graph-form jet (tangents start with (1,0) and (0,1))".into(),
        ));
    }
    normals_from_tangents(jet)
}

/// Same normals for an arbitrary regular parametrization of the graph: the
/// height gradients are recovered by inverting the Jacobian of `(X¹, X²)`.
pub fn normals_from_tangents(jet: &Jet2) -> Result<Vec<Vec<f64>>> {
    let n = jet.dim();
    if n < 3 {
        return Err(Error::Arity("ambient dimension must be at least 3".into()));
    }
    let (xu, xv) = (jet.d1[0][0], jet.d1[1][0]);
    let (yu, yv) = (jet.d1[0][1], jet.d1[1][1]);
    let det = xu * yv - xv * yu;
    if !(det.abs() > 0.0) || !det.is_finite() {
        return Err(Error::Geometry("plane map has a singular Jacobian".into()));
    }
    let mut out = Vec::with_capacity(n - 2);
    for k in 2..n {
        let (pu, pv) = (jet.d1[0][k], jet.d1[1][k]);
        // Jᵀ ∇φ = (p_u, p_v)
        let gx = (pu * yv - pv * yu) / det;
        let gy = (pv * xu - pu * xv) / det;
        let s = 1.0 / (1.0 + gx * gx + gy * gy).sqrt();
        let mut v = vec![0.0; n];
        v[0] = -gx * s;
        v[1] = -gy * s;
        v[k] = s;
        out.push(v);
    }
    Ok(out)
}

/// Whether a normal list is the raw graph basis or its orthonormalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalBasis {
    Raw,
    Orthonormal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalFrame {
    pub raw: Vec<Vec<f64>>,
    pub ortho: Vec<Vec<f64>>,
    pub at: [f64; 2],
    pub gram_det: f64,
}

impl NormalFrame {
    fn from_raw(raw: Vec<Vec<f64>>, at: [f64; 2]) -> Result<Self> {
        let gram_det = gram_determinant(&raw);
        if !(gram_det > MIN_GRAM_DET) {
            return Err(Error::Conditioning { gram_det });
        }
        let ortho = modified_gram_schmidt(&raw, 1e-300).ok_or(Error::Conditioning { gram_det })?;
        Ok(Self {
            raw,
            ortho,
            at,
            gram_det,
        })
    }

    /// Frame at a chart jet (any regular parametrization of the graph).
    pub fn from_chart_jet(jet: &Jet2) -> Result<Self> {
        Self::from_raw(normals_from_tangents(jet)?, jet.point)
    }

    pub fn len(&self) -> usize {
        self.ortho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ortho.is_empty()
    }

    /// Replaces the orthonormal vectors by `N'_i = Σ_j q[i][j] N_j`.
    pub fn mixed(&self, q: &[Vec<f64>]) -> NormalFrame {
        let n = self.ortho.first().map_or(0, |v| v.len());
        let ortho = q
            .iter()
            .map(|row| {
                let mut v = vec![0.0; n];
                for (c, nj) in row.iter().zip(&self.ortho) {
                    for (a, b) in v.iter_mut().zip(nj) {
                        *a += c * b;
                    }
                }
                v
            })
            .collect();
        NormalFrame {
            ortho,
            ..self.clone()
        }
    }

    /// Largest deviation of the orthonormal Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.ortho.iter().enumerate() {
            for (j, b) in self.ortho.iter().enumerate() {
                let e = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(a, b) - e).abs());
            }
        }
        worst
    }
}

/// Raw normals of a graph-form jet and their modified Gram–Schmidt
/// orthonormalization in listing order.
pub fn orthonormal_frame(jet: &Jet2) -> Result<NormalFrame> {
    NormalFrame::from_raw(raw_normals(jet)?, jet.point)
}

/// `sup |X|` over a polar grid of `samples_per_axis + 1` radii (centre and
/// boundary included) and `4 · samples_per_axis` angles. Doubling the
/// parameter refines the grid by nesting, so the result never decreases.
pub fn sup_norm(surface: &GraphSurface, samples_per_axis: usize) -> Result<f64> {
    if samples_per_axis < 16 {
        return Err(Error::Precondition(format!(
            "sup_norm needs at least 16 samples per axis, got {samples_per_axis}"
        )));
    }
    let r = surface.radius;
    let n_ang = 4 * samples_per_axis;
    let mut best: f64 = 0.0;
    for i in 0..=samples_per_axis {
        let rho = r * i as f64 / samples_per_axis as f64;
        let count = if i == 0 { 1 } else { n_ang };
        for j in 0..count {
            let t = 2.0 * PI * j as f64 / n_ang as f64;
            let p = surface.point(rho * t.cos(), rho * t.sin());
            let m = norm(&p);
            if !m.is_finite() {
                return Err(Error::Evaluation(format!(
                    "non-finite surface point at r={rho}, t={t}"
                )));
            }
            best = best.max(m);
        }
    }
    Ok(best)
}

/// Area of the graph over the disc, `∫ √(h₁₁h₂₂ − h₁₂²) dx dy`, by
/// Gauss–Legendre in the radius and the trapezoid rule in the angle.
pub fn graph_area(
    surface: &GraphSurface,
    radial_nodes: usize,
    angular_nodes: usize,
) -> Result<f64> {
    let r = surface.radius;
    let (nodes, weights) = gauss_legendre(radial_nodes);
    let mut total = 0.0;
    for (t, w) in nodes.iter().zip(&weights) {
        let rho = 0.5 * r * (t + 1.0);
        let mut ring = 0.0;
        for j in 0..angular_nodes {
            let a = 2.0 * PI * j as f64 / angular_nodes as f64;
            let jet = eval_jet(surface, (rho * a.cos(), rho * a.sin()))?;
            ring += area_element(&jet);
        }
        total += w * 0.5 * r * rho * ring * 2.0 * PI / angular_nodes as f64;
    }
    Ok(total)
}

/// `W = √(h₁₁h₂₂ − h₁₂²)` of a jet.
pub fn area_element(jet: &Jet2) -> f64 {
    let h11 = dot(&jet.d1[0], &jet.d1[0]);
    let h12 = dot(&jet.d1[0], &jet.d1[1]);
    let h22 = dot(&jet.d1[1], &jet.d1[1]);
    (h11 * h22 - h12 * h12).max(0.0).sqrt()
}
