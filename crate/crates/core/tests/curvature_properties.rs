use mgcl_core::curvature::{
    curvature_in_direction, fundamental_forms, gauss_decomposition, CurvatureSource, FundamentalForms,
};
use mgcl_core::linalg::modified_gram_schmidt;
use mgcl_core::surface::{custom_surface, make_family, FamilyKind, GraphSurface, NormalFrame};
use proptest::prelude::*;

fn minimal_fixtures() -> Vec<GraphSurface> {
    vec![
        make_family(FamilyKind::Plane, &[0.3, 0.9], 1.0).unwrap(),
        make_family(FamilyKind::Holomorphic, &[0.0, 0.0, 0.0, 0.0, 1.0, 0.0], 1.0).unwrap(),
        make_family(FamilyKind::Holomorphic, &[0.0, 0.0, 3.0, 0.0, 1.0, 0.0], 1.0).unwrap(),
        make_family(FamilyKind::Holomorphic, &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0], 1.0).unwrap(),
        make_family(FamilyKind::Scherk, &[], 1.0).unwrap(),
    ]
}

fn general_surface() -> GraphSurface {
    custom_surface(&["x^2 + sin(y)".into(), "x*y^2".into(), "cos(x - y)".into()], 1.0).unwrap()
}

fn point(a: f64, t: f64) -> (f64, f64) {
    let r = 0.95 * a.sqrt();
    (r * t.cos(), r * t.sin())
}

fn totals(f: &FundamentalForms) -> (f64, f64) {
    let k = gauss_decomposition(f).unwrap().k_total;
    let s = (0..f.l.len()).map(|i| curvature_in_direction(f, i).unwrap().kappa_sq_sum()).sum();
    (k, s)
}

/// `L` matrices from the same jet, second derivatives by central differences
/// of the first-order jet.
#[test]
fn second_fundamental_form_matches_finite_differences() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let h = 1e-4;
    for s in minimal_fixtures().into_iter().chain([general_surface()]) {
        for _ in 0..100 {
            let p = point(rng.random(), rng.random_range(0.0..std::f64::consts::TAU));
            let (jet, frame, forms) = s.forms_at(p).unwrap();
            let shifted = |dx: f64, dy: f64| s.jet_at((p.0 + dx, p.1 + dy)).unwrap();
            let (xp, xm) = (shifted(h, 0.0), shifted(-h, 0.0));
            let (yp, ym) = (shifted(0.0, h), shifted(0.0, -h));
            let n = jet.dim();
            let diff = |a: &[f64], b: &[f64]| (0..n).map(|k| (a[k] - b[k]) / (2.0 * h)).collect::<Vec<_>>();
            let xx = diff(&xp.d1[0], &xm.d1[0]);
            let xy = diff(&yp.d1[0], &ym.d1[0]);
            let yy = diff(&yp.d1[1], &ym.d1[1]);
            for (l, nv) in forms.l.iter().zip(&frame.ortho) {
                let d = |v: &[f64]| v.iter().zip(nv).map(|(a, b)| a * b).sum::<f64>();
                assert!((l[0][0] - d(&xx)).abs() < 1e-5);
                assert!((l[0][1] - d(&xy)).abs() < 1e-5);
                assert!((l[1][1] - d(&yy)).abs() < 1e-5);
            }
        }
    }
}

fn orthogonal(raw: &[f64], k: usize) -> Vec<Vec<f64>> {
    let m: Vec<Vec<f64>> = (0..k).map(|i| raw[i * k..(i + 1) * k].to_vec()).collect();
    modified_gram_schmidt(&m, 1e-3).unwrap_or_else(|| {
        (0..k).map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
    })
}

proptest! {
    #[test]
    fn determinant_identity_and_principal_relations(
        idx in 0usize..6,
        a in 0.0f64..1.0,
        t in 0.0f64..std::f64::consts::TAU,
    ) {
        let s = minimal_fixtures().into_iter().chain([general_surface()]).nth(idx).unwrap();
        let (_, _, f) = s.forms_at(point(a, t)).unwrap();
        prop_assert!(f.determinant_defect() <= 1e-10);
        for i in 0..f.l.len() {
            let c = curvature_in_direction(&f, i).unwrap();
            prop_assert!(c.kappa1 >= c.kappa2);
            let scale = c.kappa1.abs().max(c.kappa2.abs()).max(1.0);
            prop_assert!((0.5 * (c.kappa1 + c.kappa2) - c.h).abs() <= 1e-10 * scale);
            prop_assert!((c.kappa1 * c.kappa2 - c.k).abs() <= 1e-10 * scale * scale);
            prop_assert!((c.kappa_sq_sum() - 2.0 * (2.0 * c.h * c.h - c.k)).abs() <= 1e-10 * scale * scale);
        }
    }

    #[test]
    fn minimal_fixtures_have_nonpositive_normal_curvature(
        idx in 0usize..5,
        a in 0.0f64..1.0,
        t in 0.0f64..std::f64::consts::TAU,
    ) {
        let s = minimal_fixtures().swap_remove(idx);
        let (_, _, f) = s.forms_at(point(a, t)).unwrap();
        for i in 0..f.l.len() {
            let c = curvature_in_direction(&f, i).unwrap();
            prop_assert!(c.h.abs() <= 1e-10);
            prop_assert!(c.k <= 1e-10);
            prop_assert!((c.kappa1 + c.kappa2).abs() <= 1e-10 * c.kappa1.abs().max(1.0));
            prop_assert!((c.kappa_sq_sum() + 2.0 * c.k).abs() <= 1e-10 * c.k.abs().max(1.0));
        }
    }

    #[test]
    fn aggregates_are_invariant_under_frame_mixing(
        a in 0.0f64..1.0,
        t in 0.0f64..std::f64::consts::TAU,
        raw in proptest::collection::vec(-1.0f64..1.0, 9),
    ) {
        let s = general_surface();
        let (jet, frame, forms) = s.forms_at(point(a, t)).unwrap();
        let mixed: NormalFrame = frame.mixed(&orthogonal(&raw, 3));
        prop_assert!(mixed.orthonormality_defect() <= 1e-12);
        let mixed_forms = fundamental_forms(&jet, &mixed).unwrap();
        let (k0, s0) = totals(&forms);
        let (k1, s1) = totals(&mixed_forms);
        prop_assert!((k0 - k1).abs() <= 1e-9 * k0.abs().max(1.0));
        prop_assert!((s0 - s1).abs() <= 1e-9 * s0.abs().max(1.0));
    }
}
