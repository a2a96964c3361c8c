//! Truncated Fourier/Poisson extension of periodic boundary data into the
//! unit disc.
//!
//! Each component is stored as a complex polynomial `f(z) = Σ_{k≤K} γ_k z^k`
//! with `X = Re f`, so that
//! `X(r, θ) = a₀/2 + Σ r^k (a_k cos kθ + b_k sin kθ)` with `γ_k = a_k − i b_k`.
//! Derivatives of every order follow from `f`, and `ΔX = 0` holds exactly.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::Jet2;

/// Fewest boundary samples accepted by [`harmonic_extension`].
pub const MIN_BOUNDARY_SAMPLES: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicSeries {
    /// `coeffs[component][k] = (Re γ_k, Im γ_k)`
    coeffs: Vec<Vec<[f64; 2]>>,
}

/// Extends uniformly spaced periodic samples `samples[j] = X(e^{iθ_j})`,
/// `θ_j = 2πj/N`, harmonically, keeping modes `k ≤ modes`.
pub fn harmonic_extension(samples: &[Vec<f64>], modes: usize) -> Result<HarmonicSeries> {
    let n = samples.len();
    if n < 2 * modes + 1 {
        return Err(Error::Aliasing { samples: n, modes });
    }
    if n < MIN_BOUNDARY_SAMPLES {
        return Err(Error::Precondition(format!(
            "harmonic extension needs at least {MIN_BOUNDARY_SAMPLES} boundary samples, got {n}"
        )));
    }
    let dim = samples[0].len();
    if samples.iter().any(|s| s.len() != dim) {
        return Err(Error::Arity(
            "boundary samples have inconsistent dimension".into(),
        ));
    }
    let (cos_tab, sin_tab) = twiddles(n);
    let mut coeffs = vec![vec![[0.0; 2]; modes + 1]; dim];
    for (c, comp) in coeffs.iter_mut().enumerate() {
        for (k, slot) in comp.iter_mut().enumerate() {
            let (mut re, mut im) = (0.0, 0.0);
            for (j, s) in samples.iter().enumerate() {
                let idx = (k * j) % n;
                re += s[c] * cos_tab[idx];
                im -= s[c] * sin_tab[idx];
            }
            let w = if k == 0 {
                1.0 / n as f64
            } else {
                2.0 / n as f64
            };
            *slot = [re * w, im * w];
        }
    }
    Ok(HarmonicSeries { coeffs })
}

/// `cos(2πi/N)`, `sin(2πi/N)` for `i < N`.
pub(crate) fn twiddles(n: usize) -> (Vec<f64>, Vec<f64>) {
    (0..n)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / n as f64;
            (t.cos(), t.sin())
        })
        .unzip()
}

impl HarmonicSeries {
    pub fn from_complex(coeffs: Vec<Vec<Complex64>>) -> Self {
        Self {
            coeffs: coeffs
                .into_iter()
                .map(|c| c.into_iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn modes(&self) -> usize {
        self.coeffs.first().map_or(0, |c| c.len().saturating_sub(1))
    }

    pub fn coefficient(&self, component: usize, k: usize) -> Complex64 {
        let [re, im] = self.coeffs[component][k];
        Complex64::new(re, im)
    }

    pub fn raw_coefficients(&self) -> &[Vec<[f64; 2]>] {
        &self.coeffs
    }

    /// `(f, f', f'', f''')` of every component at `z` by Horner's scheme.
    pub fn holomorphic_derivatives(&self, z: Complex64) -> Vec<[Complex64; 4]> {
        self.coeffs
            .iter()
            .map(|comp| {
                let zero = Complex64::new(0.0, 0.0);
                let (mut f0, mut f1, mut f2, mut f3) = (zero, zero, zero, zero);
                for c in comp.iter().rev() {
                    let c = Complex64::new(c[0], c[1]);
                    f3 = f3 * z + 3.0 * f2;
                    f2 = f2 * z + 2.0 * f1;
                    f1 = f1 * z + f0;
                    f0 = f0 * z + c;
                }
                [f0, f1, f2, f3]
            })
            .collect()
    }

    pub fn value(&self, u: f64, v: f64) -> Vec<f64> {
        let z = Complex64::new(u, v);
        self.coeffs
            .iter()
            .map(|comp| {
                let mut f = Complex64::new(0.0, 0.0);
                for c in comp.iter().rev() {
                    f = f * z + Complex64::new(c[0], c[1]);
                }
                f.re
            })
            .collect()
    }

    /// Second-order jet at `(u, v)`; exact for the truncated series.
    pub fn jet(&self, u: f64, v: f64) -> Jet2 {
        let z = Complex64::new(u, v);
        let n = self.dim();
        let mut jet = Jet2::zeros([u, v], n);
        for (c, [f0, f1, f2, _]) in self.holomorphic_derivatives(z).into_iter().enumerate() {
            jet.value[c] = f0.re;
            jet.d1[0][c] = f1.re;
            jet.d1[1][c] = -f1.im;
            jet.d2[0][c] = f2.re;
            jet.d2[1][c] = -f2.im;
            jet.d2[2][c] = -f2.re;
        }
        jet
    }

    /// Dirichlet energy `½∫_B |∇X|² = (π/2) Σ_k k |γ_k|²`.
    pub fn dirichlet_energy(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|comp| {
                comp.iter()
                    .enumerate()
                    .map(|(k, c)| k as f64 * (c[0] * c[0] + c[1] * c[1]))
                    .sum::<f64>()
            })
            .sum::<f64>()
            * PI
            / 2.0
    }

    /// Values on the polar grid `r_i = i/n_r` (`i < n_r`), `θ_j = 2πj/n_θ`,
    /// row-major in `(i, j)`.
    pub fn grid_values(&self, n_r: usize, n_theta: usize) -> Vec<Vec<f64>> {
        polar_nodes(n_r, n_theta)
            .map(|(u, v)| self.value(u, v))
            .collect()
    }
}

/// Interior polar grid nodes `(u, v)` in row-major `(radius, angle)` order.
pub fn polar_nodes(n_r: usize, n_theta: usize) -> impl Iterator<Item = (f64, f64)> {
    (0..n_r).flat_map(move |i| {
        let r = i as f64 / n_r as f64;
        (0..n_theta).map(move |j| {
            let t = 2.0 * PI * j as f64 / n_theta as f64;
            (r * t.cos(), r * t.sin())
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boundary(n: usize, f: impl Fn(f64) -> Vec<f64>) -> Vec<Vec<f64>> {
        (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).collect()
    }

    #[test]
    fn first_mode_extends_to_coordinate_function() {
        let s = harmonic_extension(&boundary(64, |t| vec![t.cos()]), 8).unwrap();
        for (u, v) in [(0.3, 0.2), (-0.5, 0.1), (0.0, 0.0)] {
            let j = s.jet(u, v);
            assert!((j.value[0] - u).abs() < 1e-15);
            assert!((j.d1[0][0] - 1.0).abs() < 1e-15 && j.d1[1][0].abs() < 1e-15);
        }
    }

    #[test]
    fn second_mode_hessian_at_origin() {
        let s = harmonic_extension(&boundary(64, |t| vec![(2.0 * t).cos()]), 8).unwrap();
        let j = s.jet(0.0, 0.0);
        assert!((j.d2[0][0] - 2.0).abs() < 1e-14);
        assert!(j.d2[1][0].abs() < 1e-14);
        assert!((j.d2[2][0] + 2.0).abs() < 1e-14);
        let (u, v) = (0.4, -0.3);
        assert!((s.value(u, v)[0] - (u * u - v * v)).abs() < 1e-14);
    }

    #[test]
    fn constant_data_is_constant() {
        let s = harmonic_extension(&boundary(64, |_| vec![2.5, -1.0]), 8).unwrap();
        let j = s.jet(0.2, 0.7);
        assert!((j.value[0] - 2.5).abs() < 1e-14 && (j.value[1] + 1.0).abs() < 1e-14);
        assert!(j
            .d1
            .iter()
            .chain(j.d2.iter())
            .flatten()
            .all(|d| d.abs() < 1e-14));
        assert!(s.dirichlet_energy() < 1e-28);
    }

    #[test]
    fn laplacian_vanishes_identically() {
        let s = harmonic_extension(
            &boundary(128, |t| {
                vec![(3.0 * t).sin() + 0.2 * t.cos(), (t.sin() * 2.0).exp()]
            }),
            20,
        )
        .unwrap();
        for (u, v) in [(0.1, 0.2), (-0.6, 0.3), (0.5, -0.5)] {
            let j = s.jet(u, v);
            for c in 0..2 {
                assert_eq!(j.d2[0][c] + j.d2[2][c], 0.0);
            }
        }
    }

    #[test]
    fn too_few_samples() {
        let data = boundary(64, |t| vec![t.cos()]);
        assert!(matches!(
            harmonic_extension(&data, 32),
            Err(Error::Aliasing { .. })
        ));
        assert!(matches!(
            harmonic_extension(&data[..40], 8),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn energy_of_identity_map() {
        let s = harmonic_extension(&boundary(64, |t| vec![t.cos(), t.sin()]), 8).unwrap();
        assert!((s.dirichlet_energy() - PI).abs() < 1e-13);
    }
}
