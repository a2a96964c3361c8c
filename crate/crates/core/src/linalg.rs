//! Small dense-vector helpers.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `a -= s * b`
pub fn axpy_sub(a: &mut [f64], s: f64, b: &[f64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x -= s * y;
    }
}

/// Determinant of a small symmetric positive semidefinite Gram matrix by
/// Cholesky-style elimination. Returns 0 once a pivot vanishes.
pub fn gram_determinant(vectors: &[Vec<f64>]) -> f64 {
    let k = vectors.len();
    let mut g: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| dot(&vectors[i], &vectors[j])).collect())
        .collect();
    let mut det = 1.0;
    for p in 0..k {
        let piv = g[p][p];
        if piv <= 0.0 {
            return 0.0;
        }
        det *= piv;
        for i in p + 1..k {
            let f = g[i][p] / piv;
            for j in p..k {
                g[i][j] -= f * g[p][j];
            }
        }
    }
    det
}

/// Modified Gram–Schmidt with one re-orthogonalization pass, processing the
/// input in order. Returns `None` if a vector collapses below `eps`.
pub fn modified_gram_schmidt(vectors: &[Vec<f64>], eps: f64) -> Option<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _pass in 0..2 {
            for q in &out {
                let c = dot(&w, q);
                axpy_sub(&mut w, c, q);
            }
        }
        let n = norm(&w);
        if n <= eps {
            return None;
        }
        out.push(scale(&w, 1.0 / n));
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_determinant_of_known_pair() {
        let a = vec![1.0, 0.0, 1.0];
        let b = vec![1.0, 1.0, 0.0];
        // |a|^2 |b|^2 - (a.b)^2 = 4 - 1
        assert!((gram_determinant(&[a, b]) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn mgs_orthonormalizes() {
        let vs = vec![
            vec![1.0, 1.0, 0.0],
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
        ];
        let q = modified_gram_schmidt(&vs, 1e-12).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((dot(&q[i], &q[j]) - e).abs() < 1e-14);
            }
        }
        assert!(modified_gram_schmidt(&[vec![1.0, 0.0], vec![2.0, 0.0]], 1e-12).is_none());
    }
}
