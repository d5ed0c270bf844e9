use crate::scalar::Scalar;

pub type Mat4<S> = [[S; 4]; 4];

pub fn det3<S: Scalar>(m: &Mat4<S>, rows: [usize; 3], cols: [usize; 3]) -> S {
    let a = |i: usize, j: usize| m[rows[i]][cols[j]];
    a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
        + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
}

fn others(k: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut n = 0;
    for i in 0..4 {
        if i != k {
            out[n] = i;
            n += 1;
        }
    }
    out
}

/// Cofactor matrix C[i][j] = (-1)^{i+j} M_{ij}.
pub fn cofactors<S: Scalar>(m: &Mat4<S>) -> Mat4<S> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let minor = det3(m, others(i), others(j));
            if (i + j) % 2 == 0 {
                minor
            } else {
                -minor
            }
        })
    })
}

pub fn det4<S: Scalar>(m: &Mat4<S>) -> S {
    let c = cofactors(m);
    let mut d = S::zero();
    for j in 0..4 {
        d += m[0][j] * c[0][j];
    }
    d
}

/// Inverse and determinant via the adjugate, so derivatives propagate exactly.
pub fn inverse_adjugate<S: Scalar>(m: &Mat4<S>) -> (Mat4<S>, S) {
    let c = cofactors(m);
    let mut d = S::zero();
    for j in 0..4 {
        d += m[0][j] * c[0][j];
    }
    let inv = std::array::from_fn(|i| std::array::from_fn(|j| c[j][i] / d));
    (inv, d)
}

pub fn map_mat<S: Copy, T>(m: &Mat4<S>, f: impl Fn(S) -> T) -> Mat4<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| f(m[i][j])))
}

pub fn mat_mul(a: &Mat4<f64>, b: &Mat4<f64>) -> Mat4<f64> {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| a[i][k] * b[k][j]).sum()))
}

pub fn identity() -> Mat4<f64> {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }))
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &Mat4<f64>) -> [f64; 4] {
    let mat = nalgebra::Matrix4::from_fn(|i, j| 0.5 * (m[i][j] + m[j][i]));
    let mut ev: Vec<f64> = mat.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    [ev[0], ev[1], ev[2], ev[3]]
}
