use nalgebra::SymmetricEigen;

use crate::{CMatrix, CVector, C64};

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub(crate) fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

/// Eigenvalues of the Hermitian part `(m + m†)/2`, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let h = hermitian_part(m);
    let mut values: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| a.total_cmp(b));
    values
}

/// Eigen-decomposition of the Hermitian part, sorted by descending eigenvalue.
/// Column `k` of the returned matrix is the eigenvector of value `k`.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(m.nrows(), m.ncols());
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).into_owned();
        fix_vector_phase(&mut col);
        vectors.set_column(dst, &col);
    }
    (values, vectors)
}

pub(crate) fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Trace distance `½‖a − b‖₁` between two Hermitian matrices.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    0.5 * hermitian_eigenvalues(&(a - b))
        .iter()
        .map(|x| x.abs())
        .sum::<f64>()
}

/// Frobenius norm of `U†U − I`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    (u.adjoint() * u - CMatrix::identity(u.nrows(), u.ncols())).norm()
}

/// Multiplies `m` by a global phase so that its first entry of non-negligible
/// magnitude (row-major) is real and positive.
pub fn fix_global_phase(m: &CMatrix) -> CMatrix {
    let pivot = (0..m.nrows())
        .flat_map(|r| (0..m.ncols()).map(move |c| (r, c)))
        .find(|&rc| m[rc].norm() > 1e-12);
    match pivot {
        Some(rc) => {
            let z = m[rc];
            let mut out = m * (z.conj() / z.norm());
            out[rc] = C64::new(z.norm(), 0.0);
            out
        }
        None => m.clone(),
    }
}

pub(crate) fn fix_vector_phase(v: &mut CVector) {
    if let Some(z) = v.iter().copied().find(|z| z.norm() > 1e-12) {
        let phase = z.conj() / z.norm();
        v.iter_mut().for_each(|x| *x *= phase);
    }
}

pub(crate) fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

pub(crate) fn permute_matrix(m: &CMatrix, perm: &[usize]) -> CMatrix {
    CMatrix::from_fn(perm.len(), perm.len(), |i, j| m[(perm[i], perm[j])])
}

pub(crate) fn permute_vector(v: &CVector, perm: &[usize]) -> CVector {
    CVector::from_fn(perm.len(), |i, _| v[perm[i]])
}

/// `(I_outer ⊗ k) ρ (I_outer ⊗ k)†` where `ρ` is laid out with the local
/// factor as the least significant block. `k` may be rectangular.
pub(crate) fn conjugate_local(rho: &CMatrix, outer: usize, k: &CMatrix) -> CMatrix {
    let (k_out, k_in) = k.shape();
    debug_assert_eq!(rho.nrows(), outer * k_in);
    let k_adj = k.adjoint();
    let mut out = CMatrix::zeros(outer * k_out, outer * k_out);
    for o in 0..outer {
        for p in 0..outer {
            let block = rho.view((o * k_in, p * k_in), (k_in, k_in));
            let conj = k * block * &k_adj;
            out.view_mut((o * k_out, p * k_out), (k_out, k_out))
                .copy_from(&conj);
        }
    }
    out
}

/// `(I_outer ⊗ k)|v⟩` with the local factor least significant.
pub(crate) fn apply_local_vector(v: &CVector, outer: usize, k: &CMatrix) -> CVector {
    let (k_out, k_in) = k.shape();
    let mut out = CVector::zeros(outer * k_out);
    for o in 0..outer {
        let part = k * v.rows(o * k_in, k_in);
        out.rows_mut(o * k_out, k_out).copy_from(&part);
    }
    out
}
