//! Fixed one- and two-qubit matrices.

use crate::{CMatrix, C64};

fn real(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(rows, cols, entries.iter().map(|&x| C64::new(x, 0.0)))
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn pauli_x() -> CMatrix {
    real(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_z() -> CMatrix {
    real(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
        ],
    )
}

/// The product `X·Z`, the fourth one-sided Bell rotation.
pub fn pauli_xz() -> CMatrix {
    pauli_x() * pauli_z()
}

/// `σ_k` for `k = 0..4` in the order `{I, Z, X, XZ}` used to label the Bell
/// basis and the dense-coding encodings.
pub fn bell_pauli(k: usize) -> CMatrix {
    match k {
        0 => identity(2),
        1 => pauli_z(),
        2 => pauli_x(),
        3 => pauli_xz(),
        _ => panic!("Bell index {k} out of range 0..4"),
    }
}

pub fn hadamard() -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    real(2, 2, &[s, s, s, -s])
}

/// Controlled-NOT with the first qubit as control.
pub fn cnot() -> CMatrix {
    real(
        4,
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            0.0, 0.0, 1.0, 0.0,
        ],
    )
}

/// Computational basis ket `|index⟩` in dimension `dim`.
pub fn ket(dim: usize, index: usize) -> crate::CVector {
    let mut v = crate::CVector::zeros(dim);
    v[index] = C64::new(1.0, 0.0);
    v
}
