use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{DensityMatrix, Register, StateVector};
use crate::{CMatrix, CVector, C64};

/// Generator behind every seeded routine in the crate.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    // row-major draw order, independent of nalgebra's storage order
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        entries.push(gaussian(rng));
    }
    CMatrix::from_row_slice(rows, cols, &entries)
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// diagonal of `R` rotated to be real positive.
pub fn haar_unitary_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    assert!(dim >= 1, "dimension must be positive");
    let qr = gaussian_matrix(rng, dim, dim).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        q.column_mut(k).iter_mut().for_each(|x| *x *= phase);
    }
    q
}

pub fn haar_unitary(dim: usize, seed: u64) -> CMatrix {
    haar_unitary_with(&mut seeded_rng(seed), dim)
}

/// Normalized Wishart state `GG†/Tr(GG†)` with `G` of shape `dim × rank`.
pub fn random_density_with<R: Rng + ?Sized>(
    rng: &mut R,
    register: &Register,
    rank: usize,
) -> DensityMatrix {
    let d = register.total_dim();
    let g = gaussian_matrix(rng, d, rank.clamp(1, d));
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::from_raw(w.unscale(tr), register.clone())
}

pub fn random_density(register: &Register, rank: usize, seed: u64) -> DensityMatrix {
    random_density_with(&mut seeded_rng(seed), register, rank)
}

/// Haar-random pure state.
pub fn random_pure_state_with<R: Rng + ?Sized>(rng: &mut R, register: &Register) -> StateVector {
    let d = register.total_dim();
    let v = CVector::from_iterator(d, (0..d).map(|_| gaussian(rng)));
    let n = v.norm();
    StateVector::from_raw(v.unscale(n), register.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::unitarity_residual;

    #[test]
    fn haar_samples_are_unitary() {
        for seed in 0..1000 {
            let u = haar_unitary(4, seed);
            assert!(unitarity_residual(&u) < 1e-10, "seed {seed}");
        }
    }

    #[test]
    fn random_densities_are_valid() {
        let reg = Register::qubits(&["A", "B"]).unwrap();
        for seed in 0..1000 {
            let rank = 1 + (seed as usize % 4);
            random_density(&reg, rank, seed).check().unwrap();
        }
    }

    #[test]
    fn seeding_is_deterministic() {
        assert_eq!(haar_unitary(3, 9), haar_unitary(3, 9));
        assert_ne!(haar_unitary(3, 9), haar_unitary(3, 10));
    }

    #[test]
    fn haar_phase_average_vanishes() {
        // E[U_00] = 0 for Haar U; a biased phase convention would shift it.
        let n = 4000;
        let mean: C64 = (0..n).map(|s| haar_unitary(2, s)[(0, 0)]).sum::<C64>() / n as f64;
        assert!(mean.norm() < 0.05, "mean {mean}");
    }
}
