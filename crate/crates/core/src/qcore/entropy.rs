use super::linalg::hermitian_eigenvalues;
use super::ops::partial_trace;
use super::{DensityMatrix, EIGEN_CUTOFF, TOL_ALGEBRA};
use crate::{Error, Result};

/// `−Σ λ log₂ λ` over entries above the cutoff. The entries need not sum
/// to one.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&x| x > EIGEN_CUTOFF)
        .map(|&x| -x * x.log2())
        .sum()
}

/// Von Neumann entropy in bits.
pub fn vn_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&hermitian_eigenvalues(rho.matrix())).max(0.0)
}

/// Shannon entropy in bits, with `0·log 0 = 0`.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if let Some(x) = p.iter().find(|&&x| x < 0.0 || x.is_nan()) {
        return Err(Error::InvalidProbabilities(format!("negative entry {x}")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > TOL_ALGEBRA {
        return Err(Error::InvalidProbabilities(format!("entries sum to {total}")));
    }
    Ok(p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum())
}

fn check_cover(rho: &DensityMatrix, parts: &[&[&str]]) -> Result<()> {
    let mut seen: Vec<&str> = Vec::new();
    for part in parts {
        if part.is_empty() {
            return Err(Error::InvalidPartition("empty part".into()));
        }
        for label in *part {
            if !rho.register().contains(label) {
                return Err(Error::UnknownLabel(label.to_string()));
            }
            if seen.contains(label) {
                return Err(Error::InvalidPartition(format!("`{label}` appears twice")));
            }
            seen.push(label);
        }
    }
    if seen.len() != rho.register().len() {
        return Err(Error::InvalidPartition(format!(
            "parts do not cover {}",
            rho.register()
        )));
    }
    Ok(())
}

fn marginal_entropy(rho: &DensityMatrix, labels: &[&str]) -> Result<f64> {
    Ok(vn_entropy(&partial_trace(rho, labels)?))
}

/// `I(A:B) = S(A) + S(B) − S(AB)`; the two parts must cover the register.
pub fn mutual_information(rho: &DensityMatrix, a: &[&str], b: &[&str]) -> Result<f64> {
    check_cover(rho, &[a, b])?;
    Ok(marginal_entropy(rho, a)? + marginal_entropy(rho, b)? - vn_entropy(rho))
}

/// `I(A:B|R) = S(AR) + S(BR) − S(ABR) − S(R)`.
pub fn cond_mutual_information(
    rho: &DensityMatrix,
    a: &[&str],
    b: &[&str],
    r: &[&str],
) -> Result<f64> {
    check_cover(rho, &[a, b, r])?;
    let ar: Vec<&str> = a.iter().chain(r).copied().collect();
    let br: Vec<&str> = b.iter().chain(r).copied().collect();
    Ok(marginal_entropy(rho, &ar)? + marginal_entropy(rho, &br)?
        - vn_entropy(rho)
        - marginal_entropy(rho, r)?)
}

/// Holevo quantity `S(Σ pᵢ ρᵢ) − Σ pᵢ S(ρᵢ)`.
pub fn holevo(ensemble: &[(f64, &DensityMatrix)]) -> Result<f64> {
    let avg = DensityMatrix::mixture(ensemble)?;
    Ok(vn_entropy(&avg) - ensemble.iter().map(|(p, r)| p * vn_entropy(r)).sum::<f64>())
}

/// Mutual information (bits) of a classical channel `P(y|x)` = `channel[x][y]`
/// under the input distribution `prior`.
pub fn classical_mutual_information(prior: &[f64], channel: &[Vec<f64>]) -> f64 {
    let n_out = channel.first().map_or(0, Vec::len);
    let output: Vec<f64> = (0..n_out)
        .map(|y| prior.iter().zip(channel).map(|(p, row)| p * row[y]).sum())
        .collect();
    let mut info = 0.0;
    for (p, row) in prior.iter().zip(channel) {
        for (y, &q) in row.iter().enumerate() {
            let joint = p * q;
            if joint > 0.0 && output[y] > 0.0 {
                info += joint * (q / output[y]).log2();
            }
        }
    }
    info
}
