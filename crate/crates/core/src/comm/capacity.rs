use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::boxes::{apply_box, bell_state, canonical_input, ESBox, ALICE, BOB};
use crate::qcore::{
    entropy_of_spectrum, hermitian_eigen, hermitian_eigenvalues, kron, partial_trace, purify,
    random_density_with, random_pure_state_with, vn_entropy, DensityMatrix, Register,
    EIGEN_CUTOFF,
};
use crate::{CMatrix, Result, C64};

/// Label of the purifying system in [`eaccqc_objective`].
const ENV: &str = "E";

/// `S(ρ) + S(Λ(ρ)) − S((Λ ⊗ id_E)(Φ_ρ))` in bits, evaluated literally:
/// purify `ρ` on a 16-dimensional `E`, run the box with `E` riding along,
/// trace Charlie out.
pub fn eaccqc_objective(bx: &ESBox, rho: &DensityMatrix) -> Result<f64> {
    let phi = purify(rho, ENV)?;
    let out = apply_box(bx, &phi.to_density())?.output;
    let out_ab = partial_trace(&out, &[ALICE, BOB])?;
    Ok(vn_entropy(rho) + vn_entropy(&out_ab) - vn_entropy(&out))
}

/// The same objective through a minimal Kraus decomposition of the box
/// channel `A B C1 C2 → A B`.
///
/// With Kraus operators `K_k` that are orthogonal in Hilbert–Schmidt inner
/// product, the extended output has the spectrum of
/// `W_{kl} = Tr(K_k ρ K_l†)`. Outputs are written in the Bell basis
/// `Ψ⁺, b₁, b₂, b₃`. For a twirled box the twirl's own Kraus operators split
/// `W` into a block `⟨Ψ⁺|K_k ρ K_l†|Ψ⁺⟩` and three identical copies of
/// `⅓⟨b_n|K_k ρ K_l†|b_m⟩`, so no eigenproblem exceeds `3r × 3r`.
#[derive(Debug, Clone)]
pub struct ExchangeObjective {
    /// `B† K_k` stacked vertically, `4r × 16`.
    stacked: CMatrix,
    rank: usize,
    twirled: bool,
    register: Register,
}

impl ExchangeObjective {
    pub fn new(bx: &ESBox) -> Self {
        let mut kraus = Vec::new();
        for b in bx.branches() {
            let local = kron(&b.u_a, &b.u_b);
            for c in 0..b.e_c.nrows() {
                let row = b.e_c.rows(c, 1).into_owned();
                kraus.push(kron(&local, &row));
            }
        }
        let minimal = minimal_kraus(&kraus);
        let rank = minimal.len();
        let to_bell = bell_basis().adjoint();
        let mut stacked = CMatrix::zeros(4 * rank, 16);
        for (k, op) in minimal.iter().enumerate() {
            stacked.rows_mut(4 * k, 4).copy_from(&(&to_bell * op));
        }
        ExchangeObjective {
            stacked,
            rank,
            twirled: bx.is_twirled(),
            register: canonical_input().register().clone(),
        }
    }

    /// Kraus rank of the box before any twirl.
    pub fn kraus_rank(&self) -> usize {
        self.rank
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn value(&self, rho: &DensityMatrix) -> f64 {
        self.value_matrix(rho.matrix())
    }

    fn value_matrix(&self, rho: &CMatrix) -> f64 {
        let m = &self.stacked * rho * self.stacked.adjoint();
        let r = self.rank;
        let at = |k: usize, i: usize, l: usize, j: usize| m[(4 * k + i, 4 * l + j)];
        let input = spectral_entropy(rho);
        if self.twirled {
            let g0 = CMatrix::from_fn(r, r, |k, l| at(k, 0, l, 0));
            let g1 = CMatrix::from_fn(3 * r, 3 * r, |x, y| at(x % r, 1 + x / r, y % r, 1 + y / r));
            let f = g0.trace().re;
            let q = (1.0 - f) / 3.0;
            let output = entropy_of_spectrum(&[f, q, q, q]);
            let g1_spectrum: Vec<f64> = hermitian_eigenvalues(&g1).iter().map(|x| x / 3.0).collect();
            let ext = spectral_entropy(&g0) + 3.0 * entropy_of_spectrum(&g1_spectrum);
            input + output - ext
        } else {
            let w = CMatrix::from_fn(r, r, |k, l| (0..4).map(|j| at(k, j, l, j)).sum::<C64>());
            let out = CMatrix::from_fn(4, 4, |i, j| (0..r).map(|k| at(k, i, k, j)).sum::<C64>());
            input + spectral_entropy(&out) - spectral_entropy(&w)
        }
    }
    /// Gradient of the objective with respect to `ρ`, as a Hermitian
    /// matrix `G` with `df = Tr(G dρ)` along trace-preserving directions.
    fn gradient(&self, rho: &CMatrix) -> CMatrix {
        let m = &self.stacked * rho * self.stacked.adjoint();
        let r = self.rank;
        let at = |k: usize, i: usize, l: usize, j: usize| m[(4 * k + i, 4 * l + j)];
        let mut y = CMatrix::zeros(4 * r, 4 * r);
        if self.twirled {
            let g0 = CMatrix::from_fn(r, r, |k, l| at(k, 0, l, 0));
            let g1 = CMatrix::from_fn(3 * r, 3 * r, |x, z| at(x % r, 1 + x / r, z % r, 1 + z / r));
            let f = g0.trace().re.clamp(EIGEN_CUTOFF, 1.0 - EIGEN_CUTOFF);
            let df = ((1.0 - f) / 3.0).log2() - f.log2();
            let log_g0 = log2m(&g0);
            let log_g1 = log2m(&(g1 / C64::new(3.0, 0.0)));
            for k in 0..r {
                y[(4 * k, 4 * k)] += C64::new(df, 0.0);
                for l in 0..r {
                    y[(4 * k, 4 * l)] += log_g0[(l, k)];
                }
            }
            for x in 0..3 * r {
                for z in 0..3 * r {
                    y[(4 * (x % r) + 1 + x / r, 4 * (z % r) + 1 + z / r)] += log_g1[(z, x)];
                }
            }
        } else {
            let w = CMatrix::from_fn(r, r, |k, l| (0..4).map(|j| at(k, j, l, j)).sum::<C64>());
            let out = CMatrix::from_fn(4, 4, |i, j| (0..r).map(|k| at(k, i, k, j)).sum::<C64>());
            let log_w = log2m(&w);
            let log_out = log2m(&out);
            for k in 0..r {
                for l in 0..r {
                    for j in 0..4 {
                        y[(4 * k + j, 4 * l + j)] += log_w[(l, k)];
                    }
                }
                for i in 0..4 {
                    for j in 0..4 {
                        y[(4 * k + i, 4 * k + j)] -= log_out[(j, i)];
                    }
                }
            }
        }
        // the index transposition above pairs with Tr(Y M); conjugate back
        let y = y.transpose();
        self.stacked.adjoint() * y * &self.stacked - log2m(rho)
    }
}

/// Matrix base-2 logarithm of a positive semidefinite matrix, with
/// eigenvalues floored at the cutoff.
fn log2m(m: &CMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let logs = CMatrix::from_diagonal(&crate::CVector::from_iterator(
        values.len(),
        values.iter().map(|&v| C64::new(v.max(EIGEN_CUTOFF).log2(), 0.0)),
    ));
    &vectors * logs * vectors.adjoint()
}

fn spectral_entropy(m: &CMatrix) -> f64 {
    entropy_of_spectrum(&hermitian_eigenvalues(m))
}

/// Columns `Ψ⁺, b₁, b₂, b₃`.
fn bell_basis() -> CMatrix {
    let cols: Vec<_> = (0..4).map(|k| bell_state(k).amplitudes().clone()).collect();
    CMatrix::from_columns(&cols)
}

/// Minimal, Hilbert–Schmidt orthogonal Kraus set from the Choi matrix.
fn minimal_kraus(kraus: &[CMatrix]) -> Vec<CMatrix> {
    let (rows, cols) = kraus[0].shape();
    let n = rows * cols;
    let mut choi = CMatrix::zeros(n, n);
    for k in kraus {
        let v = CMatrix::from_iterator(n, 1, k.transpose().iter().cloned());
        choi += &v * v.adjoint();
    }
    let (values, vectors) = hermitian_eigen(&choi);
    values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > EIGEN_CUTOFF)
        .map(|(i, &l)| {
            let col = vectors.column(i) * C64::new(l.sqrt(), 0.0);
            CMatrix::from_row_slice(rows, cols, col.as_slice())
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub iters: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig { restarts: 200, iters: 300, seed: 42 }
    }
}

#[derive(Debug, Clone)]
pub struct CapacityResult {
    pub value_bits: f64,
    pub argmax_state: DensityMatrix,
    pub restarts: usize,
    pub iterations: usize,
    /// Whether the best restart gained less than `1e-8` over its final 10%
    /// of iterations.
    pub converged: bool,
}

const STEPS: [f64; 3] = [0.5, 0.1, 0.02];

struct Climb {
    value: f64,
    state: CMatrix,
    converged: bool,
}

fn climb(objective: &ExchangeObjective, iters: usize, rng: &mut ChaCha8Rng) -> Climb {
    let register = objective.register().clone();
    let mut rho = random_density_with(rng, &register, register.total_dim()).into_parts().0;
    let mut value = objective.value_matrix(&rho);
    let mut history = Vec::with_capacity(iters + 1);
    history.push(value);
    for _ in 0..iters {
        let random = random_pure_state_with(rng, &register).projector();
        let (_, vectors) = hermitian_eigen(&objective.gradient(&rho));
        let steepest = vectors.column(0) * vectors.column(0).adjoint();
        let mut best: Option<(f64, CMatrix)> = None;
        for sigma in [&random, &steepest] {
            for t in STEPS {
                let candidate = &rho * C64::new(1.0 - t, 0.0) + sigma * C64::new(t, 0.0);
                let v = objective.value_matrix(&candidate);
                if v > value && best.as_ref().is_none_or(|(bv, _)| v > *bv) {
                    best = Some((v, candidate));
                }
            }
        }
        if let Some((v, c)) = best {
            value = v;
            rho = c;
        }
        history.push(value);
    }
    let tail = (iters / 10).max(1).min(iters);
    let converged = history[iters] - history[iters - tail] < 1e-8;
    Climb { value, state: rho, converged }
}

/// Mixing ascent on the capacity objective.
///
/// Every iteration proposes `(1 − t)ρ + tσ` for `t ∈ {0.5, 0.1, 0.02}` and
/// two pure states `σ`: a Haar-random one and the top eigenvector of the
/// objective's gradient at `ρ` (the conditional-gradient vertex). The best
/// improving proposal is accepted. Concavity makes any improving mix a step
/// toward the maximum.
///
/// Restart `r` draws from ChaCha8 seeded with `seed` on stream `r`, so the
/// result does not depend on how restarts are scheduled across threads.
/// The maximally mixed input is scored as well, and wins ties; between
/// restarts, ties go to the lower index.
pub fn eaccqc_maximize(bx: &ESBox, config: OptimizerConfig) -> CapacityResult {
    assert!(config.restarts >= 1, "at least one restart is required");
    let objective = ExchangeObjective::new(bx);
    let climbs: Vec<Climb> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(r as u64);
            climb(&objective, config.iters.max(1), &mut rng)
        })
        .collect();
    let d = objective.register().total_dim();
    let mixed = CMatrix::identity(d, d).unscale(d as f64);
    let center = Climb { value: objective.value_matrix(&mixed), state: mixed, converged: true };
    let mut best = &center;
    for c in &climbs {
        if c.value > best.value {
            best = c;
        }
    }
    CapacityResult {
        value_bits: best.value.max(0.0),
        argmax_state: DensityMatrix::from_raw(best.state.clone(), objective.register().clone()),
        restarts: config.restarts,
        iterations: config.iters,
        converged: best.converged,
    }
}
