//! Exact diagonalisation in the truncated Fock ⊗ spin basis.
//!
//! Basis index `2n` is `|n,↑⟩` and `2n+1` is `|n,↓⟩`, for photon numbers
//! `0..=n_truncation`. The Hamiltonian only couples `|n,↑⟩ ↔ |n+1,↓⟩` (g1)
//! and `|n,↓⟩ ↔ |n+1,↑⟩` (g2), so each parity sector is a tridiagonal chain
//! and is solved separately with [`tridiagonal_eigenvalues`].

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::boa::CoefficientTable;
use crate::error::{Error, Result};
use crate::model::{ModelParams, Parity};

pub const DEFAULT_TRUNCATION: usize = 200;
/// Near |U| = 1 the photon distribution of the low states widens.
pub const UNITY_TRUNCATION: usize = 600;
/// Levels whose energy moves less than this under truncation doubling count
/// as converged.
pub const CONVERGENCE_TOL: f64 = 1e-8;

pub fn basis_index(n: usize, spin_up: bool) -> usize {
    2 * n + usize::from(!spin_up)
}

/// Parity `(−1)^(n + (1+s)/2)` of a basis state.
pub fn basis_parity(n: usize, spin_up: bool) -> f64 {
    if (n + usize::from(spin_up)).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Dense symmetric Hamiltonian of dimension `2(n_truncation+1)`.
pub fn hamiltonian_matrix(params: &ModelParams, n_truncation: usize) -> DMatrix<f64> {
    let dim = 2 * (n_truncation + 1);
    let mut h = DMatrix::zeros(dim, dim);
    let half_delta = 0.5 * params.delta;
    for n in 0..=n_truncation {
        let nf = n as f64;
        let stark = half_delta + params.stark_u * nf;
        h[(basis_index(n, true), basis_index(n, true))] = nf + stark;
        h[(basis_index(n, false), basis_index(n, false))] = nf - stark;
        if n < n_truncation {
            let amp = (nf + 1.0).sqrt();
            let (i, j) = (basis_index(n + 1, false), basis_index(n, true));
            h[(i, j)] = params.g1 * amp;
            h[(j, i)] = params.g1 * amp;
            let (i, j) = (basis_index(n + 1, true), basis_index(n, false));
            h[(i, j)] = params.g2 * amp;
            h[(j, i)] = params.g2 * amp;
        }
    }
    h
}

/// Diagonal of the parity operator in the same basis.
pub fn parity_diagonal(n_truncation: usize) -> DVector<f64> {
    DVector::from_fn(2 * (n_truncation + 1), |i, _| {
        basis_parity(i / 2, i % 2 == 0)
    })
}

/// Eigenpairs of a dense Hamiltonian, ascending.
#[derive(Debug, Clone)]
pub struct EdSpectrum {
    pub energies: Vec<f64>,
    /// ⟨Π⟩ per eigenvector.
    pub parities: Vec<f64>,
    /// Eigenvectors as columns, in the order of `energies`.
    pub vectors: DMatrix<f64>,
}

/// Full symmetric eigendecomposition. The matrix must be in the basis of
/// [`hamiltonian_matrix`] (even dimension) for the parity column to mean
/// anything.
pub fn eigensolve(matrix: &DMatrix<f64>) -> Result<EdSpectrum> {
    let dim = matrix.nrows();
    let max_iter = 200 * dim.max(1);
    let eig = SymmetricEigen::try_new(matrix.clone(), f64::EPSILON, max_iter).ok_or(
        Error::NoConvergence {
            iterations: max_iter,
        },
    )?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let parity = DVector::from_fn(dim, |i, _| basis_parity(i / 2, i % 2 == 0));
    let mut vectors = DMatrix::zeros(dim, dim);
    let mut energies = Vec::with_capacity(dim);
    let mut parities = Vec::with_capacity(dim);
    for (col, &k) in order.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        energies.push(eig.eigenvalues[k]);
        parities.push(v.component_mul(&v).dot(&parity));
        vectors.set_column(col, &v);
    }
    Ok(EdSpectrum {
        energies,
        parities,
        vectors,
    })
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with
/// Wilkinson shifts. `off[i]` couples rows `i` and `i+1`. Ascending output.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    assert!(
        n == 0 || off.len() + 1 == n,
        "off-diagonal must have n-1 entries"
    );
    let mut d = diag.to_vec();
    let mut e: Vec<f64> = off.iter().copied().chain(std::iter::once(0.0)).collect();
    const MAX_SWEEPS: usize = 60;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::NoConvergence { iterations: iter });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// One parity sector as a tridiagonal chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityBlock {
    pub parity: Parity,
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    /// `(n, spin_up)` of each chain site.
    pub basis: Vec<(usize, bool)>,
}

/// The chain `|0,s0⟩, |1,−s0⟩, |2,s0⟩, …` with `s0 = ↓` for even parity and
/// `↑` for odd.
pub fn parity_block(params: &ModelParams, n_truncation: usize, parity: Parity) -> ParityBlock {
    let first_up = parity == Parity::Odd;
    let half_delta = 0.5 * params.delta;
    let basis: Vec<(usize, bool)> = (0..=n_truncation)
        .map(|n| (n, if n % 2 == 0 { first_up } else { !first_up }))
        .collect();
    let diag = basis
        .iter()
        .map(|&(n, up)| {
            let nf = n as f64;
            let stark = half_delta + params.stark_u * nf;
            if up {
                nf + stark
            } else {
                nf - stark
            }
        })
        .collect();
    let off = basis
        .windows(2)
        .map(|pair| {
            let (n, up) = pair[0];
            let g = if up { params.g1 } else { params.g2 };
            g * ((n + 1) as f64).sqrt()
        })
        .collect();
    ParityBlock {
        parity,
        diag,
        off,
        basis,
    }
}

impl ParityBlock {
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        tridiagonal_eigenvalues(&self.diag, &self.off)
    }
}

/// Ascending eigenvalues of each parity sector, `(even, odd)`.
pub fn parity_resolved_levels(
    params: &ModelParams,
    n_truncation: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let even = parity_block(params, n_truncation, Parity::Even).eigenvalues()?;
    let odd = parity_block(params, n_truncation, Parity::Odd).eigenvalues()?;
    Ok((even, odd))
}

/// Merged spectrum of both sectors, ascending, with parity labels.
pub fn merged_levels(params: &ModelParams, n_truncation: usize) -> Result<Vec<(f64, Parity)>> {
    let (even, odd) = parity_resolved_levels(params, n_truncation)?;
    let mut all: Vec<(f64, Parity)> = even
        .into_iter()
        .map(|e| (e, Parity::Even))
        .chain(odd.into_iter().map(|e| (e, Parity::Odd)))
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(all)
}

/// Energy gap `E1 − E0` of the merged spectrum.
pub fn gap(params: &ModelParams, n_truncation: usize) -> Result<f64> {
    let levels = merged_levels(params, n_truncation)?;
    Ok(levels[1].0 - levels[0].0)
}

/// Oracle spectrum with truncation-convergence bookkeeping.
#[derive(Debug, Clone, Serialize)]
pub struct EdResult {
    pub energies: Vec<f64>,
    pub parities: Vec<f64>,
    pub n_truncation: usize,
    /// Number of leading levels stable to [`CONVERGENCE_TOL`] under doubling.
    pub converged_count: usize,
    #[serde(skip)]
    pub vectors: DMatrix<f64>,
}

impl EdResult {
    pub fn is_converged(&self, level: usize) -> bool {
        level < self.converged_count
    }
}

/// Full diagonalisation at `n_truncation`, checked against the eigenvalues
/// at `2·n_truncation`.
pub fn diagonalize(params: &ModelParams, n_truncation: usize) -> Result<EdResult> {
    if n_truncation < 1 {
        return Err(Error::InvalidParameter {
            name: "n_truncation",
            value: n_truncation as f64,
            reason: "must be at least 1",
        });
    }
    let spec = eigensolve(&hamiltonian_matrix(params, n_truncation))?;
    let reference: Vec<f64> = merged_levels(params, 2 * n_truncation)?
        .into_iter()
        .map(|(e, _)| e)
        .collect();
    let converged_count = spec
        .energies
        .iter()
        .zip(&reference)
        .take_while(|(a, b)| (*a - *b).abs() < CONVERGENCE_TOL)
        .count();
    Ok(EdResult {
        energies: spec.energies,
        parities: spec.parities,
        n_truncation,
        converged_count,
        vectors: spec.vectors,
    })
}

/// `⟨m|D(α)|n⟩` for real α, `m < rows`, `n < cols`, computed along each
/// diagonal with the associated-Laguerre three-term recurrence.
pub fn displacement_matrix(alpha: f64, rows: usize, cols: usize) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(rows, cols);
    if rows == 0 || cols == 0 {
        return out;
    }
    if alpha == 0.0 {
        for i in 0..rows.min(cols) {
            out[(i, i)] = 1.0;
        }
        return out;
    }
    let x = alpha * alpha;
    let ln_abs = alpha.abs().ln();
    let dim = rows.max(cols);
    // ln k! for k < dim
    let mut ln_fact = vec![0.0; dim];
    for k in 1..dim {
        ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
    }
    // walk the diagonal (j + k, j) of ⟨·|D(s·α)|·⟩; s = −1 gives the
    // transposed side since ⟨m|D(α)|n⟩ = ⟨n|D(−α)|m⟩
    let fill = |k: usize, len: usize, sign_alpha: f64, set: &mut dyn FnMut(usize, f64)| {
        if len == 0 {
            return;
        }
        let kf = k as f64;
        let mut mag = (-0.5 * x + kf * ln_abs - 0.5 * ln_fact[k]).exp();
        if sign_alpha * alpha < 0.0 && k % 2 == 1 {
            mag = -mag;
        }
        let mut prev = 0.0;
        let mut cur = mag;
        set(0, cur);
        for j in 0..len - 1 {
            let jf = j as f64;
            let next = ((2.0 * jf + 1.0 + kf - x) * cur - (jf * (jf + kf)).sqrt() * prev)
                / ((jf + 1.0) * (jf + kf + 1.0)).sqrt();
            prev = cur;
            cur = next;
            set(j + 1, cur);
        }
    };
    for k in 0..rows {
        // lower diagonals m = n + k
        let len = cols.min(rows - k);
        fill(k, len, 1.0, &mut |j, v| out[(j + k, j)] = v);
    }
    for k in 1..cols {
        // upper diagonals n = m + k
        let len = rows.min(cols - k);
        fill(k, len, -1.0, &mut |j, v| out[(j, j + k)] = v);
    }
    out
}

/// `⟨m|D(−w)|n⟩`, the Fock components of the displaced number states
/// `|n⟩_A` used by the expansion.
pub fn displaced_overlap_matrix(w: f64, size: usize) -> DMatrix<f64> {
    displacement_matrix(-w, size, size)
}

/// `max_i Σ_j |(MᵀM − I)_ij|` restricted to the leading `inner` columns.
pub fn orthogonality_defect(m: &DMatrix<f64>, inner: usize) -> f64 {
    let inner = inner.min(m.ncols());
    let cols = m.columns(0, inner);
    let gram = cols.transpose() * cols;
    (0..inner)
        .map(|i| {
            (0..inner)
                .map(|j| (gram[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs())
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}

/// Amplitude (relative to the largest) below which the expansion counts as
/// decayed when assembling a Fock-basis state.
pub const AMPLITUDE_CUTOFF: f64 = 1e-10;

/// The expansion state rotated back to the bare spin basis and written in
/// the Fock basis of size `n_truncation + 1` (layout of
/// [`hamiltonian_matrix`]), normalised.
pub fn expansion_state(
    table: &CoefficientTable,
    params: &ModelParams,
    n_truncation: usize,
) -> Result<DVector<f64>> {
    let size = n_truncation + 1;
    let r = params.derive()?.r;
    // amplitudes √n! e_n, √n! f_n
    let mut ln_sqrt_fact = 0.0;
    let mut amp_e = Vec::with_capacity(table.len());
    let mut amp_f = Vec::with_capacity(table.len());
    for (n, (e, f)) in table.e.iter().zip(&table.f).enumerate() {
        if n > 0 {
            ln_sqrt_fact += 0.5 * (n as f64).ln();
        }
        let scale = ln_sqrt_fact.exp();
        amp_e.push(e * scale);
        amp_f.push(f * scale);
    }
    let peak = amp_e
        .iter()
        .chain(&amp_f)
        .fold(0.0f64, |m, a| m.max(a.abs()));
    let last_significant = (0..amp_e.len())
        .rev()
        .find(|&n| amp_e[n].abs().max(amp_f[n].abs()) >= AMPLITUDE_CUTOFF * peak)
        .unwrap_or(0);
    if last_significant + 1 >= size || last_significant + 1 == amp_e.len() {
        let tail = amp_e[amp_e.len() - 1]
            .abs()
            .max(amp_f[amp_f.len() - 1].abs())
            / peak;
        return Err(Error::TruncationTooSmall {
            size,
            amplitude: tail,
        });
    }
    let cols = last_significant + 1;
    let d = displacement_matrix(-table.w, size, cols);
    let upper = &d * DVector::from_column_slice(&amp_e[..cols]);
    let lower = &d * DVector::from_column_slice(&amp_f[..cols]);
    let sqrt_r = r.sqrt();
    let mut psi = DVector::zeros(2 * size);
    for n in 0..size {
        psi[basis_index(n, true)] = (upper[n] - lower[n]) / sqrt_r;
        psi[basis_index(n, false)] = upper[n] + lower[n];
    }
    let norm = psi.norm();
    Ok(psi / norm)
}

/// Squared overlap between the expansion eigenstate and an ED eigenvector.
pub fn fidelity(
    table: &CoefficientTable,
    params: &ModelParams,
    ed_vector: &DVector<f64>,
) -> Result<f64> {
    if !ed_vector.len().is_multiple_of(2) {
        return Err(Error::InvalidParameter {
            name: "ed_vector",
            value: ed_vector.len() as f64,
            reason: "length must be 2(n_truncation+1)",
        });
    }
    let n_truncation = ed_vector.len() / 2 - 1;
    let psi = expansion_state(table, params, n_truncation)?;
    let overlap = psi.dot(ed_vector) / ed_vector.norm();
    Ok((overlap * overlap).min(1.0))
}
