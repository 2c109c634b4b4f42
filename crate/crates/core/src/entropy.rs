//! Von Neumann entropy of the pre-emission electronic mixture.
//!
//! Absorption leaves the molecule in a superposition
//! Ψ = Σ c_{l,m} Ξ_l ⊗ Φ_{l,m} of electronic (Ξ) and nuclear (Φ)
//! wavefunctions. Tracing out the nuclear index m yields the electronic
//! density matrix Σ_{l,l'} = Σ_m c_{l,m}·c̄_{l',m}, whose mixedness
//! S(Σ) = −Tr Σ ln Σ is the entropy retained by the molecule between
//! absorption and emission. Entropy is reported in nats.
//!
//! The partial trace assumes the nuclear functions form one orthonormal
//! set shared by all electronic surfaces. Cross-surface distinguishability
//! can be injected through an overlap matrix that damps the electronic
//! coherences (see [`reduce_density_matrix_with_overlap`]).

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Tolerance on normalization, Hermiticity and trace checks.
const MATRIX_TOL: f64 = 1e-12;
/// Eigenvalues below this are treated as exact zeros in λ·ln λ.
const EIGEN_CLIP: f64 = 1e-14;

/// Superposition amplitudes c_{l,m}: rows index the electronic label l,
/// columns the nuclear label m. Σ|c|² = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionCoeffs {
    c: DMatrix<Complex64>,
}

impl SuperpositionCoeffs {
    pub fn new(c: DMatrix<Complex64>) -> Result<Self> {
        if c.nrows() == 0 || c.ncols() == 0 {
            return Err(Error::domain(
                "superposition coefficients must be non-empty",
            ));
        }
        let norm_sq: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > MATRIX_TOL {
            return Err(Error::domain(format!(
                "superposition coefficients are not normalized: sum |c|^2 = {norm_sq:.17}"
            )));
        }
        Ok(SuperpositionCoeffs { c })
    }

    /// Build from rows of (re, im) pairs, one row per electronic label.
    pub fn from_rows(rows: &[Vec<(f64, f64)>]) -> Result<Self> {
        let d_e = rows.len();
        let d_n = rows.first().map_or(0, |r| r.len());
        if d_e == 0 || d_n == 0 {
            return Err(Error::domain(
                "superposition coefficients must be non-empty",
            ));
        }
        if rows.iter().any(|r| r.len() != d_n) {
            return Err(Error::domain(
                "all coefficient rows must have the same length",
            ));
        }
        let c = DMatrix::from_fn(d_e, d_n, |l, m| {
            let (re, im) = rows[l][m];
            Complex64::new(re, im)
        });
        SuperpositionCoeffs::new(c)
    }

    pub fn electronic_dim(&self) -> usize {
        self.c.nrows()
    }

    pub fn nuclear_dim(&self) -> usize {
        self.c.ncols()
    }

    pub fn amplitudes(&self) -> &DMatrix<Complex64> {
        &self.c
    }
}

/// Hermitian, positive-semidefinite, unit-trace electronic density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    sigma: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(sigma: DMatrix<Complex64>) -> Result<Self> {
        if sigma.nrows() == 0 || sigma.nrows() != sigma.ncols() {
            return Err(Error::domain("density matrix must be square and non-empty"));
        }
        let dim = sigma.nrows();
        for i in 0..dim {
            for j in 0..dim {
                let d = sigma[(i, j)] - sigma[(j, i)].conj();
                if d.norm() > MATRIX_TOL {
                    return Err(Error::domain("density matrix must be Hermitian"));
                }
            }
        }
        let trace: Complex64 = sigma.diagonal().iter().sum();
        if (trace.re - 1.0).abs() > MATRIX_TOL || trace.im.abs() > MATRIX_TOL {
            return Err(Error::domain("density matrix trace must equal 1"));
        }
        let dm = DensityMatrix { sigma };
        if dm.eigenvalues().iter().any(|&l| l < -MATRIX_TOL) {
            return Err(Error::domain(
                "density matrix must be positive semidefinite",
            ));
        }
        Ok(dm)
    }

    pub fn dim(&self) -> usize {
        self.sigma.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.sigma
    }

    /// Real eigenvalue spectrum, unsorted.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.sigma
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect()
    }
}

/// Partial trace over the nuclear index: Σ_{l,l'} = Σ_m c_{l,m}·c̄_{l',m},
/// i.e. Σ = C·C†.
pub fn reduce_density_matrix(coeffs: &SuperpositionCoeffs) -> Result<DensityMatrix> {
    let c = coeffs.amplitudes();
    DensityMatrix::new(c * c.adjoint())
}

/// Partial trace with a nuclear-overlap factor between electronic surfaces:
/// Σ_{l,l'} = (C·C†)_{l,l'}·O_{l,l'}.
///
/// `overlap` must be Hermitian, positive semidefinite, with unit diagonal;
/// the all-ones matrix reproduces [`reduce_density_matrix`]. By the Schur
/// product theorem the damped matrix stays positive semidefinite.
pub fn reduce_density_matrix_with_overlap(
    coeffs: &SuperpositionCoeffs,
    overlap: &DMatrix<Complex64>,
) -> Result<DensityMatrix> {
    let d_e = coeffs.electronic_dim();
    if overlap.nrows() != d_e || overlap.ncols() != d_e {
        return Err(Error::domain(
            "overlap matrix must match the electronic dimension",
        ));
    }
    for i in 0..d_e {
        if (overlap[(i, i)] - Complex64::new(1.0, 0.0)).norm() > MATRIX_TOL {
            return Err(Error::domain("overlap matrix must have unit diagonal"));
        }
        for j in 0..d_e {
            if (overlap[(i, j)] - overlap[(j, i)].conj()).norm() > MATRIX_TOL {
                return Err(Error::domain("overlap matrix must be Hermitian"));
            }
        }
    }
    if overlap
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .any(|&l| l < -MATRIX_TOL)
    {
        return Err(Error::domain(
            "overlap matrix must be positive semidefinite",
        ));
    }
    let c = coeffs.amplitudes();
    let bare = c * c.adjoint();
    let damped = bare.component_mul(overlap);
    DensityMatrix::new(damped)
}

/// Von Neumann entropy S = −Σ λ ln λ in nats, with 0·ln 0 = 0.
pub fn von_neumann_entropy(dm: &DensityMatrix) -> f64 {
    dm.eigenvalues()
        .iter()
        .map(|&l| if l > EIGEN_CLIP { -l * l.ln() } else { 0.0 })
        .sum()
}

/// Entropy acquired by the electronic state between absorption (pure) and
/// emission (mixed): S of the reduced pre-emission mixture.
pub fn emission_entropy_gain(coeffs: &SuperpositionCoeffs) -> Result<f64> {
    Ok(von_neumann_entropy(&reduce_density_matrix(coeffs)?))
}

/// Parse superposition coefficients from text.
///
/// One line per electronic label; each line holds whitespace-separated
/// complex entries written as `re,im`. Lines starting with `#` and blank
/// lines are skipped. All rows must have the same number of entries and
/// the amplitudes must be normalized.
///
/// ```text
/// # maximally mixed two-level example
/// 0.70710678118654752,0   0,0
/// 0,0   0.70710678118654752,0
/// ```
pub fn parse_coeffs_text(text: &str) -> Result<SuperpositionCoeffs> {
    let mut rows: Vec<Vec<(f64, f64)>> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for token in line.split_whitespace() {
            let (re, im) = token.split_once(',').ok_or_else(|| {
                Error::config(format!(
                    "line {}: coefficient `{token}` must be written as re,im",
                    idx + 1
                ))
            })?;
            let parse = |part: &str, which: &str| -> Result<f64> {
                part.trim().parse::<f64>().map_err(|_| {
                    Error::config(format!(
                        "line {}: {which} part of `{token}` is not a number",
                        idx + 1
                    ))
                })
            };
            row.push((parse(re, "real")?, parse(im, "imaginary")?));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::config("coefficient file holds no rows"));
    }
    let width = rows[0].len();
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::config("coefficient rows differ in length"));
    }
    SuperpositionCoeffs::from_rows(&rows)
}
