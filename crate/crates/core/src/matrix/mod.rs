//! Matrix representations for the three symmetry classes, trace
//! conventions, sampling and eigenvalues.

pub mod eigen;
pub mod sample;

use crate::densities::DensityFamily;
use crate::error::{Error, Result};
use num_complex::Complex64;

pub use eigen::{hermitian_eigenvalues, jacobi_eigenvalues, symmetric_eigenvalues};
pub use sample::{sample_gaussian, sample_norm_dependent, NormDependentSampler};

/// Dyson index labelling the symmetry class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Beta {
    /// Real symmetric matrices (orthogonal class).
    One,
    /// Complex Hermitian matrices (unitary class).
    Two,
    /// Quaternion self-dual matrices (symplectic class).
    Four,
}

impl Beta {
    pub fn from_int(value: u32) -> Result<Self> {
        match value {
            1 => Ok(Beta::One),
            2 => Ok(Beta::Two),
            4 => Ok(Beta::Four),
            other => Err(Error::Domain(format!("beta must be 1, 2 or 4, got {other}"))),
        }
    }

    pub fn as_int(self) -> u32 {
        match self {
            Beta::One => 1,
            Beta::Two => 2,
            Beta::Four => 4,
        }
    }

    pub fn value(self) -> f64 {
        self.as_int() as f64
    }
}

impl std::fmt::Display for Beta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.as_int())
    }
}

/// Symmetry class with its derived determinant-power and supermatrix
/// dimension parameters: gamma = 1 for beta = 1, 2 and 2 for beta = 4;
/// zeta = 2 for beta = 2 and 4 for beta = 1, 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymmetryClass {
    pub beta: Beta,
}

impl SymmetryClass {
    pub fn new(beta: Beta) -> Self {
        Self { beta }
    }

    pub fn gamma(self) -> u32 {
        match self.beta {
            Beta::One | Beta::Two => 1,
            Beta::Four => 2,
        }
    }

    pub fn zeta(self) -> u32 {
        match self.beta {
            Beta::Two => 2,
            Beta::One | Beta::Four => 4,
        }
    }
}

/// Number of independent real matrix elements,
/// mu = N + (beta/2) N (N - 1).
pub fn degrees_of_freedom(class: SymmetryClass, n: usize) -> u64 {
    let n = n as u64;
    n + (class.beta.as_int() as u64) * n * (n - 1) / 2
}

/// Degrees of freedom as a float, the form used in all analytic formulae.
pub fn mu(beta: Beta, n: usize) -> f64 {
    degrees_of_freedom(SymmetryClass::new(beta), n) as f64
}

/// Fixed diagonal external field. Stored as the N distinct diagonal slots;
/// the symplectic class doubles each entry in storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ExternalField {
    entries: Vec<f64>,
    min_gap: f64,
}

impl ExternalField {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("external field entries must be finite".into()));
        }
        let mut min_gap = f64::INFINITY;
        for i in 0..entries.len() {
            for j in (i + 1)..entries.len() {
                min_gap = min_gap.min((entries[i] - entries[j]).abs());
            }
        }
        Ok(Self { entries, min_gap })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            entries: vec![0.0; n],
            min_gap: 0.0,
        }
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Smallest gap between two entries; infinite for a single entry.
    pub fn min_gap(&self) -> f64 {
        self.min_gap
    }

    pub fn is_distinct(&self, gap_tol: f64) -> bool {
        self.min_gap > gap_tol
    }

    /// Magnitude scale of the field, at least 1.
    pub fn scale(&self) -> f64 {
        self.entries
            .iter()
            .fold(1.0_f64, |acc, x| acc.max(x.abs()))
    }
}

/// Matrix payload per symmetry class. Row-major dense storage.
#[derive(Debug, Clone)]
pub enum MatrixStorage {
    /// beta = 1: real symmetric N x N.
    RealSym(Vec<f64>),
    /// beta = 2: complex Hermitian N x N.
    Hermitian(Vec<Complex64>),
    /// beta = 4: complex 2N x 2N with the quaternion self-dual structure.
    QuaternionSelfDual(Vec<Complex64>),
}

/// A random matrix draw together with its class and logical dimension N.
#[derive(Debug, Clone)]
pub struct RandomMatrix {
    class: SymmetryClass,
    n: usize,
    storage: MatrixStorage,
}

impl RandomMatrix {
    pub(crate) fn new(class: SymmetryClass, n: usize, storage: MatrixStorage) -> Self {
        Self { class, n, storage }
    }

    pub fn class(&self) -> SymmetryClass {
        self.class
    }

    /// Logical dimension N (the symplectic class stores 2N x 2N).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn storage(&self) -> &MatrixStorage {
        &self.storage
    }

    /// Storage dimension: N for beta = 1, 2 and 2N for beta = 4.
    pub fn storage_dim(&self) -> usize {
        match self.class.beta {
            Beta::Four => 2 * self.n,
            _ => self.n,
        }
    }

    /// Tr H^2 with the class trace convention (half-trace for beta = 4,
    /// which undoes the Kramers doubling).
    pub fn trace_norm_sq(&self) -> f64 {
        match &self.storage {
            MatrixStorage::RealSym(a) => a.iter().map(|x| x * x).sum(),
            MatrixStorage::Hermitian(a) => a.iter().map(|z| z.norm_sqr()).sum(),
            MatrixStorage::QuaternionSelfDual(a) => {
                0.5 * a.iter().map(|z| z.norm_sqr()).sum::<f64>()
            }
        }
    }

    /// Uniformly rescale the matrix in place.
    pub fn scale(&mut self, factor: f64) {
        match &mut self.storage {
            MatrixStorage::RealSym(a) => a.iter_mut().for_each(|x| *x *= factor),
            MatrixStorage::Hermitian(a) | MatrixStorage::QuaternionSelfDual(a) => {
                a.iter_mut().for_each(|z| *z *= factor)
            }
        }
    }

    /// Sorted eigenvalues; the symplectic class reports the N distinct
    /// (Kramers-paired) values.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.eigenvalues_with_field(None, 1.0)
    }

    /// The 2N raw eigenvalues of the symplectic storage, without the
    /// degenerate-pair merge. Errors for other classes.
    pub fn eigenvalues_raw_symplectic(&self) -> Result<Vec<f64>> {
        match &self.storage {
            MatrixStorage::QuaternionSelfDual(a) => hermitian_eigenvalues(a, 2 * self.n),
            _ => Err(Error::Unsupported(
                "raw symplectic spectrum requested for a non-symplectic matrix".into(),
            )),
        }
    }

    /// Sorted eigenvalues of H0 + alpha * H (of alpha * H when `field` is
    /// None). The symplectic pair merge is applied.
    pub fn eigenvalues_with_field(
        &self,
        field: Option<&ExternalField>,
        alpha: f64,
    ) -> Result<Vec<f64>> {
        if let Some(f) = field {
            if f.len() != self.n {
                return Err(Error::Domain(format!(
                    "field has {} entries but N = {}",
                    f.len(),
                    self.n
                )));
            }
        }
        match &self.storage {
            MatrixStorage::RealSym(a) => {
                let n = self.n;
                let mut m: Vec<f64> = a.iter().map(|x| alpha * x).collect();
                if let Some(f) = field {
                    for i in 0..n {
                        m[i * n + i] += f.entries[i];
                    }
                }
                symmetric_eigenvalues(&m, n)
            }
            MatrixStorage::Hermitian(a) => {
                let n = self.n;
                let mut m: Vec<Complex64> = a.iter().map(|z| alpha * z).collect();
                if let Some(f) = field {
                    for i in 0..n {
                        m[i * n + i] += f.entries[i];
                    }
                }
                hermitian_eigenvalues(&m, n)
            }
            MatrixStorage::QuaternionSelfDual(a) => {
                let d = 2 * self.n;
                let mut m: Vec<Complex64> = a.iter().map(|z| alpha * z).collect();
                if let Some(f) = field {
                    for i in 0..self.n {
                        m[(2 * i) * d + 2 * i] += f.entries[i];
                        m[(2 * i + 1) * d + 2 * i + 1] += f.entries[i];
                    }
                }
                let doubled = hermitian_eigenvalues(&m, d)?;
                let mut vals = Vec::with_capacity(self.n);
                for k in 0..self.n {
                    vals.push(0.5 * (doubled[2 * k] + doubled[2 * k + 1]));
                }
                Ok(vals)
            }
        }
    }
}

/// Full ensemble description: symmetry class, dimension, density family,
/// coupling strength and external field.
#[derive(Debug, Clone)]
pub struct EnsembleSpec {
    pub class: SymmetryClass,
    pub n: usize,
    pub family: DensityFamily,
    pub alpha: f64,
    pub field: ExternalField,
}

impl EnsembleSpec {
    pub fn new(
        beta: Beta,
        n: usize,
        family: DensityFamily,
        alpha: f64,
        field: ExternalField,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("N must be positive".into()));
        }
        if field.len() != n {
            return Err(Error::Domain(format!(
                "field has {} entries but N = {n}",
                field.len()
            )));
        }
        Ok(Self {
            class: SymmetryClass::new(beta),
            n,
            family,
            alpha,
            field,
        })
    }

    pub fn mu(&self) -> f64 {
        mu(self.class.beta, self.n)
    }
}
