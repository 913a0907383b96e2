use faer::{Mat, MatRef};
use num_complex::Complex64;

use crate::algebra::ANNIHILATION_THRESHOLD;
use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex square matrix (Hamiltonians, propagators).
#[derive(Debug, Clone)]
pub struct DenseOperator {
    mat: Mat<C64>,
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> Self {
        DenseOperator { mat: Mat::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        DenseOperator { mat: Mat::from_fn(dim, dim, |i, j| if i == j { ONE } else { ZERO }) }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        DenseOperator { mat: Mat::from_fn(dim, dim, f) }
    }

    pub fn from_mat(mat: Mat<C64>) -> Self {
        assert_eq!(mat.nrows(), mat.ncols(), "operator must be square");
        DenseOperator { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub(crate) fn add_at(&mut self, i: usize, j: usize, value: f64) {
        self.mat[(i, j)] += C64::new(value, 0.0);
    }

    pub fn as_mat(&self) -> MatRef<'_, C64> {
        self.mat.as_ref()
    }

    pub fn adjoint(&self) -> DenseOperator {
        DenseOperator { mat: self.mat.adjoint().to_owned() }
    }

    pub fn matmul(&self, other: &DenseOperator) -> DenseOperator {
        DenseOperator { mat: &self.mat * &other.mat }
    }

    /// `max |A_ij - conj(A_ji)|`
    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_residual(self.mat.as_ref())
    }

    /// `max |(U^dagger U - I)_ij|`
    pub fn unitarity_residual(&self) -> f64 {
        let product = self.mat.adjoint() * &self.mat;
        max_abs_deviation(product.as_ref(), |i, j| if i == j { ONE } else { ZERO })
    }

    /// `max |(AB - BA)_ij|`
    pub fn commutator_norm(&self, other: &DenseOperator) -> f64 {
        let ab = &self.mat * &other.mat;
        let ba = &other.mat * &self.mat;
        max_abs_deviation(ab.as_ref(), |i, j| ba[(i, j)])
    }

    pub fn max_abs(&self) -> f64 {
        let n = self.dim();
        let mut m: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                m = m.max(self.mat[(i, j)].norm());
            }
        }
        m
    }
}

fn hermiticity_residual(mat: MatRef<'_, C64>) -> f64 {
    let n = mat.nrows();
    let mut worst: f64 = 0.0;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((mat[(i, j)] - mat[(j, i)].conj()).norm());
        }
    }
    worst
}

fn max_abs_deviation(mat: MatRef<'_, C64>, reference: impl Fn(usize, usize) -> C64) -> f64 {
    let n = mat.nrows();
    let mut worst: f64 = 0.0;
    for j in 0..n {
        for i in 0..n {
            worst = worst.max((mat[(i, j)] - reference(i, j)).norm());
        }
    }
    worst
}

/// Mixed state of the full system or of the bath alone.
///
/// Full-system matrices order the central spin slowest: indices
/// `0..d` hold `|g> (x) bath`, indices `d..2d` hold `|e> (x) bath`.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: Mat<C64>,
}

impl DensityMatrix {
    pub fn from_diagonal(diagonal: &[f64]) -> Result<Self> {
        let n = diagonal.len();
        let rho = DensityMatrix {
            mat: Mat::from_fn(n, n, |i, j| if i == j { C64::new(diagonal[i], 0.0) } else { ZERO }),
        };
        rho.validate()?;
        Ok(rho)
    }

    /// `|psi><psi|` for a normalized copy of `psi`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::InvalidParams("zero state vector".into()));
        }
        let n = psi.len();
        Ok(DensityMatrix { mat: Mat::from_fn(n, n, |i, j| psi[i] * psi[j].conj() / (norm * norm)) })
    }

    pub fn from_operator(op: DenseOperator) -> Result<Self> {
        let rho = DensityMatrix { mat: op.mat };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_mat_unchecked(mat: Mat<C64>) -> Self {
        DensityMatrix { mat }
    }

    /// `central (x) bath`, central index slowest.
    pub fn product(central: &DensityMatrix, bath: &DensityMatrix) -> DensityMatrix {
        let (c, b) = (central.dim(), bath.dim());
        DensityMatrix {
            mat: Mat::from_fn(c * b, c * b, |i, j| {
                central.mat[(i / b, j / b)] * bath.mat[(i % b, j % b)]
            }),
        }
    }

    /// `|g><g| (x) bath`
    pub fn central_ground_with(bath: &DensityMatrix) -> DensityMatrix {
        let b = bath.dim();
        DensityMatrix {
            mat: Mat::from_fn(2 * b, 2 * b, |i, j| {
                if i < b && j < b {
                    bath.mat[(i, j)]
                } else {
                    ZERO
                }
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub fn as_mat(&self) -> MatRef<'_, C64> {
        self.mat.as_ref()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).collect()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_residual(self.mat.as_ref())
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.mat
            .self_adjoint_eigenvalues(faer::Side::Lower)
            .map_err(|e| Error::Eigen(format!("{e:?}")))
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.into_iter().fold(f64::INFINITY, f64::min))
    }

    /// `-Tr rho ln rho`
    pub fn entropy(&self) -> Result<f64> {
        let eig = self.eigenvalues()?;
        Ok(crate::algebra::shannon_entropy(&eig))
    }

    /// Hermitian, unit trace and positive semidefinite, each to 1e-10.
    pub fn validate(&self) -> Result<()> {
        let tol = 1e-10;
        if self.hermiticity_residual() > tol {
            return Err(Error::InvalidParams("density matrix is not Hermitian".into()));
        }
        if (self.trace() - 1.0).abs() > tol {
            return Err(Error::InvalidParams(format!(
                "density matrix trace {} differs from 1",
                self.trace()
            )));
        }
        if self.min_eigenvalue()? < -tol {
            return Err(Error::InvalidParams("density matrix has a negative eigenvalue".into()));
        }
        Ok(())
    }

    /// `U rho U^dagger`
    pub fn evolve(&self, unitary: &DenseOperator) -> DensityMatrix {
        let left = &unitary.mat * &self.mat;
        DensityMatrix { mat: &left * unitary.mat.adjoint() }
    }

    /// Partial trace over the central spin of a full-system state.
    pub fn reduced_bath(&self) -> DensityMatrix {
        let b = self.dim() / 2;
        DensityMatrix {
            mat: Mat::from_fn(b, b, |i, j| self.mat[(i, j)] + self.mat[(i + b, j + b)]),
        }
    }

    /// Partial trace over the bath: the 2x2 central-spin state `[[gg, ge], [eg, ee]]`.
    pub fn central_marginal(&self) -> [[C64; 2]; 2] {
        let b = self.dim() / 2;
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = (0..b).map(|k| self.mat[(r * b + k, c * b + k)]).sum();
            }
        }
        out
    }
}

/// Projects the central spin onto `|g>`: `rho -> Pi rho Pi / Tr(Pi rho Pi)`
/// with `Pi = |g><g| (x) I`. Returns the post-measurement state and the
/// success probability.
pub fn measure_central_ground(rho: &DensityMatrix) -> Result<(DensityMatrix, f64)> {
    let n = rho.dim();
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidParams("full-system state must have even dimension".into()));
    }
    let b = n / 2;
    let probability: f64 = (0..b).map(|i| rho.mat[(i, i)].re).sum();
    if !(probability >= ANNIHILATION_THRESHOLD) {
        return Err(Error::Annihilated { probability });
    }
    let mat = Mat::from_fn(n, n, |i, j| {
        if i < b && j < b {
            rho.mat[(i, j)] / probability
        } else {
            ZERO
        }
    });
    Ok((DensityMatrix { mat }, probability))
}
