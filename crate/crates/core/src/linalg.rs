//! Small dense linear-algebra helpers shared by the propagators.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

/// Eigendecomposition `H = V diag(λ) V†` of a Hermitian matrix, kept around so
/// that propagation to many times reuses one factorisation.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: DVector<f64>,
    pub vectors: DMatrix<C64>,
}

impl HermitianEigen {
    pub fn new(h: &DMatrix<C64>) -> Self {
        debug_assert!(h.is_square());
        // Symmetrise first so round-off in the caller cannot leak an
        // anti-Hermitian part into the eigensolver.
        let herm = (h + h.adjoint()).scale(0.5);
        let eig = SymmetricEigen::new(herm);
        Self { values: eig.eigenvalues, vectors: eig.eigenvectors }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `exp(-i H t)` as a dense matrix.
    pub fn propagator(&self, t: f64) -> DMatrix<C64> {
        let phases = DVector::from_iterator(
            self.dim(),
            self.values.iter().map(|&e| C64::from_polar(1.0, -e * t)),
        );
        let scaled = DMatrix::from_fn(self.dim(), self.dim(), |i, j| self.vectors[(i, j)] * phases[j]);
        scaled * self.vectors.adjoint()
    }

    /// `exp(-i H t) v` without forming the full propagator.
    pub fn apply(&self, t: f64, v: &DVector<C64>) -> DVector<C64> {
        let mut coeffs = self.vectors.adjoint() * v;
        for (c, &e) in coeffs.iter_mut().zip(self.values.iter()) {
            *c *= C64::from_polar(1.0, -e * t);
        }
        &self.vectors * coeffs
    }

    /// Eigenvalues sorted in descending order.
    pub fn sorted_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.values.iter().copied().collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }
}

/// `exp(-i H t)` for Hermitian `H`.
pub fn expm_hermitian(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    HermitianEigen::new(h).propagator(t)
}

pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `max |U U† - I|` entrywise.
pub fn unitarity_defect(u: &DMatrix<C64>) -> f64 {
    let n = u.nrows();
    max_abs_diff(&(u * u.adjoint()), &DMatrix::identity(n, n))
}

/// Trace norm `‖A‖₁` of a Hermitian matrix (sum of absolute eigenvalues).
pub fn hermitian_trace_norm(a: &DMatrix<C64>) -> f64 {
    HermitianEigen::new(a).values.iter().map(|v| v.abs()).sum()
}

/// Spectral norm of a general square matrix, via the largest eigenvalue of `A†A`.
pub fn operator_norm(a: &DMatrix<C64>) -> f64 {
    let gram = a.adjoint() * a;
    HermitianEigen::new(&gram).values.iter().fold(0.0_f64, |m, &v| m.max(v)).max(0.0).sqrt()
}

/// `AB - BA`.
pub fn commutator(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a * b - b * a
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}
