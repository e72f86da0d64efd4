#pragma once

#include <Eigen/Dense>
#include <complex>

#include "quansal/errors.hpp"

namespace quansal {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

namespace tol {
/// Relative Hermiticity tolerance for spectral routines.
inline constexpr double hermitian = 1e-10;
/// Relative rank cutoff for pseudo-inverses, measured against the largest
/// eigenvalue.
inline constexpr double rank = 1e-10;
/// Default validation tolerance for models and behaviors.
inline constexpr double validation = 1e-9;
/// Eigenvalue-1 classification width for the erasure projector.
inline constexpr double eig = 1e-9;
}  // namespace tol

/// Eigensystem of a Hermitian matrix, eigenvalues sorted descending and
/// eigenvectors stored as orthonormal columns in matching order.
struct SpectralDecomposition {
    RVector eigenvalues;
    CMatrix eigenvectors;

    CMatrix reconstruct() const;
};

/// Diagonalizes a Hermitian matrix. Throws NonHermitian when
/// ||M - M^dagger||_F > tol * ||M||_F.
SpectralDecomposition hermitian_eig(const CMatrix& m, double tol = tol::hermitian);

/// Principal square root of a PSD matrix. Eigenvalues in [-tol, 0) are
/// clamped to zero; anything below -tol throws NotPSD.
CMatrix psd_sqrt(const CMatrix& m, double tol = tol::hermitian);

/// Moore-Penrose inverse square root together with the orthogonal projector
/// onto the numerical support. Eigenvalues <= rank_tol * lambda_max count as
/// zero.
struct PinvSqrt {
    CMatrix inverse_sqrt;
    CMatrix support_projector;
    Eigen::Index rank = 0;
};
PinvSqrt psd_pinv_sqrt(const CMatrix& m, double rank_tol = tol::rank);

/// Clamp small negative eigenvalues of a Hermitian matrix to zero.
/// Eigenvalues below -tol throw NotPSD.
CMatrix clamp_psd(const CMatrix& m, double tol);

/// Row-major vectorization |i><j| -> |i>|j>: vec(M)[i*cols + j] = M(i,j).
/// With this convention vec(A M B) = (A kron B^T) vec(M).
CVector vectorize(const CMatrix& m);
CMatrix devectorize(const CVector& v, Eigen::Index dim);
CMatrix devectorize(const CVector& v, Eigen::Index rows, Eigen::Index cols);

/// Transpose with respect to the computational (storage) basis.
CMatrix transpose_in_basis(const CMatrix& m);

/// Sum of singular values. Square input only.
double trace_norm(const CMatrix& m);

double frobenius_norm(const CMatrix& m);

/// ||AB - BA||_F for equal-dimension square matrices.
double commutator_norm(const CMatrix& a, const CMatrix& b);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// (M + M^dagger) / 2.
CMatrix hermitize(const CMatrix& m);

/// True when every entry is finite.
bool all_finite(const CMatrix& m);

}  // namespace quansal
