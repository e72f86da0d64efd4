#pragma once

#include <vector>

#include "quansal/matkernel.hpp"
#include "quansal/models.hpp"

namespace quansal {

enum class ChannelMode { Projective, Sqrt };

/// Measurement channel M -> sum_a K_a M K_a with Hermitian Kraus operators.
/// Hermiticity is required so the vectorized form stays Hermitian PSD.
struct KrausChannel {
    std::vector<CMatrix> kraus;
    Eigen::Index dim = 0;

    CMatrix apply(const CMatrix& m) const;
};

/// Channel in vectorized (Liouville) form: a dim^2 x dim^2 matrix acting on
/// vec(M) with the row-major convention of matkernel.
struct Superoperator {
    CMatrix matrix;

    Eigen::Index dim() const;  // underlying Hilbert dimension
};

/// Spectral projector onto the eigenvalue-1 space of an averaged measurement
/// superoperator, together with the full spectrum it was cut from.
struct ErasureProjector {
    CMatrix projector;   // dim^2 x dim^2 orthogonal projector
    RVector spectrum;    // eigenvalues of the averaged superoperator, descending
    double eig_tol = 0.0;
    Eigen::Index dim = 0;

    Eigen::Index rank() const;
};

/// Kraus list {E_a} (projective) or {sqrt(E_a)} (sqrt). Projective mode on a
/// POVM-kind measurement throws ModeMismatch.
KrausChannel measurement_channel(const Measurement& m, ChannelMode mode);

/// sum_a K_a kron (K_a)^T. Throws NonHermitianKraus on non-Hermitian input.
Superoperator superoperator_of(const KrausChannel& c);

/// Uniform average of the channels' superoperators.
Superoperator average_superoperator(const std::vector<KrausChannel>& channels);

/// Projector onto span{eigenvectors with lambda >= 1 - eig_tol}. Eigenvalues
/// outside [-eig_tol, 1 + eig_tol] throw SpectrumOutOfRange.
ErasureProjector fixed_point_projector(const Superoperator& s, double eig_tol = tol::eig);

/// devectorize(projector * vec(M)).
CMatrix apply_erasure(const ErasureProjector& p, const CMatrix& m);

}  // namespace quansal
