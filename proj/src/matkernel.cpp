#include "quansal/matkernel.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace quansal {

namespace {

void require_square(const CMatrix& m, const char* who) {
    if (m.rows() != m.cols()) {
        std::ostringstream os;
        os << who << ": matrix is " << m.rows() << "x" << m.cols() << ", expected square";
        throw DimensionMismatch(os.str());
    }
}

}  // namespace

CMatrix SpectralDecomposition::reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition hermitian_eig(const CMatrix& m, double tol) {
    require_square(m, "hermitian_eig");
    const double scale = m.norm();
    const double asym = (m - m.adjoint()).norm();
    if (asym > tol * std::max(scale, 1.0)) {
        std::ostringstream os;
        os << "hermitian_eig: input is not Hermitian, ||M - M^dagger||_F = " << asym;
        throw NonHermitian(os.str(), asym);
    }

    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitize(m));
    if (solver.info() != Eigen::Success) {
        throw Error("hermitian_eig: eigensolver failed to converge");
    }

    // Eigen sorts ascending; flip to descending.
    const Eigen::Index n = m.rows();
    SpectralDecomposition out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
    return out;
}

CMatrix psd_sqrt(const CMatrix& m, double tol) {
    auto eig = hermitian_eig(m, tol);
    RVector lam = eig.eigenvalues;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam[i] < -tol) {
            std::ostringstream os;
            os << "psd_sqrt: eigenvalue " << lam[i] << " below -" << tol;
            throw NotPSD(os.str(), lam[i]);
        }
        lam[i] = std::sqrt(std::max(lam[i], 0.0));
    }
    return hermitize(eig.eigenvectors * lam.asDiagonal() * eig.eigenvectors.adjoint());
}

PinvSqrt psd_pinv_sqrt(const CMatrix& m, double rank_tol) {
    auto eig = hermitian_eig(m);
    const double lam_max = eig.eigenvalues.size() > 0 ? eig.eigenvalues[0] : 0.0;
    // Absolute fallback keeps near-zero matrices from dividing by noise.
    const double cutoff = lam_max > 0.0 ? rank_tol * lam_max : rank_tol;

    PinvSqrt out;
    const Eigen::Index n = m.rows();
    RVector inv(n), sup(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double lam = eig.eigenvalues[i];
        if (lam < -cutoff) {
            std::ostringstream os;
            os << "psd_pinv_sqrt: eigenvalue " << lam << " below -" << cutoff;
            throw NotPSD(os.str(), lam);
        }
        if (lam > cutoff) {
            inv[i] = 1.0 / std::sqrt(lam);
            sup[i] = 1.0;
            ++out.rank;
        } else {
            inv[i] = 0.0;
            sup[i] = 0.0;
        }
    }
    out.inverse_sqrt = hermitize(eig.eigenvectors * inv.asDiagonal() * eig.eigenvectors.adjoint());
    out.support_projector =
        hermitize(eig.eigenvectors * sup.asDiagonal() * eig.eigenvectors.adjoint());
    return out;
}

CMatrix clamp_psd(const CMatrix& m, double tol) {
    auto eig = hermitian_eig(m, std::max(tol, tol::hermitian));
    RVector lam = eig.eigenvalues;
    bool touched = false;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam[i] < -tol) {
            std::ostringstream os;
            os << "clamp_psd: eigenvalue " << lam[i] << " below -" << tol;
            throw NotPSD(os.str(), lam[i]);
        }
        if (lam[i] < 0.0) {
            lam[i] = 0.0;
            touched = true;
        }
    }
    if (!touched) return hermitize(m);
    return hermitize(eig.eigenvectors * lam.asDiagonal() * eig.eigenvectors.adjoint());
}

CVector vectorize(const CMatrix& m) {
    CVector v(m.rows() * m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            v[i * m.cols() + j] = m(i, j);
        }
    }
    return v;
}

CMatrix devectorize(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
    if (v.size() != rows * cols) {
        std::ostringstream os;
        os << "devectorize: vector length " << v.size() << " != " << rows << "*" << cols;
        throw DimensionMismatch(os.str());
    }
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = v[i * cols + j];
        }
    }
    return m;
}

CMatrix devectorize(const CVector& v, Eigen::Index dim) {
    return devectorize(v, dim, dim);
}

CMatrix transpose_in_basis(const CMatrix& m) {
    return m.transpose();
}

double trace_norm(const CMatrix& m) {
    require_square(m, "trace_norm");
    if (m.rows() == 0) return 0.0;
    Eigen::BDCSVD<CMatrix> svd(m);
    return svd.singularValues().sum();
}

double frobenius_norm(const CMatrix& m) {
    return m.norm();
}

double commutator_norm(const CMatrix& a, const CMatrix& b) {
    require_square(a, "commutator_norm");
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch("commutator_norm: operands differ in dimension");
    }
    return (a * b - b * a).norm();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CMatrix hermitize(const CMatrix& m) {
    return 0.5 * (m + m.adjoint());
}

bool all_finite(const CMatrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
        }
    }
    return true;
}

}  // namespace quansal
