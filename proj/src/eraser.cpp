#include "quansal/eraser.hpp"

#include <cmath>
#include <sstream>

namespace quansal {

namespace {

constexpr double kKrausHermTol = 1e-10;
constexpr double kTracePreservingTol = 1e-10;

void require_hermitian_kraus(const KrausChannel& c, const char* who) {
    for (const auto& k : c.kraus) {
        const double asym = (k - k.adjoint()).norm();
        if (asym > kKrausHermTol * std::max(k.norm(), 1.0)) {
            std::ostringstream os;
            os << who << ": Kraus operator is not Hermitian, ||K - K^dagger||_F = " << asym;
            throw NonHermitianKraus(os.str());
        }
    }
}

}  // namespace

CMatrix KrausChannel::apply(const CMatrix& m) const {
    CMatrix out = CMatrix::Zero(dim, dim);
    for (const auto& k : kraus) out += k * m * k.adjoint();
    return out;
}

Eigen::Index Superoperator::dim() const {
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(matrix.rows()))));
    return d;
}

Eigen::Index ErasureProjector::rank() const {
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
        if (spectrum[i] >= 1.0 - eig_tol) ++r;
    }
    return r;
}

KrausChannel measurement_channel(const Measurement& m, ChannelMode mode) {
    if (mode == ChannelMode::Projective && m.kind != MeasurementKind::Projective) {
        throw ModeMismatch(
            "measurement_channel: projective mode requested for a non-projective POVM");
    }
    KrausChannel c;
    c.dim = m.dim();
    for (const auto& op : m.operators) {
        c.kraus.push_back(mode == ChannelMode::Projective ? hermitize(op) : psd_sqrt(op));
    }

    CMatrix sum = CMatrix::Zero(c.dim, c.dim);
    for (const auto& k : c.kraus) sum += k.adjoint() * k;
    const double residual = (sum - CMatrix::Identity(c.dim, c.dim)).norm();
    if (residual > kTracePreservingTol * std::max(1.0, std::sqrt(double(c.dim)))) {
        std::ostringstream os;
        os << "measurement_channel: channel is not trace preserving, residual " << residual;
        throw InvalidModel(os.str());
    }
    return c;
}

Superoperator superoperator_of(const KrausChannel& c) {
    require_hermitian_kraus(c, "superoperator_of");
    Superoperator s;
    s.matrix = CMatrix::Zero(c.dim * c.dim, c.dim * c.dim);
    for (const auto& k : c.kraus) {
        s.matrix += kron(k, transpose_in_basis(k));
    }
    return s;
}

Superoperator average_superoperator(const std::vector<KrausChannel>& channels) {
    if (channels.empty()) {
        throw EmptyList("average_superoperator: no channels given");
    }
    const Eigen::Index dim = channels[0].dim;
    for (const auto& c : channels) {
        if (c.dim != dim) {
            throw DimensionMismatch("average_superoperator: channels differ in dimension");
        }
    }
    Superoperator avg;
    avg.matrix = CMatrix::Zero(dim * dim, dim * dim);
    for (const auto& c : channels) avg.matrix += superoperator_of(c).matrix;
    avg.matrix /= static_cast<double>(channels.size());
    return avg;
}

ErasureProjector fixed_point_projector(const Superoperator& s, double eig_tol) {
    // hermitian_eig enforces the Hermiticity precondition and reports the
    // asymmetry magnitude on failure.
    auto eig = hermitian_eig(s.matrix, 1e-10);
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        const double lam = eig.eigenvalues[i];
        if (lam > 1.0 + eig_tol || lam < -eig_tol) {
            std::ostringstream os;
            os << "fixed_point_projector: eigenvalue " << lam << " outside [-" << eig_tol
               << ", 1+" << eig_tol << "]";
            throw SpectrumOutOfRange(os.str(), lam);
        }
    }

    ErasureProjector p;
    p.eig_tol = eig_tol;
    p.spectrum = eig.eigenvalues;
    p.dim = s.dim();
    const Eigen::Index n = s.matrix.rows();
    p.projector = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (eig.eigenvalues[i] >= 1.0 - eig_tol) {
            p.projector += eig.eigenvectors.col(i) * eig.eigenvectors.col(i).adjoint();
        }
    }
    p.projector = hermitize(p.projector);
    return p;
}

CMatrix apply_erasure(const ErasureProjector& p, const CMatrix& m) {
    if (m.rows() != p.dim || m.cols() != p.dim) {
        std::ostringstream os;
        os << "apply_erasure: matrix is " << m.rows() << "x" << m.cols()
           << ", projector expects dimension " << p.dim;
        throw DimensionMismatch(os.str());
    }
    return devectorize(p.projector * vectorize(m), p.dim);
}

}  // namespace quansal
