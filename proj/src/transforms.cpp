#include "quansal/transforms.hpp"

#include <sstream>

namespace quansal {

namespace {

// Sign-noise clamp for erased states (see eraser): eigenvalues in
// [-kErasedPsdTol, 0) are zeroed, anything lower is a hard error.
constexpr double kErasedPsdTol = 1e-8;

void require_valid_commuting(const CommutingModel& m) {
    auto rep = validate_commuting(m);
    if (!rep.pass) {
        for (const auto& c : rep.checks) {
            if (!c.pass) {
                std::ostringstream os;
                os << "commuting model invalid: " << c.name << " residual " << c.residual;
                throw InvalidModel(os.str());
            }
        }
    }
}

CMatrix partial_trace_a(const CMatrix& m, Eigen::Index dim_a, Eigen::Index dim_b) {
    CMatrix out = CMatrix::Zero(dim_b, dim_b);
    for (Eigen::Index k = 0; k < dim_b; ++k) {
        for (Eigen::Index l = 0; l < dim_b; ++l) {
            Complex acc = 0.0;
            for (Eigen::Index i = 0; i < dim_a; ++i) {
                acc += m(i * dim_b + k, i * dim_b + l);
            }
            out(k, l) = acc;
        }
    }
    return out;
}

}  // namespace

PostMeasurementFamily post_measurement_states(const CommutingModel& m, ChannelMode mode) {
    require_valid_commuting(m);
    PostMeasurementFamily fam;
    fam.rho_xa.reserve(m.alice.size());
    for (const auto& meas : m.alice) {
        const KrausChannel chan = measurement_channel(meas, mode);
        std::vector<CMatrix> row;
        row.reserve(chan.kraus.size());
        for (const auto& k : chan.kraus) {
            row.push_back(hermitize(k * m.rho * k));
        }
        fam.rho_xa.push_back(std::move(row));
    }
    return fam;
}

QuansalizeOutcome quansalize_full(const CommutingModel& m, ChannelMode mode, double eig_tol) {
    require_valid_commuting(m);
    if (m.alice.empty()) {
        throw InvalidModel("quansalize: model has no Alice measurements");
    }

    std::vector<KrausChannel> channels;
    channels.reserve(m.alice.size());
    for (const auto& meas : m.alice) channels.push_back(measurement_channel(meas, mode));

    QuansalizeOutcome out;
    out.eraser = fixed_point_projector(average_superoperator(channels), eig_tol);

    const PostMeasurementFamily fam = post_measurement_states(m, mode);
    out.model.dim_b = m.dim;
    out.model.bob = m.bob;
    out.model.sigma_family.reserve(fam.rho_xa.size());
    for (const auto& row : fam.rho_xa) {
        std::vector<CMatrix> erased;
        erased.reserve(row.size());
        for (const auto& rho_xa : row) {
            erased.push_back(clamp_psd(hermitize(apply_erasure(out.eraser, rho_xa)),
                                       kErasedPsdTol));
        }
        out.model.sigma_family.push_back(std::move(erased));
    }
    out.model.sigma = out.model.mean_sigma();
    return out;
}

QuansalModel quansalize(const CommutingModel& m, ChannelMode mode, double eig_tol) {
    return quansalize_full(m, mode, eig_tol).model;
}

TensorModel tensorize(const QuansalModel& q, double rank_tol) {
    auto rep = validate_quansal(q);
    if (!rep.pass) {
        std::ostringstream os;
        os << "tensorize: quansal model invalid (max residual " << rep.max_residual() << ")";
        throw InvalidModel(os.str());
    }

    const Eigen::Index d = q.dim_b;
    const CMatrix sigma = q.mean_sigma();
    const CMatrix sqrt_sigma = psd_sqrt(sigma);
    const PinvSqrt pinv = psd_pinv_sqrt(sigma, rank_tol);

    TensorModel out;
    out.dim_a = d;
    out.dim_b = d;
    out.bob = q.bob;

    // Alice operators live on the support of sigma; the deficiency
    // id - Pi^T is attached to the first outcome of every setting so the
    // POVMs are complete on the whole space. sigma^{1/2}(id - Pi) = 0, so
    // statistics are untouched.
    const CMatrix deficiency =
        CMatrix::Identity(d, d) - transpose_in_basis(pinv.support_projector);
    for (const auto& setting : q.sigma_family) {
        Measurement meas;
        meas.kind = MeasurementKind::Povm;
        for (size_t a = 0; a < setting.size(); ++a) {
            CMatrix e = transpose_in_basis(pinv.inverse_sqrt * setting[a] * pinv.inverse_sqrt);
            if (a == 0) e += deficiency;
            meas.operators.push_back(hermitize(e));
        }
        out.alice.push_back(std::move(meas));
    }

    const CVector phi = vectorize(transpose_in_basis(sqrt_sigma));
    out.rho_ab = phi * phi.adjoint();
    return out;
}

QuansalModel quansal_of_tensor(const TensorModel& m) {
    auto rep = validate_tensor(m);
    if (!rep.pass) {
        std::ostringstream os;
        os << "quansal_of_tensor: tensor model invalid (max residual " << rep.max_residual()
           << ")";
        throw InvalidModel(os.str());
    }

    QuansalModel out;
    out.dim_b = m.dim_b;
    out.bob = m.bob;
    const CMatrix id_b = CMatrix::Identity(m.dim_b, m.dim_b);
    for (const auto& meas : m.alice) {
        std::vector<CMatrix> row;
        row.reserve(meas.operators.size());
        for (const auto& e : meas.operators) {
            row.push_back(hermitize(partial_trace_a(m.rho_ab * kron(e, id_b), m.dim_a, m.dim_b)));
        }
        out.sigma_family.push_back(std::move(row));
    }
    out.sigma = out.mean_sigma();
    return out;
}

TensorModel commuting_to_tensor(const CommutingModel& m, ChannelMode mode,
                                TransformTolerances tols) {
    return tensorize(quansalize(m, mode, tols.eig_tol), tols.rank_tol);
}

}  // namespace quansal
