#pragma once

#include "quansal/eraser.hpp"
#include "quansal/models.hpp"

namespace quansal {

/// Lueders post-measurement states rho^x_a = K rho K with K = E (projective)
/// or sqrt(E) (sqrt mode), unnormalized.
struct PostMeasurementFamily {
    std::vector<std::vector<CMatrix>> rho_xa;  // [x][a]
};

struct TransformTolerances {
    double eig_tol = tol::eig;
    double rank_tol = tol::rank;
};

PostMeasurementFamily post_measurement_states(const CommutingModel& m, ChannelMode mode);

/// quansalize together with the erasure projector it was built from, so
/// callers can report the spectrum.
struct QuansalizeOutcome {
    QuansalModel model;
    ErasureProjector eraser;
};

QuansalizeOutcome quansalize_full(const CommutingModel& m,
                                  ChannelMode mode = ChannelMode::Projective,
                                  double eig_tol = tol::eig);

/// Erase Alice's setting mark from the post-measurement family:
/// sigma^x_a = Omega^inf(K^x_a rho K^x_a) with Bob carried over unchanged.
QuansalModel quansalize(const CommutingModel& m, ChannelMode mode = ChannelMode::Projective,
                        double eig_tol = tol::eig);

/// Explicit tensor model from a quansal one: Alice operators
/// [sigma^{-1/2} sigma^x_a sigma^{-1/2}]^T completed on the support
/// complement, state |phi_sigma><phi_sigma| with
/// |phi_sigma> = sum_j |j> (x) sigma^{1/2}|j>.
TensorModel tensorize(const QuansalModel& q, double rank_tol = tol::rank);

/// sigma^x_a = tr_A(rho_AB (E^x_a (x) id_B)).
QuansalModel quansal_of_tensor(const TensorModel& m);

/// tensorize(quansalize(m)): full commuting -> tensor pipeline.
TensorModel commuting_to_tensor(const CommutingModel& m,
                                ChannelMode mode = ChannelMode::Projective,
                                TransformTolerances tols = {});

}  // namespace quansal
