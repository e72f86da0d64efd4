#pragma once

#include "quansal/models.hpp"

namespace quansal {

/// Dichotomic observables U_x = E^x_1 - E^x_2 of a two-setting/two-outcome
/// projective Alice scenario. Each U_x is Hermitian with U_x^2 = id.
struct DichotomicPair {
    CMatrix u1;
    CMatrix u2;
    Eigen::Index dim = 0;
};

/// Finite-N stand-in for the eraser: Cesaro-averaged states sigma^x_a(N)
/// together with the behavior P_N they generate.
struct CesaroApproximant {
    int n = 0;
    std::vector<std::vector<CMatrix>> sigma_family;  // [x][a], x in {0,1}
    std::vector<std::vector<double>> reference_qa;   // q(a|x)
    Behavior behavior_n;
};

DichotomicPair dichotomic_observables(const CommutingModel& m);

/// Cesaro mean (1/(N+1)) sum_{k=0}^{N} W^k M (W^dagger)^k with W = U1 U2.
CMatrix gamma1(const DichotomicPair& p, int n, const CMatrix& m);

/// gamma1 applied to U1 M U1.
CMatrix gamma2(const DichotomicPair& p, int n, const CMatrix& m);

/// Frobenius residual of the exact interchange identity
///   Gamma1(Omega1(rho)) + c W^{N+1}(rho) = Gamma2(Omega2(rho)) + c rho,
/// with c = 1/(2(N+1)) and W^{N+1}(rho) the (N+1)-fold U1U2 conjugation.
/// The identity is exact algebra, so the residual is roundoff-sized for any
/// valid input.
double cesaro_identity_residual(const DichotomicPair& p, int n, const CMatrix& rho);

/// Approximate quansal family at truncation N for a reference 1-partite
/// behavior q(a|x):
///   sigma^1_a(N) = a_N Gamma1(rho^1_a) + q(a|1) (b_N/2) (W^{N+1}(rho) + rho)
///   sigma^2_a(N) = a_N Gamma2(rho^2_a) + q(a|2)  b_N   rho
/// with a_N = (N+1)/(N+2), b_N = 1/(N+2). The symmetrized setting-1 noise
/// term makes the family exactly quansal while keeping the behavior equal to
/// the closed-form P_N mixture.
CesaroApproximant approximant(const CommutingModel& m,
                              const std::vector<std::vector<double>>& qa, int n);

/// Closed form P_N = ((N+1)/(N+2)) P + (1/(N+2)) q(a|x) p(b|y).
Behavior approx_behavior(const Behavior& p, const std::vector<std::vector<double>>& qa,
                         const std::vector<std::vector<double>>& pb, int n);

/// Noise rate for the two/three-outcome Alice scenario:
/// p_N = (1 + 3/(N+1)) / (7 + 3/(N+1)), decreasing to 1/7.
double noise_rate_23(int n);

/// (1 - p_N) P + p_N q(a|x) p(b|y) for the 2/3-outcome Alice scenario.
Behavior noisy_behavior_23(const Behavior& p, const std::vector<std::vector<double>>& qa,
                           const std::vector<std::vector<double>>& pb, int n);

/// One row of the truncation sweep emitted by the CLI.
struct CesaroSweepRow {
    int n = 0;
    double quansality_residual = 0.0;  // pairwise trace-norm gap of the sums
    double identity_residual = 0.0;    // cesaro_identity_residual at this N
    double pn_distance = 0.0;          // ||P_N - P||_inf
    double scaled_distance = 0.0;      // (N+2) * ||P_N - P||_inf
};

/// Evaluates the approximant at each N. Rows are computed independently
/// (optionally across `workers` threads) and always returned in input order,
/// so the output is identical for any worker count.
std::vector<CesaroSweepRow> cesaro_sweep(const CommutingModel& m,
                                         const std::vector<std::vector<double>>& qa,
                                         const std::vector<int>& n_list, int workers = 1);

/// Fixed CSV layout (v1): header plus one row per N, %.17g doubles.
std::string sweep_to_csv(const std::vector<CesaroSweepRow>& rows);

}  // namespace quansal
