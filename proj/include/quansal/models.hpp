#pragma once

#include <string>
#include <vector>

#include "quansal/matkernel.hpp"
#include "quansal/report.hpp"

namespace quansal {

/// Finite measurement scenario: outcome counts per setting for each party.
/// Outcome counts may differ between settings (ragged tables downstream).
struct Scenario {
    std::vector<int> outcomes_a;
    std::vector<int> outcomes_b;

    int settings_a() const { return static_cast<int>(outcomes_a.size()); }
    int settings_b() const { return static_cast<int>(outcomes_b.size()); }

    bool operator==(const Scenario&) const = default;
};

/// Conditional probability table P(a,b|x,y), indexed [x][y][a][b].
struct Behavior {
    Scenario scenario;
    std::vector<std::vector<std::vector<std::vector<double>>>> table;

    static Behavior zeros(const Scenario& s);

    double& at(int x, int y, int a, int b) { return table[x][y][a][b]; }
    double at(int x, int y, int a, int b) const { return table[x][y][a][b]; }

    /// P(b|y) computed from setting x of Alice (x-independent iff no-signaling).
    double bob_marginal(int y, int b, int x = 0) const;
    double alice_marginal(int x, int a, int y = 0) const;
};

/// Entrywise max-abs difference; throws ScenarioMismatch on shape mismatch.
double linf_distance(const Behavior& p, const Behavior& q);

/// Checks entries in [-tol, 1+tol] and per-(x,y) normalization.
ValidationReport validate_behavior(const Behavior& p, double tol = tol::validation);

enum class MeasurementKind { Projective, Povm };

/// One measurement: a positive operator per outcome summing to the identity.
struct Measurement {
    std::vector<CMatrix> operators;
    MeasurementKind kind = MeasurementKind::Projective;

    int outcomes() const { return static_cast<int>(operators.size()); }
    Eigen::Index dim() const { return operators.empty() ? 0 : operators[0].rows(); }
};

/// Single-space model with mutually commuting Alice/Bob operator families.
struct CommutingModel {
    Eigen::Index dim = 0;
    CMatrix rho;
    std::vector<Measurement> alice;
    std::vector<Measurement> bob;

    Scenario scenario() const;
};

/// Bipartite model: state on H_A (x) H_B with per-factor measurements.
struct TensorModel {
    Eigen::Index dim_a = 0;
    Eigen::Index dim_b = 0;
    CMatrix rho_ab;
    std::vector<Measurement> alice;
    std::vector<Measurement> bob;

    Scenario scenario() const;
};

/// Bob-side model: subnormalized states sigma^x_a whose per-setting sums
/// agree, plus Bob measurements on the same space.
struct QuansalModel {
    Eigen::Index dim_b = 0;
    std::vector<std::vector<CMatrix>> sigma_family;  // [x][a]
    std::vector<Measurement> bob;
    CMatrix sigma;  // common sum (stored; validators recompute the mean)

    Scenario scenario() const;
    /// Mean over x of sum_a sigma^x_a.
    CMatrix mean_sigma() const;
};

ValidationReport validate_commuting(const CommutingModel& m, double tol = tol::validation);
ValidationReport validate_tensor(const TensorModel& m, double tol = tol::validation);
ValidationReport validate_quansal(const QuansalModel& m, double tol = tol::validation);

Behavior behavior_of_commuting(const CommutingModel& m);
Behavior behavior_of_tensor(const TensorModel& m);
Behavior behavior_of_quansal(const QuansalModel& m);

NoSignalingReport check_no_signaling(const Behavior& p, double tol = tol::validation);

/// w*p + (1-w)*q, entrywise.
Behavior mix_behaviors(const Behavior& p, const Behavior& q, double w);

/// P(a,b|x,y) = qa[x][a] * pb[y][b]. Distributions must be normalized.
Behavior product_behavior(const std::vector<std::vector<double>>& qa,
                          const std::vector<std::vector<double>>& pb, const Scenario& s);

/// Canonical commuting embedding of a tensor model: E -> E(x)id, F -> id(x)F.
CommutingModel embed_tensor(const TensorModel& m);

}  // namespace quansal
