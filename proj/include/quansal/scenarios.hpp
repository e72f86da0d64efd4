#pragma once

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "quansal/models.hpp"

namespace quansal {

/// Deterministic Gaussian stream: mt19937_64 uniforms mapped through
/// Box-Muller. The algorithm is pinned here (not delegated to
/// std::normal_distribution) so recorded fixtures are reproducible across
/// standard libraries.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    double normal();
    Complex complex_normal();

private:
    double uniform_open();  // (0, 1]

    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// Parameters for one reproducible fixture. The seed fully determines the
/// output bytes.
struct GeneratorSpec {
    enum class Kind { TensorEmbedded, BlockSum, Chsh, RandomPovm };

    Kind kind = Kind::Chsh;
    Eigen::Index dim_a = 2;
    Eigen::Index dim_b = 2;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks;  // block_sum only
    std::vector<double> weights;                                // block_sum only
    Scenario scenario;
    std::uint64_t seed = 0;
};

/// Random tensor model on dim_a (x) dim_b embedded as a commuting model:
/// Wishart-normalized state, unitary-rotated projective measurements
/// partitioned to the scenario's outcome counts, E -> E (x) id, F -> id (x) F.
CommutingModel gen_tensor_embedded(Eigen::Index dim_a, Eigen::Index dim_b,
                                   const Scenario& scenario, std::uint64_t seed);

/// Direct sum of tensor-embedded blocks with the given weights. The result
/// commutes globally but the full space is not a single tensor product of
/// the stored factors; zero weights produce rank-deficient states downstream.
CommutingModel gen_block_sum(const std::vector<std::pair<Eigen::Index, Eigen::Index>>& blocks,
                             const std::vector<double>& weights, const Scenario& scenario,
                             std::uint64_t seed);

/// Two-qubit maximally entangled state; Alice measures Z, X and Bob the
/// (Z+X)/sqrt2 and (Z-X)/sqrt2 eigenbases. CHSH value 2*sqrt(2).
TensorModel gen_chsh();

/// Like gen_tensor_embedded but with genuinely non-projective POVMs
/// (Wishart blocks renormalized by S^{-1/2} . S^{-1/2}).
CommutingModel gen_random_povm(Eigen::Index dim_a, Eigen::Index dim_b,
                               const Scenario& scenario, std::uint64_t seed);

std::variant<CommutingModel, TensorModel> generate(const GeneratorSpec& spec);

/// Deliberately naive nested-loop evaluation of tr(rho E^x_a F^y_b),
/// independent of behavior_of_commuting's code path. Oracle of record for
/// the derived test values.
Behavior brute_force_behavior(const CommutingModel& m);

}  // namespace quansal
