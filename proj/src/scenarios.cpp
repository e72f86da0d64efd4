#include "quansal/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace quansal {

double GaussianStream::uniform_open() {
    // 53-bit mantissa draw in [0,1), flipped to (0,1] so log() is safe.
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return 1.0 - u;
}

double GaussianStream::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
}

Complex GaussianStream::complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
}

namespace {

CMatrix gaussian_matrix(GaussianStream& rng, Eigen::Index rows, Eigen::Index cols) {
    CMatrix g(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
    return g;
}

/// G G^dagger / tr(G G^dagger); full rank almost surely.
CMatrix random_state(GaussianStream& rng, Eigen::Index dim) {
    const CMatrix g = gaussian_matrix(rng, dim, dim);
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return hermitize(rho);
}

/// QR-orthonormalized Gaussian with the R-diagonal phases absorbed, so the
/// draw depends only on the stream.
CMatrix random_unitary(GaussianStream& rng, Eigen::Index dim) {
    const CMatrix g = gaussian_matrix(rng, dim, dim);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= (a > 0.0 ? d / a : Complex(1.0, 0.0));
    }
    return q;
}

std::vector<int> partition_counts(Eigen::Index dim, int outcomes) {
    if (outcomes > dim) {
        std::ostringstream os;
        os << "cannot split dimension " << dim << " into " << outcomes
           << " nonempty projective outcomes";
        throw ScenarioMismatch(os.str());
    }
    std::vector<int> counts(outcomes, static_cast<int>(dim / outcomes));
    for (int i = 0; i < static_cast<int>(dim % outcomes); ++i) counts[i] += 1;
    return counts;
}

/// Rotated computational projectors grouped to the outcome counts.
Measurement random_projective(GaussianStream& rng, Eigen::Index dim, int outcomes) {
    const CMatrix u = random_unitary(rng, dim);
    const auto counts = partition_counts(dim, outcomes);
    Measurement meas;
    meas.kind = MeasurementKind::Projective;
    Eigen::Index col = 0;
    for (int a = 0; a < outcomes; ++a) {
        const CMatrix block = u.middleCols(col, counts[a]);
        meas.operators.push_back(hermitize(block * block.adjoint()));
        col += counts[a];
    }
    return meas;
}

Measurement random_povm(GaussianStream& rng, Eigen::Index dim, int outcomes) {
    std::vector<CMatrix> parts;
    CMatrix total = CMatrix::Zero(dim, dim);
    for (int a = 0; a < outcomes; ++a) {
        const CMatrix g = gaussian_matrix(rng, dim, dim);
        parts.push_back(hermitize(g * g.adjoint()));
        total += parts.back();
    }
    const CMatrix s = psd_pinv_sqrt(total).inverse_sqrt;
    Measurement meas;
    meas.kind = MeasurementKind::Povm;
    CMatrix sum = CMatrix::Zero(dim, dim);
    for (int a = 0; a < outcomes; ++a) {
        CMatrix e = hermitize(s * parts[a] * s);
        if (a + 1 < outcomes) {
            sum += e;
        } else {
            e = hermitize(CMatrix::Identity(dim, dim) - sum);  // exact completeness
        }
        meas.operators.push_back(std::move(e));
    }
    return meas;
}

struct TensorPieces {
    CMatrix rho;
    std::vector<Measurement> alice;
    std::vector<Measurement> bob;
};

TensorPieces draw_tensor_pieces(GaussianStream& rng, Eigen::Index dim_a, Eigen::Index dim_b,
                                const Scenario& scenario, bool povm) {
    TensorPieces p;
    p.rho = random_state(rng, dim_a * dim_b);
    for (int oc : scenario.outcomes_a) {
        p.alice.push_back(povm ? random_povm(rng, dim_a, oc) : random_projective(rng, dim_a, oc));
    }
    for (int oc : scenario.outcomes_b) {
        p.bob.push_back(povm ? random_povm(rng, dim_b, oc) : random_projective(rng, dim_b, oc));
    }
    return p;
}

CommutingModel embed_pieces(const TensorPieces& p, Eigen::Index dim_a, Eigen::Index dim_b) {
    TensorModel t;
    t.dim_a = dim_a;
    t.dim_b = dim_b;
    t.rho_ab = p.rho;
    t.alice = p.alice;
    t.bob = p.bob;
    return embed_tensor(t);
}

CMatrix direct_sum(const std::vector<CMatrix>& blocks) {
    Eigen::Index total = 0;
    for (const auto& b : blocks) total += b.rows();
    CMatrix out = CMatrix::Zero(total, total);
    Eigen::Index off = 0;
    for (const auto& b : blocks) {
        out.block(off, off, b.rows(), b.cols()) = b;
        off += b.rows();
    }
    return out;
}

}  // namespace

CommutingModel gen_tensor_embedded(Eigen::Index dim_a, Eigen::Index dim_b,
                                   const Scenario& scenario, std::uint64_t seed) {
    GaussianStream rng(seed);
    return embed_pieces(draw_tensor_pieces(rng, dim_a, dim_b, scenario, false), dim_a, dim_b);
}

CommutingModel gen_random_povm(Eigen::Index dim_a, Eigen::Index dim_b,
                               const Scenario& scenario, std::uint64_t seed) {
    GaussianStream rng(seed);
    return embed_pieces(draw_tensor_pieces(rng, dim_a, dim_b, scenario, true), dim_a, dim_b);
}

CommutingModel gen_block_sum(const std::vector<std::pair<Eigen::Index, Eigen::Index>>& blocks,
                             const std::vector<double>& weights, const Scenario& scenario,
                             std::uint64_t seed) {
    if (blocks.empty()) throw EmptyList("gen_block_sum: no blocks");
    if (blocks.size() != weights.size()) {
        throw DimensionMismatch("gen_block_sum: blocks and weights differ in length");
    }
    double wsum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw NotNormalized("gen_block_sum: negative weight");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > tol::validation) {
        throw NotNormalized("gen_block_sum: weights do not sum to 1");
    }

    GaussianStream rng(seed);
    std::vector<CMatrix> rho_blocks;
    // Per block, per setting: embedded operators to be direct-summed.
    std::vector<std::vector<std::vector<CMatrix>>> alice_ops(blocks.size());
    std::vector<std::vector<std::vector<CMatrix>>> bob_ops(blocks.size());

    for (size_t i = 0; i < blocks.size(); ++i) {
        const auto [da, db] = blocks[i];
        const TensorPieces p = draw_tensor_pieces(rng, da, db, scenario, false);
        const CommutingModel embedded = embed_pieces(p, da, db);
        rho_blocks.push_back(weights[i] * embedded.rho);
        for (const auto& meas : embedded.alice) alice_ops[i].push_back(meas.operators);
        for (const auto& meas : embedded.bob) bob_ops[i].push_back(meas.operators);
    }

    CommutingModel out;
    out.rho = direct_sum(rho_blocks);
    out.dim = out.rho.rows();
    for (int x = 0; x < scenario.settings_a(); ++x) {
        Measurement meas;
        meas.kind = MeasurementKind::Projective;
        for (int a = 0; a < scenario.outcomes_a[x]; ++a) {
            std::vector<CMatrix> per_block;
            for (size_t i = 0; i < blocks.size(); ++i) per_block.push_back(alice_ops[i][x][a]);
            meas.operators.push_back(direct_sum(per_block));
        }
        out.alice.push_back(std::move(meas));
    }
    for (int y = 0; y < scenario.settings_b(); ++y) {
        Measurement meas;
        meas.kind = MeasurementKind::Projective;
        for (int b = 0; b < scenario.outcomes_b[y]; ++b) {
            std::vector<CMatrix> per_block;
            for (size_t i = 0; i < blocks.size(); ++i) per_block.push_back(bob_ops[i][y][b]);
            meas.operators.push_back(direct_sum(per_block));
        }
        out.bob.push_back(std::move(meas));
    }
    return out;
}

TensorModel gen_chsh() {
    const double s = 1.0 / std::numbers::sqrt2;
    CMatrix pauli_z(2, 2), pauli_x(2, 2), id = CMatrix::Identity(2, 2);
    pauli_z << 1, 0, 0, -1;
    pauli_x << 0, 1, 1, 0;

    const auto projectors = [&](const CMatrix& observable) {
        Measurement m;
        m.kind = MeasurementKind::Projective;
        m.operators.push_back(hermitize(0.5 * (id + observable)));
        m.operators.push_back(hermitize(0.5 * (id - observable)));
        return m;
    };

    TensorModel t;
    t.dim_a = 2;
    t.dim_b = 2;
    CVector phi(4);
    phi << s, 0, 0, s;  // (|00> + |11>)/sqrt2
    t.rho_ab = phi * phi.adjoint();
    t.alice.push_back(projectors(pauli_z));
    t.alice.push_back(projectors(pauli_x));
    t.bob.push_back(projectors(s * (pauli_z + pauli_x)));
    t.bob.push_back(projectors(s * (pauli_z - pauli_x)));
    return t;
}

std::variant<CommutingModel, TensorModel> generate(const GeneratorSpec& spec) {
    switch (spec.kind) {
        case GeneratorSpec::Kind::TensorEmbedded:
            return gen_tensor_embedded(spec.dim_a, spec.dim_b, spec.scenario, spec.seed);
        case GeneratorSpec::Kind::BlockSum:
            return gen_block_sum(spec.blocks, spec.weights, spec.scenario, spec.seed);
        case GeneratorSpec::Kind::RandomPovm:
            return gen_random_povm(spec.dim_a, spec.dim_b, spec.scenario, spec.seed);
        case GeneratorSpec::Kind::Chsh:
            return gen_chsh();
    }
    throw Error("generate: unknown kind");
}

Behavior brute_force_behavior(const CommutingModel& m) {
    auto rep = validate_commuting(m);
    if (!rep.pass) {
        throw InvalidModel("brute_force_behavior: model fails validation (max residual " +
                           std::to_string(rep.max_residual()) + ")");
    }

    const Eigen::Index d = m.dim;
    Behavior p = Behavior::zeros(m.scenario());
    for (size_t x = 0; x < m.alice.size(); ++x) {
        for (size_t y = 0; y < m.bob.size(); ++y) {
            for (int a = 0; a < m.alice[x].outcomes(); ++a) {
                for (int b = 0; b < m.bob[y].outcomes(); ++b) {
                    const CMatrix& e = m.alice[x].operators[a];
                    const CMatrix& f = m.bob[y].operators[b];
                    // tr(rho E F) by raw index loops.
                    Complex acc = 0.0;
                    for (Eigen::Index i = 0; i < d; ++i)
                        for (Eigen::Index j = 0; j < d; ++j)
                            for (Eigen::Index k = 0; k < d; ++k)
                                acc += m.rho(i, j) * e(j, k) * f(k, i);
                    p.table[x][y][a][b] = acc.real();
                }
            }
        }
    }
    return p;
}

}  // namespace quansal
