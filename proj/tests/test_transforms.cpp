#include <cmath>

#include "doctest.h"
#include "quansal/scenarios.hpp"
#include "quansal/transforms.hpp"
#include "test_support.hpp"

using namespace quansal;
using testing::chsh_value;
using testing::rand_density;

namespace {

CommutingModel chsh_commuting() { return embed_tensor(gen_chsh()); }

/// Independent partial trace over A, index arithmetic only.
CMatrix naive_partial_trace_a(const CMatrix& m, Eigen::Index da, Eigen::Index db) {
    CMatrix out = CMatrix::Zero(db, db);
    for (Eigen::Index k = 0; k < db; ++k)
        for (Eigen::Index l = 0; l < db; ++l)
            for (Eigen::Index i = 0; i < da; ++i) out(k, l) += m(i * db + k, i * db + l);
    return out;
}

}  // namespace

TEST_CASE("post-measurement states of an eigenstate collapse to it") {
    // rho is the projector onto the first basis vector; Alice measures Z-like.
    CommutingModel m;
    m.dim = 2;
    CMatrix e0 = CMatrix::Zero(2, 2), e1 = CMatrix::Zero(2, 2);
    e0(0, 0) = 1.0;
    e1(1, 1) = 1.0;
    m.rho = e0;
    Measurement z;
    z.kind = MeasurementKind::Projective;
    z.operators = {e0, e1};
    m.alice = {z};
    Measurement f;
    f.kind = MeasurementKind::Projective;
    f.operators = {CMatrix::Identity(2, 2)};
    m.bob = {f};

    const auto fam = post_measurement_states(m, ChannelMode::Projective);
    CHECK((fam.rho_xa[0][0] - m.rho).norm() <= 1e-14);
    CHECK(fam.rho_xa[0][1].norm() <= 1e-14);
}

TEST_CASE("maximally mixed post-measurement states are the projectors over dim") {
    CommutingModel m = chsh_commuting();
    m.rho = CMatrix::Identity(4, 4) / 4.0;
    const auto fam = post_measurement_states(m, ChannelMode::Projective);
    for (size_t x = 0; x < m.alice.size(); ++x) {
        for (int a = 0; a < m.alice[x].outcomes(); ++a) {
            CHECK((fam.rho_xa[x][a] - m.alice[x].operators[a] / 4.0).norm() <= 1e-12);
        }
    }
}

TEST_CASE("post-measurement statistics reproduce the behavior for Bob") {
    const CommutingModel m = chsh_commuting();
    const Behavior p = brute_force_behavior(m);
    const auto fam = post_measurement_states(m, ChannelMode::Projective);
    for (size_t x = 0; x < m.alice.size(); ++x)
        for (size_t y = 0; y < m.bob.size(); ++y)
            for (int a = 0; a < m.alice[x].outcomes(); ++a)
                for (int b = 0; b < m.bob[y].outcomes(); ++b) {
                    const double val =
                        (fam.rho_xa[x][a] * m.bob[y].operators[b]).trace().real();
                    CHECK(std::abs(val - p.at(x, y, a, b)) <= 1e-10);
                }
}

TEST_CASE("quansalize on a CHSH embedding reproduces the CHSH behavior") {
    const CommutingModel m = chsh_commuting();
    const Behavior before = behavior_of_commuting(m);
    const QuansalModel q = quansalize(m);
    CHECK(validate_quansal(q, 1e-8).pass);
    CHECK(linf_distance(behavior_of_quansal(q), before) <= 1e-9);
}

TEST_CASE("quansalize a product model yields an x-independent family by construction") {
    GaussianStream rng(51);
    Scenario s{{2, 2}, {2}};
    CommutingModel m = gen_tensor_embedded(2, 2, s, 301);
    m.rho = kron(rand_density(rng, 2), rand_density(rng, 2));
    const QuansalModel q = quansalize(m);
    const Behavior p = behavior_of_commuting(m);
    CHECK(validate_quansal(q, 1e-9).pass);
    // sigma^x_a carries P(a|x) as its trace.
    for (size_t x = 0; x < q.sigma_family.size(); ++x)
        for (size_t a = 0; a < q.sigma_family[x].size(); ++a)
            CHECK(std::abs(q.sigma_family[x][a].trace().real() -
                           p.alice_marginal(static_cast<int>(x), static_cast<int>(a))) <= 1e-10);
}

TEST_CASE("quansalize with a single Alice setting is trivially quansal") {
    Scenario s{{3}, {2, 2}};
    const CommutingModel m = gen_tensor_embedded(3, 2, s, 302);
    const QuansalModel q = quansalize(m);
    CHECK(validate_quansal(q, 1e-9).pass);
    CHECK(linf_distance(behavior_of_quansal(q), behavior_of_commuting(m)) <= 1e-9);
}

TEST_CASE("tensorize collapses to the algebraic answer for proportional families") {
    const Eigen::Index d = 3;
    const CMatrix sigma = CMatrix::Identity(d, d) / static_cast<double>(d);
    QuansalModel q;
    q.dim_b = d;
    const std::vector<std::vector<double>> pa{{0.25, 0.75}, {0.6, 0.4}};
    for (const auto& dist : pa) {
        std::vector<CMatrix> row;
        for (double w : dist) row.push_back(w * sigma);
        q.sigma_family.push_back(row);
    }
    q.sigma = sigma;
    Measurement f;
    f.kind = MeasurementKind::Projective;
    CMatrix basis = CMatrix::Identity(d, d);
    for (int b = 0; b < d; ++b) f.operators.push_back(basis.col(b) * basis.col(b).adjoint());
    q.bob = {f};

    const TensorModel t = tensorize(q);
    for (size_t x = 0; x < pa.size(); ++x)
        for (size_t a = 0; a < pa[x].size(); ++a)
            CHECK((t.alice[x].operators[a] - pa[x][a] * CMatrix::Identity(d, d)).norm() <=
                  1e-10);

    // |phi_sigma> is the maximally entangled state when sigma = I/d.
    CMatrix expected = CMatrix::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            expected(i * d + i, j * d + j) = 1.0 / static_cast<double>(d);
    CHECK((t.rho_ab - expected).norm() <= 1e-10);
}

TEST_CASE("quansalized CHSH tensorizes back to the 2*sqrt(2) point") {
    const CommutingModel m = chsh_commuting();
    const TensorModel t = tensorize(quansalize(m));
    CHECK(validate_tensor(t, 1e-8).pass);
    const Behavior p = behavior_of_tensor(t);
    CHECK(chsh_value(p) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-8));
    CHECK(linf_distance(p, behavior_of_commuting(m)) <= 1e-8);
}

TEST_CASE("rank-deficient sigma still yields exactly complete Alice POVMs") {
    Scenario s{{2, 2}, {2, 2}};
    const CommutingModel m =
        gen_block_sum({{2, 2}, {2, 2}}, {1.0, 0.0}, s, 303);
    const QuansalModel q = quansalize(m);

    // The dead block makes sigma singular.
    const auto spec = hermitian_eig(q.mean_sigma()).eigenvalues;
    CHECK(spec.minCoeff() <= 1e-12);

    const TensorModel t = tensorize(q);
    for (const auto& meas : t.alice) {
        CMatrix sum = CMatrix::Zero(t.dim_a, t.dim_a);
        for (const auto& op : meas.operators) sum += op;
        CHECK((sum - CMatrix::Identity(t.dim_a, t.dim_a)).norm() <= 1e-10);
    }
    CHECK(linf_distance(behavior_of_tensor(t), behavior_of_commuting(m)) <= 1e-8);
}

TEST_CASE("quansal_of_tensor on a product state scales rho_B") {
    GaussianStream rng(52);
    TensorModel t = gen_chsh();
    const CMatrix rho_a = rand_density(rng, 2);
    const CMatrix rho_b = rand_density(rng, 2);
    t.rho_ab = kron(rho_a, rho_b);
    const QuansalModel q = quansal_of_tensor(t);
    for (size_t x = 0; x < t.alice.size(); ++x) {
        for (size_t a = 0; a < q.sigma_family[x].size(); ++a) {
            const double pa = (t.alice[x].operators[a] * rho_a).trace().real();
            CHECK((q.sigma_family[x][a] - pa * rho_b).norm() <= 1e-11);
        }
    }
}

TEST_CASE("quansal_of_tensor on the singlet with Z flips the conditional states") {
    TensorModel t = gen_chsh();
    CVector singlet(4);
    singlet << 0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0;
    t.rho_ab = singlet * singlet.adjoint();
    const QuansalModel q = quansal_of_tensor(t);

    // Alice setting 0 measures Z; outcome +1 leaves Bob in |1><1| / 2.
    CMatrix e1 = CMatrix::Zero(2, 2), e0 = CMatrix::Zero(2, 2);
    e0(0, 0) = 1.0;
    e1(1, 1) = 1.0;
    CHECK((q.sigma_family[0][0] - 0.5 * e1).norm() <= 1e-12);
    CHECK((q.sigma_family[0][1] - 0.5 * e0).norm() <= 1e-12);

    // Cross-check the partial trace against the naive loop.
    const CMatrix direct = naive_partial_trace_a(
        t.rho_ab * kron(t.alice[0].operators[0], CMatrix::Identity(2, 2)), 2, 2);
    CHECK((q.sigma_family[0][0] - hermitize(direct)).norm() <= 1e-13);
}

TEST_CASE("behavior round trip tensor -> quansal is exact to roundoff") {
    const TensorModel chsh = gen_chsh();
    CHECK(linf_distance(behavior_of_quansal(quansal_of_tensor(chsh)),
                        behavior_of_tensor(chsh)) <= 1e-11);
}

TEST_CASE("commuting_to_tensor preserves behaviors end to end") {
    SUBCASE("tensor-embedded random model") {
        Scenario s{{2, 2}, {2, 2}};
        const CommutingModel m = gen_tensor_embedded(2, 3, s, 305);
        const TensorModel t = commuting_to_tensor(m);
        CHECK(linf_distance(behavior_of_tensor(t), behavior_of_commuting(m)) <= 1e-8);
    }
    SUBCASE("block-direct-sum model (not tensor-factored)") {
        Scenario s{{2, 2}, {2}};
        const CommutingModel m = gen_block_sum({{2, 2}, {3, 2}}, {0.5, 0.5}, s, 306);
        const TensorModel t = commuting_to_tensor(m);
        CHECK(linf_distance(behavior_of_tensor(t), behavior_of_commuting(m)) <= 1e-8);
    }
    SUBCASE("trivial single-setting single-outcome model") {
        CommutingModel m;
        m.dim = 1;
        m.rho = CMatrix::Identity(1, 1);
        Measurement id;
        id.kind = MeasurementKind::Projective;
        id.operators = {CMatrix::Identity(1, 1)};
        m.alice = {id};
        m.bob = {id};
        const TensorModel t = commuting_to_tensor(m);
        CHECK(behavior_of_tensor(t).at(0, 0, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("sqrt and projective modes agree on projective inputs") {
    const CommutingModel m = chsh_commuting();
    const QuansalModel qp = quansalize(m, ChannelMode::Projective);
    const QuansalModel qs = quansalize(m, ChannelMode::Sqrt);
    for (size_t x = 0; x < qp.sigma_family.size(); ++x)
        for (size_t a = 0; a < qp.sigma_family[x].size(); ++a)
            CHECK((qp.sigma_family[x][a] - qs.sigma_family[x][a]).norm() <= 1e-10);
}

TEST_CASE("quansalize works in sqrt mode on genuinely POVM models") {
    Scenario s{{2, 2}, {2}};
    const CommutingModel m = gen_random_povm(2, 2, s, 307);
    CHECK_THROWS_AS(quansalize(m, ChannelMode::Projective), ModeMismatch);
    const QuansalModel q = quansalize(m, ChannelMode::Sqrt);
    CHECK(validate_quansal(q, 1e-8).pass);
    CHECK(linf_distance(behavior_of_quansal(q), behavior_of_commuting(m)) <= 1e-8);
    const TensorModel t = tensorize(q);
    CHECK(linf_distance(behavior_of_tensor(t), behavior_of_commuting(m)) <= 1e-8);
}

TEST_CASE("purification state invariants: rank one, trace one, Hermitian") {
    Scenario s{{2, 2}, {2, 2}};
    const CommutingModel m = gen_tensor_embedded(2, 2, s, 308);
    const TensorModel t = commuting_to_tensor(m);
    CHECK((t.rho_ab - t.rho_ab.adjoint()).norm() <= 1e-12);
    CHECK(std::abs(t.rho_ab.trace().real() - 1.0) <= 1e-10);
    const auto lam = hermitian_eig(t.rho_ab).eigenvalues;
    CHECK(lam[0] == doctest::Approx(1.0).epsilon(1e-9));
    for (Eigen::Index i = 1; i < lam.size(); ++i) CHECK(std::abs(lam[i]) <= 1e-10);
}

TEST_CASE("tensorize couples the transpose basis to the purification basis") {
    // A quansal model with genuinely complex sigma; any basis mismatch between
    // the [.]^T of the Alice operators and |phi_sigma> breaks the behavior.
    Scenario s{{2, 2}, {2, 2}};
    const CommutingModel m = gen_tensor_embedded(3, 3, s, 309);
    const QuansalModel q = quansalize(m);
    const double offdiag_imag = std::abs(q.mean_sigma()(0, 1).imag());
    CHECK(offdiag_imag > 1e-6);  // the instance is genuinely complex
    const TensorModel t = tensorize(q);
    CHECK(linf_distance(behavior_of_tensor(t), behavior_of_quansal(q)) <= 1e-8);
}

TEST_CASE("idempotence: quansalize of the embedded tensorization round trips") {
    Scenario s{{2, 2}, {2, 2}};
    const CommutingModel m = gen_tensor_embedded(2, 2, s, 310);
    const QuansalModel q = quansalize(m);
    const TensorModel t = tensorize(q);
    // The tensorized Alice operators are POVM elements, so the re-embedded
    // model goes through the sqrt-Kraus channel.
    const QuansalModel q2 = quansalize(embed_tensor(t), ChannelMode::Sqrt);
    CHECK(linf_distance(behavior_of_quansal(q2), behavior_of_quansal(q)) <= 1e-8);
}
