#include <cmath>

#include "doctest.h"
#include "quansal/eraser.hpp"
#include "quansal/scenarios.hpp"
#include "test_support.hpp"

using namespace quansal;
using testing::rand_density;
using testing::rand_gaussian;
using testing::rand_psd;

namespace {

Measurement qubit_z() {
    Measurement m;
    m.kind = MeasurementKind::Projective;
    CMatrix e0 = CMatrix::Zero(2, 2), e1 = CMatrix::Zero(2, 2);
    e0(0, 0) = 1.0;
    e1(1, 1) = 1.0;
    m.operators = {e0, e1};
    return m;
}

Measurement qubit_x() {
    Measurement m;
    m.kind = MeasurementKind::Projective;
    CMatrix plus(2, 2), minus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    minus << 0.5, -0.5, -0.5, 0.5;
    m.operators = {plus, minus};
    return m;
}

/// Overcomplete rank-1 POVM: 2d Gaussian vectors renormalized by the frame
/// operator, so sum_a E_a = id exactly up to roundoff.
Measurement rank1_povm(GaussianStream& rng, Eigen::Index dim) {
    std::vector<CVector> vecs;
    CMatrix frame = CMatrix::Zero(dim, dim);
    for (Eigen::Index a = 0; a < 2 * dim; ++a) {
        CVector g(dim);
        for (Eigen::Index i = 0; i < dim; ++i) g[i] = rng.complex_normal();
        vecs.push_back(g);
        frame += g * g.adjoint();
    }
    const CMatrix s = psd_pinv_sqrt(frame).inverse_sqrt;
    Measurement m;
    m.kind = MeasurementKind::Povm;
    for (const auto& g : vecs) {
        const CVector v = s * g;
        m.operators.push_back(v * v.adjoint());
    }
    return m;
}

}  // namespace

TEST_CASE("measurement_channel extracts projective Kraus operators") {
    const auto chan = measurement_channel(qubit_z(), ChannelMode::Projective);
    CHECK(chan.kraus.size() == 2);
    CHECK((chan.kraus[0] - qubit_z().operators[0]).norm() <= 1e-14);
    CHECK((chan.kraus[1] - qubit_z().operators[1]).norm() <= 1e-14);
}

TEST_CASE("sqrt mode of the trivial POVM {I/2, I/2} is the identity channel") {
    Measurement m;
    m.kind = MeasurementKind::Povm;
    m.operators = {0.5 * CMatrix::Identity(2, 2), 0.5 * CMatrix::Identity(2, 2)};
    const auto chan = measurement_channel(m, ChannelMode::Sqrt);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK((chan.kraus[0] - inv_sqrt2 * CMatrix::Identity(2, 2)).norm() <= 1e-13);
    GaussianStream rng(31);
    const CMatrix rho = rand_density(rng, 2);
    CHECK((chan.apply(rho) - rho).norm() <= 1e-13);

    CHECK_THROWS_AS(measurement_channel(m, ChannelMode::Projective), ModeMismatch);
}

TEST_CASE("sqrt mode of a random rank-1 POVM preserves traces") {
    GaussianStream rng(32);
    const Measurement m = rank1_povm(rng, 4);
    const auto chan = measurement_channel(m, ChannelMode::Sqrt);
    for (int trial = 0; trial < 5; ++trial) {
        const CMatrix rho = rand_density(rng, 4);
        CHECK(std::abs(chan.apply(rho).trace().real() - 1.0) <= 1e-11);
    }
}

TEST_CASE("superoperator_of the identity channel is the identity matrix") {
    KrausChannel c;
    c.dim = 3;
    c.kraus = {CMatrix::Identity(3, 3)};
    CHECK((superoperator_of(c).matrix - CMatrix::Identity(9, 9)).norm() <= 1e-14);
}

TEST_CASE("superoperator of the qubit Z channel is diag(1,0,0,1)") {
    const auto sup = superoperator_of(measurement_channel(qubit_z(), ChannelMode::Projective));
    CMatrix expected = CMatrix::Zero(4, 4);
    expected(0, 0) = 1.0;
    expected(3, 3) = 1.0;
    CHECK((sup.matrix - expected).norm() <= 1e-14);
}

TEST_CASE("superoperator action agrees with direct Kraus application") {
    GaussianStream rng(33);
    Scenario s{{2, 2}, {2}};
    const CommutingModel model = gen_tensor_embedded(2, 2, s, 101);
    for (const auto& meas : model.alice) {
        const auto chan = measurement_channel(meas, ChannelMode::Projective);
        const auto sup = superoperator_of(chan);
        for (int trial = 0; trial < 3; ++trial) {
            const CMatrix m = rand_gaussian(rng, 4, 4);
            const CMatrix via_sup = devectorize(sup.matrix * vectorize(m), 4);
            CHECK((via_sup - chan.apply(m)).norm() <= 1e-12);
        }
    }
}

TEST_CASE("superoperator_of rejects non-Hermitian Kraus lists") {
    KrausChannel c;
    c.dim = 2;
    CMatrix k(2, 2);
    k << 0, 1, 0, 0;
    c.kraus = {k, k.adjoint()};
    CHECK_THROWS_AS(superoperator_of(c), NonHermitianKraus);
}

TEST_CASE("average of Z and X erasers has a one-dimensional fixed space") {
    const std::vector<KrausChannel> channels{
        measurement_channel(qubit_z(), ChannelMode::Projective),
        measurement_channel(qubit_x(), ChannelMode::Projective)};
    const auto avg = average_superoperator(channels);
    const auto proj = fixed_point_projector(avg, 1e-9);
    CHECK(proj.rank() == 1);
    // The fixed line is vec(I)/sqrt(2).
    const CVector vec_id = vectorize(CMatrix::Identity(2, 2)) / std::sqrt(2.0);
    CHECK((proj.projector - vec_id * vec_id.adjoint()).norm() <= 1e-10);

    // Any qubit state erases to I/2.
    GaussianStream rng(34);
    const CMatrix rho = rand_density(rng, 2);
    CHECK((apply_erasure(proj, rho) - 0.5 * CMatrix::Identity(2, 2)).norm() <= 1e-10);
}

TEST_CASE("single-channel average is that channel's superoperator") {
    const auto chan = measurement_channel(qubit_z(), ChannelMode::Projective);
    CHECK((average_superoperator({chan}).matrix - superoperator_of(chan).matrix).norm() == 0.0);
    CHECK_THROWS_AS(average_superoperator({}), EmptyList);
}

TEST_CASE("measurements sharing an eigenbasis fix exactly the diagonal algebra") {
    GaussianStream rng(35);
    Eigen::HouseholderQR<CMatrix> qr(rand_gaussian(rng, 4, 4));
    const CMatrix u = qr.householderQ();

    const auto grouped = [&](std::vector<std::vector<int>> groups) {
        Measurement m;
        m.kind = MeasurementKind::Projective;
        for (const auto& g : groups) {
            CMatrix p = CMatrix::Zero(4, 4);
            for (int i : g) p += u.col(i) * u.col(i).adjoint();
            m.operators.push_back(hermitize(p));
        }
        return m;
    };
    const Measurement m1 = grouped({{0, 1}, {2, 3}});
    const Measurement m2 = grouped({{0, 2}, {1, 3}});

    const auto proj = fixed_point_projector(
        average_superoperator({measurement_channel(m1, ChannelMode::Projective),
                               measurement_channel(m2, ChannelMode::Projective)}),
        1e-9);

    // Matrix units in the shared basis: diagonal ones are fixed, off-diagonal
    // ones are annihilated (they sit in no common block of the partitions).
    CHECK(proj.rank() == 4);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const CMatrix unit = u.col(i) * u.col(j).adjoint();
            const CMatrix erased = apply_erasure(proj, unit);
            if (i == j) {
                CHECK((erased - unit).norm() <= 1e-10);
            } else {
                CHECK(erased.norm() <= 1e-10);
            }
        }
    }
}

TEST_CASE("identity superoperator projects onto everything") {
    Superoperator s;
    s.matrix = CMatrix::Identity(9, 9);
    const auto proj = fixed_point_projector(s, 1e-9);
    CHECK((proj.projector - CMatrix::Identity(9, 9)).norm() <= 1e-12);
}

TEST_CASE("single Z measurement fixes the span of its eigenprojectors") {
    const auto proj = fixed_point_projector(
        superoperator_of(measurement_channel(qubit_z(), ChannelMode::Projective)), 1e-9);
    CHECK(proj.rank() == 2);
    CMatrix expected = CMatrix::Zero(4, 4);
    expected(0, 0) = 1.0;
    expected(3, 3) = 1.0;
    CHECK((proj.projector - expected).norm() <= 1e-12);
}

TEST_CASE("spectrum out of range is rejected with the offending eigenvalue") {
    Superoperator s;
    s.matrix = 1.5 * CMatrix::Identity(4, 4);
    try {
        fixed_point_projector(s, 1e-9);
        FAIL("expected SpectrumOutOfRange");
    } catch (const SpectrumOutOfRange& e) {
        CHECK(e.eigenvalue == doctest::Approx(1.5).epsilon(1e-12));
    }
    s.matrix = -0.5 * CMatrix::Identity(4, 4);
    CHECK_THROWS_AS(fixed_point_projector(s, 1e-9), SpectrumOutOfRange);
}

TEST_CASE("Z-measurement eraser dephases the coherences") {
    const auto proj = fixed_point_projector(
        superoperator_of(measurement_channel(qubit_z(), ChannelMode::Projective)), 1e-9);
    CMatrix rho(2, 2);
    rho << 0.5, 0.5, 0.5, 0.5;
    CMatrix expected = CMatrix::Zero(2, 2);
    expected(0, 0) = 0.5;
    expected(1, 1) = 0.5;
    CHECK((apply_erasure(proj, rho) - expected).norm() <= 1e-12);

    // A fixed point passes through untouched.
    CHECK((apply_erasure(proj, expected) - expected).norm() <= 1e-13);

    CHECK_THROWS_AS(apply_erasure(proj, CMatrix::Identity(3, 3)), DimensionMismatch);
}

TEST_CASE("eraser spectra, invariance, and preservation on generated models") {
    for (std::uint64_t seed : {41u, 42u}) {
        const CommutingModel m = gen_tensor_embedded(2, 2, {{2, 2}, {2, 2}}, seed);
        std::vector<KrausChannel> channels;
        for (const auto& meas : m.alice) {
            channels.push_back(measurement_channel(meas, ChannelMode::Projective));
        }
        const auto avg = average_superoperator(channels);
        CHECK((avg.matrix - avg.matrix.adjoint()).norm() <= 1e-10);
        const auto proj = fixed_point_projector(avg, 1e-9);
        CHECK(proj.spectrum.maxCoeff() <= 1.0 + 1e-9);
        CHECK(proj.spectrum.minCoeff() >= -1e-9);
        // Idempotent and Hermitian within 10 * eig_tol.
        CHECK((proj.projector * proj.projector - proj.projector).norm() <= 1e-8);
        CHECK((proj.projector - proj.projector.adjoint()).norm() <= 1e-8);

        for (const auto& chan : channels) {
            const auto sup_x = superoperator_of(chan);
            CHECK((proj.projector * sup_x.matrix - proj.projector).norm() <= 1e-8);
        }

        GaussianStream rng(seed);
        for (int trial = 0; trial < 4; ++trial) {
            const CMatrix rho = rand_psd(rng, 4);
            const CMatrix erased = apply_erasure(proj, rho);
            CHECK(std::abs(erased.trace().real() - rho.trace().real()) <=
                  1e-9 * std::max(1.0, rho.trace().real()));
            CHECK(hermitian_eig(hermitize(erased)).eigenvalues.minCoeff() >= -1e-8);
            // Erasure invariance at the state level: erasing a measured state
            // gives the same result as erasing the original.
            for (const auto& chan : channels) {
                CHECK((apply_erasure(proj, chan.apply(rho)) - erased).norm() <= 1e-8);
            }
        }
    }
}

TEST_CASE("powers of the averaged superoperator converge to the projector") {
    const CommutingModel m = gen_tensor_embedded(2, 2, {{2, 2}, {2, 2}}, 43);
    std::vector<KrausChannel> channels;
    for (const auto& meas : m.alice) {
        channels.push_back(measurement_channel(meas, ChannelMode::Projective));
    }
    const auto avg = average_superoperator(channels);
    const auto proj = fixed_point_projector(avg, 1e-9);

    double lambda2 = 0.0;
    for (Eigen::Index i = 0; i < proj.spectrum.size(); ++i) {
        if (proj.spectrum[i] < 1.0 - 1e-9) {
            lambda2 = proj.spectrum[i];
            break;
        }
    }
    const double dim2 = static_cast<double>(avg.matrix.rows());

    CMatrix power = avg.matrix;
    double prev = (power - proj.projector).norm();
    for (int n = 2; n <= 50; ++n) {
        power = power * avg.matrix;
        const double dist = (power - proj.projector).norm();
        CHECK(dist <= prev + 1e-12);
        CHECK(dist <= std::pow(lambda2, n) * dim2 + 1e-12);
        prev = dist;
    }
}
