#include "quansal/cesaro.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

namespace quansal {

namespace {

void require_dichotomic(const CommutingModel& m) {
    if (m.alice.size() != 2 || m.alice[0].outcomes() != 2 || m.alice[1].outcomes() != 2) {
        throw ScenarioMismatch(
            "expected exactly two Alice settings with two outcomes each");
    }
    for (const auto& meas : m.alice) {
        if (meas.kind != MeasurementKind::Projective) {
            throw NotProjective("Alice measurements must be projective");
        }
    }
}

void check_qa(const std::vector<std::vector<double>>& qa, const Scenario& s) {
    if (static_cast<int>(qa.size()) != s.settings_a()) {
        throw ScenarioMismatch("reference behavior q(a|x) has wrong setting count");
    }
    for (int x = 0; x < s.settings_a(); ++x) {
        if (static_cast<int>(qa[x].size()) != s.outcomes_a[x]) {
            throw ScenarioMismatch("reference behavior q(a|x) has wrong outcome count");
        }
        double sum = 0.0;
        for (double v : qa[x]) sum += v;
        if (std::abs(sum - 1.0) > tol::validation) {
            throw NotNormalized("reference behavior q(a|x) not normalized");
        }
    }
}

CMatrix conjugate_by(const CMatrix& u, const CMatrix& m) { return u * m * u.adjoint(); }

/// (Lambda1 o Lambda2)^{n} (m), iterated conjugation by W = U1 U2.
CMatrix repeated_w(const DichotomicPair& p, int n, CMatrix m) {
    const CMatrix w = p.u1 * p.u2;
    for (int k = 0; k < n; ++k) m = conjugate_by(w, m);
    return m;
}

}  // namespace

DichotomicPair dichotomic_observables(const CommutingModel& m) {
    require_dichotomic(m);
    DichotomicPair p;
    p.dim = m.dim;
    p.u1 = m.alice[0].operators[0] - m.alice[0].operators[1];
    p.u2 = m.alice[1].operators[0] - m.alice[1].operators[1];
    return p;
}

CMatrix gamma1(const DichotomicPair& p, int n, const CMatrix& m) {
    if (m.rows() != p.dim || m.cols() != p.dim) {
        throw DimensionMismatch("gamma1: matrix does not match observable dimension");
    }
    const CMatrix w = p.u1 * p.u2;
    CMatrix acc = CMatrix::Zero(p.dim, p.dim);
    CMatrix cur = m;
    for (int k = 0; k <= n; ++k) {
        acc += cur;
        if (k < n) cur = conjugate_by(w, cur);
    }
    return acc / static_cast<double>(n + 1);
}

CMatrix gamma2(const DichotomicPair& p, int n, const CMatrix& m) {
    return gamma1(p, n, conjugate_by(p.u1, m));
}

double cesaro_identity_residual(const DichotomicPair& p, int n, const CMatrix& rho) {
    if (rho.rows() != p.dim || rho.cols() != p.dim) {
        throw DimensionMismatch("cesaro_identity_residual: state dimension mismatch");
    }
    const auto omega = [&](const CMatrix& u, const CMatrix& m) -> CMatrix {
        return 0.5 * (conjugate_by(u, m) + m);
    };
    const double c = 1.0 / (2.0 * (n + 1));
    const CMatrix lhs = gamma1(p, n, omega(p.u1, rho)) + c * repeated_w(p, n + 1, rho);
    const CMatrix rhs = gamma2(p, n, omega(p.u2, rho)) + c * rho;
    return (lhs - rhs).norm();
}

CesaroApproximant approximant(const CommutingModel& m,
                              const std::vector<std::vector<double>>& qa, int n) {
    require_dichotomic(m);
    check_qa(qa, m.scenario());

    const DichotomicPair pair = dichotomic_observables(m);
    const double a_n = static_cast<double>(n + 1) / (n + 2);
    const double b_n = 1.0 / (n + 2);

    const CMatrix noise1 = 0.5 * (repeated_w(pair, n + 1, m.rho) + m.rho);
    const CMatrix noise2 = m.rho;

    CesaroApproximant out;
    out.n = n;
    out.reference_qa = qa;
    out.sigma_family.resize(2);
    for (int a = 0; a < 2; ++a) {
        const CMatrix rho1a =
            m.alice[0].operators[a] * m.rho * m.alice[0].operators[a];
        const CMatrix rho2a =
            m.alice[1].operators[a] * m.rho * m.alice[1].operators[a];
        out.sigma_family[0].push_back(
            hermitize(a_n * gamma1(pair, n, rho1a) + qa[0][a] * b_n * noise1));
        out.sigma_family[1].push_back(
            hermitize(a_n * gamma2(pair, n, rho2a) + qa[1][a] * b_n * noise2));
    }

    QuansalModel q;
    q.dim_b = m.dim;
    q.sigma_family = out.sigma_family;
    q.bob = m.bob;
    q.sigma = q.mean_sigma();
    out.behavior_n = behavior_of_quansal(q);
    return out;
}

Behavior approx_behavior(const Behavior& p, const std::vector<std::vector<double>>& qa,
                         const std::vector<std::vector<double>>& pb, int n) {
    const Behavior product = product_behavior(qa, pb, p.scenario);
    const double w = static_cast<double>(n + 1) / (n + 2);
    return mix_behaviors(p, product, w);
}

double noise_rate_23(int n) {
    if (n < 0) throw Error("noise_rate_23: n must be nonnegative");
    const double eps = 3.0 / (n + 1);
    return (1.0 + eps) / (7.0 + eps);
}

Behavior noisy_behavior_23(const Behavior& p, const std::vector<std::vector<double>>& qa,
                           const std::vector<std::vector<double>>& pb, int n) {
    const Scenario& s = p.scenario;
    if (s.settings_a() != 2 || !((s.outcomes_a[0] == 2 && s.outcomes_a[1] == 3) ||
                                 (s.outcomes_a[0] == 3 && s.outcomes_a[1] == 2))) {
        throw ScenarioMismatch(
            "noisy_behavior_23: Alice scenario must be two settings with 2 and 3 outcomes");
    }
    const double p_n = noise_rate_23(n);
    return mix_behaviors(p, product_behavior(qa, pb, s), 1.0 - p_n);
}

std::vector<CesaroSweepRow> cesaro_sweep(const CommutingModel& m,
                                         const std::vector<std::vector<double>>& qa,
                                         const std::vector<int>& n_list, int workers) {
    require_dichotomic(m);
    check_qa(qa, m.scenario());

    const Behavior p = behavior_of_commuting(m);
    const DichotomicPair pair = dichotomic_observables(m);

    std::vector<CesaroSweepRow> rows(n_list.size());
    const auto compute = [&](size_t idx) {
        const int n = n_list[idx];
        const CesaroApproximant approx = approximant(m, qa, n);
        CMatrix sum0 = CMatrix::Zero(m.dim, m.dim);
        CMatrix sum1 = CMatrix::Zero(m.dim, m.dim);
        for (const auto& s : approx.sigma_family[0]) sum0 += s;
        for (const auto& s : approx.sigma_family[1]) sum1 += s;

        CesaroSweepRow row;
        row.n = n;
        row.quansality_residual = trace_norm(sum0 - sum1);
        row.identity_residual = cesaro_identity_residual(pair, n, m.rho);
        row.pn_distance = linf_distance(approx.behavior_n, p);
        row.scaled_distance = (n + 2) * row.pn_distance;
        rows[idx] = row;
    };

    const int thread_count = std::max(1, std::min<int>(workers, static_cast<int>(n_list.size())));
    if (thread_count == 1) {
        for (size_t i = 0; i < n_list.size(); ++i) compute(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (int t = 0; t < thread_count; ++t) {
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < rows.size(); i = next.fetch_add(1)) {
                    compute(i);
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<CesaroSweepRow>& rows) {
    std::string out = "n,quansality_residual,identity_residual,pn_minus_p_linf,scaled_pn_minus_p_linf\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", r.n,
                      r.quansality_residual, r.identity_residual, r.pn_distance,
                      r.scaled_distance);
        out += buf;
    }
    return out;
}

}  // namespace quansal
