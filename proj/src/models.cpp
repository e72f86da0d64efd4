#include "quansal/models.hpp"

#include <cmath>
#include <sstream>

namespace quansal {

namespace {

constexpr double kImagTol = 1e-10;

Scenario scenario_of(const std::vector<Measurement>& alice,
                     const std::vector<Measurement>& bob) {
    Scenario s;
    for (const auto& m : alice) s.outcomes_a.push_back(m.outcomes());
    for (const auto& m : bob) s.outcomes_b.push_back(m.outcomes());
    return s;
}

/// Shared measurement-family checks: Hermitian PSD operators, completeness,
/// projectivity when declared projective.
void check_measurements(ValidationReport& rep, const std::vector<Measurement>& ms,
                        Eigen::Index dim, const std::string& party) {
    double herm = 0.0, psd = 0.0, complete = 0.0, proj = 0.0;
    bool any_projective = false;
    for (const auto& m : ms) {
        CMatrix sum = CMatrix::Zero(dim, dim);
        for (const auto& op : m.operators) {
            if (op.rows() != dim || op.cols() != dim) {
                throw DimensionMismatch(party + " measurement operator has wrong dimension");
            }
            herm = std::max(herm, (op - op.adjoint()).norm());
            auto eig = hermitian_eig(hermitize(op));
            psd = std::max(psd, std::max(0.0, -eig.eigenvalues.minCoeff()));
            if (m.kind == MeasurementKind::Projective) {
                any_projective = true;
                proj = std::max(proj, (op * op - op).norm());
            }
            sum += op;
        }
        complete = std::max(complete, (sum - CMatrix::Identity(dim, dim)).norm());
    }
    rep.add(party + "_operators_hermitian", herm);
    rep.add(party + "_operators_psd", psd);
    rep.add(party + "_completeness", complete);
    if (any_projective) rep.add(party + "_projectivity", proj);
}

void check_state(ValidationReport& rep, const CMatrix& rho, const std::string& name) {
    rep.add(name + "_hermitian", (rho - rho.adjoint()).norm());
    auto eig = hermitian_eig(hermitize(rho));
    rep.add(name + "_psd", std::max(0.0, -eig.eigenvalues.minCoeff()));
    rep.add(name + "_trace", std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag()));
}

void require_valid(const ValidationReport& rep) {
    if (rep.pass) return;
    for (const auto& c : rep.checks) {
        if (!c.pass) {
            std::ostringstream os;
            os << "invalid " << rep.subject << ": " << c.name << " residual " << c.residual
               << " > " << c.tol;
            throw InvalidModel(os.str());
        }
    }
}

double real_trace(const CMatrix& m, const std::string& where) {
    const Complex t = m.trace();
    if (std::abs(t.imag()) > kImagTol) {
        std::ostringstream os;
        os << where << ": trace has imaginary part " << t.imag();
        throw InvalidModel(os.str());
    }
    return t.real();
}

void finalize_behavior(const Behavior& p, const std::string& where) {
    auto rep = validate_behavior(p);
    if (!rep.pass) {
        std::ostringstream os;
        os << where << ": produced table violates behavior invariants (max residual "
           << rep.max_residual() << ")";
        throw InvalidModel(os.str());
    }
}

}  // namespace

Behavior Behavior::zeros(const Scenario& s) {
    Behavior p;
    p.scenario = s;
    p.table.resize(s.settings_a());
    for (int x = 0; x < s.settings_a(); ++x) {
        p.table[x].resize(s.settings_b());
        for (int y = 0; y < s.settings_b(); ++y) {
            p.table[x][y].assign(s.outcomes_a[x], std::vector<double>(s.outcomes_b[y], 0.0));
        }
    }
    return p;
}

double Behavior::bob_marginal(int y, int b, int x) const {
    double m = 0.0;
    for (int a = 0; a < scenario.outcomes_a[x]; ++a) m += table[x][y][a][b];
    return m;
}

double Behavior::alice_marginal(int x, int a, int y) const {
    double m = 0.0;
    for (int b = 0; b < scenario.outcomes_b[y]; ++b) m += table[x][y][a][b];
    return m;
}

double linf_distance(const Behavior& p, const Behavior& q) {
    if (!(p.scenario == q.scenario)) {
        throw ScenarioMismatch("linf_distance: behaviors live in different scenarios");
    }
    double d = 0.0;
    for (int x = 0; x < p.scenario.settings_a(); ++x)
        for (int y = 0; y < p.scenario.settings_b(); ++y)
            for (int a = 0; a < p.scenario.outcomes_a[x]; ++a)
                for (int b = 0; b < p.scenario.outcomes_b[y]; ++b)
                    d = std::max(d, std::abs(p.table[x][y][a][b] - q.table[x][y][a][b]));
    return d;
}

ValidationReport validate_behavior(const Behavior& p, double tol) {
    ValidationReport rep;
    rep.subject = "behavior";
    rep.tol = tol;

    double range = 0.0, norm = 0.0;
    for (int x = 0; x < p.scenario.settings_a(); ++x) {
        for (int y = 0; y < p.scenario.settings_b(); ++y) {
            double sum = 0.0;
            for (int a = 0; a < p.scenario.outcomes_a[x]; ++a) {
                for (int b = 0; b < p.scenario.outcomes_b[y]; ++b) {
                    const double v = p.table[x][y][a][b];
                    range = std::max(range, std::max(-v, v - 1.0));
                    sum += v;
                }
            }
            norm = std::max(norm, std::abs(sum - 1.0));
        }
    }
    rep.add("entries_in_range", std::max(range, 0.0));
    rep.add("normalization", norm);
    return rep;
}

Scenario CommutingModel::scenario() const { return scenario_of(alice, bob); }
Scenario TensorModel::scenario() const { return scenario_of(alice, bob); }

Scenario QuansalModel::scenario() const {
    Scenario s;
    for (const auto& setting : sigma_family) {
        s.outcomes_a.push_back(static_cast<int>(setting.size()));
    }
    for (const auto& m : bob) s.outcomes_b.push_back(m.outcomes());
    return s;
}

CMatrix QuansalModel::mean_sigma() const {
    CMatrix acc = CMatrix::Zero(dim_b, dim_b);
    for (const auto& setting : sigma_family) {
        for (const auto& s : setting) acc += s;
    }
    return acc / static_cast<double>(sigma_family.size());
}

ValidationReport validate_commuting(const CommutingModel& m, double tol) {
    ValidationReport rep;
    rep.subject = "commuting model";
    rep.tol = tol;

    check_state(rep, m.rho, "rho");
    check_measurements(rep, m.alice, m.dim, "alice");
    check_measurements(rep, m.bob, m.dim, "bob");

    double comm = 0.0;
    for (const auto& ma : m.alice)
        for (const auto& ea : ma.operators)
            for (const auto& mb : m.bob)
                for (const auto& fb : mb.operators)
                    comm = std::max(comm, commutator_norm(ea, fb));
    rep.add("cross_party_commutation", comm);
    return rep;
}

ValidationReport validate_tensor(const TensorModel& m, double tol) {
    ValidationReport rep;
    rep.subject = "tensor model";
    rep.tol = tol;

    if (m.rho_ab.rows() != m.dim_a * m.dim_b) {
        throw DimensionMismatch("tensor model: rho_ab does not match dim_a*dim_b");
    }
    check_state(rep, m.rho_ab, "rho_ab");
    check_measurements(rep, m.alice, m.dim_a, "alice");
    check_measurements(rep, m.bob, m.dim_b, "bob");
    return rep;
}

ValidationReport validate_quansal(const QuansalModel& m, double tol) {
    ValidationReport rep;
    rep.subject = "quansal model";
    rep.tol = tol;

    double herm = 0.0, psd = 0.0;
    std::vector<CMatrix> sums;
    for (const auto& setting : m.sigma_family) {
        CMatrix sum = CMatrix::Zero(m.dim_b, m.dim_b);
        for (const auto& s : setting) {
            herm = std::max(herm, (s - s.adjoint()).norm());
            auto eig = hermitian_eig(hermitize(s));
            psd = std::max(psd, std::max(0.0, -eig.eigenvalues.minCoeff()));
            sum += s;
        }
        sums.push_back(sum);
    }
    rep.add("sigma_family_hermitian", herm);
    rep.add("sigma_family_psd", psd);

    // Quansality: all pairs x, x' compared in trace norm, no privileged
    // setting. The stored sigma is checked against the mean of sums.
    double pairwise = 0.0;
    for (size_t x = 0; x < sums.size(); ++x)
        for (size_t xp = x + 1; xp < sums.size(); ++xp)
            pairwise = std::max(pairwise, trace_norm(sums[x] - sums[xp]));
    rep.add("quansality_pairwise", pairwise);

    const CMatrix mean = m.mean_sigma();
    rep.add("sigma_matches_mean", trace_norm(m.sigma - mean));
    rep.add("sigma_trace",
            std::abs(mean.trace().real() - 1.0) + std::abs(mean.trace().imag()));
    check_measurements(rep, m.bob, m.dim_b, "bob");
    return rep;
}

Behavior behavior_of_commuting(const CommutingModel& m) {
    require_valid(validate_commuting(m));
    Behavior p = Behavior::zeros(m.scenario());
    for (size_t x = 0; x < m.alice.size(); ++x) {
        for (size_t y = 0; y < m.bob.size(); ++y) {
            for (int a = 0; a < m.alice[x].outcomes(); ++a) {
                const CMatrix rho_e = m.rho * m.alice[x].operators[a];
                for (int b = 0; b < m.bob[y].outcomes(); ++b) {
                    p.table[x][y][a][b] =
                        real_trace(rho_e * m.bob[y].operators[b], "behavior_of_commuting");
                }
            }
        }
    }
    finalize_behavior(p, "behavior_of_commuting");
    return p;
}

Behavior behavior_of_tensor(const TensorModel& m) {
    require_valid(validate_tensor(m));
    Behavior p = Behavior::zeros(m.scenario());
    for (size_t x = 0; x < m.alice.size(); ++x) {
        for (size_t y = 0; y < m.bob.size(); ++y) {
            for (int a = 0; a < m.alice[x].outcomes(); ++a) {
                for (int b = 0; b < m.bob[y].outcomes(); ++b) {
                    const CMatrix ef = kron(m.alice[x].operators[a], m.bob[y].operators[b]);
                    p.table[x][y][a][b] = real_trace(m.rho_ab * ef, "behavior_of_tensor");
                }
            }
        }
    }
    finalize_behavior(p, "behavior_of_tensor");
    return p;
}

Behavior behavior_of_quansal(const QuansalModel& m) {
    require_valid(validate_quansal(m));
    Behavior p = Behavior::zeros(m.scenario());
    for (size_t x = 0; x < m.sigma_family.size(); ++x) {
        for (size_t y = 0; y < m.bob.size(); ++y) {
            for (size_t a = 0; a < m.sigma_family[x].size(); ++a) {
                for (int b = 0; b < m.bob[y].outcomes(); ++b) {
                    p.table[x][y][a][b] = real_trace(
                        m.bob[y].operators[b] * m.sigma_family[x][a], "behavior_of_quansal");
                }
            }
        }
    }
    finalize_behavior(p, "behavior_of_quansal");
    return p;
}

NoSignalingReport check_no_signaling(const Behavior& p, double tol) {
    NoSignalingReport rep;
    rep.tol = tol;
    const Scenario& s = p.scenario;

    // Alice -> Bob: Bob's marginal must not depend on x.
    for (int y = 0; y < s.settings_b(); ++y) {
        for (int b = 0; b < s.outcomes_b[y]; ++b) {
            for (int x = 0; x < s.settings_a(); ++x) {
                for (int xp = x + 1; xp < s.settings_a(); ++xp) {
                    rep.alice_to_bob =
                        std::max(rep.alice_to_bob,
                                 std::abs(p.bob_marginal(y, b, x) - p.bob_marginal(y, b, xp)));
                }
            }
        }
    }
    for (int x = 0; x < s.settings_a(); ++x) {
        for (int a = 0; a < s.outcomes_a[x]; ++a) {
            for (int y = 0; y < s.settings_b(); ++y) {
                for (int yp = y + 1; yp < s.settings_b(); ++yp) {
                    rep.bob_to_alice =
                        std::max(rep.bob_to_alice,
                                 std::abs(p.alice_marginal(x, a, y) - p.alice_marginal(x, a, yp)));
                }
            }
        }
    }
    rep.pass = rep.alice_to_bob <= tol && rep.bob_to_alice <= tol;
    return rep;
}

Behavior mix_behaviors(const Behavior& p, const Behavior& q, double w) {
    if (!(p.scenario == q.scenario)) {
        throw ScenarioMismatch("mix_behaviors: behaviors live in different scenarios");
    }
    Behavior out = Behavior::zeros(p.scenario);
    for (int x = 0; x < p.scenario.settings_a(); ++x)
        for (int y = 0; y < p.scenario.settings_b(); ++y)
            for (int a = 0; a < p.scenario.outcomes_a[x]; ++a)
                for (int b = 0; b < p.scenario.outcomes_b[y]; ++b)
                    out.table[x][y][a][b] =
                        w * p.table[x][y][a][b] + (1.0 - w) * q.table[x][y][a][b];
    return out;
}

Behavior product_behavior(const std::vector<std::vector<double>>& qa,
                          const std::vector<std::vector<double>>& pb, const Scenario& s) {
    if (static_cast<int>(qa.size()) != s.settings_a() ||
        static_cast<int>(pb.size()) != s.settings_b()) {
        throw ScenarioMismatch("product_behavior: distribution count does not match scenario");
    }
    for (int x = 0; x < s.settings_a(); ++x) {
        if (static_cast<int>(qa[x].size()) != s.outcomes_a[x]) {
            throw ScenarioMismatch("product_behavior: qa outcome count mismatch");
        }
        double sum = 0.0;
        for (double v : qa[x]) sum += v;
        if (std::abs(sum - 1.0) > tol::validation) {
            throw NotNormalized("product_behavior: qa not normalized for setting " +
                                std::to_string(x + 1));
        }
    }
    for (int y = 0; y < s.settings_b(); ++y) {
        if (static_cast<int>(pb[y].size()) != s.outcomes_b[y]) {
            throw ScenarioMismatch("product_behavior: pb outcome count mismatch");
        }
        double sum = 0.0;
        for (double v : pb[y]) sum += v;
        if (std::abs(sum - 1.0) > tol::validation) {
            throw NotNormalized("product_behavior: pb not normalized for setting " +
                                std::to_string(y + 1));
        }
    }

    Behavior out = Behavior::zeros(s);
    for (int x = 0; x < s.settings_a(); ++x)
        for (int y = 0; y < s.settings_b(); ++y)
            for (int a = 0; a < s.outcomes_a[x]; ++a)
                for (int b = 0; b < s.outcomes_b[y]; ++b)
                    out.table[x][y][a][b] = qa[x][a] * pb[y][b];
    return out;
}

CommutingModel embed_tensor(const TensorModel& m) {
    CommutingModel out;
    out.dim = m.dim_a * m.dim_b;
    out.rho = m.rho_ab;
    const CMatrix id_a = CMatrix::Identity(m.dim_a, m.dim_a);
    const CMatrix id_b = CMatrix::Identity(m.dim_b, m.dim_b);
    for (const auto& meas : m.alice) {
        Measurement e;
        e.kind = meas.kind;
        for (const auto& op : meas.operators) e.operators.push_back(kron(op, id_b));
        out.alice.push_back(std::move(e));
    }
    for (const auto& meas : m.bob) {
        Measurement f;
        f.kind = meas.kind;
        for (const auto& op : meas.operators) f.operators.push_back(kron(id_a, op));
        out.bob.push_back(std::move(f));
    }
    return out;
}

}  // namespace quansal
