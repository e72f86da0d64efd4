#include "quansal/serialize.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

namespace quansal {

namespace {

using nlohmann::json;

json complex_to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ParseError("expected complex number as [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const CMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("expected matrix as nested arrays");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols) {
            throw ParseError("ragged matrix rows");
        }
        for (Eigen::Index jj = 0; jj < cols; ++jj) m(i, jj) = complex_from_json(j[i][jj]);
    }
    if (!all_finite(m)) throw ParseError("matrix contains non-finite entries");
    return m;
}

json measurement_to_json(const Measurement& m) {
    json ops = json::array();
    for (const auto& op : m.operators) ops.push_back(matrix_to_json(op));
    return json{{"kind", m.kind == MeasurementKind::Projective ? "projective" : "povm"},
                {"operators", std::move(ops)}};
}

Measurement measurement_from_json(const json& j) {
    Measurement m;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "projective") {
        m.kind = MeasurementKind::Projective;
    } else if (kind == "povm") {
        m.kind = MeasurementKind::Povm;
    } else {
        throw ParseError("unknown measurement kind '" + kind + "'");
    }
    for (const auto& op : j.at("operators")) m.operators.push_back(matrix_from_json(op));
    if (m.operators.empty()) throw ParseError("measurement with no operators");
    return m;
}

json measurements_to_json(const std::vector<Measurement>& ms) {
    json arr = json::array();
    for (const auto& m : ms) arr.push_back(measurement_to_json(m));
    return arr;
}

std::vector<Measurement> measurements_from_json(const json& j) {
    std::vector<Measurement> ms;
    for (const auto& m : j) ms.push_back(measurement_from_json(m));
    return ms;
}

json scenario_to_json(const Scenario& s) {
    return json{{"outcomes_a", s.outcomes_a}, {"outcomes_b", s.outcomes_b}};
}

Scenario scenario_from_json(const json& j) {
    Scenario s;
    s.outcomes_a = j.at("outcomes_a").get<std::vector<int>>();
    s.outcomes_b = j.at("outcomes_b").get<std::vector<int>>();
    for (int v : s.outcomes_a)
        if (v < 1) throw ParseError("scenario outcome counts must be >= 1");
    for (int v : s.outcomes_b)
        if (v < 1) throw ParseError("scenario outcome counts must be >= 1");
    if (s.outcomes_a.empty() || s.outcomes_b.empty()) {
        throw ParseError("scenario needs at least one setting per party");
    }
    return s;
}

json payload_of(const CommutingModel& m) {
    return json{{"dim", m.dim},
                {"rho", matrix_to_json(m.rho)},
                {"alice", measurements_to_json(m.alice)},
                {"bob", measurements_to_json(m.bob)}};
}

json payload_of(const TensorModel& m) {
    return json{{"dim_a", m.dim_a},
                {"dim_b", m.dim_b},
                {"rho_ab", matrix_to_json(m.rho_ab)},
                {"alice", measurements_to_json(m.alice)},
                {"bob", measurements_to_json(m.bob)}};
}

json payload_of(const QuansalModel& m) {
    json family = json::array();
    for (const auto& setting : m.sigma_family) {
        json row = json::array();
        for (const auto& s : setting) row.push_back(matrix_to_json(s));
        family.push_back(std::move(row));
    }
    return json{{"dim_b", m.dim_b},
                {"sigma_family", std::move(family)},
                {"sigma", matrix_to_json(m.sigma)},
                {"bob", measurements_to_json(m.bob)}};
}

json payload_of(const Behavior& p) {
    return json{{"scenario", scenario_to_json(p.scenario)}, {"table", p.table}};
}

CommutingModel commuting_from_json(const json& j) {
    CommutingModel m;
    m.dim = j.at("dim").get<Eigen::Index>();
    m.rho = matrix_from_json(j.at("rho"));
    m.alice = measurements_from_json(j.at("alice"));
    m.bob = measurements_from_json(j.at("bob"));
    if (m.rho.rows() != m.dim || m.rho.cols() != m.dim) {
        throw ParseError("commuting model: rho does not match dim");
    }
    for (const auto& fam : {m.alice, m.bob})
        for (const auto& meas : fam)
            for (const auto& op : meas.operators)
                if (op.rows() != m.dim || op.cols() != m.dim) {
                    throw ParseError("commuting model: operator dimension mismatch");
                }
    return m;
}

TensorModel tensor_from_json(const json& j) {
    TensorModel m;
    m.dim_a = j.at("dim_a").get<Eigen::Index>();
    m.dim_b = j.at("dim_b").get<Eigen::Index>();
    m.rho_ab = matrix_from_json(j.at("rho_ab"));
    m.alice = measurements_from_json(j.at("alice"));
    m.bob = measurements_from_json(j.at("bob"));
    if (m.rho_ab.rows() != m.dim_a * m.dim_b) {
        throw ParseError("tensor model: rho_ab does not match dim_a*dim_b");
    }
    for (const auto& meas : m.alice)
        for (const auto& op : meas.operators)
            if (op.rows() != m.dim_a) throw ParseError("tensor model: Alice operator dimension");
    for (const auto& meas : m.bob)
        for (const auto& op : meas.operators)
            if (op.rows() != m.dim_b) throw ParseError("tensor model: Bob operator dimension");
    return m;
}

QuansalModel quansal_from_json(const json& j) {
    QuansalModel m;
    m.dim_b = j.at("dim_b").get<Eigen::Index>();
    for (const auto& row : j.at("sigma_family")) {
        std::vector<CMatrix> setting;
        for (const auto& s : row) setting.push_back(matrix_from_json(s));
        if (setting.empty()) throw ParseError("quansal model: empty setting");
        m.sigma_family.push_back(std::move(setting));
    }
    if (m.sigma_family.empty()) throw ParseError("quansal model: empty sigma family");
    m.sigma = matrix_from_json(j.at("sigma"));
    m.bob = measurements_from_json(j.at("bob"));
    for (const auto& setting : m.sigma_family)
        for (const auto& s : setting)
            if (s.rows() != m.dim_b) throw ParseError("quansal model: sigma dimension mismatch");
    return m;
}

Behavior behavior_from_json(const json& j) {
    Behavior p;
    p.scenario = scenario_from_json(j.at("scenario"));
    p.table = j.at("table").get<decltype(p.table)>();
    if (static_cast<int>(p.table.size()) != p.scenario.settings_a()) {
        throw ParseError("behavior table has wrong x extent");
    }
    for (int x = 0; x < p.scenario.settings_a(); ++x) {
        if (static_cast<int>(p.table[x].size()) != p.scenario.settings_b()) {
            throw ParseError("behavior table has wrong y extent");
        }
        for (int y = 0; y < p.scenario.settings_b(); ++y) {
            if (static_cast<int>(p.table[x][y].size()) != p.scenario.outcomes_a[x]) {
                throw ParseError("behavior table has wrong a extent");
            }
            for (const auto& row : p.table[x][y]) {
                if (static_cast<int>(row.size()) != p.scenario.outcomes_b[y]) {
                    throw ParseError("behavior table has wrong b extent");
                }
            }
        }
    }
    return p;
}

}  // namespace

std::string type_tag(const ModelFile& f) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, CommutingModel>) return "commuting";
            if constexpr (std::is_same_v<T, TensorModel>) return "tensor";
            if constexpr (std::is_same_v<T, QuansalModel>) return "quansal";
            if constexpr (std::is_same_v<T, Behavior>) return "behavior";
        },
        f);
}

std::string to_json_string(const ModelFile& f, int indent) {
    json doc{{"format_version", kFormatVersion},
             {"type", type_tag(f)},
             {"payload", std::visit([](const auto& v) { return payload_of(v); }, f)}};
    return doc.dump(indent);
}

ModelFile from_json_string(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    try {
        const std::string version = doc.at("format_version").get<std::string>();
        if (version != kFormatVersion) {
            throw ParseError("unsupported format_version '" + version + "'");
        }
        const std::string type = doc.at("type").get<std::string>();
        const json& payload = doc.at("payload");
        if (type == "commuting") return commuting_from_json(payload);
        if (type == "tensor") return tensor_from_json(payload);
        if (type == "quansal") return quansal_from_json(payload);
        if (type == "behavior") return behavior_from_json(payload);
        throw ParseError("unknown type tag '" + type + "'");
    } catch (const json::exception& e) {
        throw ParseError(std::string("schema violation: ") + e.what());
    }
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_string(text);
}

void store_model(const std::filesystem::path& path, const ModelFile& f) {
    const std::string text = to_json_string(f);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
        out << text << '\n';
    }
    std::filesystem::rename(tmp, path);
}

std::string report_to_json(const ValidationReport& rep, int indent) {
    json checks = json::array();
    for (const auto& c : rep.checks) {
        checks.push_back(
            json{{"name", c.name}, {"residual", c.residual}, {"tol", c.tol}, {"pass", c.pass}});
    }
    return json{{"subject", rep.subject},
                {"tol", rep.tol},
                {"checks", std::move(checks)},
                {"pass", rep.pass}}
        .dump(indent);
}

std::string report_to_json(const NoSignalingReport& rep, int indent) {
    return json{{"alice_to_bob", rep.alice_to_bob},
                {"bob_to_alice", rep.bob_to_alice},
                {"tol", rep.tol},
                {"pass", rep.pass}}
        .dump(indent);
}

}  // namespace quansal
