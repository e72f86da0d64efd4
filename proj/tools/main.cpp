#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "quansal/cesaro.hpp"
#include "quansal/scenarios.hpp"
#include "quansal/serialize.hpp"
#include "quansal/transforms.hpp"

using namespace quansal;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;       // usage, parse, schema, type mismatch
constexpr int kExitValidation = 2;  // validation or scenario failure
constexpr int kExitSpectrum = 3;    // superoperator spectrum out of range

double env_tolerance(double fallback) {
    if (const char* env = std::getenv("QUANSAL_TOL")) {
        try {
            return std::stod(env);
        } catch (...) {
            return fallback;
        }
    }
    return fallback;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void print_report(const ValidationReport& rep) {
    std::printf("%s (tol %s)\n", rep.subject.c_str(), fmt(rep.tol).c_str());
    for (const auto& c : rep.checks) {
        std::printf("  %-28s residual %-12s tol %-10s %s\n", c.name.c_str(),
                    fmt(c.residual).c_str(), fmt(c.tol).c_str(), c.pass ? "pass" : "FAIL");
    }
    std::printf("overall: %s\n", rep.pass ? "PASS" : "FAIL");
}

void print_spectrum_summary(const ErasureProjector& eraser) {
    double lambda2 = 0.0;
    int borderline = 0;
    for (Eigen::Index i = 0; i < eraser.spectrum.size(); ++i) {
        const double lam = eraser.spectrum[i];
        if (lam < 1.0 - eraser.eig_tol) {
            lambda2 = std::max(lambda2, lam);
            if (lam >= 1.0 - 1e3 * eraser.eig_tol) ++borderline;
        }
    }
    std::printf("eraser spectrum: fixed-space rank %lld of %lld, gap eigenvalue %s, "
                "min %s, eig_tol %s, borderline %d\n",
                static_cast<long long>(eraser.rank()),
                static_cast<long long>(eraser.spectrum.size()), fmt(lambda2).c_str(),
                fmt(eraser.spectrum.minCoeff()).c_str(), fmt(eraser.eig_tol).c_str(),
                borderline);
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    if (out.empty()) throw ParseError("empty integer list '" + text + "'");
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    if (out.empty()) throw ParseError("empty number list '" + text + "'");
    return out;
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> parse_blocks(const std::string& text) {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto xpos = item.find('x');
        if (xpos == std::string::npos) {
            throw ParseError("block '" + item + "' is not of the form AxB");
        }
        out.emplace_back(std::stoll(item.substr(0, xpos)), std::stoll(item.substr(xpos + 1)));
    }
    if (out.empty()) throw ParseError("empty block list '" + text + "'");
    return out;
}

ChannelMode parse_mode(const std::string& mode) {
    if (mode == "projective") return ChannelMode::Projective;
    if (mode == "sqrt") return ChannelMode::Sqrt;
    throw ParseError("mode must be 'projective' or 'sqrt', got '" + mode + "'");
}

void write_text_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error("cannot open '" + tmp + "' for writing");
        out << text;
    }
    std::filesystem::rename(tmp, path);
}

int cmd_validate(const std::string& path, double tol) {
    const ModelFile file = load_model(path);
    ValidationReport rep = std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, CommutingModel>) return validate_commuting(v, tol);
            if constexpr (std::is_same_v<T, TensorModel>) return validate_tensor(v, tol);
            if constexpr (std::is_same_v<T, QuansalModel>) return validate_quansal(v, tol);
            if constexpr (std::is_same_v<T, Behavior>) return validate_behavior(v, tol);
        },
        file);
    print_report(rep);
    if (const auto* p = std::get_if<Behavior>(&file)) {
        const auto ns = check_no_signaling(*p, tol);
        std::printf("no-signaling: alice->bob %s, bob->alice %s, %s\n",
                    fmt(ns.alice_to_bob).c_str(), fmt(ns.bob_to_alice).c_str(),
                    ns.pass ? "pass" : "FAIL");
        return rep.pass && ns.pass ? kExitOk : kExitValidation;
    }
    return rep.pass ? kExitOk : kExitValidation;
}

int cmd_quansalize(const std::string& in, const std::string& out, const std::string& mode,
                   double eig_tol) {
    const ModelFile file = load_model(in);
    const auto* m = std::get_if<CommutingModel>(&file);
    if (!m) throw ParseError("quansalize expects a commuting model, got " + type_tag(file));
    const QuansalizeOutcome result = quansalize_full(*m, parse_mode(mode), eig_tol);
    store_model(out, result.model);
    print_spectrum_summary(result.eraser);
    const auto rep = validate_quansal(result.model, 1e-8);
    std::printf("quansality residual: %s\n", fmt(rep.max_residual()).c_str());
    std::printf("wrote %s\n", out.c_str());
    return kExitOk;
}

int cmd_tensorize(const std::string& in, const std::string& out, double rank_tol) {
    const ModelFile file = load_model(in);
    const auto* q = std::get_if<QuansalModel>(&file);
    if (!q) throw ParseError("tensorize expects a quansal model, got " + type_tag(file));
    const TensorModel t = tensorize(*q, rank_tol);
    store_model(out, t);

    double completeness = 0.0;
    for (const auto& meas : t.alice) {
        CMatrix sum = CMatrix::Zero(t.dim_a, t.dim_a);
        for (const auto& op : meas.operators) sum += op;
        completeness =
            std::max(completeness, (sum - CMatrix::Identity(t.dim_a, t.dim_a)).norm());
    }
    std::printf("alice completeness residual: %s\n", fmt(completeness).c_str());
    std::printf("behavior deviation from input: %s\n",
                fmt(linf_distance(behavior_of_tensor(t), behavior_of_quansal(*q))).c_str());
    std::printf("wrote %s\n", out.c_str());
    return kExitOk;
}

int cmd_roundtrip(const std::string& in, const std::string& report_path,
                  const std::string& mode, double eig_tol, double rank_tol, double tol) {
    const ModelFile file = load_model(in);
    const auto* m = std::get_if<CommutingModel>(&file);
    if (!m) throw ParseError("roundtrip expects a commuting model, got " + type_tag(file));

    const auto t0 = std::chrono::steady_clock::now();
    const Behavior before = behavior_of_commuting(*m);
    const QuansalizeOutcome q = quansalize_full(*m, parse_mode(mode), eig_tol);
    const TensorModel t = tensorize(q.model, rank_tol);
    const Behavior after = behavior_of_tensor(t);
    const double delta = linf_distance(after, before);
    const auto t1 = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    print_spectrum_summary(q.eraser);
    std::printf("||P_out - P_in||_inf = %s (tol %s)\n", fmt(delta).c_str(), fmt(tol).c_str());
    const bool pass = delta <= tol;
    std::printf("roundtrip: %s\n", pass ? "PASS" : "FAIL");
    // Timing goes to stderr only, so report files stay byte-identical run to run.
    std::fprintf(stderr, "wall time: %.1f ms\n", ms);

    if (!report_path.empty()) {
        nlohmann::json doc{
            {"command", "roundtrip"},
            {"input", in},
            {"mode", mode},
            {"tolerances", {{"eig_tol", eig_tol}, {"rank_tol", rank_tol}, {"tol", tol}}},
            {"behavior_deviation_linf", delta},
            {"eraser",
             {{"rank", q.eraser.rank()},
              {"dimension", q.eraser.spectrum.size()},
              {"eig_tol", q.eraser.eig_tol},
              {"spectrum_min", q.eraser.spectrum.minCoeff()},
              {"spectrum_max", q.eraser.spectrum.maxCoeff()}}},
            {"pass", pass}};
        write_text_atomic(report_path, doc.dump(2) + "\n");
    }
    return pass ? kExitOk : kExitValidation;
}

int cmd_cesaro(const std::string& in, const std::string& n_list_text, const std::string& qa_spec,
               const std::string& out_csv, int workers) {
    const ModelFile file = load_model(in);
    const auto* m = std::get_if<CommutingModel>(&file);
    if (!m) throw ParseError("cesaro expects a commuting model, got " + type_tag(file));

    std::vector<std::vector<double>> qa;
    if (qa_spec == "uniform") {
        for (int oc : m->scenario().outcomes_a) {
            qa.emplace_back(oc, 1.0 / static_cast<double>(oc));
        }
    } else {
        std::ifstream f(qa_spec);
        if (!f) throw ParseError("cannot open qa file '" + qa_spec + "'");
        try {
            nlohmann::json doc = nlohmann::json::parse(f);
            qa = doc.get<std::vector<std::vector<double>>>();
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("qa file: ") + e.what());
        }
    }

    const auto rows = cesaro_sweep(*m, qa, parse_int_list(n_list_text), workers);
    const std::string csv = sweep_to_csv(rows);
    if (out_csv.empty()) {
        std::fputs(csv.c_str(), stdout);
    } else {
        write_text_atomic(out_csv, csv);
        std::printf("wrote %s\n", out_csv.c_str());
    }
    return kExitOk;
}

struct GenerateArgs {
    std::string kind;
    std::string out;
    std::uint64_t seed = 0;
    Eigen::Index dim_a = 2;
    Eigen::Index dim_b = 2;
    std::string outcomes_a = "2,2";
    std::string outcomes_b = "2,2";
    std::string blocks = "2x2,2x2";
    std::string weights = "0.5,0.5";
};

int cmd_generate(const GenerateArgs& args) {
    GeneratorSpec spec;
    spec.seed = args.seed;
    spec.dim_a = args.dim_a;
    spec.dim_b = args.dim_b;
    spec.scenario.outcomes_a = parse_int_list(args.outcomes_a);
    spec.scenario.outcomes_b = parse_int_list(args.outcomes_b);
    if (args.kind == "tensor_embedded") {
        spec.kind = GeneratorSpec::Kind::TensorEmbedded;
    } else if (args.kind == "block_sum") {
        spec.kind = GeneratorSpec::Kind::BlockSum;
        spec.blocks = parse_blocks(args.blocks);
        spec.weights = parse_double_list(args.weights);
    } else if (args.kind == "chsh") {
        spec.kind = GeneratorSpec::Kind::Chsh;
    } else if (args.kind == "random_povm") {
        spec.kind = GeneratorSpec::Kind::RandomPovm;
    } else {
        throw ParseError("unknown generator kind '" + args.kind +
                         "' (expected tensor_embedded, block_sum, chsh, random_povm)");
    }

    ModelFile file;
    try {
        std::visit([&](auto&& model) { file = std::move(model); }, generate(spec));
    } catch (const Error& e) {
        // Infeasible parameters are a usage error for this command.
        throw ParseError(e.what());
    }
    store_model(args.out, file);

    if (const auto* t = std::get_if<TensorModel>(&file)) {
        print_report(validate_tensor(*t, 1e-10));
        if (args.kind == "chsh") {
            const Behavior p = behavior_of_tensor(*t);
            const auto corr = [&](int x, int y) {
                return p.at(x, y, 0, 0) + p.at(x, y, 1, 1) - p.at(x, y, 0, 1) -
                       p.at(x, y, 1, 0);
            };
            std::printf("chsh value: %.7f\n",
                        corr(0, 0) + corr(0, 1) + corr(1, 0) - corr(1, 1));
        }
    } else {
        print_report(validate_commuting(std::get<CommutingModel>(file), 1e-10));
    }
    std::printf("wrote %s\n", args.out.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Commuting-operator to tensor-product model constructions"};
    app.require_subcommand(1);

    std::string in, out, report_path;
    double vtol = env_tolerance(tol::validation);
    auto* validate = app.add_subcommand("validate", "Validate a model or behavior file");
    validate->add_option("path", in)->required();
    validate->add_option("--tol", vtol, "Validation tolerance");

    std::string mode = "projective";
    double eig_tol = tol::eig;
    auto* quansalize_cmd =
        app.add_subcommand("quansalize", "Erase Alice's setting mark (commuting -> quansal)");
    quansalize_cmd->add_option("in", in)->required();
    quansalize_cmd->add_option("out", out)->required();
    quansalize_cmd->add_option("--mode", mode, "projective or sqrt");
    quansalize_cmd->add_option("--eig-tol", eig_tol, "Eigenvalue-1 classification width");

    double rank_tol = tol::rank;
    auto* tensorize_cmd =
        app.add_subcommand("tensorize", "Build the explicit tensor model (quansal -> tensor)");
    tensorize_cmd->add_option("in", in)->required();
    tensorize_cmd->add_option("out", out)->required();
    tensorize_cmd->add_option("--rank-tol", rank_tol, "Support cutoff for sigma^{-1/2}");

    double rt_tol = env_tolerance(1e-8);
    auto* roundtrip_cmd = app.add_subcommand(
        "roundtrip", "Full pipeline commuting -> quansal -> tensor with behavior comparison");
    roundtrip_cmd->add_option("in", in)->required();
    roundtrip_cmd->add_option("--report", report_path, "Write a JSON report here");
    roundtrip_cmd->add_option("--mode", mode, "projective or sqrt");
    roundtrip_cmd->add_option("--eig-tol", eig_tol);
    roundtrip_cmd->add_option("--rank-tol", rank_tol);
    roundtrip_cmd->add_option("--tol", rt_tol, "Behavior deviation threshold");

    std::string n_list = "0,1,2,4,8,16,32,64";
    std::string qa_spec = "uniform";
    std::string out_csv;
    int workers = 1;
    auto* cesaro_cmd =
        app.add_subcommand("cesaro", "Truncation sweep for the two-dichotomic-setting case");
    cesaro_cmd->add_option("in", in)->required();
    cesaro_cmd->add_option("--n-list", n_list, "Comma-separated truncation orders");
    cesaro_cmd->add_option("--qa", qa_spec, "'uniform' or a JSON file with q(a|x)");
    cesaro_cmd->add_option("--out-csv", out_csv, "CSV output path (stdout if omitted)");
    cesaro_cmd->add_option("--workers", workers, "Threads across N values")
        ->check(CLI::PositiveNumber);

    GenerateArgs gen;
    auto* generate_cmd = app.add_subcommand("generate", "Write a reproducible fixture");
    generate_cmd
        ->add_option("kind", gen.kind, "tensor_embedded | block_sum | chsh | random_povm")
        ->required();
    generate_cmd->add_option("out", gen.out)->required();
    generate_cmd->add_option("--seed", gen.seed);
    generate_cmd->add_option("--dim-a", gen.dim_a);
    generate_cmd->add_option("--dim-b", gen.dim_b);
    generate_cmd->add_option("--outcomes-a", gen.outcomes_a, "Outcomes per Alice setting");
    generate_cmd->add_option("--outcomes-b", gen.outcomes_b, "Outcomes per Bob setting");
    generate_cmd->add_option("--blocks", gen.blocks, "block_sum blocks, e.g. 2x2,3x2");
    generate_cmd->add_option("--weights", gen.weights, "block_sum weights, e.g. 0.5,0.5");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(validate)) return cmd_validate(in, vtol);
        if (app.got_subcommand(quansalize_cmd)) return cmd_quansalize(in, out, mode, eig_tol);
        if (app.got_subcommand(tensorize_cmd)) return cmd_tensorize(in, out, rank_tol);
        if (app.got_subcommand(roundtrip_cmd))
            return cmd_roundtrip(in, report_path, mode, eig_tol, rank_tol, rt_tol);
        if (app.got_subcommand(cesaro_cmd))
            return cmd_cesaro(in, n_list, qa_spec, out_csv, workers);
        if (app.got_subcommand(generate_cmd)) return cmd_generate(gen);
    } catch (const SpectrumOutOfRange& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSpectrum;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const InvalidModel& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const ScenarioMismatch& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const NotNormalized& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const NotProjective& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const NotPSD& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
