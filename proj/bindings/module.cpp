#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "quansal/cesaro.hpp"
#include "quansal/eraser.hpp"
#include "quansal/scenarios.hpp"
#include "quansal/serialize.hpp"
#include "quansal/transforms.hpp"

namespace py = pybind11;
using namespace quansal;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Commuting-operator to tensor-product model constructions";

    // Exceptions map onto ValueError except where a dedicated type is useful.
    py::register_exception<Error>(m, "QuansalError", PyExc_ValueError);

    py::enum_<MeasurementKind>(m, "MeasurementKind")
        .value("projective", MeasurementKind::Projective)
        .value("povm", MeasurementKind::Povm);

    py::enum_<ChannelMode>(m, "ChannelMode")
        .value("projective", ChannelMode::Projective)
        .value("sqrt", ChannelMode::Sqrt);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<std::vector<int>, std::vector<int>>(), py::arg("outcomes_a"),
             py::arg("outcomes_b"))
        .def_readwrite("outcomes_a", &Scenario::outcomes_a)
        .def_readwrite("outcomes_b", &Scenario::outcomes_b)
        .def_property_readonly("settings_a", &Scenario::settings_a)
        .def_property_readonly("settings_b", &Scenario::settings_b);

    py::class_<Behavior>(m, "Behavior")
        .def_readonly("scenario", &Behavior::scenario)
        .def_readonly("table", &Behavior::table)
        .def("at", py::overload_cast<int, int, int, int>(&Behavior::at, py::const_))
        .def("alice_marginal", &Behavior::alice_marginal, py::arg("x"), py::arg("a"),
             py::arg("y") = 0)
        .def("bob_marginal", &Behavior::bob_marginal, py::arg("y"), py::arg("b"),
             py::arg("x") = 0);

    py::class_<Measurement>(m, "Measurement")
        .def(py::init<>())
        .def_readwrite("operators", &Measurement::operators)
        .def_readwrite("kind", &Measurement::kind)
        .def_property_readonly("outcomes", &Measurement::outcomes);

    py::class_<CommutingModel>(m, "CommutingModel")
        .def(py::init<>())
        .def_readwrite("dim", &CommutingModel::dim)
        .def_readwrite("rho", &CommutingModel::rho)
        .def_readwrite("alice", &CommutingModel::alice)
        .def_readwrite("bob", &CommutingModel::bob)
        .def("scenario", &CommutingModel::scenario);

    py::class_<TensorModel>(m, "TensorModel")
        .def(py::init<>())
        .def_readwrite("dim_a", &TensorModel::dim_a)
        .def_readwrite("dim_b", &TensorModel::dim_b)
        .def_readwrite("rho_ab", &TensorModel::rho_ab)
        .def_readwrite("alice", &TensorModel::alice)
        .def_readwrite("bob", &TensorModel::bob)
        .def("scenario", &TensorModel::scenario);

    py::class_<QuansalModel>(m, "QuansalModel")
        .def(py::init<>())
        .def_readwrite("dim_b", &QuansalModel::dim_b)
        .def_readwrite("sigma_family", &QuansalModel::sigma_family)
        .def_readwrite("bob", &QuansalModel::bob)
        .def_readwrite("sigma", &QuansalModel::sigma)
        .def("scenario", &QuansalModel::scenario)
        .def("mean_sigma", &QuansalModel::mean_sigma);

    py::class_<CheckItem>(m, "CheckItem")
        .def_readonly("name", &CheckItem::name)
        .def_readonly("residual", &CheckItem::residual)
        .def_readonly("tol", &CheckItem::tol)
        .def_readonly("passed", &CheckItem::pass);

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("subject", &ValidationReport::subject)
        .def_readonly("tol", &ValidationReport::tol)
        .def_readonly("checks", &ValidationReport::checks)
        .def_readonly("passed", &ValidationReport::pass)
        .def("max_residual", &ValidationReport::max_residual);

    py::class_<NoSignalingReport>(m, "NoSignalingReport")
        .def_readonly("alice_to_bob", &NoSignalingReport::alice_to_bob)
        .def_readonly("bob_to_alice", &NoSignalingReport::bob_to_alice)
        .def_readonly("tol", &NoSignalingReport::tol)
        .def_readonly("passed", &NoSignalingReport::pass);

    py::class_<ErasureProjector>(m, "ErasureProjector")
        .def_readonly("projector", &ErasureProjector::projector)
        .def_readonly("spectrum", &ErasureProjector::spectrum)
        .def_readonly("eig_tol", &ErasureProjector::eig_tol)
        .def_readonly("dim", &ErasureProjector::dim)
        .def("rank", &ErasureProjector::rank);

    py::class_<QuansalizeOutcome>(m, "QuansalizeOutcome")
        .def_readonly("model", &QuansalizeOutcome::model)
        .def_readonly("eraser", &QuansalizeOutcome::eraser);

    py::class_<DichotomicPair>(m, "DichotomicPair")
        .def_readonly("u1", &DichotomicPair::u1)
        .def_readonly("u2", &DichotomicPair::u2)
        .def_readonly("dim", &DichotomicPair::dim);

    py::class_<CesaroApproximant>(m, "CesaroApproximant")
        .def_readonly("n", &CesaroApproximant::n)
        .def_readonly("sigma_family", &CesaroApproximant::sigma_family)
        .def_readonly("reference_qa", &CesaroApproximant::reference_qa)
        .def_readonly("behavior_n", &CesaroApproximant::behavior_n);

    py::class_<CesaroSweepRow>(m, "CesaroSweepRow")
        .def_readonly("n", &CesaroSweepRow::n)
        .def_readonly("quansality_residual", &CesaroSweepRow::quansality_residual)
        .def_readonly("identity_residual", &CesaroSweepRow::identity_residual)
        .def_readonly("pn_distance", &CesaroSweepRow::pn_distance)
        .def_readonly("scaled_distance", &CesaroSweepRow::scaled_distance);

    // Evaluators and validators.
    m.def("behavior_of_commuting", &behavior_of_commuting);
    m.def("behavior_of_tensor", &behavior_of_tensor);
    m.def("behavior_of_quansal", &behavior_of_quansal);
    m.def("validate_commuting", &validate_commuting, py::arg("model"),
          py::arg("tol") = tol::validation);
    m.def("validate_tensor", &validate_tensor, py::arg("model"),
          py::arg("tol") = tol::validation);
    m.def("validate_quansal", &validate_quansal, py::arg("model"),
          py::arg("tol") = tol::validation);
    m.def("validate_behavior", &validate_behavior, py::arg("behavior"),
          py::arg("tol") = tol::validation);
    m.def("check_no_signaling", &check_no_signaling, py::arg("behavior"),
          py::arg("tol") = tol::validation);
    m.def("linf_distance", &linf_distance);
    m.def("mix_behaviors", &mix_behaviors);
    m.def("product_behavior", &product_behavior);
    m.def("embed_tensor", &embed_tensor);

    // Construction pipelines.
    m.def("quansalize", &quansalize, py::arg("model"),
          py::arg("mode") = ChannelMode::Projective, py::arg("eig_tol") = tol::eig);
    m.def("quansalize_full", &quansalize_full, py::arg("model"),
          py::arg("mode") = ChannelMode::Projective, py::arg("eig_tol") = tol::eig);
    m.def("tensorize", &tensorize, py::arg("model"), py::arg("rank_tol") = tol::rank);
    m.def("quansal_of_tensor", &quansal_of_tensor);
    m.def(
        "commuting_to_tensor",
        [](const CommutingModel& m, ChannelMode mode, double eig_tol, double rank_tol) {
            return commuting_to_tensor(m, mode, {eig_tol, rank_tol});
        },
        py::arg("model"), py::arg("mode") = ChannelMode::Projective,
        py::arg("eig_tol") = tol::eig, py::arg("rank_tol") = tol::rank);

    // Eraser machinery.
    m.def("measurement_channel", &measurement_channel);
    m.def(
        "average_measurement_superoperator",
        [](const std::vector<Measurement>& ms, ChannelMode mode) {
            std::vector<KrausChannel> channels;
            channels.reserve(ms.size());
            for (const auto& meas : ms) channels.push_back(measurement_channel(meas, mode));
            return average_superoperator(channels).matrix;
        },
        py::arg("measurements"), py::arg("mode") = ChannelMode::Projective);
    m.def(
        "fixed_point_projector",
        [](const CMatrix& superoperator, double eig_tol) {
            return fixed_point_projector({superoperator}, eig_tol);
        },
        py::arg("superoperator"), py::arg("eig_tol") = tol::eig);
    m.def("apply_erasure", &apply_erasure);

    // Cesaro approximants.
    m.def("dichotomic_observables", &dichotomic_observables);
    m.def("gamma1", &gamma1);
    m.def("gamma2", &gamma2);
    m.def("cesaro_identity_residual", &cesaro_identity_residual);
    m.def("approximant", &approximant);
    m.def("approx_behavior", &approx_behavior);
    m.def("noise_rate_23", &noise_rate_23);
    m.def("noisy_behavior_23", &noisy_behavior_23);
    m.def("cesaro_sweep", &cesaro_sweep, py::arg("model"), py::arg("qa"), py::arg("n_list"),
          py::arg("workers") = 1);

    // Generators and the brute-force oracle.
    m.def("gen_tensor_embedded", &gen_tensor_embedded);
    m.def("gen_block_sum", &gen_block_sum);
    m.def("gen_chsh", &gen_chsh);
    m.def("gen_random_povm", &gen_random_povm);
    m.def("brute_force_behavior", &brute_force_behavior);

    // File I/O in the CLI's JSON schema.
    m.def("load_model",
          [](const std::string& path) { return load_model(path); });
    m.def("store_model", [](const std::string& path, const ModelFile& f) {
        store_model(path, f);
    });
    m.def("to_json_string", &to_json_string, py::arg("model"), py::arg("indent") = 2);
    m.def("from_json_string", &from_json_string);
}
