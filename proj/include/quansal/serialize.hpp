#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include "quansal/models.hpp"
#include "quansal/report.hpp"

namespace quansal {

/// On-disk payload: one file holds exactly one object. Complex numbers are
/// stored as [re, im] pairs and matrices as row-major nested arrays, so
/// fixtures stay human-auditable.
using ModelFile = std::variant<CommutingModel, TensorModel, QuansalModel, Behavior>;

inline constexpr const char* kFormatVersion = "1";

std::string type_tag(const ModelFile& f);

std::string to_json_string(const ModelFile& f, int indent = 2);
ModelFile from_json_string(const std::string& text);

ModelFile load_model(const std::filesystem::path& path);

/// Atomic write: temp file in the target directory, then rename.
void store_model(const std::filesystem::path& path, const ModelFile& f);

std::string report_to_json(const ValidationReport& rep, int indent = 2);
std::string report_to_json(const NoSignalingReport& rep, int indent = 2);

}  // namespace quansal
