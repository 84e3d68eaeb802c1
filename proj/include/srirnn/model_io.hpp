#pragma once

#include <filesystem>
#include <string>

#include "srirnn/rnn_model.hpp"

namespace srirnn {

/// Parses a weight file (see docs/weight-format.md). The returned model has
/// passed RnnModel::validate(); any defect raises instead.
RnnModel load_model(const std::filesystem::path& path);
RnnModel parse_model(const std::string& text);

void save_model(const RnnModel& model, const std::filesystem::path& path);
std::string serialize_model(const RnnModel& model);

}  // namespace srirnn
