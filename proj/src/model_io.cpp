#include "srirnn/model_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "srirnn/error.hpp"

namespace srirnn {
namespace {

using nlohmann::json;

constexpr const char* kWeightIh = "rec.weight_ih_l0";
constexpr const char* kWeightHh = "rec.weight_hh_l0";
constexpr const char* kBiasIh = "rec.bias_ih_l0";
constexpr const char* kBiasHh = "rec.bias_hh_l0";
constexpr const char* kLinWeight = "lin.weight";
constexpr const char* kLinBias = "lin.bias";

std::string dims(std::size_t rows, std::size_t cols) {
  return "[" + std::to_string(rows) + "x" + std::to_string(cols) + "]";
}

const json& require(const json& object, const std::string& scope, const char* key) {
  auto it = object.find(key);
  if (it == object.end()) throw ParseError("missing key '" + scope + "." + key + "'");
  return *it;
}

double number(const json& value, const std::string& key) {
  if (!value.is_number()) throw ParseError("'" + key + "' must contain numbers");
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw DomainError("non-finite weight in '" + key + "'");
  return v;
}

Eigen::MatrixXd matrix(const json& value, const char* key, std::size_t rows, std::size_t cols) {
  if (!value.is_array()) throw ParseError(std::string("'") + key + "' must be a nested array");
  std::size_t actual_cols = value.empty() ? 0 : (value[0].is_array() ? value[0].size() : 0);
  for (const auto& row : value) {
    if (!row.is_array()) throw ParseError(std::string("'") + key + "' must be a nested array");
    if (row.size() != actual_cols) {
      throw ShapeError(key, dims(rows, cols), "ragged rows");
    }
  }
  if (value.size() != rows || actual_cols != cols) {
    throw ShapeError(key, dims(rows, cols), dims(value.size(), actual_cols));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(Eigen::Index(r), Eigen::Index(c)) = number(value[r][c], key);
  }
  return m;
}

Eigen::VectorXd vector(const json& value, const char* key, std::size_t length) {
  if (!value.is_array()) throw ParseError(std::string("'") + key + "' must be an array");
  if (value.size() != length) {
    throw ShapeError(key, "[" + std::to_string(length) + "]", "[" + std::to_string(value.size()) + "]");
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(length));
  for (std::size_t i = 0; i < length; ++i) v[Eigen::Index(i)] = number(value[i], key);
  return v;
}

bool flag(const json& value, const char* key) {
  if (value.is_boolean()) return value.get<bool>();
  if (value.is_number_integer()) {
    const auto v = value.get<long long>();
    if (v == 0 || v == 1) return v == 1;
  }
  throw ParseError(std::string("'model_data.") + key + "' must be 0/1 or a boolean");
}

int positive_int(const json& value, const char* key) {
  if (!value.is_number_integer()) throw ParseError(std::string("'model_data.") + key + "' must be an integer");
  const auto v = value.get<long long>();
  if (v <= 0 || v > 1 << 20) {
    throw DomainError(std::string("'model_data.") + key + "' must be positive, got " + std::to_string(v));
  }
  return int(v);
}

void note_unknown(const json& object, const std::string& scope, const std::set<std::string>& known) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    if (!known.contains(it.key())) spdlog::info("ignoring unknown key '{}.{}'", scope, it.key());
  }
}

}  // namespace

RnnModel parse_model(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("weight file is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("weight file must be a JSON object");
  const json& meta = require(root, "", "model_data");
  const json& dict = require(root, "", "state_dict");
  if (!meta.is_object() || !dict.is_object()) {
    throw ParseError("'model_data' and 'state_dict' must be objects");
  }

  RnnModel model;
  const json& unit = require(meta, "model_data", "unit_type");
  if (!unit.is_string()) throw ParseError("'model_data.unit_type' must be a string");
  model.cell_type = parse_cell_type(unit.get<std::string>());
  model.hidden_size = positive_int(require(meta, "model_data", "hidden_size"), "hidden_size");
  model.input_size = positive_int(require(meta, "model_data", "input_size"), "input_size");
  if (model.input_size != 1) {
    throw DomainError("input_size " + std::to_string(model.input_size) +
                      " declares a conditioned model; only single-input models are supported");
  }
  model.skip = flag(require(meta, "model_data", "skip"), "skip");

  for (const char* key : {"sample_rate", "samplerate"}) {
    if (auto it = meta.find(key); it != meta.end()) {
      double rate = 0.0;
      if (it->is_string()) {
        try {
          rate = std::stod(it->get<std::string>());
        } catch (const std::exception&) {
          throw ParseError(std::string("'model_data.") + key + "' is not a number");
        }
      } else {
        rate = number(*it, key);
      }
      if (!(rate > 0.0)) throw DomainError("sample rate must be positive");
      model.train_rate = rate;
    }
  }
  if (auto it = meta.find("num_layers"); it != meta.end() && positive_int(*it, "num_layers") != 1) {
    throw DomainError("multi-layer models are not supported");
  }
  if (auto it = meta.find("output_size"); it != meta.end() && positive_int(*it, "output_size") != 1) {
    throw DomainError("only single-output models are supported");
  }
  note_unknown(meta, "model_data",
               {"unit_type", "hidden_size", "input_size", "skip", "sample_rate", "samplerate",
                "num_layers", "output_size"});
  note_unknown(dict, "state_dict", {kWeightIh, kWeightHh, kBiasIh, kBiasHh, kLinWeight, kLinBias});

  const auto H = std::size_t(model.hidden_size);
  const auto rows = std::size_t(model.gates()) * H;
  model.w_ih = matrix(require(dict, "state_dict", kWeightIh), kWeightIh, rows, 1);
  model.w_hh = matrix(require(dict, "state_dict", kWeightHh), kWeightHh, rows, H);
  model.b_ih = vector(require(dict, "state_dict", kBiasIh), kBiasIh, rows);
  model.b_hh = vector(require(dict, "state_dict", kBiasHh), kBiasHh, rows);
  model.w_out = matrix(require(dict, "state_dict", kLinWeight), kLinWeight, 1, H).row(0);
  model.b_out = vector(require(dict, "state_dict", kLinBias), kLinBias, 1)[0];
  model.validate();
  return model;
}

RnnModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open weight file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_model(text.str());
}

std::string serialize_model(const RnnModel& model) {
  model.validate();
  auto rows_of = [](const Eigen::MatrixXd& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      out.push_back(std::move(row));
    }
    return out;
  };
  auto flat = [](const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
  };
  json root;
  root["model_data"] = {{"unit_type", std::string(to_string(model.cell_type))},
                        {"hidden_size", model.hidden_size},
                        {"input_size", model.input_size},
                        {"skip", model.skip ? 1 : 0},
                        {"sample_rate", model.train_rate}};
  root["state_dict"] = {{kWeightIh, rows_of(model.w_ih)},
                        {kWeightHh, rows_of(model.w_hh)},
                        {kBiasIh, flat(model.b_ih)},
                        {kBiasHh, flat(model.b_hh)},
                        {kLinWeight, rows_of(Eigen::MatrixXd(model.w_out))},
                        {kLinBias, json::array({model.b_out})}};
  return root.dump();
}

void save_model(const RnnModel& model, const std::filesystem::path& path) {
  const std::string text = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write weight file '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("failed writing weight file '" + path.string() + "'");
}

}  // namespace srirnn
