#include "srirnn/rnn_model.hpp"

#include <cmath>
#include <random>
#include <string>

#include "srirnn/error.hpp"

namespace srirnn {
namespace {

std::string shape_of(Eigen::Index rows, Eigen::Index cols) {
  return "[" + std::to_string(rows) + "x" + std::to_string(cols) + "]";
}

template <typename Derived>
void check_shape(const Eigen::DenseBase<Derived>& tensor, const char* name, Eigen::Index rows,
                 Eigen::Index cols) {
  if (tensor.rows() != rows || tensor.cols() != cols) {
    throw ShapeError(name, shape_of(rows, cols), shape_of(tensor.rows(), tensor.cols()));
  }
  if (!tensor.allFinite()) {
    throw DomainError(std::string("non-finite weight in '") + name + "'");
  }
}

}  // namespace

std::string_view to_string(CellType type) { return type == CellType::LSTM ? "LSTM" : "GRU"; }

CellType parse_cell_type(std::string_view name) {
  if (name == "LSTM" || name == "lstm") return CellType::LSTM;
  if (name == "GRU" || name == "gru") return CellType::GRU;
  throw ParseError("unknown cell type '" + std::string(name) + "' (expected LSTM or GRU)");
}

Precision parse_precision(std::string_view name) {
  if (name == "double") return Precision::Double;
  if (name == "single" || name == "float") return Precision::Single;
  throw ParseError("unknown precision '" + std::string(name) + "' (expected single or double)");
}

std::string_view to_string(Precision precision) {
  return precision == Precision::Double ? "double" : "single";
}

void RnnModel::validate() const {
  if (hidden_size <= 0) {
    throw DomainError("hidden_size must be positive, got " + std::to_string(hidden_size));
  }
  if (input_size != 1) {
    throw DomainError("only single-input (unconditioned) models are supported, got input_size " +
                      std::to_string(input_size));
  }
  if (!(train_rate > 0.0) || !std::isfinite(train_rate)) {
    throw DomainError("train_rate must be positive");
  }
  const Eigen::Index rows = Eigen::Index(gates()) * hidden_size;
  check_shape(w_ih, "w_ih", rows, input_size);
  check_shape(w_hh, "w_hh", rows, hidden_size);
  check_shape(b_ih, "b_ih", rows, 1);
  check_shape(b_hh, "b_hh", rows, 1);
  check_shape(w_out, "w_out", 1, hidden_size);
  if (!std::isfinite(b_out)) throw DomainError("non-finite weight in 'b_out'");
}

RnnModel zero_model(CellType type, int hidden_size, bool skip) {
  if (hidden_size <= 0) {
    throw DomainError("hidden_size must be positive, got " + std::to_string(hidden_size));
  }
  RnnModel model;
  model.cell_type = type;
  model.hidden_size = hidden_size;
  model.input_size = 1;
  const Eigen::Index rows = Eigen::Index(gate_count(type)) * hidden_size;
  model.w_ih = Eigen::MatrixXd::Zero(rows, 1);
  model.w_hh = Eigen::MatrixXd::Zero(rows, hidden_size);
  model.b_ih = Eigen::VectorXd::Zero(rows);
  model.b_hh = Eigen::VectorXd::Zero(rows);
  model.w_out = Eigen::RowVectorXd::Zero(hidden_size);
  model.skip = skip;
  return model;
}

RnnModel random_model(CellType type, int hidden_size, std::uint64_t seed, double input_scale,
                      bool skip) {
  RnnModel model = zero_model(type, hidden_size, skip);
  std::mt19937_64 rng(seed);
  const double bound = 1.0 / std::sqrt(double(hidden_size));
  std::uniform_real_distribution<double> recurrent(-bound, bound);
  std::uniform_real_distribution<double> input(-input_scale, input_scale);
  auto fill = [&rng](auto& tensor, auto& dist) {
    for (Eigen::Index i = 0; i < tensor.size(); ++i) tensor.data()[i] = dist(rng);
  };
  fill(model.w_ih, input);
  fill(model.w_hh, recurrent);
  fill(model.b_ih, recurrent);
  fill(model.b_hh, recurrent);
  fill(model.w_out, recurrent);
  model.b_out = recurrent(rng);
  return model;
}

RnnModel synthetic_model(CellType type, int hidden_size, std::uint64_t seed) {
  RnnModel model = random_model(type, hidden_size, seed, kSyntheticInputScale);
  // Gate block 1 is the forget gate (LSTM) and the update gate (GRU).
  const Eigen::Index block = 1;
  model.b_ih.segment(block * hidden_size, hidden_size).array() += kSyntheticRetentionBias;
  return model;
}

CellState CellState::zeros(const RnnModel& model) {
  CellState state;
  state.h.assign(std::size_t(model.hidden_size), 0.0);
  if (model.cell_type == CellType::LSTM) state.c.assign(std::size_t(model.hidden_size), 0.0);
  return state;
}

}  // namespace srirnn
