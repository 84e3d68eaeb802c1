#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "srirnn/audio.hpp"
#include "srirnn/rnn_model.hpp"

namespace srirnn {

/// Evaluates the recurrent map f and the output head g of a model at scalar
/// precision T. Holds a copy of the weights cast to T plus gate scratch, so an
/// instance belongs to one stream.
///
/// States are flat spans of length state_size(): [h] for GRU, [h | c] for LSTM.
template <typename T>
class CellKernel {
 public:
  using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;
  using RowVector = Eigen::Matrix<T, 1, Eigen::Dynamic>;
  using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

  explicit CellKernel(const RnnModel& model);

  CellType cell_type() const noexcept { return type_; }
  int hidden_size() const noexcept { return hidden_; }
  int state_size() const noexcept { return type_ == CellType::LSTM ? 2 * hidden_ : hidden_; }

  /// next = f(prev, x). `prev` and `next` must not overlap.
  void step(std::span<const T> prev, T x, std::span<T> next);

  /// y = w_out . h + b_out (+ x when the model has a skip connection).
  T output(std::span<const T> state, T x) const;

 private:
  void step_lstm(std::span<const T> prev, T x, std::span<T> next);
  void step_gru(std::span<const T> prev, T x, std::span<T> next);

  CellType type_;
  int hidden_;
  Vector w_ih_;
  Matrix w_hh_;
  Vector b_ih_;
  Vector b_hh_;
  RowVector w_out_;
  T b_out_;
  bool skip_;
  Vector input_gates_;
  Vector recurrent_gates_;
};

extern template class CellKernel<double>;
extern template class CellKernel<float>;

/// Sample-by-sample baseline model at its training rate, carrying state
/// between calls.
template <typename T>
class BaselineStream {
 public:
  explicit BaselineStream(const RnnModel& model);

  T step(T x);
  void process(std::span<const T> input, std::span<T> output);
  void reset();

  std::span<const T> state() const { return current_; }

 private:
  CellKernel<T> cell_;
  std::vector<T> current_;
  std::vector<T> next_;
};

extern template class BaselineStream<double>;
extern template class BaselineStream<float>;

CellState lstm_step(const RnnModel& model, const CellState& state, double x);
CellState gru_step(const RnnModel& model, const CellState& state, double x);

double output_head(const RnnModel& model, std::span<const double> h, double x);

/// Runs the untouched model from zero state. The input must be at the model's
/// training rate; other rates go through process_adapted().
AudioBuffer process_baseline(const RnnModel& model, const AudioBuffer& input,
                             Precision precision = Precision::Double);

}  // namespace srirnn
