#include "srirnn/cell.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "srirnn/error.hpp"

namespace srirnn {
namespace {

template <typename T>
inline T sigmoid(T v) {
  return T(1) / (T(1) + std::exp(-v));
}

void check_length(const char* name, std::size_t expected, std::size_t actual) {
  if (expected != actual) {
    throw ShapeError(name, "[" + std::to_string(expected) + "]", "[" + std::to_string(actual) + "]");
  }
}

}  // namespace

template <typename T>
CellKernel<T>::CellKernel(const RnnModel& model) {
  model.validate();
  type_ = model.cell_type;
  hidden_ = model.hidden_size;
  w_ih_ = model.w_ih.col(0).cast<T>();
  w_hh_ = model.w_hh.cast<T>();
  b_ih_ = model.b_ih.cast<T>();
  b_hh_ = model.b_hh.cast<T>();
  w_out_ = model.w_out.cast<T>();
  b_out_ = T(model.b_out);
  skip_ = model.skip;
  input_gates_.resize(w_hh_.rows());
  recurrent_gates_.resize(w_hh_.rows());
}

template <typename T>
void CellKernel<T>::step(std::span<const T> prev, T x, std::span<T> next) {
  if (type_ == CellType::LSTM) {
    step_lstm(prev, x, next);
  } else {
    step_gru(prev, x, next);
  }
}

template <typename T>
void CellKernel<T>::step_lstm(std::span<const T> prev, T x, std::span<T> next) {
  const int H = hidden_;
  Eigen::Map<const Vector> h(prev.data(), H);
  recurrent_gates_.noalias() = w_hh_ * h;
  input_gates_ = w_ih_ * x + b_ih_ + b_hh_ + recurrent_gates_;

  const T* c = prev.data() + H;
  T* h_new = next.data();
  T* c_new = next.data() + H;
  for (int j = 0; j < H; ++j) {
    const T i_gate = sigmoid(input_gates_[j]);
    const T f_gate = sigmoid(input_gates_[H + j]);
    const T g_gate = std::tanh(input_gates_[2 * H + j]);
    const T o_gate = sigmoid(input_gates_[3 * H + j]);
    c_new[j] = f_gate * c[j] + i_gate * g_gate;
    h_new[j] = o_gate * std::tanh(c_new[j]);
  }
}

template <typename T>
void CellKernel<T>::step_gru(std::span<const T> prev, T x, std::span<T> next) {
  const int H = hidden_;
  Eigen::Map<const Vector> h(prev.data(), H);
  recurrent_gates_.noalias() = w_hh_ * h;
  recurrent_gates_ += b_hh_;
  input_gates_ = w_ih_ * x + b_ih_;

  T* h_new = next.data();
  for (int j = 0; j < H; ++j) {
    const T r_gate = sigmoid(input_gates_[j] + recurrent_gates_[j]);
    const T z_gate = sigmoid(input_gates_[H + j] + recurrent_gates_[H + j]);
    // The reset gate scales the whole recurrent candidate term, bias included.
    const T n_gate = std::tanh(input_gates_[2 * H + j] + r_gate * recurrent_gates_[2 * H + j]);
    h_new[j] = (T(1) - z_gate) * n_gate + z_gate * h[j];
  }
}

template <typename T>
T CellKernel<T>::output(std::span<const T> state, T x) const {
  Eigen::Map<const Vector> h(state.data(), hidden_);
  T y = w_out_.dot(h.transpose()) + b_out_;
  if (skip_) y += x;
  return y;
}

template class CellKernel<double>;
template class CellKernel<float>;

template <typename T>
BaselineStream<T>::BaselineStream(const RnnModel& model)
    : cell_(model),
      current_(std::size_t(model.state_size()), T(0)),
      next_(std::size_t(model.state_size()), T(0)) {}

template <typename T>
T BaselineStream<T>::step(T x) {
  cell_.step(current_, x, next_);
  current_.swap(next_);
  return cell_.output(current_, x);
}

template <typename T>
void BaselineStream<T>::process(std::span<const T> input, std::span<T> output) {
  check_length("output", input.size(), output.size());
  for (std::size_t n = 0; n < input.size(); ++n) output[n] = step(input[n]);
}

template <typename T>
void BaselineStream<T>::reset() {
  std::fill(current_.begin(), current_.end(), T(0));
  std::fill(next_.begin(), next_.end(), T(0));
}

template class BaselineStream<double>;
template class BaselineStream<float>;

namespace {

CellState step_double(const RnnModel& model, const CellState& state, double x) {
  const auto H = std::size_t(model.hidden_size);
  check_length("state.h", H, state.h.size());
  std::vector<double> prev(state.h);
  if (model.cell_type == CellType::LSTM) {
    check_length("state.c", H, state.c.size());
    prev.insert(prev.end(), state.c.begin(), state.c.end());
  }
  std::vector<double> next(prev.size());
  CellKernel<double> cell(model);
  cell.step(prev, x, next);

  CellState out;
  out.h.assign(next.begin(), next.begin() + std::ptrdiff_t(H));
  if (model.cell_type == CellType::LSTM) out.c.assign(next.begin() + std::ptrdiff_t(H), next.end());
  return out;
}

}  // namespace

CellState lstm_step(const RnnModel& model, const CellState& state, double x) {
  if (model.cell_type != CellType::LSTM) throw DomainError("lstm_step called with a GRU model");
  return step_double(model, state, x);
}

CellState gru_step(const RnnModel& model, const CellState& state, double x) {
  if (model.cell_type != CellType::GRU) throw DomainError("gru_step called with an LSTM model");
  return step_double(model, state, x);
}

double output_head(const RnnModel& model, std::span<const double> h, double x) {
  check_length("h", std::size_t(model.hidden_size), h.size());
  double y = model.b_out;
  for (int j = 0; j < model.hidden_size; ++j) y += model.w_out[j] * h[std::size_t(j)];
  if (model.skip) y += x;
  return y;
}

AudioBuffer process_baseline(const RnnModel& model, const AudioBuffer& input,
                             Precision precision) {
  if (std::abs(input.rate - model.train_rate) > 1e-9 * model.train_rate) {
    throw RateError("baseline processing requires input at the training rate " +
                    std::to_string(model.train_rate) + " Hz, got " + std::to_string(input.rate) +
                    " Hz; use process_adapted() for other rates");
  }
  AudioBuffer out;
  out.rate = input.rate;
  out.samples.resize(input.size());
  if (precision == Precision::Double) {
    BaselineStream<double> stream(model);
    stream.process(input.samples, out.samples);
  } else {
    BaselineStream<float> stream(model);
    for (std::size_t n = 0; n < input.size(); ++n) {
      out.samples[n] = double(stream.step(float(input.samples[n])));
    }
  }
  return out;
}

}  // namespace srirnn
