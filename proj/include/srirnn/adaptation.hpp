#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "srirnn/audio.hpp"
#include "srirnn/cell.hpp"
#include "srirnn/rnn_model.hpp"

namespace srirnn {

/// Sample-rate adaptation methods for running a model at M times its
/// training rate.
///
///  - Naive: the recursion is run unchanged at the new rate.
///  - STN:   the state residual is scaled by 1/M (forward-Euler reading).
///  - Delay: the state is delayed by round(M) samples.
///  - LIDL:  linearly interpolated M-sample state delay.
///  - APDL:  first-order all-pass fractional state delay.
///  - CIDL:  cubic Lagrange interpolated state delay.
///
/// For integer M, Delay, LIDL, APDL and CIDL are the same pure M-sample delay
/// and share one code path.
enum class Method { Naive, STN, Delay, LIDL, APDL, CIDL };

inline constexpr std::array<Method, 6> kAllMethods = {Method::Naive, Method::STN,  Method::Delay,
                                                      Method::LIDL,  Method::APDL, Method::CIDL};

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

/// All-pass coefficient approximating a delay of `delta` samples,
/// (1 - delta) / (1 + delta). Requires 0 <= delta <= 1.
double allpass_eta(double delta);

/// Third-order Lagrange fractional-delay kernel,
/// l[n] = prod_{k != n} (delta - k) / (n - k), n = 0..3. Requires 0 <= delta <= 2.
std::array<double, 4> lagrange_kernel(double delta);

struct CidlParams {
  int gamma = 1;
  double delta = 0.0;
};

/// Integer offset and fractional position of the cubic interpolation window
/// for M > 1: gamma = 1 + floor(|M - 2|), delta = M - floor(|M - 2|) - 1.
/// The window is centred for M >= 2 and one-sided for 1 < M < 2.
CidlParams cidl_params(double factor);

/// Immutable method + oversampling factor with all derived coefficients.
class AdaptationMethod {
 public:
  /// Throws DomainError for M < 1 or non-finite M.
  AdaptationMethod(Method kind, double factor);

  Method kind() const noexcept { return kind_; }
  double factor() const noexcept { return factor_; }

  /// True when the method is realised as a pure integer state delay.
  bool is_pure_delay() const noexcept { return pure_delay_; }
  /// Lag (in samples) of the pure delay path; 1 for Naive/STN.
  int delay() const noexcept { return delay_; }

  /// floor(M) for LIDL/APDL.
  int whole_delay() const noexcept { return whole_; }
  /// Fractional delay: M - floor(M) for LIDL/APDL, the window position for CIDL.
  double delta() const noexcept { return delta_; }
  /// CIDL window offset.
  int gamma() const noexcept { return gamma_; }
  /// APDL coefficient.
  double eta() const noexcept { return eta_; }
  /// CIDL coefficients.
  const std::array<double, 4>& kernel() const noexcept { return kernel_; }

  /// Deepest past state read per sample (1 means only h^{n-1}).
  int history_depth() const noexcept;

 private:
  Method kind_;
  double factor_;
  bool pure_delay_ = false;
  int delay_ = 1;
  int whole_ = 1;
  double delta_ = 0.0;
  int gamma_ = 1;
  double eta_ = 1.0;
  std::array<double, 4> kernel_{1.0, 0.0, 0.0, 0.0};
};

/// Fixed-capacity circular history of full states. Slots start zeroed, so
/// lags beyond what has been written read as the zero initial state.
template <typename T>
class StateRing {
 public:
  StateRing(std::size_t state_size, std::size_t capacity);

  std::size_t state_size() const noexcept { return state_size_; }
  std::size_t capacity() const noexcept { return capacity_; }

  /// State written `lag` commits ago; 1 <= lag < capacity.
  std::span<const T> past(std::size_t lag) const;
  /// Slot that the next commit() publishes. Never aliases past(1..capacity-1).
  std::span<T> next_slot();
  void commit();
  void reset();

 private:
  std::size_t state_size_;
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::vector<T> storage_;
};

/// The state path of an adaptation method, independent of the cell.
///
/// Per sample: delayed_state() yields the state the cell should consume
/// (an approximation of h^{n-M}, or h^{n-1} for Naive/STN); the caller writes
/// f(.) into cell_output(); commit() applies any STN blending, publishes the
/// new state into the history and returns it. delayed_state() advances the
/// all-pass filter, so it must be called exactly once per sample.
template <typename T>
class StateAdapter {
 public:
  StateAdapter(const AdaptationMethod& method, std::size_t state_size);

  std::span<const T> delayed_state();
  std::span<T> cell_output();
  std::span<const T> commit();
  void reset();

  const AdaptationMethod& method() const noexcept { return method_; }
  const StateRing<T>& history() const noexcept { return ring_; }

 private:
  AdaptationMethod method_;
  StateRing<T> ring_;
  std::vector<T> scratch_;    // interpolated state (LIDL/CIDL)
  std::vector<T> allpass_;    // a^n (APDL)
  std::vector<T> residual_;   // raw f output (STN)
  T coef_a_;                  // LIDL: 1-delta, APDL: eta, STN: 1-1/M
  T coef_b_;                  // LIDL: delta, STN: 1/M
  std::array<T, 4> kernel_;
};

extern template class StateRing<double>;
extern template class StateRing<float>;
extern template class StateAdapter<double>;
extern template class StateAdapter<float>;

/// A model running at M times its training rate under one adaptation method.
/// Order per sample: read delayed state, evaluate the cell, store the new
/// state, evaluate the output head.
template <typename T>
class AdaptedStream {
 public:
  AdaptedStream(const RnnModel& model, const AdaptationMethod& method);

  T step(T x);
  void process(std::span<const T> input, std::span<T> output);
  void reset();

  const AdaptationMethod& method() const noexcept { return adapter_.method(); }
  std::span<const T> state() const { return adapter_.history().past(1); }

 private:
  CellKernel<T> cell_;
  StateAdapter<T> adapter_;
};

extern template class AdaptedStream<double>;
extern template class AdaptedStream<float>;

/// Relative tolerance on input.rate == M * train_rate.
inline constexpr double kRateTolerance = 1e-4;

/// Streams `input` (at M * train_rate) through the adapted model from zero
/// state. Throws RateError when the rate does not match.
AudioBuffer process_adapted(const RnnModel& model, const AdaptationMethod& method,
                            const AudioBuffer& input, Precision precision = Precision::Double);

}  // namespace srirnn
