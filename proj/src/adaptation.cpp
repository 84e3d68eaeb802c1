#include "srirnn/adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <string>

#include <spdlog/spdlog.h>

#include "srirnn/error.hpp"

namespace srirnn {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Naive: return "naive";
    case Method::STN: return "stn";
    case Method::Delay: return "delay";
    case Method::LIDL: return "lidl";
    case Method::APDL: return "apdl";
    case Method::CIDL: return "cidl";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return char(std::tolower(ch)); });
  for (Method m : kAllMethods) {
    if (to_string(m) == lower) return m;
  }
  throw ParseError("unknown adaptation method '" + std::string(name) +
                   "' (expected naive, stn, delay, lidl, apdl or cidl)");
}

double allpass_eta(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw DomainError("all-pass fractional delay must lie in [0, 1], got " + std::to_string(delta));
  }
  return (1.0 - delta) / (1.0 + delta);
}

std::array<double, 4> lagrange_kernel(double delta) {
  if (!(delta >= 0.0 && delta <= 2.0)) {
    throw DomainError("Lagrange fractional delay must lie in [0, 2], got " + std::to_string(delta));
  }
  std::array<double, 4> l{};
  for (int n = 0; n < 4; ++n) {
    double prod = 1.0;
    for (int k = 0; k < 4; ++k) {
      if (k != n) prod *= (delta - k) / double(n - k);
    }
    l[std::size_t(n)] = prod;
  }
  return l;
}

CidlParams cidl_params(double factor) {
  if (!(factor > 1.0) || !std::isfinite(factor)) {
    throw DomainError("cubic interpolation parameters need M > 1, got " + std::to_string(factor));
  }
  const double offset = std::floor(std::abs(factor - 2.0));
  return CidlParams{1 + int(offset), factor - offset - 1.0};
}

namespace {

// Sweeps build many adapters with the same factor; warn once per value.
bool first_warning(double delta) {
  static std::mutex mutex;
  static std::set<double> seen;
  const std::lock_guard lock(mutex);
  return seen.insert(delta).second;
}

}  // namespace

AdaptationMethod::AdaptationMethod(Method kind, double factor) : kind_(kind), factor_(factor) {
  if (!std::isfinite(factor) || factor < 1.0) {
    throw DomainError("oversampling factor must be finite and >= 1, got " + std::to_string(factor));
  }
  const bool integer = factor == std::floor(factor);
  switch (kind) {
    case Method::Naive:
      pure_delay_ = true;
      delay_ = 1;
      break;
    case Method::STN:
      break;
    case Method::Delay:
      pure_delay_ = true;
      delay_ = int(std::lround(factor));
      break;
    case Method::LIDL:
    case Method::APDL:
      whole_ = int(std::floor(factor));
      delta_ = factor - std::floor(factor);
      eta_ = allpass_eta(delta_);
      if (integer) {
        pure_delay_ = true;
        delay_ = whole_;
      } else if (kind == Method::APDL && delta_ < 0.1 && first_warning(delta_)) {
        spdlog::warn(
            "APDL fractional delay {:.4f} is below 0.1; first-order all-pass interpolators are "
            "usually kept within [0.1, 1.1] to avoid pole-zero cancellation round-off",
            delta_);
      }
      break;
    case Method::CIDL:
      if (factor > 1.0) {
        const CidlParams p = cidl_params(factor);
        gamma_ = p.gamma;
        delta_ = p.delta;
      }
      kernel_ = lagrange_kernel(delta_);
      if (integer) {
        pure_delay_ = true;
        delay_ = int(factor);
      }
      break;
  }
}

int AdaptationMethod::history_depth() const noexcept {
  if (pure_delay_) return delay_;
  switch (kind_) {
    case Method::LIDL:
    case Method::APDL: return whole_ + 1;
    case Method::CIDL: return gamma_ + 3;
    default: return 1;
  }
}

template <typename T>
StateRing<T>::StateRing(std::size_t state_size, std::size_t capacity)
    : state_size_(state_size), capacity_(capacity), storage_(state_size * capacity, T(0)) {
  if (capacity < 2) throw DomainError("state ring needs capacity >= 2");
}

template <typename T>
std::span<const T> StateRing<T>::past(std::size_t lag) const {
  const std::size_t slot = (head_ + capacity_ - lag) % capacity_;
  return {storage_.data() + slot * state_size_, state_size_};
}

template <typename T>
std::span<T> StateRing<T>::next_slot() {
  return {storage_.data() + head_ * state_size_, state_size_};
}

template <typename T>
void StateRing<T>::commit() {
  head_ = head_ + 1 == capacity_ ? 0 : head_ + 1;
}

template <typename T>
void StateRing<T>::reset() {
  std::fill(storage_.begin(), storage_.end(), T(0));
  head_ = 0;
}

template <typename T>
StateAdapter<T>::StateAdapter(const AdaptationMethod& method, std::size_t state_size)
    : method_(method),
      ring_(state_size, std::size_t(method.history_depth()) + 1),
      scratch_(state_size, T(0)),
      allpass_(state_size, T(0)),
      residual_(state_size, T(0)),
      coef_a_(T(0)),
      coef_b_(T(0)),
      kernel_{} {
  switch (method.kind()) {
    case Method::STN:
      coef_a_ = T(1.0 - 1.0 / method.factor());
      coef_b_ = T(1.0 / method.factor());
      break;
    case Method::LIDL:
      coef_a_ = T(1.0 - method.delta());
      coef_b_ = T(method.delta());
      break;
    case Method::APDL:
      coef_a_ = T(method.eta());
      break;
    case Method::CIDL:
      for (std::size_t k = 0; k < 4; ++k) kernel_[k] = T(method.kernel()[k]);
      break;
    default:
      break;
  }
}

template <typename T>
std::span<const T> StateAdapter<T>::delayed_state() {
  if (method_.is_pure_delay()) return ring_.past(std::size_t(method_.delay()));

  const std::size_t S = ring_.state_size();
  switch (method_.kind()) {
    case Method::LIDL: {
      const auto near = ring_.past(std::size_t(method_.whole_delay()));
      const auto far = ring_.past(std::size_t(method_.whole_delay()) + 1);
      for (std::size_t i = 0; i < S; ++i) scratch_[i] = coef_a_ * near[i] + coef_b_ * far[i];
      return scratch_;
    }
    case Method::APDL: {
      const auto near = ring_.past(std::size_t(method_.whole_delay()));
      const auto far = ring_.past(std::size_t(method_.whole_delay()) + 1);
      for (std::size_t i = 0; i < S; ++i) allpass_[i] = coef_a_ * (near[i] - allpass_[i]) + far[i];
      return allpass_;
    }
    case Method::CIDL: {
      const auto gamma = std::size_t(method_.gamma());
      const auto h0 = ring_.past(gamma);
      const auto h1 = ring_.past(gamma + 1);
      const auto h2 = ring_.past(gamma + 2);
      const auto h3 = ring_.past(gamma + 3);
      for (std::size_t i = 0; i < S; ++i) {
        scratch_[i] = kernel_[0] * h0[i] + kernel_[1] * h1[i] + kernel_[2] * h2[i] +
                      kernel_[3] * h3[i];
      }
      return scratch_;
    }
    default:  // STN
      return ring_.past(1);
  }
}

template <typename T>
std::span<T> StateAdapter<T>::cell_output() {
  if (method_.kind() == Method::STN) return residual_;
  return ring_.next_slot();
}

template <typename T>
std::span<const T> StateAdapter<T>::commit() {
  if (method_.kind() == Method::STN) {
    const auto prev = ring_.past(1);
    auto next = ring_.next_slot();
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] = coef_a_ * prev[i] + coef_b_ * residual_[i];
    }
  }
  ring_.commit();
  return ring_.past(1);
}

template <typename T>
void StateAdapter<T>::reset() {
  ring_.reset();
  std::fill(scratch_.begin(), scratch_.end(), T(0));
  std::fill(allpass_.begin(), allpass_.end(), T(0));
  std::fill(residual_.begin(), residual_.end(), T(0));
}

template class StateRing<double>;
template class StateRing<float>;
template class StateAdapter<double>;
template class StateAdapter<float>;

template <typename T>
AdaptedStream<T>::AdaptedStream(const RnnModel& model, const AdaptationMethod& method)
    : cell_(model), adapter_(method, std::size_t(model.state_size())) {}

template <typename T>
T AdaptedStream<T>::step(T x) {
  const auto delayed = adapter_.delayed_state();
  cell_.step(delayed, x, adapter_.cell_output());
  const auto state = adapter_.commit();
  return cell_.output(state, x);
}

template <typename T>
void AdaptedStream<T>::process(std::span<const T> input, std::span<T> output) {
  if (input.size() != output.size()) {
    throw ShapeError("output", "[" + std::to_string(input.size()) + "]",
                     "[" + std::to_string(output.size()) + "]");
  }
  for (std::size_t n = 0; n < input.size(); ++n) output[n] = step(input[n]);
}

template <typename T>
void AdaptedStream<T>::reset() {
  adapter_.reset();
}

template class AdaptedStream<double>;
template class AdaptedStream<float>;

AudioBuffer process_adapted(const RnnModel& model, const AdaptationMethod& method,
                            const AudioBuffer& input, Precision precision) {
  const double expected = method.factor() * model.train_rate;
  if (std::abs(input.rate - expected) > kRateTolerance * expected) {
    throw RateError("input rate " + std::to_string(input.rate) + " Hz does not match M * train_rate = " +
                    std::to_string(expected) + " Hz");
  }
  AudioBuffer out;
  out.rate = input.rate;
  out.samples.resize(input.size());
  if (precision == Precision::Double) {
    AdaptedStream<double> stream(model, method);
    stream.process(input.samples, out.samples);
  } else {
    AdaptedStream<float> stream(model, method);
    for (std::size_t n = 0; n < input.size(); ++n) {
      out.samples[n] = double(stream.step(float(input.samples[n])));
    }
  }
  return out;
}

}  // namespace srirnn
