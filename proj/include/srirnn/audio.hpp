#pragma once

#include <cstddef>
#include <vector>

namespace srirnn {

/// Mono sample sequence tagged with its sample rate in Hz.
struct AudioBuffer {
  std::vector<double> samples;
  double rate = 0.0;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  double duration() const noexcept { return rate > 0.0 ? double(samples.size()) / rate : 0.0; }
};

/// Throws DomainError if the rate is not positive or any sample is non-finite.
void validate(const AudioBuffer& buffer);

}  // namespace srirnn
