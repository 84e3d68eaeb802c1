#include "srirnn/audio.hpp"

#include <cmath>
#include <string>

#include "srirnn/error.hpp"

namespace srirnn {

void validate(const AudioBuffer& buffer) {
  if (!(buffer.rate > 0.0) || !std::isfinite(buffer.rate)) {
    throw DomainError("audio buffer rate must be positive, got " + std::to_string(buffer.rate));
  }
  for (std::size_t i = 0; i < buffer.samples.size(); ++i) {
    if (!std::isfinite(buffer.samples[i])) {
      throw DomainError("audio buffer sample " + std::to_string(i) + " is not finite");
    }
  }
}

}  // namespace srirnn
