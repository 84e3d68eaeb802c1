#include "srirnn/resampler.hpp"

#include <cmath>
#include <string>

#include "srirnn/error.hpp"
#include "srirnn/fft.hpp"

namespace srirnn {

std::size_t resampled_length(std::size_t input_length, double source_rate, double target_rate) {
  return std::size_t(std::round(double(input_length) * target_rate / source_rate));
}

AudioBuffer resample_fft(const AudioBuffer& input, double target_rate) {
  if (input.empty()) throw DomainError("cannot resample an empty buffer");
  if (!(input.rate > 0.0)) throw DomainError("source rate must be positive");
  if (!(target_rate > 0.0) || !std::isfinite(target_rate)) {
    throw DomainError("target rate must be positive, got " + std::to_string(target_rate));
  }
  const std::size_t n_in = input.size();
  const std::size_t n_out = resampled_length(n_in, input.rate, target_rate);
  if (n_out == 0) throw DomainError("resampled length rounds to zero");
  // Same length: the band-limited interpolant returns the input samples.
  if (n_out == n_in) return AudioBuffer{input.samples, target_rate};

  const auto spectrum = fft::forward(std::span<const double>(input.samples));
  std::vector<fft::Complex> out_spectrum(n_out, fft::Complex(0.0, 0.0));

  const std::size_t shorter = std::min(n_in, n_out);
  // Bins strictly below the shorter length's Nyquist, both signs.
  const std::size_t shared = (shorter + 1) / 2;
  for (std::size_t k = 0; k < shared; ++k) out_spectrum[k] = spectrum[k];
  for (std::size_t k = 1; k < shared; ++k) out_spectrum[n_out - k] = spectrum[n_in - k];

  if (shorter % 2 == 0) {
    const std::size_t nyq = shorter / 2;
    if (n_out > n_in) {
      const fft::Complex half = 0.5 * spectrum[nyq];
      out_spectrum[nyq] = half;
      out_spectrum[n_out - nyq] = half;
    } else {
      out_spectrum[nyq] = spectrum[nyq] + spectrum[n_in - nyq];
    }
  }

  const auto time = fft::inverse(out_spectrum);
  AudioBuffer out;
  out.rate = target_rate;
  out.samples.resize(n_out);
  // Inverse is unnormalised (factor N'); the amplitude scale is N'/N.
  const double scale = 1.0 / double(n_in);
  for (std::size_t i = 0; i < n_out; ++i) out.samples[i] = time[i].real() * scale;
  return out;
}

}  // namespace srirnn
