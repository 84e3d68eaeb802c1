#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "srirnn/audio.hpp"

namespace srirnn::fixtures {

inline std::vector<double> uniform_noise(std::size_t n, std::uint64_t seed, double amplitude = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-amplitude, amplitude);
  std::vector<double> x(n);
  for (double& v : x) v = d(rng);
  return x;
}

inline AudioBuffer noise_buffer(std::size_t n, double rate, std::uint64_t seed, double amplitude = 1.0) {
  return AudioBuffer{uniform_noise(n, seed, amplitude), rate};
}

// O(N^2) DFT, the textbook sum.
inline std::vector<std::complex<double>> direct_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      const double a = -2.0 * std::numbers::pi * double((k * t) % n) / double(n);
      acc += x[t] * std::polar(1.0, a);
    }
    out[k] = acc;
  }
  return out;
}

inline double relative_rms(const std::vector<double>& ref, const std::vector<double>& test) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    num += (ref[i] - test[i]) * (ref[i] - test[i]);
    den += ref[i] * ref[i];
  }
  return std::sqrt(num / den);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace srirnn::fixtures
