#include "srirnn/kernels.hpp"

#include <cmath>
#include <numbers>

#include "srirnn/error.hpp"

namespace srirnn::kernels {
namespace {

Complex dtft_one(std::span<const double> x, double theta) {
  Complex acc(0.0, 0.0);
  const Complex rot = std::polar(1.0, -theta);
  for (std::size_t start = 0; start < x.size(); start += kPhasorBlock) {
    Complex phasor = std::polar(1.0, -theta * double(start));
    const std::size_t end = std::min(x.size(), start + kPhasorBlock);
    Complex block(0.0, 0.0);
    for (std::size_t n = start; n < end; ++n) {
      block += x[n] * phasor;
      phasor *= rot;
    }
    acc += block;
  }
  return acc;
}

void cosine_block(std::span<double> out, std::size_t block, std::span<const double> thetas,
                  std::span<const Complex> phasors) {
  const std::size_t start = block * kPhasorBlock;
  const std::size_t end = std::min(out.size(), start + kPhasorBlock);
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    Complex phasor = phasors[k] * std::polar(1.0, thetas[k] * double(start));
    const Complex rot = std::polar(1.0, thetas[k]);
    for (std::size_t n = start; n < end; ++n) {
      out[n] += phasor.real();
      phasor *= rot;
    }
  }
}

}  // namespace

std::vector<Complex> dtft(std::span<const double> x, double rate, std::span<const double> freqs,
                          Execution exec) {
  std::vector<Complex> out(freqs.size());
  const double scale = 2.0 * std::numbers::pi / rate;
  const auto count = std::ptrdiff_t(freqs.size());
  if (exec == Execution::Serial) {
    for (std::ptrdiff_t i = 0; i < count; ++i) out[std::size_t(i)] = dtft_one(x, scale * freqs[std::size_t(i)]);
  } else {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < count; ++i) out[std::size_t(i)] = dtft_one(x, scale * freqs[std::size_t(i)]);
  }
  return out;
}

void add_cosines(std::span<double> out, double rate, std::span<const double> freqs,
                 std::span<const Complex> phasors, Execution exec) {
  if (freqs.size() != phasors.size()) throw DomainError("add_cosines: frequency/phasor count mismatch");
  std::vector<double> thetas(freqs.size());
  for (std::size_t k = 0; k < freqs.size(); ++k) thetas[k] = 2.0 * std::numbers::pi * freqs[k] / rate;
  const auto blocks = std::ptrdiff_t((out.size() + kPhasorBlock - 1) / kPhasorBlock);
  if (exec == Execution::Serial) {
    for (std::ptrdiff_t b = 0; b < blocks; ++b) cosine_block(out, std::size_t(b), thetas, phasors);
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < blocks; ++b) cosine_block(out, std::size_t(b), thetas, phasors);
  }
}

}  // namespace srirnn::kernels
