#include "srirnn/fft.hpp"

#include <mutex>

#include <fftw3.h>

#include "srirnn/error.hpp"

namespace srirnn::fft {
namespace {

// The FFTW planner is not re-entrant; executing a plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<Complex> transform(std::span<const Complex> input, int sign) {
  if (input.empty()) throw DomainError("DFT of an empty sequence");
  const int n = int(input.size());
  std::vector<Complex> out(input.size());
  std::vector<Complex> in(input.begin(), input.end());
  auto* in_ptr = reinterpret_cast<fftw_complex*>(in.data());
  auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, in_ptr, out_ptr, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw Error("fft_error", "FFTW failed to create a plan");
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

std::vector<Complex> forward(std::span<const Complex> input) { return transform(input, FFTW_FORWARD); }

std::vector<Complex> forward(std::span<const double> input) {
  std::vector<Complex> c(input.begin(), input.end());
  return transform(c, FFTW_FORWARD);
}

std::vector<Complex> inverse(std::span<const Complex> input) { return transform(input, FFTW_BACKWARD); }

}  // namespace srirnn::fft
