#include "srirnn/sweeps.hpp"

#include <algorithm>
#include <cstddef>
#include <exception>

#include "srirnn/error.hpp"

namespace srirnn {
namespace {

ToneResult run_one(const ToneTask& task) {
  if (task.model == nullptr) throw DomainError("tone task without a model");
  const auto m = metrics::measure_tone(*task.model, task.method, task.target_rate, task.tone,
                                       task.precision);
  ToneResult r;
  r.model_name = task.model_name;
  r.method = task.method;
  r.factor = task.target_rate / task.model->train_rate;
  r.f0 = task.tone.f0;
  r.snrh_db = m.snrh_db;
  r.snra_db = m.snra_db;
  r.amplitude = task.tone.amplitude;
  return r;
}

}  // namespace

std::vector<ToneResult> run_tone_sweep(std::span<const ToneTask> tasks, Execution exec) {
  std::vector<ToneResult> results(tasks.size());
  const auto count = std::ptrdiff_t(tasks.size());
  if (exec == Execution::Serial) {
    for (std::ptrdiff_t i = 0; i < count; ++i) results[std::size_t(i)] = run_one(tasks[std::size_t(i)]);
    return results;
  }
  // Exceptions may not leave a parallel region; keep the first and rethrow.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      results[std::size_t(i)] = run_one(tasks[std::size_t(i)]);
    } catch (...) {
#pragma omp critical(srirnn_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

std::vector<linear::PoleSweepPoint> pole_sweep(const AdaptationMethod& method,
                                               std::span<const linear::OnePole> poles,
                                               const linear::FrequencyGrid& grid, Execution exec) {
  std::vector<linear::PoleSweepPoint> out(poles.size());
  const auto count = std::ptrdiff_t(poles.size());
  auto point = [&](std::ptrdiff_t i) {
    const linear::OnePole& p = poles[std::size_t(i)];
    out[std::size_t(i)] = {p, linear::mean_spectral_error(method, p.pole, grid, p.base_rate)};
  };
  if (exec == Execution::Serial) {
    for (std::ptrdiff_t i = 0; i < count; ++i) point(i);
  } else {
#pragma omp parallel for schedule(dynamic, 2)
    for (std::ptrdiff_t i = 0; i < count; ++i) point(i);
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw DomainError("median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + std::ptrdiff_t(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + std::ptrdiff_t(mid));
  return 0.5 * (lower + upper);
}

}  // namespace srirnn
