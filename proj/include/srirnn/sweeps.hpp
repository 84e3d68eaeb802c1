#pragma once

#include <span>
#include <string>
#include <vector>

#include "srirnn/adaptation.hpp"
#include "srirnn/kernels.hpp"
#include "srirnn/linear_analysis.hpp"
#include "srirnn/metrics.hpp"
#include "srirnn/rnn_model.hpp"

namespace srirnn {

/// One tone pipeline. `model` must outlive the sweep.
struct ToneTask {
  std::string model_name;
  const RnnModel* model = nullptr;
  Method method = Method::Naive;
  double target_rate = 44100.0;
  metrics::ToneSpec tone;
  Precision precision = Precision::Double;
};

struct ToneResult {
  std::string model_name;
  Method method = Method::Naive;
  double factor = 1.0;
  double f0 = 0.0;
  double snrh_db = 0.0;
  double snra_db = 0.0;
  double amplitude = 0.0;
};

/// Runs every task; results keep the task order. Parallel runs one task per
/// OpenMP work item.
std::vector<ToneResult> run_tone_sweep(std::span<const ToneTask> tasks,
                                       Execution exec = Execution::Parallel);

/// Mean spectral error of `method` for each pole.
std::vector<linear::PoleSweepPoint> pole_sweep(const AdaptationMethod& method,
                                               std::span<const linear::OnePole> poles,
                                               const linear::FrequencyGrid& grid,
                                               Execution exec = Execution::Parallel);

double median(std::vector<double> values);

}  // namespace srirnn
