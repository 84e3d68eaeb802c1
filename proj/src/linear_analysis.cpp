#include "srirnn/linear_analysis.hpp"

#include <cmath>
#include <numbers>

#include "srirnn/error.hpp"
#include "srirnn/fft.hpp"

namespace srirnn::linear {
namespace {

// e^{-j w T' k}
Complex delay_phasor(double omega_period, double k) { return std::polar(1.0, -omega_period * k); }

}  // namespace

OnePole OnePole::from_cutoff(double cutoff_hz, double base_rate) {
  return OnePole{std::exp(-2.0 * std::numbers::pi * cutoff_hz / base_rate), cutoff_hz, base_rate};
}

OnePole OnePole::from_pole(double pole, double base_rate) {
  if (!(pole > 0.0 && pole < 1.0)) throw DomainError("pole must lie in (0, 1)");
  return OnePole{pole, -std::log(pole) * base_rate / (2.0 * std::numbers::pi), base_rate};
}

double reference_pole() { return std::exp(-20.0 * std::numbers::pi / 44.1); }

Complex base_response(double omega, double pole, double period) {
  return 1.0 / (1.0 - pole * delay_phasor(omega * period, 1.0));
}

Complex analytic_response(const AdaptationMethod& method, double omega, double pole,
                          double period) {
  const double M = method.factor();
  const double wt = omega * period / M;
  const Complex z1 = delay_phasor(wt, 1.0);
  const double A = pole;

  if (method.kind() == Method::STN) return 1.0 / (M - (M + A - 1.0) * z1);
  if (method.is_pure_delay()) return 1.0 / (1.0 - A * delay_phasor(wt, method.delay()));

  switch (method.kind()) {
    case Method::LIDL: {
      const double a = method.delta();
      const Complex zw = delay_phasor(wt, method.whole_delay());
      return 1.0 / (1.0 - A * (1.0 - a + a * z1) * zw);
    }
    case Method::APDL: {
      const double eta = method.eta();
      const Complex zw = delay_phasor(wt, method.whole_delay());
      return (1.0 + eta * z1) / (1.0 + eta * z1 - A * (eta + z1) * zw);
    }
    case Method::CIDL: {
      Complex sum(0.0, 0.0);
      for (int k = 0; k < 4; ++k) {
        sum += method.kernel()[std::size_t(k)] * delay_phasor(wt, double(k + method.gamma()));
      }
      return 1.0 / (1.0 - A * sum);
    }
    default:
      throw DomainError("no closed-form response for this method");
  }
}

Complex analytic_response(Method method, double omega, double pole, double factor, double period) {
  return analytic_response(AdaptationMethod(method, factor), omega, pole, period);
}

std::vector<double> simulate_onepole(const AdaptationMethod& method, double pole,
                                     std::size_t n_samples) {
  StateAdapter<double> adapter(method, 1);
  std::vector<double> response(n_samples);
  for (std::size_t n = 0; n < n_samples; ++n) {
    const double x = n == 0 ? 1.0 : 0.0;
    const double h = adapter.delayed_state()[0];
    adapter.cell_output()[0] = pole * h + x;
    response[n] = adapter.commit()[0];
  }
  return response;
}

double spectral_error(Complex method_response, Complex base_response) {
  if (std::abs(base_response) == 0.0) throw DomainError("spectral error against a zero base response");
  return 20.0 * std::log10(std::abs(method_response / base_response));
}

FrequencyGrid FrequencyGrid::log_spaced(std::size_t points, double lo_hz, double hi_hz) {
  if (points < 2 || !(lo_hz > 0.0) || !(hi_hz > lo_hz)) {
    throw DomainError("frequency grid needs >= 2 points and 0 < lo < hi");
  }
  FrequencyGrid grid;
  grid.hz.resize(points);
  const double ratio = std::log(hi_hz / lo_hz);
  for (std::size_t i = 0; i < points; ++i) {
    grid.hz[i] = lo_hz * std::exp(ratio * double(i) / double(points - 1));
  }
  grid.hz.back() = hi_hz;
  return grid;
}

double mean_spectral_error(const AdaptationMethod& method, double pole, const FrequencyGrid& grid,
                           double base_rate) {
  const double period = 1.0 / base_rate;
  double sum = 0.0;
  for (double f : grid.hz) {
    const double omega = 2.0 * std::numbers::pi * f;
    sum += std::abs(spectral_error(analytic_response(method, omega, pole, period),
                                   base_response(omega, pole, period)));
  }
  return sum / double(grid.hz.size());
}

double mean_spectral_error(Method method, double factor, double pole, const FrequencyGrid& grid,
                           double base_rate) {
  return mean_spectral_error(AdaptationMethod(method, factor), pole, grid, base_rate);
}

std::vector<OnePole> default_pole_grid(std::size_t points, double lo_hz, double hi_hz,
                                       double base_rate) {
  const FrequencyGrid cutoffs = FrequencyGrid::log_spaced(points, lo_hz, hi_hz);
  std::vector<OnePole> grid;
  grid.reserve(points + 2);
  for (double fc : cutoffs.hz) grid.push_back(OnePole::from_cutoff(fc, base_rate));
  grid.push_back(OnePole::from_pole(0.999, base_rate));
  grid.push_back(OnePole::from_pole(0.9999, base_rate));
  return grid;
}

OracleCheck check_against_analytic(const AdaptationMethod& method, double pole,
                                   std::size_t n_samples, double base_rate) {
  const auto impulse = simulate_onepole(method, pole, n_samples);
  const auto spectrum = fft::forward(std::span<const double>(impulse));
  const double rate = method.factor() * base_rate;
  OracleCheck check;
  check.bins = n_samples / 2 + 1;
  for (std::size_t k = 0; k < check.bins; ++k) {
    const double omega = 2.0 * std::numbers::pi * double(k) * rate / double(n_samples);
    const Complex expected = analytic_response(method, omega, pole, 1.0 / base_rate);
    const double rel = std::abs(spectrum[k] - expected) / std::abs(expected);
    if (rel > check.max_relative_error) {
      check.max_relative_error = rel;
      check.worst_bin = k;
    }
  }
  return check;
}

}  // namespace srirnn::linear
