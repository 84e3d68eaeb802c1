#pragma once

#include <complex>
#include <span>
#include <vector>

#include "srirnn/adaptation.hpp"

namespace srirnn::linear {

using Complex = std::complex<double>;

/// The one-pole test system h^n = A h^{n-1} + x^n, y^n = h^n, with
/// A = exp(-2 pi f_c / F_s).
struct OnePole {
  double pole = 0.0;
  double cutoff_hz = 0.0;
  double base_rate = 44100.0;

  static OnePole from_cutoff(double cutoff_hz, double base_rate = 44100.0);
  static OnePole from_pole(double pole, double base_rate = 44100.0);
};

/// Pole used throughout the figures: A = exp(-20 pi / 44.1), i.e. f_c = 10 kHz.
double reference_pole();

/// Base-rate response 1 / (1 - A e^{-j w T}); omega in rad/s, T = 1/F_s.
Complex base_response(double omega, double pole, double period);

/// Closed-form response of the one-pole system run at F_s' = M F_s under
/// `method`; omega in rad/s, `period` the base period T (T' = T/M).
/// For integer M the delay methods use their common pure-delay form, which is
/// also the removable-singularity limit of the all-pass expression.
Complex analytic_response(const AdaptationMethod& method, double omega, double pole, double period);
Complex analytic_response(Method method, double omega, double pole, double factor, double period);

/// Unit-pulse response of the one-pole system through the sr-adapt state
/// path (StateAdapter) with f(h, x) = A h + x and identity output.
std::vector<double> simulate_onepole(const AdaptationMethod& method, double pole,
                                     std::size_t n_samples);

/// 20 log10 |H_method / H_base| in dB. Throws DomainError if H_base is 0.
double spectral_error(Complex method_response, Complex base_response);

/// Frequencies (Hz) at which spectral errors are averaged.
struct FrequencyGrid {
  std::vector<double> hz;

  /// `points` log-spaced values in [lo, hi]. Default: 4096 in [10, 22040] Hz.
  static FrequencyGrid log_spaced(std::size_t points = 4096, double lo_hz = 10.0,
                                  double hi_hz = 22040.0);
};

/// Mean of |L(w)| over the grid (base rate F_s = 1/period).
double mean_spectral_error(const AdaptationMethod& method, double pole, const FrequencyGrid& grid,
                           double base_rate = 44100.0);
double mean_spectral_error(Method method, double factor, double pole, const FrequencyGrid& grid,
                           double base_rate = 44100.0);

/// Pole locations for sweeps: A = exp(-2 pi f_c / F_s) with f_c log-spaced
/// over [lo, hi] Hz, followed by the near-unit-circle values 0.999, 0.9999.
std::vector<OnePole> default_pole_grid(std::size_t points = 64, double lo_hz = 20.0,
                                       double hi_hz = 20000.0, double base_rate = 44100.0);

struct PoleSweepPoint {
  OnePole system;
  double mean_error_db = 0.0;
};

/// Result of comparing the DFT of a simulated impulse response against the
/// closed form on every DFT bin.
struct OracleCheck {
  double max_relative_error = 0.0;
  std::size_t worst_bin = 0;
  std::size_t bins = 0;
};

/// Default impulse-response length (oversampled rate).
inline constexpr std::size_t kImpulseLength = std::size_t(1) << 17;

OracleCheck check_against_analytic(const AdaptationMethod& method, double pole,
                                   std::size_t n_samples = kImpulseLength,
                                   double base_rate = 44100.0);

}  // namespace srirnn::linear
