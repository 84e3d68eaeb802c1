#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "srirnn/adaptation.hpp"
#include "srirnn/audio.hpp"
#include "srirnn/kernels.hpp"
#include "srirnn/rnn_model.hpp"

namespace srirnn::metrics {

/// Returned by the SNR functions when the error energy is exactly zero.
inline constexpr double kInfiniteSnr = std::numeric_limits<double>::infinity();

/// Stop-band attenuation of every analysis window.
inline constexpr double kWindowAttenuationDb = 120.0;

/// 10 log10( sum ref^2 / sum (ref - test)^2 ).
double snr_db(const AudioBuffer& reference, const AudioBuffer& test);

enum class WindowSymmetry { Symmetric, Periodic };

/// Dolph-Chebyshev window, peak normalised to 1, built from the
/// Chebyshev-polynomial frequency samples and an inverse DFT. The periodic
/// variant is the symmetric window of n + 1 points without its last sample,
/// so windows of n and M n points over the same signal span the same time.
std::vector<double> chebyshev_window(std::size_t n, double attenuation_db,
                                     WindowSymmetry symmetry = WindowSymmetry::Symmetric);

/// Distance from the peak to the first null of the window transform, in
/// DFT bins of the window's own length.
double chebyshev_mainlobe_halfwidth(std::size_t n, double attenuation_db);

struct Harmonic {
  int order = 0;            // k; 0 is the DC term
  double frequency = 0.0;   // nominal k * f0, Hz
  double amplitude = 0.0;   // >= 0
  double phase = 0.0;       // rad, component a cos(2 pi f t + phase), t from the first sample
  std::size_t peak_bin = 0; // strongest DFT bin near the nominal bin
};

struct HarmonicSet {
  double f0 = 0.0;
  std::vector<Harmonic> harmonics;  // ascending order
};

/// Harmonic components k * f0 <= f_max (k >= 0, and below the signal's own
/// Nyquist) of a steady-state periodic signal.
///
/// The signal is windowed (periodic Chebyshev, 120 dB). For each k the strongest bin
/// within ceil(mainlobe half-width) + 1 bins of the nominal bin is located;
/// the complex amplitude is then measured at the nominal frequency itself and
/// scaled by 2 / sum(window) (1 / sum(window) for DC). One least-squares
/// refinement pass re-measures the residual after subtracting the resynthesised
/// harmonics, which removes the mutual sidelobe leakage between components.
HarmonicSet extract_harmonics(const AudioBuffer& signal, double f0, double f_max,
                              Execution exec = Execution::Parallel);

/// sum_k a_k cos(2 pi f_k n / rate + phi_k), n = 0..n_samples-1. Every
/// non-DC harmonic must lie strictly below rate / 2.
AudioBuffer synth_harmonics(const HarmonicSet& set, double rate, std::size_t n_samples,
                            Execution exec = Execution::Parallel);

/// Signal-to-aliasing-noise ratio of `y_tilde` (at M * base_rate) in dB: the
/// spectrum of y_tilde against an alias-free resynthesis of its harmonics at
/// the base rate, over the bins up to the base Nyquist.
double snra_db(const AudioBuffer& y_tilde, double f0, double base_rate);

/// Signal-to-harmonic-noise ratio in dB between band-limited resyntheses of
/// the baseline output and the adapted output, both at the base rate.
double snrh_db(const AudioBuffer& y_base, const AudioBuffer& y_tilde, double f0, double base_rate);

/// The 88 piano fundamentals 27.5 * 2^(k/12), k = 0..87.
std::vector<double> piano_tones();

struct ToneSpec {
  double f0 = 440.0;
  double duration = 1.0;    // s
  double amplitude = 0.1;   // linear
  double transient = 0.1;   // s discarded before analysis
};

/// amplitude * sin(2 pi f0 n / rate) for duration seconds.
AudioBuffer sine_tone(const ToneSpec& tone, double rate);

struct ToneMeasurement {
  double snrh_db = 0.0;
  double snra_db = 0.0;
};

/// Sine-tone protocol: the tone is generated at the training rate and at
/// target_rate, run through the baseline and the adapted model, trimmed by the
/// transient, and scored with snrh_db / snra_db. Throws DomainError when the
/// two analysis lengths do not share the same bin spacing.
ToneMeasurement measure_tone(const RnnModel& model, Method method, double target_rate,
                             const ToneSpec& tone, Precision precision = Precision::Double);

/// Audio-input protocol: upsample `input` (at the training rate) to
/// target_rate, run the adapted model, downsample back and compare with the
/// baseline output.
double audio_snr_db(const RnnModel& model, Method method, double target_rate,
                    const AudioBuffer& input, Precision precision = Precision::Double);

}  // namespace srirnn::metrics
