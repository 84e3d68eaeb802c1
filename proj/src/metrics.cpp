#include "srirnn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "srirnn/cell.hpp"
#include "srirnn/error.hpp"
#include "srirnn/fft.hpp"
#include "srirnn/resampler.hpp"

namespace srirnn::metrics {
namespace {

using Complex = std::complex<double>;

// Scale from a windowed DTFT value to the phasor a e^{j phi} of the component.
double phasor_gain(int order, double window_sum) { return (order == 0 ? 1.0 : 2.0) / window_sum; }

double ratio_db(double signal_energy, double noise_energy) {
  if (noise_energy == 0.0) return kInfiniteSnr;
  return 10.0 * std::log10(signal_energy / noise_energy);
}

// Bins of the shorter analysis length, requiring an exact length ratio.
std::size_t base_length(const AudioBuffer& y_tilde, double base_rate) {
  const double exact = double(y_tilde.size()) * base_rate / y_tilde.rate;
  const double rounded = std::round(exact);
  if (rounded < 2.0 || std::abs(exact - rounded) > 1e-6) {
    throw DomainError("bin spacing mismatch: " + std::to_string(y_tilde.size()) + " samples at " +
                      std::to_string(y_tilde.rate) + " Hz has no equal-spacing counterpart at " +
                      std::to_string(base_rate) + " Hz");
  }
  return std::size_t(rounded);
}

std::vector<double> windowed(std::span<const double> x, std::span<const double> window) {
  std::vector<double> out(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) out[n] = x[n] * window[n];
  return out;
}

std::vector<double> magnitudes(std::span<const Complex> spectrum, std::size_t count) {
  std::vector<double> mag(count);
  for (std::size_t k = 0; k < count; ++k) mag[k] = std::abs(spectrum[k]);
  return mag;
}

std::vector<double> analysis_window(std::size_t n) {
  return chebyshev_window(n, kWindowAttenuationDb, WindowSymmetry::Periodic);
}

std::size_t search_radius(std::size_t n) {
  return std::size_t(std::ceil(chebyshev_mainlobe_halfwidth(n, kWindowAttenuationDb))) + 1;
}

std::size_t peak_near(std::span<const double> mag, double centre, std::size_t radius) {
  const auto c = std::ptrdiff_t(std::llround(centre));
  const auto last = std::ptrdiff_t(mag.size()) - 1;
  const std::ptrdiff_t lo = std::clamp(c - std::ptrdiff_t(radius), std::ptrdiff_t(0), last);
  const std::ptrdiff_t hi = std::clamp(c + std::ptrdiff_t(radius), std::ptrdiff_t(0), last);
  std::size_t best = std::size_t(lo);
  for (std::ptrdiff_t k = lo; k <= hi; ++k) {
    if (mag[std::size_t(k)] > mag[best]) best = std::size_t(k);
  }
  return best;
}

// Cap just below the base Nyquist so every extracted harmonic is synthesisable there.
double band_limit(double base_rate) { return std::nextafter(base_rate / 2.0, 0.0); }

}  // namespace

double snr_db(const AudioBuffer& reference, const AudioBuffer& test) {
  if (reference.size() != test.size()) {
    throw ShapeError("test", "[" + std::to_string(reference.size()) + "]",
                     "[" + std::to_string(test.size()) + "]");
  }
  if (reference.rate != test.rate) throw RateError("SNR operands have different sample rates");
  double signal = 0.0;
  double noise = 0.0;
  for (std::size_t n = 0; n < reference.size(); ++n) {
    const double e = reference.samples[n] - test.samples[n];
    signal += reference.samples[n] * reference.samples[n];
    noise += e * e;
  }
  if (signal == 0.0) throw DomainError("SNR reference has zero energy");
  return ratio_db(signal, noise);
}

std::vector<double> chebyshev_window(std::size_t n, double attenuation_db, WindowSymmetry symmetry) {
  if (n < 2) throw DomainError("Chebyshev window needs at least 2 points");
  if (symmetry == WindowSymmetry::Periodic) {
    auto w = chebyshev_window(n + 1, attenuation_db, WindowSymmetry::Symmetric);
    w.pop_back();
    return w;
  }
  if (!(attenuation_db > 0.0)) throw DomainError("Chebyshev attenuation must be positive");
  const double order = double(n - 1);
  const double beta = std::cosh(std::acosh(std::pow(10.0, attenuation_db / 20.0)) / order);
  const bool odd = n % 2 == 1;

  std::vector<Complex> p(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = beta * std::cos(std::numbers::pi * double(k) / double(n));
    double value;
    if (x > 1.0) {
      value = std::cosh(order * std::acosh(x));
    } else if (x < -1.0) {
      value = (odd ? 1.0 : -1.0) * std::cosh(order * std::acosh(-x));
    } else {
      value = std::cos(order * std::acos(x));
    }
    p[k] = odd ? Complex(value, 0.0)
               : value * std::polar(1.0, std::numbers::pi * double(k) / double(n));
  }
  const auto spectrum = fft::forward(p);

  std::vector<double> w(n);
  if (odd) {
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
      w[half - 1 + i] = spectrum[i].real();
      w[half - 1 - i] = spectrum[i].real();
    }
  } else {
    const std::size_t half = n / 2 + 1;
    for (std::size_t i = 1; i < half; ++i) {
      w[half - 2 + i] = spectrum[i].real();
      w[half - 1 - i] = spectrum[i].real();
    }
  }
  const double peak = *std::max_element(w.begin(), w.end());
  for (double& v : w) v /= peak;
  return w;
}

double chebyshev_mainlobe_halfwidth(std::size_t n, double attenuation_db) {
  if (n < 2) throw DomainError("Chebyshev window needs at least 2 points");
  const double order = double(n - 1);
  const double x0 = std::cosh(std::acosh(std::pow(10.0, attenuation_db / 20.0)) / order);
  const double arg = std::min(1.0, std::cos(std::numbers::pi / (2.0 * order)) / x0);
  return std::acos(arg) * double(n) / std::numbers::pi;
}

HarmonicSet extract_harmonics(const AudioBuffer& signal, double f0, double f_max, Execution exec) {
  if (signal.size() < 2) throw DomainError("harmonic extraction needs at least 2 samples");
  if (!(f0 > 0.0) || f0 >= signal.rate / 2.0) {
    throw DomainError("fundamental " + std::to_string(f0) + " Hz must lie in (0, rate/2)");
  }
  const std::size_t n = signal.size();
  const double rate = signal.rate;
  const auto window = analysis_window(n);
  double window_sum = 0.0;
  for (double v : window) window_sum += v;

  HarmonicSet set;
  set.f0 = f0;
  std::vector<double> freqs;
  for (int k = 0;; ++k) {
    const double f = k * f0;
    if (f > f_max || (k > 0 && f >= rate / 2.0)) break;
    freqs.push_back(f);
  }

  const auto xw = windowed(signal.samples, window);
  const auto mag = magnitudes(fft::forward(std::span<const double>(xw)), n / 2 + 1);
  const std::size_t radius = search_radius(n);

  auto coefs = kernels::dtft(xw, rate, freqs, exec);
  std::vector<Complex> phasors(freqs.size());
  for (std::size_t k = 0; k < freqs.size(); ++k) phasors[k] = coefs[k] * phasor_gain(int(k), window_sum);

  // Least-squares refinement on the windowed residual.
  std::vector<double> model(n, 0.0);
  kernels::add_cosines(model, rate, freqs, phasors, exec);
  std::vector<double> residual(n);
  for (std::size_t i = 0; i < n; ++i) residual[i] = (signal.samples[i] - model[i]) * window[i];
  const auto correction = kernels::dtft(residual, rate, freqs, exec);
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    phasors[k] += correction[k] * phasor_gain(int(k), window_sum);
  }

  set.harmonics.reserve(freqs.size());
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    Harmonic h;
    h.order = int(k);
    h.frequency = freqs[k];
    h.amplitude = std::abs(phasors[k]);
    h.phase = std::arg(phasors[k]);
    h.peak_bin = peak_near(mag, freqs[k] * double(n) / rate, radius);
    set.harmonics.push_back(h);
  }
  return set;
}

AudioBuffer synth_harmonics(const HarmonicSet& set, double rate, std::size_t n_samples,
                            Execution exec) {
  if (!(rate > 0.0)) throw DomainError("synthesis rate must be positive");
  std::vector<double> freqs;
  std::vector<Complex> phasors;
  for (const Harmonic& h : set.harmonics) {
    if (h.frequency != 0.0 && !(h.frequency < rate / 2.0)) {
      throw DomainError("harmonic at " + std::to_string(h.frequency) + " Hz is not below Nyquist " +
                        std::to_string(rate / 2.0) + " Hz");
    }
    freqs.push_back(h.frequency);
    phasors.push_back(std::polar(h.amplitude, h.phase));
  }
  AudioBuffer out;
  out.rate = rate;
  out.samples.assign(n_samples, 0.0);
  kernels::add_cosines(out.samples, rate, freqs, phasors, exec);
  return out;
}

double snra_db(const AudioBuffer& y_tilde, double f0, double base_rate) {
  const std::size_t n = base_length(y_tilde, base_rate);
  const std::size_t n_tilde = y_tilde.size();

  const HarmonicSet set = extract_harmonics(y_tilde, f0, band_limit(base_rate));
  const AudioBuffer y_bl = synth_harmonics(set, base_rate, n);

  const auto w_tilde = analysis_window(n_tilde);
  const auto w_base = analysis_window(n);
  const auto Y = magnitudes(fft::forward(std::span<const double>(windowed(y_tilde.samples, w_tilde))),
                            n / 2 + 1);
  const auto Y_bl = magnitudes(fft::forward(std::span<const double>(windowed(y_bl.samples, w_base))),
                               n / 2 + 1);

  // Equal Hz-per-bin, so the fundamental sits at the same bin index in both.
  const double centre = f0 * double(n) / base_rate;
  const std::size_t radius = search_radius(n);
  const double ref = Y[peak_near(Y, centre, radius)];
  const double bl = Y_bl[peak_near(Y_bl, centre, radius)];
  if (bl == 0.0) throw DomainError("band-limited resynthesis has no fundamental");
  const double scale = ref / bl;

  double signal = 0.0;
  double noise = 0.0;
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const double b = scale * Y_bl[k];
    const double d = Y[k] - b;
    signal += b * b;
    noise += d * d;
  }
  return ratio_db(signal, noise);
}

double snrh_db(const AudioBuffer& y_base, const AudioBuffer& y_tilde, double f0, double base_rate) {
  if (std::abs(y_base.rate - base_rate) > 1e-9 * base_rate) {
    throw RateError("baseline output must be at the base rate");
  }
  const std::size_t n = base_length(y_tilde, base_rate);
  if (n != y_base.size()) {
    throw DomainError("bin spacing mismatch: baseline has " + std::to_string(y_base.size()) +
                      " samples, adapted output corresponds to " + std::to_string(n));
  }
  const double cap = band_limit(base_rate);
  const AudioBuffer y_bl = synth_harmonics(extract_harmonics(y_base, f0, cap), base_rate, n);
  const AudioBuffer y_tilde_bl = synth_harmonics(extract_harmonics(y_tilde, f0, cap), base_rate, n);
  return snr_db(y_bl, y_tilde_bl);
}

std::vector<double> piano_tones() {
  std::vector<double> tones(88);
  for (int k = 0; k < 88; ++k) tones[std::size_t(k)] = 27.5 * std::exp2(double(k) / 12.0);
  return tones;
}

AudioBuffer sine_tone(const ToneSpec& tone, double rate) {
  if (!(tone.f0 > 0.0) || tone.f0 >= rate / 2.0) {
    throw DomainError("tone frequency must lie in (0, rate/2)");
  }
  AudioBuffer out;
  out.rate = rate;
  out.samples.resize(std::size_t(std::llround(tone.duration * rate)));
  const double step = 2.0 * std::numbers::pi * tone.f0 / rate;
  for (std::size_t n = 0; n < out.samples.size(); ++n) {
    out.samples[n] = tone.amplitude * std::sin(step * double(n));
  }
  return out;
}

ToneMeasurement measure_tone(const RnnModel& model, Method method, double target_rate,
                             const ToneSpec& tone, Precision precision) {
  const double base_rate = model.train_rate;
  const AdaptationMethod adaptation(method, target_rate / base_rate);

  const AudioBuffer x = sine_tone(tone, base_rate);
  const AudioBuffer x_tilde = sine_tone(tone, target_rate);
  const AudioBuffer y = process_baseline(model, x, precision);
  const AudioBuffer y_tilde = process_adapted(model, adaptation, x_tilde, precision);

  const auto skip = std::size_t(std::llround(tone.transient * base_rate));
  const auto skip_tilde = std::size_t(std::llround(tone.transient * target_rate));
  if (std::abs(double(skip) * target_rate - double(skip_tilde) * base_rate) > 1e-6 * base_rate ||
      skip >= y.size() || skip_tilde >= y_tilde.size()) {
    throw DomainError("transient of " + std::to_string(tone.transient) +
                      " s is not a whole number of samples at both rates");
  }
  AudioBuffer seg{std::vector<double>(y.samples.begin() + std::ptrdiff_t(skip), y.samples.end()), base_rate};
  AudioBuffer seg_tilde{std::vector<double>(y_tilde.samples.begin() + std::ptrdiff_t(skip_tilde),
                                            y_tilde.samples.end()),
                        target_rate};

  ToneMeasurement m;
  m.snrh_db = snrh_db(seg, seg_tilde, tone.f0, base_rate);
  m.snra_db = snra_db(seg_tilde, tone.f0, base_rate);
  return m;
}

double audio_snr_db(const RnnModel& model, Method method, double target_rate,
                    const AudioBuffer& input, Precision precision) {
  const AdaptationMethod adaptation(method, target_rate / model.train_rate);
  const AudioBuffer y = process_baseline(model, input, precision);
  const AudioBuffer x_tilde = resample_fft(input, target_rate);
  const AudioBuffer y_tilde = process_adapted(model, adaptation, x_tilde, precision);
  AudioBuffer y_hat = resample_fft(y_tilde, model.train_rate);
  y_hat.rate = y.rate;
  y_hat.samples.resize(y.size(), 0.0);
  return snr_db(y, y_hat);
}

}  // namespace srirnn::metrics
