#pragma once

#include <complex>
#include <span>
#include <vector>

namespace srirnn {

/// How a data-parallel kernel runs. Serial is the reference loop; Parallel
/// distributes the same independent work items over OpenMP threads and must
/// produce bit-identical results.
enum class Execution { Serial, Parallel };

namespace kernels {

using Complex = std::complex<double>;

/// Samples per block between exact phasor re-seeds in the oscillator loops.
inline constexpr std::size_t kPhasorBlock = 1024;

/// X(f) = sum_n x[n] e^{-j 2 pi f n / rate} for each f in `freqs`.
std::vector<Complex> dtft(std::span<const double> x, double rate, std::span<const double> freqs,
                          Execution exec = Execution::Parallel);

/// out[n] += sum_k Re(phasors[k] e^{j 2 pi freqs[k] n / rate}).
void add_cosines(std::span<double> out, double rate, std::span<const double> freqs,
                 std::span<const Complex> phasors, Execution exec = Execution::Parallel);

}  // namespace kernels
}  // namespace srirnn
