#pragma once

#include <complex>
#include <span>
#include <vector>

namespace srirnn::fft {

using Complex = std::complex<double>;

/// Unnormalised forward DFT, X[k] = sum_n x[n] e^{-j 2 pi k n / N}, any N >= 1.
std::vector<Complex> forward(std::span<const Complex> input);
std::vector<Complex> forward(std::span<const double> input);

/// Unnormalised inverse DFT, x[n] = sum_k X[k] e^{+j 2 pi k n / N}.
std::vector<Complex> inverse(std::span<const Complex> input);

}  // namespace srirnn::fft
