#pragma once

#include <cstddef>

#include "srirnn/audio.hpp"

namespace srirnn {

/// Output length used by resample_fft: round(N * target / source), halves
/// rounded away from zero.
std::size_t resampled_length(std::size_t input_length, double source_rate, double target_rate);

/// Whole-buffer sample-rate conversion in the DFT domain.
///
/// The length-N spectrum is mapped onto a length-N' spectrum, N' as above:
///
///   | case                 | shared bins            | Nyquist bin of the shorter length (L even) |
///   |----------------------|------------------------|--------------------------------------------|
///   | N' > N (upsampling)  | k = 0..ceil(N/2)-1 and | X[N/2] split in halves to Y[N/2], Y[N'-N/2] |
///   |                      | the mirrored negatives |                                            |
///   | N' < N (downsampling)| k = 0..ceil(N'/2)-1 and| Y[N'/2] = X[N'/2] + X[N-N'/2]              |
///   |                      | the mirrored negatives |                                            |
///   | N' = N               | all                    | -                                          |
///
/// All other output bins are zero. The result is scaled by N'/N and the
/// imaginary residue of the inverse transform is dropped. The buffer is
/// treated as one period of a periodic signal.
AudioBuffer resample_fft(const AudioBuffer& input, double target_rate);

}  // namespace srirnn
