#pragma once

#include <filesystem>

#include "srirnn/audio.hpp"

namespace srirnn {

/// Reads a mono RIFF/WAVE file: 16- or 24-bit PCM, or 32-bit IEEE float
/// (plain or WAVE_FORMAT_EXTENSIBLE). PCM is scaled to [-1, 1).
AudioBuffer read_wav(const std::filesystem::path& path);

/// Writes a mono 32-bit float WAVE file.
void write_wav(const std::filesystem::path& path, const AudioBuffer& audio);

}  // namespace srirnn
