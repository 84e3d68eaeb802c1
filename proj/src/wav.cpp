#include "srirnn/wav.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "srirnn/error.hpp"

namespace srirnn {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

static_assert(std::endian::native == std::endian::little, "WAV I/O assumes a little-endian host");

std::uint32_t u32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
         std::uint32_t(p[3]) << 24;
}
std::uint16_t u16(const std::uint8_t* p) { return std::uint16_t(p[0] | p[1] << 8); }

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}
void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(std::uint8_t(v));
  out.push_back(std::uint8_t(v >> 8));
}
void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

}  // namespace

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  const std::string where = path.string() + ": ";
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw ParseError(where + "not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::size_t size = u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = std::min(size, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (available < 16) throw ParseError(where + "truncated fmt chunk");
      format = u16(chunk + 8);
      channels = u16(chunk + 10);
      rate = u32(chunk + 12);
      bits = u16(chunk + 22);
      if (format == kFormatExtensible) {
        if (available < 26) throw ParseError(where + "truncated extensible fmt chunk");
        format = u16(chunk + 32);  // first two bytes of the sub-format GUID
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = available;
    }
    pos = body + size + (size & 1);
  }
  if (format == 0) throw ParseError(where + "missing fmt chunk");
  if (data == nullptr) throw ParseError(where + "missing data chunk");
  if (channels != 1) throw ParseError(where + "expected mono audio, found " + std::to_string(channels) + " channels");

  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool pcm24 = format == kFormatPcm && bits == 24;
  const bool f32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !pcm24 && !f32) {
    throw ParseError(where + "unsupported sample format " + std::to_string(format) + " with " +
                     std::to_string(bits) + " bits");
  }

  const std::size_t width = bits / 8;
  AudioBuffer out;
  out.rate = double(rate);
  out.samples.resize(data_size / width);
  for (std::size_t n = 0; n < out.samples.size(); ++n) {
    const std::uint8_t* s = data + n * width;
    if (pcm16) {
      out.samples[n] = double(std::int16_t(u16(s))) / 32768.0;
    } else if (pcm24) {
      const auto raw = std::int32_t(std::uint32_t(s[0]) << 8 | std::uint32_t(s[1]) << 16 |
                                    std::uint32_t(s[2]) << 24) >> 8;
      out.samples[n] = double(raw) / 8388608.0;
    } else {
      out.samples[n] = double(std::bit_cast<float>(u32(s)));
    }
  }
  validate(out);
  return out;
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& audio) {
  validate(audio);
  const double rounded = std::round(audio.rate);
  if (rounded != audio.rate || rounded > 4294967295.0) {
    throw DomainError("WAV needs an integer sample rate, got " + std::to_string(audio.rate));
  }
  const auto rate = std::uint32_t(rounded);
  const auto data_size = std::uint32_t(audio.size() * 4);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put32(out, 36 + data_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, kFormatFloat);
  put16(out, 1);
  put32(out, rate);
  put32(out, rate * 4);
  put16(out, 4);
  put16(out, 32);
  put_tag(out, "data");
  put32(out, data_size);
  for (double v : audio.samples) put32(out, std::bit_cast<std::uint32_t>(float(v)));

  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write " + path.string());
  file.write(reinterpret_cast<const char*>(out.data()), std::streamsize(out.size()));
  if (!file) throw IoError("write failed for " + path.string());
}

}  // namespace srirnn
