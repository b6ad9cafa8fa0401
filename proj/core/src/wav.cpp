#include "hamix/wav.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "hamix/error.hpp"

namespace hamix {
namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t load_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t load_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void store_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void store_tag(std::vector<std::uint8_t>& out, const char (&tag)[5]) {
  out.insert(out.end(), tag, tag + 4);
}

struct FmtChunk {
  std::uint16_t format_tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

std::string describe(const std::filesystem::path& path) {
  return "'" + path.string() + "'";
}

}  // namespace

SampleFormat parse_sample_format(std::string_view text) {
  if (text == "16" || text == "s16") return SampleFormat::kPcm16;
  if (text == "24" || text == "s24") return SampleFormat::kPcm24;
  if (text == "32f" || text == "f32" || text == "float") return SampleFormat::kFloat32;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown sample format '" + std::string(text) +
                  "' (expected 16, 24 or 32f)");
}

int bits_per_sample(SampleFormat format) noexcept {
  switch (format) {
    case SampleFormat::kPcm16: return 16;
    case SampleFormat::kPcm24: return 24;
    case SampleFormat::kFloat32: return 32;
  }
  return 0;
}

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + describe(path));
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());

  if (bytes.size() < 12) {
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), "RIFF", 4) == 0) {
      throw Error(ErrorCode::kTruncatedFile, describe(path) + ": truncated RIFF header");
    }
    throw Error(ErrorCode::kNotWav, describe(path) + ": not a RIFF/WAVE file");
  }
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::kNotWav, describe(path) + ": not a RIFF/WAVE file");
  }

  std::optional<FmtChunk> fmt;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* header = bytes.data() + pos;
    const std::uint32_t size = load_u32(header + 4);
    const std::size_t body = pos + 8;
    if (size > bytes.size() - body) {
      throw Error(ErrorCode::kTruncatedFile,
                  describe(path) + ": chunk '" +
                      std::string(reinterpret_cast<const char*>(header), 4) +
                      "' runs past end of file");
    }
    if (std::memcmp(header, "fmt ", 4) == 0) {
      if (size < 16) {
        throw Error(ErrorCode::kTruncatedFile, describe(path) + ": short fmt chunk");
      }
      const std::uint8_t* p = bytes.data() + body;
      FmtChunk f;
      f.format_tag = load_u16(p);
      f.channels = load_u16(p + 2);
      f.sample_rate = load_u32(p + 4);
      f.block_align = load_u16(p + 12);
      f.bits = load_u16(p + 14);
      if (f.format_tag == kFormatExtensible) {
        if (size < 40) {
          throw Error(ErrorCode::kTruncatedFile,
                      describe(path) + ": short extensible fmt chunk");
        }
        // First two bytes of the subformat GUID carry the real format tag.
        f.format_tag = load_u16(p + 24);
      }
      fmt = f;
    } else if (std::memcmp(header, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = size;
    }
    pos = body + size + (size & 1u);
  }

  if (!fmt) throw Error(ErrorCode::kTruncatedFile, describe(path) + ": missing fmt chunk");
  if (data == nullptr) {
    throw Error(ErrorCode::kTruncatedFile, describe(path) + ": missing data chunk");
  }

  const bool pcm = fmt->format_tag == kFormatPcm && (fmt->bits == 16 || fmt->bits == 24);
  const bool ieee = fmt->format_tag == kFormatFloat && fmt->bits == 32;
  if (!pcm && !ieee) {
    throw Error(ErrorCode::kUnsupportedCodec,
                describe(path) + ": unsupported codec (format tag " +
                    std::to_string(fmt->format_tag) + ", " +
                    std::to_string(fmt->bits) + " bits)");
  }
  if (fmt->channels == 0 || fmt->sample_rate == 0) {
    throw Error(ErrorCode::kUnsupportedCodec,
                describe(path) + ": zero channels or zero sample rate");
  }

  const std::size_t bytes_per_sample = fmt->bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * fmt->channels;
  const std::size_t frames = data_size / frame_bytes;
  if (frames == 0) throw Error(ErrorCode::kEmptyAudio, describe(path) + ": no audio frames");

  std::vector<std::vector<double>> channels(fmt->channels, std::vector<double>(frames));
  for (std::size_t i = 0; i < frames; ++i) {
    const std::uint8_t* frame = data + i * frame_bytes;
    for (std::size_t c = 0; c < fmt->channels; ++c) {
      const std::uint8_t* s = frame + c * bytes_per_sample;
      double value = 0.0;
      if (ieee) {
        value = std::bit_cast<float>(load_u32(s));
      } else if (fmt->bits == 16) {
        value = static_cast<std::int16_t>(load_u16(s)) / 32768.0;
      } else {
        std::int32_t v = s[0] | (s[1] << 8) | (s[2] << 16);
        if (v & 0x800000) v -= 0x1000000;
        value = v / 8388608.0;
      }
      channels[c][i] = value;
    }
  }
  return AudioBuffer(static_cast<int>(fmt->sample_rate), std::move(channels));
}

void write_wav(const AudioBuffer& buffer, const std::filesystem::path& path,
               WavFormat format) {
  const int bits = bits_per_sample(format.sample_format);
  const bool is_float = format.sample_format == SampleFormat::kFloat32;
  const std::size_t channels = buffer.num_channels();
  const std::size_t frames = buffer.frames();
  const std::size_t data_bytes = frames * channels * (bits / 8);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes + 1);
  store_tag(out, "RIFF");
  store_u32(out, static_cast<std::uint32_t>(36 + data_bytes + (data_bytes & 1u)));
  store_tag(out, "WAVE");
  store_tag(out, "fmt ");
  store_u32(out, 16);
  store_u16(out, is_float ? kFormatFloat : kFormatPcm);
  store_u16(out, static_cast<std::uint16_t>(channels));
  store_u32(out, static_cast<std::uint32_t>(buffer.sample_rate()));
  store_u32(out, static_cast<std::uint32_t>(buffer.sample_rate() * channels * (bits / 8)));
  store_u16(out, static_cast<std::uint16_t>(channels * (bits / 8)));
  store_u16(out, static_cast<std::uint16_t>(bits));
  store_tag(out, "data");
  store_u32(out, static_cast<std::uint32_t>(data_bytes));

  const double scale = std::ldexp(1.0, bits - 1);
  const double lo = -scale;
  const double hi = scale - 1.0;
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      const double x = buffer.channel(c)[i];
      if (is_float) {
        store_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
        continue;
      }
      const auto code = static_cast<std::int32_t>(std::clamp(std::round(x * scale), lo, hi));
      const auto u = static_cast<std::uint32_t>(code);
      out.push_back(static_cast<std::uint8_t>(u & 0xFF));
      out.push_back(static_cast<std::uint8_t>((u >> 8) & 0xFF));
      if (bits == 24) out.push_back(static_cast<std::uint8_t>((u >> 16) & 0xFF));
    }
  }
  if (data_bytes & 1u) out.push_back(0);

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIo, "cannot create " + describe(path));
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) throw Error(ErrorCode::kIo, "write failed for " + describe(path));
}

}  // namespace hamix
