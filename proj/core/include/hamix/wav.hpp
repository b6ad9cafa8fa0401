#pragma once

#include <filesystem>

#include "hamix/audio_buffer.hpp"

namespace hamix {

enum class SampleFormat { kPcm16, kPcm24, kFloat32 };

struct WavFormat {
  SampleFormat sample_format = SampleFormat::kFloat32;
};

/// Parses "16", "24", "32f" (also "s16", "s24", "f32"). Throws kInvalidArgument.
SampleFormat parse_sample_format(std::string_view text);
int bits_per_sample(SampleFormat format) noexcept;

/// Reads a RIFF/WAVE file: PCM 16/24-bit or IEEE float 32-bit, including the
/// WAVE_FORMAT_EXTENSIBLE wrapper. Integer samples are divided by 2^(bits-1).
///
/// Errors: kIo (cannot open), kNotWav (not RIFF/WAVE), kUnsupportedCodec,
/// kTruncatedFile (chunk runs past end of file or missing fmt/data),
/// kEmptyAudio (data chunk has no frames).
AudioBuffer read_wav(const std::filesystem::path& path);

/// Writes the buffer. Integer formats hard-clip to the code range; float32
/// stores samples beyond ±1 unchanged. Throws kIo on failure.
void write_wav(const AudioBuffer& buffer, const std::filesystem::path& path,
               WavFormat format = {});

}  // namespace hamix
