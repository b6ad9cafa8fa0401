#include "hamix/audio_buffer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hamix/error.hpp"

namespace hamix {

AudioBuffer::AudioBuffer(int sample_rate,
                         std::vector<std::vector<double>> channels)
    : sample_rate_(sample_rate), data_(std::move(channels)) {
  if (sample_rate_ <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "sample rate must be positive, got " +
                    std::to_string(sample_rate_));
  }
  if (data_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "buffer needs at least one channel");
  }
  const std::size_t n = data_.front().size();
  for (const auto& ch : data_) {
    if (ch.size() != n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "all channels must have the same length");
    }
  }
  require_finite(*this, "audio buffer");
}

AudioBuffer AudioBuffer::zeros(int sample_rate, std::size_t channels,
                               std::size_t frames) {
  return AudioBuffer(sample_rate, std::vector<std::vector<double>>(
                                      channels, std::vector<double>(frames)));
}

std::span<const double> AudioBuffer::channel(std::size_t c) const {
  return data_.at(c);
}

std::span<double> AudioBuffer::channel(std::size_t c) { return data_.at(c); }

bool AudioBuffer::aligned_with(const AudioBuffer& other) const noexcept {
  return sample_rate_ == other.sample_rate_ &&
         num_channels() == other.num_channels() && frames() == other.frames();
}

double AudioBuffer::peak() const noexcept {
  double p = 0.0;
  for (const auto& ch : data_) {
    for (double x : ch) p = std::max(p, std::abs(x));
  }
  return p;
}

double AudioBuffer::energy() const noexcept {
  double e = 0.0;
  for (const auto& ch : data_) {
    for (double x : ch) e += x * x;
  }
  return e;
}

void require_aligned(const AudioBuffer& a, const AudioBuffer& b,
                     std::string_view what) {
  if (!a.aligned_with(b)) {
    throw Error(ErrorCode::kMisaligned,
                std::string(what) + ": buffers differ in rate, channels or length (" +
                    std::to_string(a.sample_rate()) + " Hz x" +
                    std::to_string(a.num_channels()) + " x" +
                    std::to_string(a.frames()) + " vs " +
                    std::to_string(b.sample_rate()) + " Hz x" +
                    std::to_string(b.num_channels()) + " x" +
                    std::to_string(b.frames()) + ")");
  }
}

void require_finite(const AudioBuffer& buffer, std::string_view what) {
  for (std::size_t c = 0; c < buffer.num_channels(); ++c) {
    for (double x : buffer.channel(c)) {
      if (!std::isfinite(x)) {
        throw Error(ErrorCode::kInvalidArgument,
                    std::string(what) + ": non-finite sample");
      }
    }
  }
}

AudioBuffer scaled(const AudioBuffer& buffer, double factor) {
  AudioBuffer out = buffer;
  for (std::size_t c = 0; c < out.num_channels(); ++c) {
    for (double& x : out.channel(c)) x *= factor;
  }
  return out;
}

AudioBuffer add(const AudioBuffer& a, const AudioBuffer& b) {
  AudioBuffer out = a;
  accumulate(out, b, 1.0);
  return out;
}

AudioBuffer subtract(const AudioBuffer& a, const AudioBuffer& b) {
  require_aligned(a, b, "subtract");
  AudioBuffer out = a;
  for (std::size_t c = 0; c < out.num_channels(); ++c) {
    auto dst = out.channel(c);
    auto src = b.channel(c);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] -= src[i];
  }
  return out;
}

void accumulate(AudioBuffer& a, const AudioBuffer& b, double factor) {
  require_aligned(a, b, "accumulate");
  for (std::size_t c = 0; c < a.num_channels(); ++c) {
    auto dst = a.channel(c);
    auto src = b.channel(c);
    if (factor == 1.0) {
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    } else {
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += factor * src[i];
    }
  }
}

}  // namespace hamix
