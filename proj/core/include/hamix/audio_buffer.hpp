#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace hamix {

/// Multichannel audio at a fixed sample rate, stored non-interleaved as
/// 64-bit floats. Every channel has the same number of frames.
///
/// Construction validates the invariants (positive rate, at least one
/// channel, equal channel lengths, finite samples). Mutable channel access
/// exists for building buffers in place; library operations never produce
/// non-finite samples from finite input.
class AudioBuffer {
 public:
  AudioBuffer() = default;
  AudioBuffer(int sample_rate, std::vector<std::vector<double>> channels);

  static AudioBuffer zeros(int sample_rate, std::size_t channels,
                           std::size_t frames);

  int sample_rate() const noexcept { return sample_rate_; }
  std::size_t num_channels() const noexcept { return data_.size(); }
  std::size_t frames() const noexcept {
    return data_.empty() ? 0 : data_.front().size();
  }
  bool empty() const noexcept { return frames() == 0; }

  std::span<const double> channel(std::size_t c) const;
  std::span<double> channel(std::size_t c);

  double& at(std::size_t c, std::size_t frame) { return data_.at(c).at(frame); }
  double at(std::size_t c, std::size_t frame) const {
    return data_.at(c).at(frame);
  }

  /// Same rate, channel count and length.
  bool aligned_with(const AudioBuffer& other) const noexcept;

  /// Largest |x| over all channels and frames (0 for an empty buffer).
  double peak() const noexcept;
  /// Sum of squares over all channels and frames.
  double energy() const noexcept;

  bool operator==(const AudioBuffer& other) const = default;

 private:
  int sample_rate_ = 0;
  std::vector<std::vector<double>> data_;
};

/// Throws Error(kMisaligned) naming `what` unless the buffers are aligned.
void require_aligned(const AudioBuffer& a, const AudioBuffer& b,
                     std::string_view what);

/// Throws Error(kInvalidArgument) if any sample is NaN or infinite.
void require_finite(const AudioBuffer& buffer, std::string_view what);

AudioBuffer scaled(const AudioBuffer& buffer, double factor);
AudioBuffer add(const AudioBuffer& a, const AudioBuffer& b);
AudioBuffer subtract(const AudioBuffer& a, const AudioBuffer& b);
/// a + factor * b, in place on a.
void accumulate(AudioBuffer& a, const AudioBuffer& b, double factor = 1.0);

}  // namespace hamix
