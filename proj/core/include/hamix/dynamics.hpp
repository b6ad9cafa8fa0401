#pragma once

#include <cstddef>
#include <vector>

#include "hamix/audio_buffer.hpp"

namespace hamix {

/// Clipped-sample count in a single channel above which the compressor is
/// switched on. Absolute, not relative to duration or rate.
inline constexpr std::size_t kClipTriggerCount = 25'000;

struct ClipReport {
  std::vector<std::size_t> counts;  // one per channel
  std::size_t trigger = kClipTriggerCount;

  std::size_t max_count() const noexcept;
};

/// Counts samples with |x| >= 1.0 per channel.
ClipReport count_clipped(const AudioBuffer& buffer);

/// True iff some channel has at least report.trigger clipped samples.
bool should_compress(const ClipReport& report) noexcept;

struct CompressorParams {
  double threshold_db = -6.0;  // dBFS
  double ratio = 6.0;
  double attack_ms = 5.0;
  double release_ms = 100.0;
  double makeup_db = 0.0;

  /// Throws Error(kInvalidArgument) unless ratio >= 1 and times > 0.
  void validate() const;
};

/// Stereo-linked feed-forward peak compressor with a hard knee.
///
/// The detector takes max |x| across channels for each frame and holds it in
/// a peak envelope that rises instantly and decays with the release time.
/// Above the threshold the static curve maps level L to
/// threshold + (L - threshold) / ratio (all in dB). The resulting gain (dB)
/// is smoothed by a one-pole filter using the attack coefficient while gain
/// reduction grows and the release coefficient while it recovers. One gain
/// is applied to all channels, followed by makeup gain and a hard clip at
/// ±1.0.
AudioBuffer compress(const AudioBuffer& buffer, const CompressorParams& params);

/// Hard clip at ±1.0.
AudioBuffer hard_clip(const AudioBuffer& buffer);

}  // namespace hamix
