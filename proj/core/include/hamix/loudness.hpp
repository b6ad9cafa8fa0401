#pragma once

#include <optional>

#include "hamix/audio_buffer.hpp"

namespace hamix {

/// Integrated loudness in LUFS. Silent or fully gated-out programs have no
/// defined loudness; that state is carried explicitly rather than as a
/// sentinel number.
class Loudness {
 public:
  Loudness() = default;
  static Loudness undefined() { return Loudness(); }
  static Loudness lufs(double value);

  bool defined() const noexcept { return value_.has_value(); }
  /// Throws Error(kUndefinedLoudness) when undefined.
  double value() const;
  std::optional<double> optional() const noexcept { return value_; }

 private:
  std::optional<double> value_;
};

inline constexpr double kAbsoluteGateLufs = -70.0;
inline constexpr double kRelativeGateLu = -10.0;

/// ITU-R BS.1770-4 integrated loudness: K-weighting per channel, 400 ms
/// blocks with 75 % overlap, unit channel weights, absolute gate at -70 LUFS
/// followed by the -10 LU relative gate. Requires sample_rate >= 8000.
Loudness integrated_loudness(const AudioBuffer& buffer);

/// Scales the buffer by one scalar so that its integrated loudness lands
/// within 0.1 LU of `target_lufs`. Throws kUndefinedLoudness for programs
/// without defined loudness.
AudioBuffer normalize_to_loudness(const AudioBuffer& buffer, double target_lufs);

/// Same as normalize_to_loudness but also reports the applied scalar.
AudioBuffer normalize_to_loudness(const AudioBuffer& buffer, double target_lufs,
                                  double& applied_gain);

}  // namespace hamix
