#pragma once

#include <filesystem>
#include <vector>

#include "hamix/audio_buffer.hpp"

namespace hamix {

/// Speaker-to-ear impulse responses. `left_to_left` is the path from the
/// left transmitted channel to the left received channel, `right_to_left`
/// from the right transmitted channel to the left ear, and so on.
struct CrosstalkKernel {
  std::vector<double> left_to_left;
  std::vector<double> right_to_left;
  std::vector<double> left_to_right;
  std::vector<double> right_to_right;
  int sample_rate = 0;

  std::size_t length() const noexcept { return left_to_left.size(); }
  /// Throws Error(kInvalidArgument) if lengths differ, are zero, or a tap is
  /// non-finite.
  void validate() const;

  static CrosstalkKernel identity(int sample_rate);
};

/// received_L = h_LL * L + h_RL * R and received_R = h_LR * L + h_RR * R,
/// truncated to the input length.
AudioBuffer apply_crosstalk(const AudioBuffer& buffer, const CrosstalkKernel& kernel);

/// Loads a kernel from a 4-channel WAV (channel order LL, RL, LR, RR) or a
/// directory holding four mono files `ll.wav`, `rl.wav`, `lr.wav`, `rr.wav`.
/// Shorter responses are zero-padded to the longest.
CrosstalkKernel load_kernel(const std::filesystem::path& path);

/// Builds a kernel from four mono responses, zero-padding to the longest.
CrosstalkKernel make_kernel(std::vector<double> ll, std::vector<double> rl,
                            std::vector<double> lr, std::vector<double> rr, int sample_rate);

}  // namespace hamix
