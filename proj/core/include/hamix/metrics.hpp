#pragma once

#include <map>
#include <optional>
#include <string>

#include "hamix/audio_buffer.hpp"
#include "hamix/stems.hpp"

namespace hamix {

inline constexpr double kSdrCapDb = 100.0;

/// 10·log10(Σ ref² / Σ (ref − est)²) over all channels and frames, clamped to
/// [−100, +100] dB. Plain SDR: no projection, no scale invariance.
/// Throws kInvalidArgument for an all-zero reference, kMisaligned otherwise.
double sdr(const AudioBuffer& reference, const AudioBuffer& estimate);

struct SongScores {
  double overall_sdr = 0.0;
  std::optional<std::map<std::string, double>> per_track_sdr;  // keyed by track name
};

/// Overall SDR, plus per-track SDRs when both stem sets are supplied.
SongScores evaluate_song(const AudioBuffer& reference, const AudioBuffer& estimate,
                         const StemSet* reference_stems = nullptr,
                         const StemSet* estimated_stems = nullptr);

}  // namespace hamix
