#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hamix/audio_buffer.hpp"

namespace hamix {

enum class Track { kVocals = 0, kDrums = 1, kBass = 2, kOther = 3 };

inline constexpr std::array<Track, 4> kAllTracks = {Track::kVocals, Track::kDrums,
                                                    Track::kBass, Track::kOther};

std::string_view track_name(Track track) noexcept;
/// Throws Error(kInvalidArgument) for anything but vocals/drums/bass/other.
Track parse_track(std::string_view name);

/// The four VDBO component signals of one song. All four share rate,
/// channel count and length.
class StemSet {
 public:
  StemSet(AudioBuffer vocals, AudioBuffer drums, AudioBuffer bass, AudioBuffer other);

  const AudioBuffer& operator[](Track t) const { return tracks_[static_cast<int>(t)]; }
  const AudioBuffer& vocals() const { return (*this)[Track::kVocals]; }
  const AudioBuffer& drums() const { return (*this)[Track::kDrums]; }
  const AudioBuffer& bass() const { return (*this)[Track::kBass]; }
  const AudioBuffer& other() const { return (*this)[Track::kOther]; }

  /// Returns a copy with one track replaced; the replacement must be aligned.
  StemSet with_track(Track t, AudioBuffer buffer) const;

  int sample_rate() const { return vocals().sample_rate(); }
  std::size_t num_channels() const { return vocals().num_channels(); }
  std::size_t frames() const { return vocals().frames(); }
  bool aligned_with(const AudioBuffer& buffer) const { return vocals().aligned_with(buffer); }

  /// vocals + drums + bass + other.
  AudioBuffer sum() const;

  bool operator==(const StemSet&) const = default;

 private:
  std::array<AudioBuffer, 4> tracks_;
};

// Stem providers --------------------------------------------------------------

/// Reads `<dir>/vocals.wav`, `drums.wav`, `bass.wav`, `other.wav`.
StemSet load_stem_directory(const std::filesystem::path& dir);

/// Writes the four stems into `dir` (created if missing) as 32-bit float WAV.
void save_stem_directory(const StemSet& stems, const std::filesystem::path& dir);

/// Ground truth plus white Gaussian noise at `snr_db` relative to each track's
/// own mean power. Deterministic for a given seed; each track draws from its
/// own stream derived from the seed. Silent tracks stay silent.
StemSet add_stem_noise(const StemSet& truth, double snr_db, std::uint64_t seed);

struct StemProviderSpec {
  enum class Kind { kDirectory, kOracle, kNoisyOracle };
  Kind kind = Kind::kDirectory;
  std::filesystem::path path;  // stem directory (ground truth for oracles)
  double snr_db = 10.0;        // noisy oracle only
  std::uint64_t seed = 0;      // noisy oracle only
};

/// Produces a stem set and checks it against the mixture's layout; throws
/// kMisaligned if the stems do not match `mix`.
StemSet provide_stems(const StemProviderSpec& spec, const AudioBuffer& mix);

// Ensemble and residual --------------------------------------------------------

/// Sample-wise weighted arithmetic mean of aligned stem sets. Weights default
/// to equal and are normalized to sum to one; sets with zero weight are
/// skipped, so one-hot weights select a set exactly and identical inputs
/// return that input exactly.
StemSet ensemble_average(std::span<const StemSet> sets,
                         std::optional<std::span<const double>> weights = std::nullopt);

/// mix - vocals - drums - bass.
AudioBuffer compute_residual(const AudioBuffer& mix, const StemSet& stems);

inline constexpr double kDefaultBlendWeight = 0.5;

/// (1 - residual_weight) * predicted_other + residual_weight * residual.
AudioBuffer blend_other(const AudioBuffer& predicted_other, const AudioBuffer& residual,
                        double residual_weight = kDefaultBlendWeight);

// Salient segments ---------------------------------------------------------------

struct Segment {
  std::size_t start = 0;   // frames
  std::size_t length = 0;  // frames
  Track track = Track::kVocals;
  double energy_ratio = 0.0;

  bool operator==(const Segment&) const = default;
};

inline constexpr double kDefaultSegmentSeconds = 6.0;
inline constexpr double kDefaultSalienceThreshold = 0.1;

/// Tiles the song into non-overlapping windows of `segment_frames` (a partial
/// tail window is dropped) and returns, in order, the windows where the
/// target track's share of total stem energy is at least `ratio_threshold`.
std::vector<Segment> salient_segments(const StemSet& stems, Track track,
                                      std::size_t segment_frames, double ratio_threshold);

}  // namespace hamix
