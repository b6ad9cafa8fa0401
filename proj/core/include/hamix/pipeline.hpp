#pragma once

#include <array>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hamix/audio_buffer.hpp"
#include "hamix/dynamics.hpp"
#include "hamix/hearing.hpp"
#include "hamix/stems.hpp"
#include "hamix/wav.hpp"

namespace hamix {

/// Listener-requested remix gains in dB per track. Mute is -infinity and
/// contributes exactly nothing.
class GainSpec {
 public:
  static constexpr double kMute = -std::numeric_limits<double>::infinity();

  GainSpec() { db_.fill(0.0); }
  GainSpec(double vocals, double drums, double bass, double other);

  double db(Track t) const noexcept { return db_[static_cast<int>(t)]; }
  bool muted(Track t) const noexcept { return db(t) == kMute; }
  void set(Track t, double db);  // finite or kMute

 private:
  std::array<double, 4> db_;
};

/// Gains JSON: {"vocals": dB | "mute", "drums": ..., "bass": ..., "other": ...}.
GainSpec parse_gains(const std::string& json_text);
GainSpec load_gains(const std::filesystem::path& path);

struct EnhanceOptions {
  bool use_residual = true;
  bool use_compressor_heuristic = true;
  std::optional<std::vector<double>> ensemble_weights;
  double blend_weight = kDefaultBlendWeight;
  std::size_t n_taps = kDefaultNalrTaps;
  CompressorParams compressor;
  WavFormat output_format;

  void validate() const;
};

enum class Stage { kEnsemble, kResidual, kRemix, kNormalize, kNalr, kClipCheck, kCompress };
std::string_view stage_name(Stage stage) noexcept;

inline constexpr int kReportSchemaVersion = 1;

struct EnhanceReport {
  std::string song_id;
  std::optional<double> input_loudness_lufs;
  double normalization_gain = 1.0;
  std::vector<std::size_t> clip_counts;  // after NAL-R, before compression
  std::size_t clip_trigger = kClipTriggerCount;
  bool compressor_applied = false;
  double output_peak = 0.0;
  std::optional<double> overall_sdr;
  std::optional<std::map<std::string, double>> per_track_sdr;
  std::vector<Stage> stages;
  EnhanceOptions options;
  std::size_t ensemble_size = 0;
  std::string output_path;
  std::optional<std::string> error;
  std::optional<std::string> error_code;
};

/// Σ_track 10^(gain/20) · stem. Muted tracks are skipped.
AudioBuffer remix(const StemSet& stems, const GainSpec& gains);

struct EnhanceResult {
  AudioBuffer output;
  EnhanceReport report;
  StemSet stems;  // the estimate actually remixed (post ensemble and residual)
};

/// Full enhancement chain, always in this order: ensemble average, optional
/// residual repair of "other", remix to the listener's gains, loudness
/// normalization to the input mixture, NAL-R per ear, clip check and, when
/// the heuristic is on and fires, compression.
EnhanceResult enhance(const AudioBuffer& mix, std::span<const StemSet> stem_sets,
                      const GainSpec& gains, const Listener& listener,
                      const EnhanceOptions& options = {});

/// Ground-truth target: remix the true stems, normalize to the mixture's
/// loudness (the sum of the true stems unless `mixture` is given), apply
/// NAL-R. Never compressed.
AudioBuffer build_reference(const StemSet& true_stems, const GainSpec& gains,
                            const Listener& listener, const EnhanceOptions& options = {},
                            const AudioBuffer* mixture = nullptr);

}  // namespace hamix
