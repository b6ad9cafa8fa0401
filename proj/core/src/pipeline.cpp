#include "hamix/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hamix/decibel.hpp"
#include "hamix/error.hpp"
#include "hamix/loudness.hpp"

namespace hamix {

GainSpec::GainSpec(double vocals, double drums, double bass, double other) {
  set(Track::kVocals, vocals);
  set(Track::kDrums, drums);
  set(Track::kBass, bass);
  set(Track::kOther, other);
}

void GainSpec::set(Track t, double db) {
  if (!std::isfinite(db) && db != kMute) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("gain for ") + std::string(track_name(t)) + " must be finite or mute");
  }
  db_[static_cast<int>(t)] = db;
}

GainSpec parse_gains(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("gains: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kParse, "gains: expected a JSON object");
  GainSpec gains;
  for (Track t : kAllTracks) {
    const std::string key(track_name(t));
    if (!j.contains(key)) throw Error(ErrorCode::kParse, "gains: missing '" + key + "'");
    const auto& v = j[key];
    if (v.is_string() && v.get<std::string>() == "mute") {
      gains.set(t, GainSpec::kMute);
    } else if (v.is_number()) {
      gains.set(t, v.get<double>());
    } else {
      throw Error(ErrorCode::kParse, "gains: '" + key + "' must be a number of dB or \"mute\"");
    }
  }
  return gains;
}

GainSpec load_gains(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open gains file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_gains(ss.str());
}

void EnhanceOptions::validate() const {
  if (!(blend_weight >= 0.0 && blend_weight <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "blend weight must lie in [0, 1]");
  }
  if (n_taps % 2 == 0 || n_taps < 65) {
    throw Error(ErrorCode::kInvalidArgument, "n_taps must be odd and >= 65");
  }
  compressor.validate();
}

std::string_view stage_name(Stage stage) noexcept {
  switch (stage) {
    case Stage::kEnsemble: return "ensemble";
    case Stage::kResidual: return "residual";
    case Stage::kRemix: return "remix";
    case Stage::kNormalize: return "normalize";
    case Stage::kNalr: return "nalr";
    case Stage::kClipCheck: return "clip_check";
    case Stage::kCompress: return "compress";
  }
  return "?";
}

AudioBuffer remix(const StemSet& stems, const GainSpec& gains) {
  AudioBuffer out = AudioBuffer::zeros(stems.sample_rate(), stems.num_channels(), stems.frames());
  for (Track t : kAllTracks) {
    if (gains.muted(t)) continue;
    accumulate(out, stems[t], db_to_linear(gains.db(t)));
  }
  return out;
}

EnhanceResult enhance(const AudioBuffer& mix, std::span<const StemSet> stem_sets,
                      const GainSpec& gains, const Listener& listener,
                      const EnhanceOptions& options) {
  options.validate();
  if (stem_sets.empty()) throw Error(ErrorCode::kInvalidArgument, "enhance needs at least one stem set");
  for (const StemSet& s : stem_sets) require_aligned(mix, s.vocals(), "stems vs mixture");

  EnhanceReport report;
  report.options = options;
  report.ensemble_size = stem_sets.size();

  std::optional<std::span<const double>> weights;
  if (options.ensemble_weights) weights = std::span<const double>(*options.ensemble_weights);
  StemSet stems = ensemble_average(stem_sets, weights);
  report.stages.push_back(Stage::kEnsemble);

  if (options.use_residual) {
    const AudioBuffer residual = compute_residual(mix, stems);
    stems = stems.with_track(Track::kOther,
                             blend_other(stems.other(), residual, options.blend_weight));
    report.stages.push_back(Stage::kResidual);
  }

  const AudioBuffer remixed = remix(stems, gains);
  report.stages.push_back(Stage::kRemix);

  const Loudness input_loudness = integrated_loudness(mix);
  report.input_loudness_lufs = input_loudness.optional();
  if (!input_loudness.defined()) {
    throw Error(ErrorCode::kUndefinedLoudness, "input mixture has undefined loudness");
  }
  const AudioBuffer normalized =
      normalize_to_loudness(remixed, input_loudness.value(), report.normalization_gain);
  report.stages.push_back(Stage::kNormalize);

  AudioBuffer output = nalr_process(normalized, listener, options.n_taps);
  report.stages.push_back(Stage::kNalr);

  const ClipReport clips = count_clipped(output);
  report.clip_counts = clips.counts;
  report.clip_trigger = clips.trigger;
  report.stages.push_back(Stage::kClipCheck);

  if (options.use_compressor_heuristic && should_compress(clips)) {
    output = compress(output, options.compressor);
    report.compressor_applied = true;
    report.stages.push_back(Stage::kCompress);
  }
  report.output_peak = output.peak();
  return {std::move(output), std::move(report), std::move(stems)};
}

AudioBuffer build_reference(const StemSet& true_stems, const GainSpec& gains,
                            const Listener& listener, const EnhanceOptions& options,
                            const AudioBuffer* mixture) {
  options.validate();
  const AudioBuffer mix = mixture != nullptr ? *mixture : true_stems.sum();
  require_aligned(mix, true_stems.vocals(), "reference stems vs mixture");
  const Loudness target = integrated_loudness(mix);
  if (!target.defined()) {
    throw Error(ErrorCode::kUndefinedLoudness, "reference mixture is silent (undefined loudness)");
  }
  const AudioBuffer remixed = remix(true_stems, gains);
  if (!integrated_loudness(remixed).defined()) {
    throw Error(ErrorCode::kUndefinedLoudness, "silent program: remix has undefined loudness");
  }
  return nalr_process(normalize_to_loudness(remixed, target.value()), listener, options.n_taps);
}

}  // namespace hamix
