#include "hamix/report.hpp"

#include <fstream>

#include "hamix/error.hpp"
#include "hamix/wav.hpp"

namespace hamix {

nlohmann::json to_json(const EnhanceOptions& options) {
  nlohmann::json j;
  j["use_residual"] = options.use_residual;
  j["use_compressor_heuristic"] = options.use_compressor_heuristic;
  j["ensemble_weights"] = options.ensemble_weights ? nlohmann::json(*options.ensemble_weights)
                                                   : nlohmann::json(nullptr);
  j["blend_weight"] = options.blend_weight;
  j["n_taps"] = options.n_taps;
  j["compressor"] = {{"threshold_db", options.compressor.threshold_db},
                     {"ratio", options.compressor.ratio},
                     {"attack_ms", options.compressor.attack_ms},
                     {"release_ms", options.compressor.release_ms},
                     {"makeup_db", options.compressor.makeup_db}};
  j["output_bits"] = bits_per_sample(options.output_format.sample_format);
  j["output_float"] = options.output_format.sample_format == SampleFormat::kFloat32;
  return j;
}

nlohmann::json to_json(const EnhanceReport& report) {
  auto optional = [](const auto& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["song_id"] = report.song_id;
  j["input_loudness_lufs"] = optional(report.input_loudness_lufs);
  j["normalization_gain"] = report.normalization_gain;
  j["clip_counts"] = report.clip_counts;
  j["clip_trigger"] = report.clip_trigger;
  j["compressor_applied"] = report.compressor_applied;
  j["output_peak"] = report.output_peak;
  j["overall_sdr"] = optional(report.overall_sdr);
  j["per_track_sdr"] = optional(report.per_track_sdr);
  nlohmann::json stages = nlohmann::json::array();
  for (Stage s : report.stages) stages.push_back(std::string(stage_name(s)));
  j["stages"] = std::move(stages);
  j["ensemble_size"] = report.ensemble_size;
  j["options"] = to_json(report.options);
  j["output_path"] = report.output_path;
  j["error"] = optional(report.error);
  j["error_code"] = optional(report.error_code);
  return j;
}

nlohmann::json to_json(const SongScores& scores) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["overall_sdr"] = scores.overall_sdr;
  j["per_track_sdr"] = scores.per_track_sdr ? nlohmann::json(*scores.per_track_sdr)
                                            : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(std::span<const Segment> segments) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Segment& s : segments) {
    arr.push_back({{"start", s.start},
                   {"length", s.length},
                   {"track", std::string(track_name(s.track))},
                   {"energy_ratio", s.energy_ratio}});
  }
  return arr;
}

nlohmann::json reports_to_json(std::span<const EnhanceReport> reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const EnhanceReport& r : reports) arr.push_back(to_json(r));
  return arr;
}

void write_json(const nlohmann::json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot create '" + path.string() + "'");
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

}  // namespace hamix
