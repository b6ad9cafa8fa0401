#include "hamix/batch.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "hamix/error.hpp"
#include "hamix/metrics.hpp"
#include "hamix/wav.hpp"

namespace hamix {
namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::string require_string(const nlohmann::json& j, const char* key, std::size_t index) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw Error(ErrorCode::kParse, "manifest job " + std::to_string(index) +
                                       ": missing string field '" + key + "'");
  }
  return j[key].get<std::string>();
}

StemProviderSpec parse_provider(const nlohmann::json& j, const std::filesystem::path& base,
                                std::size_t index) {
  StemProviderSpec spec;
  if (j.is_string()) {
    spec.path = resolve(base, j.get<std::string>());
    return spec;
  }
  if (!j.is_object()) {
    throw Error(ErrorCode::kParse,
                "manifest job " + std::to_string(index) + ": stem provider must be a path or object");
  }
  spec.path = resolve(base, require_string(j, "path", index));
  const std::string kind = j.value("kind", std::string("directory"));
  if (kind == "directory") {
    spec.kind = StemProviderSpec::Kind::kDirectory;
  } else if (kind == "oracle") {
    spec.kind = StemProviderSpec::Kind::kOracle;
  } else if (kind == "noisy_oracle") {
    spec.kind = StemProviderSpec::Kind::kNoisyOracle;
    if (!j.contains("seed") || !j["seed"].is_number_unsigned()) {
      throw Error(ErrorCode::kParse, "manifest job " + std::to_string(index) +
                                         ": noisy_oracle needs a non-negative integer 'seed'");
    }
    spec.seed = j["seed"].get<std::uint64_t>();
    spec.snr_db = j.value("snr_db", 10.0);
  } else {
    throw Error(ErrorCode::kParse,
                "manifest job " + std::to_string(index) + ": unknown provider kind '" + kind + "'");
  }
  return spec;
}

}  // namespace

BatchManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("manifest: ") + e.what());
  }
  if (!j.is_object() || !j.contains("jobs") || !j["jobs"].is_array()) {
    throw Error(ErrorCode::kParse, "manifest: expected an object with a 'jobs' array");
  }
  BatchManifest manifest;
  std::set<std::string> ids;
  std::size_t index = 0;
  for (const auto& jj : j["jobs"]) {
    if (!jj.is_object()) throw Error(ErrorCode::kParse, "manifest: job entries must be objects");
    BatchJob job;
    job.song_id = require_string(jj, "song_id", index);
    if (!ids.insert(job.song_id).second) {
      throw Error(ErrorCode::kParse, "manifest: duplicate song_id '" + job.song_id + "'");
    }
    job.mixture = resolve(base_dir, require_string(jj, "mixture", index));
    if (!jj.contains("stems") || !jj["stems"].is_array() || jj["stems"].empty()) {
      throw Error(ErrorCode::kParse,
                  "manifest job " + std::to_string(index) + ": 'stems' must be a non-empty array");
    }
    for (const auto& s : jj["stems"]) job.stems.push_back(parse_provider(s, base_dir, index));
    job.gains = resolve(base_dir, require_string(jj, "gains", index));
    job.listener = resolve(base_dir, require_string(jj, "listener", index));
    job.output = resolve(base_dir, require_string(jj, "output", index));
    if (jj.contains("reference_stems")) {
      job.reference_stems = resolve(base_dir, require_string(jj, "reference_stems", index));
    }
    manifest.jobs.push_back(std::move(job));
    ++index;
  }
  return manifest;
}

BatchManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open manifest '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path.parent_path());
}

EnhanceReport run_job(const BatchJob& job, const EnhanceOptions& options) {
  const AudioBuffer mix = read_wav(job.mixture);
  std::vector<StemSet> sets;
  sets.reserve(job.stems.size());
  for (const StemProviderSpec& spec : job.stems) sets.push_back(provide_stems(spec, mix));
  const GainSpec gains = load_gains(job.gains);
  const Listener listener = load_listener(job.listener);

  EnhanceResult result = enhance(mix, sets, gains, listener, options);
  result.report.song_id = job.song_id;
  result.report.output_path = job.output.string();

  if (job.reference_stems) {
    const StemSet truth = load_stem_directory(*job.reference_stems);
    const AudioBuffer reference = build_reference(truth, gains, listener, options);
    const SongScores scores = evaluate_song(reference, result.output, &truth, &result.stems);
    result.report.overall_sdr = scores.overall_sdr;
    result.report.per_track_sdr = scores.per_track_sdr;
  }

  write_wav(result.output, job.output, options.output_format);
  return result.report;
}

std::vector<EnhanceReport> run_batch(const BatchManifest& manifest, const EnhanceOptions& options,
                                     unsigned workers) {
  const std::size_t n = manifest.jobs.size();
  std::vector<EnhanceReport> reports(n);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const BatchJob& job = manifest.jobs[i];
      try {
        reports[i] = run_job(job, options);
      } catch (const Error& e) {
        reports[i] = {};
        reports[i].error = e.what();
        reports[i].error_code = std::string(to_string(e.code()));
      } catch (const std::exception& e) {
        reports[i] = {};
        reports[i].error = e.what();
        reports[i].error_code = "internal";
      }
      reports[i].song_id = job.song_id;
      reports[i].output_path = job.output.string();
      reports[i].options = options;
    }
  };

  const unsigned threads = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  return reports;
}

}  // namespace hamix
