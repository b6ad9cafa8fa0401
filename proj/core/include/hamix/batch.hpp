#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hamix/pipeline.hpp"
#include "hamix/stems.hpp"

namespace hamix {

struct BatchJob {
  std::string song_id;
  std::filesystem::path mixture;
  std::vector<StemProviderSpec> stems;  // one per ensemble member
  std::filesystem::path gains;
  std::filesystem::path listener;
  std::filesystem::path output;
  std::optional<std::filesystem::path> reference_stems;  // enables SDR scoring
};

struct BatchManifest {
  std::vector<BatchJob> jobs;
};

/// Manifest JSON:
///   {"jobs": [{"song_id", "mixture", "stems": [<dir> | {"kind": "directory" |
///     "oracle" | "noisy_oracle", "path", "snr_db", "seed"}], "gains",
///     "listener", "output", "reference_stems"?}]}
/// Relative paths resolve against `base_dir`. Parse errors and duplicate
/// song ids throw kParse; nothing is checked on disk here.
BatchManifest parse_manifest(const std::string& json_text,
                             const std::filesystem::path& base_dir = {});
BatchManifest load_manifest(const std::filesystem::path& path);

/// Runs one job end to end, writing its output WAV. Throws on failure.
EnhanceReport run_job(const BatchJob& job, const EnhanceOptions& options);

/// Runs every job, up to `workers` at a time. A failing job yields a report
/// with `error` set; the others are unaffected. Reports come back in
/// manifest order regardless of scheduling.
std::vector<EnhanceReport> run_batch(const BatchManifest& manifest,
                                     const EnhanceOptions& options, unsigned workers = 1);

}  // namespace hamix
