#pragma once

#include <filesystem>
#include <span>

#include <nlohmann/json.hpp>

#include "hamix/metrics.hpp"
#include "hamix/pipeline.hpp"

namespace hamix {

nlohmann::json to_json(const EnhanceOptions& options);
nlohmann::json to_json(const EnhanceReport& report);
nlohmann::json to_json(const SongScores& scores);
nlohmann::json to_json(std::span<const Segment> segments);

/// JSON array of report objects; each object carries "schema_version".
nlohmann::json reports_to_json(std::span<const EnhanceReport> reports);

/// Pretty-printed JSON to `path`. Throws kIo.
void write_json(const nlohmann::json& doc, const std::filesystem::path& path);

}  // namespace hamix
