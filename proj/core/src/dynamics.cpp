#include "hamix/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "hamix/error.hpp"

namespace hamix {

std::size_t ClipReport::max_count() const noexcept {
  std::size_t m = 0;
  for (std::size_t c : counts) m = std::max(m, c);
  return m;
}

ClipReport count_clipped(const AudioBuffer& buffer) {
  ClipReport report;
  report.counts.reserve(buffer.num_channels());
  for (std::size_t c = 0; c < buffer.num_channels(); ++c) {
    const auto ch = buffer.channel(c);
    report.counts.push_back(static_cast<std::size_t>(
        std::count_if(ch.begin(), ch.end(), [](double x) { return std::abs(x) >= 1.0; })));
  }
  return report;
}

bool should_compress(const ClipReport& report) noexcept {
  return report.max_count() >= report.trigger;
}

void CompressorParams::validate() const {
  if (!(ratio >= 1.0) || !std::isfinite(ratio)) {
    throw Error(ErrorCode::kInvalidArgument, "compressor ratio must be >= 1");
  }
  if (!(attack_ms > 0.0) || !(release_ms > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "compressor attack and release must be > 0 ms");
  }
  if (!std::isfinite(threshold_db) || !std::isfinite(makeup_db)) {
    throw Error(ErrorCode::kInvalidArgument, "compressor threshold and makeup must be finite");
  }
}

AudioBuffer compress(const AudioBuffer& buffer, const CompressorParams& params) {
  params.validate();
  const double rate = buffer.sample_rate();
  const double attack = std::exp(-1.0 / (params.attack_ms * 1e-3 * rate));
  const double release = std::exp(-1.0 / (params.release_ms * 1e-3 * rate));
  const double slope = 1.0 / params.ratio - 1.0;
  const double threshold = std::pow(10.0, params.threshold_db / 20.0);

  AudioBuffer out = buffer;
  const std::size_t channels = out.num_channels();
  double envelope = 0.0;
  double gain_db = 0.0;
  for (std::size_t i = 0; i < out.frames(); ++i) {
    double level = 0.0;
    for (std::size_t c = 0; c < channels; ++c) level = std::max(level, std::abs(out.channel(c)[i]));
    envelope = std::max(level, release * envelope);

    double target_db = 0.0;
    if (envelope > threshold) target_db = slope * (20.0 * std::log10(envelope) - params.threshold_db);

    const double coeff = target_db < gain_db ? attack : release;
    gain_db = coeff * gain_db + (1.0 - coeff) * target_db;

    const double total_db = gain_db + params.makeup_db;
    const double g = total_db == 0.0 ? 1.0 : std::pow(10.0, total_db / 20.0);
    for (std::size_t c = 0; c < channels; ++c) {
      double& x = out.channel(c)[i];
      x = std::clamp(x * g, -1.0, 1.0);
    }
  }
  return out;
}

AudioBuffer hard_clip(const AudioBuffer& buffer) {
  AudioBuffer out = buffer;
  for (std::size_t c = 0; c < out.num_channels(); ++c) {
    for (double& x : out.channel(c)) x = std::clamp(x, -1.0, 1.0);
  }
  return out;
}

}  // namespace hamix
