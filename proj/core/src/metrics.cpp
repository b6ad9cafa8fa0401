#include "hamix/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "hamix/error.hpp"

namespace hamix {

double sdr(const AudioBuffer& reference, const AudioBuffer& estimate) {
  require_aligned(reference, estimate, "sdr");
  double signal = 0.0;
  double error = 0.0;
  for (std::size_t c = 0; c < reference.num_channels(); ++c) {
    const auto r = reference.channel(c);
    const auto e = estimate.channel(c);
    for (std::size_t i = 0; i < r.size(); ++i) {
      signal += r[i] * r[i];
      const double d = r[i] - e[i];
      error += d * d;
    }
  }
  if (signal == 0.0) throw Error(ErrorCode::kInvalidArgument, "sdr: reference is all zeros");
  if (error == 0.0) return kSdrCapDb;
  return std::clamp(10.0 * std::log10(signal / error), -kSdrCapDb, kSdrCapDb);
}

SongScores evaluate_song(const AudioBuffer& reference, const AudioBuffer& estimate,
                         const StemSet* reference_stems, const StemSet* estimated_stems) {
  SongScores scores;
  scores.overall_sdr = sdr(reference, estimate);
  if (reference_stems != nullptr && estimated_stems != nullptr) {
    std::map<std::string, double> per_track;
    for (Track t : kAllTracks) {
      const AudioBuffer& ref = (*reference_stems)[t];
      // Silent reference tracks have no defined SDR; leave them out.
      if (ref.energy() == 0.0) continue;
      per_track[std::string(track_name(t))] = sdr(ref, (*estimated_stems)[t]);
    }
    scores.per_track_sdr = std::move(per_track);
  }
  return scores;
}

}  // namespace hamix
