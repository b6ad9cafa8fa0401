#include "hamix/stems.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "hamix/error.hpp"
#include "hamix/wav.hpp"

namespace hamix {

std::string_view track_name(Track track) noexcept {
  switch (track) {
    case Track::kVocals: return "vocals";
    case Track::kDrums: return "drums";
    case Track::kBass: return "bass";
    case Track::kOther: return "other";
  }
  return "?";
}

Track parse_track(std::string_view name) {
  for (Track t : kAllTracks) {
    if (track_name(t) == name) return t;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown track '" + std::string(name) + "' (expected vocals, drums, bass or other)");
}

StemSet::StemSet(AudioBuffer vocals, AudioBuffer drums, AudioBuffer bass, AudioBuffer other)
    : tracks_{std::move(vocals), std::move(drums), std::move(bass), std::move(other)} {
  for (Track t : {Track::kDrums, Track::kBass, Track::kOther}) {
    require_aligned(tracks_[0], (*this)[t], std::string("stem set (") + std::string(track_name(t)) + ")");
  }
}

StemSet StemSet::with_track(Track t, AudioBuffer buffer) const {
  require_aligned(vocals(), buffer, "StemSet::with_track");
  StemSet copy = *this;
  copy.tracks_[static_cast<int>(t)] = std::move(buffer);
  return copy;
}

AudioBuffer StemSet::sum() const {
  AudioBuffer out = vocals();
  accumulate(out, drums());
  accumulate(out, bass());
  accumulate(out, other());
  return out;
}

StemSet load_stem_directory(const std::filesystem::path& dir) {
  auto load = [&](Track t) { return read_wav(dir / (std::string(track_name(t)) + ".wav")); };
  return StemSet(load(Track::kVocals), load(Track::kDrums), load(Track::kBass),
                 load(Track::kOther));
}

void save_stem_directory(const StemSet& stems, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create directory '" + dir.string() + "'");
  for (Track t : kAllTracks) {
    write_wav(stems[t], dir / (std::string(track_name(t)) + ".wav"));
  }
}

StemSet add_stem_noise(const StemSet& truth, double snr_db, std::uint64_t seed) {
  if (!std::isfinite(snr_db)) throw Error(ErrorCode::kInvalidArgument, "SNR must be finite");
  std::array<AudioBuffer, 4> noisy;
  for (Track t : kAllTracks) {
    const AudioBuffer& clean = truth[t];
    const double samples = static_cast<double>(clean.frames() * clean.num_channels());
    const double power = samples > 0 ? clean.energy() / samples : 0.0;
    const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));

    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(0.0, 1.0);

    AudioBuffer out = clean;
    if (sigma > 0.0) {
      for (std::size_t c = 0; c < out.num_channels(); ++c) {
        for (double& x : out.channel(c)) x += sigma * gauss(rng);
      }
    }
    noisy[static_cast<int>(t)] = std::move(out);
  }
  return StemSet(std::move(noisy[0]), std::move(noisy[1]), std::move(noisy[2]),
                 std::move(noisy[3]));
}

StemSet provide_stems(const StemProviderSpec& spec, const AudioBuffer& mix) {
  StemSet stems = [&] {
    switch (spec.kind) {
      case StemProviderSpec::Kind::kDirectory:
      case StemProviderSpec::Kind::kOracle:
        return load_stem_directory(spec.path);
      case StemProviderSpec::Kind::kNoisyOracle:
        return add_stem_noise(load_stem_directory(spec.path), spec.snr_db, spec.seed);
    }
    throw Error(ErrorCode::kInvalidArgument, "unknown stem provider kind");
  }();
  require_aligned(mix, stems.vocals(), "stems from '" + spec.path.string() + "' vs mixture");
  return stems;
}

StemSet ensemble_average(std::span<const StemSet> sets,
                         std::optional<std::span<const double>> weights) {
  if (sets.empty()) throw Error(ErrorCode::kInvalidArgument, "ensemble needs at least one stem set");
  for (const StemSet& s : sets.subspan(1)) {
    require_aligned(sets.front().vocals(), s.vocals(), "ensemble member");
  }

  std::vector<double> w(sets.size(), 1.0);
  if (weights) {
    if (weights->size() != sets.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "ensemble has " + std::to_string(sets.size()) + " members but " +
                      std::to_string(weights->size()) + " weights");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double v = (*weights)[k];
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error(ErrorCode::kInvalidArgument, "ensemble weights must be finite and >= 0");
      }
      w[k] = v;
      total += v;
    }
    if (!(total > 0.0)) throw Error(ErrorCode::kInvalidArgument, "ensemble weights sum to zero");
  }

  // Running weighted mean: m += (w_k / W_k) (x_k - m). Identical members leave
  // m untouched, and zero-weight members are skipped entirely.
  std::array<AudioBuffer, 4> mean;
  for (Track t : kAllTracks) {
    std::optional<AudioBuffer> m;
    double seen = 0.0;
    for (std::size_t k = 0; k < sets.size(); ++k) {
      if (w[k] == 0.0) continue;
      const AudioBuffer& x = sets[k][t];
      seen += w[k];
      if (!m) {
        m = x;
        continue;
      }
      const double step = w[k] / seen;
      for (std::size_t c = 0; c < m->num_channels(); ++c) {
        auto dst = m->channel(c);
        auto src = x.channel(c);
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += step * (src[i] - dst[i]);
      }
    }
    mean[static_cast<int>(t)] = std::move(*m);
  }
  return StemSet(std::move(mean[0]), std::move(mean[1]), std::move(mean[2]), std::move(mean[3]));
}

AudioBuffer compute_residual(const AudioBuffer& mix, const StemSet& stems) {
  require_aligned(mix, stems.vocals(), "compute_residual");
  AudioBuffer r = mix;
  for (Track t : {Track::kVocals, Track::kDrums, Track::kBass}) {
    for (std::size_t c = 0; c < r.num_channels(); ++c) {
      auto dst = r.channel(c);
      auto src = stems[t].channel(c);
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] -= src[i];
    }
  }
  return r;
}

AudioBuffer blend_other(const AudioBuffer& predicted_other, const AudioBuffer& residual,
                        double residual_weight) {
  require_aligned(predicted_other, residual, "blend_other");
  if (!(residual_weight >= 0.0 && residual_weight <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "blend weight must lie in [0, 1]");
  }
  const double keep = 1.0 - residual_weight;
  AudioBuffer out = predicted_other;
  for (std::size_t c = 0; c < out.num_channels(); ++c) {
    auto dst = out.channel(c);
    auto src = residual.channel(c);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = keep * dst[i] + residual_weight * src[i];
  }
  return out;
}

std::vector<Segment> salient_segments(const StemSet& stems, Track track,
                                      std::size_t segment_frames, double ratio_threshold) {
  if (segment_frames == 0) throw Error(ErrorCode::kInvalidArgument, "segment length must be > 0");
  if (!(ratio_threshold >= 0.0 && ratio_threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "ratio threshold must lie in [0, 1]");
  }

  auto window_energy = [&](Track t, std::size_t start) {
    double e = 0.0;
    const AudioBuffer& b = stems[t];
    for (std::size_t c = 0; c < b.num_channels(); ++c) {
      auto ch = b.channel(c);
      for (std::size_t i = start; i < start + segment_frames; ++i) e += ch[i] * ch[i];
    }
    return e;
  };

  std::vector<Segment> out;
  for (std::size_t start = 0; start + segment_frames <= stems.frames(); start += segment_frames) {
    double total = 0.0;
    double target = 0.0;
    for (Track t : kAllTracks) {
      const double e = window_energy(t, start);
      total += e;
      if (t == track) target = e;
    }
    const double ratio = total > 0.0 ? std::clamp(target / total, 0.0, 1.0) : 0.0;
    if (ratio >= ratio_threshold) out.push_back({start, segment_frames, track, ratio});
  }
  return out;
}

}  // namespace hamix
