#include "hamix/loudness.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "hamix/error.hpp"

namespace hamix {
namespace {

struct Biquad {
  std::array<double, 3> b;
  std::array<double, 3> a;  // a[0] == 1

  void run(std::vector<double>& x) const {
    double z1 = 0.0, z2 = 0.0;  // transposed direct form II
    for (double& v : x) {
      const double in = v;
      const double out = b[0] * in + z1;
      z1 = b[1] * in - a[1] * out + z2;
      z2 = b[2] * in - a[2] * out;
      v = out;
    }
  }
};

// Pre-filter (high shelf) and RLB high-pass of the K-weighting, derived for
// an arbitrary rate from the analog prototypes behind the 48 kHz table.
Biquad shelving_stage(double rate) {
  constexpr double f0 = 1681.974450955533;
  constexpr double gain_db = 3.999843853973347;
  constexpr double q = 0.7071752369554196;
  const double k = std::tan(std::numbers::pi * f0 / rate);
  const double vh = std::pow(10.0, gain_db / 20.0);
  const double vb = std::pow(vh, 0.4996667741545416);
  const double a0 = 1.0 + k / q + k * k;
  return {{(vh + vb * k / q + k * k) / a0, 2.0 * (k * k - vh) / a0,
           (vh - vb * k / q + k * k) / a0},
          {1.0, 2.0 * (k * k - 1.0) / a0, (1.0 - k / q + k * k) / a0}};
}

Biquad highpass_stage(double rate) {
  constexpr double f0 = 38.13547087602444;
  constexpr double q = 0.5003270373238773;
  const double k = std::tan(std::numbers::pi * f0 / rate);
  const double a0 = 1.0 + k / q + k * k;
  return {{1.0, -2.0, 1.0},
          {1.0, 2.0 * (k * k - 1.0) / a0, (1.0 - k / q + k * k) / a0}};
}

double block_lufs(double power) { return -0.691 + 10.0 * std::log10(power); }

}  // namespace

Loudness Loudness::lufs(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kInvalidArgument, "loudness value must be finite");
  }
  Loudness l;
  l.value_ = value;
  return l;
}

double Loudness::value() const {
  if (!value_) throw Error(ErrorCode::kUndefinedLoudness, "loudness is undefined");
  return *value_;
}

Loudness integrated_loudness(const AudioBuffer& buffer) {
  const int rate = buffer.sample_rate();
  if (rate < 8000) {
    throw Error(ErrorCode::kInvalidArgument,
                "loudness needs a sample rate of at least 8 kHz, got " + std::to_string(rate));
  }
  const std::size_t block = static_cast<std::size_t>(std::llround(0.4 * rate));
  const std::size_t hop = static_cast<std::size_t>(std::llround(0.1 * rate));
  const std::size_t frames = buffer.frames();
  if (frames < block) return Loudness::undefined();
  const std::size_t blocks = (frames - block) / hop + 1;

  const Biquad shelf = shelving_stage(rate);
  const Biquad highpass = highpass_stage(rate);

  // Summed-over-channels mean square per gating block.
  std::vector<double> power(blocks, 0.0);
  for (std::size_t c = 0; c < buffer.num_channels(); ++c) {
    std::vector<double> x(buffer.channel(c).begin(), buffer.channel(c).end());
    shelf.run(x);
    highpass.run(x);
    // Squares summed per 100 ms hop, then 4 hops per block.
    const std::size_t hops = (frames / hop);
    std::vector<double> hop_energy(hops, 0.0);
    for (std::size_t h = 0; h < hops; ++h) {
      double e = 0.0;
      for (std::size_t i = h * hop; i < (h + 1) * hop; ++i) e += x[i] * x[i];
      hop_energy[h] = e;
    }
    const bool exact_hops = block == 4 * hop;
    for (std::size_t j = 0; j < blocks; ++j) {
      double e = 0.0;
      if (exact_hops) {
        for (std::size_t h = 0; h < 4; ++h) e += hop_energy[j + h];
      } else {
        for (std::size_t i = j * hop; i < j * hop + block; ++i) e += x[i] * x[i];
      }
      power[j] += e / static_cast<double>(block);
    }
  }

  double sum = 0.0;
  std::size_t count = 0;
  for (double p : power) {
    if (p > 0.0 && block_lufs(p) > kAbsoluteGateLufs) {
      sum += p;
      ++count;
    }
  }
  if (count == 0) return Loudness::undefined();

  const double relative_gate = block_lufs(sum / static_cast<double>(count)) + kRelativeGateLu;
  sum = 0.0;
  count = 0;
  for (double p : power) {
    if (p > 0.0) {
      const double l = block_lufs(p);
      if (l > kAbsoluteGateLufs && l > relative_gate) {
        sum += p;
        ++count;
      }
    }
  }
  if (count == 0) return Loudness::undefined();
  return Loudness::lufs(block_lufs(sum / static_cast<double>(count)));
}

AudioBuffer normalize_to_loudness(const AudioBuffer& buffer, double target_lufs,
                                  double& applied_gain) {
  const Loudness measured = integrated_loudness(buffer);
  if (!measured.defined()) {
    throw Error(ErrorCode::kUndefinedLoudness,
                "cannot normalize: input loudness is undefined (silent program?)");
  }
  double gain = std::pow(10.0, (target_lufs - measured.value()) / 20.0);
  AudioBuffer out = scaled(buffer, gain);

  // Gating can move when the level moves; one correction step suffices.
  const Loudness after = integrated_loudness(out);
  if (after.defined() && std::abs(after.value() - target_lufs) > 0.05) {
    gain *= std::pow(10.0, (target_lufs - after.value()) / 20.0);
    out = scaled(buffer, gain);
  }
  applied_gain = gain;
  return out;
}

AudioBuffer normalize_to_loudness(const AudioBuffer& buffer, double target_lufs) {
  double gain = 1.0;
  return normalize_to_loudness(buffer, target_lufs, gain);
}

}  // namespace hamix
