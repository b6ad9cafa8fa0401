#pragma once

// Test signal generators shared by the unit and acceptance suites.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hamix/audio_buffer.hpp"
#include "hamix/hearing.hpp"
#include "hamix/stems.hpp"

namespace hamix::testing {

inline AudioBuffer sine(int rate, double freq, double amplitude, std::size_t frames,
                        std::size_t channels = 2, double phase = 0.0) {
  std::vector<double> x(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    x[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / rate + phase);
  }
  return AudioBuffer(rate, std::vector<std::vector<double>>(channels, x));
}

inline AudioBuffer noise(int rate, std::size_t channels, std::size_t frames, std::uint64_t seed,
                         double sigma = 0.1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  std::vector<std::vector<double>> ch(channels, std::vector<double>(frames));
  for (auto& c : ch) {
    for (double& v : c) v = g(rng);
  }
  return AudioBuffer(rate, std::move(ch));
}

/// Rounds every sample to a multiple of 2^-15, the grid of 16-bit PCM. Sums
/// and differences of a handful of such values are exact in double, which
/// makes "exactly equal" assertions meaningful.
inline AudioBuffer quantize(const AudioBuffer& b) {
  AudioBuffer out = b;
  for (std::size_t c = 0; c < out.num_channels(); ++c) {
    for (double& v : out.channel(c)) v = std::round(v * 32768.0) / 32768.0;
  }
  return out;
}

/// A synthetic four-stem song on the 16-bit grid: vocal-like harmonic tone
/// with vibrato, decaying noise hits, a bass line and a noisy pad. Each stem
/// has slightly different left/right content.
inline StemSet make_song(int rate, double seconds, std::uint64_t seed = 1) {
  const auto frames = static_cast<std::size_t>(seconds * rate);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<double>> v(2, std::vector<double>(frames)), d = v, b = v, o = v;
  const double two_pi = 2.0 * std::numbers::pi;
  double drum_env = 0.0;
  const std::size_t beat = static_cast<std::size_t>(0.5 * rate);
  for (std::size_t i = 0; i < frames; ++i) {
    const double t = static_cast<double>(i) / rate;
    const double f0 = 220.0 * (1.0 + 0.01 * std::sin(two_pi * 5.0 * t));
    double voice = 0.0;
    for (int h = 1; h <= 5; ++h) voice += std::sin(two_pi * f0 * h * t) / h;
    voice *= 0.08 * (0.6 + 0.4 * std::sin(two_pi * 0.25 * t));
    if (i % beat == 0) drum_env = 1.0;
    drum_env *= std::exp(-1.0 / (0.05 * rate));
    const double hit = 0.15 * drum_env * g(rng);
    const double bass = 0.12 * std::sin(two_pi * 55.0 * t) + 0.04 * std::sin(two_pi * 110.0 * t);
    const double pad_l = 0.05 * std::sin(two_pi * 330.0 * t) + 0.01 * g(rng);
    const double pad_r = 0.05 * std::sin(two_pi * 440.0 * t) + 0.01 * g(rng);
    v[0][i] = voice;
    v[1][i] = 0.8 * voice;
    d[0][i] = hit;
    d[1][i] = 0.9 * hit;
    b[0][i] = bass;
    b[1][i] = bass;
    o[0][i] = pad_l;
    o[1][i] = pad_r;
  }
  return StemSet(quantize(AudioBuffer(rate, v)), quantize(AudioBuffer(rate, d)),
                 quantize(AudioBuffer(rate, b)), quantize(AudioBuffer(rate, o)));
}

inline Listener flat_listener(double left_hl, double right_hl, std::string id = "L") {
  Listener l;
  l.id = std::move(id);
  l.left.levels.assign(kDefaultAudiogramFrequencies.size(), left_hl);
  l.right.levels.assign(kDefaultAudiogramFrequencies.size(), right_hl);
  return l;
}

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("hamix_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline double rms(const AudioBuffer& b) {
  const double n = static_cast<double>(b.frames() * b.num_channels());
  return n > 0 ? std::sqrt(b.energy() / n) : 0.0;
}

inline double max_abs_diff(const AudioBuffer& a, const AudioBuffer& b) {
  double m = 0.0;
  for (std::size_t c = 0; c < a.num_channels(); ++c) {
    for (std::size_t i = 0; i < a.frames(); ++i) {
      m = std::max(m, std::abs(a.channel(c)[i] - b.channel(c)[i]));
    }
  }
  return m;
}

}  // namespace hamix::testing
