// Acceptance checks for the enhancement chain. Prints one PASS/FAIL line per
// criterion and exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hamix/hamix.hpp"
#include "signals.hpp"

namespace {

using namespace hamix;
using hamix::testing::flat_listener;
using hamix::testing::make_song;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double dot(const AudioBuffer& a, const AudioBuffer& b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.num_channels(); ++c) {
    const auto x = a.channel(c);
    const auto y = b.channel(c);
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  }
  return s;
}

// SDR against the least-squares scaled reference.
double scaled_sdr(const AudioBuffer& reference, const AudioBuffer& estimate) {
  return sdr(scaled(reference, dot(estimate, reference) / dot(reference, reference)), estimate);
}

double max_count(const std::vector<std::size_t>& counts) {
  return static_cast<double>(*std::max_element(counts.begin(), counts.end()));
}

Outcome pipeline_identity() {
  const int rate = 44100;
  const StemSet s = make_song(rate, 30.0, 1);
  const AudioBuffer mix = s.sum();
  const std::vector<StemSet> oracle = {s};
  EnhanceOptions options;
  options.use_compressor_heuristic = false;
  const auto t0 = std::chrono::steady_clock::now();
  const EnhanceResult r = enhance(mix, oracle, GainSpec(), flat_listener(0, 0), options);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const AudioBuffer expected = normalize_to_loudness(mix, integrated_loudness(mix).value());
  const double value = sdr(expected, r.output);
  return {value >= 60.0 && seconds < 5.0, fmt("SDR %.2f dB, runtime %.3f s", value, seconds)};
}

Outcome ensemble_gain() {
  constexpr int kTrials = 50;
  constexpr int kSets = 4;
  std::array<double, 4> gain{};
  for (int trial = 0; trial < kTrials; ++trial) {
    const StemSet truth = make_song(22050, 2.0, 1000 + trial);
    std::vector<StemSet> sets;
    for (int k = 0; k < kSets; ++k) {
      sets.push_back(add_stem_noise(truth, 10.0, static_cast<std::uint64_t>(trial) * kSets + k + 1));
    }
    const StemSet avg = ensemble_average(sets);
    for (std::size_t t = 0; t < kAllTracks.size(); ++t) {
      const Track track = kAllTracks[t];
      double individual = 0.0;
      for (const StemSet& set : sets) individual += sdr(truth[track], set[track]);
      gain[t] += (sdr(truth[track], avg[track]) - individual / kSets) / kTrials;
    }
  }
  bool pass = true;
  std::string detail;
  for (std::size_t t = 0; t < gain.size(); ++t) {
    pass = pass && std::abs(gain[t] - 6.02) <= 1.0;
    detail += fmt("%s %+.2f dB ", std::string(track_name(kAllTracks[t])).c_str(), gain[t]);
  }
  return {pass, detail};
}

Outcome residual_ablation() {
  constexpr int kTrials = 10;
  double delta = 0.0;
  for (int trial = 0; trial < kTrials; ++trial) {
    const StemSet truth = make_song(22050, 4.0, 2000 + trial);
    const StemSet near = add_stem_noise(truth, 60.0, 3 * trial + 1);
    const StemSet corrupted = near.with_track(Track::kOther, add_stem_noise(truth, 0.0, 3 * trial + 2).other());
    const std::vector<StemSet> sets = {corrupted};
    EnhanceOptions on;
    on.use_compressor_heuristic = false;
    EnhanceOptions off = on;
    off.use_residual = false;
    const Listener l = flat_listener(30, 30);
    const auto with = enhance(truth.sum(), sets, GainSpec(), l, on).stems.other();
    const auto without = enhance(truth.sum(), sets, GainSpec(), l, off).stems.other();
    delta += (sdr(truth.other(), with) - sdr(truth.other(), without)) / kTrials;
  }

  const StemSet perfect = make_song(22050, 4.0, 3000);
  const std::vector<StemSet> sets = {perfect};
  EnhanceOptions on;
  EnhanceOptions off;
  off.use_residual = false;
  const Listener l = flat_listener(40, 50);
  const bool identical = enhance(perfect.sum(), sets, GainSpec(), l, on).output ==
                         enhance(perfect.sum(), sets, GainSpec(), l, off).output;
  return {std::abs(delta - 3.01) <= 0.5 && identical,
          fmt("on-off %+.2f dB on other (target 3.01 +/- 0.5), perfect stems bit-identical: %s", delta,
              identical ? "yes" : "no")};
}

// Single "other" stem of quiet tone with `spikes` samples at 1.2 in the left
// channel. With 0 dB gains and a zero-HL listener the chain output is the mix.
StemSet spiky_program(std::size_t spikes) {
  const int rate = 44100;
  const std::size_t frames = 30 * rate;
  AudioBuffer other = hamix::testing::sine(rate, 440.0, 0.25, frames, 2);
  auto left = other.channel(0);
  for (std::size_t k = 0; k < spikes; ++k) left[k * 40 + 7] = 1.2;
  const AudioBuffer zero = AudioBuffer::zeros(rate, 2, frames);
  return StemSet(zero, zero, zero, other);
}

Outcome compressor_ablation() {
  const StemSet s = make_song(44100, 10.0, 4);
  const Listener severe = flat_listener(90, 90);
  const std::vector<StemSet> sets = {s};
  const EnhanceResult r = enhance(s.sum(), sets, GainSpec(), severe);

  const AudioBuffer mix = s.sum();
  const AudioBuffer unclipped = nalr_process(normalize_to_loudness(mix, integrated_loudness(mix).value()), severe);
  const double sdr_comp = scaled_sdr(unclipped, r.output);
  const double sdr_clip = scaled_sdr(unclipped, hard_clip(unclipped));
  const bool fired = r.report.compressor_applied && max_count(r.report.clip_counts) >= kClipTriggerCount;

  bool below_ok = true;
  bool at_ok = true;
  for (std::size_t n : {std::size_t{24'999}, std::size_t{25'000}}) {
    const StemSet p = spiky_program(n);
    const std::vector<StemSet> ps = {p};
    const EnhanceResult e = enhance(p.sum(), ps, GainSpec(), flat_listener(0, 0));
    const bool exact = max_count(e.report.clip_counts) == static_cast<double>(n);
    if (n < kClipTriggerCount) below_ok = exact && !e.report.compressor_applied;
    else at_ok = exact && e.report.compressor_applied && e.output.peak() <= 1.0;
  }
  const bool pass = fired && r.output.peak() <= 1.0 && sdr_comp > sdr_clip && below_ok && at_ok;
  return {pass, fmt("clipped %.0f, fired %s, peak %.4f, SDR compressed %.2f dB vs hard-clip %.2f dB, "
                    "24999 quiet %s, 25000 fires %s",
                    max_count(r.report.clip_counts), fired ? "yes" : "no", r.output.peak(), sdr_comp, sdr_clip,
                    below_ok ? "yes" : "no", at_ok ? "yes" : "no")};
}

Outcome nalr_realization() {
  const double rate = 44100;
  const std::vector<double> flat60(kDefaultAudiogramFrequencies.size(), 60.0);
  const Audiogram a{kDefaultAudiogramFrequencies, flat60};
  const auto gains = nalr_insertion_gains(a);
  const FirFilter f = design_nalr_fir(kDefaultAudiogramFrequencies, gains, kDefaultNalrTaps, rate);
  double worst_anchor = 0.0;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    worst_anchor = std::max(worst_anchor, std::abs(f.response_db(kDefaultAudiogramFrequencies[i]) - gains[i]));
  }
  const Audiogram zero{kDefaultAudiogramFrequencies, std::vector<double>(flat60.size(), 0.0)};
  const FirFilter z = design_nalr_fir(kDefaultAudiogramFrequencies, nalr_insertion_gains(zero), kDefaultNalrTaps, rate);
  double worst_flat = 0.0;
  for (double hz = 100.0; hz <= 16000.0; hz *= 1.01) worst_flat = std::max(worst_flat, std::abs(z.response_db(hz)));
  worst_flat = std::max(worst_flat, std::abs(z.response_db(16000.0)));
  return {worst_anchor <= 1.0 && worst_flat <= 0.5,
          fmt("worst anchor error %.4f dB, zero-HL ripple %.4f dB", worst_anchor, worst_flat)};
}

Outcome loudness_calibration() {
  bool pass = true;
  std::string detail;
  for (int rate : {44100, 48000}) {
    const AudioBuffer tone = hamix::testing::sine(rate, 997.0, 1.0, 10 * rate, 1);
    const double l = integrated_loudness(tone).value();
    std::vector<std::vector<double>> ch = {{tone.channel(0).begin(), tone.channel(0).end()},
                                           std::vector<double>(tone.frames(), 0.0)};
    const double l2 = integrated_loudness(AudioBuffer(rate, ch)).value();
    pass = pass && std::abs(l + 3.01) <= 0.1 && std::abs(l2 + 3.01) <= 0.1;
    detail += fmt("997 Hz @%d: %.3f LUFS mono, %.3f LUFS in one stereo channel; ", rate, l, l2);
  }
  const AudioBuffer music = make_song(44100, 10.0, 5).sum();
  double worst = 0.0;
  for (double target : {-60.0, -40.0, -31.0, -23.0, -16.0, -10.0, -3.0, 0.0}) {
    worst = std::max(worst, std::abs(integrated_loudness(normalize_to_loudness(music, target)).value() - target));
  }
  pass = pass && worst <= 0.1;
  detail += fmt("worst normalization error %.4f LU", worst);
  return {pass, detail};
}

Outcome crosstalk_superposition() {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (std::size_t length : {1u, 32u, 33u, 128u, 512u, 2048u}) {
    std::vector<std::vector<double>> h(4, std::vector<double>(length));
    for (auto& v : h) for (double& x : v) x = g(rng) * 0.2;
    CrosstalkKernel k = make_kernel(h[0], h[1], h[2], h[3], 44100);
    const StemSet s = make_song(44100, 2.0, 20 + length);
    const AudioBuffer whole = apply_crosstalk(s.sum(), k);
    AudioBuffer parts = AudioBuffer::zeros(44100, 2, whole.frames());
    for (Track t : kAllTracks) accumulate(parts, apply_crosstalk(s[t], k));
    worst = std::max(worst, hamix::testing::max_abs_diff(whole, parts) / whole.peak());
  }
  return {worst <= 1e-9, fmt("worst relative deviation %.3e", worst)};
}

Outcome sdr_closed_forms() {
  const AudioBuffer x = hamix::testing::noise(44100, 2, 44100, 3, 0.3);
  const double half = sdr(x, scaled(x, 0.5));
  const double same = sdr(x, x);
  return {std::abs(half - 6.02) <= 0.01 && same == kSdrCapDb,
          fmt("sdr(x, 0.5x) = %.4f dB, sdr(x, x) = %.1f dB", half, same)};
}

Outcome batch_robustness() {
#ifdef HAMIX_CLI_PATH
  const auto dir = hamix::testing::temp_dir("acceptance_batch");
  nlohmann::json jobs = nlohmann::json::array();
  for (int k = 0; k < 3; ++k) {
    const std::string song = "song" + std::to_string(k);
    save_stem_directory(make_song(22050, 2.0, 40 + k), dir / song);
    write_wav(load_stem_directory(dir / song).sum(), dir / (song + ".wav"));
    jobs.push_back({{"song_id", song}, {"mixture", song + ".wav"}, {"stems", {song}},
                    {"gains", "gains.json"}, {"listener", "listener.json"}, {"output", "out/" + song + ".wav"}});
  }
  std::filesystem::remove(dir / "song1" / "bass.wav");
  std::filesystem::create_directories(dir / "out");
  std::ofstream(dir / "gains.json") << R"({"vocals": 2, "drums": 0, "bass": -2, "other": 0})";
  std::ofstream(dir / "listener.json") << R"({"id": "L", "left_db_hl": [20, 30, 40, 50, 60, 65], "right_db_hl": [20, 30, 40, 50, 60, 65]})";
  std::ofstream(dir / "manifest.json") << nlohmann::json({{"jobs", jobs}}).dump();
  const std::string cmd = std::string(HAMIX_CLI_PATH) + " batch --manifest " + (dir / "manifest.json").string() +
                          " --report " + (dir / "report.json").string() + " --workers 2 >/dev/null 2>&1";
  const int exit_code = WEXITSTATUS(std::system(cmd.c_str()));
  int outputs = 0;
  for (int k = 0; k < 3; ++k) outputs += std::filesystem::exists(dir / "out" / ("song" + std::to_string(k) + ".wav"));
  int errors = 0;
  if (std::ifstream in(dir / "report.json"); in) {
    for (const auto& r : nlohmann::json::parse(in)) errors += r["error"].is_string();
  }
  return {outputs == 2 && errors == 1 && exit_code == 2,
          fmt("%d outputs, %d recorded error(s), exit code %d", outputs, errors, exit_code)};
#else
  return {false, "CLI not built"};
#endif
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"pipeline identity", pipeline_identity},
      {"ensemble gain", ensemble_gain},
      {"residual ablation", residual_ablation},
      {"compressor ablation", compressor_ablation},
      {"NAL-R realization", nalr_realization},
      {"loudness calibration", loudness_calibration},
      {"crosstalk superposition", crosstalk_superposition},
      {"SDR closed forms", sdr_closed_forms},
      {"batch robustness", batch_robustness},
  };
  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    Outcome o;
    try {
      o = checks[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << checks[i].first << ": " << o.detail
              << std::endl;
  }
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
