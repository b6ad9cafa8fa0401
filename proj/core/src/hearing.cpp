#include "hamix/hearing.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hamix/convolution.hpp"
#include "hamix/error.hpp"

namespace hamix {
namespace {

// Table of record for the NAL-R prescription.
constexpr double kAverageWeight = 0.05;  // applied to HL500 + HL1000 + HL2000
constexpr double kLossWeight = 0.31;
struct Correction {
  double frequency;
  double db;
};
constexpr std::array<Correction, 6> kCorrections = {{
    {250, -17}, {500, -8}, {1000, 1}, {2000, -1}, {4000, -2}, {6000, -2},
}};

constexpr int kMaxDesignIterations = 32;
constexpr double kDesignToleranceDb = 0.01;

// Linear interpolation in log frequency, held constant beyond both ends.
double interp_log(double f, const std::vector<double>& xs, const std::vector<double>& ys) {
  if (f <= xs.front()) return ys.front();
  if (f >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), f);
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  const std::size_t lo = hi - 1;
  const double t = std::log(f / xs[lo]) / std::log(xs[hi] / xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

std::vector<double> frequency_sampling(const std::vector<double>& frequencies,
                                       const std::vector<double>& gains_db, std::size_t n_taps,
                                       int sample_rate) {
  const std::size_t fft_size = std::bit_ceil(std::max<std::size_t>(4 * n_taps, 1024));
  RealFft fft(fft_size);
  std::vector<std::complex<double>> spectrum(fft.bins());
  const double delay = static_cast<double>(n_taps - 1) / 2.0;
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double f = static_cast<double>(k) * sample_rate / static_cast<double>(fft_size);
    const double magnitude = std::pow(10.0, interp_log(f, frequencies, gains_db) / 20.0);
    const double phase = -2.0 * std::numbers::pi * static_cast<double>(k) * delay /
                         static_cast<double>(fft_size);
    spectrum[k] = std::polar(magnitude, phase);
  }
  std::vector<double> impulse(fft_size);
  fft.inverse(spectrum, impulse);

  std::vector<double> taps(n_taps);
  const double denom = static_cast<double>(n_taps - 1);
  for (std::size_t n = 0; n < n_taps; ++n) {
    const double window = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / denom);
    taps[n] = impulse[n] / static_cast<double>(fft_size) * window;
  }
  for (std::size_t n = 0; n < n_taps / 2; ++n) {
    const double mid = 0.5 * (taps[n] + taps[n_taps - 1 - n]);
    taps[n] = mid;
    taps[n_taps - 1 - n] = mid;
  }
  return taps;
}

std::vector<double> read_levels(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw Error(ErrorCode::kParse, std::string("listener: missing array '") + key + "'");
  }
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw Error(ErrorCode::kParse, std::string("listener: non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

void Audiogram::validate() const {
  if (frequencies.empty() || frequencies.size() != levels.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "audiogram needs one level per frequency (" + std::to_string(frequencies.size()) +
                    " frequencies, " + std::to_string(levels.size()) + " levels)");
  }
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    if (!(frequencies[i] > 0.0) || !std::isfinite(frequencies[i])) {
      throw Error(ErrorCode::kInvalidArgument, "audiogram frequencies must be positive");
    }
    if (i > 0 && !(frequencies[i] > frequencies[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument, "audiogram frequencies must be strictly ascending");
    }
    if (!std::isfinite(levels[i])) {
      throw Error(ErrorCode::kInvalidArgument, "audiogram levels must be finite");
    }
  }
  for (double anchor : {500.0, 1000.0, 2000.0}) {
    if (std::find(frequencies.begin(), frequencies.end(), anchor) == frequencies.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "audiogram is missing the " + std::to_string(static_cast<int>(anchor)) +
                      " Hz entry required by NAL-R");
    }
  }
}

double Audiogram::level_at(double frequency) const {
  const auto it = std::find(frequencies.begin(), frequencies.end(), frequency);
  if (it == frequencies.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "audiogram has no " + std::to_string(frequency) + " Hz entry");
  }
  return levels[static_cast<std::size_t>(it - frequencies.begin())];
}

bool Audiogram::has_loss() const noexcept {
  return std::any_of(levels.begin(), levels.end(), [](double l) { return l > 0.0; });
}

Listener parse_listener(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("listener: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kParse, "listener: expected a JSON object");
  Listener listener;
  listener.id = j.value("id", std::string());
  std::vector<double> freqs = kDefaultAudiogramFrequencies;
  if (j.contains("frequencies")) freqs = read_levels(j, "frequencies");
  listener.left = {freqs, read_levels(j, "left_db_hl")};
  listener.right = {freqs, read_levels(j, "right_db_hl")};
  listener.left.validate();
  listener.right.validate();
  return listener;
}

Listener load_listener(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open listener file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_listener(ss.str());
}

double nalr_correction_db(double frequency) {
  static const std::vector<double> xs = [] {
    std::vector<double> v;
    for (const auto& c : kCorrections) v.push_back(c.frequency);
    return v;
  }();
  static const std::vector<double> ys = [] {
    std::vector<double> v;
    for (const auto& c : kCorrections) v.push_back(c.db);
    return v;
  }();
  return interp_log(frequency, xs, ys);
}

std::vector<double> nalr_insertion_gains(const Audiogram& audiogram) {
  audiogram.validate();
  std::vector<double> gains(audiogram.frequencies.size(), 0.0);
  if (!audiogram.has_loss()) return gains;
  const double average = kAverageWeight * (audiogram.level_at(500) + audiogram.level_at(1000) +
                                           audiogram.level_at(2000));
  for (std::size_t i = 0; i < gains.size(); ++i) {
    const double f = audiogram.frequencies[i];
    gains[i] = std::max(0.0, average + kLossWeight * audiogram.levels[i] + nalr_correction_db(f));
  }
  return gains;
}

FirFilter::FirFilter(std::vector<double> taps, int sample_rate)
    : taps_(std::move(taps)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0) throw Error(ErrorCode::kInvalidArgument, "filter sample rate must be positive");
  if (taps_.size() % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "FIR length must be odd, got " + std::to_string(taps_.size()));
  }
  for (std::size_t k = 0; k < taps_.size(); ++k) {
    if (!std::isfinite(taps_[k])) throw Error(ErrorCode::kInvalidArgument, "non-finite FIR tap");
    if (std::abs(taps_[k] - taps_[taps_.size() - 1 - k]) > 1e-12) {
      throw Error(ErrorCode::kInvalidArgument, "FIR taps are not symmetric (linear phase)");
    }
  }
}

FirFilter FirFilter::identity(std::size_t n_taps, int sample_rate) {
  std::vector<double> taps(n_taps, 0.0);
  if (n_taps % 2 == 1) taps[n_taps / 2] = 1.0;
  return FirFilter(std::move(taps), sample_rate);
}

double FirFilter::response_db(double frequency) const {
  const double w = 2.0 * std::numbers::pi * frequency / sample_rate_;
  std::complex<double> acc = 0.0;
  for (std::size_t n = 0; n < taps_.size(); ++n) {
    acc += taps_[n] * std::polar(1.0, -w * static_cast<double>(n));
  }
  return 20.0 * std::log10(std::max(std::abs(acc), 1e-300));
}

FirFilter design_nalr_fir(const std::vector<double>& frequencies,
                          const std::vector<double>& gains_db, std::size_t n_taps,
                          int sample_rate) {
  if (n_taps % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "NAL-R filter length must be odd, got " + std::to_string(n_taps));
  }
  if (n_taps < 65) throw Error(ErrorCode::kInvalidArgument, "NAL-R filter needs at least 65 taps");
  if (frequencies.empty() || frequencies.size() != gains_db.size()) {
    throw Error(ErrorCode::kInvalidArgument, "need one gain per anchor frequency");
  }
  for (std::size_t i = 0; i < gains_db.size(); ++i) {
    if (!std::isfinite(gains_db[i])) throw Error(ErrorCode::kInvalidArgument, "non-finite gain");
    if (!(frequencies[i] > 0.0) || (i > 0 && !(frequencies[i] > frequencies[i - 1]))) {
      throw Error(ErrorCode::kInvalidArgument, "anchor frequencies must be positive and ascending");
    }
  }
  if (std::all_of(gains_db.begin(), gains_db.end(), [](double g) { return g == 0.0; })) {
    return FirFilter::identity(n_taps, sample_rate);
  }

  const double nyquist = sample_rate / 2.0;
  std::vector<double> design_gains = gains_db;
  std::vector<double> best;
  double best_error = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < kMaxDesignIterations; ++iter) {
    FirFilter candidate(frequency_sampling(frequencies, design_gains, n_taps, sample_rate),
                        sample_rate);
    double worst = 0.0;
    std::vector<double> error(gains_db.size(), 0.0);
    for (std::size_t i = 0; i < gains_db.size(); ++i) {
      if (frequencies[i] >= nyquist) continue;
      error[i] = candidate.response_db(frequencies[i]) - gains_db[i];
      worst = std::max(worst, std::abs(error[i]));
    }
    if (worst < best_error) {
      best_error = worst;
      best = candidate.taps();
    }
    if (worst < kDesignToleranceDb) break;
    for (std::size_t i = 0; i < design_gains.size(); ++i) design_gains[i] -= error[i];
  }
  return FirFilter(std::move(best), sample_rate);
}

AudioBuffer apply_fir(const AudioBuffer& signal, const FirFilter& filter, bool compensate_delay) {
  if (signal.sample_rate() != filter.sample_rate()) {
    throw Error(ErrorCode::kMisaligned,
                "filter designed for " + std::to_string(filter.sample_rate()) +
                    " Hz applied to " + std::to_string(signal.sample_rate()) + " Hz audio");
  }
  const std::size_t offset = compensate_delay ? filter.delay() : 0;
  std::vector<std::vector<double>> channels;
  channels.reserve(signal.num_channels());
  for (std::size_t c = 0; c < signal.num_channels(); ++c) {
    channels.push_back(convolve(signal.channel(c), filter.taps(), offset, signal.frames()));
  }
  return AudioBuffer(signal.sample_rate(), std::move(channels));
}

AudioBuffer nalr_process(const AudioBuffer& buffer, const Listener& listener, std::size_t n_taps) {
  if (buffer.num_channels() != 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "NAL-R processing needs stereo input, got " + std::to_string(buffer.num_channels()) +
                    " channel(s)");
  }
  const int rate = buffer.sample_rate();
  const FirFilter left = design_nalr_fir(listener.left.frequencies,
                                         nalr_insertion_gains(listener.left), n_taps, rate);
  const FirFilter right = design_nalr_fir(listener.right.frequencies,
                                          nalr_insertion_gains(listener.right), n_taps, rate);
  const std::size_t frames = buffer.frames();
  std::vector<std::vector<double>> out;
  out.push_back(convolve(buffer.channel(0), left.taps(), left.delay(), frames));
  out.push_back(convolve(buffer.channel(1), right.taps(), right.delay(), frames));
  return AudioBuffer(rate, std::move(out));
}

}  // namespace hamix
