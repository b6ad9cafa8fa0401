#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hamix/audio_buffer.hpp"

namespace hamix {

inline const std::vector<double> kDefaultAudiogramFrequencies = {250, 500, 1000, 2000, 4000, 6000};

/// Hearing loss in dB HL at ascending anchor frequencies. Must include the
/// 500, 1000 and 2000 Hz anchors that the NAL-R formula averages over.
struct Audiogram {
  std::vector<double> frequencies = kDefaultAudiogramFrequencies;
  std::vector<double> levels;

  /// Throws Error(kInvalidArgument) on any invariant violation.
  void validate() const;
  double level_at(double frequency) const;  // exact anchor lookup
  bool has_loss() const noexcept;
};

struct Listener {
  std::string id;
  Audiogram left;
  Audiogram right;
};

/// Listener JSON: {"id", "frequencies" (optional), "left_db_hl", "right_db_hl"}.
Listener load_listener(const std::filesystem::path& path);
Listener parse_listener(const std::string& json_text);

/// NAL-R frequency correction in dB, interpolated linearly in log frequency
/// between the table anchors and held at the table edges.
double nalr_correction_db(double frequency);

/// NAL-R insertion gain (dB) at each audiogram frequency:
///   gain(f) = max(0, 0.05 (HL500 + HL1000 + HL2000) + 0.31 HL(f) + C(f)).
/// An audiogram without loss (every level <= 0 dB HL) prescribes 0 dB
/// everywhere, so normal hearing gets a transparent filter.
std::vector<double> nalr_insertion_gains(const Audiogram& audiogram);

/// Linear-phase FIR: odd length, symmetric taps.
class FirFilter {
 public:
  FirFilter(std::vector<double> taps, int sample_rate);

  static FirFilter identity(std::size_t n_taps, int sample_rate);

  const std::vector<double>& taps() const noexcept { return taps_; }
  int sample_rate() const noexcept { return sample_rate_; }
  std::size_t delay() const noexcept { return (taps_.size() - 1) / 2; }

  /// Magnitude response in dB at `frequency` Hz (direct DTFT evaluation).
  double response_db(double frequency) const;

 private:
  std::vector<double> taps_;
  int sample_rate_;
};

inline constexpr std::size_t kDefaultNalrTaps = 141;

/// Frequency-sampling design: the prescription is interpolated in log
/// frequency onto a uniform grid (held flat outside the anchors), given a
/// linear phase, inverse transformed and Hamming windowed. The anchor gains
/// used for the design are then corrected by the measured error and the
/// design repeated until every anchor is within 0.01 dB or the iteration
/// budget runs out. Requires odd n_taps >= 65.
FirFilter design_nalr_fir(const std::vector<double>& frequencies,
                          const std::vector<double>& gains_db, std::size_t n_taps,
                          int sample_rate);

/// Per-channel convolution truncated to the input length. With delay
/// compensation the output is advanced by the filter's group delay.
AudioBuffer apply_fir(const AudioBuffer& signal, const FirFilter& filter,
                      bool compensate_delay = true);

/// Filters the left channel with the left ear's prescription and the right
/// channel with the right ear's, delay-compensated. Stereo input only.
AudioBuffer nalr_process(const AudioBuffer& buffer, const Listener& listener,
                         std::size_t n_taps = kDefaultNalrTaps);

}  // namespace hamix
