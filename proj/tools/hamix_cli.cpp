// hamix: command-line front end for the enhancement pipeline.
//
// Exit codes: 0 success, 1 error, 2 batch finished with at least one failed
// job.

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hamix/hamix.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitPartialFailure = 2;

struct OptionFlags {
  bool no_residual = false;
  bool no_compressor = false;
  std::string weights;
  std::size_t taps = hamix::kDefaultNalrTaps;
  double blend = hamix::kDefaultBlendWeight;
  hamix::CompressorParams comp;
  std::string format = "32f";

  void attach(CLI::App* app) {
    app->add_flag("--no-residual", no_residual, "Skip the residual repair of the 'other' track");
    app->add_flag("--no-compressor", no_compressor, "Never apply the clip-triggered compressor");
    app->add_option("--weights", weights, "Comma-separated ensemble weights, one per --stems");
    app->add_option("--taps", taps, "NAL-R FIR length (odd, >= 65)")->capture_default_str();
    app->add_option("--blend", blend, "Residual weight in the 'other' blend")->capture_default_str();
    app->add_option("--comp-threshold", comp.threshold_db, "Compressor threshold (dBFS)")->capture_default_str();
    app->add_option("--comp-ratio", comp.ratio, "Compressor ratio")->capture_default_str();
    app->add_option("--comp-attack", comp.attack_ms, "Compressor attack (ms)")->capture_default_str();
    app->add_option("--comp-release", comp.release_ms, "Compressor release (ms)")->capture_default_str();
    app->add_option("--comp-makeup", comp.makeup_db, "Compressor makeup gain (dB)")->capture_default_str();
    app->add_option("--format", format, "Output sample format: 16, 24 or 32f")->capture_default_str();
  }

  hamix::EnhanceOptions build() const {
    hamix::EnhanceOptions options;
    options.use_residual = !no_residual;
    options.use_compressor_heuristic = !no_compressor;
    options.n_taps = taps;
    options.blend_weight = blend;
    options.compressor = comp;
    options.output_format.sample_format = hamix::parse_sample_format(format);
    if (!weights.empty()) {
      std::vector<double> w;
      std::stringstream ss(weights);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          w.push_back(std::stod(item));
        } catch (const std::exception&) {
          throw hamix::Error(hamix::ErrorCode::kInvalidArgument, "bad weight '" + item + "'");
        }
      }
      options.ensemble_weights = std::move(w);
    }
    options.validate();
    return options;
  }
};

std::vector<hamix::StemSet> load_stem_dirs(const std::vector<std::string>& dirs,
                                           const hamix::AudioBuffer& mix) {
  std::vector<hamix::StemSet> sets;
  for (const auto& d : dirs) {
    hamix::StemProviderSpec spec;
    spec.path = d;
    sets.push_back(hamix::provide_stems(spec, mix));
  }
  return sets;
}

void print_report(const hamix::EnhanceReport& r) {
  std::cerr << "input loudness: "
            << (r.input_loudness_lufs ? std::to_string(*r.input_loudness_lufs) + " LUFS" : "undefined")
            << "\nclipped samples:";
  for (auto c : r.clip_counts) std::cerr << ' ' << c;
  std::cerr << "\ncompressor: " << (r.compressor_applied ? "applied" : "not applied")
            << "\noutput peak: " << r.output_peak << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hearing-aid music remixing: stem ensembling, NAL-R amplification and evaluation"};
  app.require_subcommand(1);

  // enhance
  auto* enhance_cmd = app.add_subcommand("enhance", "Enhance one song from separated stems");
  std::string mix_path, gains_path, listener_path, out_path, report_path;
  std::vector<std::string> stem_dirs;
  OptionFlags flags;
  enhance_cmd->add_option("--mix", mix_path, "Input mixture WAV")->required();
  enhance_cmd->add_option("--stems", stem_dirs, "Stem directory (repeat per ensemble member)")->required();
  enhance_cmd->add_option("--gains", gains_path, "Gains JSON")->required();
  enhance_cmd->add_option("--listener", listener_path, "Listener JSON")->required();
  enhance_cmd->add_option("--out", out_path, "Output WAV")->required();
  enhance_cmd->add_option("--report", report_path, "Optional report JSON");
  flags.attach(enhance_cmd);

  // evaluate
  auto* evaluate_cmd = app.add_subcommand("evaluate", "SDR of an estimate against a reference");
  std::string ref_path, est_path, ref_stems, est_stems, eval_report;
  evaluate_cmd->add_option("--reference", ref_path, "Reference WAV")->required();
  evaluate_cmd->add_option("--estimate", est_path, "Estimate WAV")->required();
  evaluate_cmd->add_option("--ref-stems", ref_stems, "Reference stem directory");
  evaluate_cmd->add_option("--est-stems", est_stems, "Estimated stem directory");
  evaluate_cmd->add_option("--report", eval_report, "Report JSON")->required();

  // reference
  auto* reference_cmd = app.add_subcommand("reference", "Build the ground-truth enhanced signal");
  std::string true_stems, ref_gains, ref_listener, ref_out;
  std::size_t ref_taps = hamix::kDefaultNalrTaps;
  std::string ref_format = "32f";
  reference_cmd->add_option("--stems", true_stems, "True stem directory")->required();
  reference_cmd->add_option("--gains", ref_gains, "Gains JSON")->required();
  reference_cmd->add_option("--listener", ref_listener, "Listener JSON")->required();
  reference_cmd->add_option("--out", ref_out, "Output WAV")->required();
  reference_cmd->add_option("--taps", ref_taps, "NAL-R FIR length")->capture_default_str();
  reference_cmd->add_option("--format", ref_format, "Output sample format")->capture_default_str();

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "Apply speaker-to-ear crosstalk");
  std::string sim_in, sim_kernel, sim_out, sim_format = "32f";
  simulate_cmd->add_option("--in", sim_in, "Stereo input WAV")->required();
  simulate_cmd->add_option("--kernel", sim_kernel, "4-channel kernel WAV or directory of ll/rl/lr/rr.wav")->required();
  simulate_cmd->add_option("--out", sim_out, "Output WAV")->required();
  simulate_cmd->add_option("--format", sim_format, "Output sample format")->capture_default_str();

  // segments
  auto* segments_cmd = app.add_subcommand("segments", "Find windows where one stem dominates");
  std::string seg_stems, seg_track, seg_report;
  double seg_seconds = hamix::kDefaultSegmentSeconds;
  double seg_threshold = hamix::kDefaultSalienceThreshold;
  segments_cmd->add_option("--stems", seg_stems, "Stem directory")->required();
  segments_cmd->add_option("--track", seg_track, "vocals, drums, bass or other")->required();
  segments_cmd->add_option("--seconds", seg_seconds, "Window length in seconds")->capture_default_str();
  segments_cmd->add_option("--threshold", seg_threshold, "Minimum energy ratio")->capture_default_str();
  segments_cmd->add_option("--report", seg_report, "Report JSON")->required();

  // batch
  auto* batch_cmd = app.add_subcommand("batch", "Run every job in a manifest");
  std::string manifest_path, batch_report;
  unsigned workers = 1;
  OptionFlags batch_flags;
  batch_cmd->add_option("--manifest", manifest_path, "Manifest JSON")->required();
  batch_cmd->add_option("--report", batch_report, "Report JSON")->required();
  batch_cmd->add_option("--workers", workers, "Concurrent jobs")->capture_default_str();
  batch_flags.attach(batch_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*enhance_cmd) {
      const hamix::EnhanceOptions options = flags.build();
      const hamix::AudioBuffer mix = hamix::read_wav(mix_path);
      const auto sets = load_stem_dirs(stem_dirs, mix);
      auto result = hamix::enhance(mix, sets, hamix::load_gains(gains_path),
                                   hamix::load_listener(listener_path), options);
      result.report.song_id = std::filesystem::path(mix_path).stem().string();
      result.report.output_path = out_path;
      hamix::write_wav(result.output, out_path, options.output_format);
      if (!report_path.empty()) {
        const std::vector<hamix::EnhanceReport> one = {result.report};
        hamix::write_json(hamix::reports_to_json(one), report_path);
      }
      print_report(result.report);
      return kExitOk;
    }

    if (*evaluate_cmd) {
      const hamix::AudioBuffer ref = hamix::read_wav(ref_path);
      const hamix::AudioBuffer est = hamix::read_wav(est_path);
      if (ref_stems.empty() != est_stems.empty()) {
        throw hamix::Error(hamix::ErrorCode::kInvalidArgument,
                           "--ref-stems and --est-stems must be given together");
      }
      hamix::SongScores scores;
      if (!ref_stems.empty()) {
        const hamix::StemSet rs = hamix::load_stem_directory(ref_stems);
        const hamix::StemSet es = hamix::load_stem_directory(est_stems);
        scores = hamix::evaluate_song(ref, est, &rs, &es);
      } else {
        scores = hamix::evaluate_song(ref, est);
      }
      hamix::write_json(hamix::to_json(scores), eval_report);
      std::cout << "SDR " << scores.overall_sdr << " dB\n";
      return kExitOk;
    }

    if (*reference_cmd) {
      hamix::EnhanceOptions options;
      options.n_taps = ref_taps;
      options.output_format.sample_format = hamix::parse_sample_format(ref_format);
      const hamix::AudioBuffer reference =
          hamix::build_reference(hamix::load_stem_directory(true_stems), hamix::load_gains(ref_gains),
                                 hamix::load_listener(ref_listener), options);
      hamix::write_wav(reference, ref_out, options.output_format);
      return kExitOk;
    }

    if (*simulate_cmd) {
      const hamix::AudioBuffer in = hamix::read_wav(sim_in);
      const hamix::AudioBuffer out = hamix::apply_crosstalk(in, hamix::load_kernel(sim_kernel));
      hamix::write_wav(out, sim_out, {hamix::parse_sample_format(sim_format)});
      return kExitOk;
    }

    if (*segments_cmd) {
      if (!(seg_seconds > 0.0)) {
        throw hamix::Error(hamix::ErrorCode::kInvalidArgument, "--seconds must be positive");
      }
      const hamix::StemSet stems = hamix::load_stem_directory(seg_stems);
      const hamix::Track track = hamix::parse_track(seg_track);
      const auto frames = static_cast<std::size_t>(std::llround(seg_seconds * stems.sample_rate()));
      const auto segments = hamix::salient_segments(stems, track, frames, seg_threshold);
      nlohmann::json doc;
      doc["schema_version"] = hamix::kReportSchemaVersion;
      doc["track"] = seg_track;
      doc["segment_frames"] = frames;
      doc["sample_rate"] = stems.sample_rate();
      doc["threshold"] = seg_threshold;
      doc["segments"] = hamix::to_json(segments);
      hamix::write_json(doc, seg_report);
      std::cout << segments.size() << " salient segment(s)\n";
      return kExitOk;
    }

    if (*batch_cmd) {
      const hamix::EnhanceOptions options = batch_flags.build();
      const hamix::BatchManifest manifest = hamix::load_manifest(manifest_path);
      const auto reports = hamix::run_batch(manifest, options, workers);
      hamix::write_json(hamix::reports_to_json(reports), batch_report);
      std::size_t failed = 0;
      for (const auto& r : reports) {
        if (r.error) {
          ++failed;
          std::cerr << r.song_id << ": " << *r.error << '\n';
        }
      }
      std::cout << reports.size() - failed << " of " << reports.size() << " job(s) succeeded\n";
      return failed == 0 ? kExitOk : kExitPartialFailure;
    }
  } catch (const hamix::Error& e) {
    std::cerr << "error [" << hamix::to_string(e.code()) << "]: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
