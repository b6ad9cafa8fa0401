#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hamix/error.hpp"
#include "hamix/metrics.hpp"
#include "signals.hpp"

namespace hamix {
namespace {

constexpr int kRate = 16000;

TEST(SdrTest, IdenticalHitsCap) {
  const AudioBuffer x = testing::noise(kRate, 2, 1000, 1);
  EXPECT_EQ(sdr(x, x), kSdrCapDb);
}

TEST(SdrTest, HalfScale) {
  const AudioBuffer x = testing::noise(kRate, 2, 1000, 2);
  EXPECT_NEAR(sdr(x, scaled(x, 0.5)), 6.02, 0.01);
}

TEST(SdrTest, ScaleFamilyClosedForm) {
  const AudioBuffer x = testing::noise(kRate, 2, 1000, 3);
  for (double g : {-1.0, 0.0, 0.3, 0.9, 1.1, 2.5}) {
    EXPECT_NEAR(sdr(x, scaled(x, g)), -10.0 * std::log10((1 - g) * (1 - g)), 1e-9);
  }
}

// Noise at 1 % of reference power: 20 dB.
TEST(SdrTest, MonteCarloTwentyDb) {
  const AudioBuffer x = testing::noise(kRate, 2, 200000, 4, 0.3);
  const AudioBuffer n = testing::noise(kRate, 2, 200000, 5, 0.03);
  EXPECT_NEAR(sdr(x, add(x, n)), 20.0, 0.2);
}

TEST(SdrTest, MonotoneInPerturbation) {
  const AudioBuffer x = testing::noise(kRate, 2, 1000, 6);
  double prev = kSdrCapDb + 1;
  for (double eps : {0.001, 0.01, 0.05, 0.2, 0.5, 1.0}) {
    const double s = sdr(x, scaled(x, 1.0 + eps));
    EXPECT_LT(s, prev);
    EXPECT_NEAR(s, sdr(x, scaled(x, 1.0 - eps)), 1e-9);
    prev = s;
  }
}

TEST(SdrTest, ChannelPermutationInvariant) {
  const AudioBuffer x = testing::noise(kRate, 2, 1000, 7);
  const AudioBuffer y = add(x, testing::noise(kRate, 2, 1000, 8, 0.05));
  auto swap = [](const AudioBuffer& b) {
    return AudioBuffer(b.sample_rate(), {std::vector<double>(b.channel(1).begin(), b.channel(1).end()),
                                         std::vector<double>(b.channel(0).begin(), b.channel(0).end())});
  };
  EXPECT_NEAR(sdr(x, y), sdr(swap(x), swap(y)), 1e-12);
}

TEST(SdrTest, CapsAndErrors) {
  const AudioBuffer x = testing::noise(kRate, 1, 100, 9);
  EXPECT_EQ(sdr(x, add(x, scaled(x, 1e-7))), kSdrCapDb);
  EXPECT_EQ(sdr(x, scaled(x, 1e6)), -kSdrCapDb);
  EXPECT_THROW(sdr(AudioBuffer::zeros(kRate, 1, 100), x), Error);
  EXPECT_THROW(sdr(x, AudioBuffer::zeros(kRate, 1, 99)), Error);
}

TEST(EvaluateSongTest, Variants) {
  const StemSet truth = testing::make_song(kRate, 1.0, 10);
  const AudioBuffer mix = truth.sum();
  const SongScores same = evaluate_song(mix, mix, &truth, &truth);
  EXPECT_EQ(same.overall_sdr, kSdrCapDb);
  ASSERT_TRUE(same.per_track_sdr.has_value());
  for (const auto& [name, v] : *same.per_track_sdr) EXPECT_EQ(v, kSdrCapDb) << name;

  EXPECT_FALSE(evaluate_song(mix, mix).per_track_sdr.has_value());

  const StemSet noisy = add_stem_noise(truth, 8.0, 3);
  const SongScores s = evaluate_song(mix, noisy.sum(), &truth, &noisy);
  EXPECT_EQ(s.overall_sdr, sdr(mix, noisy.sum()));
  for (Track t : kAllTracks) {
    EXPECT_EQ(s.per_track_sdr->at(std::string(track_name(t))), sdr(truth[t], noisy[t]));
  }
}

}  // namespace
}  // namespace hamix
