#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hamix/convolution.hpp"
#include "oracles.hpp"

namespace hamix {
namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

// Both convolution routes agree with the brute-force double sum on every
// window of the full convolution.
TEST(ConvolutionTest, MatchesBruteForceOnRandomShapes) {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<std::size_t> len(1, 3000);
  std::uniform_int_distribution<std::size_t> taps(1, 700);
  for (int trial = 0; trial < 40; ++trial) {
    const auto x = random_vector(rng, len(rng));
    const auto h = random_vector(rng, taps(rng));
    const auto full = testing::brute_convolution(x, h);
    std::uniform_int_distribution<std::size_t> off(0, full.size() - 1);
    const std::size_t offset = off(rng);
    const std::size_t length = std::uniform_int_distribution<std::size_t>(0, full.size() - offset + 50)(rng);

    const auto direct = convolve_direct(x, h, offset, length);
    const auto ola = convolve_overlap_add(x, h, offset, length);
    ASSERT_EQ(direct.size(), length);
    ASSERT_EQ(ola.size(), length);
    double scale = 1.0;
    for (double v : full) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < length; ++k) {
      const double expected = offset + k < full.size() ? full[offset + k] : 0.0;
      EXPECT_NEAR(direct[k], expected, 1e-12 * scale);
      EXPECT_NEAR(ola[k], expected, 1e-9 * scale) << "trial " << trial << " k " << k;
    }
  }
}

TEST(ConvolutionTest, DispatchesOnKernelLength) {
  std::mt19937_64 rng(5);
  const auto x = random_vector(rng, 1000);
  const auto short_h = random_vector(rng, kDirectConvolutionMaxTaps);
  EXPECT_EQ(convolve(x, short_h, 0, 1000), convolve_direct(x, short_h, 0, 1000));
  const auto long_h = random_vector(rng, kDirectConvolutionMaxTaps + 1);
  EXPECT_EQ(convolve(x, long_h, 0, 1000), convolve_overlap_add(x, long_h, 0, 1000));
}

TEST(RealFftTest, InverseOfForwardScalesBySize) {
  RealFft fft(64);
  std::vector<double> x(64);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i % 7) - 3.0;
  std::vector<std::complex<double>> spec(fft.bins());
  std::vector<double> back(64);
  fft.forward(x, spec);
  fft.inverse(spec, back);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(back[i] / 64.0, x[i], 1e-12);
}

}  // namespace
}  // namespace hamix
