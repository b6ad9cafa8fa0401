#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace hamix {

/// Kernels up to this length are convolved directly; longer ones go through
/// overlap-add block FFT convolution.
inline constexpr std::size_t kDirectConvolutionMaxTaps = 32;

/// Window [offset, offset + length) of the full linear convolution x * h,
/// i.e. y[k] = sum_j h[j] x[k + offset - j]. Out-of-range x is zero.
std::vector<double> convolve(std::span<const double> x,
                             std::span<const double> h, std::size_t offset,
                             std::size_t length);

std::vector<double> convolve_direct(std::span<const double> x,
                                    std::span<const double> h,
                                    std::size_t offset, std::size_t length);

std::vector<double> convolve_overlap_add(std::span<const double> x,
                                         std::span<const double> h,
                                         std::size_t offset,
                                         std::size_t length);

/// Real-input FFT of fixed size backed by FFTW. Plans are created under a
/// global lock (FFTW's planner is not thread-safe); execution is not shared
/// between threads because each instance owns its work arrays.
class RealFft {
 public:
  explicit RealFft(std::size_t size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return size_; }
  std::size_t bins() const noexcept { return size_ / 2 + 1; }

  /// in.size() == size(); out.size() == bins().
  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  /// Unnormalized inverse: the result is size() times the true inverse.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  struct Impl;
  std::size_t size_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hamix
