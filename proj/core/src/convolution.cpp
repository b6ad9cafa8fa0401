#include "hamix/convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <mutex>

#include "hamix/error.hpp"

namespace hamix {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct RealFft::Impl {
  double* real = nullptr;
  fftw_complex* spectrum = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

RealFft::RealFft(std::size_t size) : size_(size), impl_(std::make_unique<Impl>()) {
  if (size == 0) throw Error(ErrorCode::kInvalidArgument, "FFT size must be positive");
  std::lock_guard lock(planner_mutex());
  impl_->real = fftw_alloc_real(size);
  impl_->spectrum = fftw_alloc_complex(size / 2 + 1);
  const int n = static_cast<int>(size);
  impl_->forward = fftw_plan_dft_r2c_1d(n, impl_->real, impl_->spectrum, FFTW_ESTIMATE);
  impl_->inverse = fftw_plan_dft_c2r_1d(n, impl_->spectrum, impl_->real, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(impl_->forward);
  fftw_destroy_plan(impl_->inverse);
  fftw_free(impl_->real);
  fftw_free(impl_->spectrum);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  std::copy(in.begin(), in.end(), impl_->real);
  fftw_execute(impl_->forward);
  std::memcpy(static_cast<void*>(out.data()), impl_->spectrum, bins() * sizeof(fftw_complex));
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  // c2r destroys its input, so always work on the owned copy.
  std::memcpy(impl_->spectrum, in.data(), bins() * sizeof(fftw_complex));
  fftw_execute(impl_->inverse);
  std::copy(impl_->real, impl_->real + size_, out.begin());
}

std::vector<double> convolve_direct(std::span<const double> x,
                                    std::span<const double> h,
                                    std::size_t offset, std::size_t length) {
  std::vector<double> y(length, 0.0);
  const std::size_t nx = x.size();
  // Tap-outer order keeps the inner loop free of a reduction so it vectorizes.
  for (std::size_t j = 0; j < h.size(); ++j) {
    // Output n = k + offset reads x[n - j]; keep 0 <= n - j < nx.
    const std::size_t n_lo = std::max(j, offset);
    const std::size_t n_hi = std::min(j + nx, offset + length);
    if (n_lo >= n_hi) continue;
    const double hj = h[j];
    double* out = y.data() + (n_lo - offset);
    const double* in = x.data() + (n_lo - j);
    for (std::size_t i = 0, count = n_hi - n_lo; i < count; ++i) out[i] += hj * in[i];
  }
  return y;
}

std::vector<double> convolve_overlap_add(std::span<const double> x,
                                         std::span<const double> h,
                                         std::size_t offset,
                                         std::size_t length) {
  std::vector<double> y(length, 0.0);
  if (h.empty() || x.empty() || length == 0) return y;

  const std::size_t taps = h.size();
  const std::size_t fft_size = std::bit_ceil(std::max<std::size_t>(2 * taps, 256));
  const std::size_t block = fft_size - taps + 1;

  RealFft fft(fft_size);
  std::vector<double> time(fft_size, 0.0);
  std::vector<std::complex<double>> kernel(fft.bins());
  std::vector<std::complex<double>> spec(fft.bins());

  std::copy(h.begin(), h.end(), time.begin());
  fft.forward(time, kernel);
  const double norm = 1.0 / static_cast<double>(fft_size);

  // Only input blocks that can reach [offset, offset + length) matter.
  const std::size_t end = offset + length;  // exclusive, in full-conv index
  const std::size_t first = offset >= taps ? (offset - taps + 1) / block : 0;
  for (std::size_t start = first * block; start < x.size() && start < end; start += block) {
    const std::size_t count = std::min(block, x.size() - start);
    std::fill(time.begin(), time.end(), 0.0);
    std::copy_n(x.begin() + static_cast<std::ptrdiff_t>(start), count, time.begin());
    fft.forward(time, spec);
    for (std::size_t b = 0; b < spec.size(); ++b) spec[b] *= kernel[b] * norm;
    fft.inverse(spec, time);

    const std::size_t produced = count + taps - 1;
    for (std::size_t i = 0; i < produced; ++i) {
      const std::size_t n = start + i;
      if (n < offset) continue;
      if (n >= end) break;
      y[n - offset] += time[i];
    }
  }
  return y;
}

std::vector<double> convolve(std::span<const double> x,
                             std::span<const double> h, std::size_t offset,
                             std::size_t length) {
  if (h.size() <= kDirectConvolutionMaxTaps) return convolve_direct(x, h, offset, length);
  return convolve_overlap_add(x, h, offset, length);
}

}  // namespace hamix
