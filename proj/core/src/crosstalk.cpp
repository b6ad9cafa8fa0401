#include "hamix/crosstalk.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "hamix/convolution.hpp"
#include "hamix/error.hpp"
#include "hamix/wav.hpp"

namespace hamix {

void CrosstalkKernel::validate() const {
  const std::size_t n = left_to_left.size();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "crosstalk kernel is empty");
  for (const auto* path : {&right_to_left, &left_to_right, &right_to_right}) {
    if (path->size() != n) {
      throw Error(ErrorCode::kInvalidArgument, "crosstalk responses must have equal length");
    }
  }
  for (const auto* path : {&left_to_left, &right_to_left, &left_to_right, &right_to_right}) {
    for (double x : *path) {
      if (!std::isfinite(x)) throw Error(ErrorCode::kInvalidArgument, "non-finite kernel tap");
    }
  }
  if (sample_rate <= 0) throw Error(ErrorCode::kInvalidArgument, "kernel sample rate must be positive");
}

CrosstalkKernel CrosstalkKernel::identity(int sample_rate) {
  return {{1.0}, {0.0}, {0.0}, {1.0}, sample_rate};
}

AudioBuffer apply_crosstalk(const AudioBuffer& buffer, const CrosstalkKernel& kernel) {
  kernel.validate();
  if (buffer.num_channels() != 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "crosstalk needs stereo input, got " + std::to_string(buffer.num_channels()) +
                    " channel(s)");
  }
  if (buffer.sample_rate() != kernel.sample_rate) {
    throw Error(ErrorCode::kMisaligned,
                "kernel rate " + std::to_string(kernel.sample_rate) + " Hz does not match audio rate " +
                    std::to_string(buffer.sample_rate()) + " Hz");
  }
  const std::size_t n = buffer.frames();
  const auto left = buffer.channel(0);
  const auto right = buffer.channel(1);

  std::vector<double> out_left = convolve(left, kernel.left_to_left, 0, n);
  std::vector<double> out_right = convolve(left, kernel.left_to_right, 0, n);
  const std::vector<double> from_right_l = convolve(right, kernel.right_to_left, 0, n);
  const std::vector<double> from_right_r = convolve(right, kernel.right_to_right, 0, n);
  for (std::size_t i = 0; i < n; ++i) {
    out_left[i] += from_right_l[i];
    out_right[i] += from_right_r[i];
  }
  return AudioBuffer(buffer.sample_rate(), {std::move(out_left), std::move(out_right)});
}

CrosstalkKernel make_kernel(std::vector<double> ll, std::vector<double> rl,
                            std::vector<double> lr, std::vector<double> rr, int sample_rate) {
  const std::size_t n = std::max({ll.size(), rl.size(), lr.size(), rr.size()});
  for (auto* v : {&ll, &rl, &lr, &rr}) v->resize(n, 0.0);
  CrosstalkKernel k{std::move(ll), std::move(rl), std::move(lr), std::move(rr), sample_rate};
  k.validate();
  return k;
}

CrosstalkKernel load_kernel(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) {
    std::array<std::vector<double>, 4> paths;
    int rate = 0;
    const std::array<const char*, 4> names = {"ll.wav", "rl.wav", "lr.wav", "rr.wav"};
    for (std::size_t i = 0; i < names.size(); ++i) {
      const AudioBuffer b = read_wav(path / names[i]);
      if (b.num_channels() != 1) {
        throw Error(ErrorCode::kInvalidArgument,
                    "kernel file '" + (path / names[i]).string() + "' must be mono");
      }
      if (rate != 0 && b.sample_rate() != rate) {
        throw Error(ErrorCode::kMisaligned, "kernel files disagree on sample rate");
      }
      rate = b.sample_rate();
      paths[i].assign(b.channel(0).begin(), b.channel(0).end());
    }
    return make_kernel(std::move(paths[0]), std::move(paths[1]), std::move(paths[2]),
                       std::move(paths[3]), rate);
  }
  const AudioBuffer b = read_wav(path);
  if (b.num_channels() != 4) {
    throw Error(ErrorCode::kInvalidArgument,
                "kernel WAV must have 4 channels (LL, RL, LR, RR), got " +
                    std::to_string(b.num_channels()));
  }
  auto take = [&](std::size_t c) { return std::vector<double>(b.channel(c).begin(), b.channel(c).end()); };
  return make_kernel(take(0), take(1), take(2), take(3), b.sample_rate());
}

}  // namespace hamix
