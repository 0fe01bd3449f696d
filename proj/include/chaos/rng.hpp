#pragma once

#include <array>
#include <cstdint>

namespace chaos {

/// Identifies a family of reproducible random streams.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;
};

/// Philox4x32-10 block cipher (Salmon et al.). Stateless: the output is a
/// pure function of (counter, key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Inverse standard normal CDF (Wichura AS241, about 1e-16 relative).
double normal_quantile(double p) noexcept;

/// Standard normal draws for one Monte Carlo path. Path `path` of a given
/// RngSpec always yields the same sequence, whichever thread runs it.
class NormalStream {
 public:
  NormalStream(const RngSpec& spec, std::uint32_t path) noexcept;
  double next() noexcept {
    if (pos_ == kBuffered) refill();
    return buffer_[pos_++];
  }

 private:
  // Each Philox block yields two normals; four blocks are converted per refill.
  static constexpr int kBlocksPerRefill = 4;
  static constexpr int kBuffered = 2 * kBlocksPerRefill;

  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::uint32_t path_;
  std::uint32_t stream_;
  std::uint64_t block_ = 0;
  std::array<double, kBuffered> buffer_{};
  int pos_ = kBuffered;
};

}  // namespace chaos
