#pragma once

#include <vector>

namespace sidesign {

/// Finite input realization u_1..u_N. `prefill` holds virtual past inputs
/// (oldest first, so prefill.back() is u_0); missing history reads as 0.
struct Signal {
  std::vector<double> samples;
  std::vector<double> prefill;

  std::size_t size() const noexcept { return samples.size(); }

  /// u_t for t in [1-prefill.size(), N]; earlier indices read as 0.
  double at(long t) const noexcept {
    if (t >= 1) return samples[static_cast<std::size_t>(t - 1)];
    const long back = -t;  // 0 -> prefill.back()
    if (back < static_cast<long>(prefill.size())) {
      return prefill[prefill.size() - 1 - static_cast<std::size_t>(back)];
    }
    return 0.0;
  }

  friend bool operator==(const Signal&, const Signal&) = default;
};

}  // namespace sidesign
