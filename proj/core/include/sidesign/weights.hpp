#pragma once

#include <Eigen/Dense>

namespace sidesign {

/// Point of the probability simplex: one weight per basis cycle.
class DesignWeights {
 public:
  static constexpr double kSumTolerance = 1e-12;

  /// Throws kConfig when an entry is negative or non-finite, or the entries do
  /// not sum to 1 within kSumTolerance.
  explicit DesignWeights(Eigen::VectorXd alpha);

  static DesignWeights uniform(Eigen::Index n);
  static DesignWeights vertex(Eigen::Index n, Eigen::Index j);

  const Eigen::VectorXd& alpha() const noexcept { return alpha_; }
  Eigen::Index size() const noexcept { return alpha_.size(); }
  double operator[](Eigen::Index i) const { return alpha_[i]; }

 private:
  Eigen::VectorXd alpha_;
};

}  // namespace sidesign
