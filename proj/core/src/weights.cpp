#include "sidesign/weights.hpp"

#include <cmath>
#include <sstream>

#include "sidesign/error.hpp"

namespace sidesign {

DesignWeights::DesignWeights(Eigen::VectorXd alpha) : alpha_(std::move(alpha)) {
  if (alpha_.size() == 0) throw Error(ErrorCode::kConfig, "weights must not be empty");
  for (Eigen::Index i = 0; i < alpha_.size(); ++i) {
    if (!std::isfinite(alpha_[i]) || alpha_[i] < 0.0) {
      std::ostringstream msg;
      msg << "weight " << i << " = " << alpha_[i] << " is not a nonnegative number";
      throw Error(ErrorCode::kConfig, msg.str());
    }
  }
  const double total = alpha_.sum();
  if (std::abs(total - 1.0) > kSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "weights sum to " << total << " instead of 1";
    throw Error(ErrorCode::kConfig, msg.str());
  }
}

DesignWeights DesignWeights::uniform(Eigen::Index n) {
  return DesignWeights(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

DesignWeights DesignWeights::vertex(Eigen::Index n, Eigen::Index j) {
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  alpha[j] = 1.0;
  return DesignWeights(std::move(alpha));
}

}  // namespace sidesign
