#pragma once

// Concave design criteria of the combined information matrix and their
// maximization over the probability simplex of cycle weights.

#include <cstddef>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "sidesign/fisher.hpp"
#include "sidesign/weights.hpp"

namespace sidesign {

/// D maximizes log det M (reported as det M); A maximizes -tr(M^-1).
enum class Criterion { kD, kA };

const char* to_string(Criterion criterion) noexcept;
/// Accepts "D" or "A" (case-insensitive); throws kConfig otherwise.
Criterion parse_criterion(const std::string& text);

/// A matrix whose smallest eigenvalue is at most this fraction of its largest
/// one is treated as singular.
inline constexpr double kSingularRatio = 1e-12;

bool is_singular(const Eigen::MatrixXd& matrix);

/// D: log det M, or -infinity when M is singular. A: -tr(M^-1); throws
/// kSingularDesign when M is singular.
double criterion_value(const Eigen::MatrixXd& matrix, Criterion criterion);
double criterion_value(const InfoMatrix& matrix, Criterion criterion);

/// Value in the form used for reporting: det M for D, tr(M^-1) for A.
double reported_value(double objective, Criterion criterion);

/// Partial derivatives of the objective with respect to each weight:
/// D: tr(M^-1 I_j), A: tr(M^-1 I_j M^-1). Throws kSingularDesign.
Eigen::VectorXd criterion_gradient(std::span<const InfoMatrix> basis, const DesignWeights& weights,
                                   Criterion criterion);

/// Frank-Wolfe duality gap max_j <grad, e_j - alpha>; bounds the suboptimality.
double frank_wolfe_gap(std::span<const InfoMatrix> basis, const DesignWeights& weights,
                       Criterion criterion);

struct OptimizerOptions {
  double tolerance = 1e-8;
  std::size_t max_iterations = 100000;
};

struct DesignResult {
  DesignWeights weights;
  Criterion criterion;
  double objective;  // log det M or -tr(M^-1) at `weights`
  double gap;        // Frank-Wolfe gap at `weights`
  std::size_t iterations;
  bool converged;

  double reported() const { return reported_value(objective, criterion); }
};

/// Pairwise Frank-Wolfe from the uniform weights with an exact line search on
/// the directional derivative. Throws kSingularDesign when neither the
/// uniform point nor any vertex gives a nonsingular matrix. When the
/// iteration budget runs out the last iterate is returned with
/// converged = false.
DesignResult optimize(std::span<const InfoMatrix> basis, Criterion criterion,
                      const OptimizerOptions& options = {});

}  // namespace sidesign
