#include "sidesign/design.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <optional>

#include "sidesign/error.hpp"

namespace sidesign {

const char* to_string(Criterion criterion) noexcept {
  return criterion == Criterion::kD ? "D" : "A";
}

Criterion parse_criterion(const std::string& text) {
  std::string upper = text;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
  if (upper == "D") return Criterion::kD;
  if (upper == "A") return Criterion::kA;
  throw Error(ErrorCode::kConfig, "unknown criterion '" + text + "' (expected D or A)");
}

namespace {

// Eigendecomposition-based inverse; nullopt when singular.
struct Spectral {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  static std::optional<Spectral> of(const Eigen::MatrixXd& m) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    if (eig.info() != Eigen::Success) return std::nullopt;
    const double top = eig.eigenvalues().maxCoeff();
    if (!(top > 0.0) || eig.eigenvalues().minCoeff() <= kSingularRatio * top) return std::nullopt;
    return Spectral{eig.eigenvalues(), eig.eigenvectors()};
  }

  Eigen::MatrixXd inverse() const {
    return vectors * values.cwiseInverse().asDiagonal() * vectors.transpose();
  }
  double log_det() const { return values.array().log().sum(); }
  double trace_inverse() const { return values.cwiseInverse().sum(); }
};

Eigen::MatrixXd mix(std::span<const InfoMatrix> basis, const Eigen::VectorXd& alpha) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(basis.front().dim(), basis.front().dim());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double a = alpha[static_cast<Eigen::Index>(i)];
    if (a != 0.0) m += a * basis[i].matrix();
  }
  return m;
}

double objective(const Spectral& s, Criterion criterion) {
  return criterion == Criterion::kD ? s.log_det() : -s.trace_inverse();
}

// Kernel of the gradient: grad_j = <K, I_j> with K = M^-1 (D) or M^-2 (A).
Eigen::MatrixXd gradient_kernel(const Spectral& s, Criterion criterion) {
  const Eigen::MatrixXd inv = s.inverse();
  return criterion == Criterion::kD ? inv : Eigen::MatrixXd(inv * inv);
}

double partial(const Eigen::MatrixXd& kernel, const InfoMatrix& basis_matrix) {
  return kernel.cwiseProduct(basis_matrix.matrix()).sum();
}

void check_basis(std::span<const InfoMatrix> basis) {
  if (basis.empty()) throw Error(ErrorCode::kConfig, "at least one basis matrix is required");
  for (const auto& b : basis) {
    if (b.dim() != basis.front().dim()) {
      throw Error(ErrorCode::kConfig, "basis matrices differ in size");
    }
  }
}

Eigen::VectorXd full_gradient(std::span<const InfoMatrix> basis, const Eigen::VectorXd& alpha,
                              Criterion criterion) {
  const auto s = Spectral::of(mix(basis, alpha));
  if (!s) throw Error(ErrorCode::kSingularDesign, "combined information matrix is singular");
  const Eigen::MatrixXd kernel = gradient_kernel(*s, criterion);
  Eigen::VectorXd g(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    g[static_cast<Eigen::Index>(i)] = partial(kernel, basis[i]);
  }
  return g;
}

double gap_of(const Eigen::VectorXd& g, const Eigen::VectorXd& alpha) {
  return std::max(g.maxCoeff() - g.dot(alpha), 0.0);
}

}  // namespace

bool is_singular(const Eigen::MatrixXd& matrix) { return !Spectral::of(matrix).has_value(); }

double criterion_value(const Eigen::MatrixXd& matrix, Criterion criterion) {
  const auto s = Spectral::of(matrix);
  if (!s) {
    if (criterion == Criterion::kD) return -std::numeric_limits<double>::infinity();
    throw Error(ErrorCode::kSingularDesign, "information matrix is singular");
  }
  return objective(*s, criterion);
}

double criterion_value(const InfoMatrix& matrix, Criterion criterion) {
  return criterion_value(matrix.matrix(), criterion);
}

double reported_value(double objective, Criterion criterion) {
  return criterion == Criterion::kD ? std::exp(objective) : -objective;
}

Eigen::VectorXd criterion_gradient(std::span<const InfoMatrix> basis, const DesignWeights& weights,
                                   Criterion criterion) {
  check_basis(basis);
  if (weights.size() != static_cast<Eigen::Index>(basis.size())) {
    throw Error(ErrorCode::kConfig, "weight count does not match the number of basis matrices");
  }
  return full_gradient(basis, weights.alpha(), criterion);
}

double frank_wolfe_gap(std::span<const InfoMatrix> basis, const DesignWeights& weights,
                       Criterion criterion) {
  return gap_of(criterion_gradient(basis, weights, criterion), weights.alpha());
}

namespace {

Eigen::Index lowest_argmax(const Eigen::VectorXd& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

Eigen::VectorXd starting_point(std::span<const InfoMatrix> basis, Criterion criterion) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  if (Spectral::of(mix(basis, uniform))) return uniform;

  std::optional<Eigen::Index> best;
  double best_value = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto s = Spectral::of(basis[static_cast<std::size_t>(j)].matrix());
    if (!s) continue;
    const double v = objective(*s, criterion);
    if (!best || v > best_value) {
      best = j;
      best_value = v;
    }
  }
  if (!best) {
    throw Error(ErrorCode::kSingularDesign,
                "singular design: no simplex point tried gives a nonsingular information matrix");
  }
  Eigen::VectorXd alpha = 0.01 * uniform;
  alpha[*best] += 0.99;
  return alpha;
}

}  // namespace

DesignResult optimize(std::span<const InfoMatrix> basis, Criterion criterion,
                      const OptimizerOptions& options) {
  check_basis(basis);
  if (!(options.tolerance > 0.0)) throw Error(ErrorCode::kConfig, "tolerance must be positive");
  if (options.max_iterations == 0) {
    throw Error(ErrorCode::kConfig, "max_iterations must be positive");
  }

  Eigen::VectorXd alpha = starting_point(basis, criterion);
  std::size_t iterations = 0;
  bool converged = false;

  // phi'(s) along alpha + s (e_to - e_from); nullopt where M is singular.
  auto slope = [&](const Eigen::VectorXd& a, Eigen::Index to, Eigen::Index from,
                   double s) -> std::optional<double> {
    Eigen::VectorXd trial = a;
    trial[to] += s;
    trial[from] -= s;
    const auto spec = Spectral::of(mix(basis, trial));
    if (!spec) return std::nullopt;
    const Eigen::MatrixXd kernel = gradient_kernel(*spec, criterion);
    return partial(kernel, basis[static_cast<std::size_t>(to)]) -
           partial(kernel, basis[static_cast<std::size_t>(from)]);
  };

  for (; iterations < options.max_iterations; ++iterations) {
    const Eigen::VectorXd g = full_gradient(basis, alpha, criterion);
    if (gap_of(g, alpha) <= options.tolerance) {
      converged = true;
      break;
    }
    const Eigen::Index toward = lowest_argmax(g);
    Eigen::Index away = -1;
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
      if (alpha[i] > 0.0 && (away < 0 || g[i] < g[away])) away = i;
    }
    if (away < 0 || away == toward) break;

    // Largest feasible step by halving, then bisection on the derivative sign.
    double hi = alpha[away];
    std::optional<double> hi_slope = slope(alpha, toward, away, hi);
    while (!hi_slope && hi > 0.0) {
      hi *= 0.5;
      hi_slope = slope(alpha, toward, away, hi);
    }
    if (!hi_slope || hi <= 0.0) break;
    double step = hi;
    if (*hi_slope < 0.0) {
      double lo = 0.0;
      for (int k = 0; k < 100 && hi - lo > 1e-17 * std::max(1.0, hi); ++k) {
        const double mid = 0.5 * (lo + hi);
        const auto d = slope(alpha, toward, away, mid);
        if (d && *d > 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      step = lo;
    }
    if (step >= alpha[away]) {
      alpha[toward] += alpha[away];
      alpha[away] = 0.0;
    } else {
      alpha[toward] += step;
      alpha[away] -= step;
    }
  }

  alpha = alpha.cwiseMax(0.0);
  alpha /= alpha.sum();
  DesignWeights weights(alpha);
  const Eigen::VectorXd g = full_gradient(basis, weights.alpha(), criterion);
  const double gap = gap_of(g, weights.alpha());
  const double value = criterion_value(mix(basis, weights.alpha()), criterion);
  converged = converged || gap <= options.tolerance;
  return DesignResult{std::move(weights), criterion, value, gap, iterations, converged};
}

}  // namespace sidesign
