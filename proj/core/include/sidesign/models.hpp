#pragma once

// Model structures mapping an input history to the one-step predictor and its
// parameter gradient psi_t(theta0). None of these take a noise input; the
// predictor gradient does not depend on the noise realization.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "sidesign/signal.hpp"

namespace sidesign {

/// Rows are psi_t^T for the retained time steps (after burn-in).
struct GradientTrace {
  Eigen::MatrixXd psi;

  std::size_t steps() const noexcept { return static_cast<std::size_t>(psi.rows()); }
  std::size_t parameters() const noexcept { return static_cast<std::size_t>(psi.cols()); }
};

/// Memory length in samples, or nullopt for models with infinite memory.
using ModelMemory = std::optional<std::size_t>;

/// Extension point for user-supplied model structures. Implementations must be
/// pure functions of the signal and parameters.
class ExternalModel {
 public:
  virtual ~ExternalModel() = default;

  virtual std::size_t parameter_count() const = 0;
  virtual ModelMemory memory() const = 0;
  /// Predictor gradient for every sample of `signal` (no burn-in removed).
  virtual Eigen::MatrixXd gradient(const Signal& signal, const Eigen::VectorXd& theta) const = 0;
  /// One-step predictions for every sample of `signal`.
  virtual Eigen::VectorXd predict(const Signal& signal, const Eigen::VectorXd& theta) const = 0;
};

enum class ModelKind { kNonlinearFir, kOutputError22, kExternal };

const char* to_string(ModelKind kind) noexcept;
/// Parses "nonlinear-fir", "output-error-2-2" or "external"; throws kConfig.
ModelKind parse_model_kind(const std::string& text);

struct ModelSpec {
  ModelKind kind = ModelKind::kNonlinearFir;
  Eigen::VectorXd theta0;
  double noise_variance = 1.0;
  std::size_t burn_in = 0;
  std::shared_ptr<const ExternalModel> external;

  static constexpr std::size_t kDefaultOutputErrorBurnIn = 1000;

  /// y = (t1 + t2 q^-1) u + (t3 + t4 q^-1) u^2.
  static ModelSpec nonlinear_fir(Eigen::VectorXd theta0, double noise_variance);
  /// y = (t1 q^-1 + t2 q^-2) / (1 + t3 q^-1 + t4 q^-2) u.
  static ModelSpec output_error(Eigen::VectorXd theta0, double noise_variance,
                                std::size_t burn_in = kDefaultOutputErrorBurnIn);
  static ModelSpec from_external(std::shared_ptr<const ExternalModel> model, Eigen::VectorXd theta0,
                                 double noise_variance, std::size_t burn_in = 0);

  std::size_t parameter_count() const noexcept { return static_cast<std::size_t>(theta0.size()); }

  /// Throws kConfig for shape problems, kModel for an unstable denominator.
  void validate() const;
};

ModelMemory model_memory(const ModelSpec& model);

/// psi_t(theta0) for t = burn_in+1 .. N. Zero initial filter states; missing
/// past inputs come from the signal prefill (default 0). Throws kNumerical
/// naming the first time index with a non-finite value.
GradientTrace gradient_trace(const ModelSpec& model, const Signal& signal);

/// One-step predictions yhat_t(theta) for t = 1..N, same initial conditions as
/// gradient_trace. Used by finite-difference checks.
Eigen::VectorXd predict(const ModelSpec& model, const Signal& signal, const Eigen::VectorXd& theta);

/// True when 1 + a1 z^-1 + a2 z^-2 has both roots strictly inside the unit circle.
bool is_stable_denominator(double a1, double a2) noexcept;

}  // namespace sidesign
