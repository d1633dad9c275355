#include "sidesign/models.hpp"

#include <cmath>
#include <sstream>

#include "sidesign/error.hpp"

namespace sidesign {

const char* to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::kNonlinearFir: return "nonlinear-fir";
    case ModelKind::kOutputError22: return "output-error-2-2";
    case ModelKind::kExternal: return "external";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& text) {
  if (text == "nonlinear-fir") return ModelKind::kNonlinearFir;
  if (text == "output-error-2-2") return ModelKind::kOutputError22;
  if (text == "external") return ModelKind::kExternal;
  throw Error(ErrorCode::kConfig, "unknown model kind '" + text + "'");
}

ModelSpec ModelSpec::nonlinear_fir(Eigen::VectorXd theta0, double noise_variance) {
  ModelSpec spec{ModelKind::kNonlinearFir, std::move(theta0), noise_variance, 0, nullptr};
  spec.validate();
  return spec;
}

ModelSpec ModelSpec::output_error(Eigen::VectorXd theta0, double noise_variance,
                                  std::size_t burn_in) {
  ModelSpec spec{ModelKind::kOutputError22, std::move(theta0), noise_variance, burn_in, nullptr};
  spec.validate();
  return spec;
}

ModelSpec ModelSpec::from_external(std::shared_ptr<const ExternalModel> model,
                                   Eigen::VectorXd theta0, double noise_variance,
                                   std::size_t burn_in) {
  ModelSpec spec{ModelKind::kExternal, std::move(theta0), noise_variance, burn_in,
                 std::move(model)};
  spec.validate();
  return spec;
}

bool is_stable_denominator(double a1, double a2) noexcept {
  // Jury conditions for z^2 + a1 z + a2.
  return std::abs(a2) < 1.0 && std::abs(a1) < 1.0 + a2;
}

void ModelSpec::validate() const {
  if (!(noise_variance > 0.0) || !std::isfinite(noise_variance)) {
    throw Error(ErrorCode::kConfig, "noise variance must be positive and finite");
  }
  if (theta0.size() == 0) throw Error(ErrorCode::kConfig, "theta0 must not be empty");
  if (!theta0.allFinite()) throw Error(ErrorCode::kConfig, "theta0 must be finite");
  switch (kind) {
    case ModelKind::kNonlinearFir:
      if (theta0.size() != 4) throw Error(ErrorCode::kConfig, "nonlinear-fir expects 4 parameters");
      break;
    case ModelKind::kOutputError22:
      if (theta0.size() != 4) {
        throw Error(ErrorCode::kConfig, "output-error-2-2 expects 4 parameters");
      }
      if (!is_stable_denominator(theta0[2], theta0[3])) {
        std::ostringstream msg;
        msg << "unstable denominator 1 + " << theta0[2] << " z^-1 + " << theta0[3] << " z^-2";
        throw Error(ErrorCode::kModel, msg.str());
      }
      break;
    case ModelKind::kExternal:
      if (!external) throw Error(ErrorCode::kConfig, "external model kind needs an evaluator");
      if (external->parameter_count() != static_cast<std::size_t>(theta0.size())) {
        throw Error(ErrorCode::kConfig, "theta0 size does not match the external model");
      }
      break;
  }
}

ModelMemory model_memory(const ModelSpec& model) {
  switch (model.kind) {
    case ModelKind::kNonlinearFir: return 2;
    case ModelKind::kOutputError22: return std::nullopt;
    case ModelKind::kExternal: return model.external->memory();
  }
  return std::nullopt;
}

namespace {

[[noreturn]] void throw_non_finite(long t) {
  std::ostringstream msg;
  msg << "non-finite value at time index " << t;
  throw Error(ErrorCode::kNumerical, msg.str());
}

Eigen::MatrixXd fir_gradient(const Signal& u) {
  const long n = static_cast<long>(u.size());
  Eigen::MatrixXd psi(n, 4);
  for (long t = 1; t <= n; ++t) {
    const double now = u.at(t);
    const double prev = u.at(t - 1);
    psi.row(t - 1) << now, prev, now * now, prev * prev;
  }
  return psi;
}

Eigen::VectorXd fir_predict(const Signal& u, const Eigen::VectorXd& th) {
  const long n = static_cast<long>(u.size());
  Eigen::VectorXd y(n);
  for (long t = 1; t <= n; ++t) {
    const double now = u.at(t);
    const double prev = u.at(t - 1);
    y[t - 1] = th[0] * now + th[1] * prev + th[2] * now * now + th[3] * prev * prev;
  }
  return y;
}

// Output-error simulation with sensitivity filters; `psi` may be null when only
// predictions are needed.
Eigen::VectorXd oe_simulate(const Signal& u, const Eigen::VectorXd& th, Eigen::MatrixXd* psi) {
  const long n = static_cast<long>(u.size());
  Eigen::VectorXd y(n);
  if (psi) psi->resize(n, 4);
  double y1 = 0.0, y2 = 0.0;  // yhat_{t-1}, yhat_{t-2}
  Eigen::Vector4d s1 = Eigen::Vector4d::Zero(), s2 = Eigen::Vector4d::Zero();
  for (long t = 1; t <= n; ++t) {
    const double u1 = u.at(t - 1);
    const double u2 = u.at(t - 2);
    const double yt = th[0] * u1 + th[1] * u2 - th[2] * y1 - th[3] * y2;
    if (psi) {
      const Eigen::Vector4d regressor(u1, u2, -y1, -y2);
      const Eigen::Vector4d st = regressor - th[2] * s1 - th[3] * s2;
      if (!std::isfinite(yt) || !st.allFinite()) throw_non_finite(t);
      psi->row(t - 1) = st.transpose();
      s2 = s1;
      s1 = st;
    } else if (!std::isfinite(yt)) {
      throw_non_finite(t);
    }
    y[t - 1] = yt;
    y2 = y1;
    y1 = yt;
  }
  return y;
}

void check_finite(const Eigen::MatrixXd& psi) {
  for (Eigen::Index t = 0; t < psi.rows(); ++t) {
    if (!psi.row(t).allFinite()) throw_non_finite(static_cast<long>(t) + 1);
  }
}

}  // namespace

GradientTrace gradient_trace(const ModelSpec& model, const Signal& signal) {
  model.validate();
  if (signal.samples.empty()) throw Error(ErrorCode::kConfig, "signal must not be empty");
  if (model.burn_in >= signal.size()) {
    throw Error(ErrorCode::kConfig, "signal is not longer than the burn-in");
  }
  Eigen::MatrixXd full;
  switch (model.kind) {
    case ModelKind::kNonlinearFir:
      full = fir_gradient(signal);
      check_finite(full);
      break;
    case ModelKind::kOutputError22:
      oe_simulate(signal, model.theta0, &full);
      break;
    case ModelKind::kExternal:
      full = model.external->gradient(signal, model.theta0);
      if (full.rows() != static_cast<Eigen::Index>(signal.size()) ||
          full.cols() != model.theta0.size()) {
        throw Error(ErrorCode::kModel, "external model returned a gradient of the wrong shape");
      }
      check_finite(full);
      break;
  }
  const auto kept = static_cast<Eigen::Index>(signal.size() - model.burn_in);
  return GradientTrace{full.bottomRows(kept)};
}

Eigen::VectorXd predict(const ModelSpec& model, const Signal& signal,
                        const Eigen::VectorXd& theta) {
  if (theta.size() != model.theta0.size()) {
    throw Error(ErrorCode::kConfig, "parameter vector has the wrong size");
  }
  switch (model.kind) {
    case ModelKind::kNonlinearFir: return fir_predict(signal, theta);
    case ModelKind::kOutputError22: return oe_simulate(signal, theta, nullptr);
    case ModelKind::kExternal: return model.external->predict(signal, theta);
  }
  return {};
}

}  // namespace sidesign
