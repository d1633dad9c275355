#include "sidesign/fisher.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "sidesign/error.hpp"

namespace sidesign {

const char* to_string(InfoKind kind) noexcept {
  switch (kind) {
    case InfoKind::kPerCycle: return "per-cycle";
    case InfoKind::kCombined: return "combined";
    case InfoKind::kSampled: return "sampled";
  }
  return "unknown";
}

bool is_psd(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() == 0) return true;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(matrix, Eigen::EigenvaluesOnly);
  const double trace = std::max(matrix.trace(), 0.0);
  return eig.eigenvalues().minCoeff() >= -1e-10 * trace;
}

InfoMatrix::InfoMatrix(Eigen::MatrixXd matrix, std::size_t sample_count, InfoKind kind)
    : matrix_(std::move(matrix)), sample_count_(sample_count), kind_(kind) {
  if (matrix_.rows() != matrix_.cols()) {
    throw Error(ErrorCode::kNumerical, "information matrix must be square");
  }
  if (!matrix_.allFinite()) throw Error(ErrorCode::kNumerical, "information matrix is not finite");
  matrix_ = 0.5 * (matrix_ + matrix_.transpose()).eval();
  if (!is_psd(matrix_)) {
    throw Error(ErrorCode::kNumerical, "information matrix is not positive semidefinite");
  }
}

namespace {

Eigen::MatrixXd outer_sum(const GradientTrace& trace) {
  return trace.psi.transpose() * trace.psi;
}

}  // namespace

InfoMatrix cycle_info_matrix(const ModelSpec& model, const MemoryGraph& graph, const Cycle& cycle,
                             std::size_t n) {
  const std::size_t len = cycle.length();
  if (len == 0) throw Error(ErrorCode::kConfig, "empty cycle");
  if (n < kMinSamplesPerCycleNode * len) {
    std::ostringstream msg;
    msg << "Monte Carlo length " << n << " is below " << kMinSamplesPerCycleNode
        << " times the cycle length " << len;
    throw Error(ErrorCode::kConfig, msg.str());
  }
  if (n <= model.burn_in) {
    throw Error(ErrorCode::kConfig, "Monte Carlo length must exceed the burn-in");
  }
  const std::size_t retained = (n - model.burn_in + len - 1) / len * len;
  const Signal signal = cycle_signal(graph, cycle, model.burn_in + retained);
  const GradientTrace trace = gradient_trace(model, signal);
  const double scale = 1.0 / (model.noise_variance * static_cast<double>(trace.steps()));
  return InfoMatrix(scale * outer_sum(trace), trace.steps(), InfoKind::kPerCycle);
}

InfoMatrix exact_cycle_info_matrix(const ModelSpec& model, const MemoryGraph& graph,
                                   const Cycle& cycle) {
  model.validate();
  const ModelMemory memory = model_memory(model);
  if (!memory || *memory > graph.memory()) {
    throw Error(ErrorCode::kConfig,
                "exact information needs a finite model memory no larger than the graph memory");
  }
  if (cycle.length() == 0) throw Error(ErrorCode::kConfig, "empty cycle");
  ModelSpec windowed = model;
  windowed.burn_in = 0;
  const auto m = static_cast<Eigen::Index>(model.parameter_count());
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(m, m);
  for (NodeId node : cycle.distinct_nodes()) {
    // The window holds the whole model memory, so the last gradient row is psi(x).
    const Signal window{graph.window(node), {}};
    const GradientTrace trace = gradient_trace(windowed, window);
    const Eigen::VectorXd psi = trace.psi.bottomRows(1).transpose();
    sum += psi * psi.transpose();
  }
  const double scale = 1.0 / (model.noise_variance * static_cast<double>(cycle.length()));
  return InfoMatrix(scale * sum, cycle.length(), InfoKind::kPerCycle);
}

InfoMatrix combine(std::span<const InfoMatrix> basis, const DesignWeights& weights) {
  if (basis.empty()) throw Error(ErrorCode::kConfig, "no basis matrices to combine");
  if (static_cast<Eigen::Index>(basis.size()) != weights.size()) {
    throw Error(ErrorCode::kConfig, "weight count does not match the number of basis matrices");
  }
  const Eigen::Index m = basis.front().dim();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(m, m);
  std::size_t samples = 0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].dim() != m) throw Error(ErrorCode::kConfig, "basis matrices differ in size");
    const double a = weights[static_cast<Eigen::Index>(i)];
    if (a != 0.0) sum += a * basis[i].matrix();
    samples = std::max(samples, basis[i].sample_count());
  }
  return InfoMatrix(std::move(sum), samples, InfoKind::kCombined);
}

InfoMatrix sampled_info_matrix(const ModelSpec& model, const Signal& realization) {
  const GradientTrace trace = gradient_trace(model, realization);
  const double scale = 1.0 / (model.noise_variance * static_cast<double>(trace.steps()));
  return InfoMatrix(scale * outer_sum(trace), trace.steps(), InfoKind::kSampled);
}

std::vector<InfoMatrix> basis_info_matrices(const ModelSpec& model, const CycleBasis& basis,
                                            std::size_t n, InfoMethod method,
                                            std::size_t threads) {
  model.validate();
  bool exact = method == InfoMethod::kExact;
  if (method == InfoMethod::kAuto) {
    const ModelMemory memory = model_memory(model);
    exact = memory && *memory <= basis.graph.memory();
  }

  const std::size_t count = basis.size();
  std::vector<std::optional<InfoMatrix>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i] = exact ? exact_cycle_info_matrix(model, basis.graph, basis.cycles[i])
                         : cycle_info_matrix(model, basis.graph, basis.cycles[i], n);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  std::vector<InfoMatrix> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

}  // namespace sidesign
