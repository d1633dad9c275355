#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sidesign/debruijn.hpp"
#include "sidesign/models.hpp"
#include "sidesign/weights.hpp"

namespace sidesign {

enum class InfoKind { kPerCycle, kCombined, kSampled };

const char* to_string(InfoKind kind) noexcept;

/// Per-sample Fisher information: symmetric positive semidefinite m x m.
class InfoMatrix {
 public:
  /// Symmetrizes `matrix`. Throws kNumerical for non-square, non-finite or
  /// clearly indefinite input (an eigenvalue below -1e-10 * trace).
  InfoMatrix(Eigen::MatrixXd matrix, std::size_t sample_count, InfoKind kind);

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  std::size_t sample_count() const noexcept { return sample_count_; }
  InfoKind kind() const noexcept { return kind_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }

 private:
  Eigen::MatrixXd matrix_;
  std::size_t sample_count_;
  InfoKind kind_;
};

bool is_psd(const Eigen::MatrixXd& matrix);

inline constexpr std::size_t kDefaultMonteCarloLength = 5000;
inline constexpr std::size_t kMinSamplesPerCycleNode = 100;

/// Monte Carlo estimate (1 / (lambda_e R)) sum psi psi^T over the periodic
/// cycle signal with tail prefill. The number of retained samples R is
/// n - burn_in rounded up to a multiple of the cycle length, and the signal
/// is burn_in + R samples long. Throws kConfig when n < 100 * L or n does not
/// exceed the burn-in.
InfoMatrix cycle_info_matrix(const ModelSpec& model, const MemoryGraph& graph, const Cycle& cycle,
                             std::size_t n = kDefaultMonteCarloLength);

/// Exact expectation under the uniform distribution on the cycle nodes:
/// (1 / (lambda_e L)) sum_x psi(x) psi(x)^T. Throws kConfig unless the model
/// memory is finite and at most the graph memory.
InfoMatrix exact_cycle_info_matrix(const ModelSpec& model, const MemoryGraph& graph,
                                   const Cycle& cycle);

/// sum_i alpha_i I_i. Throws kConfig on a size mismatch.
InfoMatrix combine(std::span<const InfoMatrix> basis, const DesignWeights& weights);

/// Same estimator as cycle_info_matrix on an arbitrary realization.
InfoMatrix sampled_info_matrix(const ModelSpec& model, const Signal& realization);

enum class InfoMethod {
  kAuto,        // exact when the model memory fits in the graph, else Monte Carlo
  kMonteCarlo,
  kExact,
};

/// Per-cycle matrices for a whole basis, in basis order. Cycles are processed
/// on up to `threads` workers; results do not depend on the schedule.
std::vector<InfoMatrix> basis_info_matrices(const ModelSpec& model, const CycleBasis& basis,
                                            std::size_t n = kDefaultMonteCarloLength,
                                            InfoMethod method = InfoMethod::kAuto,
                                            std::size_t threads = 1);

}  // namespace sidesign
