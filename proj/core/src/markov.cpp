#include "sidesign/markov.hpp"

#include <cmath>
#include <random>

#include "sidesign/error.hpp"

namespace sidesign {

namespace {

void check_sizes(const DesignWeights& weights, const CycleBasis& basis) {
  if (weights.size() != static_cast<Eigen::Index>(basis.size())) {
    throw Error(ErrorCode::kConfig, "weight count does not match the cycle basis size");
  }
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Smallest index whose cumulative mass exceeds u * total.
Eigen::Index draw_index(const Eigen::Ref<const Eigen::VectorXd>& mass, std::mt19937_64& rng) {
  const double target = unit_draw(rng) * mass.sum();
  double cumulative = 0.0;
  Eigen::Index last_positive = -1;
  for (Eigen::Index i = 0; i < mass.size(); ++i) {
    if (mass[i] <= 0.0) continue;
    cumulative += mass[i];
    last_positive = i;
    if (target < cumulative) return i;
  }
  return last_positive;
}

}  // namespace

StationaryDistribution assemble_stationary(const DesignWeights& weights, const CycleBasis& basis) {
  check_sizes(weights, basis);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.graph.node_count()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Cycle& cycle = basis.cycles[i];
    const double share = weights[static_cast<Eigen::Index>(i)] / static_cast<double>(cycle.length());
    for (NodeId node : cycle.distinct_nodes()) p[node] += share;
  }
  return StationaryDistribution{std::move(p)};
}

TransitionMatrix build_transition_matrix(const DesignWeights& weights, const CycleBasis& basis) {
  check_sizes(weights, basis);
  const auto n = static_cast<Eigen::Index>(basis.graph.node_count());
  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(n, n);  // flow(y, x) = F(x -> y)
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Cycle& cycle = basis.cycles[i];
    const double share = weights[static_cast<Eigen::Index>(i)] / static_cast<double>(cycle.length());
    for (std::size_t k = 0; k < cycle.length(); ++k) {
      flow(cycle.nodes[k + 1], cycle.nodes[k]) += share;
      mass[cycle.nodes[k]] += share;
    }
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    if (mass[x] > 0.0) {
      a.col(x) = flow.col(x) / mass[x];
    } else {
      a(x, x) = 1.0;
    }
  }
  return TransitionMatrix{std::move(a)};
}

double stationarity_residual(const TransitionMatrix& a, const StationaryDistribution& pi) {
  return (a.entries * pi.probabilities - pi.probabilities).cwiseAbs().maxCoeff();
}

double marginal_imbalance(const MemoryGraph& graph, const StationaryDistribution& pi) {
  const std::size_t c = graph.alphabet().size();
  const std::size_t windows = graph.node_count() / c;
  Eigen::VectorXd left = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(windows));
  Eigen::VectorXd right = left;
  for (std::size_t x = 0; x < graph.node_count(); ++x) {
    // x = (v, z) as oldest symbol then z; x = (z, v) as z then newest symbol.
    left[static_cast<Eigen::Index>(x % windows)] += pi.probabilities[static_cast<Eigen::Index>(x)];
    right[static_cast<Eigen::Index>(x / c)] += pi.probabilities[static_cast<Eigen::Index>(x)];
  }
  return (left - right).cwiseAbs().maxCoeff();
}

Signal generate_sequence(const MemoryGraph& graph, const TransitionMatrix& a,
                         const StationaryDistribution& pi, std::size_t length, std::uint64_t seed,
                         std::size_t burn_in) {
  const auto n = static_cast<Eigen::Index>(graph.node_count());
  if (pi.probabilities.size() != n || a.entries.rows() != n || a.entries.cols() != n) {
    throw Error(ErrorCode::kConfig, "chain size does not match the memory graph");
  }
  if (!(pi.probabilities.sum() > 0.0)) {
    throw Error(ErrorCode::kConfig, "stationary distribution has no mass");
  }
  if (length == 0) throw Error(ErrorCode::kConfig, "sequence length must be positive");

  std::mt19937_64 rng(seed);
  Eigen::Index state = draw_index(pi.probabilities, rng);
  for (std::size_t k = 0; k < burn_in; ++k) state = draw_index(a.entries.col(state), rng);

  Signal signal;
  signal.prefill = graph.window(static_cast<NodeId>(state));
  signal.prefill.pop_back();
  signal.samples.reserve(length);
  for (std::size_t t = 0; t < length; ++t) {
    if (t > 0) state = draw_index(a.entries.col(state), rng);
    signal.samples.push_back(
        graph.alphabet().value(graph.newest_symbol(static_cast<NodeId>(state))));
  }
  return signal;
}

}  // namespace sidesign
