#pragma once

// Stationary distribution of the designed input and a Markov chain on the
// memory graph that leaves it invariant.
//
// Column convention: Pi_{k+1} = A Pi_k, so column x of A holds the
// distribution of the next state given the current state x.

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "sidesign/debruijn.hpp"
#include "sidesign/signal.hpp"
#include "sidesign/weights.hpp"

namespace sidesign {

struct StationaryDistribution {
  Eigen::VectorXd probabilities;  // indexed by graph node
};

struct TransitionMatrix {
  Eigen::MatrixXd entries;  // entries(y, x) = P(next = y | current = x)
};

/// Node mass sum_i alpha_i / L_i over the cycles containing the node.
StationaryDistribution assemble_stationary(const DesignWeights& weights, const CycleBasis& basis);

/// Cycle-flow composition: edge flow F(x->y) = sum_i alpha_i [x->y in cycle i] / L_i,
/// A(y, x) = F(x->y) / Pi(x). States without mass get a self-loop column.
TransitionMatrix build_transition_matrix(const DesignWeights& weights, const CycleBasis& basis);

/// max_x |(A Pi)(x) - Pi(x)|.
double stationarity_residual(const TransitionMatrix& a, const StationaryDistribution& pi);

/// max over (m-1)-windows z of |sum_v f(v, z) - sum_v f(z, v)|.
double marginal_imbalance(const MemoryGraph& graph, const StationaryDistribution& pi);

/// Runs the chain from an initial state drawn from `pi`, discards `burn_in`
/// states, and emits the newest entry of each of the next `length` states.
/// The prefill holds the older entries of the first emitted state.
/// Deterministic given `seed` (64-bit Mersenne twister, inverse-CDF draws).
/// Throws kConfig when `pi` has no mass or sizes disagree.
Signal generate_sequence(const MemoryGraph& graph, const TransitionMatrix& a,
                         const StationaryDistribution& pi, std::size_t length, std::uint64_t seed,
                         std::size_t burn_in = 0);

}  // namespace sidesign
