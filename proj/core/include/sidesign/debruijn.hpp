#pragma once

// Memory graphs over a finite input alphabet, elementary-cycle enumeration and
// prime-cycle bases.
//
// Node convention: a node of the memory-m graph is a window (u_{t-m+1}, ..., u_t)
// stored oldest entry first. Nodes are indexed lexicographically in alphabet
// order with the oldest entry most significant, so for alphabet size c the node
// index is sum_k sym_k * c^(m-1-k) and the newest symbol is `index % c`.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sidesign/signal.hpp"

namespace sidesign {

using NodeId = std::uint32_t;

class Alphabet {
 public:
  /// Throws kConfig on an empty list, repeated values or non-finite values.
  explicit Alphabet(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double value(std::size_t symbol) const { return values_.at(symbol); }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Symbol index of an exact alphabet value, or size() if absent.
  std::size_t find(double value) const noexcept;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<double> values_;
};

class MemoryGraph {
 public:
  MemoryGraph(Alphabet alphabet, std::size_t memory);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t memory() const noexcept { return memory_; }
  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return node_count_ * alphabet_.size(); }

  /// Successors of `node` in symbol order of the appended input.
  std::vector<NodeId> successors(NodeId node) const;
  bool has_edge(NodeId from, NodeId to) const noexcept;

  /// Symbol indices of the window, oldest first.
  std::vector<std::size_t> symbols(NodeId node) const;
  /// Input values of the window, oldest first.
  std::vector<double> window(NodeId node) const;
  NodeId node_of(std::span<const std::size_t> symbols) const;
  std::size_t newest_symbol(NodeId node) const noexcept { return node % alphabet_.size(); }

  friend bool operator==(const MemoryGraph&, const MemoryGraph&) = default;

 private:
  Alphabet alphabet_;
  std::size_t memory_;
  std::size_t node_count_;
  std::size_t suffix_count_;  // c^(m-1)
};

struct GraphLimits {
  std::size_t max_nodes = 4096;
  std::size_t max_cycles = 5'000'000;
};

/// Throws kConfig when memory is zero, kResourceCap when c^memory exceeds
/// `limits.max_nodes`.
MemoryGraph build_memory_graph(const Alphabet& alphabet, std::size_t memory,
                               const GraphLimits& limits = {});

/// Closed node walk; the first node is repeated at the end. Stored in
/// canonical rotation (smallest node index first) so that cyclic
/// permutations compare equal.
struct Cycle {
  std::vector<NodeId> nodes;

  std::size_t length() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }
  std::span<const NodeId> distinct_nodes() const noexcept {
    return std::span<const NodeId>(nodes).first(length());
  }
  bool contains(NodeId node) const noexcept;

  friend bool operator==(const Cycle&, const Cycle&) = default;
  friend auto operator<=>(const Cycle&, const Cycle&) = default;
};

/// Builds a closed cycle in canonical rotation from its distinct nodes in
/// traversal order (without the repeated endpoint).
Cycle make_cycle(std::vector<NodeId> open_nodes);

/// True when consecutive pairs are edges, first == last and no other node
/// repeats.
bool is_elementary_cycle(const MemoryGraph& graph, const Cycle& cycle);

/// All elementary cycles, distinct up to rotation, in canonical rotation.
/// Order: by smallest node, then by depth-first discovery order.
/// Throws kResourceCap when the graph exceeds `limits.max_nodes` nodes or more
/// than `limits.max_cycles` cycles are found.
std::vector<Cycle> elementary_cycles(const MemoryGraph& graph, const GraphLimits& limits = {});

struct CycleBasis {
  MemoryGraph graph;
  std::vector<Cycle> cycles;

  std::size_t size() const noexcept { return cycles.size(); }
};

/// Lifts elementary cycles of `source` (memory m-1) to prime cycles of
/// `target` (memory m) by joining consecutive windows. For a memory-1 target
/// the source must be the target itself and the lift is the identity.
/// Throws kConfig on mismatched graphs or a cycle that is not an elementary
/// cycle of `source`.
CycleBasis lift_prime_cycles(std::span<const Cycle> cycles, const MemoryGraph& source,
                             const MemoryGraph& target);

/// Enumerates the prime-cycle basis of the memory-m graph by lifting the
/// elementary cycles of the memory-(m-1) graph.
CycleBasis prime_cycle_basis(const Alphabet& alphabet, std::size_t memory,
                             const GraphLimits& limits = {});

/// True when no proper subset of the cycle's nodes carries an elementary
/// cycle, i.e. the subgraph induced by the cycle nodes has no extra edge.
bool is_prime_cycle(const MemoryGraph& graph, const Cycle& cycle);

/// Periodic signal of length n emitting the newest entry of each cycle node.
/// The prefill holds the m-1 older entries of the first node, so every
/// sliding window of the prefilled signal is a node of the cycle.
Signal cycle_signal(const MemoryGraph& graph, const Cycle& cycle, std::size_t n);

}  // namespace sidesign
