#include "sidesign/debruijn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "sidesign/error.hpp"

namespace sidesign {

Alphabet::Alphabet(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorCode::kConfig, "alphabet must not be empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::kConfig, "alphabet values must be finite");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (values_[i] == values_[j]) {
        std::ostringstream msg;
        msg << "alphabet value " << values_[i] << " appears more than once";
        throw Error(ErrorCode::kConfig, msg.str());
      }
    }
  }
}

std::size_t Alphabet::find(double value) const noexcept {
  const auto it = std::find(values_.begin(), values_.end(), value);
  return static_cast<std::size_t>(it - values_.begin());
}

namespace {

// c^m, or nullopt-like sentinel on overflow past `cap`.
std::size_t bounded_power(std::size_t base, std::size_t exponent, std::size_t cap) {
  std::size_t result = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (result > cap / base) return cap + 1;
    result *= base;
  }
  return result;
}

}  // namespace

MemoryGraph::MemoryGraph(Alphabet alphabet, std::size_t memory)
    : alphabet_(std::move(alphabet)), memory_(memory) {
  if (memory_ == 0) throw Error(ErrorCode::kConfig, "memory must be at least 1");
  const std::size_t cap = std::numeric_limits<NodeId>::max();
  node_count_ = bounded_power(alphabet_.size(), memory_, cap);
  if (node_count_ > cap) throw Error(ErrorCode::kResourceCap, "memory graph node count overflows");
  suffix_count_ = node_count_ / alphabet_.size();
}

std::vector<NodeId> MemoryGraph::successors(NodeId node) const {
  const std::size_t c = alphabet_.size();
  const std::size_t base = (static_cast<std::size_t>(node) % suffix_count_) * c;
  std::vector<NodeId> out(c);
  for (std::size_t v = 0; v < c; ++v) out[v] = static_cast<NodeId>(base + v);
  return out;
}

bool MemoryGraph::has_edge(NodeId from, NodeId to) const noexcept {
  if (from >= node_count_ || to >= node_count_) return false;
  return from % suffix_count_ == to / alphabet_.size();
}

std::vector<std::size_t> MemoryGraph::symbols(NodeId node) const {
  std::vector<std::size_t> out(memory_);
  std::size_t rest = node;
  for (std::size_t k = memory_; k-- > 0;) {
    out[k] = rest % alphabet_.size();
    rest /= alphabet_.size();
  }
  return out;
}

std::vector<double> MemoryGraph::window(NodeId node) const {
  const auto syms = symbols(node);
  std::vector<double> out(syms.size());
  std::transform(syms.begin(), syms.end(), out.begin(),
                 [this](std::size_t s) { return alphabet_.value(s); });
  return out;
}

NodeId MemoryGraph::node_of(std::span<const std::size_t> symbols) const {
  if (symbols.size() != memory_) {
    throw Error(ErrorCode::kConfig, "node tuple length does not match graph memory");
  }
  std::size_t index = 0;
  for (std::size_t s : symbols) {
    if (s >= alphabet_.size()) throw Error(ErrorCode::kConfig, "symbol outside alphabet");
    index = index * alphabet_.size() + s;
  }
  return static_cast<NodeId>(index);
}

MemoryGraph build_memory_graph(const Alphabet& alphabet, std::size_t memory,
                               const GraphLimits& limits) {
  if (memory == 0) throw Error(ErrorCode::kConfig, "memory must be at least 1");
  const std::size_t nodes = bounded_power(alphabet.size(), memory, limits.max_nodes);
  if (nodes > limits.max_nodes) {
    std::ostringstream msg;
    msg << "instance too large: " << alphabet.size() << "^" << memory << " nodes exceeds the cap of "
        << limits.max_nodes;
    throw Error(ErrorCode::kResourceCap, msg.str());
  }
  return MemoryGraph(alphabet, memory);
}

bool Cycle::contains(NodeId node) const noexcept {
  const auto d = distinct_nodes();
  return std::find(d.begin(), d.end(), node) != d.end();
}

Cycle make_cycle(std::vector<NodeId> open_nodes) {
  if (open_nodes.empty()) return {};
  const auto smallest = std::min_element(open_nodes.begin(), open_nodes.end());
  std::rotate(open_nodes.begin(), smallest, open_nodes.end());
  open_nodes.push_back(open_nodes.front());
  return Cycle{std::move(open_nodes)};
}

bool is_elementary_cycle(const MemoryGraph& graph, const Cycle& cycle) {
  if (cycle.nodes.size() < 2 || cycle.nodes.front() != cycle.nodes.back()) return false;
  const auto d = cycle.distinct_nodes();
  std::vector<NodeId> sorted(d.begin(), d.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (std::size_t i = 0; i + 1 < cycle.nodes.size(); ++i) {
    if (!graph.has_edge(cycle.nodes[i], cycle.nodes[i + 1])) return false;
  }
  return true;
}

namespace {

using Adjacency = std::vector<std::vector<NodeId>>;

// Tarjan's strongly connected components restricted to vertices >= first.
// Returns a component label per vertex (-1 for vertices below `first`).
class SccFinder {
 public:
  SccFinder(const Adjacency& adj, NodeId first)
      : adj_(adj), first_(first), index_(adj.size(), -1), low_(adj.size(), 0),
        on_stack_(adj.size(), false), component_(adj.size(), -1) {
    for (std::size_t v = first_; v < adj_.size(); ++v) {
      if (index_[v] == -1) visit(static_cast<NodeId>(v));
    }
  }

  const std::vector<int>& components() const noexcept { return component_; }

 private:
  void visit(NodeId v) {
    index_[v] = low_[v] = counter_++;
    stack_.push_back(v);
    on_stack_[v] = true;
    for (NodeId w : adj_[v]) {
      if (w < first_) continue;
      if (index_[w] == -1) {
        visit(w);
        low_[v] = std::min(low_[v], low_[w]);
      } else if (on_stack_[w]) {
        low_[v] = std::min(low_[v], index_[w]);
      }
    }
    if (low_[v] == index_[v]) {
      NodeId w;
      do {
        w = stack_.back();
        stack_.pop_back();
        on_stack_[w] = false;
        component_[w] = components_;
      } while (w != v);
      ++components_;
    }
  }

  const Adjacency& adj_;
  NodeId first_;
  std::vector<int> index_;
  std::vector<int> low_;
  std::vector<bool> on_stack_;
  std::vector<int> component_;
  std::vector<NodeId> stack_;
  int counter_ = 0;
  int components_ = 0;
};

// Johnson's circuit search rooted at `start` inside one strong component.
class CircuitSearch {
 public:
  CircuitSearch(const Adjacency& adj, const std::vector<int>& component, NodeId start,
                std::size_t max_cycles, std::vector<Cycle>& out)
      : adj_(adj), component_(component), start_(start), label_(component[start]),
        max_cycles_(max_cycles), blocked_(adj.size(), false), blocked_by_(adj.size()),
        out_(out) {
    circuit(start_);
  }

 private:
  bool in_scope(NodeId w) const { return w >= start_ && component_[w] == label_; }

  void unblock(NodeId u) {
    blocked_[u] = false;
    auto pending = std::move(blocked_by_[u]);
    blocked_by_[u].clear();
    for (NodeId w : pending) {
      if (blocked_[w]) unblock(w);
    }
  }

  bool circuit(NodeId v) {
    bool found = false;
    path_.push_back(v);
    blocked_[v] = true;
    for (NodeId w : adj_[v]) {
      if (!in_scope(w)) continue;
      if (w == start_) {
        if (out_.size() >= max_cycles_) {
          std::ostringstream msg;
          msg << "instance too large: more than " << max_cycles_ << " elementary cycles";
          throw Error(ErrorCode::kResourceCap, msg.str());
        }
        Cycle c{path_};
        c.nodes.push_back(start_);
        out_.push_back(std::move(c));
        found = true;
      } else if (!blocked_[w] && circuit(w)) {
        found = true;
      }
    }
    if (found) {
      unblock(v);
    } else {
      for (NodeId w : adj_[v]) {
        if (!in_scope(w)) continue;
        auto& list = blocked_by_[w];
        if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
      }
    }
    path_.pop_back();
    return found;
  }

  const Adjacency& adj_;
  const std::vector<int>& component_;
  NodeId start_;
  int label_;
  std::size_t max_cycles_;
  std::vector<bool> blocked_;
  std::vector<std::vector<NodeId>> blocked_by_;
  std::vector<NodeId> path_;
  std::vector<Cycle>& out_;
};

}  // namespace

std::vector<Cycle> elementary_cycles(const MemoryGraph& graph, const GraphLimits& limits) {
  if (graph.node_count() > limits.max_nodes) {
    std::ostringstream msg;
    msg << "instance too large: " << graph.node_count() << " nodes exceeds the cap of "
        << limits.max_nodes;
    throw Error(ErrorCode::kResourceCap, msg.str());
  }
  const std::size_t n = graph.node_count();
  Adjacency adj(n);
  for (std::size_t v = 0; v < n; ++v) {
    adj[v] = graph.successors(static_cast<NodeId>(v));
    std::sort(adj[v].begin(), adj[v].end());
    adj[v].erase(std::unique(adj[v].begin(), adj[v].end()), adj[v].end());
  }

  std::vector<Cycle> out;
  for (std::size_t s = 0; s < n; ++s) {
    const auto start = static_cast<NodeId>(s);
    const SccFinder scc(adj, start);
    const auto& comp = scc.components();
    // A singleton component only carries a cycle through a self-loop.
    const bool nontrivial =
        std::any_of(adj[s].begin(), adj[s].end(), [&](NodeId w) {
          return w >= start && comp[w] == comp[s];
        });
    if (!nontrivial) continue;
    CircuitSearch(adj, comp, start, limits.max_cycles, out);
  }
  return out;
}

CycleBasis lift_prime_cycles(std::span<const Cycle> cycles, const MemoryGraph& source,
                             const MemoryGraph& target) {
  if (!(source.alphabet() == target.alphabet())) {
    throw Error(ErrorCode::kConfig, "lift source and target use different alphabets");
  }
  const bool identity = target.memory() == 1;
  if (identity ? source.memory() != 1 : source.memory() + 1 != target.memory()) {
    throw Error(ErrorCode::kConfig, "lift source memory must be one less than the target memory");
  }

  CycleBasis basis{target, {}};
  basis.cycles.reserve(cycles.size());
  const std::size_t c = target.alphabet().size();
  for (const Cycle& cycle : cycles) {
    if (!is_elementary_cycle(source, cycle)) {
      throw Error(ErrorCode::kConfig, "lift input is not an elementary cycle of the source graph");
    }
    if (identity) {
      basis.cycles.push_back(make_cycle({cycle.nodes.begin(), cycle.nodes.end() - 1}));
      continue;
    }
    const std::size_t len = cycle.length();
    std::vector<NodeId> lifted(len);
    for (std::size_t k = 0; k < len; ++k) {
      const NodeId next = cycle.nodes[(k + 1) % len];
      lifted[k] = static_cast<NodeId>(static_cast<std::size_t>(cycle.nodes[k]) * c +
                                      source.newest_symbol(next));
    }
    basis.cycles.push_back(make_cycle(std::move(lifted)));
  }
  return basis;
}

CycleBasis prime_cycle_basis(const Alphabet& alphabet, std::size_t memory,
                             const GraphLimits& limits) {
  const MemoryGraph target = build_memory_graph(alphabet, memory, limits);
  const MemoryGraph source = memory == 1 ? target : build_memory_graph(alphabet, memory - 1, limits);
  const auto cycles = elementary_cycles(source, limits);
  return lift_prime_cycles(cycles, source, target);
}

bool is_prime_cycle(const MemoryGraph& graph, const Cycle& cycle) {
  if (!is_elementary_cycle(graph, cycle)) return false;
  const auto d = cycle.distinct_nodes();
  std::size_t induced_edges = 0;
  for (NodeId a : d) {
    for (NodeId b : d) {
      if (graph.has_edge(a, b)) ++induced_edges;
    }
  }
  return induced_edges == cycle.length();
}

Signal cycle_signal(const MemoryGraph& graph, const Cycle& cycle, std::size_t n) {
  if (cycle.length() == 0) throw Error(ErrorCode::kConfig, "empty cycle");
  if (n == 0) throw Error(ErrorCode::kConfig, "signal length must be positive");
  const auto d = cycle.distinct_nodes();
  Signal signal;
  signal.samples.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    signal.samples[t] = graph.alphabet().value(graph.newest_symbol(d[t % d.size()]));
  }
  signal.prefill = graph.window(d.front());
  signal.prefill.pop_back();
  return signal;
}

}  // namespace sidesign
