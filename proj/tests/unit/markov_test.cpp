#include "sidesign/markov.hpp"

#include <random>
#include <set>

#include <gtest/gtest.h>

#include "sidesign/error.hpp"

namespace sidesign {
namespace {

Eigen::VectorXd random_simplex_point(Eigen::Index n, std::mt19937_64& rng) {
  std::exponential_distribution<double> draw(1.0);
  Eigen::VectorXd a(n);
  for (Eigen::Index i = 0; i < n; ++i) a[i] = draw(rng);
  return a / a.sum();
}

NodeId node(const MemoryGraph& g, std::vector<std::size_t> s) { return g.node_of(s); }

TEST(StationaryTest, BinaryMemoryTwoExample) {
  const CycleBasis basis = prime_cycle_basis(Alphabet({-1.0, 1.0}), 2);
  ASSERT_EQ(basis.size(), 3u);
  // basis order: (00), (01,10), (11)
  const DesignWeights w(Eigen::Vector3d(0.5, 0.3, 0.2));
  const StationaryDistribution pi = assemble_stationary(w, basis);
  const auto& g = basis.graph;
  EXPECT_DOUBLE_EQ(pi.probabilities[node(g, {0, 0})], 0.5);
  EXPECT_DOUBLE_EQ(pi.probabilities[node(g, {0, 1})], 0.15);
  EXPECT_DOUBLE_EQ(pi.probabilities[node(g, {1, 0})], 0.15);
  EXPECT_DOUBLE_EQ(pi.probabilities[node(g, {1, 1})], 0.2);
}

TEST(StationaryTest, VertexIsUniformOnCycle) {
  const CycleBasis basis = prime_cycle_basis(Alphabet({-1.0, 0.0, 1.0}), 2);
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(basis.size()); ++j) {
    const auto& cycle = basis.cycles[static_cast<std::size_t>(j)];
    const StationaryDistribution pi =
        assemble_stationary(DesignWeights::vertex(static_cast<Eigen::Index>(basis.size()), j), basis);
    for (NodeId x = 0; x < basis.graph.node_count(); ++x) {
      EXPECT_DOUBLE_EQ(pi.probabilities[x], cycle.contains(x) ? 1.0 / cycle.length() : 0.0);
    }
  }
}

TEST(StationaryTest, ResidualAndMarginalsForRandomWeights) {
  std::mt19937_64 rng(123);
  for (const auto& [alphabet, memory] :
       std::vector<std::pair<std::vector<double>, std::size_t>>{
           {{-1.0, 1.0}, 2}, {{-1.0, 0.0, 1.0}, 2}, {{-1.0, 1.0}, 4}, {{0.0, 1.0, 2.0}, 1}}) {
    const CycleBasis basis = prime_cycle_basis(Alphabet(alphabet), memory);
    for (int trial = 0; trial < 100; ++trial) {
      const DesignWeights w(random_simplex_point(static_cast<Eigen::Index>(basis.size()), rng));
      const StationaryDistribution pi = assemble_stationary(w, basis);
      const TransitionMatrix a = build_transition_matrix(w, basis);
      ASSERT_LE(stationarity_residual(a, pi), 1e-12);
      ASSERT_LE(marginal_imbalance(basis.graph, pi), 1e-12);
      ASSERT_NEAR(pi.probabilities.sum(), 1.0, 1e-12);
      ASSERT_GE(pi.probabilities.minCoeff(), 0.0);
      for (Eigen::Index x = 0; x < a.entries.cols(); ++x) {
        ASSERT_NEAR(a.entries.col(x).sum(), 1.0, 1e-12);
        for (Eigen::Index y = 0; y < a.entries.rows(); ++y) {
          if (a.entries(y, x) != 0.0) ASSERT_TRUE(basis.graph.has_edge(static_cast<NodeId>(x), static_cast<NodeId>(y)));
        }
      }
    }
  }
}

TEST(TransitionTest, SingleCycleIsDeterministicShift) {
  const CycleBasis basis = prime_cycle_basis(Alphabet({0.0, 1.0}), 2);
  const auto& g = basis.graph;
  const TransitionMatrix a = build_transition_matrix(DesignWeights::vertex(3, 1), basis);
  EXPECT_EQ(a.entries(node(g, {1, 0}), node(g, {0, 1})), 1.0);
  EXPECT_EQ(a.entries(node(g, {0, 1}), node(g, {1, 0})), 1.0);
  // Unused states keep a self-loop.
  EXPECT_EQ(a.entries(node(g, {0, 0}), node(g, {0, 0})), 1.0);
  EXPECT_EQ(a.entries(node(g, {1, 1}), node(g, {1, 1})), 1.0);

  const Signal s = generate_sequence(g, a, assemble_stationary(DesignWeights::vertex(3, 1), basis), 8, 5);
  for (std::size_t t = 1; t < s.size(); ++t) EXPECT_NE(s.samples[t], s.samples[t - 1]);
}

TEST(TransitionTest, SelfLoopBasisIsIdentity) {
  const CycleBasis basis = prime_cycle_basis(Alphabet({0.0, 1.0}), 2);
  const TransitionMatrix a = build_transition_matrix(DesignWeights(Eigen::Vector3d(0.5, 0.0, 0.5)), basis);
  EXPECT_EQ(a.entries, Eigen::MatrixXd::Identity(4, 4));
}

TEST(GenerateTest, SeedDeterminism) {
  const CycleBasis basis = prime_cycle_basis(Alphabet({-1.0, 0.0, 1.0}), 2);
  const DesignWeights w = DesignWeights::uniform(static_cast<Eigen::Index>(basis.size()));
  const auto pi = assemble_stationary(w, basis);
  const auto a = build_transition_matrix(w, basis);
  const Signal s1 = generate_sequence(basis.graph, a, pi, 1000, 77);
  const Signal s2 = generate_sequence(basis.graph, a, pi, 1000, 77);
  const Signal s3 = generate_sequence(basis.graph, a, pi, 1000, 78);
  EXPECT_EQ(s1, s2);
  EXPECT_NE(s1, s3);
  EXPECT_EQ(s1.prefill.size(), 1u);
}

TEST(GenerateTest, WindowsStayOnTheSupport) {
  const CycleBasis basis = prime_cycle_basis(Alphabet({-1.0, 0.0, 1.0}), 3);
  std::mt19937_64 rng(8);
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
  for (int k = 0; k < 5; ++k) alpha[static_cast<Eigen::Index>(rng() % basis.size())] += 0.2;
  const DesignWeights w(alpha);
  const auto pi = assemble_stationary(w, basis);
  const auto a = build_transition_matrix(w, basis);
  const Signal s = generate_sequence(basis.graph, a, pi, 2000, 3, 10);
  for (long t = 1; t <= static_cast<long>(s.size()); ++t) {
    std::vector<std::size_t> syms;
    for (long k = t - 2; k <= t; ++k) syms.push_back(basis.graph.alphabet().find(s.at(k)));
    ASSERT_GT(pi.probabilities[basis.graph.node_of(syms)], 0.0) << "t=" << t;
  }
}

// Batch-means standard errors on an irreducible aperiodic chain.
TEST(GenerateTest, EmpiricalFrequenciesMatchStationaryDistribution) {
  const CycleBasis basis = prime_cycle_basis(Alphabet({0.0, 1.0, 2.0}), 1);
  std::mt19937_64 rng(99);
  const DesignWeights w(random_simplex_point(static_cast<Eigen::Index>(basis.size()), rng).cwiseMax(0.02).normalized().cwiseAbs2());
  const auto pi = assemble_stationary(w, basis);
  const auto a = build_transition_matrix(w, basis);
  constexpr std::size_t kLength = 1'000'000;
  constexpr std::size_t kBatches = 100;
  const Signal s = generate_sequence(basis.graph, a, pi, kLength, 2024);
  for (std::size_t symbol = 0; symbol < 3; ++symbol) {
    const double value = basis.graph.alphabet().value(symbol);
    std::vector<double> means;
    for (std::size_t b = 0; b < kBatches; ++b) {
      const std::size_t len = kLength / kBatches;
      std::size_t hits = 0;
      for (std::size_t t = b * len; t < (b + 1) * len; ++t) hits += s.samples[t] == value ? 1 : 0;
      means.push_back(static_cast<double>(hits) / static_cast<double>(len));
    }
    double mean = 0.0;
    for (double m : means) mean += m;
    mean /= kBatches;
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    const double se = std::sqrt(var / (kBatches - 1) / kBatches);
    EXPECT_LE(std::abs(mean - pi.probabilities[symbol]), 3.0 * se) << "symbol " << symbol;
  }
}

TEST(GenerateTest, Errors) {
  const CycleBasis basis = prime_cycle_basis(Alphabet({0.0, 1.0}), 2);
  const DesignWeights w = DesignWeights::uniform(3);
  const auto pi = assemble_stationary(w, basis);
  const auto a = build_transition_matrix(w, basis);
  EXPECT_THROW(generate_sequence(basis.graph, a, pi, 0, 1), Error);
  EXPECT_THROW(generate_sequence(basis.graph, a, StationaryDistribution{Eigen::VectorXd::Zero(4)}, 5, 1), Error);
  EXPECT_THROW(generate_sequence(basis.graph, a, StationaryDistribution{Eigen::VectorXd::Ones(3)}, 5, 1), Error);
  EXPECT_THROW(assemble_stationary(DesignWeights::uniform(2), basis), Error);
}

}  // namespace
}  // namespace sidesign
