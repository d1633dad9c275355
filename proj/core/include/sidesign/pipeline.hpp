#pragma once

// Batch pipeline behind the command-line tool: configuration, cycle-basis
// caching, design, synthesis and evaluation, with all artifacts written to
// disk alongside a manifest.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sidesign/debruijn.hpp"
#include "sidesign/design.hpp"
#include "sidesign/fisher.hpp"
#include "sidesign/markov.hpp"
#include "sidesign/models.hpp"

namespace sidesign {

struct RunConfig {
  std::vector<double> alphabet;
  std::size_t memory = 1;
  ModelSpec model;
  Criterion criterion = Criterion::kD;
  std::size_t monte_carlo_length = kDefaultMonteCarloLength;
  std::size_t sequence_length = kDefaultMonteCarloLength;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = ".";
  std::optional<std::filesystem::path> cycle_cache;
  OptimizerOptions optimizer;
  InfoMethod info_method = InfoMethod::kAuto;
  std::size_t threads = 1;
  std::size_t chain_burn_in = 0;
  GraphLimits limits;

  /// Canonical JSON form; hashed into manifests.
  nlohmann::json to_json() const;
};

/// Throws kConfig on unknown keys, wrong types or invalid values; kModel for
/// an unstable output-error model. The "external" model kind is rejected here
/// since it can only be supplied through the library API.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

struct EnumerateReport {
  std::size_t cycle_count;
  double seconds;
  std::filesystem::path basis_file;
};

struct DesignReport {
  CycleBasis basis;
  std::vector<InfoMatrix> matrices;
  DesignResult result;
  StationaryDistribution stationary;
  TransitionMatrix transition;
  bool cache_hit;
};

struct SynthesisReport {
  Signal signal;
  std::filesystem::path signal_file;
};

struct EvaluationReport {
  InfoMatrix matrix;
  double log_det;                        // -inf when singular
  std::optional<double> trace_inverse;   // nullopt when singular
  bool singular;
};

inline constexpr const char* kBasisFile = "cycle_basis.json";
inline constexpr const char* kMatricesFile = "basis_matrices.json";
inline constexpr const char* kDesignFile = "design.json";
inline constexpr const char* kStationaryFile = "stationary.csv";
inline constexpr const char* kTransitionFile = "transition.json";
inline constexpr const char* kEvaluationFile = "evaluation.json";
inline constexpr const char* kManifestFile = "manifest.json";

/// Loads the basis from `cache` when it matches the configured alphabet and
/// memory, otherwise enumerates it and writes the cache file.
CycleBasis obtain_basis(const RunConfig& config, const std::optional<std::filesystem::path>& cache,
                        bool* cache_hit = nullptr);

/// Writes the cycle basis to `out` (a .json file path, or a directory that
/// receives cycle_basis.json).
EnumerateReport run_enumerate(const RunConfig& config, const std::filesystem::path& out);

/// Writes cycle_basis.json, basis_matrices.json, design.json, stationary.csv,
/// transition.json and manifest.json into `out_dir`. A design that hits the
/// iteration limit is still written; callers check result.converged.
DesignReport run_design(const RunConfig& config, const std::filesystem::path& out_dir);

/// Reads design.json and cycle_basis.json from `design_dir`, runs the chain
/// and writes `out_file` plus `<out_file>.manifest.json`.
SynthesisReport run_synthesize(const RunConfig& config, const std::filesystem::path& design_dir,
                               std::size_t length, std::uint64_t seed,
                               const std::filesystem::path& out_file);

/// Writes evaluation.json and manifest.json into `out_dir`.
EvaluationReport run_evaluate(const RunConfig& config, const std::filesystem::path& signal_file,
                              const std::filesystem::path& out_dir);

}  // namespace sidesign
