#include "sidesign/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <set>

#include "sidesign/error.hpp"
#include "sidesign/io.hpp"

namespace sidesign {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const char* to_string(InfoMethod m) {
  switch (m) {
    case InfoMethod::kAuto: return "auto";
    case InfoMethod::kMonteCarlo: return "monte-carlo";
    case InfoMethod::kExact: return "exact";
  }
  return "auto";
}

InfoMethod parse_info_method(const std::string& text) {
  if (text == "auto") return InfoMethod::kAuto;
  if (text == "monte-carlo") return InfoMethod::kMonteCarlo;
  if (text == "exact") return InfoMethod::kExact;
  throw Error(ErrorCode::kConfig, "unknown info_method '" + text + "'");
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) {
      throw Error(ErrorCode::kConfig, "unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  return obj.contains(key) ? obj.at(key).get<T>() : fallback;
}

std::size_t positive(const json& obj, const char* key, std::size_t fallback) {
  if (obj.contains(key) && obj.at(key).is_number_integer() && obj.at(key).get<long long>() < 1) {
    throw Error(ErrorCode::kConfig, std::string(key) + " must be a positive integer");
  }
  const auto v = get_or<std::size_t>(obj, key, fallback);
  if (v == 0) throw Error(ErrorCode::kConfig, std::string(key) + " must be a positive integer");
  return v;
}

// manifest.json keeps one entry per command so that design and evaluate can
// share an output directory.
void update_manifest(const fs::path& dir, const std::string& command, const RunConfig& config,
                     std::uint64_t seed, const std::vector<fs::path>& artifacts) {
  const fs::path path = dir / kManifestFile;
  json manifest{{"format", "manifest"}, {"version", io::kFormatVersion}, {"runs", json::object()}};
  if (fs::exists(path)) {
    try {
      json existing = io::read_json(path);
      if (existing.value("format", "") == "manifest" && existing.contains("runs")) {
        manifest["runs"] = existing["runs"];
      }
    } catch (const Error&) {
      // unreadable manifests are replaced
    }
  }
  json files = json::array();
  for (const fs::path& a : artifacts) {
    files.push_back({{"file", a.filename().string()},
                     {"format_version", io::kFormatVersion},
                     {"hash", io::content_hash(io::read_file(a))}});
  }
  manifest["runs"][command] = {{"config_hash", io::content_hash(config.to_json().dump())},
                               {"seed", seed},
                               {"artifacts", std::move(files)}};
  io::write_json(path, manifest);
}

bool basis_matches(const CycleBasis& basis, const RunConfig& config) {
  return basis.graph.alphabet().values() == config.alphabet && basis.graph.memory() == config.memory;
}

}  // namespace

json RunConfig::to_json() const {
  json model_doc{{"kind", sidesign::to_string(model.kind)},
                 {"theta0", std::vector<double>(model.theta0.begin(), model.theta0.end())},
                 {"lambda_e", model.noise_variance},
                 {"burn_in", model.burn_in}};
  json doc{{"alphabet", alphabet},
           {"memory", memory},
           {"model", std::move(model_doc)},
           {"criterion", sidesign::to_string(criterion)},
           {"monte_carlo_length", monte_carlo_length},
           {"sequence_length", sequence_length},
           {"seed", seed},
           {"tolerance", optimizer.tolerance},
           {"max_iterations", optimizer.max_iterations},
           {"info_method", to_string(info_method)},
           {"chain_burn_in", chain_burn_in},
           {"max_nodes", limits.max_nodes},
           {"max_cycles", limits.max_cycles}};
  return doc;
}

RunConfig parse_config(const json& doc) {
  try {
    if (!doc.is_object()) throw Error(ErrorCode::kConfig, "config must be a JSON object");
    reject_unknown(doc,
                   {"description", "alphabet", "memory", "model", "criterion", "monte_carlo_length",
                    "sequence_length", "seed", "output_dir", "cycle_cache", "tolerance",
                    "max_iterations", "info_method", "threads", "chain_burn_in", "max_nodes",
                    "max_cycles"},
                   "config");
    RunConfig c;
    c.alphabet = doc.at("alphabet").get<std::vector<double>>();
    Alphabet{c.alphabet};  // validates
    c.memory = positive(doc, "memory", 0);

    const json& m = doc.at("model");
    reject_unknown(m, {"kind", "theta0", "lambda_e", "burn_in"}, "model");
    const ModelKind kind = parse_model_kind(m.at("kind").get<std::string>());
    if (kind == ModelKind::kExternal) {
      throw Error(ErrorCode::kConfig, "external models are only available through the library API");
    }
    const auto theta = m.at("theta0").get<std::vector<double>>();
    const Eigen::VectorXd theta0 =
        Eigen::Map<const Eigen::VectorXd>(theta.data(), static_cast<Eigen::Index>(theta.size()));
    const double lambda = get_or<double>(m, "lambda_e", 1.0);
    const std::size_t default_burn =
        kind == ModelKind::kOutputError22 ? ModelSpec::kDefaultOutputErrorBurnIn : 0;
    const auto burn = get_or<std::size_t>(m, "burn_in", default_burn);
    c.model = kind == ModelKind::kOutputError22 ? ModelSpec::output_error(theta0, lambda, burn)
                                                : ModelSpec::nonlinear_fir(theta0, lambda);
    c.model.burn_in = burn;

    c.criterion = parse_criterion(get_or<std::string>(doc, "criterion", "D"));
    c.monte_carlo_length = positive(doc, "monte_carlo_length", kDefaultMonteCarloLength);
    c.sequence_length = positive(doc, "sequence_length", kDefaultMonteCarloLength);
    c.seed = get_or<std::uint64_t>(doc, "seed", 0);
    c.output_dir = get_or<std::string>(doc, "output_dir", ".");
    if (doc.contains("cycle_cache")) c.cycle_cache = doc.at("cycle_cache").get<std::string>();
    c.optimizer.tolerance = get_or<double>(doc, "tolerance", 1e-8);
    if (!(c.optimizer.tolerance > 0.0)) throw Error(ErrorCode::kConfig, "tolerance must be positive");
    c.optimizer.max_iterations = positive(doc, "max_iterations", 100000);
    c.info_method = parse_info_method(get_or<std::string>(doc, "info_method", "auto"));
    c.threads = positive(doc, "threads", 1);
    c.chain_burn_in = get_or<std::size_t>(doc, "chain_burn_in", 0);
    c.limits.max_nodes = positive(doc, "max_nodes", GraphLimits{}.max_nodes);
    c.limits.max_cycles = positive(doc, "max_cycles", GraphLimits{}.max_cycles);
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("invalid config: ") + e.what());
  }
}

RunConfig load_config(const fs::path& path) { return parse_config(io::read_json(path)); }

CycleBasis obtain_basis(const RunConfig& config, const std::optional<fs::path>& cache,
                        bool* cache_hit) {
  if (cache_hit) *cache_hit = false;
  if (cache && fs::exists(*cache)) {
    CycleBasis cached = io::basis_from_json(io::read_json(*cache));
    if (basis_matches(cached, config)) {
      if (cache_hit) *cache_hit = true;
      return cached;
    }
  }
  CycleBasis basis = prime_cycle_basis(Alphabet(config.alphabet), config.memory, config.limits);
  if (cache) io::write_json(*cache, io::basis_to_json(basis));
  return basis;
}

EnumerateReport run_enumerate(const RunConfig& config, const fs::path& out) {
  const auto start = std::chrono::steady_clock::now();
  const CycleBasis basis = prime_cycle_basis(Alphabet(config.alphabet), config.memory, config.limits);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const fs::path file = out.extension() == ".json" ? out : out / kBasisFile;
  io::write_json(file, io::basis_to_json(basis));
  update_manifest(file.has_parent_path() ? file.parent_path() : fs::path("."), "enumerate-cycles",
                  config, config.seed, {file});
  return EnumerateReport{basis.size(), seconds, file};
}

DesignReport run_design(const RunConfig& config, const fs::path& out_dir) {
  bool hit = false;
  CycleBasis basis = obtain_basis(config, config.cycle_cache, &hit);
  std::vector<InfoMatrix> matrices = basis_info_matrices(
      config.model, basis, config.monte_carlo_length, config.info_method, config.threads);
  DesignResult result = optimize(matrices, config.criterion, config.optimizer);
  StationaryDistribution pi = assemble_stationary(result.weights, basis);
  TransitionMatrix a = build_transition_matrix(result.weights, basis);

  fs::create_directories(out_dir);
  const std::vector<fs::path> files{out_dir / kBasisFile, out_dir / kMatricesFile,
                                    out_dir / kDesignFile, out_dir / kStationaryFile,
                                    out_dir / kTransitionFile};
  io::write_json(files[0], io::basis_to_json(basis));
  io::write_json(files[1], io::info_matrices_to_json(matrices));
  io::write_json(files[2], io::design_to_json(result));
  io::write_file(files[3], io::stationary_csv(basis.graph, pi));
  io::write_json(files[4], io::transition_to_json(basis.graph, a));
  update_manifest(out_dir, "design", config, config.seed, files);
  return DesignReport{std::move(basis), std::move(matrices), std::move(result), std::move(pi),
                      std::move(a), hit};
}

SynthesisReport run_synthesize(const RunConfig& config, const fs::path& design_dir,
                               std::size_t length, std::uint64_t seed, const fs::path& out_file) {
  const fs::path basis_file = design_dir / kBasisFile;
  const fs::path design_file = design_dir / kDesignFile;
  for (const auto& f : {basis_file, design_file}) {
    if (!fs::exists(f)) throw Error(ErrorCode::kConfig, "missing design artifact " + f.string());
  }
  const CycleBasis basis = io::basis_from_json(io::read_json(basis_file));
  if (!basis_matches(basis, config)) {
    throw Error(ErrorCode::kConfig, "design artifacts do not match the configured alphabet/memory");
  }
  const DesignWeights weights = io::weights_from_json(io::read_json(design_file));
  const StationaryDistribution pi = assemble_stationary(weights, basis);
  const TransitionMatrix a = build_transition_matrix(weights, basis);
  Signal signal = generate_sequence(basis.graph, a, pi, length, seed, config.chain_burn_in);

  io::write_file(out_file, io::signal_csv(signal));
  const fs::path manifest_path = fs::path(out_file.string() + ".manifest.json");
  const json manifest{{"format", "manifest"},
                      {"version", io::kFormatVersion},
                      {"runs",
                       {{"synthesize",
                         {{"config_hash", io::content_hash(config.to_json().dump())},
                          {"seed", seed},
                          {"length", length},
                          {"design_hash", io::content_hash(io::read_file(design_file))},
                          {"artifacts",
                           json::array({{{"file", out_file.filename().string()},
                                         {"format_version", io::kFormatVersion},
                                         {"hash", io::content_hash(io::read_file(out_file))}}})}}}}}};
  io::write_json(manifest_path, manifest);
  return SynthesisReport{std::move(signal), out_file};
}

EvaluationReport run_evaluate(const RunConfig& config, const fs::path& signal_file,
                              const fs::path& out_dir) {
  std::ifstream in(signal_file);
  if (!in) throw Error(ErrorCode::kConfig, "cannot read signal file " + signal_file.string());
  const Signal signal = io::parse_signal_csv(in);
  InfoMatrix matrix = sampled_info_matrix(config.model, signal);

  const bool singular = is_singular(matrix.matrix());
  const double log_det = criterion_value(matrix.matrix(), Criterion::kD);
  std::optional<double> trace_inverse;
  if (!singular) trace_inverse = -criterion_value(matrix.matrix(), Criterion::kA);

  json doc{{"format", "evaluation"},
           {"version", io::kFormatVersion},
           {"signal_length", signal.size()},
           {"info", io::info_matrix_to_json(matrix)},
           {"singular", singular}};
  if (singular) {
    doc["logdet"] = nullptr;
    doc["det"] = 0.0;
    doc["trace_inverse"] = nullptr;
  } else {
    doc["logdet"] = log_det;
    doc["det"] = std::exp(log_det);
    doc["trace_inverse"] = *trace_inverse;
  }
  fs::create_directories(out_dir);
  const fs::path file = out_dir / kEvaluationFile;
  io::write_json(file, doc);
  update_manifest(out_dir, "evaluate", config, config.seed, {file});
  return EvaluationReport{std::move(matrix), log_det, trace_inverse, singular};
}

}  // namespace sidesign
