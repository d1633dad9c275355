// sidesign: stationary input design on a finite alphabet.
//
//   sidesign enumerate-cycles --config F [--out D]
//   sidesign design --config F --out D
//   sidesign synthesize --config F --design D --length N --seed S --out F2
//   sidesign evaluate --config F --signal F2 --out D
//
// Exit codes: 0 success, 2 config error, 3 resource cap, 4 numerical error,
// 5 not converged.

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sidesign/error.hpp"
#include "sidesign/pipeline.hpp"

namespace fs = std::filesystem;
using namespace sidesign;

namespace {

void print_design(const DesignReport& report) {
  const DesignResult& r = report.result;
  std::cout << "cycles: " << report.basis.size() << (report.cache_hit ? " (cached)" : "") << '\n';
  std::cout << std::setprecision(6);
  if (r.criterion == Criterion::kD) {
    std::cout << "det(I_app) = " << r.reported() << "  (logdet = " << r.objective << ")\n";
  } else {
    std::cout << "tr(I_app^-1) = " << r.reported() << '\n';
  }
  std::cout << "gap = " << std::scientific << r.gap << std::defaultfloat
            << ", iterations = " << r.iterations << (r.converged ? "" : " (not converged)") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Amplitude-constrained input design via prime cycles of de Bruijn graphs"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  std::string design_dir;
  std::string signal_path;
  std::size_t length = 0;
  std::uint64_t seed = 0;

  auto* enumerate = app.add_subcommand("enumerate-cycles", "Enumerate the prime-cycle basis");
  enumerate->add_option("--config", config_path, "Config JSON")->required()->check(CLI::ExistingFile);
  enumerate->add_option("--out", out, "Output directory or .json file");

  auto* design = app.add_subcommand("design", "Optimize the stationary input distribution");
  design->add_option("--config", config_path, "Config JSON")->required()->check(CLI::ExistingFile);
  design->add_option("--out", out, "Output directory")->required();

  auto* synthesize = app.add_subcommand("synthesize", "Generate an input realization");
  synthesize->add_option("--config", config_path, "Config JSON")->required()->check(CLI::ExistingFile);
  synthesize->add_option("--design", design_dir, "Design output directory")->required();
  synthesize->add_option("--length", length, "Number of samples")->required()->check(CLI::PositiveNumber);
  synthesize->add_option("--seed", seed, "Random seed")->required();
  synthesize->add_option("--out", out, "Signal CSV file")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Sampled information matrix of a realization");
  evaluate->add_option("--config", config_path, "Config JSON")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--signal", signal_path, "Signal CSV file")->required();
  evaluate->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const RunConfig config = load_config(config_path);

    if (enumerate->parsed()) {
      fs::path target = out.empty() ? (config.cycle_cache ? *config.cycle_cache : config.output_dir)
                                    : fs::path(out);
      const EnumerateReport report = run_enumerate(config, target);
      std::cout << "n_V = " << report.cycle_count << '\n'
                << "wall time = " << report.seconds << " s\n"
                << "wrote " << report.basis_file.string() << '\n';
      return 0;
    }
    if (design->parsed()) {
      const DesignReport report = run_design(config, out);
      print_design(report);
      return report.result.converged ? 0 : exit_code(ErrorCode::kNotConverged);
    }
    if (synthesize->parsed()) {
      const SynthesisReport report = run_synthesize(config, design_dir, length, seed, out);
      std::cout << "wrote " << report.signal.size() << " samples to " << report.signal_file.string()
                << " (seed " << seed << ")\n";
      return 0;
    }
    if (evaluate->parsed()) {
      const EvaluationReport report = run_evaluate(config, signal_path, out);
      std::cout << std::setprecision(6);
      if (report.singular) {
        std::cout << "sampled information matrix is singular\n";
      } else {
        std::cout << "det(I) = " << std::exp(report.log_det) << '\n'
                  << "tr(I^-1) = " << *report.trace_inverse << '\n';
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    if (e.code() == ErrorCode::kResourceCap) {
      std::cerr << "note: elementary-cycle enumeration takes O(c^m (c+1)(n_e+1)) time for "
                   "alphabet size c, memory m and n_e elementary cycles\n";
    }
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
