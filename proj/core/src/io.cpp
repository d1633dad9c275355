#include "sidesign/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include "sidesign/error.hpp"

namespace sidesign::io {

namespace {

json matrix_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kConfig, "malformed document: " + what);
}

}  // namespace

std::string format_number(double value) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) return std::to_string(value);
  return std::string(buf.data(), end);
}

json basis_to_json(const CycleBasis& basis) {
  const MemoryGraph& g = basis.graph;
  json cycles = json::array();
  for (const Cycle& cycle : basis.cycles) {
    json nodes = json::array();
    for (NodeId node : cycle.nodes) nodes.push_back(g.window(node));
    cycles.push_back(std::move(nodes));
  }
  return json{{"format", "cycle-basis"},
              {"version", kFormatVersion},
              {"alphabet", g.alphabet().values()},
              {"memory", g.memory()},
              {"cycle_count", basis.size()},
              {"cycles", std::move(cycles)}};
}

CycleBasis basis_from_json(const json& doc) {
  try {
    if (doc.value("format", "") != "cycle-basis") malformed("not a cycle-basis document");
    Alphabet alphabet(doc.at("alphabet").get<std::vector<double>>());
    const auto memory = doc.at("memory").get<std::size_t>();
    CycleBasis basis{MemoryGraph(alphabet, memory), {}};
    for (const json& cycle_doc : doc.at("cycles")) {
      Cycle cycle;
      for (const json& node_doc : cycle_doc) {
        const auto values = node_doc.get<std::vector<double>>();
        std::vector<std::size_t> symbols;
        for (double v : values) {
          const std::size_t s = alphabet.find(v);
          if (s == alphabet.size()) malformed("node value outside the alphabet");
          symbols.push_back(s);
        }
        cycle.nodes.push_back(basis.graph.node_of(symbols));
      }
      if (!is_elementary_cycle(basis.graph, cycle)) malformed("entry is not an elementary cycle");
      basis.cycles.push_back(make_cycle({cycle.nodes.begin(), cycle.nodes.end() - 1}));
    }
    return basis;
  } catch (const json::exception& e) {
    malformed(e.what());
  }
}

json info_matrix_to_json(const InfoMatrix& matrix) {
  return json{{"kind", to_string(matrix.kind())},
              {"sample_count", matrix.sample_count()},
              {"matrix", matrix_rows(matrix.matrix())}};
}

json info_matrices_to_json(std::span<const InfoMatrix> matrices) {
  json items = json::array();
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    json item = info_matrix_to_json(matrices[i]);
    item["cycle"] = i;
    items.push_back(std::move(item));
  }
  return json{{"format", "info-matrices"}, {"version", kFormatVersion}, {"matrices", items}};
}

json design_to_json(const DesignResult& result) {
  json doc{{"format", "design"},
           {"version", kFormatVersion},
           {"criterion", to_string(result.criterion)},
           {"weights", std::vector<double>(result.weights.alpha().begin(),
                                           result.weights.alpha().end())},
           {"gap", result.gap},
           {"iterations", result.iterations},
           {"converged", result.converged}};
  if (result.criterion == Criterion::kD) {
    doc["logdet"] = result.objective;
    doc["det"] = result.reported();
  } else {
    doc["trace_inverse"] = result.reported();
  }
  return doc;
}

DesignWeights weights_from_json(const json& doc) {
  try {
    if (doc.value("format", "") != "design") malformed("not a design document");
    const auto w = doc.at("weights").get<std::vector<double>>();
    return DesignWeights(Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size())));
  } catch (const json::exception& e) {
    malformed(e.what());
  }
}

std::string stationary_csv(const MemoryGraph& graph, const StationaryDistribution& pi) {
  std::ostringstream out;
  for (std::size_t k = 1; k <= graph.memory(); ++k) out << 'u' << k << ',';
  out << "probability\n";
  for (std::size_t x = 0; x < graph.node_count(); ++x) {
    for (double v : graph.window(static_cast<NodeId>(x))) out << format_number(v) << ',';
    out << format_number(pi.probabilities[static_cast<Eigen::Index>(x)]) << '\n';
  }
  return out.str();
}

json transition_to_json(const MemoryGraph& graph, const TransitionMatrix& a) {
  json nodes = json::array();
  for (std::size_t x = 0; x < graph.node_count(); ++x) nodes.push_back(graph.window(static_cast<NodeId>(x)));
  json columns = json::array();
  for (Eigen::Index x = 0; x < a.entries.cols(); ++x) {
    columns.push_back(std::vector<double>(a.entries.col(x).begin(), a.entries.col(x).end()));
  }
  return json{{"format", "transition-matrix"},
              {"version", kFormatVersion},
              {"convention", "column-stochastic: columns[x][y] = P(next = y | current = x)"},
              {"nodes", std::move(nodes)},
              {"columns", std::move(columns)}};
}

std::string signal_csv(const Signal& signal) {
  std::string out;
  out.reserve(signal.size() * 4);
  for (double v : signal.samples) {
    out += format_number(v);
    out += '\n';
  }
  return out;
}

Signal parse_signal_csv(std::istream& in) {
  Signal signal;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    double v = 0.0;
    const auto [end, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc() || end != line.data() + line.size() || !std::isfinite(v)) {
      throw Error(ErrorCode::kConfig,
                  "malformed signal file: line " + std::to_string(line_no) + " is not a number");
    }
    signal.samples.push_back(v);
  }
  if (signal.samples.empty()) throw Error(ErrorCode::kConfig, "malformed signal file: no samples");
  return signal;
}

std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfig, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kConfig, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kConfig, "write failed for " + path.string());
}

json read_json(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& doc) {
  write_file(path, doc.dump(2) + "\n");
}

}  // namespace sidesign::io
