#pragma once

// File formats: cycle-basis JSON, information-matrix JSON, design-result JSON,
// stationary-distribution CSV, transition-matrix JSON and single-column signal
// CSV. Numbers are written in shortest round-trip form so that rereading a
// file reproduces the in-memory values exactly.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "sidesign/debruijn.hpp"
#include "sidesign/design.hpp"
#include "sidesign/fisher.hpp"
#include "sidesign/markov.hpp"

namespace sidesign::io {

using nlohmann::json;

inline constexpr int kFormatVersion = 1;

json basis_to_json(const CycleBasis& basis);
/// Throws kConfig when the document is malformed or a cycle is not an
/// elementary cycle of the declared graph.
CycleBasis basis_from_json(const json& doc);

json info_matrices_to_json(std::span<const InfoMatrix> matrices);
json info_matrix_to_json(const InfoMatrix& matrix);

json design_to_json(const DesignResult& result);
/// Reads the weights and criterion back from a design document.
DesignWeights weights_from_json(const json& doc);

/// Header `u_oldest,...,u_newest,probability` (columns u_1..u_m for memory m).
std::string stationary_csv(const MemoryGraph& graph, const StationaryDistribution& pi);

json transition_to_json(const MemoryGraph& graph, const TransitionMatrix& a);

std::string signal_csv(const Signal& signal);
/// One value per line; blank lines are ignored. Throws kConfig on anything else.
Signal parse_signal_csv(std::istream& in);

std::string format_number(double value);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string content_hash(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);
json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& doc);

}  // namespace sidesign::io
