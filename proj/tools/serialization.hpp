#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnet/herald.hpp"
#include "qnet/interferometers.hpp"
#include "qnet/states.hpp"

namespace qnet::cli {

// 12 significant digits, no negative zero.
std::string format_number(double x);

// Smallest-denominator p/q (q <= max_den) within tol of x.
std::optional<std::string> nearest_rational(double x, int max_den = 1024, double tol = 1e-9);

// Global phase fixed so the first non-negligible amplitude is real positive.
QubitState canonical_phase(const QubitState& s);

// "0110:0.707106781187:0;1001:0.707106781187:0"
std::string format_state(const QubitState& s);
QubitState parse_state(const std::string& cell);

nlohmann::json state_json(const QubitState& s);
nlohmann::json matrix_json(const MultiportMatrix& m);

std::string csv_field(const std::string& s);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);
// RFC-4180 reader: handles quoted fields, doubled quotes and CRLF.
std::vector<std::vector<std::string>> read_csv(std::istream& in);

// Class label used in swap tables.
std::string state_class(const QubitState& s);

struct GoldenRow {
  std::string pattern;
  QubitState state;
  double probability = 0.0;
};

// Both throw std::ios_base::failure if the file cannot be read.
std::vector<GoldenRow> load_golden_table(const std::string& path);
std::vector<std::string> load_golden_patterns(const std::string& path);

// Human-readable differences; empty means the tables agree.
std::vector<std::string> diff_golden(const std::vector<ProjectionRow>& rows,
                                     const std::vector<DetectionPattern>& suppressed,
                                     const std::vector<GoldenRow>& golden_rows,
                                     const std::vector<std::string>& golden_suppressed);

// QNET_GOLDEN_DIR if set, else the directory baked in at build time.
std::string golden_dir();

}  // namespace qnet::cli
