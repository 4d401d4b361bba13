#include "serialization.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qnet/errors.hpp"

#ifndef QNET_DEFAULT_GOLDEN_DIR
#define QNET_DEFAULT_GOLDEN_DIR "tests/data/golden"
#endif

namespace qnet::cli {

std::string format_number(double x) {
  if (x == 0.0 || std::abs(x) < 1e-300) x = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  std::string s = buf;
  if (s == "-0") s = "0";
  return s;
}

std::optional<std::string> nearest_rational(double x, int max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  for (int q = 1; q <= max_den; ++q) {
    const double p = std::round(x * q);
    if (std::abs(x - p / q) < tol) {
      if (q == 1) return format_number(p);
      return format_number(p) + "/" + std::to_string(q);
    }
  }
  return std::nullopt;
}

QubitState canonical_phase(const QubitState& s) {
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (std::abs(s[i]) >= 1e-12) {
      QubitState out = s;
      out *= std::conj(s[i]) / std::abs(s[i]);
      return out;
    }
  }
  return s;
}

namespace {

double clean(double v) { return std::abs(v) < 1e-12 ? 0.0 : v; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_probability(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return std::stod(text);
  return std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1));
}

}  // namespace

std::string format_state(const QubitState& s) {
  const QubitState c = canonical_phase(s);
  std::string out;
  for (std::size_t i = 0; i < c.dim(); ++i) {
    if (std::abs(c[i]) < 1e-12) continue;
    if (!out.empty()) out += ';';
    out += c.bits(i) + ':' + format_number(clean(c[i].real())) + ':' + format_number(clean(c[i].imag()));
  }
  return out;
}

QubitState parse_state(const std::string& cell) {
  std::map<std::string, cplx> amps;
  std::stringstream ss(cell);
  std::string item;
  int n = -1;
  while (std::getline(ss, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto a = item.find(':');
    const auto b = item.find(':', a + 1);
    if (a == std::string::npos || b == std::string::npos) throw RangeError("malformed state entry '" + item + "'");
    const std::string bits = item.substr(0, a);
    if (n >= 0 && static_cast<int>(bits.size()) != n) throw RangeError("inconsistent bitstring length in state");
    n = static_cast<int>(bits.size());
    amps[bits] += cplx(std::stod(item.substr(a + 1, b - a - 1)), std::stod(item.substr(b + 1)));
  }
  if (n < 0) throw RangeError("empty state cell");
  return QubitState::from_map(n, amps);
}

nlohmann::json state_json(const QubitState& s) {
  nlohmann::json j = nlohmann::json::object();
  const QubitState c = canonical_phase(s);
  for (const auto& [bits, a] : c.to_map()) j[bits] = {clean(a.real()), clean(a.imag())};
  return j;
}

nlohmann::json matrix_json(const MultiportMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < m.dim(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < m.dim(); ++c) row.push_back({clean(m.entries()(r, c).real()), clean(m.entries()(r, c).imag())});
    rows.push_back(row);
  }
  return rows;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_field(fields[i]);
  }
  out << "\r\n";
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && in.peek() == '\n') in.get(c);
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string state_class(const QubitState& s) {
  if (s.n_qubits() == 3) return to_string(classify_three_qubit(s));
  if (is_fully_product(s)) return "product";
  if (is_genuinely_entangled(s)) return "entangled";
  return "partially-entangled";
}

std::vector<GoldenRow> load_golden_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot read golden table " + path);
  auto csv = read_csv(in);
  std::vector<GoldenRow> rows;
  for (std::size_t i = 1; i < csv.size(); ++i) {
    if (csv[i].size() < 3) continue;
    rows.push_back({trim(csv[i][0]), parse_state(csv[i][1]), parse_probability(trim(csv[i][2]))});
  }
  return rows;
}

std::vector<std::string> load_golden_patterns(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot read golden pattern list " + path);
  auto csv = read_csv(in);
  std::vector<std::string> out;
  for (std::size_t i = 1; i < csv.size(); ++i)
    if (!csv[i].empty() && !trim(csv[i][0]).empty()) out.push_back(pattern_label(parse_pattern(csv[i][0])));
  return out;
}

std::vector<std::string> diff_golden(const std::vector<ProjectionRow>& rows,
                                     const std::vector<DetectionPattern>& suppressed,
                                     const std::vector<GoldenRow>& golden_rows,
                                     const std::vector<std::string>& golden_suppressed) {
  std::vector<std::string> diffs;
  std::map<std::string, const ProjectionRow*> by_label;
  for (const auto& r : rows) by_label[pattern_label(r.pattern)] = &r;

  std::set<std::string> golden_labels;
  for (const auto& g : golden_rows) {
    const std::string label = pattern_label(parse_pattern(g.pattern));
    golden_labels.insert(label);
    auto it = by_label.find(label);
    if (it == by_label.end()) {
      diffs.push_back("missing row: " + label);
      continue;
    }
    const ProjectionRow& r = *it->second;
    if (std::abs(r.probability - g.probability) > 1e-9)
      diffs.push_back("probability " + label + ": got " + format_number(r.probability) + ", expected " +
                      format_number(g.probability));
    if (g.state.n_qubits() != r.state.n_qubits()) {
      diffs.push_back("state " + label + ": qubit count differs");
    } else {
      const double f = fidelity(g.state.normalized(), r.state);
      if (f < 1.0 - 1e-9) diffs.push_back("state " + label + ": fidelity " + format_number(f));
    }
  }
  for (const auto& [label, r] : by_label)
    if (!golden_labels.contains(label)) diffs.push_back("unexpected row: " + label);

  std::set<std::string> got, want(golden_suppressed.begin(), golden_suppressed.end());
  for (const auto& p : suppressed) got.insert(pattern_label(p));
  for (const auto& p : want)
    if (!got.contains(p)) diffs.push_back("not suppressed: " + p);
  for (const auto& p : got)
    if (!want.contains(p)) diffs.push_back("unexpectedly suppressed: " + p);
  return diffs;
}

std::string golden_dir() {
  if (const char* env = std::getenv("QNET_GOLDEN_DIR"); env && *env) return env;
  return QNET_DEFAULT_GOLDEN_DIR;
}

}  // namespace qnet::cli
