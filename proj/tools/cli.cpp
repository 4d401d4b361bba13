#include "cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qnet/qnet.hpp"
#include "serialization.hpp"

namespace qnet::cli {

namespace {

using nlohmann::json;

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// JSON numbers carry the same 12 significant digits as the CSV text.
double num(double x) { return std::stod(format_number(x)); }

void emit(const std::string& content, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoFailure("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw IoFailure("write to '" + path + "' failed");
}

void require_unit(double v, const std::string& flag) {
  if (!(v >= 0.0 && v <= 1.0)) throw UsageError(flag + " must lie in [0, 1], got " + format_number(v));
}

std::string rational_or_empty(double x) { return nearest_rational(x).value_or(""); }

// "a:b" (50 points), "a:b:count" or "x,y,z".
std::vector<double> parse_grid(const std::string& spec, const std::string& flag) {
  std::vector<double> out;
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::logic_error&) {
      throw UsageError(flag + ": '" + s + "' is not a number");
    }
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() < 2 || parts.size() > 3) throw UsageError(flag + ": expected start:stop[:count]");
    const double a = number(parts[0]), b = number(parts[1]);
    const double count = parts.size() == 3 ? number(parts[2]) : 50.0;
    if (count < 1 || count != std::floor(count)) throw UsageError(flag + ": count must be a positive integer");
    const int n = static_cast<int>(count);
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  } else {
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');)
      if (!p.empty()) out.push_back(number(p));
  }
  if (out.empty()) throw UsageError(flag + ": empty grid");
  return out;
}

// "2", "1..3" or "1,3".
std::vector<int> parse_int_list(const std::string& spec, const std::string& flag) {
  std::vector<int> out;
  auto integer = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::logic_error&) {
      throw UsageError(flag + ": '" + s + "' is not an integer");
    }
  };
  if (const auto dots = spec.find(".."); dots != std::string::npos) {
    const int a = integer(spec.substr(0, dots)), b = integer(spec.substr(dots + 2));
    for (int v = a; v <= b; ++v) out.push_back(v);
  } else {
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');)
      if (!p.empty()) out.push_back(integer(p));
  }
  if (out.empty()) throw UsageError(flag + ": empty list");
  return out;
}

// ---------------------------------------------------------------------------
// multiport

struct MultiportArgs {
  std::string kind;
  int d = 0;
  bool verify = false;
  std::string format = "json";
  std::string out;
};

int cmd_multiport(const MultiportArgs& a, std::ostream& out) {
  MultiportMatrix U;
  if (a.kind == "bs") U = beam_splitter();
  else if (a.kind == "tritter") U = tritter();
  else if (a.kind == "quarter") U = quarter();
  else {
    if (a.d == 0) throw UsageError("sym2d requires --d");
    U = symmetric_multiport(a.d);
  }
  const MultiportMatrix Ui = inverse(U);
  std::ostringstream s;
  if (a.format == "json") {
    json j;
    j["label"] = U.label();
    j["dim"] = U.dim();
    j["matrix"] = matrix_json(U);
    j["inverse"] = matrix_json(Ui);
    if (a.verify) {
      j["unitarity_residual"] = unitarity_residual(U.entries());
      j["symmetry_residual"] = symmetry_residual(U.entries());
    }
    s << j.dump(2) << "\n";
  } else {
    write_csv_row(s, {"matrix", "row", "col", "re", "im"});
    for (const MultiportMatrix* m : std::array<const MultiportMatrix*, 2>{&U, &Ui})
      for (int r = 1; r <= m->dim(); ++r)
        for (int c = 1; c <= m->dim(); ++c)
          write_csv_row(s, {m->label(), std::to_string(r), std::to_string(c), format_number(m->at(r, c).real()),
                            format_number(m->at(r, c).imag())});
    if (a.verify) {
      write_csv_row(s, {"unitarity_residual", "", "", format_number(unitarity_residual(U.entries())), "0"});
      write_csv_row(s, {"symmetry_residual", "", "", format_number(symmetry_residual(U.entries())), "0"});
    }
  }
  emit(s.str(), a.out, out);
  return kOk;
}

// ---------------------------------------------------------------------------
// swap-table

struct SwapArgs {
  int n = 4;
  int max_per_detector = 0;
  std::string format = "csv";
  std::string out;
  bool golden = false;
};

MultiportMatrix swap_interferometer(int n) {
  switch (n) {
    case 2: return beam_splitter();
    case 3: return tritter();
    case 4: return quarter();
    default: throw UsageError("--n must be 2, 3 or 4");
  }
}

int cmd_swap_table(const SwapArgs& a, std::ostream& out, std::ostream& err) {
  const MultiportMatrix U = swap_interferometer(a.n);
  const HybridState input = prepare_swap_input(a.n);
  const auto rows = run_gbsa(input, U);
  const auto suppressed = suppressed_patterns(input, U, a.n);

  HeraldRule distinct{a.n, true};
  HeraldRule resolved{a.n, false};
  const double p_threshold = aggregate_heralding(rows, DetectorModel::Threshold, distinct);
  const double p_resolved = aggregate_heralding(rows, DetectorModel::NumberResolved, resolved);

  auto shown = [&](const ProjectionRow& r) {
    return a.max_per_detector <= 0 || r.pattern.occupations.max_count() <= a.max_per_detector;
  };

  std::ostringstream s;
  if (a.format == "json") {
    json j;
    j["n"] = a.n;
    j["interferometer"] = U.label();
    j["rows"] = json::array();
    for (const auto& r : rows) {
      if (!shown(r)) continue;
      j["rows"].push_back({{"pattern", pattern_label(r.pattern)},
                           {"state", state_json(r.state)},
                           {"probability", num(r.probability)},
                           {"rational", rational_or_empty(r.probability)},
                           {"class", state_class(r.state)}});
    }
    j["suppressed"] = json::array();
    for (const auto& p : suppressed) j["suppressed"].push_back(pattern_label(p));
    j["aggregates"] = {{"threshold_distinct", num(p_threshold)}, {"number_resolved", num(p_resolved)}};
    s << j.dump(2) << "\n";
  } else {
    write_csv_row(s, {"kind", "pattern", "state", "probability", "rational", "class"});
    for (const auto& r : rows)
      if (shown(r))
        write_csv_row(s, {"row", pattern_label(r.pattern), format_state(r.state), format_number(r.probability),
                          rational_or_empty(r.probability), state_class(r.state)});
    for (const auto& p : suppressed) write_csv_row(s, {"suppressed", pattern_label(p), "", "0", "0", ""});
    write_csv_row(s, {"aggregate", "threshold-distinct", "", format_number(p_threshold), rational_or_empty(p_threshold),
                      ""});
    write_csv_row(s, {"aggregate", "number-resolved", "", format_number(p_resolved), rational_or_empty(p_resolved),
                      ""});
  }
  emit(s.str(), a.out, out);

  if (!a.golden) return kOk;
  const std::string name = a.n == 4 ? "quarter" : a.n == 3 ? "tritter" : "";
  if (name.empty()) throw UsageError("no golden table ships for --n 2");
  std::vector<GoldenRow> g_rows;
  std::vector<std::string> g_supp;
  try {
    g_rows = load_golden_table(golden_dir() + "/" + name + "_table.csv");
    g_supp = load_golden_patterns(golden_dir() + "/" + name + "_suppressed.csv");
  } catch (const std::ios_base::failure& e) {
    throw IoFailure(e.what());
  }
  const auto diffs = diff_golden(rows, suppressed, g_rows, g_supp);
  if (diffs.empty()) {
    err << "golden " << name << ": " << g_rows.size() << " rows and " << g_supp.size() << " suppressed patterns match\n";
    return kOk;
  }
  err << "golden " << name << ": " << diffs.size() << " mismatches\n";
  for (const auto& d : diffs) err << "  " << d << "\n";
  return kGoldenMismatch;
}

// ---------------------------------------------------------------------------
// wpe

struct WpeArgs {
  int n = 0;
  std::string m;
  std::optional<double> p;
  std::string sweep;
  double eta = 1.0;
  bool simulate = false;
  std::string format = "csv";
  std::string out;
};

int cmd_wpe(const WpeArgs& a, std::ostream& out, std::ostream& err) {
  const auto ms = parse_int_list(a.m, "--m");
  std::vector<double> grid;
  if (a.p) grid = {*a.p};
  else if (!a.sweep.empty()) grid = parse_grid(a.sweep, "--sweep");
  else throw UsageError("one of --p or --sweep is required");
  require_unit(a.eta, "--eta");
  for (double p : grid)
    if (!(p > 0.0 && p < 1.0)) throw UsageError("excitation probability must lie in (0, 1), got " + format_number(p));
  for (int m : ms)
    if (m < 1 || m > a.n) throw UsageError("--m values must lie in [1, --n]");

  const auto rows = wpe_fidelity_sweep(a.n, ms, grid, a.eta);
  std::optional<MultiportMatrix> eraser;
  if (a.simulate) eraser = default_eraser(a.n);

  double max_dev = 0.0;
  std::vector<std::vector<std::string>> table;
  json jrows = json::array();
  for (const auto& r : rows) {
    std::vector<std::string> cells = {std::to_string(a.n), std::to_string(r.m), format_number(r.p),
                                      format_number(r.fidelity), format_number(r.rate)};
    json jr = {{"n", a.n}, {"m", r.m}, {"p", num(r.p)}, {"fidelity", num(r.fidelity)}, {"rate", num(r.rate)}};
    if (eraser) {
      const WpeSummary sim = simulate_wpe(r.m, a.n, r.p, *eraser, DetectorModel::Threshold);
      const double sim_rate = std::pow(a.eta, r.m) * sim.herald_probability;
      const double dev = std::max(std::abs(sim.fidelity - r.fidelity), std::abs(sim_rate - r.rate));
      max_dev = std::max(max_dev, dev);
      cells.push_back(format_number(sim.fidelity));
      cells.push_back(format_number(sim_rate));
      cells.push_back(format_number(dev));
      jr["sim_fidelity"] = num(sim.fidelity);
      jr["sim_rate"] = num(sim_rate);
      jr["deviation"] = dev;
    }
    table.push_back(std::move(cells));
    jrows.push_back(std::move(jr));
  }

  std::ostringstream s;
  if (a.format == "json") {
    json j = {{"eta_det", num(a.eta)}, {"rows", jrows}};
    if (eraser) j["max_deviation"] = max_dev;
    s << j.dump(2) << "\n";
  } else {
    std::vector<std::string> header = {"n", "m", "p", "fidelity", "rate"};
    if (eraser) header.insert(header.end(), {"sim_fidelity", "sim_rate", "deviation"});
    write_csv_row(s, header);
    for (const auto& c : table) write_csv_row(s, c);
  }
  emit(s.str(), a.out, out);
  if (eraser) err << "max deviation analytic vs simulated: " << format_number(max_dev) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// compare

struct CompareArgs {
  std::string grid;
  double rt = 1.0;
  std::string format = "csv";
  std::string out;
};

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  const auto grid = parse_grid(a.grid, "--eta-grid");
  for (double e : grid) require_unit(e, "--eta-grid");
  if (!(a.rt >= 0.0)) throw UsageError("--rt must be >= 0");

  const double crossover = compare_4node(1.0, a.rt).crossover_eta;
  std::ostringstream s;
  if (a.format == "json") {
    json j = {{"r_t", num(a.rt)}, {"rows", json::array()}, {"crossover_eta", num(crossover)}};
    for (double e : grid) {
      const auto c = compare_4node(e, a.rt);
      j["rows"].push_back({{"eta", num(e)},
                           {"r_bell", num(c.r_bell)},
                           {"r_bell_chain", num(c.r_bell_chain)},
                           {"r_quad", num(c.r_quad)}});
    }
    s << j.dump(2) << "\n";
  } else {
    write_csv_row(s, {"kind", "eta", "r_bell", "r_bell_chain", "r_quad"});
    for (double e : grid) {
      const auto c = compare_4node(e, a.rt);
      write_csv_row(s, {"row", format_number(e), format_number(c.r_bell), format_number(c.r_bell_chain),
                        format_number(c.r_quad)});
    }
    const auto c = compare_4node(crossover, a.rt);
    write_csv_row(s, {"crossover", format_number(crossover), format_number(c.r_bell), format_number(c.r_bell_chain),
                      format_number(c.r_quad)});
  }
  emit(s.str(), a.out, out);
  return kOk;
}

// ---------------------------------------------------------------------------
// analytics

enum class ParamKind { Unit, NonNegative, Integer, Real };

struct Param {
  Param(std::string n, ParamKind k = ParamKind::Unit, std::optional<double> f = std::nullopt)
      : name(std::move(n)), kind(k), fallback(f) {}
  std::string name;
  ParamKind kind;
  std::optional<double> fallback;
};

using Values = std::map<std::string, double>;
using Outputs = std::vector<std::pair<std::string, FidelityResult>>;

struct Formula {
  std::string name;
  std::string expression;
  std::vector<Param> params;
  std::function<Outputs(const Values&)> eval;
};

int as_int(const Values& v, const std::string& k) { return static_cast<int>(v.at(k)); }

Outputs one(double x, bool prop = false) { return {{"value", {x, prop}}}; }
Outputs one(FidelityResult r) { return {{"value", r}}; }

const std::vector<Formula>& registry() {
  using K = ParamKind;
  static const std::vector<Formula> formulas = {
      {"st-fidelity-2", "F = (1 + sqrt(eta))^2 / 4", {{"eta"}},
       [](const Values& v) { return one(st_fidelity_2(v.at("eta"))); }},
      {"st-rate-2", "R ~ eta_p eta_out eta_net eta_ent eta_det",
       {{"eta-p", K::Unit, 1.0}, {"eta-out", K::Unit, 1.0}, {"eta-net", K::Unit, 1.0}, {"eta-ent", K::Unit, 1.0},
        {"eta-det", K::Unit, 1.0}},
       [](const Values& v) {
         SchemeParams p;
         p.eta_p = v.at("eta-p");
         p.eta_out = v.at("eta-out");
         p.eta_net = v.at("eta-net");
         p.eta_ent = v.at("eta-ent");
         p.eta_det = v.at("eta-det");
         return one(st_rate_2(p));
       }},
      {"st-n-node", "W target; F ~ eta_a0an; R ~ eta_p eta_out eta_net eta_a0an eta_ent eta_det",
       {{"n", K::Integer}, {"eta-a0an", K::Unit, 1.0}, {"eta-p", K::Unit, 1.0}, {"eta-out", K::Unit, 1.0},
        {"eta-net", K::Unit, 1.0}, {"eta-ent", K::Unit, 1.0}, {"eta-det", K::Unit, 1.0}},
       [](const Values& v) {
         SchemeParams p;
         p.eta_a0an = v.at("eta-a0an");
         p.eta_p = v.at("eta-p");
         p.eta_out = v.at("eta-out");
         p.eta_net = v.at("eta-net");
         p.eta_ent = v.at("eta-ent");
         p.eta_det = v.at("eta-det");
         const auto r = st_n_node(p, as_int(v, "n"));
         return Outputs{{"fidelity", r.fidelity}, {"rate", r.rate}};
       }},
      {"itinerant-fidelity-2", "F = 2 f_pa - 1", {{"f-pa"}},
       [](const Values& v) { return one(itinerant_fidelity_2(v.at("f-pa"))); }},
      {"itinerant-success", "P ~ eta_t^(N-1) eta_c^N eta_det",
       {{"n", K::Integer}, {"eta-t", K::Unit, 1.0}, {"eta-c", K::Unit, 1.0}, {"eta-det", K::Unit, 1.0}},
       [](const Values& v) {
         return one(itinerant_success(as_int(v, "n"), v.at("eta-t"), v.at("eta-c"), v.at("eta-det")));
       }},
      {"itinerant-ghz-sim", "density-matrix GHZ fidelity, depolarising gates calibrated to 2 f_pa - 1",
       {{"n", K::Integer}, {"f-pa"}},
       [](const Values& v) { return one(itinerant_ghz_fidelity_sim(as_int(v, "n"), v.at("f-pa"))); }},
      {"em-success", "P ~ p_source (eta_abs eta_det / 2)^N  (p_epr for N=2, p_ghz otherwise)",
       {{"n", K::Integer}, {"eta-abs", K::Unit, 1.0}, {"eta-det", K::Unit, 1.0}, {"p-epr", K::Unit, 1.0},
        {"p-ghz", K::Unit, 1.0}},
       [](const Values& v) {
         SchemeParams p;
         p.eta_abs = v.at("eta-abs");
         p.eta_det = v.at("eta-det");
         p.p_epr = v.at("p-epr");
         p.p_ghz_n = v.at("p-ghz");
         return one(em_success(as_int(v, "n"), p));
       }},
      {"em-false-herald", "sum_{n=0}^{N-1} C(N,n) p_real^n p_dark^(N-n)",
       {{"n", K::Integer}, {"p-real"}, {"p-dark"}},
       [](const Values& v) { return one(em_false_herald(as_int(v, "n"), v.at("p-real"), v.at("p-dark"))); }},
      {"em-fidelity", "F = (f_ph p_em + 2^-N p_false) / (p_em + p_false)",
       {{"n", K::Integer}, {"f-ph"}, {"p-em"}, {"p-false"}},
       [](const Values& v) {
         return one(em_fidelity(as_int(v, "n"), v.at("f-ph"), v.at("p-em"), v.at("p-false")));
       }},
      {"wpe-fidelity", "F = C(N,m) p^m (1-p)^(N-m) / sum_{n>=m} C(N,n) p^n (1-p)^(N-n)",
       {{"m", K::Integer}, {"n", K::Integer}, {"p"}},
       [](const Values& v) { return one(wpe_fidelity(as_int(v, "m"), as_int(v, "n"), v.at("p"))); }},
      {"wpe-rate", "R ~ eta^m sum_{n>=m} C(N,n) p^n (1-p)^(N-n)",
       {{"m", K::Integer}, {"n", K::Integer}, {"p"}, {"eta", K::Unit, 1.0}},
       [](const Values& v) { return one(wpe_rate(as_int(v, "m"), as_int(v, "n"), v.at("p"), v.at("eta"))); }},
      {"swap-rate", "R ~ p_bsa eta^N", {{"n", K::Integer}, {"p-bsa"}, {"eta", K::Unit, 1.0}},
       [](const Values& v) { return one(swap_rate(as_int(v, "n"), v.at("p-bsa"), v.at("eta"))); }},
      {"compare-4node", "R_bell = eta^2 r_T / 2; R_quad = 7/32 eta^4 r_T; crossover 2/sqrt(7)",
       {{"eta"}, {"rt", K::NonNegative, 1.0}},
       [](const Values& v) {
         const auto c = compare_4node(v.at("eta"), v.at("rt"));
         return Outputs{{"r_bell", {c.r_bell, false}},
                        {"r_bell_chain", {c.r_bell_chain, false}},
                        {"r_quad", {c.r_quad, false}},
                        {"crossover_eta", {c.crossover_eta, false}}};
       }},
      {"split-polarization-phase", "phi = 2 pi [(beta_h - beta_v) - (alpha_h - alpha_v)] / lambda, in (-pi, pi]",
       {{"alpha-h", K::Real, 0.0}, {"alpha-v", K::Real, 0.0}, {"beta-h", K::Real, 0.0}, {"beta-v", K::Real, 0.0},
        {"lambda", K::Real}},
       [](const Values& v) {
         return one(split_polarization_phase(v.at("alpha-h"), v.at("alpha-v"), v.at("beta-h"), v.at("beta-v"),
                                             v.at("lambda")));
       }},
  };
  return formulas;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    prev.swap(cur);
  }
  return prev[b.size()];
}

Values parse_params(const Formula& f, const std::vector<std::string>& extras, std::optional<double>& rt) {
  std::map<std::string, std::string> given;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    std::string key = extras[i];
    if (key.rfind("--", 0) != 0) throw UsageError("unexpected argument '" + key + "'");
    key = key.substr(2);
    std::string value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= extras.size()) throw UsageError("--" + key + " needs a value");
      value = extras[++i];
    }
    given[key] = value;
  }

  auto to_double = [](const std::string& key, const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::logic_error&) {
      throw UsageError("--" + key + ": '" + s + "' is not a number");
    }
  };

  Values v;
  for (const auto& p : f.params) {
    auto it = given.find(p.name);
    double x;
    if (it != given.end()) {
      x = to_double(p.name, it->second);
      given.erase(it);
    } else if (p.fallback) {
      x = *p.fallback;
    } else {
      throw UsageError(f.name + " requires --" + p.name);
    }
    switch (p.kind) {
      case ParamKind::Unit: require_unit(x, "--" + p.name); break;
      case ParamKind::NonNegative:
        if (!(x >= 0.0)) throw UsageError("--" + p.name + " must be >= 0");
        break;
      case ParamKind::Integer:
        if (x != std::floor(x) || std::abs(x) > 1e6) throw UsageError("--" + p.name + " must be an integer");
        break;
      case ParamKind::Real:
        if (!std::isfinite(x)) throw UsageError("--" + p.name + " must be finite");
        break;
    }
    v[p.name] = x;
  }
  if (auto it = given.find("rt"); it != given.end()) {
    rt = to_double("rt", it->second);
    if (!(*rt >= 0.0)) throw UsageError("--rt must be >= 0");
    given.erase(it);
  }
  if (!given.empty()) throw UsageError(f.name + " does not take --" + given.begin()->first);
  return v;
}

int cmd_analytics(const std::string& name, bool list, const std::vector<std::string>& extras, std::ostream& out,
                  std::ostream& err) {
  if (list) {
    for (const auto& f : registry()) {
      std::string params;
      for (const auto& p : f.params) params += (params.empty() ? "--" : " --") + p.name;
      out << f.name << "\n    " << f.expression << "\n    params: " << params << "\n";
    }
    return kOk;
  }
  if (name.empty()) throw UsageError("analytics needs a formula name (see --list)");
  const auto& reg = registry();
  const auto it = std::find_if(reg.begin(), reg.end(), [&](const Formula& f) { return f.name == name; });
  if (it == reg.end()) {
    err << "unknown formula '" << name << "'";
    std::vector<std::string> near;
    for (const auto& f : reg)
      if (edit_distance(f.name, name) <= 3 || f.name.find(name) != std::string::npos ||
          name.find(f.name) != std::string::npos)
        near.push_back(f.name);
    if (!near.empty()) {
      err << "; did you mean:";
      for (const auto& n : near) err << " " << n;
    }
    err << "\n";
    return kUsage;
  }

  std::optional<double> rt;
  const Values v = parse_params(*it, extras, rt);
  const Outputs results = it->eval(v);
  for (const auto& [label, r] : results) {
    const std::string key = label == "value" ? name : name + "." + label;
    out << key << " = " << format_number(r.value);
    if (r.is_proportional) out << " (proportional)";
    out << "\n";
    if (r.is_proportional && rt) out << key << ".per_second = " << format_number(r.value * *rt) << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multipartite entanglement heralding toolkit", "qnet"};
  app.require_subcommand(1);

  const std::vector<std::string> formats = {"csv", "json"};

  MultiportArgs mp;
  auto* multiport = app.add_subcommand("multiport", "Print an interferometer matrix and its inverse");
  multiport->add_option("kind", mp.kind, "bs | tritter | quarter | sym2d")
      ->required()
      ->check(CLI::IsMember({"bs", "tritter", "quarter", "sym2d"}));
  multiport->add_option("--d", mp.d, "Butterfly depth for sym2d (2^d ports)");
  multiport->add_flag("--verify", mp.verify, "Also print unitarity and symmetry residuals");
  multiport->add_option("--format", mp.format)->check(CLI::IsMember(formats));
  multiport->add_option("--out", mp.out, "Output file (default stdout)");

  SwapArgs sw;
  auto* swap = app.add_subcommand("swap-table", "Detection-pattern table for N-node entanglement swapping");
  swap->add_option("--n", sw.n, "Number of Bell pairs: 2 (beam splitter), 3 (tritter), 4 (quarter)")->required();
  swap->add_option("--max-clicks-per-detector", sw.max_per_detector, "Only list rows up to this occupation");
  swap->add_option("--format", sw.format)->check(CLI::IsMember(formats));
  swap->add_option("--out", sw.out, "Output file (default stdout)");
  swap->add_flag("--golden", sw.golden, "Diff against the shipped golden tables");

  WpeArgs wp;
  auto* wpe = app.add_subcommand("wpe", "Which-path-erasing fidelity and rate");
  wpe->add_option("--n", wp.n, "Number of atoms")->required();
  wpe->add_option("--m", wp.m, "Excitations: 2, 1..3 or 1,3")->required();
  auto* p_opt = wpe->add_option("--p", wp.p, "Excitation probability");
  wpe->add_option("--sweep", wp.sweep, "start:stop[:count] grid of p")->excludes(p_opt);
  wpe->add_option("--eta", wp.eta, "Detector efficiency");
  wpe->add_flag("--simulate", wp.simulate, "Cross-check against the interference simulation");
  wpe->add_option("--format", wp.format)->check(CLI::IsMember(formats));
  wpe->add_option("--out", wp.out, "Output file (default stdout)");

  CompareArgs cp;
  auto* compare = app.add_subcommand("compare", "Bell-chain vs quarter rates for four nodes");
  compare->add_option("--eta-grid", cp.grid, "start:stop[:count] or comma list")->required();
  compare->add_option("--rt", cp.rt, "Trial rate in 1/s");
  compare->add_option("--format", cp.format)->check(CLI::IsMember(formats));
  compare->add_option("--out", cp.out, "Output file (default stdout)");

  std::string formula;
  bool list = false;
  auto* analytics = app.add_subcommand("analytics", "Evaluate a closed-form formula by name");
  analytics->add_option("name", formula, "Formula name");
  analytics->add_flag("--list", list, "List formulas");
  analytics->allow_extras();
  analytics->prefix_command();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (*multiport) return cmd_multiport(mp, out);
    if (*swap) return cmd_swap_table(sw, out, err);
    if (*wpe) return cmd_wpe(wp, out, err);
    if (*compare) return cmd_compare(cp, out);
    if (*analytics) return cmd_analytics(formula, list, analytics->remaining(), out, err);
  } catch (const IoFailure& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const CapacityError& e) {
    err << "error: capacity exceeded: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace qnet::cli
