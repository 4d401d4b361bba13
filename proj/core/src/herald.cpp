#include "qnet/herald.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "qnet/errors.hpp"

namespace qnet {

namespace {

struct LabelOrder {
  bool operator()(const ModeCounts::Entry& a, const ModeCounts::Entry& b) const {
    return std::tie(a.first.pol, a.first.port) < std::tie(b.first.pol, b.first.port);
  }
};

void sort_rows(std::vector<ProjectionRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const ProjectionRow& a, const ProjectionRow& b) {
    return pattern_label(a.pattern) < pattern_label(b.pattern);
  });
}

// Amplitudes of the atomic register conditioned on each photon pattern.
std::map<FockState, QubitState> split_by_pattern(const HybridState& s) {
  std::map<FockState, QubitState> out;
  for (const auto& [key, amp] : s.terms()) {
    auto it = out.try_emplace(key.photons, QubitState(s.n_atoms())).first;
    auto& q = it->second;
    q[q.index(key.atoms)] += amp;
  }
  return out;
}

void enumerate_multisets(const std::vector<ModeIndex>& modes, std::size_t start, int remaining, ModeCounts& cur,
                         std::vector<ModeCounts>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < modes.size(); ++i) {
    cur.add(modes[i]);
    enumerate_multisets(modes, i, remaining - 1, cur, out);
    cur.add(modes[i], -1);
  }
}

}  // namespace

std::string pattern_label(const DetectionPattern& p) {
  auto entries = p.occupations.entries();
  std::sort(entries.begin(), entries.end(), LabelOrder{});
  std::string s;
  for (const auto& [mode, k] : entries) {
    if (!s.empty()) s += ' ';
    s += polarization_char(mode.pol);
    s += std::to_string(mode.port);
    if (k > 1) s += '^' + std::to_string(k);
  }
  return s;
}

DetectionPattern parse_pattern(const std::string& label) {
  ModeCounts occ;
  std::istringstream in(label);
  std::string tok;
  while (in >> tok) {
    Polarization pol;
    switch (tok[0]) {
      case 'h': pol = Polarization::H; break;
      case 'v': pol = Polarization::V; break;
      case 'd': pol = Polarization::None; break;
      default: throw RangeError("bad detector token '" + tok + "'");
    }
    const auto caret = tok.find('^');
    try {
      const int port = std::stoi(tok.substr(1, caret == std::string::npos ? std::string::npos : caret - 1));
      const int k = caret == std::string::npos ? 1 : std::stoi(tok.substr(caret + 1));
      if (port < 1 || k < 1) throw RangeError("bad detector token '" + tok + "'");
      occ.add(ModeIndex{port, pol}, k);
    } catch (const std::logic_error&) {
      throw RangeError("bad detector token '" + tok + "'");
    }
  }
  return DetectionPattern{occ};
}

bool HeraldRule::default_entanglement_filter(const ProjectionRow& row) { return is_genuinely_entangled(row.state); }

HybridState prepare_swap_input(int N, const std::vector<Sign>& signs, const std::vector<int>& ports) {
  if (N < 2 || N > 8) throw RangeError("swap input: N must be in [2, 8], got " + std::to_string(N));
  if (!signs.empty() && static_cast<int>(signs.size()) != N)
    throw DimensionError("swap input: expected " + std::to_string(N) + " signs");
  if (!ports.empty() && static_cast<int>(ports.size()) != N)
    throw DimensionError("swap input: expected " + std::to_string(N) + " ports");

  HybridState state = HybridState(0);
  state.add("", FockState{}, 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  for (int n = 0; n < N; ++n) {
    const int port = ports.empty() ? n + 1 : ports[n];
    const double s = signs.empty() ? 1.0 : sign_value(signs[n]);
    HybridState pair(1);
    pair.add("0", FockState{ModeCounts({{ModeIndex{port, Polarization::H}, 1}})}, r);
    pair.add("1", FockState{ModeCounts({{ModeIndex{port, Polarization::V}, 1}})}, s * r);
    state = tensor(state, pair);
  }
  return state;
}

std::vector<ProjectionRow> project_patterns(const HybridState& output) {
  std::vector<ProjectionRow> rows;
  for (auto& [pattern, amps] : split_by_pattern(output)) {
    const double prob = amps.norm2();
    if (prob <= 0.0) continue;
    rows.push_back(ProjectionRow{pattern, amps.normalized(), prob, std::nullopt});
  }
  sort_rows(rows);
  return rows;
}

std::vector<ProjectionRow> run_gbsa(const HybridState& input, const MultiportMatrix& U) {
  return project_patterns(propagate(input, U));
}

std::vector<DetectionPattern> suppressed_patterns(const HybridState& input, const MultiportMatrix& U,
                                                  int total_clicks) {
  if (total_clicks < 1) throw RangeError("total_clicks must be >= 1");
  std::set<Polarization> pols;
  for (const auto& [key, amp] : input.terms())
    for (const auto& [mode, k] : key.photons.occupations.entries()) pols.insert(mode.pol);
  std::vector<ModeIndex> modes;
  for (auto pol : pols)
    for (int port = 1; port <= U.dim(); ++port) modes.push_back(ModeIndex{port, pol});

  std::set<FockState> seen;
  for (const auto& row : run_gbsa(input, U)) seen.insert(row.pattern);

  std::vector<ModeCounts> all;
  ModeCounts cur;
  enumerate_multisets(modes, 0, total_clicks, cur, all);

  std::vector<DetectionPattern> out;
  for (auto& occ : all)
    if (!seen.contains(FockState{occ})) out.emplace_back(occ);
  std::sort(out.begin(), out.end(),
            [](const DetectionPattern& a, const DetectionPattern& b) { return pattern_label(a) < pattern_label(b); });
  return out;
}

bool herald_accepts(const DetectionPattern& p, DetectorModel model, const HeraldRule& rule) {
  if (rule.distinct_detectors_only && p.occupations.max_count() > 1) return false;
  if (model == DetectorModel::Threshold) return clicks(p) == rule.required_clicks;
  return p.total() == rule.required_clicks;
}

double aggregate_heralding(const std::vector<ProjectionRow>& rows, DetectorModel model, const HeraldRule& rule) {
  if (rule.required_clicks < 1) throw RangeError("herald rule needs at least one click");
  double total = 0.0;
  for (const auto& row : rows) {
    if (!herald_accepts(row.pattern, model, rule)) continue;
    if (rule.entanglement_filter && !rule.entanglement_filter(row)) continue;
    total += row.probability;
  }
  return total;
}

std::vector<ProjectionRow> subnetwork_swap(int m, const MultiportMatrix& U, const std::vector<int>& ports) {
  if (m < 2 || m > U.dim())
    throw RangeError("subnetwork size m = " + std::to_string(m) + " outside [2, " + std::to_string(U.dim()) + "]");
  std::vector<int> p = ports;
  if (p.empty())
    for (int k = 1; k <= m; ++k) p.push_back(k);
  return run_gbsa(prepare_swap_input(m, {}, p), U);
}

HybridState wpe_state(int N, double p, const std::vector<double>& phases) {
  if (N < 1 || N > 8) throw RangeError("WPE: N must be in [1, 8]");
  if (!(p > 0.0 && p < 1.0)) throw RangeError("WPE: excitation probability must lie in (0, 1)");
  if (!phases.empty() && static_cast<int>(phases.size()) != N)
    throw DimensionError("WPE: expected " + std::to_string(N) + " phases");

  HybridState state(0);
  state.add("", FockState{}, 1.0);
  for (int n = 0; n < N; ++n) {
    const double phi = phases.empty() ? 0.0 : phases[n];
    HybridState atom(1);
    atom.add("0", FockState{}, std::sqrt(1.0 - p));
    atom.add("1", FockState{ModeCounts({{ModeIndex{n + 1, Polarization::None}, 1}})}, std::sqrt(p) * std::polar(1.0, phi));
    state = tensor(state, atom);
  }
  return state;
}

std::vector<ProjectionRow> wpe_herald(const HybridState& state, const MultiportMatrix& U, int m_clicks,
                                      DetectorModel model, const std::optional<QubitState>& target) {
  if (m_clicks < 1) throw RangeError("WPE herald needs m >= 1");
  const int N = state.n_atoms();
  if (m_clicks > N) throw RangeError("WPE herald: m exceeds the number of atoms");
  const QubitState ideal = target ? *target : dicke_state(m_clicks, N);
  if (ideal.n_qubits() != N) throw DimensionError("WPE target has the wrong qubit count");

  // Ideal state with one photon per excited atom, through the same optics.
  HybridState ideal_hybrid(N);
  for (const auto& [bits, amp] : ideal.to_map()) {
    ModeCounts occ;
    for (int q = 0; q < N; ++q)
      if (bits[q] == '1') occ.add(ModeIndex{q + 1, Polarization::None});
    ideal_hybrid.add(bits, FockState{occ}, amp);
  }
  auto ideal_split = split_by_pattern(propagate(ideal_hybrid, U));

  std::vector<ProjectionRow> rows;
  for (auto& row : project_patterns(propagate(state, U))) {
    const int n = row.pattern.total();
    const bool keep = model == DetectorModel::NumberResolved ? n == m_clicks : n >= m_clicks;
    if (!keep) continue;
    auto it = ideal_split.find(row.pattern);
    row.target_fidelity =
        (it == ideal_split.end() || it->second.norm2() < 1e-24) ? 0.0 : fidelity(it->second.normalized(), row.state);
    rows.push_back(std::move(row));
  }
  return rows;
}

WpeSummary summarize_wpe(const std::vector<ProjectionRow>& rows) {
  WpeSummary s;
  double weighted = 0.0;
  for (const auto& r : rows) {
    s.herald_probability += r.probability;
    weighted += r.probability * r.target_fidelity.value_or(0.0);
  }
  s.fidelity = s.herald_probability > 0.0 ? weighted / s.herald_probability : 0.0;
  return s;
}

WpeSummary simulate_wpe(int m, int N, double p, const MultiportMatrix& U, DetectorModel model,
                        const std::vector<double>& phases) {
  if (U.dim() < N) throw DimensionError("eraser has fewer ports than atoms", N);
  const auto rows = wpe_herald(wpe_state(N, p, phases), U, m, model, dicke_state(m, N, phases));
  return summarize_wpe(rows);
}

MultiportMatrix default_eraser(int N) {
  if (N < 1 || N > 8) throw RangeError("no default eraser for N = " + std::to_string(N));
  if (N <= 2) return beam_splitter();
  if (N == 3) return tritter();
  if (N == 4) return quarter();
  return symmetric_multiport(3);
}

}  // namespace qnet
