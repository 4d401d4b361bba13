#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qnet/interferometers.hpp"
#include "qnet/photonics.hpp"
#include "qnet/states.hpp"

namespace qnet {

// Exact output occupation; threshold detectors are a coarsening of this key.
using DetectionPattern = FockState;

// "h1^2 h2 v3": horizontal modes first, then vertical, each by port.
// Single-mode (unpolarised) detectors print as "d<port>".
std::string pattern_label(const DetectionPattern& p);
DetectionPattern parse_pattern(const std::string& label);

// Number of distinct detectors that fire.
inline int clicks(const DetectionPattern& p) { return static_cast<int>(p.occupations.distinct()); }

struct ProjectionRow {
  DetectionPattern pattern;
  QubitState state;  // normalised projected atomic state
  double probability = 0.0;
  // Set by the which-path-erasing herald: fidelity of `state` to the ideal
  // m-excitation target projected on the same pattern.
  std::optional<double> target_fidelity;
};

enum class DetectorModel { Threshold, NumberResolved };

struct HeraldRule {
  int required_clicks = 1;
  bool distinct_detectors_only = false;
  std::function<bool(const ProjectionRow&)> entanglement_filter = default_entanglement_filter;

  // The projected state admits no product bipartition.
  static bool default_entanglement_filter(const ProjectionRow& row);
};

// ⊗_n (|0>_{A_n} a†_{h,p_n} ± |1>_{A_n} a†_{v,p_n})/√2 |vac>. Ports default to 1..N.
HybridState prepare_swap_input(int N, const std::vector<Sign>& signs = {}, const std::vector<int>& ports = {});

std::vector<ProjectionRow> run_gbsa(const HybridState& input, const MultiportMatrix& U);

// Projects a propagated state onto each output pattern. Rows are sorted by
// pattern label and carry absolute (unconditioned) probabilities.
std::vector<ProjectionRow> project_patterns(const HybridState& output);

std::vector<DetectionPattern> suppressed_patterns(const HybridState& input, const MultiportMatrix& U,
                                                  int total_clicks);

bool herald_accepts(const DetectionPattern& p, DetectorModel model, const HeraldRule& rule);

double aggregate_heralding(const std::vector<ProjectionRow>& rows, DetectorModel model, const HeraldRule& rule);

// m Bell pairs feeding the given input ports (default 1..m) of U.
std::vector<ProjectionRow> subnetwork_swap(int m, const MultiportMatrix& U, const std::vector<int>& ports = {});

// ⊗_n (√(1-p)|0, vac> + √p e^{iφ_n}|1, 1 photon in port n>), single-mode ports.
HybridState wpe_state(int N, double p, const std::vector<double>& phases = {});

// Routes the photons of `state` through the eraser U. Number-resolved
// detectors herald on exactly m photons. Threshold detectors are taken in the
// lossy regime the closed-form bound assumes: every emission with at least m
// photons can register as an m-click herald, so all such patterns are rows.
// Each row's target_fidelity compares it with `target` (default: the
// zero-phase Dicke state with m excitations) pushed through the same optics.
std::vector<ProjectionRow> wpe_herald(const HybridState& state, const MultiportMatrix& U, int m_clicks,
                                      DetectorModel model, const std::optional<QubitState>& target = std::nullopt);

struct WpeSummary {
  double herald_probability = 0.0;  // Σ row probabilities
  double fidelity = 0.0;            // probability-weighted target fidelity
};

WpeSummary summarize_wpe(const std::vector<ProjectionRow>& rows);

// Convenience: wpe_state + wpe_herald with the phased Dicke target.
WpeSummary simulate_wpe(int m, int N, double p, const MultiportMatrix& U, DetectorModel model,
                        const std::vector<double>& phases = {});

// Default eraser for N atoms: BS, tritter, quarter, or the 8-port multiport.
MultiportMatrix default_eraser(int N);

}  // namespace qnet
