#pragma once

#include <vector>

#include "qnet/states.hpp"

namespace qnet {

// Efficiencies and probabilities shared by the closed-form models. Defaults
// describe an ideal, lossless setup.
struct SchemeParams {
  double eta_det = 1.0;   // detector efficiency
  double eta_abs = 1.0;   // photon absorption by the receiving atom
  double eta_t = 1.0;     // per-hop transmission
  double eta_c = 1.0;     // cavity interaction survival
  double eta_p = 1.0;     // emission
  double eta_out = 1.0;   // out-coupling
  double eta_net = 1.0;   // network transmission
  double eta_ent = 1.0;   // entangling absorption (also written P_ENT)
  double eta_a0an = 1.0;  // end-to-end A_0 -> A_N figure
  double p = 0.5;         // WPE excitation
  double p_epr = 1.0;
  double p_ghz_n = 1.0;
  double p_dark = 0.0;
  double p_real = 1.0;
  double f_pa = 1.0;
  double f_ph = 1.0;
  double r_t = 1.0;  // trial rate, 1/s

  // Throws RangeError naming the first field outside [0,1] (r_t >= 0).
  void validate() const;
};

struct FidelityResult {
  double value = 0.0;
  bool is_proportional = false;  // true: value is only the variable factor
};

FidelityResult st_fidelity_2(double eta);
FidelityResult st_rate_2(const SchemeParams& params);

struct StNodeResult {
  QubitState state;
  FidelityResult fidelity;
  FidelityResult rate;
};
StNodeResult st_n_node(const SchemeParams& params, int N);

double itinerant_fidelity_2(double f_pa);
FidelityResult itinerant_success(int N, double eta_t, double eta_c, double eta_det);

// Depolarising strength λ (ρ -> (1-λ)ρ + λ·I/2 on the atom) that makes the
// two-node output fidelity equal 2 f_pa - 1.
double itinerant_depolarizing_strength(double f_pa);

// Density-matrix simulation of the photon-controlled GHZ circuit.
double itinerant_ghz_fidelity_sim(int N, double f_pa);

FidelityResult em_success(int N, const SchemeParams& params);
double em_false_herald(int N, double p_real, double p_dark);
double em_fidelity(int N, double f_ph, double p_em, double p_false);

double wpe_fidelity(int m, int N, double p);
FidelityResult wpe_rate(int m, int N, double p, double eta_det);

struct WpeSweepRow {
  double p = 0.0;
  int m = 0;
  double fidelity = 0.0;
  double rate = 0.0;
};
std::vector<WpeSweepRow> wpe_fidelity_sweep(int N, const std::vector<int>& m_list, const std::vector<double>& p_grid,
                                            double eta_det);

struct FourNodeComparison {
  double r_bell = 0.0;        // ½ η² r_T
  double r_bell_chain = 0.0;  // r_bell / 4
  double r_quad = 0.0;        // 7/32 η⁴ r_T
  double crossover_eta = 0.0;
};
FourNodeComparison compare_4node(double eta_det, double r_t);

FidelityResult swap_rate(int N, double p_bsa, double eta_det);

}  // namespace qnet
