#include "qnet/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qnet/errors.hpp"

namespace qnet {

namespace {

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw RangeError(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
}

void check_nodes(int N, int lo, const char* what) {
  if (N < lo) throw RangeError(std::string(what) + ": N must be >= " + std::to_string(lo));
}

double binom(int n, int k) {
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

// P(n photons) for N independent emitters with excitation probability p.
double emission(int N, int n, double p) { return binom(N, n) * std::pow(p, n) * std::pow(1.0 - p, N - n); }

void check_wpe(int m, int N, double p) {
  check_nodes(N, 1, "WPE");
  if (m < 1 || m > N) throw RangeError("WPE: m must lie in [1, N]");
  if (!(p > 0.0 && p < 1.0)) throw RangeError("WPE: p must lie in (0, 1)");
}

}  // namespace

void SchemeParams::validate() const {
  const std::pair<double, const char*> fields[] = {
      {eta_det, "eta_det"}, {eta_abs, "eta_abs"}, {eta_t, "eta_t"},     {eta_c, "eta_c"},
      {eta_p, "eta_p"},     {eta_out, "eta_out"}, {eta_net, "eta_net"}, {eta_ent, "eta_ent"},
      {eta_a0an, "eta_a0an"}, {p, "p"},           {p_epr, "p_epr"},     {p_ghz_n, "p_ghz_n"},
      {p_dark, "p_dark"},   {p_real, "p_real"},   {f_pa, "f_pa"},       {f_ph, "f_ph"}};
  for (const auto& [v, name] : fields) check_unit(v, name);
  if (!(r_t >= 0.0)) throw RangeError("r_t must be >= 0");
}

FidelityResult st_fidelity_2(double eta) {
  check_unit(eta, "eta");
  const double s = 1.0 + std::sqrt(eta);
  return {0.25 * s * s, false};
}

FidelityResult st_rate_2(const SchemeParams& params) {
  params.validate();
  return {params.eta_p * params.eta_out * params.eta_net * params.eta_ent * params.eta_det, true};
}

StNodeResult st_n_node(const SchemeParams& params, int N) {
  check_nodes(N, 2, "single-photon exchange");
  params.validate();
  StNodeResult r;
  r.state = dicke_state(1, N);
  r.fidelity = {params.eta_a0an, true};
  r.rate = {params.eta_p * params.eta_out * params.eta_net * params.eta_a0an * params.eta_ent * params.eta_det, true};
  return r;
}

double itinerant_fidelity_2(double f_pa) {
  if (!(f_pa >= 0.5 && f_pa <= 1.0)) throw RangeError("f_pa must lie in [0.5, 1]");
  return std::clamp(2.0 * f_pa - 1.0, 0.0, 1.0);
}

FidelityResult itinerant_success(int N, double eta_t, double eta_c, double eta_det) {
  check_nodes(N, 2, "itinerant photon");
  check_unit(eta_t, "eta_t");
  check_unit(eta_c, "eta_c");
  check_unit(eta_det, "eta_det");
  return {std::pow(eta_t, N - 1) * std::pow(eta_c, N) * eta_det, true};
}

double itinerant_depolarizing_strength(double f_pa) {
  const double target = itinerant_fidelity_2(f_pa);
  // Two independently depolarised halves of a Bell pair keep fidelity
  // (1-λ)² + (1 - (1-λ)²)/4, so the anchor fixes (1-λ)².
  const double keep2 = (4.0 * target - 1.0) / 3.0;
  if (keep2 < 0.0)
    throw RangeError("f_pa = " + std::to_string(f_pa) +
                     " is below what local depolarising noise can produce (needs f_pa >= 5/8)");
  return 1.0 - std::sqrt(keep2);
}

double itinerant_ghz_fidelity_sim(int N, double f_pa) {
  if (N < 2 || N > 10) throw RangeError("itinerant simulation supports 2 <= N <= 10");
  const double lambda = itinerant_depolarizing_strength(f_pa);

  // Qubit 0 (most significant) is the photon, qubits 1..N the atoms.
  const int nq = N + 1;
  const std::size_t D = std::size_t{1} << nq;
  std::vector<cplx> rho(D * D, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> cplx& { return rho[i * D + j]; };
  const std::size_t photon = std::size_t{1} << N;
  for (std::size_t i : {std::size_t{0}, photon})
    for (std::size_t j : {std::size_t{0}, photon}) at(i, j) = 0.5;

  std::vector<cplx> next(D * D);
  for (int atom = 1; atom <= N; ++atom) {
    const std::size_t t = std::size_t{1} << (N - atom);
    auto flip = [&](std::size_t i) { return (i & photon) ? (i ^ t) : i; };
    // Photon-controlled X on the atom: a permutation of basis labels.
    for (std::size_t i = 0; i < D; ++i)
      for (std::size_t j = 0; j < D; ++j) next[i * D + j] = at(flip(i), flip(j));
    rho.swap(next);
    // ρ -> (1-λ)ρ + λ (I/2 ⊗ Tr_atom ρ)
    for (std::size_t i = 0; i < D; ++i)
      for (std::size_t j = 0; j < D; ++j) {
        cplx v = (1.0 - lambda) * at(i, j);
        if (((i ^ j) & t) == 0) {
          const std::size_t i0 = i & ~t, j0 = j & ~t;
          v += 0.5 * lambda * (at(i0, j0) + at(i0 | t, j0 | t));
        }
        next[i * D + j] = v;
      }
    rho.swap(next);
  }

  // Outcome ± on the photon heralds G_0^± on the atoms.
  const std::size_t zeros = 0, ones = photon - 1;
  double fid = 0.0;
  for (double s : {1.0, -1.0}) {
    auto atoms = [&](std::size_t a, std::size_t b) {
      cplx v = 0.0;
      for (std::size_t x : {std::size_t{0}, photon})
        for (std::size_t y : {std::size_t{0}, photon}) {
          const double sx = x ? s : 1.0, sy = y ? s : 1.0;
          v += 0.5 * sx * sy * at(x | a, y | b);
        }
      return v;
    };
    fid += 0.5 * (atoms(zeros, zeros) + atoms(ones, ones) + s * atoms(zeros, ones) + s * atoms(ones, zeros)).real();
  }
  return std::clamp(fid, 0.0, 1.0);
}

FidelityResult em_success(int N, const SchemeParams& params) {
  check_nodes(N, 2, "photon-to-atom mapping");
  params.validate();
  const double source = N == 2 ? params.p_epr : params.p_ghz_n;
  return {source * std::pow(0.5 * params.eta_abs * params.eta_det, N), true};
}

double em_false_herald(int N, double p_real, double p_dark) {
  check_nodes(N, 1, "false herald");
  check_unit(p_real, "p_real");
  check_unit(p_dark, "p_dark");
  double s = 0.0;
  for (int n = 0; n <= N - 1; ++n) s += binom(N, n) * std::pow(p_real, n) * std::pow(p_dark, N - n);
  return s;
}

double em_fidelity(int N, double f_ph, double p_em, double p_false) {
  check_nodes(N, 1, "photon-to-atom mapping");
  check_unit(f_ph, "f_ph");
  check_unit(p_em, "p_em");
  check_unit(p_false, "p_false");
  const double den = p_em + p_false;
  if (den <= 0.0) throw RangeError("em_fidelity: p_em + p_false must be positive");
  return (f_ph * p_em + std::pow(2.0, -N) * p_false) / den;
}

double wpe_fidelity(int m, int N, double p) {
  check_wpe(m, N, p);
  double den = 0.0;
  for (int n = m; n <= N; ++n) den += emission(N, n, p);
  return emission(N, m, p) / den;
}

FidelityResult wpe_rate(int m, int N, double p, double eta_det) {
  check_wpe(m, N, p);
  check_unit(eta_det, "eta_det");
  double s = 0.0;
  for (int n = m; n <= N; ++n) s += emission(N, n, p);
  return {std::pow(eta_det, m) * s, true};
}

std::vector<WpeSweepRow> wpe_fidelity_sweep(int N, const std::vector<int>& m_list, const std::vector<double>& p_grid,
                                            double eta_det) {
  if (m_list.empty() || p_grid.empty()) throw RangeError("WPE sweep needs at least one m and one p");
  std::vector<WpeSweepRow> rows;
  for (int m : m_list)
    for (double p : p_grid) rows.push_back({p, m, wpe_fidelity(m, N, p), wpe_rate(m, N, p, eta_det).value});
  return rows;
}

FourNodeComparison compare_4node(double eta_det, double r_t) {
  check_unit(eta_det, "eta_det");
  if (!(r_t >= 0.0)) throw RangeError("r_t must be >= 0");
  FourNodeComparison c;
  c.r_bell = 0.5 * eta_det * eta_det * r_t;
  c.r_bell_chain = c.r_bell / 4.0;
  c.r_quad = 7.0 / 32.0 * std::pow(eta_det, 4) * r_t;
  // η²/8 = 7η⁴/32  =>  η² = 4/7
  c.crossover_eta = 2.0 / std::sqrt(7.0);
  return c;
}

FidelityResult swap_rate(int N, double p_bsa, double eta_det) {
  check_nodes(N, 2, "swap rate");
  check_unit(p_bsa, "p_bsa");
  check_unit(eta_det, "eta_det");
  return {p_bsa * std::pow(eta_det, N), true};
}

}  // namespace qnet
