#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace qnet {

using cplx = std::complex<double>;

// Pure state of n qubits stored densely. Index bit (n-1-q) holds qubit q, so
// the leftmost character of a bitstring is qubit 0 (atom A_1).
class QubitState {
 public:
  QubitState() = default;
  explicit QubitState(int n_qubits);  // all-zero amplitudes
  QubitState(int n_qubits, std::vector<cplx> amplitudes);
  static QubitState from_map(int n_qubits, const std::map<std::string, cplx>& amps);
  static QubitState basis(const std::string& bits);

  int n_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<cplx>& amplitudes() const { return amps_; }

  cplx amplitude(const std::string& bits) const;
  cplx& operator[](std::size_t index) { return amps_[index]; }
  cplx operator[](std::size_t index) const { return amps_[index]; }

  double norm2() const;
  QubitState normalized() const;
  bool is_normalized(double tol = 1e-9) const;

  // Non-negligible amplitudes keyed by bitstring, in index order.
  std::map<std::string, cplx> to_map(double tol = 1e-12) const;

  QubitState& operator+=(const QubitState& o);
  QubitState& operator-=(const QubitState& o);
  QubitState& operator*=(cplx s);

  std::string bits(std::size_t index) const;
  std::size_t index(const std::string& bits) const;

 private:
  int n_ = 0;
  std::vector<cplx> amps_;
};

QubitState operator+(QubitState a, const QubitState& b);
QubitState operator-(QubitState a, const QubitState& b);
QubitState operator*(cplx s, QubitState a);

cplx inner(const QubitState& a, const QubitState& b);  // <a|b>
QubitState kron(const QubitState& a, const QubitState& b);
double distance(const QubitState& a, const QubitState& b);  // ||a - b||

enum class BellKind { PhiPlus, PhiMinus, PsiPlus, PsiMinus };
enum class Sign { Plus, Minus };

inline double sign_value(Sign s) { return s == Sign::Plus ? 1.0 : -1.0; }

struct GhzIndex {
  int n = 0;
  Sign sign = Sign::Plus;
  int N = 2;
};

QubitState bell_state(BellKind kind);

// G_n^± = (|B(n)> ± |B(2^N - n - 1)>)/√2, n < 2^{N-1}.
QubitState ghz_basis_state(const GhzIndex& idx);

// Generalised Dicke state with m excitations; each excited qubit α contributes
// e^{iφ_α}. An empty phase list means all zero.
QubitState dicke_state(int m, int N, const std::vector<double>& phases = {});

// ||⊗_n (|00> ± |11>)/√2  -  Σ_n c_n^{στ} |G_n^σ>_A |G_n^τ>_P||, with the
// pairs regrouped as (A_1..A_N)(P_1..P_N). Empty signs means all plus.
double verify_pair_decomposition(int N, const std::vector<Sign>& signs = {});

// Coefficients of the GHZ-basis expansion used above, for pair n:
// returns {c++, c+-, c-+, c--} (atom sign first).
std::vector<double> pair_decomposition_coefficients(int N, int n, const std::vector<Sign>& signs);

double fidelity(const QubitState& a, const QubitState& b);

// Purity Tr ρ_S² of the reduced state on the qubits selected by `mask`
// (bit q set => qubit q kept).
double reduced_purity(const QubitState& s, unsigned mask);

// True when no bipartition leaves a pure (product) reduced state.
bool is_genuinely_entangled(const QubitState& s, double tol = 1e-9);
// True when every single-qubit reduced state is pure.
bool is_fully_product(const QubitState& s, double tol = 1e-9);

enum class ThreeQubitClass { Product, Biseparable, WClass, GhzClass };

std::string to_string(ThreeQubitClass c);

double three_tangle(const QubitState& s);
// Wootters concurrence of the two-qubit reduced state on qubits (a, b).
double concurrence(const QubitState& s, int a, int b);
ThreeQubitClass classify_three_qubit(const QubitState& s);

}  // namespace qnet
