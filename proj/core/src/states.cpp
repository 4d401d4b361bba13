#include "qnet/states.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "qnet/errors.hpp"

namespace qnet {

namespace {

constexpr int kMaxQubits = 24;

void check_same(const QubitState& a, const QubitState& b) {
  if (a.n_qubits() != b.n_qubits())
    throw DimensionError("qubit count mismatch: " + std::to_string(a.n_qubits()) + " vs " +
                         std::to_string(b.n_qubits()));
}

int bit_of(std::size_t index, int q, int n) { return static_cast<int>((index >> (n - 1 - q)) & 1U); }

double binom(int n, int k) { return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0))); }

// Rows: kept qubits (mask bits), columns: the rest.
Eigen::MatrixXcd split_matrix(const QubitState& s, unsigned mask) {
  const int n = s.n_qubits();
  std::vector<int> kept, rest;
  for (int q = 0; q < n; ++q) ((mask >> q) & 1U ? kept : rest).push_back(q);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(1 << kept.size(), 1 << rest.size());
  for (std::size_t i = 0; i < s.dim(); ++i) {
    int r = 0, c = 0;
    for (int q : kept) r = (r << 1) | bit_of(i, q, n);
    for (int q : rest) c = (c << 1) | bit_of(i, q, n);
    m(r, c) = s[i];
  }
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// QubitState

QubitState::QubitState(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 0 || n_qubits > kMaxQubits) throw RangeError("unsupported qubit count " + std::to_string(n_qubits));
  amps_.assign(std::size_t{1} << n_qubits, cplx{});
}

QubitState::QubitState(int n_qubits, std::vector<cplx> amplitudes) : QubitState(n_qubits) {
  if (amplitudes.size() != amps_.size()) throw DimensionError("amplitude vector has the wrong length");
  amps_ = std::move(amplitudes);
}

QubitState QubitState::from_map(int n_qubits, const std::map<std::string, cplx>& amps) {
  QubitState s(n_qubits);
  for (const auto& [b, a] : amps) s.amps_[s.index(b)] += a;
  return s;
}

QubitState QubitState::basis(const std::string& bits) {
  QubitState s(static_cast<int>(bits.size()));
  s.amps_[s.index(bits)] = 1.0;
  return s;
}

std::size_t QubitState::index(const std::string& bits) const {
  if (static_cast<int>(bits.size()) != n_)
    throw DimensionError("bitstring '" + bits + "' does not match " + std::to_string(n_) + " qubits");
  std::size_t i = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw RangeError("bitstring '" + bits + "' has a non-binary character");
    i = (i << 1) | static_cast<std::size_t>(c - '0');
  }
  return i;
}

std::string QubitState::bits(std::size_t index) const {
  std::string s(n_, '0');
  for (int q = 0; q < n_; ++q) s[q] = static_cast<char>('0' + bit_of(index, q, n_));
  return s;
}

cplx QubitState::amplitude(const std::string& b) const { return amps_[index(b)]; }

double QubitState::norm2() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

QubitState QubitState::normalized() const {
  const double n = std::sqrt(norm2());
  if (n == 0.0) throw InvariantError("cannot normalise the zero vector");
  QubitState out = *this;
  for (auto& a : out.amps_) a /= n;
  return out;
}

bool QubitState::is_normalized(double tol) const { return std::abs(norm2() - 1.0) <= tol; }

std::map<std::string, cplx> QubitState::to_map(double tol) const {
  std::map<std::string, cplx> m;
  for (std::size_t i = 0; i < amps_.size(); ++i)
    if (std::abs(amps_[i]) >= tol) m.emplace(bits(i), amps_[i]);
  return m;
}

QubitState& QubitState::operator+=(const QubitState& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += o.amps_[i];
  return *this;
}

QubitState& QubitState::operator-=(const QubitState& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] -= o.amps_[i];
  return *this;
}

QubitState& QubitState::operator*=(cplx s) {
  for (auto& a : amps_) a *= s;
  return *this;
}

QubitState operator+(QubitState a, const QubitState& b) { return a += b; }
QubitState operator-(QubitState a, const QubitState& b) { return a -= b; }
QubitState operator*(cplx s, QubitState a) { return a *= s; }

cplx inner(const QubitState& a, const QubitState& b) {
  check_same(a, b);
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

QubitState kron(const QubitState& a, const QubitState& b) {
  QubitState out(a.n_qubits() + b.n_qubits());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) out[i * b.dim() + j] = a[i] * b[j];
  return out;
}

double distance(const QubitState& a, const QubitState& b) { return std::sqrt((a - b).norm2()); }

// ---------------------------------------------------------------------------
// Families

QubitState bell_state(BellKind kind) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (kind) {
    case BellKind::PhiPlus: return QubitState::from_map(2, {{"00", r}, {"11", r}});
    case BellKind::PhiMinus: return QubitState::from_map(2, {{"00", r}, {"11", -r}});
    case BellKind::PsiPlus: return QubitState::from_map(2, {{"01", r}, {"10", r}});
    case BellKind::PsiMinus: return QubitState::from_map(2, {{"01", r}, {"10", -r}});
  }
  throw RangeError("unknown Bell state");
}

QubitState ghz_basis_state(const GhzIndex& idx) {
  if (idx.N < 2 || idx.N > kMaxQubits) throw RangeError("GHZ basis: N must be >= 2");
  const std::size_t half = std::size_t{1} << (idx.N - 1);
  if (idx.n < 0 || static_cast<std::size_t>(idx.n) >= half)
    throw RangeError("GHZ basis: n = " + std::to_string(idx.n) + " outside [0, " + std::to_string(half - 1) + "]");
  QubitState s(idx.N);
  const double r = 1.0 / std::sqrt(2.0);
  const std::size_t full = (std::size_t{1} << idx.N) - 1;
  s[idx.n] = r;
  s[full - idx.n] = sign_value(idx.sign) * r;
  return s;
}

QubitState dicke_state(int m, int N, const std::vector<double>& phases) {
  if (N < 1 || N > kMaxQubits) throw RangeError("Dicke state: N out of range");
  if (m < 0 || m > N) throw RangeError("Dicke state: m = " + std::to_string(m) + " outside [0, N]");
  if (!phases.empty() && static_cast<int>(phases.size()) != N)
    throw DimensionError("Dicke state: expected " + std::to_string(N) + " phases");
  QubitState s(N);
  const double amp = 1.0 / std::sqrt(binom(N, m));
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (std::popcount(i) != m) continue;
    cplx a = amp;
    if (!phases.empty())
      for (int q = 0; q < N; ++q)
        if (bit_of(i, q, N)) a *= std::polar(1.0, phases[q]);
    s[i] = a;
  }
  return s;
}

std::vector<double> pair_decomposition_coefficients(int N, int n, const std::vector<Sign>& signs) {
  const std::size_t full = (std::size_t{1} << N) - 1;
  auto parity = [&](std::size_t b) {
    double p = 1.0;
    for (int q = 0; q < N; ++q)
      if (bit_of(b, q, N) && !signs.empty()) p *= sign_value(signs[q]);
    return p;
  };
  // |B>|B> and |B̄>|B̄> rewritten in the G± basis.
  const double a = parity(static_cast<std::size_t>(n));
  const double c = parity(full - static_cast<std::size_t>(n));
  const double scale = std::pow(2.0, -N / 2.0);
  return {scale * (a + c) / 2, scale * (a - c) / 2, scale * (a - c) / 2, scale * (a + c) / 2};
}

double verify_pair_decomposition(int N, const std::vector<Sign>& signs) {
  if (N < 2 || N > 6) throw RangeError("pair decomposition supported for 2 <= N <= 6");
  if (!signs.empty() && static_cast<int>(signs.size()) != N)
    throw DimensionError("expected " + std::to_string(N) + " pair signs");

  // Left side as written: pairs (A_n P_n) side by side.
  QubitState lhs = QubitState::basis("");
  const double r = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < N; ++k) {
    const double s = signs.empty() ? 1.0 : sign_value(signs[k]);
    lhs = kron(lhs, QubitState::from_map(2, {{"00", r}, {"11", s * r}}));
  }
  // Regroup to (A_1..A_N)(P_1..P_N).
  QubitState grouped(2 * N);
  for (std::size_t i = 0; i < lhs.dim(); ++i) {
    const std::string b = lhs.bits(i);
    std::string atoms, photons;
    for (int k = 0; k < N; ++k) {
      atoms += b[2 * k];
      photons += b[2 * k + 1];
    }
    grouped[grouped.index(atoms + photons)] = lhs[i];
  }

  QubitState rhs(2 * N);
  const int half = 1 << (N - 1);
  const Sign pm[2] = {Sign::Plus, Sign::Minus};
  for (int n = 0; n < half; ++n) {
    const auto coeff = pair_decomposition_coefficients(N, n, signs);
    for (int sa = 0; sa < 2; ++sa)
      for (int sp = 0; sp < 2; ++sp) {
        const double c = coeff[2 * sa + sp];
        if (c == 0.0) continue;
        rhs += c * kron(ghz_basis_state({n, pm[sa], N}), ghz_basis_state({n, pm[sp], N}));
      }
  }
  return distance(grouped, rhs);
}

double fidelity(const QubitState& a, const QubitState& b) { return std::clamp(std::norm(inner(a, b)), 0.0, 1.0); }

double reduced_purity(const QubitState& s, unsigned mask) {
  const Eigen::MatrixXcd m = split_matrix(s, mask);
  const Eigen::MatrixXcd rho = m * m.adjoint();
  return rho.cwiseAbs2().sum();
}

bool is_genuinely_entangled(const QubitState& s, double tol) {
  const int n = s.n_qubits();
  if (n < 2) return false;
  const double norm2 = s.norm2();
  // Bipartitions containing qubit 0 enumerate each cut once.
  for (unsigned mask = 1; mask < (1U << n) - 1; mask += 2)
    if (reduced_purity(s, mask) / (norm2 * norm2) >= 1.0 - tol) return false;
  return true;
}

bool is_fully_product(const QubitState& s, double tol) {
  const double norm2 = s.norm2();
  for (int q = 0; q < s.n_qubits(); ++q)
    if (reduced_purity(s, 1U << q) / (norm2 * norm2) < 1.0 - tol) return false;
  return true;
}

std::string to_string(ThreeQubitClass c) {
  switch (c) {
    case ThreeQubitClass::Product: return "product";
    case ThreeQubitClass::Biseparable: return "biseparable";
    case ThreeQubitClass::WClass: return "W-class";
    case ThreeQubitClass::GhzClass: return "GHZ-class";
  }
  return "?";
}

double three_tangle(const QubitState& s) {
  if (s.n_qubits() != 3) throw DimensionError("3-tangle needs exactly three qubits");
  auto a = [&](int i) { return s[static_cast<std::size_t>(i)]; };
  // Coffman–Kundu–Wootters hyperdeterminant form; indices are binary labels.
  const cplx d1 = a(0) * a(0) * a(7) * a(7) + a(1) * a(1) * a(6) * a(6) + a(2) * a(2) * a(5) * a(5) +
                  a(4) * a(4) * a(3) * a(3);
  const cplx d2 = a(0) * a(7) * a(3) * a(4) + a(0) * a(7) * a(5) * a(2) + a(0) * a(7) * a(6) * a(1) +
                  a(3) * a(4) * a(5) * a(2) + a(3) * a(4) * a(6) * a(1) + a(5) * a(2) * a(6) * a(1);
  const cplx d3 = a(0) * a(6) * a(5) * a(3) + a(7) * a(1) * a(2) * a(4);
  return 4.0 * std::abs(d1 - 2.0 * d2 + 4.0 * d3);
}

double concurrence(const QubitState& s, int qa, int qb) {
  const int n = s.n_qubits();
  if (qa == qb || qa < 0 || qb < 0 || qa >= n || qb >= n) throw RangeError("concurrence: invalid qubit pair");
  const Eigen::MatrixXcd m = split_matrix(s, (1U << qa) | (1U << qb));
  Eigen::Matrix4cd rho = m * m.adjoint();
  rho /= rho.trace().real();

  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Eigen::Matrix4cd tilde = yy * rho.conjugate() * yy;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
  const Eigen::Matrix4cd sq =
      es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> rs(sq * tilde * sq);
  Eigen::Vector4d l = rs.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(l.data(), l.data() + 4, std::greater<>());
  return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

ThreeQubitClass classify_three_qubit(const QubitState& s) {
  if (s.n_qubits() != 3) throw DimensionError("classification needs exactly three qubits");
  const QubitState u = s.normalized();
  if (three_tangle(u) > 1e-6) return ThreeQubitClass::GhzClass;
  int unentangled = 0;
  for (int q = 0; q < 3; ++q)
    if (reduced_purity(u, 1U << q) >= 1.0 - 1e-9) ++unentangled;
  if (unentangled == 0) return ThreeQubitClass::WClass;
  if (unentangled == 1) return ThreeQubitClass::Biseparable;
  return ThreeQubitClass::Product;
}

}  // namespace qnet
