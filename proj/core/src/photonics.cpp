#include "qnet/photonics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qnet/errors.hpp"
#include "qnet/interferometers.hpp"

namespace qnet {

char polarization_char(Polarization p) {
  switch (p) {
    case Polarization::H: return 'h';
    case Polarization::V: return 'v';
    case Polarization::None: break;
  }
  return 'd';
}

// ---------------------------------------------------------------------------
// ModeCounts

ModeCounts::ModeCounts(std::vector<Entry> entries) {
  for (const auto& [m, k] : entries) add(m, k);
}

void ModeCounts::add(ModeIndex m, int k) {
  if (k == 0) return;
  auto it = std::lower_bound(entries_.begin(), entries_.end(), m,
                             [](const Entry& e, const ModeIndex& key) { return e.first < key; });
  if (it != entries_.end() && it->first == m) {
    it->second += k;
    if (it->second <= 0) entries_.erase(it);
  } else if (k > 0) {
    entries_.insert(it, {m, k});
  }
}

int ModeCounts::count(ModeIndex m) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), m,
                             [](const Entry& e, const ModeIndex& key) { return e.first < key; });
  return (it != entries_.end() && it->first == m) ? it->second : 0;
}

int ModeCounts::total() const {
  int t = 0;
  for (const auto& e : entries_) t += e.second;
  return t;
}

int ModeCounts::max_count() const {
  int m = 0;
  for (const auto& e : entries_) m = std::max(m, e.second);
  return m;
}

int ModeCounts::max_port() const {
  int p = 0;
  for (const auto& e : entries_) p = std::max(p, e.first.port);
  return p;
}

double ModeCounts::factorial_product() const {
  double f = 1.0;
  for (const auto& e : entries_) f *= std::tgamma(e.second + 1.0);
  return f;
}

// ---------------------------------------------------------------------------
// PhotonPolynomial

PhotonPolynomial PhotonPolynomial::constant(cplx c) {
  PhotonPolynomial p;
  p.add_term(Monomial{}, c);
  return p;
}

PhotonPolynomial PhotonPolynomial::creation(ModeIndex m) {
  if (m.port < 1) throw DimensionError("mode port must be >= 1", m.port);
  Monomial mono;
  mono.add(m);
  PhotonPolynomial p;
  p.add_term(mono, 1.0);
  return p;
}

void PhotonPolynomial::add_term(const Monomial& mono, cplx coeff) { terms_[mono] += coeff; }

int PhotonPolynomial::max_port() const {
  int p = 0;
  for (const auto& [mono, c] : terms_) p = std::max(p, mono.max_port());
  return p;
}

PhotonPolynomial& PhotonPolynomial::operator+=(const PhotonPolynomial& o) {
  for (const auto& [mono, c] : o.terms_) terms_[mono] += c;
  canonicalize();
  return *this;
}

PhotonPolynomial& PhotonPolynomial::operator*=(cplx s) {
  for (auto& [mono, c] : terms_) c *= s;
  canonicalize();
  return *this;
}

PhotonPolynomial operator*(const PhotonPolynomial& a, const PhotonPolynomial& b) {
  if (a.size() * b.size() > kMaxTerms) throw CapacityError("polynomial product exceeds the term budget");
  PhotonPolynomial out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m = ma;
      for (const auto& [mode, k] : mb.entries()) m.add(mode, k);
      out.terms_[m] += ca * cb;
    }
  }
  out.canonicalize();
  return out;
}

void PhotonPolynomial::canonicalize() {
  std::erase_if(terms_, [](const auto& kv) { return std::abs(kv.second) < kDropTolerance; });
}

bool PhotonPolynomial::approx_equal(const PhotonPolynomial& o, double tol) const {
  auto diff = *this;
  for (const auto& [mono, c] : o.terms_) diff.terms_[mono] -= c;
  return std::all_of(diff.terms_.begin(), diff.terms_.end(),
                     [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
}

// ---------------------------------------------------------------------------
// HybridState

void HybridState::add(const std::string& atoms, const FockState& photons, cplx amp) {
  if (static_cast<int>(atoms.size()) != n_atoms_)
    throw DimensionError("atomic bitstring length " + std::to_string(atoms.size()) + " != register size " +
                         std::to_string(n_atoms_));
  terms_[HybridKey{atoms, photons}] += amp;
}

void HybridState::canonicalize() {
  std::erase_if(terms_, [](const auto& kv) { return std::abs(kv.second) < kDropTolerance; });
}

double HybridState::norm2() const {
  double n = 0.0;
  for (const auto& [k, a] : terms_) n += std::norm(a);
  return n;
}

int HybridState::max_port() const {
  int p = 0;
  for (const auto& [k, a] : terms_) p = std::max(p, k.photons.occupations.max_port());
  return p;
}

HybridState& HybridState::operator*=(cplx s) {
  for (auto& [k, a] : terms_) a *= s;
  canonicalize();
  return *this;
}

// ---------------------------------------------------------------------------
// Operations

namespace {

// Substitutes one creation operator into every term of `acc`.
std::map<Monomial, cplx> substitute(const std::map<Monomial, cplx>& acc, ModeIndex mode,
                                    const Eigen::MatrixXcd& M) {
  std::map<Monomial, cplx> next;
  const int j = mode.port - 1;
  for (const auto& [mono, c] : acc) {
    for (int k = 0; k < M.cols(); ++k) {
      const cplx m = M(j, k);
      if (std::abs(m) < kDropTolerance) continue;
      Monomial out = mono;
      out.add(ModeIndex{k + 1, mode.pol});
      next[out] += c * m;
    }
  }
  return next;
}

std::size_t saturating_pow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > kMaxTerms) return std::numeric_limits<std::size_t>::max();
    r *= base;
  }
  return r;
}

void check_ports(int max_port, int dim) {
  if (max_port > dim)
    throw DimensionError("port " + std::to_string(max_port) + " exceeds interferometer size " + std::to_string(dim),
                         max_port);
}

}  // namespace

PhotonPolynomial apply_mode_transform(const PhotonPolynomial& poly, const MultiportMatrix& inverse_matrix) {
  const int dim = inverse_matrix.dim();
  for (const auto& [mono, c] : poly.terms())
    for (const auto& [mode, k] : mono.entries()) check_ports(mode.port, dim);

  std::size_t estimate = 0;
  for (const auto& [mono, c] : poly.terms()) {
    estimate += saturating_pow(static_cast<std::size_t>(dim), mono.total());
    if (estimate > kMaxTerms) throw CapacityError("mode transform would expand beyond 1e7 terms");
  }

  const auto& M = inverse_matrix.entries();
  PhotonPolynomial out;
  for (const auto& [mono, c] : poly.terms()) {
    std::map<Monomial, cplx> acc{{Monomial{}, c}};
    for (const auto& [mode, k] : mono.entries())
      for (int r = 0; r < k; ++r) acc = substitute(acc, mode, M);
    for (const auto& [m, v] : acc) out.add_term(m, v);
  }
  out.canonicalize();
  return out;
}

HybridState expand_to_fock(const PhotonPolynomial& poly, const std::string& atoms) {
  HybridState out(static_cast<int>(atoms.size()));
  for (const auto& [mono, c] : poly.terms()) out.add(atoms, FockState{mono}, c * std::sqrt(mono.factorial_product()));
  out.canonicalize();
  return out;
}

cplx inner_product(const HybridState& a, const HybridState& b) {
  if (a.n_atoms() != b.n_atoms())
    throw DimensionError("inner product of registers with " + std::to_string(a.n_atoms()) + " and " +
                         std::to_string(b.n_atoms()) + " atoms");
  cplx s = 0.0;
  const auto& small = a.size() <= b.size() ? a.terms() : b.terms();
  const auto& large = a.size() <= b.size() ? b.terms() : a.terms();
  const bool a_small = a.size() <= b.size();
  for (const auto& [key, amp] : small) {
    auto it = large.find(key);
    if (it == large.end()) continue;
    s += a_small ? std::conj(amp) * it->second : std::conj(it->second) * amp;
  }
  return s;
}

HybridState tensor(const HybridState& a, const HybridState& b, int port_offset) {
  if (a.size() * b.size() > kMaxTerms) throw CapacityError("tensor product exceeds the term budget");
  HybridState out(a.n_atoms() + b.n_atoms());
  for (const auto& [ka, aa] : a.terms()) {
    for (const auto& [kb, ab] : b.terms()) {
      ModeCounts occ = ka.photons.occupations;
      for (const auto& [mode, k] : kb.photons.occupations.entries()) {
        ModeIndex shifted{mode.port + port_offset, mode.pol};
        if (occ.count(shifted) > 0)
          throw DimensionError("tensor: port " + std::to_string(shifted.port) + " occupied in both factors",
                               shifted.port);
        occ.add(shifted, k);
      }
      out.add(ka.atoms + kb.atoms, FockState{occ}, aa * ab);
    }
  }
  out.canonicalize();
  return out;
}

std::size_t estimated_expansion(const HybridState& state, int dim) {
  std::size_t total = 0;
  for (const auto& [key, amp] : state.terms()) {
    total += saturating_pow(static_cast<std::size_t>(dim), key.photons.total());
    if (total > kMaxTerms) return std::numeric_limits<std::size_t>::max();
  }
  return total;
}

HybridState propagate(const HybridState& state, const MultiportMatrix& U) {
  check_ports(state.max_port(), U.dim());
  if (estimated_expansion(state, U.dim()) > kMaxTerms)
    throw CapacityError("propagation would expand beyond 1e7 terms");

  const MultiportMatrix Uinv = inverse(U);
  HybridState out(state.n_atoms());
  for (const auto& [key, amp] : state.terms()) {
    // |n> = Π (a†)^n / sqrt(n!) |0>
    const auto& occ = key.photons.occupations;
    PhotonPolynomial poly;
    poly.add_term(occ, amp / std::sqrt(occ.factorial_product()));
    const HybridState part = expand_to_fock(apply_mode_transform(poly, Uinv), key.atoms);
    for (const auto& [k, a] : part.terms()) out.add(k.atoms, k.photons, a);
  }
  out.canonicalize();
  return out;
}

}  // namespace qnet
