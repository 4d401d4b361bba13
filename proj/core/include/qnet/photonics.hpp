#pragma once

#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qnet {

using cplx = std::complex<double>;

// Coefficients below this magnitude are treated as exact zeros.
inline constexpr double kDropTolerance = 1e-12;
// Tolerance for equality of physical quantities (norms, fidelities, ...).
inline constexpr double kCompareTolerance = 1e-9;
// Largest expansion we are willing to materialise.
inline constexpr std::size_t kMaxTerms = 10'000'000;

// None is used by number-encoded schemes that carry a single mode per port.
enum class Polarization : std::uint8_t { None = 0, H = 1, V = 2 };

char polarization_char(Polarization p);

struct ModeIndex {
  int port = 1;  // 1-based
  Polarization pol = Polarization::None;

  auto operator<=>(const ModeIndex&) const = default;
};

// Sorted (mode, exponent) list with strictly positive exponents. Used both for
// creation-operator monomials and for Fock occupations.
class ModeCounts {
 public:
  using Entry = std::pair<ModeIndex, int>;

  ModeCounts() = default;
  explicit ModeCounts(std::vector<Entry> entries);  // merges and sorts

  void add(ModeIndex m, int k = 1);
  int count(ModeIndex m) const;
  int total() const;
  int max_count() const;
  std::size_t distinct() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Entry>& entries() const { return entries_; }
  int max_port() const;

  // Π_m k_m!
  double factorial_product() const;

  auto operator<=>(const ModeCounts&) const = default;

 private:
  std::vector<Entry> entries_;
};

// A monomial {m -> k} stands for Π (a†_m)^k.
using Monomial = ModeCounts;

struct FockState {
  ModeCounts occupations;

  FockState() = default;
  explicit FockState(ModeCounts occ) : occupations(std::move(occ)) {}

  int total() const { return occupations.total(); }
  bool is_vacuum() const { return occupations.empty(); }

  auto operator<=>(const FockState&) const = default;
};

class PhotonPolynomial {
 public:
  using TermMap = std::map<Monomial, cplx>;

  PhotonPolynomial() = default;

  static PhotonPolynomial constant(cplx c);
  static PhotonPolynomial creation(ModeIndex m);

  void add_term(const Monomial& mono, cplx coeff);
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  int max_port() const;

  PhotonPolynomial& operator+=(const PhotonPolynomial& o);
  PhotonPolynomial& operator*=(cplx s);
  friend PhotonPolynomial operator+(PhotonPolynomial a, const PhotonPolynomial& b) { return a += b; }
  friend PhotonPolynomial operator*(PhotonPolynomial a, cplx s) { return a *= s; }
  friend PhotonPolynomial operator*(cplx s, PhotonPolynomial a) { return a *= s; }
  friend PhotonPolynomial operator*(const PhotonPolynomial& a, const PhotonPolynomial& b);

  // Drops coefficients under kDropTolerance.
  void canonicalize();

  bool approx_equal(const PhotonPolynomial& o, double tol = kCompareTolerance) const;

 private:
  TermMap terms_;
};

struct HybridKey {
  std::string atoms;  // '0'/'1' per atom, leftmost = atom 1
  FockState photons;

  auto operator<=>(const HybridKey&) const = default;
};

class HybridState {
 public:
  using TermMap = std::map<HybridKey, cplx>;

  explicit HybridState(int n_atoms = 0) : n_atoms_(n_atoms) {}

  int n_atoms() const { return n_atoms_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  void add(const std::string& atoms, const FockState& photons, cplx amp);
  void canonicalize();

  double norm2() const;
  int max_port() const;

  HybridState& operator*=(cplx s);

 private:
  int n_atoms_;
  TermMap terms_;
};

class MultiportMatrix;

// Replaces each input creation operator a†_{j,pol} by Σ_k M_{jk} b†_{k,pol},
// where M must be the inverse transform of the interferometer.
PhotonPolynomial apply_mode_transform(const PhotonPolynomial& poly, const MultiportMatrix& inverse_matrix);

// Normal-ordered expansion: (a†)^k|0> = sqrt(k!)|k>.
HybridState expand_to_fock(const PhotonPolynomial& poly, const std::string& atoms);

cplx inner_product(const HybridState& a, const HybridState& b);

// Photons of b are shifted by port_offset before merging. A collision of
// occupied ports is an error unless the offset separates them.
HybridState tensor(const HybridState& a, const HybridState& b, int port_offset = 0);

// Sends every photonic component of `state` through U (via inverse(U)).
HybridState propagate(const HybridState& state, const MultiportMatrix& U);

// Expansion size estimate used by the capacity guard.
std::size_t estimated_expansion(const HybridState& state, int dim);

}  // namespace qnet
