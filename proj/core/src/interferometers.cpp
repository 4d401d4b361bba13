#include "qnet/interferometers.hpp"

#include <cmath>
#include <numbers>

#include "qnet/errors.hpp"
#include "qnet/photonics.hpp"

namespace qnet {

namespace {

using Matrix = Eigen::MatrixXcd;
constexpr cplx kI{0.0, 1.0};

// 50:50 splitter acting on 1-based modes a, b of an n-mode register.
Matrix embedded_bs(int n, int a, int b) {
  const double r = 1.0 / std::numbers::sqrt2;
  Matrix m = Matrix::Identity(n, n);
  m(a - 1, a - 1) = r;
  m(a - 1, b - 1) = kI * r;
  m(b - 1, a - 1) = kI * r;
  m(b - 1, b - 1) = r;
  return m;
}

}  // namespace

MultiportMatrix::MultiportMatrix(Matrix entries, std::string label)
    : entries_(std::move(entries)), label_(std::move(label)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 2)
    throw InvariantError("multiport matrix must be square with dim >= 2");
  if (unitarity_residual(entries_) >= kCompareTolerance)
    throw InvariantError("matrix '" + label_ + "' is not unitary");
}

double unitarity_residual(const Eigen::MatrixXcd& m) {
  const Matrix d = m * m.adjoint() - Matrix::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff();
}

double symmetry_residual(const Eigen::MatrixXcd& m) {
  const double target = 1.0 / static_cast<double>(m.rows());
  return (m.cwiseAbs2().array() - target).abs().maxCoeff();
}

MultiportMatrix beam_splitter() { return MultiportMatrix(embedded_bs(2, 1, 2), "bs"); }

MultiportMatrix tritter() {
  // 1:2 splitter on modes 1 and 3: transmission 2/3, reflection 1/3.
  Matrix f = Matrix::Identity(3, 3);
  const double t = std::sqrt(2.0 / 3.0);
  const double r = 1.0 / std::sqrt(3.0);
  f(0, 0) = t;
  f(0, 2) = kI * r;
  f(2, 0) = kI * r;
  f(2, 2) = t;
  // Rightmost factor acts first.
  return MultiportMatrix(embedded_bs(3, 2, 3) * f * embedded_bs(3, 1, 2), "tritter");
}

MultiportMatrix quarter() {
  return MultiportMatrix(embedded_bs(4, 2, 3) * embedded_bs(4, 1, 4) * embedded_bs(4, 3, 4) * embedded_bs(4, 1, 2),
                         "quarter");
}

MultiportMatrix symmetric_multiport(int d) {
  if (d < 1 || d > 5)
    throw RangeError("symmetric_multiport: d = " + std::to_string(d) + " exceeds capacity; d must be in [1, 5] (at most 32 ports)");
  const int n = 1 << d;
  Matrix u = Matrix::Identity(n, n);
  for (int layer = 0; layer < d; ++layer) {
    const int bit = 1 << layer;
    Matrix l = Matrix::Identity(n, n);
    for (int j = 0; j < n; ++j) {
      if (j & bit) continue;
      const Matrix b = embedded_bs(n, j + 1, (j | bit) + 1);
      l = b * l;  // disjoint pairs, order irrelevant
    }
    u = l * u;
  }
  return MultiportMatrix(u, d == 1 ? "bs" : "sym2d-" + std::to_string(d));
}

std::vector<int> quarter_port_permutation() { return {0, 1, 3, 2}; }

MultiportMatrix inverse(const MultiportMatrix& U) {
  // The constructor already guarantees unitarity, so U† is the inverse.
  return MultiportMatrix(U.entries().adjoint(), U.label() + "^-1");
}

bool verify_symmetric(const MultiportMatrix& U) { return symmetry_residual(U.entries()) < kCompareTolerance; }

MultiportMatrix with_phases(const MultiportMatrix& U, const std::vector<double>& input_phases,
                            const std::vector<double>& output_phases) {
  const int n = U.dim();
  auto diag = [n](const std::vector<double>& ph, const char* side) {
    Matrix d = Matrix::Identity(n, n);
    if (ph.empty()) return d;
    if (static_cast<int>(ph.size()) != n)
      throw DimensionError(std::string(side) + " phase list has " + std::to_string(ph.size()) +
                           " entries, expected " + std::to_string(n));
    for (int j = 0; j < n; ++j) d(j, j) = std::polar(1.0, ph[j]);
    return d;
  };
  return MultiportMatrix(diag(output_phases, "output") * U.entries() * diag(input_phases, "input"),
                         U.label() + "+phases");
}

double split_polarization_phase(double alpha_h, double alpha_v, double beta_h, double beta_v, double lambda) {
  if (!(lambda > 0.0)) throw RangeError("wavelength must be positive");
  const double two_pi = 2.0 * std::numbers::pi;
  double phi = std::remainder(two_pi * ((beta_h - beta_v) - (alpha_h - alpha_v)) / lambda, two_pi);
  if (phi <= -std::numbers::pi) phi += two_pi;
  return phi;
}

MultiportMatrix permuted(const MultiportMatrix& U, const std::vector<int>& perm) {
  const int n = U.dim();
  if (static_cast<int>(perm.size()) != n) throw DimensionError("permutation size does not match matrix");
  Matrix m(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) m(j, k) = U.entries()(perm[j], perm[k]);
  return MultiportMatrix(m, U.label() + "-permuted");
}

}  // namespace qnet
