#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qnet {

class MultiportMatrix {
 public:
  using Matrix = Eigen::MatrixXcd;

  MultiportMatrix() = default;
  // Throws InvariantError unless `entries` is square, n >= 2 and unitary.
  MultiportMatrix(Matrix entries, std::string label);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  const std::string& label() const { return label_; }
  // 1-based accessor, mirroring the printed matrices.
  std::complex<double> at(int row, int col) const { return entries_(row - 1, col - 1); }

 private:
  Matrix entries_;
  std::string label_;
};

double unitarity_residual(const Eigen::MatrixXcd& m);  // max |U U† - I|
double symmetry_residual(const Eigen::MatrixXcd& m);   // max ||U_jk|² - 1/n|

MultiportMatrix beam_splitter();
MultiportMatrix tritter();
MultiportMatrix quarter();

// 2^d ports, d in [1, 5]. Butterfly wiring: layer k mixes ports whose 0-based
// labels differ only in bit k. For d = 2 this is B⊗B, which equals quarter()
// after swapping ports 3 and 4 on both sides (quarter_port_permutation()).
MultiportMatrix symmetric_multiport(int d);

// 0-based permutation P with quarter() = P · symmetric_multiport(2) · Pᵀ.
std::vector<int> quarter_port_permutation();

MultiportMatrix inverse(const MultiportMatrix& U);

bool verify_symmetric(const MultiportMatrix& U);

// Phase-plate hook: U' = diag(e^{iθ_out}) · U · diag(e^{iθ_in}).
// Either vector may be empty (no plates on that side).
MultiportMatrix with_phases(const MultiportMatrix& U, const std::vector<double>& input_phases,
                            const std::vector<double>& output_phases);

// Relative phase of the split-polarisation interferometer, in (-π, π].
double split_polarization_phase(double alpha_h, double alpha_v, double beta_h, double beta_v, double lambda);

// Row-relabelled copy: entry (j,k) of the result is U(perm[j], perm[k]).
MultiportMatrix permuted(const MultiportMatrix& U, const std::vector<int>& perm);

}  // namespace qnet
