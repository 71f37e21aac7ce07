#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace fracbound {

struct Spectrum {
  enum class Kind { Eigenvalues, SingularValues };
  std::vector<double> values;  // descending
  Kind kind = Kind::Eigenvalues;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t j) const { return values[j]; }
  double max() const { return values.empty() ? 0.0 : values.front(); }
};

double symmetry_defect(const Eigen::MatrixXd& M);  // ‖M − Mᵀ‖_max / ‖M‖_max

// Full symmetric eigensolve (LAPACK dsyevd). If vectors != nullptr the
// eigenvectors are returned as columns in the same descending order.
Spectrum eigh_descending(const Eigen::MatrixXd& M, Eigen::MatrixXd* vectors = nullptr);
Spectrum singular_values(const Eigen::MatrixXd& A);

// Copy of S with entries in [-tol, 0) set to zero, for PSD spectra that carry
// rounding noise below zero.
Spectrum clip_noise(const Spectrum& S, double tol);

double weak_quasinorm(const Spectrum& S, double p);
std::size_t count_ge(const Spectrum& S, double r);

struct VariationalResult {
  std::size_t dimF = 0;
  std::size_t lhs = 0;           // N_{≥1}(K)
  std::size_t projected = 0;     // N_{≥1}(Π⊥KΠ⊥)
  bool counting_holds = true;
  bool interlacing_holds = true;
  double worst_interlacing = 0;  // max_k λ_{D+k}(K) − λ_k(Π⊥KΠ⊥)
  bool holds() const { return counting_holds && interlacing_holds; }
};

// F: columns spanning the subspace (need not be orthonormal).
VariationalResult variational_check(const Eigen::MatrixXd& K, const Eigen::MatrixXd& F);

// Orthonormal basis of span(F) by column-pivoted QR, rank cut at rel_tol.
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& F, double rel_tol = 1e-10);

struct FanResult {
  double lhs = 0, rhs = 0;
  bool holds = true;
};

// μ_m(A+B) ≤ μ_{⌈m/2⌉}(A) + μ_{⌈m/2⌉}(B), singular values indexed from m = 1.
FanResult fan_check(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, std::size_t m);
FanResult fan_check(const Spectrum& sum, const Spectrum& a, const Spectrum& b, std::size_t m);

}  // namespace fracbound
