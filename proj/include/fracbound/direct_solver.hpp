#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fracbound/numgrid.hpp"
#include "fracbound/potentials.hpp"

namespace fracbound {

// Plane-wave Galerkin matrix of (−Δ)^s − V in the real Fourier basis.
struct GalerkinHs {
  Eigen::MatrixXd H;
  Eigen::VectorXd kinetic;  // |ξ_k|^{2s}
  double s = 1.0;
  SpaceGrid grid;
  std::string potential_id;
};

// Qᵀ diag(V) Q: the multiplication operator in the real Fourier basis.
Eigen::MatrixXd potential_block(const Potential& P);
Eigen::VectorXd kinetic_symbol(const SpaceGrid& g, double s);

GalerkinHs assemble_direct(const SpaceGrid& grid, const Potential& P, double s);

struct NegativeCount {
  std::size_t count = 0;               // eigenvalues < −τ
  std::vector<double> near_threshold;  // eigenvalues in [−τ, 0)
  std::vector<double> negative;        // the counted eigenvalues, ascending
  double tau = 0.0;
};

// 1e-12·max(1, max_k |ξ_k|^{2s}): a few ulps of the largest diagonal entry.
double default_tau(const GalerkinHs& H);
NegativeCount count_negative(const GalerkinHs& H, double tau);
NegativeCount count_negative(const GalerkinHs& H);

// Convenience: assemble on P's own grid and count at the default threshold.
NegativeCount direct_count(const Potential& P, double s);

}  // namespace fracbound
