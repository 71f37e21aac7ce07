#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fracbound/norms.hpp"
#include "fracbound/numgrid.hpp"
#include "fracbound/spectra.hpp"

namespace fracbound {

using Cube = std::array<int, 2>;

// Integer-centred unit cube containing x; with wrap_L > 0 the index L folds to −L.
Cube cube_of(const Point& x, int d, int wrap_L = 0);
// Dyadic class n with 2^{n−1} < a ≤ 2^n (a > 0).
int dyadic_class(double a);

// f(x) on the grid, g(ξ) on its dual lattice, both split over unit cubes.
// Coefficients and samples are stored after normalization to
// ‖a‖_{ℓ^{p'}} = ‖b‖_{ℓ^{p',∞}} = 1; scale_f, scale_g undo it.
struct LatticeDecomposition {
  SpaceGrid grid;
  double pp = 1.8;
  Eigen::VectorXd f;  // normalized samples
  Symbol g;           // normalized symbol
  std::vector<Cube> x_cubes, k_cubes;
  std::vector<double> a, b;
  std::map<Cube, std::size_t> x_index, k_index;
  std::vector<std::size_t> cube_of_node;  // grid node -> x cube
  std::map<int, std::vector<std::size_t>> x_classes, k_classes;  // n -> cube positions with coefficient > 0
  double scale_f = 1.0, scale_g = 1.0;

  int x_class(std::size_t node) const;  // INT_MIN when a_m = 0
  int k_class(const Point& xi) const;   // INT_MIN when b_m = 0
};

LatticeDecomposition lattice_decompose(const SpaceGrid& g, const Eigen::VectorXd& f, const Symbol& sym, double pp);

// diag(f)·g(−i∇) as a dense matrix on the grid (symbol averaged over sign flips).
Eigen::MatrixXd multiplier_sandwich(const SpaceGrid& g, const Eigen::VectorXd& f, const Symbol& sym);

struct AnBn {
  int n = 0;
  Eigen::MatrixXd A, B;
  double hs2_A = 0.0;      // ‖A_n‖²_HS
  double trace_B = 0.0;    // ‖B_n‖_tr
  double recombination = 0.0;  // max |A_n + B_n − full|
  double hs_model = 0.0;   // 2^{(2−p')n}/(1 − 2^{p'−2})
  double tr_model = 0.0;   // 2^{(1−p')n}/(1 − 2^{1−p'})
  std::size_t fan_checked = 0, fan_violations = 0;
};

constexpr std::size_t kMaxDense = 4096;

// Single split level; `full` may be supplied to avoid reassembly.
AnBn an_bn_check(const LatticeDecomposition& D, int n, const Eigen::MatrixXd* full = nullptr);

struct AnBnScan {
  std::vector<AnBn> levels;  // matrices dropped, scalars kept
  double max_recombination = 0.0;
  double hs_slope = 0.0, tr_slope = 0.0;  // least squares on log2 vs n
  double C_hs = 0.0, C_tr = 0.0;          // max measured / model
  std::size_t fan_violations = 0;
};
AnBnScan an_bn_scan(const LatticeDecomposition& D, int n_lo = -5, int n_hi = 5);

struct SimonCurve {
  double pp = 1.8;
  std::vector<double> mu;     // μ_m, m = 1, 2, ...
  std::vector<double> shape;  // m^{−1/p'}(2−p')^{1/p'−1}‖f‖_{ℓ^{p'}(L²)}‖g‖*_{ℓ^{p',∞}(L²)}
  double C = 0.0;             // max μ_m / shape_m
  double slope = 0.0;         // log-log slope over the resolved part of [m_lo, m_hi]
  std::size_t resolved = 0;
};
SimonCurve simon_singular_bound(const SpaceGrid& g, const Eigen::VectorXd& f, const Symbol& sym, double pp,
                                std::size_t m_lo = 4, std::size_t m_hi = 256);
std::size_t simon_violations(const SimonCurve& c, double C);

struct EmbeddingResult {
  double lhs = 0.0;       // ‖f‖_{ℓ^{p'}(L²)}
  double rhs = 0.0;       // ((rq−d+1)/(rq−d))^{1/q}‖⟨x⟩^r f‖_{L²}
  double constant = 0.0;  // lhs / rhs
};
EmbeddingResult embedding_check(const SpaceGrid& g, const Eigen::VectorXd& f, double pp, double r);

// g² = g_p·g_{p'} for each p in the grid.
struct Factorization {
  std::string name;
  std::function<double(const Point&, double p)> gp, gpp;
  bool radial_power = false;  // g_p = |ξ|^{−d/p}1_{|ξ|≥1}: weak L^p norm in closed form
};
Factorization radial_power_factorization(int d);

std::vector<double> default_p_grid(int d, double delta, int kmax = 4);  // 1/p = 1/2 − δ/(d ln Λ_{k+1}), k = 1..kmax
double shell_level(int k);  // ln Λ_k = e^k

struct ShellTerm {
  int k = 0;
  double p = 2.0;
  std::size_t modes = 0;
  double norm = 0.0;       // ‖π_k f‖
  double weighted = 0.0;   // (ln Λ_{k+1})^{1/2}‖π_k f‖
  double lhs = 0.0;        // ‖π_k f(x)g(−i∇)‖*_{L^{2,∞}}
  double holder_p = 0.0, holder_pp = 0.0;  // weak norms with g_p and g_{p'}
  bool holder_holds = true;
  bool representable = true;  // Λ_{k+1} ≤ top oscillator level
};

struct Theorem17Report {
  double lhs = 0.0;
  double hermite = 0.0;  // hermite_log_norm(f, ε)
  double factor = 0.0;   // sup_p inf_fact sqrt(‖g_p‖·‖g_{p'}‖)
  double rhs = 0.0;
  double ratio = 0.0;
  double residual = 0.0;  // Hermite truncation residual
  std::vector<ShellTerm> shells;
  std::vector<double> partial_sums;  // of weighted shell terms
};

Theorem17Report theorem17_check(const SpaceGrid& g, const Eigen::VectorXd& f, const Symbol& sym,
                                const std::vector<Factorization>& family, double delta, double eps, int M = 0,
                                const std::vector<double>& p_grid = {});

}  // namespace fracbound
