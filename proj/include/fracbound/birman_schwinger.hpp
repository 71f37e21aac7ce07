#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fracbound/numgrid.hpp"
#include "fracbound/potentials.hpp"
#include "fracbound/spectra.hpp"

namespace fracbound {

// F_n = span{x^α v : |α| ≤ n}, n = floor(s − d/2).
struct MonomialSubspace {
  int n = 0;
  std::vector<std::array<int, 2>> alphas;
  Eigen::MatrixXd Q;  // orthonormal columns (Euclidean on grid vectors)
  double rank_tol = 1e-10;

  std::size_t dim() const { return std::size_t(Q.cols()); }
  Eigen::VectorXd project_out(const Eigen::VectorXd& u) const { return u - Q * (Q.transpose() * u); }
};

int subspace_order(double s, int d);  // floor(s − d/2)
std::size_t binom(int n, int k);
MonomialSubspace build_subspace(const Potential& P, double s, double rank_tol = 1e-10);

enum class Window { All, Low, High };
enum class Route { Auto, FourierNystrom, XKernel };
const char* window_name(Window w);

struct BSOptions {
  Route route = Route::Auto;
  bool acknowledge_truncation = false;  // required for s = d/2 with the high window
  int K_ann = 30;
  int radial_nodes = 16;
  int angular_nodes = 32;
  double rank_tol = 1e-10;
};

struct BSMatrix {
  Eigen::MatrixXd K;
  double E = -1.0;
  double s = 1.0;
  Window window = Window::All;
  bool projected = false;
  Route route = Route::XKernel;
  bool truncated = false;  // Ξ_max-truncated high window at s = d/2
};

BSMatrix assemble_K(const Potential& P, double s, double E, Window window, bool projected,
                    const BSOptions& opt = {});

// Low-window kernel G(x_i − x_j) from the annular quadrature, as a dense matrix.
Eigen::MatrixXd low_window_kernel(const SpaceGrid& g, double s, double E, const RadialAnnuli& A);

struct SweepPoint {
  double E = 0.0;
  std::size_t count = 0;
  std::vector<double> top;  // ten largest eigenvalues
  bool near_one = false;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  bool monotone_counts = true;
  std::size_t eigen_violations = 0;  // λ_j(K_E) decreasing in E, j < 10
  std::size_t plateau = 0;
  bool plateau_reached = false;
  bool near_one = false;
};

std::vector<double> default_energies();  // −2^{−j}, j = 0..20
SweepResult count_ge_one_sweep(const Potential& P, double s, const std::vector<double>& energies,
                               double delta1 = 1e-6);
// Sweeps for λV at every λ from one set of spectra: K_E is linear in V.
std::vector<SweepResult> coupling_sweep(const Potential& P, double s, const std::vector<double>& energies,
                                        const std::vector<double>& lambdas, double delta1 = 1e-6);

struct LowTrace {
  double value = 0.0;                 // ξ-quadrature of the plane-wave trace formula
  std::optional<double> matrix_trace; // tr(Π⊥K_{E,<1}Π⊥) from the assembled kernel (E < 0)
  double refined = 0.0;               // same quadrature on refined annuli
  double residual_exponent = 0.0;     // fitted small-|ξ| decay of ‖Π⊥e^{ixξ}v‖
};

LowTrace trace_low_projected(const Potential& P, double s, double E, const BSOptions& opt = {},
                             bool with_matrix = true);

struct HighNorm {
  double value = 0.0;  // sup_j (j+1) λ_j
  Spectrum spectrum;
  bool truncated = false;
  bool dominated = true;  // λ_j(K_{E,>1}) ≤ λ_j(K_{0,>1}) for E < 0
};

HighNorm weak_norm_high(const Potential& P, double s, double E, const BSOptions& opt = {});
// Same, reusing a precomputed potential_block(P).
HighNorm weak_norm_high(const Potential& P, double s, double E, const BSOptions& opt, const Eigen::MatrixXd& W);

// ⟨φ, K_E φ⟩ for a grid vector φ (Euclidean pairing), via the plane-wave form.
double quadratic_form(const Potential& P, double s, double E, const Eigen::VectorXd& phi);

}  // namespace fracbound
