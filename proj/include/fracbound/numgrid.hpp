#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace fracbound {

using Point = std::array<double, 2>;  // second component unused when d == 1
using Symbol = std::function<double(const Point&)>;

inline double norm2(const Point& p) { return std::sqrt(p[0] * p[0] + p[1] * p[1]); }

// Dual lattice of a SpaceGrid, stored in FFT order per axis.
struct FreqGrid {
  int d = 1;
  int N = 8;
  double dxi = 1.0;      // π/L
  double nyquist = 1.0;  // πN/(2L)

  std::size_t size() const;
  int wavenumber(int k) const { return k < N / 2 ? k : k - N; }
  Point node(std::size_t flat) const;
  double cell_weight() const;  // (π/L)^d
};

// Uniform grid on the torus [-L, L)^d, row-major flattening (axis 0 slowest).
struct SpaceGrid {
  int d = 1;
  double L = 1.0;
  int N = 8;
  FreqGrid freq;

  std::size_t size() const;
  double h() const { return 2.0 * L / N; }
  double cell_weight() const;
  double coord(int i) const { return -L + i * h(); }
  Point node(std::size_t flat) const;
  std::vector<Point> nodes() const;
  bool same_as(const SpaceGrid& o) const { return d == o.d && L == o.L && N == o.N; }
};

SpaceGrid make_space_grid(int d, double L, int N);

Eigen::VectorXcd apply_multiplier(const SpaceGrid& g, const Symbol& m, const Eigen::VectorXcd& u);
// Real part of the above; exact for symbols even in every coordinate.
Eigen::VectorXd apply_multiplier(const SpaceGrid& g, const Symbol& m, const Eigen::VectorXd& u);

// Orthonormal real trigonometric basis of the grid space (cos/sin tensor
// products). Column c has frequency modulus |xi[c]| for every radial symbol.
struct RealFourierBasis {
  Eigen::MatrixXd Q;
  std::vector<Point> xi;  // nonnegative representative frequency per column
  int d = 1;

  // Symbol averaged over coordinate sign flips; the exact eigenvalue when the
  // symbol is even in each coordinate.
  Eigen::VectorXd symbol(const Symbol& m) const;
};

// Cached per grid; the cache keeps the most recent few bases alive.
std::shared_ptr<const RealFourierBasis> real_fourier_basis(const SpaceGrid& g);

struct RadialAnnuli {
  int d = 1;
  int K = 30;
  std::vector<double> sigma;  // sigma[k] = e^{-k}, k = 0..K
  std::vector<Point> points;  // flattened quadrature nodes over all annuli
  std::vector<double> weights;
  std::vector<int> annulus;
  // Plain radial Gauss-Legendre rule on [sigma[k+1], sigma[k]), all annuli.
  std::vector<double> radial_nodes, radial_weights;

  double integrate(const Symbol& f) const;
  double integrate_radial(const std::function<double(double)>& f) const;  // ∫ f(|ξ|) dξ
};

RadialAnnuli make_annuli(int K_ann = 30, int nodes_per_annulus = 16, int d = 1, int angular_nodes = 32);

// Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// Normalized oscillator eigenfunctions psi_0..psi_M at x (three-term
// recurrence with running rescaling, stable far into the tails).
void hermite_functions(double x, int M, double* out);

struct HermiteBasis {
  int d = 1;
  int M = 1;               // 1-d maximal level (d=1) or total degree (d=2)
  std::vector<double> x;   // Gauss-Hermite nodes, size >= 2M
  std::vector<double> w;   // weights for ∫ f dx with f ~ polynomial·e^{-x²}
  Eigen::MatrixXd table;   // table(j, k) = psi_k(x_j)
  std::vector<std::array<int, 2>> index;  // multi-indices |α| <= M

  double cd() const;
  double eigenvalue(const std::array<int, 2>& a) const;  // c_d(2|α| + d)
  double eigenvalue(std::size_t i) const { return eigenvalue(index[i]); }
  double gram_defect() const;
};

HermiteBasis hermite_basis(int d, int M);

}  // namespace fracbound
