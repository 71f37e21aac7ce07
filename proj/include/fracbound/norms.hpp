#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fracbound/numgrid.hpp"

namespace fracbound {

struct WeightSpec {
  enum class Kind { PureRadial, JapaneseLog, OscillatorLog };
  Kind kind = Kind::PureRadial;
  double gamma = 0.0;
  bool with_log = false;
  double eps = 0.01;

  static WeightSpec pure_radial(double g) { return {Kind::PureRadial, g, false, 0.01}; }
  static WeightSpec japanese(double g, bool log) { return {Kind::JapaneseLog, g, log, 0.01}; }
  static WeightSpec oscillator_log(double e) { return {Kind::OscillatorLog, 0.0, false, e}; }

  double operator()(const Point& x) const;  // spatial weights only
};

// ∫ w(x)² |v(x)|² dx on the grid (squared weighted norm).
double weighted_l2(const SpaceGrid& g, const Eigen::VectorXd& v, const WeightSpec& w);
double lp_norm(const SpaceGrid& g, const Eigen::VectorXd& f, double p);

// Right-continuous nonincreasing step function: value[j] on [edge[j-1], edge[j]).
struct StepFunction {
  std::vector<double> edges;
  std::vector<double> values;

  double operator()(double t) const;
  double integral() const;
  double lp_norm(double p) const;
  double measure_above(double t) const;  // λ({V* > t})
};

StepFunction decreasing_rearrangement(const Eigen::VectorXd& f, double cell_measure);
StepFunction decreasing_rearrangement(const SpaceGrid& g, const Eigen::VectorXd& f);

// sup_t t·λ(|f| > t)^{1/p}, exact over the sample magnitudes.
double weak_lp(const Eigen::VectorXd& f, double cell_measure, double p);
double weak_lp(const SpaceGrid& g, const Eigen::VectorXd& f, double p);

// |ξ|^{-a}·1_{|ξ|≥1} on R^d, with closed-form distribution function.
struct RadialPowerSymbol {
  double a = 0.5;
  int d = 1;
  double operator()(const Point& xi) const;
};
double weak_lp(const RadialPowerSymbol& g, double p);

// Unit-cube L^p norms over integer-centred cubes [m − 1/2, m + 1/2)^d.
// With wrap_L > 0 the index L is identified with −L (spatial torus).
struct CubeNorms {
  std::vector<std::array<int, 2>> cubes;
  std::vector<double> norms;
};
CubeNorms cube_norms(const std::vector<Point>& pts, const Eigen::VectorXd& f, double cell_measure, double p, int d,
                     int wrap_L = 0);

double lattice_norm(const std::vector<double>& a, double q);       // ℓ^q
double lattice_weak_norm(const std::vector<double>& a, double q);  // ℓ^{q,∞}

double mixed_norm(const SpaceGrid& g, const Eigen::VectorXd& f, double p, double q, bool weak);

double orlicz_norm(const SpaceGrid& g, const Eigen::VectorXd& f);
double orlicz_modular(const SpaceGrid& g, const Eigen::VectorXd& f, double kappa);  // ∫Φ(|f|/κ)

struct HermiteExpansion {
  HermiteBasis basis;
  Eigen::VectorXd coeffs;  // aligned with basis.index
  double norm2 = 0.0;      // ‖v‖² under the Gauss-Hermite rule
  double residual = 0.0;   // norm2 − Σ|c_α|²

  // Grid samples of Σ_{α ∈ mask} c_α ψ_α.
  Eigen::VectorXd synthesize(const SpaceGrid& g, const std::function<bool(std::size_t)>& mask) const;
};

using PointFunction = std::function<double(const Point&)>;

// Coefficients by Gauss-Hermite quadrature. `exact` evaluates v off the grid
// when an analytic form is known; otherwise samples are trigonometrically
// interpolated (zero outside the box).
HermiteExpansion hermite_expansion(const SpaceGrid& g, const Eigen::VectorXd& v, int M,
                                   const PointFunction& exact = nullptr);

double oscillator_log_weight(double mu, double eps);  // ln μ·(ln ln μ)^{1+2ε}
double hermite_log_norm(const HermiteExpansion& H, double eps);
double hermite_log_norm(const SpaceGrid& g, const Eigen::VectorXd& v, double eps, int M,
                        const PointFunction& exact = nullptr);
int default_hermite_order(int d);  // 200 in d = 1, total degree 80 in d = 2

}  // namespace fracbound
