#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fracbound/numgrid.hpp"

namespace fracbound {

enum class DecayTag { Compact, Gaussian, Power, Sampled };
const char* decay_name(DecayTag t);

// One analytic profile amp·shape((x − center)/dilation).
struct ProfileTerm {
  enum class Shape { Well, Gaussian, Power, Bump };
  Shape shape = Shape::Gaussian;
  double amp = 0.0;
  double width = 1.0;  // a for well/bump, w for gaussian, core for power
  double beta = 0.0;   // power only
  Point center{0.0, 0.0};
  double dilation = 1.0;

  double operator()(const Point& x, int d) const;
};

struct PotentialKind {
  ProfileTerm::Shape shape = ProfileTerm::Shape::Gaussian;
  double V0 = 1.0;
  double width = 1.0;
  double beta = 0.0;
  Point center{0.0, 0.0};

  static PotentialKind well(double V0, double a) { return {ProfileTerm::Shape::Well, V0, a, 0.0, {0, 0}}; }
  static PotentialKind gaussian(double V0, double w) { return {ProfileTerm::Shape::Gaussian, V0, w, 0.0, {0, 0}}; }
  static PotentialKind power(double V0, double beta, double core) {
    return {ProfileTerm::Shape::Power, V0, core, beta, {0, 0}};
  }
  static PotentialKind bump(double V0, double a) { return {ProfileTerm::Shape::Bump, V0, a, 0.0, {0, 0}}; }
  PotentialKind at(Point c) const {
    PotentialKind k = *this;
    k.center = c;
    return k;
  }
};

struct Potential {
  SpaceGrid grid;
  Eigen::VectorXd values;  // V(x_i) ≥ 0
  Eigen::VectorXd v;       // V^{1/2}, cached at construction
  double coupling = 1.0;
  DecayTag tag = DecayTag::Sampled;
  double beta = 0.0;  // decay exponent for power tags
  std::vector<ProfileTerm> terms;  // analytic descriptor; empty when sampled
  bool truncated = false;          // set when resampling cut off support
  std::string id;

  bool analytic() const { return !terms.empty(); }
  bool is_zero() const { return values.size() == 0 || values.maxCoeff() == 0.0; }
  bool smooth() const { return tag == DecayTag::Gaussian || tag == DecayTag::Power || is_bump(); }
  bool is_bump() const;
  bool compactly_supported() const;
  double support_radius() const;  // analytic compact support radius (0 if none)
  double evaluate(const Point& x) const;  // analytic value; requires analytic()
};

Potential build(const PotentialKind& kind, const SpaceGrid& grid);
Potential zero_potential(const SpaceGrid& grid);
Potential from_values(const SpaceGrid& grid, const Eigen::VectorXd& values, const std::string& id = "sampled");
Potential combine(const Potential& a, const Potential& b);
Potential scale_coupling(const Potential& P, double lambda);
// x ↦ R^{-2s} V(x/R) sampled on `target` (defaults to the grid with half-width R·L).
Potential rescale_R(const Potential& P, double R, double s);
Potential rescale_R(const Potential& P, double R, double s, const SpaceGrid& target);

Potential load_samples(const std::string& path, const SpaceGrid& grid);
void save_samples(const Potential& P, const std::string& path);

// Periodic trigonometric interpolation of grid samples at an arbitrary point.
double trig_interpolate(const SpaceGrid& g, const Eigen::VectorXd& f, const Point& x);

}  // namespace fracbound
