#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracbound/errors.hpp"
#include "fracbound/norms.hpp"

using namespace fracbound;
using std::numbers::pi;

namespace {
Eigen::VectorXd sample(const SpaceGrid& g, const std::function<double(const Point&)>& f) {
  Eigen::VectorXd v(Eigen::Index(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) v[Eigen::Index(i)] = f(g.node(i));
  return v;
}
}  // namespace

TEST_CASE("weighted L2") {
  const SpaceGrid g = make_space_grid(1, 10.0, 512);
  const Eigen::VectorXd v = sample(g, [](const Point& x) { return std::exp(-0.5 * x[0] * x[0]); });
  CHECK(std::abs(weighted_l2(g, v, WeightSpec::pure_radial(0.5)) - 1.0) < 2e-3);
  CHECK(weighted_l2(g, v, WeightSpec::pure_radial(0.0)) == doctest::Approx(std::sqrt(pi)).epsilon(1e-10));
  CHECK(weighted_l2(g, Eigen::VectorXd::Zero(512), WeightSpec::japanese(1.0, true)) == 0.0);
}

TEST_CASE("decreasing rearrangement") {
  const SpaceGrid g = make_space_grid(1, 4.0, 64);
  const Eigen::VectorXd f = sample(g, [](const Point& x) { return x[0] >= 0 && x[0] < 2 ? 1.0 : 0.0; });
  const StepFunction V = decreasing_rearrangement(g, f);
  CHECK(V(1.99) == 1.0);
  CHECK(V(2.01) == 0.0);

  const Eigen::VectorXd h = sample(g, [](const Point& x) { return std::exp(-x[0] * x[0]) * (1.5 + std::sin(3 * x[0])); });
  const StepFunction H = decreasing_rearrangement(g, h);
  CHECK(std::abs(H.integral() - h.sum() * g.cell_weight()) < 1e-12);
  for (std::size_t j = 1; j < H.values.size(); ++j) CHECK(H.values[j] <= H.values[j - 1]);
  for (double t : {0.1, 0.5, 1.0, 2.0}) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < h.size(); ++i)
      if (h[i] > t) m += g.cell_weight();
    CHECK(H.measure_above(t) == doctest::Approx(m));
  }
}

TEST_CASE("weak Lp") {
  CHECK(weak_lp(RadialPowerSymbol{0.5, 1}, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  for (double p : {2.01, 2.1, 2.5}) CHECK(weak_lp(RadialPowerSymbol{1.0 / p, 1}, p) <= std::pow(2.0, 1.0 / p) + 1e-6);
  CHECK(std::isinf(weak_lp(RadialPowerSymbol{0.25, 1}, 2.0)));

  const SpaceGrid g = make_space_grid(1, 4.0, 64);
  const Eigen::VectorXd ind = sample(g, [](const Point& x) { return x[0] >= 0 && x[0] < 1 ? 1.0 : 0.0; });
  for (double p : {1.0, 2.0, 3.5}) CHECK(weak_lp(g, ind, p) == doctest::Approx(1.0));
  CHECK(weak_lp(g, Eigen::VectorXd::Zero(64), 2.0) == 0.0);
}

TEST_CASE("mixed lattice norms") {
  const SpaceGrid g = make_space_grid(1, 3.0, 48);
  const Eigen::VectorXd chi0 = sample(g, [](const Point& x) { return x[0] >= -0.5 && x[0] < 0.5 ? 1.0 : 0.0; });
  const Eigen::VectorXd chi01 = sample(g, [](const Point& x) { return x[0] >= -0.5 && x[0] < 1.5 ? 1.0 : 0.0; });
  for (double p : {1.0, 2.0})
    for (double q : {1.0, 1.5, 2.0}) CHECK(mixed_norm(g, chi0, p, q, false) == doctest::Approx(1.0));
  CHECK(mixed_norm(g, chi01, 2.0, 1.0, false) == doctest::Approx(2.0));
  CHECK(mixed_norm(g, chi01, 1.3, 2.0, false) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(mixed_norm(make_space_grid(1, 2.5, 40), chi0.head(40), 2.0, 2.0, false), Error);

  // ⟨m⟩^{−1/p'} over |m| ≤ 10⁵ stays below 2 in weak ℓ^{p'}.
  for (double pp : {1.5, 1.7, 1.9, 1.99}) {
    std::vector<double> a;
    for (int m = -100000; m <= 100000; ++m) a.push_back(std::pow(1.0 + double(m) * m, -0.5 / pp));
    CHECK(lattice_weak_norm(a, pp) <= 2.0);
  }
}

TEST_CASE("Orlicz norm") {
  const SpaceGrid g = make_space_grid(1, 4.0, 64);
  CHECK(orlicz_norm(g, Eigen::VectorXd::Zero(64)) == 0.0);
  // c ln(2 + c) = 1 on a set of measure 1 gives modular 1 at κ = 1.
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double c = 0.5 * (lo + hi);
    (c * std::log(2 + c) < 1.0 ? lo : hi) = c;
  }
  const double c = 0.5 * (lo + hi);
  const Eigen::VectorXd f = sample(g, [&](const Point& x) { return x[0] >= 0 && x[0] < 1 ? c : 0.0; });
  CHECK(std::abs(orlicz_norm(g, f) - 1.0) < 1e-8);
  CHECK(orlicz_norm(g, 2 * f) >= orlicz_norm(g, f));
}

TEST_CASE("oscillator log norm") {
  const SpaceGrid g = make_space_grid(1, 10.0, 256);
  const Eigen::VectorXd psi0 = sample(g, [](const Point& x) { return std::pow(pi, -0.25) * std::exp(-0.5 * x[0] * x[0]); });
  for (double eps : {0.01, 0.3}) {
    const double h = hermite_log_norm(g, psi0, eps, 40);
    CHECK(h * h == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
  }
  CHECK(hermite_log_norm(g, Eigen::VectorXd::Zero(256), 0.01, 40) == 0.0);

  const Eigen::VectorXd v = sample(g, [](const Point& x) { return 1.3 * std::exp(-0.3 * (x[0] - 0.7) * (x[0] - 0.7)); });
  const double a = hermite_log_norm(g, v, 0.01, 100), b = hermite_log_norm(g, v, 0.01, 200);
  CHECK(std::abs(a - b) < 1e-4 * b);
  CHECK_THROWS_AS(hermite_log_norm(g, v, 0.01, 2), Error);
}
