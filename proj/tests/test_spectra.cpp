#include <doctest.h>

#include <cmath>
#include <random>

#include "fracbound/errors.hpp"
#include "fracbound/spectra.hpp"

using namespace fracbound;

TEST_CASE("descending eigenvalues") {
  const Eigen::Vector3d dg(1, 3, 2);
  const Spectrum S = eigh_descending(dg.asDiagonal().toDenseMatrix());
  CHECK(S.values == std::vector<double>{3, 2, 1});
  const Spectrum I = eigh_descending(Eigen::MatrixXd::Identity(5, 5));
  for (double v : I.values) CHECK(v == doctest::Approx(1.0));
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(3, 3);
  A(0, 1) = 1.0;
  CHECK_THROWS_AS(eigh_descending(A), Error);
}

TEST_CASE("weak quasinorm and counting") {
  CHECK(weak_quasinorm(Spectrum{{4, 2, 1}}, 1.0) == doctest::Approx(4.0));
  CHECK(weak_quasinorm(Spectrum{std::vector<double>(9, 1.0)}, 2.0) == doctest::Approx(3.0));
  CHECK(weak_quasinorm(Spectrum{}, 1.0) == 0.0);
  CHECK_THROWS_AS(weak_quasinorm(Spectrum{{1, -1}}, 1.0), Error);
  CHECK(count_ge(Spectrum{{2, 1, 0.5}}, 1.0) == 2);
  CHECK(count_ge(Spectrum{{2, 1, 0.5}}, 3.0) == 0);
}

TEST_CASE("count is dominated by the weak trace norm on random PSD matrices") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01;
  for (int t = 0; t < 50; ++t) {
    const int n = 3 + t % 20;
    Eigen::MatrixXd G(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G(i, j) = n01(rng);
    const Spectrum S = clip_noise(eigh_descending(G * G.transpose() / n), 1e-12);
    CHECK(double(count_ge(S, 1.0)) <= weak_quasinorm(S, 1.0));
  }
}

TEST_CASE("variational principle") {
  const Eigen::Vector3d dg(2, 2, 0.5);
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(3, 1);
  F(0, 0) = 1.0;
  const VariationalResult r = variational_check(dg.asDiagonal().toDenseMatrix(), F);
  CHECK(r.lhs == 2);
  CHECK(r.dimF == 1);
  CHECK(r.projected == 1);
  CHECK(r.holds());

  const VariationalResult id = variational_check(Eigen::MatrixXd::Identity(6, 6), Eigen::MatrixXd::Random(6, 2));
  CHECK(id.lhs == 6);
  CHECK(id.dimF + id.projected == 6);

  Eigen::MatrixXd neg = -Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(variational_check(neg, F), Error);
}

TEST_CASE("random variational and interlacing property") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  std::size_t fails = 0;
  for (int t = 0; t < 200; ++t) {
    const int n = 3 + t % 38, D = 1 + t % (n - 1);
    Eigen::MatrixXd G(n, n), F(n, D);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) G(i, j) = n01(rng);
      for (int j = 0; j < D; ++j) F(i, j) = n01(rng);
    }
    if (!variational_check(2.0 * G * G.transpose() / n, F).holds()) ++fails;
  }
  CHECK(fails == 0);
}

TEST_CASE("Fan inequality") {
  const Eigen::MatrixXd H = 0.5 * Eigen::MatrixXd::Identity(4, 4);
  for (std::size_t m = 1; m <= 4; ++m) {
    const FanResult r = fan_check(H, H, m);
    CHECK(r.lhs == doctest::Approx(1.0));
    CHECK(r.holds);
  }
  const Eigen::MatrixXd A = Eigen::MatrixXd::Random(5, 4);
  for (std::size_t m = 1; m <= 4; ++m) CHECK(fan_check(A, Eigen::MatrixXd::Zero(5, 4), m).holds);
  CHECK_THROWS_AS(fan_check(A, Eigen::MatrixXd::Zero(4, 4), 1), Error);
}

TEST_CASE("orthonormalize drops dependent columns") {
  Eigen::MatrixXd F(4, 3);
  F << 1, 2, 0, 0, 0, 1, 1, 2, 0, 0, 0, 1;
  const Eigen::MatrixXd Q = orthonormalize(F);
  CHECK(Q.cols() == 2);
  CHECK((Q.transpose() * Q - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}
