#include "fracbound/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <lapacke.h>

#include "fracbound/errors.hpp"

namespace fracbound {

double symmetry_defect(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) return INFINITY;
  if (M.size() == 0) return 0.0;
  const double scale = M.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (M - M.transpose()).cwiseAbs().maxCoeff() / scale;
}

Spectrum eigh_descending(const Eigen::MatrixXd& M, Eigen::MatrixXd* vectors) {
  if (M.rows() != M.cols() || symmetry_defect(M) >= 1e-10)
    throw Error(Errc::NotSymmetric, "matrix is not symmetric");
  const lapack_int n = lapack_int(M.rows());
  Spectrum S;
  if (n == 0) return S;
  Eigen::MatrixXd A = M;
  std::vector<double> w(n);
  const char jobz = vectors ? 'V' : 'N';
  if (LAPACKE_dsyevd(LAPACK_COL_MAJOR, jobz, 'U', n, A.data(), n, w.data()) != 0)
    throw Error(Errc::NotSymmetric, "symmetric eigensolver did not converge");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return w[a] > w[b]; });
  S.values.resize(n);
  for (lapack_int j = 0; j < n; ++j) S.values[j] = w[order[j]];
  if (vectors) {
    vectors->resize(n, n);
    for (lapack_int j = 0; j < n; ++j) vectors->col(j) = A.col(order[j]);
  }
  return S;
}

Spectrum singular_values(const Eigen::MatrixXd& A) {
  Spectrum S;
  S.kind = Spectrum::Kind::SingularValues;
  const lapack_int m = lapack_int(A.rows()), n = lapack_int(A.cols());
  if (m == 0 || n == 0) return S;
  Eigen::MatrixXd B = A;
  std::vector<double> s(std::min(m, n));
  if (LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', m, n, B.data(), m, s.data(), nullptr, 1, nullptr, 1) != 0)
    throw Error(Errc::NotSymmetric, "singular value decomposition did not converge");
  std::sort(s.begin(), s.end(), std::greater<>());
  S.values = std::move(s);
  return S;
}

Spectrum clip_noise(const Spectrum& S, double tol) {
  Spectrum out = S;
  for (double& v : out.values)
    if (v < 0.0 && v >= -tol) v = 0.0;
  return out;
}

double weak_quasinorm(const Spectrum& S, double p) {
  double best = 0.0;
  for (std::size_t j = 0; j < S.values.size(); ++j) {
    const double v = S.values[j];
    if (v < 0.0) throw Error(Errc::NegativeEntry, "weak quasinorm of a negative entry");
    best = std::max(best, std::pow(double(j + 1), 1.0 / p) * v);
  }
  return best;
}

std::size_t count_ge(const Spectrum& S, double r) {
  return std::size_t(std::count_if(S.values.begin(), S.values.end(), [r](double v) { return v >= r; }));
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& F, double rel_tol) {
  if (F.cols() == 0) return Eigen::MatrixXd(F.rows(), 0);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(F);
  const Eigen::VectorXd diag = qr.matrixR().diagonal().cwiseAbs();
  const double top = diag.size() ? diag[0] : 0.0;
  Eigen::Index rank = 0;
  while (rank < diag.size() && diag[rank] > rel_tol * top) ++rank;
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(F.rows(), rank);
  return Q;
}

VariationalResult variational_check(const Eigen::MatrixXd& K, const Eigen::MatrixXd& F) {
  if (F.rows() != K.rows()) throw Error(Errc::ShapeMismatch, "subspace basis has wrong length");
  const Spectrum sk = eigh_descending(K);
  const double scale = std::max(1.0, std::abs(sk.max()));
  if (sk.size() && sk.values.back() < -1e-10 * scale) throw Error(Errc::NotPSD, "matrix is not positive semidefinite");
  const Eigen::MatrixXd Q = orthonormalize(F);
  const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(K.rows(), K.cols()) - Q * Q.transpose();
  Eigen::MatrixXd PKP = P * K * P;
  PKP = 0.5 * (PKP + PKP.transpose());
  const Spectrum sp = eigh_descending(PKP);
  VariationalResult r;
  r.dimF = std::size_t(Q.cols());
  const double tol = 1e-12 * scale * double(K.rows());
  r.lhs = count_ge(sk, 1.0);
  // Projection rounds eigenvalues sitting exactly at 1 down by a few ulps.
  r.projected = count_ge(sp, 1.0 - tol);
  r.counting_holds = r.lhs <= r.dimF + r.projected;
  r.worst_interlacing = -INFINITY;
  for (std::size_t k = 0; k + r.dimF < sk.size(); ++k) {
    const double excess = sk[r.dimF + k] - sp[k];
    r.worst_interlacing = std::max(r.worst_interlacing, excess);
    if (excess > tol) r.interlacing_holds = false;
  }
  return r;
}

FanResult fan_check(const Spectrum& sum, const Spectrum& a, const Spectrum& b, std::size_t m) {
  auto mu = [](const Spectrum& s, std::size_t j) { return j >= 1 && j <= s.size() ? s[j - 1] : 0.0; };
  const std::size_t half = (m + 1) / 2;
  FanResult r;
  r.lhs = mu(sum, m);
  r.rhs = mu(a, half) + mu(b, half);
  const double tol = 1e-12 * std::max({1.0, sum.max(), a.max() + b.max()});
  r.holds = r.lhs <= r.rhs + tol;
  return r;
}

FanResult fan_check(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, std::size_t m) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) throw Error(Errc::ShapeMismatch, "A and B differ in shape");
  return fan_check(singular_values(A + B), singular_values(A), singular_values(B), m);
}

}  // namespace fracbound
