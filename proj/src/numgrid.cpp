#include "fracbound/numgrid.hpp"

#include <cmath>
#include <list>
#include <mutex>
#include <numbers>

#include <fftw3.h>
#include <lapacke.h>

#include "fracbound/errors.hpp"

namespace fracbound {

using std::numbers::pi;

std::size_t FreqGrid::size() const { return d == 1 ? N : std::size_t(N) * N; }

Point FreqGrid::node(std::size_t flat) const {
  if (d == 1) return {wavenumber(int(flat)) * dxi, 0.0};
  return {wavenumber(int(flat / N)) * dxi, wavenumber(int(flat % N)) * dxi};
}

double FreqGrid::cell_weight() const { return std::pow(dxi, d); }

std::size_t SpaceGrid::size() const { return d == 1 ? N : std::size_t(N) * N; }

double SpaceGrid::cell_weight() const { return std::pow(h(), d); }

Point SpaceGrid::node(std::size_t flat) const {
  if (d == 1) return {coord(int(flat)), 0.0};
  return {coord(int(flat / N)), coord(int(flat % N))};
}

std::vector<Point> SpaceGrid::nodes() const {
  std::vector<Point> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = node(i);
  return out;
}

SpaceGrid make_space_grid(int d, double L, int N) {
  if (d != 1 && d != 2) throw Error(Errc::BadDimension, "d must be 1 or 2");
  if (N % 2 != 0) throw Error(Errc::OddN, "N must be even");
  if (N < 8) throw Error(Errc::OddN, "N must be at least 8");
  if (!(L > 0.0)) throw Error(Errc::NonpositiveL, "L must be positive");
  SpaceGrid g;
  g.d = d;
  g.L = L;
  g.N = N;
  g.freq.d = d;
  g.freq.N = N;
  g.freq.dxi = pi / L;
  g.freq.nyquist = pi * N / (2.0 * L);
  return g;
}

namespace {

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

void dft(const SpaceGrid& g, std::vector<std::complex<double>>& buf, int sign) {
  auto* data = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = g.d == 1 ? fftw_plan_dft_1d(g.N, data, data, sign, FFTW_ESTIMATE)
                    : fftw_plan_dft_2d(g.N, g.N, data, data, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(fftw_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace

Eigen::VectorXcd apply_multiplier(const SpaceGrid& g, const Symbol& m, const Eigen::VectorXcd& u) {
  const std::size_t n = g.size();
  if (std::size_t(u.size()) != n) throw Error(Errc::ShapeMismatch, "grid function size");
  std::vector<std::complex<double>> buf(u.data(), u.data() + n);
  dft(g, buf, FFTW_FORWARD);
  for (std::size_t k = 0; k < n; ++k) {
    const double mk = m(g.freq.node(k));
    if (!std::isfinite(mk)) throw Error(Errc::NonfiniteSymbol, "symbol not finite on a frequency node");
    buf[k] *= mk;
  }
  dft(g, buf, FFTW_BACKWARD);
  Eigen::VectorXcd out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = buf[k] / double(n);
  return out;
}

Eigen::VectorXd apply_multiplier(const SpaceGrid& g, const Symbol& m, const Eigen::VectorXd& u) {
  return apply_multiplier(g, m, Eigen::VectorXcd(u.cast<std::complex<double>>())).real();
}

namespace {

// 1-d real basis: column 0 constant, then (cos, sin) pairs, Nyquist cosine last.
void real_basis_1d(const SpaceGrid& g, Eigen::MatrixXd& Q, std::vector<int>& kappa) {
  const int N = g.N;
  Q.resize(N, N);
  kappa.assign(N, 0);
  const double c0 = 1.0 / std::sqrt(double(N));
  const double c1 = std::sqrt(2.0 / N);
  for (int i = 0; i < N; ++i) {
    const double t = pi * (2.0 * i / N - 1.0);  // (π/L)·x_i
    Q(i, 0) = c0;
    for (int k = 1; k < N / 2; ++k) {
      Q(i, 2 * k - 1) = c1 * std::cos(k * t);
      Q(i, 2 * k) = c1 * std::sin(k * t);
    }
    Q(i, N - 1) = c0 * std::cos(N / 2 * t);
  }
  for (int k = 1; k < N / 2; ++k) kappa[2 * k - 1] = kappa[2 * k] = k;
  kappa[N - 1] = N / 2;
}

}  // namespace

std::shared_ptr<const RealFourierBasis> real_fourier_basis(const SpaceGrid& g) {
  static std::mutex mtx;
  static std::list<std::pair<std::array<double, 3>, std::shared_ptr<const RealFourierBasis>>> cache;
  const std::array<double, 3> key{double(g.d), g.L, double(g.N)};
  {
    std::lock_guard<std::mutex> lock(mtx);
    for (auto it = cache.begin(); it != cache.end(); ++it) {
      if (it->first == key) {
        cache.splice(cache.begin(), cache, it);
        return cache.front().second;
      }
    }
  }
  auto b = std::make_shared<RealFourierBasis>();
  b->d = g.d;
  Eigen::MatrixXd Q1;
  std::vector<int> kap;
  real_basis_1d(g, Q1, kap);
  const int N = g.N;
  if (g.d == 1) {
    b->Q = std::move(Q1);
    b->xi.resize(N);
    for (int a = 0; a < N; ++a) b->xi[a] = {kap[a] * g.freq.dxi, 0.0};
  } else {
    const std::size_t n = std::size_t(N) * N;
    b->Q.resize(n, n);
    for (int a = 0; a < N; ++a)
      for (int c = 0; c < N; ++c) {
        const std::size_t col = std::size_t(a) * N + c;
        for (int i = 0; i < N; ++i)
          for (int j = 0; j < N; ++j) b->Q(std::size_t(i) * N + j, col) = Q1(i, a) * Q1(j, c);
      }
    b->xi.resize(n);
    for (int a = 0; a < N; ++a)
      for (int c = 0; c < N; ++c) b->xi[std::size_t(a) * N + c] = {kap[a] * g.freq.dxi, kap[c] * g.freq.dxi};
  }
  std::lock_guard<std::mutex> lock(mtx);
  cache.emplace_front(key, b);
  if (cache.size() > 4) cache.pop_back();
  return b;
}

Eigen::VectorXd RealFourierBasis::symbol(const Symbol& m) const {
  Eigen::VectorXd out(xi.size());
  for (std::size_t c = 0; c < xi.size(); ++c) {
    const Point& p = xi[c];
    double v;
    if (d == 1) {
      v = 0.5 * (m({p[0], 0.0}) + m({-p[0], 0.0}));
    } else {
      v = 0.25 * (m({p[0], p[1]}) + m({-p[0], p[1]}) + m({p[0], -p[1]}) + m({-p[0], -p[1]}));
    }
    if (!std::isfinite(v)) throw Error(Errc::NonfiniteSymbol, "symbol not finite on a frequency node");
    out[c] = v;
  }
  return out;
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

RadialAnnuli make_annuli(int K_ann, int nodes_per_annulus, int d, int angular_nodes) {
  if (d != 1 && d != 2) throw Error(Errc::BadDimension, "d must be 1 or 2");
  RadialAnnuli A;
  A.d = d;
  A.K = K_ann;
  for (int k = 0; k <= K_ann; ++k) A.sigma.push_back(std::exp(-double(k)));
  std::vector<double> gx, gw;
  gauss_legendre(nodes_per_annulus, gx, gw);
  for (int k = 0; k < K_ann; ++k) {
    const double a = A.sigma[k + 1], b = A.sigma[k];
    for (int q = 0; q < nodes_per_annulus; ++q) {
      const double r = 0.5 * (b - a) * gx[q] + 0.5 * (a + b);
      const double wr = 0.5 * (b - a) * gw[q];
      A.radial_nodes.push_back(r);
      A.radial_weights.push_back(wr);
      if (d == 1) {
        A.points.push_back({r, 0.0});
        A.points.push_back({-r, 0.0});
        A.weights.push_back(wr);
        A.weights.push_back(wr);
        A.annulus.push_back(k);
        A.annulus.push_back(k);
      } else {
        for (int t = 0; t < angular_nodes; ++t) {
          const double th = 2.0 * pi * t / angular_nodes;
          A.points.push_back({r * std::cos(th), r * std::sin(th)});
          A.weights.push_back(wr * r * 2.0 * pi / angular_nodes);
          A.annulus.push_back(k);
        }
      }
    }
  }
  return A;
}

double RadialAnnuli::integrate(const Symbol& f) const {
  double s = 0.0;
  for (std::size_t q = 0; q < points.size(); ++q) s += weights[q] * f(points[q]);
  return s;
}

double RadialAnnuli::integrate_radial(const std::function<double(double)>& f) const {
  const double surface = d == 1 ? 2.0 : 2.0 * pi;
  double s = 0.0;
  for (std::size_t q = 0; q < radial_nodes.size(); ++q) {
    const double r = radial_nodes[q];
    s += radial_weights[q] * f(r) * (d == 1 ? 1.0 : r);
  }
  return surface * s;
}

void hermite_functions(double x, int M, double* out) {
  // psi_k = phi_k · exp(scale - x²/2); phi is rescaled whenever it grows large.
  double scale = 0.0;
  double pm = 0.0, p = std::pow(pi, -0.25);
  auto emit = [&](int k, double val) { out[k] = val * std::exp(scale - 0.5 * x * x); };
  emit(0, p);
  for (int k = 0; k < M; ++k) {
    double next = std::sqrt(2.0 / (k + 1)) * x * p - std::sqrt(double(k) / (k + 1)) * pm;
    pm = p;
    p = next;
    if (std::abs(p) > 1e150) {
      p *= 1e-150;
      pm *= 1e-150;
      scale += 150.0 * std::log(10.0);
    }
    emit(k + 1, p);
  }
}

double HermiteBasis::cd() const { return std::exp(std::exp(1.0)) / d; }

double HermiteBasis::eigenvalue(const std::array<int, 2>& a) const {
  const int total = d == 1 ? a[0] : a[0] + a[1];
  return cd() * (2.0 * total + d);
}

double HermiteBasis::gram_defect() const {
  const Eigen::MatrixXd G = table.transpose() * Eigen::Map<const Eigen::VectorXd>(w.data(), w.size()).asDiagonal() * table;
  return (G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
}

HermiteBasis hermite_basis(int d, int M) {
  if (d != 1 && d != 2) throw Error(Errc::BadDimension, "d must be 1 or 2");
  if (M < 1) throw Error(Errc::OverflowOrder, "order must be at least 1");
  HermiteBasis H;
  H.d = d;
  H.M = M;
  const int n = 2 * M + 2;
  // Golub-Welsch: nodes are eigenvalues of the Jacobi matrix.
  std::vector<double> diag(n, 0.0), off(n - 1);
  for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(k / 2.0);
  if (LAPACKE_dstev(LAPACK_COL_MAJOR, 'N', n, diag.data(), off.data(), nullptr, 1) != 0)
    throw Error(Errc::OverflowOrder, "Gauss-Hermite node computation failed");
  H.x = diag;
  H.w.resize(n);
  std::vector<double> psi(n);
  H.table.resize(n, M + 1);
  for (int j = 0; j < n; ++j) {
    hermite_functions(H.x[j], n - 1, psi.data());
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += psi[k] * psi[k];
    H.w[j] = 1.0 / s;
    for (int k = 0; k <= M; ++k) H.table(j, k) = psi[k];
  }
  if (d == 1) {
    for (int a = 0; a <= M; ++a) H.index.push_back({a, 0});
  } else {
    for (int t = 0; t <= M; ++t)
      for (int a = t; a >= 0; --a) H.index.push_back({a, t - a});
  }
  if (!(H.gram_defect() <= 1e-6)) throw Error(Errc::OverflowOrder, "Hermite recurrence lost orthonormality");
  return H;
}

}  // namespace fracbound
