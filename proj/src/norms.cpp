#include "fracbound/norms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "fracbound/errors.hpp"
#include "fracbound/potentials.hpp"

namespace fracbound {

using std::numbers::pi;

double WeightSpec::operator()(const Point& x) const {
  const double r = norm2(x);
  switch (kind) {
    case Kind::PureRadial: return gamma == 0.0 ? 1.0 : std::pow(r, gamma);
    case Kind::JapaneseLog: {
      const double jx = std::sqrt(1.0 + r * r);
      const double w = std::pow(jx, gamma);
      return with_log ? w * std::sqrt(1.0 + std::log(jx)) : w;
    }
    case Kind::OscillatorLog: break;
  }
  throw Error(Errc::TheoremNotApplicable, "oscillator weight is not a spatial weight");
}

double weighted_l2(const SpaceGrid& g, const Eigen::VectorXd& v, const WeightSpec& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double wi = w(g.node(i));
    s += wi * wi * v[Eigen::Index(i)] * v[Eigen::Index(i)];
  }
  return s * g.cell_weight();
}

double lp_norm(const SpaceGrid& g, const Eigen::VectorXd& f, double p) {
  return std::pow(f.array().abs().pow(p).sum() * g.cell_weight(), 1.0 / p);
}

double StepFunction::operator()(double t) const {
  if (t < 0.0) return values.empty() ? 0.0 : values.front();
  const auto it = std::upper_bound(edges.begin(), edges.end(), t);
  return it == edges.end() ? 0.0 : values[std::size_t(it - edges.begin())];
}

double StepFunction::integral() const { return lp_norm(1.0); }

double StepFunction::lp_norm(double p) const {
  double s = 0.0, prev = 0.0;
  for (std::size_t j = 0; j < edges.size(); ++j) {
    s += (edges[j] - prev) * std::pow(values[j], p);
    prev = edges[j];
  }
  return std::pow(s, 1.0 / p);
}

double StepFunction::measure_above(double t) const {
  double m = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j)
    if (values[j] > t) m = edges[j];
  return m;
}

StepFunction decreasing_rearrangement(const Eigen::VectorXd& f, double cell_measure) {
  std::vector<double> a(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) a[std::size_t(i)] = std::abs(f[i]);
  std::sort(a.begin(), a.end(), std::greater<>());
  StepFunction S;
  std::size_t j = 0;
  while (j < a.size() && a[j] > 0.0) {
    std::size_t k = j;
    while (k < a.size() && a[k] == a[j]) ++k;
    S.values.push_back(a[j]);
    S.edges.push_back(double(k) * cell_measure);
    j = k;
  }
  return S;
}

StepFunction decreasing_rearrangement(const SpaceGrid& g, const Eigen::VectorXd& f) {
  return decreasing_rearrangement(f, g.cell_weight());
}

double weak_lp(const Eigen::VectorXd& f, double cell_measure, double p) {
  // For t just below a sample magnitude y_j the level set holds every sample
  // ≥ y_j, so the supremum is attained along these breakpoints.
  const StepFunction S = decreasing_rearrangement(f, cell_measure);
  double best = 0.0;
  for (std::size_t j = 0; j < S.values.size(); ++j) best = std::max(best, S.values[j] * std::pow(S.edges[j], 1.0 / p));
  return best;
}

double weak_lp(const SpaceGrid& g, const Eigen::VectorXd& f, double p) { return weak_lp(f, g.cell_weight(), p); }

double RadialPowerSymbol::operator()(const Point& xi) const {
  const double r = norm2(xi);
  return r >= 1.0 ? std::pow(r, -a) : 0.0;
}

double weak_lp(const RadialPowerSymbol& g, double p) {
  // λ(|g| > t) = ω_d (t^{-d/a} − 1) for 0 < t < 1.
  const double omega = g.d == 1 ? 2.0 : pi;
  const double k = g.d / (g.a * p);
  if (k > 1.0 + 1e-14) return INFINITY;
  if (std::abs(k - 1.0) <= 1e-14) return std::pow(omega, 1.0 / p);
  auto F = [&](double lt) {
    const double t = std::exp(lt);
    return t * std::pow(omega * (std::pow(t, -g.d / g.a) - 1.0), 1.0 / p);
  };
  double lo = -60.0, hi = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (F(m1) < F(m2)) lo = m1;
    else hi = m2;
  }
  return F(0.5 * (lo + hi));
}

CubeNorms cube_norms(const std::vector<Point>& pts, const Eigen::VectorXd& f, double cell_measure, double p, int d,
                     int wrap_L) {
  std::map<std::array<int, 2>, double> acc;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::array<int, 2> m{0, 0};
    for (int a = 0; a < d; ++a) {
      int c = int(std::floor(pts[i][a] + 0.5));
      if (wrap_L > 0 && c == wrap_L) c = -wrap_L;
      m[a] = c;
    }
    acc[m] += std::pow(std::abs(f[Eigen::Index(i)]), p) * cell_measure;
  }
  CubeNorms out;
  for (const auto& [m, s] : acc) {
    out.cubes.push_back(m);
    out.norms.push_back(std::pow(s, 1.0 / p));
  }
  return out;
}

double lattice_norm(const std::vector<double>& a, double q) {
  double s = 0.0;
  for (double x : a) s += std::pow(std::abs(x), q);
  return std::pow(s, 1.0 / q);
}

double lattice_weak_norm(const std::vector<double>& a, double q) {
  std::vector<double> b(a.size());
  std::transform(a.begin(), a.end(), b.begin(), [](double x) { return std::abs(x); });
  std::sort(b.begin(), b.end(), std::greater<>());
  double best = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) best = std::max(best, std::pow(double(j + 1), 1.0 / q) * b[j]);
  return best;
}

double mixed_norm(const SpaceGrid& g, const Eigen::VectorXd& f, double p, double q, bool weak) {
  if (std::abs(g.L - std::round(g.L)) > 1e-12) throw Error(Errc::NonIntegerL, "unit cubes need an integer half-width");
  const CubeNorms c = cube_norms(g.nodes(), f, g.cell_weight(), p, g.d, int(std::lround(g.L)));
  return weak ? lattice_weak_norm(c.norms, q) : lattice_norm(c.norms, q);
}

double orlicz_modular(const SpaceGrid& g, const Eigen::VectorXd& f, double kappa) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double u = std::abs(f[i]) / kappa;
    s += u * std::log(2.0 + u);
  }
  return s * g.cell_weight();
}

double orlicz_norm(const SpaceGrid& g, const Eigen::VectorXd& f) {
  const double l1 = f.cwiseAbs().sum() * g.cell_weight();
  if (l1 == 0.0) return 0.0;
  double lo = l1, hi = l1;
  while (orlicz_modular(g, f, lo) <= 1.0) lo *= 0.5;
  while (orlicz_modular(g, f, hi) > 1.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (orlicz_modular(g, f, mid) > 1.0) lo = mid;
    else hi = mid;
  }
  return hi;
}

Eigen::VectorXd HermiteExpansion::synthesize(const SpaceGrid& g, const std::function<bool(std::size_t)>& mask) const {
  const int M = basis.M;
  Eigen::MatrixXd T(g.N, M + 1);
  std::vector<double> psi(M + 1);
  for (int i = 0; i < g.N; ++i) {
    hermite_functions(g.coord(i), M, psi.data());
    for (int k = 0; k <= M; ++k) T(i, k) = psi[std::size_t(k)];
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(Eigen::Index(g.size()));
  if (g.d == 1) {
    for (std::size_t a = 0; a < basis.index.size(); ++a)
      if (mask(a)) out += coeffs[Eigen::Index(a)] * T.col(basis.index[a][0]);
    return out;
  }
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(M + 1, M + 1);
  for (std::size_t a = 0; a < basis.index.size(); ++a)
    if (mask(a)) C(basis.index[a][0], basis.index[a][1]) = coeffs[Eigen::Index(a)];
  const Eigen::MatrixXd F = T * C * T.transpose();  // F(i, j) at (x_i, y_j)
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.N; ++j) out[Eigen::Index(std::size_t(i) * g.N + j)] = F(i, j);
  return out;
}

HermiteExpansion hermite_expansion(const SpaceGrid& g, const Eigen::VectorXd& v, int M, const PointFunction& exact) {
  HermiteExpansion H;
  H.basis = hermite_basis(g.d, M);
  const auto& x = H.basis.x;
  const auto& w = H.basis.w;
  const Eigen::Index n = Eigen::Index(x.size());
  auto value = [&](const Point& p) {
    if (exact) return exact(p);
    for (int a = 0; a < g.d; ++a)
      if (std::abs(p[a]) > g.L) return 0.0;
    return trig_interpolate(g, v, p);
  };
  const Eigen::Map<const Eigen::VectorXd> W(w.data(), n);
  if (g.d == 1) {
    Eigen::VectorXd f(n);
    for (Eigen::Index j = 0; j < n; ++j) f[j] = value({x[std::size_t(j)], 0.0});
    H.coeffs = H.basis.table.transpose() * W.cwiseProduct(f);
    H.norm2 = W.dot(f.cwiseProduct(f));
  } else {
    Eigen::MatrixXd F(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) F(i, j) = value({x[std::size_t(i)], x[std::size_t(j)]});
    const Eigen::MatrixXd WF = W.asDiagonal() * F * W.asDiagonal();
    const Eigen::MatrixXd C = H.basis.table.transpose() * WF * H.basis.table;
    H.coeffs.resize(Eigen::Index(H.basis.index.size()));
    for (std::size_t a = 0; a < H.basis.index.size(); ++a)
      H.coeffs[Eigen::Index(a)] = C(H.basis.index[a][0], H.basis.index[a][1]);
    H.norm2 = (WF.array() * F.array()).sum();
  }
  H.residual = H.norm2 - H.coeffs.squaredNorm();
  return H;
}

double oscillator_log_weight(double mu, double eps) {
  const double l = std::log(mu);
  return l * std::pow(std::log(l), 1.0 + 2.0 * eps);
}

double hermite_log_norm(const HermiteExpansion& H, double eps) {
  double s = 0.0;
  for (std::size_t a = 0; a < H.basis.index.size(); ++a) {
    const double c = H.coeffs[Eigen::Index(a)];
    s += c * c * oscillator_log_weight(H.basis.eigenvalue(a), eps);
  }
  return std::sqrt(s);
}

double hermite_log_norm(const SpaceGrid& g, const Eigen::VectorXd& v, double eps, int M, const PointFunction& exact) {
  if (v.size() == 0 || v.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  const HermiteExpansion H = hermite_expansion(g, v, M, exact);
  if (H.residual >= 1e-6 * H.norm2)
    throw Error(Errc::TruncationUnresolved, "Hermite truncation residual too large; raise M");
  return hermite_log_norm(H, eps);
}

int default_hermite_order(int d) { return d == 1 ? 200 : 80; }

}  // namespace fracbound
