#include "fracbound/birman_schwinger.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "fracbound/direct_solver.hpp"
#include "fracbound/errors.hpp"

namespace fracbound {

using std::numbers::pi;

namespace {

bool is_critical(double s, int d) { return std::abs(s - 0.5 * d) < 1e-12; }

// e^{iθ} − Σ_{j≤n} (iθ)^j / j!, accurate for small θ.
std::complex<double> taylor_remainder(double theta, int n) {
  if (n < 0) return std::polar(1.0, theta);
  if (std::abs(theta) < 1.0) {
    std::complex<double> term = 1.0, sum = 0.0;
    const std::complex<double> it(0.0, theta);
    for (int j = 1; j <= n + 40; ++j) {
      term *= it / double(j);
      if (j > n) sum += term;
      if (j > n && std::abs(term) < 1e-300) break;
    }
    return sum;
  }
  std::complex<double> poly = 0.0, term = 1.0;
  const std::complex<double> it(0.0, theta);
  for (int j = 0; j <= n; ++j) {
    poly += term;
    term *= it / double(j + 1);
  }
  return std::polar(1.0, theta) - poly;
}

Eigen::MatrixXd project_both_sides(const Eigen::MatrixXd& K, const Eigen::MatrixXd& Q) {
  if (Q.cols() == 0) return K;
  const Eigen::MatrixXd KQ = K * Q;
  const Eigen::MatrixXd QtKQ = Q.transpose() * KQ;
  Eigen::MatrixXd out = K - KQ * Q.transpose() - Q * KQ.transpose() + Q * QtKQ * Q.transpose();
  return 0.5 * (out + out.transpose());
}

double annulus_denominator(const Point& xi, double s, double E) { return std::pow(norm2(xi), 2.0 * s) - E; }

}  // namespace

int subspace_order(double s, int d) { return int(std::floor(s - 0.5 * d + 1e-12)); }

std::size_t binom(int n, int k) {
  if (k < 0 || n < k) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * std::size_t(n - k + i) / std::size_t(i);
  return r;
}

const char* window_name(Window w) {
  switch (w) {
    case Window::All: return "all";
    case Window::Low: return "low";
    case Window::High: return "high";
  }
  return "all";
}

MonomialSubspace build_subspace(const Potential& P, double s, double rank_tol) {
  MonomialSubspace F;
  F.rank_tol = rank_tol;
  const SpaceGrid& g = P.grid;
  F.n = subspace_order(s, g.d);
  const Eigen::Index rows = Eigen::Index(g.size());
  if (F.n < 0 || P.is_zero()) {
    F.Q.resize(rows, 0);
    return F;
  }
  for (int t = 0; t <= F.n; ++t) {
    if (g.d == 1) {
      F.alphas.push_back({t, 0});
    } else {
      for (int a = t; a >= 0; --a) F.alphas.push_back({a, t - a});
    }
  }
  Eigen::MatrixXd A(rows, Eigen::Index(F.alphas.size()));
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Point x = g.node(std::size_t(i));
    for (std::size_t c = 0; c < F.alphas.size(); ++c)
      A(i, Eigen::Index(c)) = std::pow(x[0], F.alphas[c][0]) * std::pow(x[1], F.alphas[c][1]) * P.v[i];
  }
  const Eigen::MatrixXd G = A.transpose() * A;
  Eigen::MatrixXd U;
  const Spectrum S = eigh_descending(0.5 * (G + G.transpose()), &U);
  Eigen::Index rank = 0;
  while (rank < Eigen::Index(S.size()) && S[std::size_t(rank)] > rank_tol * S.max()) ++rank;
  const Eigen::MatrixXd B = A * U.leftCols(rank);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
  F.Q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, rank);
  return F;
}

Eigen::MatrixXd low_window_kernel(const SpaceGrid& g, double s, double E, const RadialAnnuli& A) {
  const int N = g.N;
  const double h = g.h();
  const double norm = std::pow(2.0 * pi, -g.d);
  std::vector<double> c(A.points.size());
  for (std::size_t q = 0; q < c.size(); ++q) c[q] = norm * A.weights[q] / annulus_denominator(A.points[q], s, E);
  const int M = 2 * N - 1;
  const std::size_t n = g.size();
  Eigen::MatrixXd G(n, n);
  if (g.d == 1) {
    std::vector<double> lat(M);
    for (int k = 0; k < M; ++k) {
      const double delta = (k - (N - 1)) * h;
      double acc = 0.0;
      for (std::size_t q = 0; q < c.size(); ++q) acc += c[q] * std::cos(A.points[q][0] * delta);
      lat[k] = acc;
    }
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) G(i, j) = lat[i - j + N - 1];
  } else {
    std::vector<double> lat(std::size_t(M) * M);
    for (int a = 0; a < M; ++a) {
      const double dx = (a - (N - 1)) * h;
      for (int b = 0; b < M; ++b) {
        const double dy = (b - (N - 1)) * h;
        double acc = 0.0;
        for (std::size_t q = 0; q < c.size(); ++q)
          acc += c[q] * std::cos(A.points[q][0] * dx + A.points[q][1] * dy);
        lat[std::size_t(a) * M + b] = acc;
      }
    }
    for (int i1 = 0; i1 < N; ++i1)
      for (int i2 = 0; i2 < N; ++i2)
        for (int j1 = 0; j1 < N; ++j1)
          for (int j2 = 0; j2 < N; ++j2)
            G(std::size_t(i1) * N + i2, std::size_t(j1) * N + j2) =
                lat[std::size_t(i1 - j1 + N - 1) * M + std::size_t(i2 - j2 + N - 1)];
  }
  return G;
}

namespace {

// Π⊥ applied to the plane waves e^{ix·ξ_q}v for all annular nodes, stacked as
// real/imaginary column pairs scaled so that B Bᵀ = Π⊥ K_{E,<1} Π⊥.
Eigen::MatrixXd projected_low_factor(const Potential& P, const MonomialSubspace& F, double s, double E,
                                     const RadialAnnuli& A) {
  const SpaceGrid& g = P.grid;
  const Eigen::Index n = Eigen::Index(g.size());
  const auto nodes = g.nodes();
  const double base = g.cell_weight() * std::pow(2.0 * pi, -g.d);
  Eigen::MatrixXd B(n, 2 * Eigen::Index(A.points.size()));
  Eigen::VectorXd re(n), im(n);
  for (std::size_t q = 0; q < A.points.size(); ++q) {
    const Point& xi = A.points[q];
    for (Eigen::Index i = 0; i < n; ++i) {
      const double theta = xi[0] * nodes[std::size_t(i)][0] + xi[1] * nodes[std::size_t(i)][1];
      const std::complex<double> r = taylor_remainder(theta, F.n) * P.v[i];
      re[i] = r.real();
      im[i] = r.imag();
    }
    const double c = std::sqrt(base * A.weights[q] / annulus_denominator(xi, s, E));
    B.col(2 * Eigen::Index(q)) = c * F.project_out(re);
    B.col(2 * Eigen::Index(q) + 1) = c * F.project_out(im);
  }
  return B;
}

}  // namespace

BSMatrix assemble_K(const Potential& P, double s, double E, Window window, bool projected, const BSOptions& opt) {
  const SpaceGrid& g = P.grid;
  if (E > 0.0) throw Error(Errc::DivergentAtZero, "energy must be nonpositive");
  if (E == 0.0) {
    const bool low_ok = window == Window::Low && projected && s > 0.5 * g.d + 1e-12;
    const bool high_ok = window == Window::High;
    if (!low_ok && !high_ok) throw Error(Errc::DivergentAtZero, "E = 0 needs the projected low window with s > d/2");
  }
  BSMatrix M;
  M.E = E;
  M.s = s;
  M.window = window;
  M.projected = projected;
  if (window == Window::High && is_critical(s, g.d)) {
    if (!opt.acknowledge_truncation)
      throw Error(Errc::UnresolvedWindow, "critical high window requires acknowledging the Ξ_max truncation");
    M.truncated = true;
  }
  const bool nystrom = window == Window::All && !projected && opt.route != Route::XKernel;
  const Eigen::Index n = Eigen::Index(g.size());
  if (P.is_zero()) {
    M.K = Eigen::MatrixXd::Zero(n, n);
    M.route = nystrom ? Route::FourierNystrom : Route::XKernel;
    return M;
  }
  if (nystrom) {
    M.route = Route::FourierNystrom;
    const Eigen::VectorXd D = (kinetic_symbol(g, s).array() - E).rsqrt();
    M.K = D.asDiagonal() * potential_block(P) * D.asDiagonal();
    M.K = 0.5 * (M.K + M.K.transpose()).eval();
    return M;
  }
  M.route = Route::XKernel;
  MonomialSubspace F;
  if (projected) F = build_subspace(P, s, opt.rank_tol);
  const RadialAnnuli A = make_annuli(opt.K_ann, opt.radial_nodes, g.d, opt.angular_nodes);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  bool low_done = false;
  if (window != Window::High) {
    if (E == 0.0) {
      const Eigen::MatrixXd B = projected_low_factor(P, F, s, E, A);
      K = B * B.transpose();
      low_done = true;
    } else {
      K = g.cell_weight() * (P.v.asDiagonal() * low_window_kernel(g, s, E, A) * P.v.asDiagonal());
    }
  }
  if (window != Window::Low) {
    const auto basis = real_fourier_basis(g);
    const Eigen::VectorXd kin = kinetic_symbol(g, s);
    std::vector<Eigen::Index> cols;
    for (Eigen::Index c = 0; c < n; ++c)
      if (norm2(basis->xi[std::size_t(c)]) > 1.0) cols.push_back(c);
    Eigen::MatrixXd B(n, Eigen::Index(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
      B.col(Eigen::Index(j)) = P.v.cwiseProduct(basis->Q.col(cols[j])) / std::sqrt(kin[cols[j]] - E);
    K += B * B.transpose();
  }
  if (projected && !low_done) K = project_both_sides(K, F.Q);
  M.K = 0.5 * (K + K.transpose());
  return M;
}

std::vector<double> default_energies() {
  std::vector<double> E;
  for (int j = 0; j <= 20; ++j) E.push_back(-std::ldexp(1.0, -j));
  return E;
}

namespace {

struct EnergySpectrum {
  double E;
  Spectrum S;
};

std::vector<EnergySpectrum> sweep_spectra(const Potential& P, double s, const std::vector<double>& energies) {
  for (double E : energies)
    if (!(E < 0.0)) throw Error(Errc::DivergentAtZero, "sweep energies must be negative");
  const Eigen::MatrixXd W = P.is_zero() ? Eigen::MatrixXd::Zero(Eigen::Index(P.grid.size()), Eigen::Index(P.grid.size()))
                                        : potential_block(P);
  const Eigen::VectorXd kin = kinetic_symbol(P.grid, s);
  std::vector<EnergySpectrum> out;
  for (double E : energies) {
    const Eigen::VectorXd D = (kin.array() - E).rsqrt();
    Eigen::MatrixXd K = D.asDiagonal() * W * D.asDiagonal();
    K = 0.5 * (K + K.transpose()).eval();
    out.push_back({E, eigh_descending(K)});
  }
  return out;
}

// Sweep of λ·K_E from the spectra of K_E.
SweepResult sweep_from_spectra(const std::vector<EnergySpectrum>& spectra, double lambda, double delta1) {
  SweepResult R;
  for (const auto& [E, S0] : spectra) {
    Spectrum S = S0;
    for (double& l : S.values) l *= lambda;
    SweepPoint pt;
    pt.E = E;
    pt.count = count_ge(S, 1.0);
    for (std::size_t j = 0; j < std::min<std::size_t>(10, S.size()); ++j) pt.top.push_back(S[j]);
    for (double l : S.values)
      if (l > 1.0 - delta1 && l < 1.0 + delta1) pt.near_one = true;
    R.near_one = R.near_one || pt.near_one;
    if (!R.points.empty()) {
      const SweepPoint& prev = R.points.back();
      if (E > prev.E) {
        if (pt.count < prev.count) R.monotone_counts = false;
        const double tol = 1e-12 * std::max(1.0, pt.top.empty() ? 0.0 : std::abs(pt.top[0]));
        for (std::size_t j = 0; j < std::min(prev.top.size(), pt.top.size()); ++j)
          if (prev.top[j] > pt.top[j] + tol) ++R.eigen_violations;
      }
    }
    R.points.push_back(std::move(pt));
  }
  if (!R.points.empty()) {
    R.plateau = R.points.back().count;
    const std::size_t m = R.points.size();
    R.plateau_reached = m >= 3 && R.points[m - 1].count == R.points[m - 2].count &&
                        R.points[m - 2].count == R.points[m - 3].count;
  }
  return R;
}

}  // namespace

SweepResult count_ge_one_sweep(const Potential& P, double s, const std::vector<double>& energies, double delta1) {
  return sweep_from_spectra(sweep_spectra(P, s, energies), 1.0, delta1);
}

std::vector<SweepResult> coupling_sweep(const Potential& P, double s, const std::vector<double>& energies,
                                        const std::vector<double>& lambdas, double delta1) {
  for (double l : lambdas)
    if (!(l > 0.0)) throw Error(Errc::NegativeCoupling, "coupling must be positive");
  const auto spectra = sweep_spectra(P, s, energies);
  std::vector<SweepResult> out;
  for (double l : lambdas) out.push_back(sweep_from_spectra(spectra, l, delta1));
  return out;
}

namespace {

double low_trace_quadrature(const Potential& P, const MonomialSubspace& F, double s, double E, const RadialAnnuli& A) {
  const SpaceGrid& g = P.grid;
  const Eigen::Index n = Eigen::Index(g.size());
  const auto nodes = g.nodes();
  Eigen::VectorXd re(n), im(n);
  double total = 0.0;
  for (std::size_t q = 0; q < A.points.size(); ++q) {
    const Point& xi = A.points[q];
    for (Eigen::Index i = 0; i < n; ++i) {
      const double theta = xi[0] * nodes[std::size_t(i)][0] + xi[1] * nodes[std::size_t(i)][1];
      const std::complex<double> r = taylor_remainder(theta, F.n) * P.v[i];
      re[i] = r.real();
      im[i] = r.imag();
    }
    const double norm2v = g.cell_weight() * (F.project_out(re).squaredNorm() + F.project_out(im).squaredNorm());
    total += A.weights[q] * norm2v / annulus_denominator(xi, s, E);
  }
  return total * std::pow(2.0 * pi, -g.d);
}

double residual_norm(const Potential& P, const MonomialSubspace& F, double r) {
  const SpaceGrid& g = P.grid;
  const Eigen::Index n = Eigen::Index(g.size());
  Eigen::VectorXd re(n), im(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::complex<double> z = taylor_remainder(r * g.node(std::size_t(i))[0], F.n) * P.v[i];
    re[i] = z.real();
    im[i] = z.imag();
  }
  return std::sqrt(F.project_out(re).squaredNorm() + F.project_out(im).squaredNorm());
}

}  // namespace

LowTrace trace_low_projected(const Potential& P, double s, double E, const BSOptions& opt, bool with_matrix) {
  const SpaceGrid& g = P.grid;
  if (E > 0.0) throw Error(Errc::DivergentAtZero, "energy must be nonpositive");
  // At E = 0 the projected integrand behaves like |ξ|^{2(n+1)−2s}, integrable
  // for every s ≥ d/2; only n < 0 diverges.
  if (E == 0.0 && subspace_order(s, g.d) < 0) throw Error(Errc::DivergentAtZero, "E = 0 needs s ≥ d/2");
  LowTrace T;
  if (P.is_zero()) {
    if (E < 0.0 && with_matrix) T.matrix_trace = 0.0;
    return T;
  }
  const MonomialSubspace F = build_subspace(P, s, opt.rank_tol);
  const RadialAnnuli A = make_annuli(opt.K_ann, opt.radial_nodes, g.d, opt.angular_nodes);
  const RadialAnnuli Ar = make_annuli(opt.K_ann + 10, opt.radial_nodes + 8, g.d, opt.angular_nodes * 2);
  T.value = low_trace_quadrature(P, F, s, E, A);
  T.refined = low_trace_quadrature(P, F, s, E, Ar);
  if (std::abs(T.value - T.refined) > 1e-4 * std::abs(T.refined))
    throw Error(Errc::QuadratureUnresolved, "annular quadrature not converged");
  const double r1 = residual_norm(P, F, 1e-2), r2 = residual_norm(P, F, 1e-3);
  T.residual_exponent = (r1 > 0 && r2 > 0) ? std::log10(r1 / r2) : 0.0;
  if (E < 0.0 && with_matrix) {
    BSOptions o = opt;
    o.route = Route::XKernel;
    T.matrix_trace = assemble_K(P, s, E, Window::Low, true, o).K.trace();
  }
  return T;
}

HighNorm weak_norm_high(const Potential& P, double s, double E, const BSOptions& opt) {
  if (P.is_zero()) {
    HighNorm H;
    H.truncated = is_critical(s, P.grid.d);
    if (H.truncated && !opt.acknowledge_truncation)
      throw Error(Errc::UnresolvedWindow, "critical high window requires acknowledging the Ξ_max truncation");
    return H;
  }
  return weak_norm_high(P, s, E, opt, potential_block(P));
}

HighNorm weak_norm_high(const Potential& P, double s, double E, const BSOptions& opt, const Eigen::MatrixXd& W) {
  const SpaceGrid& g = P.grid;
  if (E > 0.0) throw Error(Errc::DivergentAtZero, "energy must be nonpositive");
  if (!(s >= 0.5 * g.d - 1e-12)) throw Error(Errc::UnsupportedExponent, "s must be at least d/2");
  HighNorm H;
  if (is_critical(s, g.d)) {
    if (!opt.acknowledge_truncation)
      throw Error(Errc::UnresolvedWindow, "critical high window requires acknowledging the Ξ_max truncation");
    H.truncated = true;
  }
  const auto basis = real_fourier_basis(g);
  const Eigen::VectorXd kin = kinetic_symbol(g, s);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index c = 0; c < kin.size(); ++c)
    if (norm2(basis->xi[std::size_t(c)]) > 1.0) cols.push_back(c);
  const Eigen::Index m = Eigen::Index(cols.size());
  Eigen::MatrixXd Wsub(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) Wsub(a, b) = W(cols[std::size_t(a)], cols[std::size_t(b)]);
  auto spectrum_at = [&](double e) {
    Eigen::VectorXd D(m);
    for (Eigen::Index a = 0; a < m; ++a) D[a] = 1.0 / std::sqrt(kin[cols[std::size_t(a)]] - e);
    Eigen::MatrixXd K = D.asDiagonal() * Wsub * D.asDiagonal();
    K = 0.5 * (K + K.transpose()).eval();
    const Spectrum S = eigh_descending(K);
    return clip_noise(S, 1e-10 * std::max(1.0, std::abs(S.max())));
  };
  H.spectrum = spectrum_at(E);
  H.value = weak_quasinorm(H.spectrum, 1.0);
  if (E < 0.0) {
    const Spectrum S0 = spectrum_at(0.0);
    const double tol = 1e-12 * std::max(1.0, S0.max());
    for (std::size_t j = 0; j < S0.size(); ++j)
      if (H.spectrum[j] > S0[j] + tol) H.dominated = false;
  }
  return H;
}

double quadratic_form(const Potential& P, double s, double E, const Eigen::VectorXd& phi) {
  if (!(E < 0.0)) throw Error(Errc::DivergentAtZero, "quadratic form needs E < 0");
  const auto basis = real_fourier_basis(P.grid);
  const Eigen::VectorXd y = basis->Q.transpose() * P.v.cwiseProduct(phi);
  const Eigen::VectorXd kin = kinetic_symbol(P.grid, s);
  return (y.array().square() / (kin.array() - E)).sum();
}

}  // namespace fracbound
