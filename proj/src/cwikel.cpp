#include "fracbound/cwikel.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

#include "fracbound/errors.hpp"

namespace fracbound {

Cube cube_of(const Point& x, int d, int wrap_L) {
  Cube m{0, 0};
  for (int a = 0; a < d; ++a) {
    int c = int(std::floor(x[a] + 0.5));
    if (wrap_L > 0 && c == wrap_L) c = -wrap_L;
    m[a] = c;
  }
  return m;
}

int dyadic_class(double a) {
  int n = int(std::ceil(std::log2(a)));
  while (a > std::ldexp(1.0, n)) ++n;
  while (a <= std::ldexp(1.0, n - 1)) --n;
  return n;
}

namespace {

void check_pp(double pp) {
  if (!(pp > 1.0 && pp < 2.0)) throw Error(Errc::ExponentOutOfRange, "p' must lie in (1, 2)");
}

int integer_L(const SpaceGrid& g) {
  if (std::abs(g.L - std::round(g.L)) > 1e-12) throw Error(Errc::NonIntegerL, "unit cubes need an integer half-width");
  return int(std::lround(g.L));
}

double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  if (x.size() < 2) return NAN;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void check_size(const SpaceGrid& g) {
  if (g.size() > kMaxDense) throw Error(Errc::TooLarge, "dense assembly capped at 4096 grid nodes");
}

// Frequency-cube L² norms of a symbol on the dual lattice of g.
std::map<Cube, double> symbol_cubes(const SpaceGrid& g, const Symbol& sym) {
  std::map<Cube, double> acc;
  const double w = g.freq.cell_weight();
  for (std::size_t k = 0; k < g.freq.size(); ++k) {
    const Point xi = g.freq.node(k);
    const double v = sym(xi);
    acc[cube_of(xi, g.d)] += v * v * w;
  }
  for (auto& [m, s] : acc) s = std::sqrt(s);
  return acc;
}

}  // namespace

int LatticeDecomposition::x_class(std::size_t node) const {
  const double am = a[cube_of_node[node]];
  return am > 0.0 ? dyadic_class(am) : INT_MIN;
}

int LatticeDecomposition::k_class(const Point& xi) const {
  Cube m = cube_of(xi, grid.d);
  auto it = k_index.find(m);
  if (it == k_index.end()) it = k_index.find(Cube{-m[0], -m[1]});  // sign-flipped Nyquist node
  if (it == k_index.end()) return INT_MIN;
  const double bm = b[it->second];
  return bm > 0.0 ? dyadic_class(bm) : INT_MIN;
}

LatticeDecomposition lattice_decompose(const SpaceGrid& g, const Eigen::VectorXd& f, const Symbol& sym, double pp) {
  check_pp(pp);
  if (f.size() != Eigen::Index(g.size())) throw Error(Errc::ShapeMismatch, "f does not match the grid");
  const int wrap = integer_L(g);
  LatticeDecomposition D;
  D.grid = g;
  D.pp = pp;

  std::map<Cube, double> acc;
  const double cw = g.cell_weight();
  D.cube_of_node.resize(g.size());
  std::vector<Cube> node_cube(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    node_cube[i] = cube_of(g.node(i), g.d, wrap);
    acc[node_cube[i]] += f[Eigen::Index(i)] * f[Eigen::Index(i)] * cw;
  }
  for (const auto& [m, s] : acc) {
    D.x_index[m] = D.x_cubes.size();
    D.x_cubes.push_back(m);
    D.a.push_back(std::sqrt(s));
  }
  for (std::size_t i = 0; i < g.size(); ++i) D.cube_of_node[i] = D.x_index.at(node_cube[i]);
  for (const auto& [m, s] : symbol_cubes(g, sym)) {
    D.k_index[m] = D.k_cubes.size();
    D.k_cubes.push_back(m);
    D.b.push_back(s);
  }

  D.scale_f = lattice_norm(D.a, pp);
  D.scale_g = lattice_weak_norm(D.b, pp);
  if (!(D.scale_f > 0.0) || !(D.scale_g > 0.0)) throw Error(Errc::ZeroInput, "f and g must be nonzero");
  for (double& x : D.a) x /= D.scale_f;
  for (double& x : D.b) x /= D.scale_g;
  D.f = f / D.scale_f;
  const double sg = D.scale_g;
  D.g = [sym, sg](const Point& xi) { return sym(xi) / sg; };
  for (std::size_t j = 0; j < D.a.size(); ++j)
    if (D.a[j] > 0.0) D.x_classes[dyadic_class(D.a[j])].push_back(j);
  for (std::size_t j = 0; j < D.b.size(); ++j)
    if (D.b[j] > 0.0) D.k_classes[dyadic_class(D.b[j])].push_back(j);
  return D;
}

Eigen::MatrixXd multiplier_sandwich(const SpaceGrid& g, const Eigen::VectorXd& f, const Symbol& sym) {
  check_size(g);
  const auto basis = real_fourier_basis(g);
  const Eigen::VectorXd s = basis->symbol(sym);
  Eigen::MatrixXd M = (basis->Q * s.asDiagonal()) * basis->Q.transpose();
  return f.asDiagonal() * M;
}

AnBn an_bn_check(const LatticeDecomposition& D, int n, const Eigen::MatrixXd* full) {
  const SpaceGrid& g = D.grid;
  check_size(g);
  const auto basis = real_fourier_basis(g);
  const Eigen::MatrixXd& Q = basis->Q;
  const Eigen::Index S = Eigen::Index(g.size());

  std::map<int, std::vector<Eigen::Index>> rows;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const int l = D.x_class(i);
    if (l != INT_MIN) rows[l].push_back(Eigen::Index(i));
  }

  AnBn r;
  r.n = n;
  r.A = Eigen::MatrixXd::Zero(S, S);
  r.B = Eigen::MatrixXd::Zero(S, S);
  for (const auto& [l, idx] : rows) {
    const int cut = n - l;
    const Eigen::VectorXd sa = basis->symbol([&](const Point& xi) { return D.k_class(xi) <= cut ? D.g(xi) : 0.0; });
    const Eigen::VectorXd sb = basis->symbol([&](const Point& xi) { return D.k_class(xi) > cut ? D.g(xi) : 0.0; });
    Eigen::MatrixXd Qr(Eigen::Index(idx.size()), S);
    Eigen::VectorXd fr(Eigen::Index(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) {
      Qr.row(Eigen::Index(j)) = Q.row(idx[j]);
      fr[Eigen::Index(j)] = D.f[idx[j]];
    }
    const Eigen::MatrixXd Ar = fr.asDiagonal() * ((Qr * sa.asDiagonal()) * Q.transpose());
    const Eigen::MatrixXd Br = fr.asDiagonal() * ((Qr * sb.asDiagonal()) * Q.transpose());
    for (std::size_t j = 0; j < idx.size(); ++j) {
      r.A.row(idx[j]) = Ar.row(Eigen::Index(j));
      r.B.row(idx[j]) = Br.row(Eigen::Index(j));
    }
  }

  Eigen::MatrixXd own;
  if (!full) {
    own = multiplier_sandwich(g, D.f, D.g);
    full = &own;
  }
  r.recombination = (r.A + r.B - *full).cwiseAbs().maxCoeff();
  r.hs2_A = r.A.squaredNorm();
  const Spectrum sB = singular_values(r.B);
  for (double x : sB.values) r.trace_B += x;
  const double pp = D.pp;
  r.hs_model = std::pow(2.0, (2.0 - pp) * n) / (1.0 - std::pow(2.0, pp - 2.0));
  r.tr_model = std::pow(2.0, (1.0 - pp) * n) / (1.0 - std::pow(2.0, 1.0 - pp));

  const Spectrum sF = singular_values(*full), sA = singular_values(r.A);
  for (std::size_t m = 1; m <= sF.size(); m += 2) {
    ++r.fan_checked;
    if (!fan_check(sF, sA, sB, m).holds) ++r.fan_violations;
  }
  return r;
}

AnBnScan an_bn_scan(const LatticeDecomposition& D, int n_lo, int n_hi) {
  AnBnScan out;
  const Eigen::MatrixXd full = multiplier_sandwich(D.grid, D.f, D.g);
  std::vector<double> ns_hs, hs, ns_tr, tr;
  double tr_max = 0.0;
  for (int n = n_lo; n <= n_hi; ++n) {
    AnBn r = an_bn_check(D, n, &full);
    r.A.resize(0, 0);
    r.B.resize(0, 0);
    out.max_recombination = std::max(out.max_recombination, r.recombination);
    out.fan_violations += r.fan_violations;
    out.C_hs = std::max(out.C_hs, r.hs2_A / r.hs_model);
    out.C_tr = std::max(out.C_tr, r.trace_B / r.tr_model);
    tr_max = std::max(tr_max, r.trace_B);
    out.levels.push_back(std::move(r));
  }
  for (const AnBn& r : out.levels) {
    if (r.hs2_A > 0.0) {
      ns_hs.push_back(r.n);
      hs.push_back(std::log2(r.hs2_A));
    }
    if (r.trace_B > 1e-13 * tr_max) {
      ns_tr.push_back(r.n);
      tr.push_back(std::log2(r.trace_B));
    }
  }
  out.hs_slope = slope_fit(ns_hs, hs);
  out.tr_slope = slope_fit(ns_tr, tr);
  return out;
}

SimonCurve simon_singular_bound(const SpaceGrid& g, const Eigen::VectorXd& f, const Symbol& sym, double pp,
                                std::size_t m_lo, std::size_t m_hi) {
  check_pp(pp);
  SimonCurve c;
  c.pp = pp;
  if (f.size() != Eigen::Index(g.size())) throw Error(Errc::ShapeMismatch, "f does not match the grid");
  if (f.cwiseAbs().maxCoeff() == 0.0) {
    c.mu.assign(g.size(), 0.0);
    c.shape.assign(g.size(), 0.0);
    return c;
  }
  const LatticeDecomposition D = lattice_decompose(g, f, sym, pp);
  c.mu = singular_values(multiplier_sandwich(g, f, sym)).values;
  const double amp = std::pow(2.0 - pp, 1.0 / pp - 1.0) * D.scale_f * D.scale_g;
  std::vector<double> lx, ly;
  for (std::size_t m = 1; m <= c.mu.size(); ++m) {
    c.shape.push_back(std::pow(double(m), -1.0 / pp) * amp);
    c.C = std::max(c.C, c.mu[m - 1] / c.shape.back());
    if (m >= m_lo && m <= m_hi && c.mu[m - 1] > 1e-13 * c.mu[0]) {
      lx.push_back(std::log(double(m)));
      ly.push_back(std::log(c.mu[m - 1]));
    }
  }
  c.resolved = lx.size();
  c.slope = c.resolved >= 3 ? slope_fit(lx, ly) : NAN;
  return c;
}

std::size_t simon_violations(const SimonCurve& c, double C) {
  std::size_t v = 0;
  for (std::size_t m = 0; m < c.mu.size(); ++m)
    if (c.mu[m] > C * c.shape[m] * (1.0 + 1e-12)) ++v;
  return v;
}

EmbeddingResult embedding_check(const SpaceGrid& g, const Eigen::VectorXd& f, double pp, double r) {
  if (!(pp >= 1.0 && pp < 2.0)) throw Error(Errc::ExponentOutOfRange, "p' must lie in [1, 2)");
  const double q = 1.0 / (1.0 / pp - 0.5);
  const double rq = r * q;
  if (!(rq > g.d)) throw Error(Errc::ExponentOutOfRange, "needs r q > d");
  EmbeddingResult e;
  e.lhs = mixed_norm(g, f, 2.0, pp, false);
  double w2 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point x = g.node(i);
    const double fx = f[Eigen::Index(i)];
    w2 += std::pow(1.0 + x[0] * x[0] + x[1] * x[1], r) * fx * fx;
  }
  w2 *= g.cell_weight();
  e.rhs = std::pow((rq - g.d + 1.0) / (rq - g.d), 1.0 / q) * std::sqrt(w2);
  e.constant = e.rhs > 0.0 ? e.lhs / e.rhs : 0.0;
  return e;
}

Factorization radial_power_factorization(int d) {
  Factorization F;
  F.name = "radial-power";
  F.radial_power = true;
  F.gp = [d](const Point& xi, double p) {
    const double r = norm2(xi);
    return r >= 1.0 ? std::pow(r, -d / p) : 0.0;
  };
  F.gpp = [d](const Point& xi, double p) {
    const double r = norm2(xi);
    return r >= 1.0 ? std::pow(r, -d * (1.0 - 1.0 / p)) : 0.0;
  };
  return F;
}

double shell_level(int k) { return std::exp(double(k)); }

std::vector<double> default_p_grid(int d, double delta, int kmax) {
  std::vector<double> ps;
  // h ≥ e^e = Λ_1, so shells start at k = 1.
  for (int k = 1; k <= kmax; ++k) ps.push_back(1.0 / (0.5 - delta / (d * shell_level(k + 1))));
  return ps;
}

namespace {

double factor_at(const SpaceGrid& g, const Factorization& F, double p) {
  const double pp = p / (p - 1.0);
  double np;
  if (F.radial_power) {
    np = weak_lp(RadialPowerSymbol{g.d / p, g.d}, p);
  } else {
    Eigen::VectorXd s(Eigen::Index(g.freq.size()));
    for (std::size_t k = 0; k < g.freq.size(); ++k) s[Eigen::Index(k)] = F.gp(g.freq.node(k), p);
    np = weak_lp(s, g.freq.cell_weight(), p);
  }
  std::vector<double> b;
  for (const auto& [m, v] : symbol_cubes(g, [&](const Point& xi) { return F.gpp(xi, p); })) b.push_back(v);
  return std::sqrt(np * lattice_weak_norm(b, pp));
}

}  // namespace

Theorem17Report theorem17_check(const SpaceGrid& g, const Eigen::VectorXd& f, const Symbol& sym,
                                const std::vector<Factorization>& family, double delta, double eps, int M,
                                const std::vector<double>& p_grid) {
  if (family.empty()) throw Error(Errc::EmptyFactorizationFamily, "no factorizations supplied");
  Theorem17Report rep;
  if (f.cwiseAbs().maxCoeff() == 0.0) return rep;
  check_size(g);
  const std::vector<double> ps = p_grid.empty() ? default_p_grid(g.d, delta) : p_grid;

  rep.lhs = weak_quasinorm(singular_values(multiplier_sandwich(g, f, sym)), 2.0);
  for (double p : ps) {
    double best = INFINITY;
    for (const Factorization& F : family) best = std::min(best, factor_at(g, F, p));
    rep.factor = std::max(rep.factor, best);
  }
  if (M <= 0) M = default_hermite_order(g.d);
  const HermiteExpansion H = hermite_expansion(g, f, M);
  rep.hermite = hermite_log_norm(H, eps);
  rep.residual = H.residual;
  rep.rhs = rep.hermite * rep.factor;
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : INFINITY;

  // Shells Λ_k ≤ μ < Λ_{k+1} with ln Λ_k = e^k.
  const std::size_t nb = H.basis.index.size();
  std::vector<int> shell(nb);
  int kmax = 0;
  double mu_top = 0.0;
  for (std::size_t a = 0; a < nb; ++a) {
    const double mu = H.basis.eigenvalue(a);
    mu_top = std::max(mu_top, mu);
    shell[a] = int(std::floor(std::log(std::log(mu))));
    kmax = std::max(kmax, shell[a]);
  }
  const Factorization& F0 = family.front();
  double partial = 0.0;
  for (int k = 0; k <= kmax; ++k) {
    ShellTerm t;
    t.k = k;
    t.p = ps[std::min<std::size_t>(std::size_t(std::max(k - 1, 0)), ps.size() - 1)];
    double n2 = 0.0;
    for (std::size_t a = 0; a < nb; ++a)
      if (shell[a] == k) {
        ++t.modes;
        n2 += H.coeffs[Eigen::Index(a)] * H.coeffs[Eigen::Index(a)];
      }
    t.norm = std::sqrt(n2);
    t.weighted = std::sqrt(shell_level(k + 1)) * t.norm;
    t.representable = shell_level(k + 1) <= std::log(mu_top);
    if (t.modes > 0 && t.norm > 0.0) {
      const Eigen::VectorXd fk = H.synthesize(g, [&](std::size_t a) { return shell[a] == k; });
      const double p = t.p, pp = p / (p - 1.0);
      t.lhs = weak_quasinorm(singular_values(multiplier_sandwich(g, fk, sym)), 2.0);
      t.holder_p = weak_quasinorm(
          singular_values(multiplier_sandwich(g, fk, [&](const Point& xi) { return F0.gp(xi, p); })), p);
      t.holder_pp = weak_quasinorm(
          singular_values(multiplier_sandwich(g, fk, [&](const Point& xi) { return F0.gpp(xi, p); })), pp);
      t.holder_holds = t.lhs * t.lhs <= t.holder_p * t.holder_pp * (1.0 + 1e-10);
    }
    partial += t.weighted;
    rep.partial_sums.push_back(partial);
    rep.shells.push_back(t);
  }
  return rep;
}

}  // namespace fracbound
