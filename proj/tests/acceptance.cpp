// Acceptance harness: one PASS/FAIL line per criterion, measured values alongside.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fracbound/bounds.hpp"
#include "fracbound/cwikel.hpp"
#include "fracbound/direct_solver.hpp"
#include "fracbound/errors.hpp"

using namespace fracbound;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::size_t well_oracle(double V0, double a) {
  return 1 + std::size_t(std::floor(2.0 * a * std::sqrt(V0) / pi));
}

// Bound states of the finite well as sign changes of the even/odd matching functions on (0, z0].
std::size_t well_roots(double V0, double a) {
  const double z0 = a * std::sqrt(V0);
  auto even = [&](double z) { return z * std::sin(z) - std::sqrt(std::max(z0 * z0 - z * z, 0.0)) * std::cos(z); };
  auto odd = [&](double z) { return -z * std::cos(z) - std::sqrt(std::max(z0 * z0 - z * z, 0.0)) * std::sin(z); };
  std::size_t n = 0;
  double pe = even(1e-12), po = odd(1e-12);
  const int steps = 400000;
  for (int i = 1; i <= steps; ++i) {
    const double z = z0 * i / steps, e = even(z), o = odd(z);
    n += ((pe < 0) != (e < 0)) + ((po < 0) != (o < 0));
    pe = e;
    po = o;
  }
  return n;
}

// The d = 1 suite: wells, Gaussians, bumps and two-centre mixtures.
std::vector<Potential> suite_1d(const SpaceGrid& g) {
  std::vector<Potential> S;
  for (auto k : {PotentialKind::well(2, 1), PotentialKind::well(10, 1), PotentialKind::well(5, 2),
                 PotentialKind::gaussian(1, 1), PotentialKind::gaussian(8, 1), PotentialKind::gaussian(3, 2),
                 PotentialKind::gaussian(20, 0.5), PotentialKind::bump(5, 1), PotentialKind::bump(30, 1.5)})
    S.push_back(build(k, g));
  S.push_back(combine(build(PotentialKind::gaussian(4, 1).at({-3, 0}), g), build(PotentialKind::gaussian(4, 1).at({3, 0}), g)));
  S.push_back(combine(build(PotentialKind::well(6, 0.5).at({-2, 0}), g), build(PotentialKind::bump(10, 1).at({2, 0}), g)));
  return S;
}

std::vector<Potential> suite_2d(const SpaceGrid& g) {
  std::vector<Potential> S;
  for (auto k : {PotentialKind::gaussian(2, 1), PotentialKind::gaussian(10, 1), PotentialKind::well(4, 1.5),
                 PotentialKind::bump(15, 2)})
    S.push_back(build(k, g));
  S.push_back(combine(build(PotentialKind::gaussian(6, 0.8).at({-1.5, 0}), g),
                      build(PotentialKind::gaussian(6, 0.8).at({1.5, 0.5}), g)));
  return S;
}

const std::vector<double> kTail = {-std::ldexp(1.0, -18), -std::ldexp(1.0, -19), -std::ldexp(1.0, -20)};

Outcome criterion1() {
  const SpaceGrid g = make_space_grid(1, 40.0, 512);
  std::size_t bad = 0, cases = 0;
  double slowest = 0.0;
  std::string misses;
  for (double V0 = 0.5; V0 <= 256.0; V0 *= 2) {
    const auto t = Clock::now();
    const std::size_t got = direct_count(build(PotentialKind::well(V0, 1), g), 1.0).count;
    slowest = std::max(slowest, since(t));
    const std::size_t oracle = well_oracle(V0, 1), roots = well_roots(V0, 1);
    ++cases;
    if (got != oracle || oracle != roots) {
      ++bad;
      misses += fmt(" V0=%g(got %zu, oracle %zu, roots %zu)", V0, got, oracle, roots);
    }
  }
  return {bad == 0 && slowest < 10.0, fmt("%zu/%zu depths exact, slowest case %.2f s%s", cases - bad, cases, slowest, misses.c_str())};
}

struct Suite2Row {
  std::string id;
  double s;
  std::size_t direct, plateau;
  bool flagged;
  SweepResult sweep;
};

std::vector<Suite2Row> suite2_rows() {
  static std::vector<Suite2Row> rows;
  if (!rows.empty()) return rows;
  const SpaceGrid g = make_space_grid(1, 20.0, 256);
  const std::vector<PotentialKind> kinds = {PotentialKind::well(10, 1), PotentialKind::gaussian(8, 1),
                                            PotentialKind::bump(12, 1.5), PotentialKind::gaussian(3, 2),
                                            PotentialKind::well(3, 2)};
  for (const auto& k : kinds)
    for (double s : {0.6, 1.0, 1.5, 2.5}) {
      const Potential P = build(k, g);
      const NegativeCount nc = direct_count(P, s);
      const SweepResult sw = count_ge_one_sweep(P, s, default_energies());
      rows.push_back({P.id, s, nc.count, sw.plateau, !nc.near_threshold.empty() || sw.near_one || !sw.plateau_reached, sw});
    }
  return rows;
}

Outcome criterion2() {
  std::size_t agree = 0, unflagged = 0;
  std::string miss;
  const auto rows = suite2_rows();
  for (const auto& r : rows) {
    if (r.direct == r.plateau) ++agree;
    else {
      miss += fmt(" [%s s=%g direct %zu plateau %zu%s]", r.id.c_str(), r.s, r.direct, r.plateau, r.flagged ? " flagged" : "");
      if (!r.flagged) ++unflagged;
    }
  }
  return {agree >= 19 && unflagged == 0, fmt("%zu/%zu agree%s", agree, rows.size(), miss.c_str())};
}

Outcome criterion3() {
  const SpaceGrid g = make_space_grid(1, 40.0, 512);
  std::vector<Potential> base = suite_1d(g);
  base.push_back(build(PotentialKind::power(2, 4, 1), g));
  std::size_t cases = 0, viol = 0;
  double worst = 0.0;
  for (const Potential& P : base)
    for (double l = 1; l <= 256; l *= 2) {
      const BoundReport r = bargmann_check(scale_coupling(P, l));
      ++cases;
      worst = std::max(worst, (r.lhs - 1.0) / r.rhs);
      if (r.violates(1.0)) ++viol;
    }
  return {viol == 0, fmt("%zu cases, %zu violations, max (N-1)/int|x|V = %.3f", cases, viol, worst)};
}

// Suite reports for T1.1 at one (d, s) on one grid. The ratio is a sawtooth
// in λ peaking just past each new bound state, so λ runs over a quarter-octave
// grid; λ is kept where the potential stays well below the coarse grid's top
// kinetic energy.
std::vector<BoundReport> t11_reports(const std::vector<Potential>& suite, double s, double vmax) {
  BoundOptions opt;
  opt.energies = kTail;
  const int d = suite.front().grid.d;
  const double ex = s - 0.5 * d;
  const TheoremId id = std::abs(ex - std::round(ex)) < 1e-12 ? TheoremId::T11Int : TheoremId::T11NonInt;
  std::vector<BoundReport> out;
  for (const Potential& P : suite) {
    std::vector<double> lambdas;
    for (int j = -8; j <= 24; ++j)
      if (const double l = std::exp2(0.25 * j); l * P.values.maxCoeff() <= vmax) lambdas.push_back(l);
    const auto sweeps = coupling_sweep(P, s, opt.energies, lambdas);
    for (std::size_t i = 0; i < lambdas.size(); ++i)
      out.push_back(evaluate_bound(id, scale_coupling(P, lambdas[i]), s, opt, sweeps[i]));
  }
  return out;
}

Outcome criterion4() {
  struct Case {
    int d;
    double s, L;
    int N;
  };
  const std::vector<Case> cases = {{1, 0.6, 20, 256}, {1, 1.0, 20, 256}, {1, 1.5, 20, 256},
                                   {1, 2.5, 20, 256}, {2, 1.3, 6, 24},   {2, 2.0, 6, 24}};
  bool ok = true;
  std::string detail;
  for (const Case& c : cases) {
    const SpaceGrid g1 = make_space_grid(c.d, c.L, c.N), g2 = make_space_grid(c.d, c.L, 2 * c.N);
    const double vmax = 0.1 * std::pow(g1.freq.nyquist, 2.0 * c.s);
    auto fitted = [&](const SpaceGrid& g) {
      const auto reps = t11_reports(c.d == 1 ? suite_1d(g) : suite_2d(g), c.s, vmax);
      return fit_constant(reps).begin()->second;
    };
    const double C1 = fitted(g1), C2 = fitted(g2);
    const double change = relative_change(C1, C2);

    std::vector<Potential> held;
    for (auto k : {PotentialKind::power(2, 2 * c.s + 2, 1), PotentialKind::power(8, 2 * c.s + 3, 0.7),
                   PotentialKind::power(5, 2 * c.s + 2, 1.5).at({0.5, 0})})
      held.push_back(build(k, g2));
    std::size_t viol = 0;
    const auto hrep = t11_reports(held, c.s, vmax);
    double worst = 0.0;
    for (const auto& r : hrep) {
      worst = std::max(worst, r.ratio);
      if (r.violates(C2)) ++viol;
    }
    const bool pass = change <= 0.10 && viol == 0;
    ok = ok && pass;
    detail += fmt(" [d=%d s=%g C(N)=%.4g C(2N)=%.4g change %.1f%% held-out %zu cases max ratio %.4g, %zu violations]", c.d, c.s,
                  C1, C2, 100 * change, hrep.size(), worst, viol);
  }
  return {ok, detail.substr(1)};
}

Outcome criterion5() {
  struct Case {
    int d;
    double L;
    int N, M;
  };
  bool ok = true;
  std::string detail;
  for (const Case& c : {Case{1, 20, 256, 100}, Case{2, 6, 24, 40}}) {
    const double s = 0.5 * c.d;
    const SpaceGrid g = make_space_grid(c.d, c.L, c.N);
    // Members need a resolved Hermite truncation at M; compact bumps never get there.
    std::vector<Potential> suite;
    for (auto k : {PotentialKind::gaussian(1, 1), PotentialKind::gaussian(8, 1), PotentialKind::gaussian(3, 1.5),
                   PotentialKind::gaussian(12, 0.6).at({0.7, 0})})
      suite.push_back(build(k, g));
    suite.push_back(combine(build(PotentialKind::gaussian(5, 0.8).at({-1.5, 0}), g), build(PotentialKind::gaussian(5, 0.8).at({1.5, 0}), g)));
    std::vector<BoundReport> rM, r2M;
    for (const Potential& P : suite)
      for (double l : {1.0, 4.0, 16.0}) {
        const Potential Pl = scale_coupling(P, l);
        BoundOptions opt;
        opt.energies = c.d == 1 ? default_energies() : kTail;
        const SweepResult sw = count_ge_one_sweep(Pl, s, opt.energies);
        opt.hermite_M = c.M;
        rM.push_back(evaluate_bound(TheoremId::T12, Pl, s, opt, sw));
        opt.hermite_M = 2 * c.M;
        r2M.push_back(evaluate_bound(TheoremId::T12, Pl, s, opt, sw));
      }
    const double CM = fit_constant(rM).begin()->second, C2M = fit_constant(r2M).begin()->second;
    std::size_t viol = 0;
    for (const auto& r : r2M) viol += r.violates(C2M);
    const double change = relative_change(CM, C2M);
    ok = ok && change <= 0.15 && viol == 0;
    detail += fmt(" [d=%d s=%g C(M=%d)=%.4g C(M=%d)=%.4g change %.2g%%]", c.d, s, c.M, CM, 2 * c.M, C2M, 100 * change);
  }
  return {ok, detail.substr(1)};
}

Outcome criterion6() {
  const SpaceGrid g = make_space_grid(1, 20.0, 256);
  struct Case {
    PotentialKind k;
    double s;
  };
  const std::vector<Case> cases = {{PotentialKind::gaussian(1, 1), 1.0},
                                   {PotentialKind::gaussian(3, 2), 1.5},
                                   {PotentialKind::bump(5, 1), 1.0},
                                   {PotentialKind::well(4, 1), 2.5},
                                   {PotentialKind::gaussian(2, 0.7).at({1, 0}), 1.75}};
  double worst = 0.0;
  for (const Case& c : cases)
    for (double E : {-1.0, -0.1, -0.01}) {
      const LowTrace t = trace_low_projected(build(c.k, g), c.s, E);
      worst = std::max(worst, std::abs(t.value - *t.matrix_trace) / std::abs(*t.matrix_trace));
    }
  return {worst < 1e-6, fmt("15 cases, max relative difference %.3g", worst)};
}

Outcome criterion7() {
  std::size_t viol = 0, nonmono = 0, nonzero = 0;
  const auto rows = suite2_rows();
  const SpaceGrid g = make_space_grid(1, 20.0, 256);
  for (const auto& r : rows) {
    viol += r.sweep.eigen_violations;
    nonmono += !r.sweep.monotone_counts;
  }
  for (const auto& k : {PotentialKind::well(10, 1), PotentialKind::gaussian(8, 1), PotentialKind::bump(12, 1.5),
                        PotentialKind::gaussian(3, 2), PotentialKind::well(3, 2)})
    for (double s : {0.6, 1.0, 1.5, 2.5}) {
      nonzero += count_ge_one_sweep(build(k, g), s, {-1e6}).points.front().count != 0;
    }
  return {viol == 0 && nonmono == 0 && nonzero == 0,
          fmt("%zu sweeps, %zu eigenvalue monotonicity violations, %zu non-monotone count curves, %zu nonzero counts at E=-1e6",
              rows.size(), viol, nonmono, nonzero)};
}

Outcome criterion8() {
  std::mt19937_64 rng(20261015);
  std::normal_distribution<double> n01;
  std::uniform_int_distribution<int> size(3, 40);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t counting = 0, interlacing = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = size(rng);
    const int D = 1 + int(unit(rng) * (n - 1));
    Eigen::MatrixXd G(n, n), F(n, D);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) G(i, j) = n01(rng);
      for (int j = 0; j < D; ++j) F(i, j) = n01(rng);
    }
    const VariationalResult r = variational_check((4.0 * unit(rng) / n) * G * G.transpose(), F);
    counting += !r.counting_holds;
    interlacing += !r.interlacing_holds;
  }
  return {counting == 0 && interlacing == 0,
          fmt("1000 matrices, %zu counting violations, %zu interlacing violations", counting, interlacing)};
}

Outcome criterion9() {
  double worst_gap = -INFINITY;
  std::string vals;
  for (double p : {2.01, 2.1, 2.5}) {
    const double w = weak_lp(RadialPowerSymbol{1.0 / p, 1}, p);
    worst_gap = std::max(worst_gap, w - std::pow(2.0, 1.0 / p));
    vals += fmt(" p=%g:%.9f", p, w);
  }
  // Uniform in p' means no growth as p' → 2: values near 2 stay under the sup over [1.5, 1.95].
  bool uniform = true;
  for (int d : {1, 2}) {
    double sup = 0.0, v195 = 0.0, near2 = 0.0, near_max = 0.0;
    std::vector<double> pps;
    for (double pp = 1.5; pp < 1.95 + 1e-9; pp += 0.05) pps.push_back(pp);
    pps.insert(pps.end(), {1.99, 1.999});
    for (double pp : pps) {
      std::vector<double> a;
      const int R = d == 1 ? 100000 : 400;
      if (d == 1)
        for (int m = -R; m <= R; ++m) a.push_back(std::pow(1.0 + double(m) * m, -0.5 / pp));
      else
        for (int m = -R; m <= R; ++m)
          for (int k = -R; k <= R; ++k) a.push_back(std::pow(1.0 + double(m) * m + double(k) * k, -1.0 / pp));
      const double w = lattice_weak_norm(a, pp);
      if (pp <= 1.95 + 1e-9) sup = std::max(sup, w);
      else near_max = std::max(near_max, w);
      if (std::abs(pp - 1.95) < 1e-9) v195 = w;
      if (pp == 1.999) near2 = w;
    }
    const bool ok = std::isfinite(sup) && near_max <= sup && (d != 1 || sup <= 2.0);
    uniform = uniform && ok;
    vals += fmt("; lattice d=%d: sup over [1.5,1.95] %.4f, p'=1.95 %.4f, p'=1.999 %.4f", d, sup, v195, near2);
  }
  return {worst_gap <= 1e-6 && uniform, fmt("closed forms%s (max excess over 2^(1/p) %.2g)", vals.c_str(), worst_gap)};
}

Outcome criterion10() {
  const SpaceGrid g = make_space_grid(1, 8.0, 256);
  Eigen::VectorXd f(256);
  for (int i = 0; i < 256; ++i) f[i] = std::exp(-0.5 * g.coord(i) * g.coord(i));
  const Symbol gauss = [](const Point& xi) { return std::exp(-0.5 * xi[0] * xi[0]); };

  bool a = true, b = true, c = true;
  std::string detail;
  for (double pp : {1.6, 1.8}) {
    const AnBnScan scan = an_bn_scan(lattice_decompose(g, f, gauss, pp));
    const SimonCurve sc = simon_singular_bound(g, f, gauss, pp);
    a = a && scan.max_recombination <= 1e-12;
    b = b && scan.hs_slope <= 2.0 - pp + 0.1 && scan.tr_slope <= 1.0 - pp + 0.1;
    c = c && std::abs(sc.slope + 1.0 / pp) <= 0.1;
    detail += fmt(" [p'=%g recombination %.2g; HS slope %.3f (model %.2f); trace slope %.3f (model %.2f); "
                  "singular slope %.3f over %zu resolved m (model %.3f)]",
                  pp, scan.max_recombination, scan.hs_slope, 2 - pp, scan.tr_slope, 1 - pp, sc.slope, sc.resolved, -1 / pp);
  }

  std::mt19937_64 rng(77);
  std::normal_distribution<double> n01;
  std::uniform_int_distribution<int> size(2, 30);
  std::size_t fan = 0, checks = 0;
  for (int t = 0; t < 500; ++t) {
    const int r = size(rng), k = size(rng);
    Eigen::MatrixXd A(r, k), B(r, k);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < k; ++j) {
        A(i, j) = n01(rng);
        B(i, j) = n01(rng);
      }
    const Spectrum s = singular_values(A + B), sa = singular_values(A), sb = singular_values(B);
    for (std::size_t m = 1; m <= s.size(); ++m, ++checks) fan += !fan_check(s, sa, sb, m).holds;
  }
  const bool d = fan == 0;
  detail += fmt(" [Fan: %zu checks on 500 pairs, %zu violations]", checks, fan);

  // Diagnostic only: the power symbol |ξ|^{-1/p'}1_{|ξ|≥1} on a wide frequency window.
  const SpaceGrid gw = make_space_grid(1, 4.0, 2048);
  Eigen::VectorXd fw(2048);
  for (int i = 0; i < 2048; ++i) fw[i] = std::exp(-0.5 * gw.coord(i) * gw.coord(i));
  for (double pp : {1.6, 1.8}) {
    const Symbol pw = [pp](const Point& xi) { const double r = std::abs(xi[0]); return r >= 1 ? std::pow(r, -1.0 / pp) : 0.0; };
    const SimonCurve sc = simon_singular_bound(gw, fw, pw, pp);
    detail += fmt(" [diagnostic, power symbol p'=%g: singular slope %.3f]", pp, sc.slope);
  }
  return {a && b && c && d, fmt("(a) %s (b) %s (c) %s (d) %s;", a ? "pass" : "fail", b ? "pass" : "fail", c ? "pass" : "fail",
                                d ? "pass" : "fail") + detail};
}

Outcome criterion11() {
  const SpaceGrid g = make_space_grid(1, 20.0, 256);
  std::size_t unequal = 0, increasing = 0;
  std::string counts;
  for (auto k : {PotentialKind::well(10, 1), PotentialKind::gaussian(8, 1), PotentialKind::bump(12, 1.5),
                 PotentialKind::gaussian(3, 2), PotentialKind::well(3, 2)}) {
    const ScalingReport r = scaling_check(build(k, g), 1.0, {1, 2, 4});
    unequal += !r.counts_equal;
    increasing += !r.rhs_nonincreasing;
    counts += fmt(" %zu/%zu/%zu", r.counts[0], r.counts[1], r.counts[2]);
  }
  return {unequal == 0 && increasing == 0,
          fmt("counts at R=1/2/4:%s; %zu unequal, %zu RHS families increasing", counts.c_str(), unequal, increasing)};
}

Outcome criterion12() {
  const SpaceGrid g = make_space_grid(1, 20.0, 256);
  std::vector<double> lambdas;
  for (double l = 1; l <= 1000; l *= 1.5) lambdas.push_back(l);
  const LowerBoundReport r = lower_bound_check(build(PotentialKind::bump(1, 1), g), 2.5, lambdas);
  return {r.dimF == 3 && r.achieved() && r.lambda_found <= 1000 && r.forms_increasing,
          fmt("dim F = %zu, smallest lambda with count >= 3: %g, quadratic forms increasing: %s", r.dimF, r.lambda_found,
              r.forms_increasing ? "yes" : "no")};
}

Outcome criterion13() {
  const SpaceGrid g = make_space_grid(1, 20.0, 256);
  std::size_t viol = 0, cases = 0;
  double slack = INFINITY;
  for (double s : {0.6, 1.0, 1.5, 2.5})
    for (const Potential& P : suite_1d(g)) {
      const ChainReport r = chain_check(P, s);
      ++cases;
      viol += r.violations;
      for (const auto& p : r.points) slack = std::min(slack, p.rhs - double(r.plateau));
    }
  return {viol == 0, fmt("%zu potential/exponent pairs, %zu violations, smallest margin %.3f", cases, viol, slack)};
}

}  // namespace

// Optional arguments select criteria by number; all run otherwise.
int main(int argc, char** argv) {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  const std::vector<std::function<Outcome()>> crit = {criterion1, criterion2,  criterion3,  criterion4, criterion5,
                                                      criterion6, criterion7,  criterion8,  criterion9, criterion10,
                                                      criterion11, criterion12, criterion13};
  std::vector<std::size_t> pick;
  for (int a = 1; a < argc; ++a) pick.push_back(std::stoul(argv[a]) - 1);
  if (pick.empty())
    for (std::size_t i = 0; i < crit.size(); ++i) pick.push_back(i);
  int failed = 0;
  for (std::size_t i : pick) {
    const auto t = Clock::now();
    Outcome o;
    try {
      o = crit[i]();
    } catch (const Error& e) {
      o = {false, std::string("error ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %2zu %s (%.1f s): %s\n", i + 1, o.pass ? "PASS" : "FAIL", since(t), o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, pick.size());
  return failed == 0 ? 0 : 1;
}
