#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>

#include <json.hpp>

#include "fracbound/bounds.hpp"
#include "fracbound/config.hpp"
#include "fracbound/cwikel.hpp"
#include "fracbound/direct_solver.hpp"
#include "fracbound/errors.hpp"
#include "fracbound/norms.hpp"

namespace fracbound {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

class Artifacts {
 public:
  explicit Artifacts(const std::string& dir) : dir_(dir) { fs::create_directories(dir_ / "curves"); }

  void curve(const std::string& name, const std::vector<double>& x, const std::vector<double>& y) {
    std::ofstream out(dir_ / "curves" / (name + ".tsv"));
    char buf[64];
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g\t%.17g\n", x[i], y[i]);
      out << buf;
    }
  }

  void reports(const std::vector<BoundReport>& rs) {
    std::ofstream out(dir_ / "reports.csv");
    out << csv_header() << '\n';
    for (const auto& r : rs) out << to_csv(r) << '\n';
  }

  void summary(const json& j) { std::ofstream(dir_ / "summary.json") << j.dump(2) << '\n'; }

 private:
  fs::path dir_;
};

std::string tag(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

Potential make_potential(const ExperimentConfig& c, const SpaceGrid& g) {
  if (!c.potential.file.empty()) return load_samples(c.potential.file, g);
  if (c.potential.terms.empty()) return zero_potential(g);
  Potential P = build(c.potential.terms.front(), g);
  for (std::size_t i = 1; i < c.potential.terms.size(); ++i) P = combine(P, build(c.potential.terms[i], g));
  return P;
}

json echo(const ExperimentConfig& c) {
  return {{"mode", c.mode}, {"d", c.d},         {"s", c.s},         {"eps", c.eps},         {"delta", c.delta},
          {"L", c.L},       {"N", c.N},         {"E", c.E},         {"lambdas", c.lambdas}, {"energies", c.energies},
          {"hermite_M", c.hermite_M}, {"seed", c.seed}};
}

json sweep_json(const SweepResult& sw) {
  json pts = json::array();
  for (const auto& p : sw.points) pts.push_back({{"E", p.E}, {"count", p.count}, {"top", p.top}, {"near_one", p.near_one}});
  return {{"plateau", sw.plateau},
          {"plateau_reached", sw.plateau_reached},
          {"monotone_counts", sw.monotone_counts},
          {"eigen_violations", sw.eigen_violations},
          {"near_one", sw.near_one},
          {"points", pts}};
}

std::vector<double> energies_of(const ExperimentConfig& c) { return c.energies.empty() ? default_energies() : c.energies; }

int run_count(const ExperimentConfig& c, const Potential& P, json& out) {
  json rows = json::array();
  for (double l : c.lambdas) {
    const Potential Pl = scale_coupling(P, l);
    const NegativeCount nc = direct_count(Pl, c.s);
    json row{{"lambda", l}, {"count", nc.count}, {"near_threshold", nc.near_threshold}, {"eigenvalues", nc.negative}};
    if (Pl.grid.size() <= 1024) {
      const SweepResult sw = count_ge_one_sweep(Pl, c.s, energies_of(c));
      row["bs_plateau"] = sw.plateau;
      row["bs_plateau_reached"] = sw.plateau_reached;
    }
    rows.push_back(row);
  }
  out["count"] = rows.front()["count"];
  out["results"] = rows;
  return 0;
}

int run_sweep(const ExperimentConfig& c, const Potential& P, json& out, Artifacts& art) {
  json rows = json::array();
  for (double l : c.lambdas) {
    const SweepResult sw = count_ge_one_sweep(scale_coupling(P, l), c.s, energies_of(c));
    std::vector<double> E, n;
    for (const auto& p : sw.points) {
      E.push_back(p.E);
      n.push_back(double(p.count));
    }
    art.curve("counts_lambda" + tag(l), E, n);
    for (std::size_t j = 0; j < 10; ++j) {
      std::vector<double> Ej, lj;
      for (const auto& p : sw.points)
        if (j < p.top.size()) {
          Ej.push_back(p.E);
          lj.push_back(p.top[j]);
        }
      art.curve("eig" + std::to_string(j) + "_lambda" + tag(l), Ej, lj);
    }
    json j = sweep_json(sw);
    j["lambda"] = l;
    rows.push_back(j);
  }
  out["sweeps"] = rows;
  return 0;
}

std::vector<TheoremId> applicable(const ExperimentConfig& c) {
  std::vector<TheoremId> ids;
  const double ex = c.s - 0.5 * c.d;
  if (c.d == 1 && c.s == 1.0) ids.push_back(TheoremId::Bargmann);
  if (c.d == 2 && c.s == 1.0 && c.N <= 64) {
    ids.push_back(TheoremId::D2Rearr);
    ids.push_back(TheoremId::D2Orlicz);
  }
  if (ex > 1e-12) ids.push_back(std::abs(ex - std::round(ex)) < 1e-12 ? TheoremId::T11Int : TheoremId::T11NonInt);
  if (std::abs(ex) <= 1e-12) ids.push_back(TheoremId::T12);
  if (ex >= -1e-12) {
    ids.push_back(TheoremId::T15);
    ids.push_back(TheoremId::T16);
  }
  return ids;
}

int run_verify(const ExperimentConfig& c, const Potential& P, json& out, Artifacts& art) {
  std::vector<TheoremId> ids;
  if (c.theorems.empty()) ids = applicable(c);
  else
    for (const auto& t : c.theorems) ids.push_back(theorem_from_name(t));

  BoundOptions opt;
  opt.energies = energies_of(c);
  opt.eps = c.eps;
  opt.hermite_M = c.hermite_M;
  opt.E = c.E;

  std::vector<BoundReport> reports;
  json skipped = json::array(), chains = json::array(), violations = json::array();
  for (double l : c.lambdas) {
    const Potential Pl = scale_coupling(P, l);
    std::optional<SweepResult> sw;
    for (TheoremId id : ids) {
      try {
        BoundReport r;
        if (id == TheoremId::T11NonInt || id == TheoremId::T11Int || id == TheoremId::T12) {
          if (!sw) sw = count_ge_one_sweep(Pl, c.s, opt.energies);
          r = evaluate_bound(id, Pl, c.s, opt, *sw);
        } else {
          r = evaluate_bound(id, Pl, c.s, opt);
        }
        reports.push_back(r);
        const auto it = c.constants.find(report_class(r));
        const double C = id == TheoremId::Bargmann ? 1.0 : (it == c.constants.end() ? INFINITY : it->second);
        if (std::isfinite(C) && r.violates(C)) violations.push_back({{"class", report_class(r)}, {"lambda", l}, {"C", C}});
      } catch (const Error& e) {
        skipped.push_back({{"theorem", theorem_name(id)}, {"lambda", l}, {"error", errc_name(e.code())}});
      }
    }
    if (c.s > 0.5 * c.d + 1e-12) {
      const ChainReport ch = chain_check(Pl, c.s, opt.energies);
      chains.push_back({{"lambda", l}, {"plateau", ch.plateau}, {"dimF", ch.dimF}, {"violations", ch.violations}});
      if (ch.violations > 0) violations.push_back({{"class", "chain"}, {"lambda", l}});
    }
  }
  art.reports(reports);
  json rj = json::array();
  for (const auto& r : reports) rj.push_back(to_json(r));
  out["reports"] = rj;
  out["skipped"] = skipped;
  out["chain"] = chains;
  out["violations"] = violations;
  if (!reports.empty()) out["fitted_constants"] = fit_constant(reports);
  return violations.empty() ? 0 : 1;
}

int run_quasinorm(const ExperimentConfig& c, const Potential& P, json& out, Artifacts& art) {
  json rows = json::array();
  const double ex = c.s - 0.5 * c.d;
  const int M = c.hermite_M > 0 ? c.hermite_M : default_hermite_order(c.d);
  for (double l : c.lambdas) {
    const Potential Pl = scale_coupling(P, l);
    json row{{"lambda", l}, {"l2_squared", Pl.values.sum() * Pl.grid.cell_weight()}};
    row["weighted_l2_squared"] = weighted_l2(Pl.grid, Pl.v, WeightSpec::japanese(std::max(ex, 0.0), false));
    row["orlicz"] = orlicz_norm(Pl.grid, Pl.values);
    try {
      row["hermite_log_norm"] = hermite_log_norm(Pl.grid, Pl.v, c.eps, M);
    } catch (const Error& e) {
      row["hermite_log_norm"] = errc_name(e.code());
    }
    if (ex >= -1e-12) {
      BSOptions bs;
      bs.acknowledge_truncation = true;
      const HighNorm hn = weak_norm_high(Pl, c.s, c.E, bs);
      row["weak_norm_high"] = hn.value;
      row["weak_norm_high_truncated"] = hn.truncated;
      std::vector<double> j, lam;
      for (std::size_t i = 0; i < hn.spectrum.size(); ++i) {
        j.push_back(double(i + 1));
        lam.push_back(hn.spectrum[i]);
      }
      art.curve("high_spectrum_lambda" + tag(l), j, lam);
      try {
        row["trace_low_projected"] = trace_low_projected(Pl, c.s, c.E, bs, false).value;
      } catch (const Error& e) {
        row["trace_low_projected"] = errc_name(e.code());
      }
    }
    rows.push_back(row);
  }
  out["results"] = rows;
  return 0;
}

int run_cwikel(const ExperimentConfig& c, const Potential& P, json& out, Artifacts& art) {
  const SpaceGrid& g = P.grid;
  const Eigen::VectorXd f = scale_coupling(P, c.lambdas.front()).v;
  const int d = c.d;
  const double w = c.symbol_width;
  Symbol sym;
  if (c.symbol == "gaussian") sym = [w](const Point& xi) { return std::exp(-0.5 * (xi[0] * xi[0] + xi[1] * xi[1]) / (w * w)); };
  else sym = [d](const Point& xi) { const double r = norm2(xi); return r >= 1.0 ? std::pow(r, -0.5 * d) : 0.0; };

  const LatticeDecomposition D = lattice_decompose(g, f, sym, c.pp);
  const AnBnScan scan = an_bn_scan(D);
  std::vector<double> ns, hs, tr;
  for (const auto& r : scan.levels) {
    ns.push_back(r.n);
    hs.push_back(r.hs2_A);
    tr.push_back(r.trace_B);
  }
  art.curve("hs_norm", ns, hs);
  art.curve("trace_norm", ns, tr);
  out["an_bn"] = {{"max_recombination", scan.max_recombination}, {"hs_slope", scan.hs_slope},
                  {"hs_model_slope", 2.0 - c.pp}, {"tr_slope", scan.tr_slope}, {"tr_model_slope", 1.0 - c.pp},
                  {"C_hs", scan.C_hs}, {"C_tr", scan.C_tr}, {"fan_violations", scan.fan_violations},
                  {"x_classes", D.x_classes.size()}, {"k_classes", D.k_classes.size()}};

  const SimonCurve sc = simon_singular_bound(g, f, sym, c.pp);
  std::vector<double> m, shape;
  for (std::size_t i = 0; i < sc.mu.size(); ++i) {
    m.push_back(double(i + 1));
    shape.push_back(sc.C * sc.shape[i]);
  }
  art.curve("singular_values", m, sc.mu);
  art.curve("singular_bound", m, shape);
  out["singular"] = {{"slope", sc.slope}, {"model_slope", -1.0 / c.pp}, {"C", sc.C}, {"resolved", sc.resolved}};

  const EmbeddingResult em = embedding_check(g, f, c.pp, 1.0);
  out["embedding"] = {{"r", 1.0}, {"lhs", em.lhs}, {"rhs", em.rhs}, {"constant", em.constant}};

  try {
    const Theorem17Report t = theorem17_check(g, f, sym, {radial_power_factorization(d)}, c.delta, c.eps, c.hermite_M);
    json shells = json::array();
    for (const auto& s : t.shells)
      shells.push_back({{"k", s.k}, {"p", s.p}, {"modes", s.modes}, {"norm", s.norm}, {"weighted", s.weighted},
                        {"lhs", s.lhs}, {"holder_holds", s.holder_holds}, {"representable", s.representable}});
    out["theorem17"] = {{"lhs", t.lhs}, {"hermite", t.hermite}, {"factor", t.factor}, {"rhs", t.rhs},
                        {"ratio", t.ratio}, {"residual", t.residual}, {"shells", shells}};
  } catch (const Error& e) {
    out["theorem17"] = {{"error", errc_name(e.code())}};
  }
  return 0;
}

int run_selftest(const ExperimentConfig& c, json& out) {
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<int> size(3, 40);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random = [&](int r, int k) {
    Eigen::MatrixXd A(r, k);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < k; ++j) A(i, j) = gauss(rng);
    return A;
  };

  std::size_t var_fail = 0, fan_fail = 0;
  for (int t = 0; t < c.selftest_cases; ++t) {
    const int n = size(rng);
    const Eigen::MatrixXd G = random(n, n);
    const Eigen::MatrixXd K = (3.0 * unit(rng) / n) * G * G.transpose();
    const int D = 1 + int(unit(rng) * (n - 1));
    if (!variational_check(K, random(n, std::min(D, n - 1))).holds()) ++var_fail;
  }
  for (int t = 0; t < std::max(1, c.selftest_cases / 2); ++t) {
    const int r = size(rng), k = size(rng);
    const Eigen::MatrixXd A = random(r, k), B = random(r, k);
    const Spectrum s = singular_values(A + B), sa = singular_values(A), sb = singular_values(B);
    for (std::size_t m = 1; m <= s.size(); ++m)
      if (!fan_check(s, sa, sb, m).holds) ++fan_fail;
  }

  std::size_t oracle_fail = 0;
  const SpaceGrid g = make_space_grid(1, 20.0, 256);
  for (double V0 : {1.0, 4.0, 16.0}) {
    const std::size_t expect = 1 + std::size_t(std::floor(2.0 * std::sqrt(V0) / std::numbers::pi));
    if (direct_count(build(PotentialKind::well(V0, 1.0), g), 1.0).count != expect) ++oracle_fail;
  }
  const SweepResult sw = count_ge_one_sweep(build(PotentialKind::gaussian(8.0, 1.0), g), 1.0, default_energies());

  out["selftest"] = {{"variational_cases", c.selftest_cases}, {"variational_failures", var_fail},
                     {"fan_failures", fan_fail},              {"square_well_failures", oracle_fail},
                     {"monotone_counts", sw.monotone_counts}, {"eigen_violations", sw.eigen_violations}};
  const bool ok = var_fail == 0 && fan_fail == 0 && oracle_fail == 0 && sw.monotone_counts && sw.eigen_violations == 0;
  out["passed"] = ok;
  return ok ? 0 : 1;
}

}  // namespace

int run_config(const ExperimentConfig& c) {
  validate(c);
  Artifacts art(c.out_dir);
  json out{{"schema_version", kSchemaVersion}, {"seed", c.seed}, {"config", echo(c)}};
  int status = 0;
  std::vector<BoundReport> none;
  if (c.mode == "selftest") {
    status = run_selftest(c, out);
  } else {
    const SpaceGrid g = make_space_grid(c.d, c.L, c.N);
    const Potential P = make_potential(c, g);
    out["potential"] = P.id;
    if (c.mode == "count") status = run_count(c, P, out);
    else if (c.mode == "sweep") status = run_sweep(c, P, out, art);
    else if (c.mode == "verify") status = run_verify(c, P, out, art);
    else if (c.mode == "quasinorm") status = run_quasinorm(c, P, out, art);
    else if (c.mode == "cwikel") status = run_cwikel(c, P, out, art);
  }
  if (c.mode != "verify") art.reports(none);
  art.summary(out);
  return status;
}

}  // namespace fracbound
