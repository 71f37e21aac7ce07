#include "fracbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "fracbound/direct_solver.hpp"
#include "fracbound/errors.hpp"
#include "fracbound/norms.hpp"

namespace fracbound {

using std::numbers::pi;

const char* theorem_name(TheoremId t) {
  switch (t) {
    case TheoremId::T11NonInt: return "T1.1-nonint";
    case TheoremId::T11Int: return "T1.1-int";
    case TheoremId::T12: return "T1.2";
    case TheoremId::T15: return "T1.5";
    case TheoremId::T16: return "T1.6";
    case TheoremId::Bargmann: return "Bargmann";
    case TheoremId::D2Rearr: return "D2-rearr";
    case TheoremId::D2Orlicz: return "D2-orlicz";
  }
  return "?";
}

TheoremId theorem_from_name(const std::string& s) {
  for (TheoremId t : {TheoremId::T11NonInt, TheoremId::T11Int, TheoremId::T12, TheoremId::T15, TheoremId::T16,
                      TheoremId::Bargmann, TheoremId::D2Rearr, TheoremId::D2Orlicz})
    if (s == theorem_name(t)) return t;
  throw Error(Errc::TheoremNotApplicable, "unknown theorem id '" + s + "'");
}

double bound_ratio(double lhs, double dim, double rhs) {
  const double excess = std::max(lhs - dim, 0.0);
  if (excess == 0.0) return 0.0;
  return rhs > 0.0 ? excess / rhs : INFINITY;
}

namespace {

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }

void stamp(BoundReport& r, TheoremId id, const Potential& P, double s) {
  r.theorem = id;
  r.d = P.grid.d;
  r.s = s;
  r.lambda = P.coupling;
  r.N = P.grid.N;
  r.L = P.grid.L;
  r.potential = P.id;
}

double integrate(const Potential& P, const std::function<double(const Point&)>& w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < P.grid.size(); ++i) acc += w(P.grid.node(i)) * P.values[Eigen::Index(i)];
  return acc * P.grid.cell_weight();
}

PointFunction exact_sqrt(const Potential& P) {
  if (!P.analytic()) return nullptr;
  return [P](const Point& x) { return std::sqrt(P.evaluate(x)); };
}

void check_rhs_finite(const Potential& P, double s) {
  // ∫ |x|^{2s−d} V converges at infinity only when V decays faster than |x|^{−2s}.
  if (P.tag == DecayTag::Power && !(P.beta > 2.0 * s)) throw Error(Errc::RhsInfinite, "power-law tail too slow for the weight");
}

}  // namespace

BoundReport evaluate_bound(TheoremId id, const Potential& P, double s, const BoundOptions& opt) {
  if (id == TheoremId::T11NonInt || id == TheoremId::T11Int || id == TheoremId::T12) {
    const int d = P.grid.d;
    if (id == TheoremId::T12 ? std::abs(s - 0.5 * d) > 1e-12 : !(s > 0.5 * d))
      throw Error(Errc::TheoremNotApplicable, "theorem does not apply to this (d, s)");
    return evaluate_bound(id, P, s, opt, count_ge_one_sweep(P, s, opt.energies));
  }
  return evaluate_bound(id, P, s, opt, SweepResult{});
}

BoundReport evaluate_bound(TheoremId id, const Potential& P, double s, const BoundOptions& opt, const SweepResult& sweep) {
  const int d = P.grid.d;
  const double excess = s - 0.5 * d;
  BoundReport r;
  stamp(r, id, P, s);
  r.eps = opt.eps;
  const int M = opt.hermite_M > 0 ? opt.hermite_M : default_hermite_order(d);
  switch (id) {
    case TheoremId::T11NonInt:
    case TheoremId::T11Int: {
      const bool integer = excess > 0.0 && is_integer(excess);
      if (!(excess > 0.0) || (id == TheoremId::T11Int) != integer)
        throw Error(Errc::TheoremNotApplicable, "theorem does not apply to this (d, s)");
      check_rhs_finite(P, s);
      const int n = subspace_order(s, d);
      r.binom_dim = double(binom(d + n, d));
      r.subspace_dim = double(build_subspace(P, s).dim());
      r.lhs = double(sweep.plateau);
      r.near_threshold = sweep.near_one || !sweep.plateau_reached;
      r.plateau_reached = sweep.plateau_reached;
      if (integer) {
        r.weight = "<x>^(s-d/2) sqrt(1+ln<x>)";
        r.rhs = integrate(P, [&](const Point& x) {
          const double jx = std::sqrt(1.0 + x[0] * x[0] + x[1] * x[1]);
          return std::pow(jx, 2.0 * excess) * (1.0 + std::log(jx));
        });
        r.rhs_alt = r.rhs;
      } else {
        r.weight = "|x|^(s-d/2)";
        r.rhs = integrate(P, [&](const Point& x) { return std::pow(norm2(x), 2.0 * excess); });
        r.rhs_alt = integrate(P, [&](const Point& x) { return std::pow(1.0 + x[0] * x[0] + x[1] * x[1], excess); });
      }
      break;
    }
    case TheoremId::T12: {
      if (std::abs(excess) > 1e-12) throw Error(Errc::TheoremNotApplicable, "T1.2 needs s = d/2");
      r.subspace_dim = P.is_zero() ? 0.0 : 1.0;
      r.binom_dim = 1.0;
      r.lhs = double(sweep.plateau);
      r.near_threshold = sweep.near_one || !sweep.plateau_reached;
      r.plateau_reached = sweep.plateau_reached;
      const double h = hermite_log_norm(P.grid, P.v, opt.eps, M, exact_sqrt(P));
      r.rhs = h * h;
      r.weight = "(ln h)^(1/2)(ln ln h)^(1/2+eps), M=" + std::to_string(M);
      break;
    }
    case TheoremId::T15: {
      if (excess < -1e-12) throw Error(Errc::TheoremNotApplicable, "T1.5 needs s >= d/2");
      check_rhs_finite(P, s);
      r.E = opt.E;
      r.lhs = trace_low_projected(P, s, opt.E, opt.bs, false).value;
      const bool integer = is_integer(excess);
      r.weight = integer ? "<x>^(s-d/2) sqrt(1+ln<x>)" : "<x>^(s-d/2)";
      r.rhs = integrate(P, [&](const Point& x) {
        const double jx = std::sqrt(1.0 + x[0] * x[0] + x[1] * x[1]);
        return std::pow(jx, 2.0 * excess) * (integer ? 1.0 + std::log(jx) : 1.0);
      });
      break;
    }
    case TheoremId::T16: {
      if (excess < -1e-12) throw Error(Errc::TheoremNotApplicable, "T1.6 needs s >= d/2");
      r.E = opt.E;
      const bool critical = std::abs(excess) <= 1e-12;
      BSOptions bs = opt.bs;
      if (critical) bs.acknowledge_truncation = true;
      const HighNorm hn = weak_norm_high(P, s, opt.E, bs);
      r.lhs = hn.value;
      r.truncated = hn.truncated;
      if (critical) {
        const double h = hermite_log_norm(P.grid, P.v, opt.eps, M, exact_sqrt(P));
        r.rhs = h * h;
        r.weight = "(ln h)^(1/2)(ln ln h)^(1/2+eps)";
      } else {
        r.rhs = P.values.sum() * P.grid.cell_weight();
        r.weight = "1";
      }
      break;
    }
    case TheoremId::Bargmann: return bargmann_check(P);
    case TheoremId::D2Rearr: return d2_comparison(P, D2Variant::Rearr);
    case TheoremId::D2Orlicz: return d2_comparison(P, D2Variant::Orlicz);
  }
  if (!std::isfinite(r.rhs)) throw Error(Errc::RhsInfinite, "right-hand side is not finite");
  r.ratio = bound_ratio(r.lhs, r.subspace_dim, r.rhs);
  return r;
}

BoundReport bargmann_check(const Potential& P) {
  if (P.grid.d != 1) throw Error(Errc::WrongRegime, "Bargmann bound is one-dimensional");
  BoundReport r;
  stamp(r, TheoremId::Bargmann, P, 1.0);
  const NegativeCount c = direct_count(P, 1.0);
  r.lhs = double(c.count);
  r.near_threshold = !c.near_threshold.empty();
  r.subspace_dim = 1.0;
  r.binom_dim = 1.0;
  r.weight = "|x|^2 (on V)";
  r.rhs = integrate(P, [](const Point& x) { return std::abs(x[0]); });
  r.ratio = bound_ratio(r.lhs, r.subspace_dim, r.rhs);
  return r;
}

double log_rearrangement_term(const StepFunction& Vstar) {
  auto F = [](double r) { return r <= 0.0 ? 0.0 : 0.25 * r * r - 0.5 * r * r * std::log(r); };
  double acc = 0.0, a = 0.0;
  for (std::size_t j = 0; j < Vstar.edges.size() && a < 1.0; ++j) {
    const double b = std::min(Vstar.edges[j], 1.0);
    acc += Vstar.values[j] * (F(b) - F(a));
    a = b;
  }
  return 2.0 * pi * acc;
}

BoundReport d2_comparison(const Potential& P, D2Variant variant) {
  if (P.grid.d != 2) throw Error(Errc::WrongRegime, "two-dimensional comparison needs d = 2");
  if (P.grid.N > 64) throw Error(Errc::WrongRegime, "two-dimensional comparison runs on coarse grids (N <= 64)");
  BoundReport r;
  stamp(r, variant == D2Variant::Rearr ? TheoremId::D2Rearr : TheoremId::D2Orlicz, P, 1.0);
  const NegativeCount c = direct_count(P, 1.0);
  r.lhs = double(c.count);
  r.near_threshold = !c.near_threshold.empty();
  r.subspace_dim = P.is_zero() ? 0.0 : 1.0;
  r.binom_dim = 1.0;
  const double logint = integrate(P, [](const Point& x) { return 1.0 + 0.5 * std::log1p(x[0] * x[0] + x[1] * x[1]); });
  if (variant == D2Variant::Rearr) {
    r.rhs = logint + log_rearrangement_term(decreasing_rearrangement(P.grid, P.values));
    r.weight = "(1+ln<x>) + rearrangement";
  } else {
    r.rhs = logint + orlicz_norm(P.grid, P.values);
    r.weight = "(1+ln<x>) + LlogL";
  }
  r.ratio = bound_ratio(r.lhs, r.subspace_dim, r.rhs);
  return r;
}

ScalingReport scaling_check(const Potential& P, double s, const std::vector<double>& R_list) {
  ScalingReport out;
  const double excess = s - 0.5 * P.grid.d;
  for (double R : R_list) {
    const Potential Q = rescale_R(P, R, s);
    if (Q.truncated) throw Error(Errc::UnresolvedDilation, "dilated potential does not fit the target grid");
    out.R.push_back(R);
    out.counts.push_back(direct_count(Q, s).count);
    out.rhs.push_back(integrate(P, [&](const Point& x) {
      return std::pow(1.0 / (R * R) + x[0] * x[0] + x[1] * x[1], excess);
    }));
  }
  for (std::size_t i = 1; i < out.R.size(); ++i) {
    if (out.counts[i] != out.counts[0]) out.counts_equal = false;
    if (out.R[i] > out.R[i - 1] && out.rhs[i] > out.rhs[i - 1] * (1.0 + 1e-14)) out.rhs_nonincreasing = false;
  }
  return out;
}

LowerBoundReport lower_bound_check(const Potential& P, double s, const std::vector<double>& lambdas,
                                   const std::vector<double>& energies) {
  if (!P.is_zero() && !P.is_bump()) throw Error(Errc::NotCompactlySupported, "needs a smooth compactly supported potential");
  LowerBoundReport out;
  const MonomialSubspace F = build_subspace(P, s);
  out.dimF = F.dim();
  out.energies = energies;
  if (out.dimF == 0) return out;
  std::vector<double> ls = lambdas;
  std::sort(ls.begin(), ls.end());
  for (double l : ls) {
    const std::size_t c = direct_count(scale_coupling(P, l), s).count;
    out.lambdas.push_back(l);
    out.counts.push_back(c);
    if (c >= out.dimF) {
      out.lambda_found = l;
      break;
    }
  }
  std::vector<double> Es = energies;
  std::sort(Es.begin(), Es.end());
  for (std::size_t b = 0; b < out.dimF; ++b) {
    std::vector<double> f;
    for (double E : Es) f.push_back(quadratic_form(P, s, E, F.Q.col(Eigen::Index(b))));
    for (std::size_t i = 1; i < f.size(); ++i)
      if (!(f[i] > f[i - 1])) out.forms_increasing = false;
    out.forms.push_back(std::move(f));
  }
  return out;
}

ChainReport chain_check(const Potential& P, double s, const std::vector<double>& energies) {
  ChainReport out;
  const SweepResult sw = count_ge_one_sweep(P, s, energies);
  out.plateau = sw.plateau;
  out.dimF = build_subspace(P, s).dim();
  const Eigen::MatrixXd W = potential_block(P);
  for (const SweepPoint& pt : sw.points) {
    ChainPoint c;
    c.E = pt.E;
    c.count = pt.count;
    c.trace_low = trace_low_projected(P, s, pt.E, {}, false).value;
    c.weak_high = weak_norm_high(P, s, pt.E, {}, W).value;
    c.rhs = double(out.dimF) + 2.0 * c.trace_low + 2.0 * c.weak_high;
    if (double(out.plateau) > c.rhs || double(c.count) > c.rhs) ++out.violations;
    out.points.push_back(c);
  }
  return out;
}

std::string report_class(const BoundReport& r) {
  std::ostringstream os;
  os << theorem_name(r.theorem) << "|d=" << r.d << "|s=" << std::setprecision(6) << r.s;
  return os.str();
}

std::map<std::string, double> fit_constant(const std::vector<BoundReport>& suite) {
  if (suite.empty()) throw Error(Errc::EmptySuite, "no reports to fit");
  std::map<std::string, double> C;
  for (const auto& r : suite) {
    auto [it, fresh] = C.emplace(report_class(r), r.ratio);
    if (!fresh) it->second = std::max(it->second, r.ratio);
  }
  return C;
}

double relative_change(double a, double b) {
  const double m = std::max(std::abs(a), std::abs(b));
  return m == 0.0 ? 0.0 : std::abs(a - b) / m;
}

nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json j;
  j["theorem"] = theorem_name(r.theorem);
  j["d"] = r.d;
  j["s"] = r.s;
  j["eps"] = r.eps;
  j["lambda"] = r.lambda;
  j["N"] = r.N;
  j["L"] = r.L;
  j["potential"] = r.potential;
  j["E"] = r.E;
  j["lhs"] = r.lhs;
  j["subspace_dim"] = r.subspace_dim;
  j["binom_dim"] = r.binom_dim;
  j["rhs"] = r.rhs;
  j["rhs_alt"] = r.rhs_alt;
  j["ratio"] = std::isfinite(r.ratio) ? nlohmann::json(r.ratio) : nlohmann::json("inf");
  j["weight"] = r.weight;
  j["flags"] = {{"near_threshold", r.near_threshold}, {"truncated", r.truncated}, {"plateau_reached", r.plateau_reached}};
  return j;
}

std::string csv_header() {
  return "theorem,d,s,eps,lambda,N,L,potential,E,lhs,subspace_dim,binom_dim,rhs,rhs_alt,ratio,near_threshold,truncated";
}

std::string to_csv(const BoundReport& r) {
  std::ostringstream os;
  os << std::setprecision(12) << theorem_name(r.theorem) << ',' << r.d << ',' << r.s << ',' << r.eps << ',' << r.lambda
     << ',' << r.N << ',' << r.L << ",\"" << r.potential << "\"," << r.E << ',' << r.lhs << ',' << r.subspace_dim << ','
     << r.binom_dim << ',' << r.rhs << ',' << r.rhs_alt << ',' << r.ratio << ',' << int(r.near_threshold) << ','
     << int(r.truncated);
  return os.str();
}

}  // namespace fracbound
