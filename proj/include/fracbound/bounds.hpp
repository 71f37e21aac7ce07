#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracbound/birman_schwinger.hpp"
#include "fracbound/norms.hpp"
#include "fracbound/potentials.hpp"

namespace fracbound {

enum class TheoremId { T11NonInt, T11Int, T12, T15, T16, Bargmann, D2Rearr, D2Orlicz };
const char* theorem_name(TheoremId t);
TheoremId theorem_from_name(const std::string& s);

struct BoundReport {
  TheoremId theorem = TheoremId::T11NonInt;
  int d = 1;
  double s = 1.0;
  double eps = 0.01;
  double lambda = 1.0;
  int N = 0;
  double L = 0.0;
  std::string potential;
  double E = 0.0;             // energy used for trace / weak-norm theorems
  double lhs = 0.0;
  double subspace_dim = 0.0;  // c_{d,n}(v), 1 or 0 depending on the theorem
  double binom_dim = 0.0;     // binom(d+n, d) for T1.1
  double rhs = 0.0;
  double rhs_alt = 0.0;       // T1.1 non-integer case with ⟨x⟩ in place of |x|
  double ratio = 0.0;
  bool near_threshold = false;
  bool truncated = false;
  bool plateau_reached = true;
  std::string weight;  // which weight produced rhs

  bool violates(double C) const { return lhs - subspace_dim > C * rhs * (1.0 + 1e-12); }
};

double bound_ratio(double lhs, double dim, double rhs);

struct BoundOptions {
  std::vector<double> energies = default_energies();
  double eps = 0.01;
  int hermite_M = 0;  // 0 selects default_hermite_order(d)
  double E = 0.0;     // energy for T1.5 / T1.6
  BSOptions bs;
};

BoundReport evaluate_bound(TheoremId id, const Potential& P, double s, const BoundOptions& opt = {});
// Same, with a Birman-Schwinger sweep already computed for (P, s).
BoundReport evaluate_bound(TheoremId id, const Potential& P, double s, const BoundOptions& opt,
                           const SweepResult& sweep);

BoundReport bargmann_check(const Potential& P);

enum class D2Variant { Rearr, Orlicz };
BoundReport d2_comparison(const Potential& P, D2Variant variant);
// −∫_{|x|≤1} ln|x| V*(|x|) dx in d = 2, exact for the step function V*.
double log_rearrangement_term(const StepFunction& Vstar);

struct ScalingReport {
  std::vector<double> R;
  std::vector<std::size_t> counts;
  std::vector<double> rhs;  // ∫(R^{-2} + x²)^{s−d/2} V dx
  bool counts_equal = true;
  bool rhs_nonincreasing = true;
};
ScalingReport scaling_check(const Potential& P, double s, const std::vector<double>& R_list);

struct LowerBoundReport {
  std::size_t dimF = 0;
  std::vector<double> lambdas;
  std::vector<std::size_t> counts;
  double lambda_found = -1.0;  // smallest λ with count ≥ dim F_n, −1 if none
  std::vector<double> energies;
  std::vector<std::vector<double>> forms;  // forms[basis][energy]
  bool forms_increasing = true;
  bool achieved() const { return lambda_found >= 0.0; }
};
LowerBoundReport lower_bound_check(const Potential& P, double s, const std::vector<double>& lambdas,
                                   const std::vector<double>& energies = {-1.0, -0.1, -0.01, -0.001});

struct ChainPoint {
  double E = 0.0;
  std::size_t count = 0;  // N_{≥1}(K_E)
  double trace_low = 0.0;
  double weak_high = 0.0;
  double rhs = 0.0;       // c + 2·trace_low + 2·weak_high
};
struct ChainReport {
  std::size_t plateau = 0;
  std::size_t dimF = 0;
  std::vector<ChainPoint> points;
  std::size_t violations = 0;  // plateau > rhs at some E
};
ChainReport chain_check(const Potential& P, double s, const std::vector<double>& energies = default_energies());

std::string report_class(const BoundReport& r);  // theorem|d|s key
// C_emp = max ratio per report class.
std::map<std::string, double> fit_constant(const std::vector<BoundReport>& suite);
double relative_change(double a, double b);

nlohmann::json to_json(const BoundReport& r);
std::string csv_header();
std::string to_csv(const BoundReport& r);

}  // namespace fracbound
