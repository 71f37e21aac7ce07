#include "fracbound/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "fracbound/errors.hpp"

namespace fracbound {

namespace {

const std::vector<std::string> kModes = {"count", "verify", "sweep", "quasinorm", "cwikel", "selftest"};

template <class T>
T get(const YAML::Node& n, const char* key, T fallback) {
  const YAML::Node v = n[key];
  if (!v) return fallback;
  try {
    return v.as<T>();
  } catch (const YAML::Exception&) {
    throw Error(Errc::ConfigInvalid, std::string("bad value for '") + key + "'");
  }
}

Point read_center(const YAML::Node& n) {
  Point c{0.0, 0.0};
  if (!n) return c;
  if (!n.IsSequence() || n.size() < 1 || n.size() > 2) throw Error(Errc::ConfigInvalid, "center must be a list of 1 or 2 numbers");
  for (std::size_t i = 0; i < n.size(); ++i) c[i] = n[i].as<double>();
  return c;
}

PotentialKind read_term(const YAML::Node& t) {
  const std::string shape = get<std::string>(t, "shape", "");
  const double V0 = get<double>(t, "V0", 1.0);
  PotentialKind k;
  if (shape == "well") k = PotentialKind::well(V0, get<double>(t, "a", 1.0));
  else if (shape == "gaussian") k = PotentialKind::gaussian(V0, get<double>(t, "w", 1.0));
  else if (shape == "power") k = PotentialKind::power(V0, get<double>(t, "beta", 4.0), get<double>(t, "core", 1.0));
  else if (shape == "bump") k = PotentialKind::bump(V0, get<double>(t, "a", 1.0));
  else throw Error(Errc::ConfigInvalid, "unknown potential shape '" + shape + "'");
  return k.at(read_center(t["center"]));
}

std::vector<double> read_energies(const YAML::Node& n) {
  if (!n) return {};
  if (n.IsSequence()) return n.as<std::vector<double>>();
  if (n.IsMap() && n["geometric"]) {
    const YAML::Node g = n["geometric"];
    const double start = get<double>(g, "start", -1.0), ratio = get<double>(g, "ratio", 0.5);
    const int count = get<int>(g, "count", 21);
    std::vector<double> E;
    for (int j = 0; j < count; ++j) E.push_back(start * std::pow(ratio, j));
    return E;
  }
  throw Error(Errc::ConfigInvalid, "energies must be a list or {geometric: {start, ratio, count}}");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(Errc::ConfigInvalid, std::string("parse error: ") + e.what());
  }
  if (!root.IsMap()) throw Error(Errc::ConfigInvalid, "top level must be a mapping");
  ExperimentConfig c;
  try {
    c.mode = get<std::string>(root, "mode", "");
    c.d = get<int>(root, "d", c.d);
    c.s = get<double>(root, "s", c.s);
    c.eps = get<double>(root, "eps", c.eps);
    c.delta = get<double>(root, "delta", c.delta);
    if (const YAML::Node g = root["grid"]) {
      c.L = get<double>(g, "L", c.L);
      c.N = get<int>(g, "N", c.N);
    }
    if (const YAML::Node p = root["potential"]) {
      c.potential.file = get<std::string>(p, "file", "");
      if (const YAML::Node ts = p["terms"]) {
        if (!ts.IsSequence()) throw Error(Errc::ConfigInvalid, "potential.terms must be a list");
        for (const auto& t : ts) c.potential.terms.push_back(read_term(t));
      }
    }
    c.energies = read_energies(root["energies"]);
    if (root["lambdas"]) c.lambdas = root["lambdas"].as<std::vector<double>>();
    c.E = get<double>(root, "E", c.E);
    c.hermite_M = get<int>(root, "hermite_M", c.hermite_M);
    if (root["theorems"]) c.theorems = root["theorems"].as<std::vector<std::string>>();
    if (root["constants"]) c.constants = root["constants"].as<std::map<std::string, double>>();
    if (const YAML::Node cw = root["cwikel"]) {
      c.pp = get<double>(cw, "pp", c.pp);
      c.symbol = get<std::string>(cw, "symbol", c.symbol);
      c.symbol_width = get<double>(cw, "width", c.symbol_width);
    }
    c.selftest_cases = get<int>(root, "selftest_cases", c.selftest_cases);
    if (const YAML::Node o = root["output"]) c.out_dir = get<std::string>(o, "dir", c.out_dir);
    c.seed = get<std::uint64_t>(root, "seed", c.seed);
  } catch (const YAML::Exception& e) {
    throw Error(Errc::ConfigInvalid, e.what());
  }
  return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ConfigInvalid, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void validate(const ExperimentConfig& c) {
  auto bad = [](const std::string& m) { throw Error(Errc::ConfigInvalid, m); };
  if (std::find(kModes.begin(), kModes.end(), c.mode) == kModes.end()) bad("mode must be one of count, verify, sweep, quasinorm, cwikel, selftest");
  if (c.d != 1 && c.d != 2) bad("d must be 1 or 2");
  if (!(c.s >= 0.5)) bad("s must be at least 1/2");
  if (!(c.L > 0.0) || std::abs(c.L - std::round(c.L)) > 1e-12) bad("grid.L must be a positive integer");
  if (c.N < 8 || c.N % 2 != 0) bad("grid.N must be even and at least 8");
  if (!(c.eps > 0.0) || !(c.delta > 0.0)) bad("eps and delta must be positive");
  for (double E : c.energies)
    if (!(E < 0.0)) bad("sweep energies must be negative");
  for (double l : c.lambdas)
    if (!(l >= 0.0)) bad("lambdas must be nonnegative");
  if (c.lambdas.empty()) bad("lambdas must not be empty");
  if (c.mode == "cwikel" && !(c.pp > 1.0 && c.pp < 2.0)) bad("cwikel.pp must lie in (1, 2)");
  if (c.mode == "cwikel" && c.symbol != "gaussian" && c.symbol != "radial-power") bad("cwikel.symbol must be gaussian or radial-power");
  if (c.selftest_cases < 1) bad("selftest_cases must be positive");
}

void apply_grid_override(ExperimentConfig& c, const std::string& spec) {
  std::istringstream in(spec);
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw Error(Errc::ConfigInvalid, "grid override expects KEY=VALUE, got '" + tok + "'");
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    try {
      if (key == "N") c.N = std::stoi(val);
      else if (key == "L") c.L = std::stod(val);
      else throw Error(Errc::ConfigInvalid, "unknown grid key '" + key + "'");
    } catch (const std::logic_error&) {
      throw Error(Errc::ConfigInvalid, "bad grid value '" + val + "'");
    }
  }
}

}  // namespace fracbound
