#include "fracbound/potentials.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "fracbound/errors.hpp"

namespace fracbound {

const char* decay_name(DecayTag t) {
  switch (t) {
    case DecayTag::Compact: return "compact";
    case DecayTag::Gaussian: return "gaussian";
    case DecayTag::Power: return "power";
    case DecayTag::Sampled: return "sampled";
  }
  return "sampled";
}

double ProfileTerm::operator()(const Point& x, int d) const {
  const double dx = (x[0] - center[0]) / dilation;
  const double dy = d == 2 ? (x[1] - center[1]) / dilation : 0.0;
  const double r2 = dx * dx + dy * dy;
  switch (shape) {
    case Shape::Well: return std::sqrt(r2) <= width ? amp : 0.0;
    case Shape::Gaussian: return amp * std::exp(-r2 / (width * width));
    case Shape::Power: return amp * std::pow(1.0 + r2 / (width * width), -0.5 * beta);
    case Shape::Bump: {
      const double t = r2 / (width * width);
      return t < 1.0 ? amp * std::exp(1.0 - 1.0 / (1.0 - t)) : 0.0;
    }
  }
  return 0.0;
}

bool Potential::is_bump() const {
  if (terms.empty()) return false;
  for (const auto& t : terms)
    if (t.shape != ProfileTerm::Shape::Bump) return false;
  return true;
}

bool Potential::compactly_supported() const { return tag == DecayTag::Compact; }

double Potential::support_radius() const {
  double r = 0.0;
  for (const auto& t : terms) {
    if (t.shape != ProfileTerm::Shape::Well && t.shape != ProfileTerm::Shape::Bump) return INFINITY;
    r = std::max(r, norm2(t.center) + t.width * t.dilation);
  }
  return r;
}

double Potential::evaluate(const Point& x) const {
  double s = 0.0;
  for (const auto& t : terms) s += t(x, grid.d);
  return s;
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

std::string describe(const PotentialKind& k, int d) {
  std::string name;
  switch (k.shape) {
    case ProfileTerm::Shape::Well: name = "well(V0=" + fmt(k.V0) + ",a=" + fmt(k.width); break;
    case ProfileTerm::Shape::Gaussian: name = "gaussian(V0=" + fmt(k.V0) + ",w=" + fmt(k.width); break;
    case ProfileTerm::Shape::Power:
      name = "power(V0=" + fmt(k.V0) + ",beta=" + fmt(k.beta) + ",core=" + fmt(k.width);
      break;
    case ProfileTerm::Shape::Bump: name = "bump(V0=" + fmt(k.V0) + ",a=" + fmt(k.width); break;
  }
  if (k.center[0] != 0.0 || (d == 2 && k.center[1] != 0.0)) {
    name += ",c=" + fmt(k.center[0]);
    if (d == 2) name += ":" + fmt(k.center[1]);
  }
  return name + ")";
}

void finish(Potential& P) {
  P.v = P.values.cwiseSqrt();
}

int decay_rank(DecayTag t) {
  switch (t) {
    case DecayTag::Compact: return 0;
    case DecayTag::Gaussian: return 1;
    case DecayTag::Power: return 2;
    case DecayTag::Sampled: return 3;
  }
  return 3;
}

}  // namespace

Potential build(const PotentialKind& kind, const SpaceGrid& grid) {
  if (!(kind.V0 >= 0.0)) throw Error(Errc::NegativeAmplitude, "amplitude must be nonnegative");
  if (!(kind.width > 0.0)) throw Error(Errc::NegativeAmplitude, "width must be positive");
  Potential P;
  P.grid = grid;
  ProfileTerm t;
  t.shape = kind.shape;
  t.amp = kind.V0;
  t.width = kind.width;
  t.beta = kind.beta;
  t.center = kind.center;
  P.terms.push_back(t);
  switch (kind.shape) {
    case ProfileTerm::Shape::Well:
    case ProfileTerm::Shape::Bump: P.tag = DecayTag::Compact; break;
    case ProfileTerm::Shape::Gaussian: P.tag = DecayTag::Gaussian; break;
    case ProfileTerm::Shape::Power:
      P.tag = DecayTag::Power;
      P.beta = kind.beta;
      break;
  }
  P.id = describe(kind, grid.d);
  P.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) P.values[i] = t(grid.node(i), grid.d);
  finish(P);
  return P;
}

Potential zero_potential(const SpaceGrid& grid) {
  Potential P = build(PotentialKind::well(0.0, 1.0), grid);
  P.id = "zero";
  return P;
}

Potential from_values(const SpaceGrid& grid, const Eigen::VectorXd& values, const std::string& id) {
  if (std::size_t(values.size()) != grid.size()) throw Error(Errc::ShapeMismatch, "sample count differs from grid size");
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw Error(Errc::ParseError, "non-finite sample");
    if (values[i] < 0.0) throw Error(Errc::NegativeValue, "negative sample");
  }
  Potential P;
  P.grid = grid;
  P.values = values;
  P.tag = DecayTag::Sampled;
  P.id = id;
  finish(P);
  return P;
}

Potential combine(const Potential& a, const Potential& b) {
  if (!a.grid.same_as(b.grid)) throw Error(Errc::ShapeMismatch, "potentials live on different grids");
  Potential P;
  P.grid = a.grid;
  P.values = a.values + b.values;
  P.tag = decay_rank(a.tag) >= decay_rank(b.tag) ? a.tag : b.tag;
  P.beta = std::min(a.tag == DecayTag::Power ? a.beta : INFINITY, b.tag == DecayTag::Power ? b.beta : INFINITY);
  if (!std::isfinite(P.beta)) P.beta = 0.0;
  if (a.analytic() && b.analytic()) {
    P.terms = a.terms;
    P.terms.insert(P.terms.end(), b.terms.begin(), b.terms.end());
  } else {
    P.tag = DecayTag::Sampled;
  }
  P.coupling = 1.0;
  P.truncated = a.truncated || b.truncated;
  P.id = a.id + "+" + b.id;
  finish(P);
  return P;
}

Potential scale_coupling(const Potential& P, double lambda) {
  if (!(lambda >= 0.0)) throw Error(Errc::NegativeCoupling, "coupling must be nonnegative");
  Potential Q = P;
  Q.values = lambda * P.values;
  Q.coupling = P.coupling * lambda;
  for (auto& t : Q.terms) t.amp *= lambda;
  finish(Q);
  return Q;
}

namespace {

// Periodic cardinal function of the trigonometric interpolant, sampled at all
// nodes for one coordinate.
void cardinal_weights(const SpaceGrid& g, double x, std::vector<double>& c) {
  const int N = g.N;
  c.assign(N, 0.0);
  const double h = g.h();
  const double u = (x + g.L) / h;
  const double r = std::round(u);
  if (std::abs(u - r) < 1e-9) {
    c[((long(r) % N) + N) % N] = 1.0;
    return;
  }
  for (int j = 0; j < N; ++j) {
    const double theta = M_PI * (x - g.coord(j)) / g.L;
    c[j] = std::sin(0.5 * N * theta) / std::tan(0.5 * theta) / N;
  }
}

bool inside(const SpaceGrid& g, const Point& x) {
  const double tol = 1e-9 * g.h();
  for (int a = 0; a < g.d; ++a)
    if (std::abs(x[a]) > g.L + tol) return false;
  return true;
}

double nearest(const SpaceGrid& g, const Eigen::VectorXd& f, const Point& x) {
  std::size_t flat = 0;
  for (int a = 0; a < g.d; ++a) {
    long i = std::lround((x[a] + g.L) / g.h());
    i = ((i % g.N) + g.N) % g.N;
    flat = flat * g.N + std::size_t(i);
  }
  return f[Eigen::Index(flat)];
}

}  // namespace

double trig_interpolate(const SpaceGrid& g, const Eigen::VectorXd& f, const Point& x) {
  std::vector<double> cx, cy;
  cardinal_weights(g, x[0], cx);
  if (g.d == 1) {
    double s = 0.0;
    for (int j = 0; j < g.N; ++j)
      if (cx[j] != 0.0) s += cx[j] * f[j];
    return s;
  }
  cardinal_weights(g, x[1], cy);
  double s = 0.0;
  for (int i = 0; i < g.N; ++i) {
    if (cx[i] == 0.0) continue;
    double row = 0.0;
    for (int j = 0; j < g.N; ++j) row += cy[j] * f[Eigen::Index(std::size_t(i) * g.N + j)];
    s += cx[i] * row;
  }
  return s;
}

Potential rescale_R(const Potential& P, double R, double s) {
  if (!(R > 0.0)) throw Error(Errc::NonpositiveR, "R must be positive");
  return rescale_R(P, R, s, make_space_grid(P.grid.d, P.grid.L * R, P.grid.N));
}

Potential rescale_R(const Potential& P, double R, double s, const SpaceGrid& target) {
  if (!(R > 0.0)) throw Error(Errc::NonpositiveR, "R must be positive");
  Potential Q = P;
  Q.grid = target;
  Q.values.resize(target.size());
  const double amp = std::pow(R, -2.0 * s);
  const bool smooth = P.smooth();
  double edge = 0.0;
  for (std::size_t i = 0; i < P.grid.size(); ++i) {
    const Point x = P.grid.node(i);
    for (int a = 0; a < P.grid.d; ++a)
      if (std::abs(x[a]) >= P.grid.L - 1.5 * P.grid.h()) edge = std::max(edge, P.values[Eigen::Index(i)]);
  }
  for (std::size_t i = 0; i < target.size(); ++i) {
    const Point y = target.node(i);
    const Point x{y[0] / R, y[1] / R};
    double val;
    if (!inside(P.grid, x)) {
      val = 0.0;
      if (edge > 0.0) Q.truncated = true;
    } else {
      val = smooth ? trig_interpolate(P.grid, P.values, x) : nearest(P.grid, P.values, x);
    }
    Q.values[Eigen::Index(i)] = amp * std::max(val, 0.0);
  }
  for (auto& t : Q.terms) {
    t.amp *= amp;
    t.dilation *= R;
    t.center = {t.center[0] * R, t.center[1] * R};
  }
  Q.id = P.id + "@R=" + fmt(R);
  finish(Q);
  return Q;
}

Potential load_samples(const std::string& path, const SpaceGrid& grid) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("#", 0) != 0) throw Error(Errc::ParseError, "missing '# d L N' header");
  std::istringstream hdr(line.substr(1));
  int d = 0, N = 0;
  double L = 0.0;
  if (!(hdr >> d >> L >> N)) throw Error(Errc::ParseError, "malformed header");
  if (d != grid.d || L != grid.L || N != grid.N) throw Error(Errc::ShapeMismatch, "header does not match grid");
  std::vector<double> vals;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const std::string tok = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);
    char* end = nullptr;
    const double x = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || !std::isfinite(x)) throw Error(Errc::ParseError, "bad value '" + tok + "'");
    vals.push_back(x);
  }
  if (vals.size() != grid.size()) throw Error(Errc::ShapeMismatch, "row count differs from grid size");
  return from_values(grid, Eigen::Map<Eigen::VectorXd>(vals.data(), Eigen::Index(vals.size())), path);
}

void save_samples(const Potential& P, const std::string& path) {
  std::ofstream out(path);
  out << "# " << P.grid.d << ' ' << std::setprecision(17) << P.grid.L << ' ' << P.grid.N << '\n';
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < P.values.size(); ++i) out << P.values[i] << '\n';
  if (!out) throw Error(Errc::ParseError, "cannot write " + path);
}

}  // namespace fracbound
