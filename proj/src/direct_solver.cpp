#include "fracbound/direct_solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fracbound/errors.hpp"
#include "fracbound/spectra.hpp"

namespace fracbound {

using std::numbers::pi;

namespace {

using cplx = std::complex<double>;

// Real basis column a (1-d ordering of real_fourier_basis) as a combination of
// the discrete exponentials e^{ik(π/L)x}/√N.
struct Term {
  int k;
  cplx c;
};
std::vector<std::vector<Term>> exponential_terms(int N) {
  const double r = std::sqrt(0.5);
  std::vector<std::vector<Term>> T(static_cast<std::size_t>(N));
  T[0] = {{0, 1.0}};
  for (int k = 1; k < N / 2; ++k) {
    T[std::size_t(2 * k - 1)] = {{k, r}, {-k, r}};
    T[std::size_t(2 * k)] = {{k, cplx(0, -r)}, {-k, cplx(0, r)}};
  }
  T[std::size_t(N - 1)] = {{N / 2, 1.0}};
  return T;
}

}  // namespace

// ⟨e_k, V e_l⟩ depends on k − l only, so one transform of V fills the block.
Eigen::MatrixXd potential_block(const Potential& P) {
  const SpaceGrid& g = P.grid;
  const int N = g.N, d = g.d;
  const auto terms = exponential_terms(N);
  std::vector<cplx> tw(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) tw[std::size_t(j)] = std::polar(1.0, -2.0 * pi * j / N);
  auto twiddle = [&](int m, int i) { return tw[std::size_t((long(m) * i) % N)]; };

  // Vhat(m) = N^{-d} Σ_i V_i e^{−i m·t_i}, t_i = 2πi/N − π.
  const int rows = d == 1 ? 1 : N;
  Eigen::MatrixXcd Vh(rows, N);
  if (d == 1) {
    for (int m = 0; m < N; ++m) {
      cplx acc = 0.0;
      for (int i = 0; i < N; ++i) acc += P.values[i] * twiddle(m, i);
      Vh(0, m) = (m % 2 ? -1.0 : 1.0) * acc / double(N);
    }
  } else {
    Eigen::MatrixXcd half(N, N);  // transform along axis 1
    for (int i = 0; i < N; ++i)
      for (int m = 0; m < N; ++m) {
        cplx acc = 0.0;
        for (int j = 0; j < N; ++j) acc += P.values[Eigen::Index(i) * N + j] * twiddle(m, j);
        half(i, m) = acc;
      }
    for (int m1 = 0; m1 < N; ++m1)
      for (int m2 = 0; m2 < N; ++m2) {
        cplx acc = 0.0;
        for (int i = 0; i < N; ++i) acc += half(i, m2) * twiddle(m1, i);
        Vh(m1, m2) = ((m1 + m2) % 2 ? -1.0 : 1.0) * acc / double(N * N);
      }
  }
  auto wrap = [N](int m) { return ((m % N) + N) % N; };

  const Eigen::Index n = Eigen::Index(g.size());
  Eigen::MatrixXd W(n, n);
  if (d == 1) {
    for (int a = 0; a < N; ++a)
      for (int b = 0; b <= a; ++b) {
        cplx acc = 0.0;
        for (const Term& ta : terms[std::size_t(a)])
          for (const Term& tb : terms[std::size_t(b)]) acc += std::conj(ta.c) * tb.c * Vh(0, wrap(ta.k - tb.k));
        W(a, b) = W(b, a) = acc.real();
      }
    return W;
  }
  for (Eigen::Index A = 0; A < n; ++A) {
    const auto& ta1 = terms[std::size_t(A / N)];
    const auto& ta2 = terms[std::size_t(A % N)];
    for (Eigen::Index B = 0; B <= A; ++B) {
      const auto& tb1 = terms[std::size_t(B / N)];
      const auto& tb2 = terms[std::size_t(B % N)];
      cplx acc = 0.0;
      for (const Term& x1 : ta1)
        for (const Term& y1 : tb1) {
          const cplx c1 = std::conj(x1.c) * y1.c;
          const int m1 = wrap(x1.k - y1.k);
          for (const Term& x2 : ta2)
            for (const Term& y2 : tb2) acc += c1 * std::conj(x2.c) * y2.c * Vh(m1, wrap(x2.k - y2.k));
        }
      W(A, B) = W(B, A) = acc.real();
    }
  }
  return W;
}

Eigen::VectorXd kinetic_symbol(const SpaceGrid& g, double s) {
  const auto basis = real_fourier_basis(g);
  return basis->symbol([s](const Point& xi) { return std::pow(norm2(xi), 2.0 * s); });
}

GalerkinHs assemble_direct(const SpaceGrid& grid, const Potential& P, double s) {
  if (!(s >= 0.5)) throw Error(Errc::UnsupportedExponent, "s must be at least 1/2");
  if (!grid.same_as(P.grid)) throw Error(Errc::ShapeMismatch, "potential sampled on another grid");
  GalerkinHs G;
  G.s = s;
  G.grid = grid;
  G.potential_id = P.id;
  G.kinetic = kinetic_symbol(grid, s);
  G.H = -potential_block(P);
  G.H.diagonal() += G.kinetic;
  return G;
}

double default_tau(const GalerkinHs& H) {
  return 1e-12 * std::max(1.0, H.kinetic.size() ? H.kinetic.maxCoeff() : 0.0);
}

NegativeCount count_negative(const GalerkinHs& H, double tau) {
  const Spectrum S = eigh_descending(H.H);
  NegativeCount r;
  r.tau = tau;
  for (auto it = S.values.rbegin(); it != S.values.rend(); ++it) {
    if (*it < -tau) {
      r.negative.push_back(*it);
      ++r.count;
    } else if (*it < 0.0) {
      r.near_threshold.push_back(*it);
    }
  }
  return r;
}

NegativeCount count_negative(const GalerkinHs& H) { return count_negative(H, default_tau(H)); }

NegativeCount direct_count(const Potential& P, double s) {
  return count_negative(assemble_direct(P.grid, P, s));
}

}  // namespace fracbound
