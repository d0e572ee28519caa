#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "revival/commensurate.hpp"
#include "revival/fraction.hpp"
#include "revival/packet.hpp"

namespace revival {

// Second-order phase fractions at a fractional-revival time:
// theta_{k1 k2} = (p1/q1) k1^2 + (p2/q2) k2^2 + (p12/q12) k1 k2.
struct ThetaSpec {
  Fraction p1q1;
  Fraction p2q2;
  std::optional<Fraction> p12q12;
};

inline ThetaSpec theta_spec(const FracTime& point) {
  return ThetaSpec{point.p1q1, point.p2q2, point.p12q12};
}

// Exact rational theta reduced mod 1.
inline Fraction theta(const ThetaSpec& spec, long long k1, long long k2) {
  Fraction v = spec.p1q1 * Fraction(k1 * k1) + spec.p2q2 * Fraction(k2 * k2);
  if (spec.p12q12) v = v + *spec.p12q12 * Fraction(k1 * k2);
  return v.mod1();
}

struct CyclicPeriods {
  long long l1 = 1;
  long long l2 = 1;
};

namespace detail {

// theta(k + l e_i) - theta(k) = pq l^2 + 2 pq l k_i + cross l k_j, so the
// shift is an integer for every (k1, k2) exactly when all three
// coefficients are integers.
inline bool is_cyclic_period(const Fraction& pq, const Fraction* cross, long long l) {
  if (!(pq * Fraction(l * l)).is_integer()) return false;
  if (!(pq * Fraction(2 * l)).is_integer()) return false;
  if (cross && !(*cross * Fraction(l)).is_integer()) return false;
  return true;
}

}  // namespace detail

// Smallest positive periods of theta mod 1 in each index.  The scan is
// bounded by q * q12, which always satisfies the conditions.
inline CyclicPeriods minimal_periods(const ThetaSpec& spec) {
  const Fraction* cross = spec.p12q12 ? &*spec.p12q12 : nullptr;
  auto find = [&](const Fraction& pq) -> long long {
    long long bound = pq.den() * (cross ? cross->den() : 1);
    for (long long l = 1; l < bound; ++l)
      if (detail::is_cyclic_period(pq, cross, l)) return l;
    return bound;
  };
  return CyclicPeriods{find(spec.p1q1), find(spec.p2q2)};
}

using CoefficientMatrix = std::vector<std::vector<Complex>>;

// Subsidiary-wave weights: the inverse finite Fourier transform of
// exp(-2 pi i theta) over one period cell, with the total phase kept in
// exact rational arithmetic until the final exponential.
inline CoefficientMatrix expansion_coefficients(const ThetaSpec& spec, long long l1,
                                                long long l2) {
  if (l1 < 1 || l2 < 1) throw std::invalid_argument("expansion_coefficients: periods must be >= 1");
  std::vector<std::vector<Fraction>> th(l1, std::vector<Fraction>(l2));
  for (long long k1 = 0; k1 < l1; ++k1)
    for (long long k2 = 0; k2 < l2; ++k2) th[k1][k2] = theta(spec, k1, k2);

  CoefficientMatrix a(l1, std::vector<Complex>(l2));
  const double inv = 1.0 / static_cast<double>(l1 * l2);
  for (long long s1 = 0; s1 < l1; ++s1)
    for (long long s2 = 0; s2 < l2; ++s2) {
      Complex acc(0.0, 0.0);
      for (long long k1 = 0; k1 < l1; ++k1)
        for (long long k2 = 0; k2 < l2; ++k2) {
          Fraction f = (Fraction(s1 * k1, l1) + Fraction(s2 * k2, l2) - th[k1][k2]).mod1();
          double p = two_pi * f.value();
          acc += Complex(std::cos(p), std::sin(p));
        }
      a[s1][s2] = inv * acc;
    }
  return a;
}

inline std::vector<Complex> expansion_coefficients_1d(const Fraction& pq, long long l) {
  ThetaSpec spec{pq, Fraction(0), std::nullopt};
  CoefficientMatrix a = expansion_coefficients(spec, l, 1);
  std::vector<Complex> out(l);
  for (long long s = 0; s < l; ++s) out[s] = a[s][0];
  return out;
}

// A fully resolved fractional-revival point: fractions, minimal cyclic
// periods, and the expansion coefficient matrix.
struct RevivalPoint {
  FracTime frac;
  ThetaSpec spec;
  long long l1 = 1;
  long long l2 = 1;
  CoefficientMatrix coeffs;
};

inline double sum_abs2(const CoefficientMatrix& a) {
  double s = 0.0;
  for (const auto& row : a)
    for (const Complex& c : row) s += std::norm(c);
  return s;
}

inline RevivalPoint make_revival_point(const FracTime& frac) {
  RevivalPoint point;
  point.frac = frac;
  point.spec = theta_spec(frac);
  CyclicPeriods lp = minimal_periods(point.spec);
  point.l1 = lp.l1;
  point.l2 = lp.l2;
  // exact cyclicity is guaranteed by construction; verify over a period
  for (long long k1 = 0; k1 <= lp.l1; ++k1)
    for (long long k2 = 0; k2 <= lp.l2; ++k2) {
      if (theta(point.spec, k1 + lp.l1, k2) != theta(point.spec, k1, k2) ||
          theta(point.spec, k1, k2 + lp.l2) != theta(point.spec, k1, k2))
        throw std::logic_error("make_revival_point: cyclic period check failed");
    }
  point.coeffs = expansion_coefficients(point.spec, lp.l1, lp.l2);
  if (std::abs(sum_abs2(point.coeffs) - 1.0) > 1e-12)
    throw std::logic_error("make_revival_point: coefficient matrix not unitary");
  return point;
}

// Residual of the subsidiary-wave identity
// exp(-2 pi i theta_k) = sum_s a_s exp(-2 pi i (k1 s1/l1 + k2 s2/l2)),
// which is exactly zero in infinite precision.
inline double verify_expansion(const RevivalPoint& point) {
  double worst = 0.0;
  for (long long k1 = 0; k1 < point.l1; ++k1)
    for (long long k2 = 0; k2 < point.l2; ++k2) {
      double p = two_pi * theta(point.spec, k1, k2).value();
      Complex lhs(std::cos(p), -std::sin(p));
      Complex rhs(0.0, 0.0);
      for (long long s1 = 0; s1 < point.l1; ++s1)
        for (long long s2 = 0; s2 < point.l2; ++s2) {
          Fraction f = (Fraction(k1 * s1, point.l1) + Fraction(k2 * s2, point.l2)).mod1();
          double q = two_pi * f.value();
          rhs += point.coeffs[s1][s2] * Complex(std::cos(q), -std::sin(q));
        }
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  return worst;
}

struct Classification {
  int n_waves = 0;
  bool equal_norm = true;
  bool separable = true;
};

namespace detail {

// Largest singular value and the Frobenius norm of the rank-1 remainder,
// via power iteration on A^H A (matrices here are tiny).
inline std::pair<double, double> rank_one_split(const CoefficientMatrix& a) {
  const std::size_t rows = a.size();
  const std::size_t cols = a[0].size();
  std::vector<Complex> v(cols);
  // start from the column of largest norm
  std::size_t pivot = 0;
  double best = -1.0;
  for (std::size_t j = 0; j < cols; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += std::norm(a[i][j]);
    if (s > best) {
      best = s;
      pivot = j;
    }
  }
  for (std::size_t j = 0; j < cols; ++j) v[j] = (j == pivot) ? 1.0 : 0.0;

  std::vector<Complex> u(rows);
  double sigma = 0.0;
  for (int iter = 0; iter < 64; ++iter) {
    for (std::size_t i = 0; i < rows; ++i) {
      Complex s(0.0, 0.0);
      for (std::size_t j = 0; j < cols; ++j) s += a[i][j] * v[j];
      u[i] = s;
    }
    double un = 0.0;
    for (const Complex& c : u) un += std::norm(c);
    un = std::sqrt(un);
    if (un == 0.0) return {0.0, 0.0};
    for (Complex& c : u) c /= un;
    for (std::size_t j = 0; j < cols; ++j) {
      Complex s(0.0, 0.0);
      for (std::size_t i = 0; i < rows; ++i) s += std::conj(a[i][j]) * u[i];
      v[j] = s;  // A^H u = sigma v when a_ij = sigma u_i conj(v_j)
    }
    double vn = 0.0;
    for (const Complex& c : v) vn += std::norm(c);
    vn = std::sqrt(vn);
    if (vn == 0.0) return {0.0, 0.0};
    for (Complex& c : v) c /= vn;
    if (std::abs(vn - sigma) <= 1e-15 * std::max(1.0, vn) && iter > 2) {
      sigma = vn;
      break;
    }
    sigma = vn;
  }
  double resid = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      resid += std::norm(a[i][j] - sigma * u[i] * std::conj(v[j]));
  return {sigma, std::sqrt(resid)};
}

}  // namespace detail

inline Classification classify(const RevivalPoint& point, double zero_tol = 1e-10) {
  Classification cls;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& row : point.coeffs)
    for (const Complex& c : row) {
      double m = std::abs(c);
      if (m > zero_tol) {
        ++cls.n_waves;
        lo = std::min(lo, m);
        hi = std::max(hi, m);
      }
    }
  cls.equal_norm = cls.n_waves == 0 || (hi - lo) <= zero_tol;
  auto [sigma, resid] = detail::rank_one_split(point.coeffs);
  cls.separable = sigma > 0.0 && resid <= zero_tol * sigma;
  return cls;
}

// Per-component subsidiary-wave counts of the factorized transform;
// defined only when the cross term is absent.
inline std::optional<std::pair<int, int>> component_wave_counts(const RevivalPoint& point,
                                                                double zero_tol = 1e-10) {
  if (point.spec.p12q12) return std::nullopt;
  auto count = [&](const std::vector<Complex>& a) {
    int n = 0;
    for (const Complex& c : a)
      if (std::abs(c) > zero_tol) ++n;
    return n;
  };
  return std::make_pair(count(expansion_coefficients_1d(point.spec.p1q1, point.l1)),
                        count(expansion_coefficients_1d(point.spec.p2q2, point.l2)));
}

// Expansion-side prediction of the autocorrelation near t_frac:
// A(t) = sum_s a_{s1 s2} <Psi(0)|psi_cl(t + s1 Tcl1/l1, t + s2 Tcl2/l2)>.
inline Complex predict_autocorrelation(const RevivalPoint& point, const CoefficientGrid& grid,
                                       const TimeScales& ts, double t) {
  if (!ts.tcl1 || !ts.tcl2)
    throw std::invalid_argument("predict_autocorrelation: classical periods must be present");
  Complex acc(0.0, 0.0);
  for (long long s1 = 0; s1 < point.l1; ++s1)
    for (long long s2 = 0; s2 < point.l2; ++s2) {
      const Complex& a = point.coeffs[s1][s2];
      if (std::abs(a) == 0.0) continue;
      double t1 = t + static_cast<double>(s1) / static_cast<double>(point.l1) * *ts.tcl1;
      double t2 = t + static_cast<double>(s2) / static_cast<double>(point.l2) * *ts.tcl2;
      acc += a * classical_overlap(grid, ts, t1, t2);
    }
  return acc;
}

}  // namespace revival
