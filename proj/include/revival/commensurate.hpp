#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "revival/fraction.hpp"
#include "revival/models.hpp"

namespace revival {

// Outcome of the short-time beat analysis: Tcl1 = (a/b) Tcl2 and the
// common period Tcl = b Tcl1 = a Tcl2.
struct ClassicalBeat {
  long long a = 1;
  long long b = 1;
  double period = 0.0;
};

inline std::optional<ClassicalBeat> classical_beat(double tcl1, double tcl2,
                                                   long long max_den = 64, double tol = 1e-9) {
  if (!(tcl1 > 0) || !(tcl2 > 0))
    throw std::invalid_argument("classical_beat: periods must be positive");
  auto ratio = rationalize(tcl1 / tcl2, max_den, tol);
  if (!ratio) return std::nullopt;  // initial motion not exactly periodic
  return ClassicalBeat{ratio->num(), ratio->den(), static_cast<double>(ratio->den()) * tcl1};
}

enum class RevBase { rev1 };

// The three revival times expressed as exact fractions of a base time
// (trev_i = f_i * base); entries are absent together with the scales.
struct CommensurateTriple {
  Fraction f1;
  Fraction f2;
  std::optional<Fraction> f12;
  RevBase base = RevBase::rev1;
};

// Rationalizes trev1/trev2 and, when present, trev1/trev12.  Returns
// nullopt if either ratio fails at this resolution, in which case no
// revival commensurability exists and no t_frac can be enumerated.
inline std::optional<CommensurateTriple> revival_triple(const TimeScales& ts,
                                                        long long max_den = 64,
                                                        double tol = 1e-9) {
  if (!ts.trev1 || !ts.trev2)
    throw std::invalid_argument("revival_triple: trev1 and trev2 must be present");
  auto r12 = rationalize(*ts.trev1 / *ts.trev2, max_den, tol);
  if (!r12 || r12->is_zero()) return std::nullopt;
  CommensurateTriple triple;
  triple.f1 = Fraction(1);
  triple.f2 = r12->inverse();
  if (ts.trev12) {
    auto r1x = rationalize(*ts.trev1 / *ts.trev12, max_den, tol);
    if (!r1x || r1x->is_zero()) return std::nullopt;
    triple.f12 = r1x->inverse();
  }
  return triple;
}

// Exact-ratio construction that bypasses rationalize, for models whose
// revival ratios are known analytically (rev1_over_rev2 = trev1/trev2).
inline CommensurateTriple exact_triple(const Fraction& rev1_over_rev2,
                                       const std::optional<Fraction>& rev1_over_rev12 =
                                           std::nullopt) {
  CommensurateTriple triple;
  triple.f1 = Fraction(1);
  triple.f2 = rev1_over_rev2.inverse();
  if (rev1_over_rev12) triple.f12 = rev1_over_rev12->inverse();
  return triple;
}

// A candidate fractional-revival time with its three simultaneously
// irreducible fraction pairs t = (p_i/q_i) trev_i.
struct FracTime {
  double t = 0.0;
  Fraction p1q1;
  Fraction p2q2;
  std::optional<Fraction> p12q12;
};

// All t in (0, tmax] whose fractions of every present revival time have
// denominator <= qmax, sorted ascending.  Full revivals appear as the
// special case where all fractions are integers.
inline std::vector<FracTime> enumerate_fractimes(const CommensurateTriple& triple,
                                                 const TimeScales& ts, int qmax, double tmax) {
  if (!ts.trev1 || !ts.trev2)
    throw std::invalid_argument("enumerate_fractimes: trev1 and trev2 must be present");
  if (qmax < 1) throw std::invalid_argument("enumerate_fractimes: qmax must be >= 1");
  const double base = *ts.trev1;
  const long long sign = base > 0 ? 1 : -1;
  const double umax = tmax / std::abs(base);

  std::vector<FracTime> out;
  for (long long b = 1; b <= qmax; ++b) {
    for (long long a = 1; static_cast<double>(a) / static_cast<double>(b) <= umax; ++a) {
      if (std::gcd(a, b) != 1) continue;
      Fraction u(sign * a, b);  // t = u * trev1, t > 0
      Fraction p2q2 = u * triple.f1 / triple.f2;
      if (p2q2.den() > qmax) continue;
      std::optional<Fraction> p12q12;
      if (triple.f12) {
        p12q12 = u * triple.f1 / *triple.f12;
        if (p12q12->den() > qmax) continue;
      }
      out.push_back(FracTime{u.value() * base, u, p2q2, p12q12});
    }
  }
  std::sort(out.begin(), out.end(), [](const FracTime& x, const FracTime& y) { return x.t < y.t; });
  return out;
}

// Ratios trev1 = (r1/s1) trev12 and trev2 = (r2/s2) trev12 induced by a
// fractional-revival point; absent when there is no cross-revival time.
struct CrossRatios {
  Fraction r1s1;
  Fraction r2s2;
};

inline std::optional<CrossRatios> cross_ratios(const FracTime& point) {
  if (!point.p12q12) return std::nullopt;
  const Fraction& px = *point.p12q12;
  return CrossRatios{Fraction(point.p1q1.den() * px.num(), point.p1q1.num() * px.den()),
                     Fraction(point.p2q2.den() * px.num(), point.p2q2.num() * px.den())};
}

}  // namespace revival
