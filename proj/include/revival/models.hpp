#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>

#include "revival/fraction.hpp"

namespace revival {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Integer lattice of allowed quantum numbers around the packet center.
// Effective indices kappa = (n - nbar)/step are plain integers; step > 1
// models spectra whose adjacent quantum numbers differ by more than one
// unit (e.g. parity-linked Stark levels with step 2 in k).
struct Lattice {
  int nbar1 = 0;
  int nbar2 = 0;
  int step1 = 1;
  int step2 = 1;
  int halfwidth1 = 12;
  int halfwidth2 = 12;

  int n1(int k1) const { return nbar1 + step1 * k1; }
  int n2(int k2) const { return nbar2 + step2 * k2; }
};

inline void validate(const Lattice& lat) {
  if (lat.step1 < 1 || lat.step2 < 1)
    throw std::invalid_argument("Lattice: steps must be >= 1");
  if (lat.halfwidth1 < 1 || lat.halfwidth2 < 1)
    throw std::invalid_argument("Lattice: halfwidths must be >= 1");
}

// Particle of unit mass in a 2D box with periodic boundary conditions:
// E(n1,n2) = 2 pi^2 (n1^2/L1^2 + n2^2/L2^2).  Only the squared side
// lengths enter; they may be supplied as exact rationals so that revival
// time ratios stay exact instead of passing through float division.
struct Box2D {
  double lsq1 = 1.0;
  double lsq2 = 1.0;
  std::optional<Fraction> lsq1_exact;
  std::optional<Fraction> lsq2_exact;

  Box2D(double L1, double L2) : lsq1(L1 * L1), lsq2(L2 * L2) {
    if (!(L1 > 0) || !(L2 > 0)) throw std::invalid_argument("Box2D: lengths must be positive");
  }
  static Box2D from_squared(const Fraction& s1, const Fraction& s2) {
    if (s1.num() <= 0 || s2.num() <= 0)
      throw std::invalid_argument("Box2D: squared lengths must be positive");
    Box2D m(1.0, 1.0);
    m.lsq1 = s1.value();
    m.lsq2 = s2.value();
    m.lsq1_exact = s1;
    m.lsq2_exact = s2;
    return m;
  }
};

// Hydrogen in a weak static electric field, first order in F:
// E(n,k) = -1/(2 n^2) + 3 n k F / 2, with n the principal and k the
// parabolic difference quantum number.
struct StarkHydrogen {
  double field = 0.0;
  explicit StarkHydrogen(double F) : field(F) {
    if (!(F > 0)) throw std::invalid_argument("StarkHydrogen: field must be positive");
  }
};

// Free-form polynomial spectrum: E = sum c_{ab} n1^a n2^b.
struct Polynomial {
  std::map<std::pair<int, int>, double> coeffs;
};

using EnergyModel = std::variant<Box2D, StarkHydrogen, Polynomial>;

// Model energy at real-valued arguments; exact formula, no truncation.
inline double eval_energy(const EnergyModel& model, double x1, double x2) {
  struct Visitor {
    double x1, x2;
    double operator()(const Box2D& m) const {
      return two_pi * pi * (x1 * x1 / m.lsq1 + x2 * x2 / m.lsq2);
    }
    double operator()(const StarkHydrogen& m) const {
      if (x1 == 0.0) throw std::domain_error("StarkHydrogen: energy undefined at n = 0");
      return -1.0 / (2.0 * x1 * x1) + 1.5 * x1 * x2 * m.field;
    }
    double operator()(const Polynomial& m) const {
      double e = 0.0;
      for (const auto& [powers, c] : m.coeffs)
        e += c * std::pow(x1, powers.first) * std::pow(x2, powers.second);
      return e;
    }
  };
  return std::visit(Visitor{x1, x2}, model);
}

inline double energy(const EnergyModel& model, int n1, int n2) {
  return eval_energy(model, static_cast<double>(n1), static_cast<double>(n2));
}

// Value and first/second partials of E at the lattice center, in raw
// quantum numbers (no lattice-step factors applied yet).
struct DerivativeSet {
  double e0 = 0.0;
  double d1 = 0.0, d2 = 0.0;
  double d11 = 0.0, d22 = 0.0, d12 = 0.0;
  bool analytic = true;
};

namespace detail {

// Richardson-extrapolated central difference, halving from h0 until two
// successive diagonal entries agree.
template <class F>
double romberg_derivative(F&& quotient, double h0 = 1.0, int max_level = 8,
                          double stop_tol = 1e-11, double check_tol = 1e-8) {
  std::array<std::array<double, 8>, 8> t{};
  double best_gap = std::numeric_limits<double>::infinity();
  double best = 0.0;
  for (int i = 0; i < max_level; ++i) {
    t[i][0] = quotient(h0 / static_cast<double>(1 << i));
    double pow4 = 4.0;
    for (int j = 1; j <= i; ++j) {
      t[i][j] = (pow4 * t[i][j - 1] - t[i - 1][j - 1]) / (pow4 - 1.0);
      pow4 *= 4.0;
    }
    if (i > 0) {
      double gap = std::abs(t[i][i] - t[i - 1][i - 1]);
      double scale = std::max(1.0, std::abs(t[i][i]));
      if (gap <= stop_tol * scale) return t[i][i];
      if (gap < best_gap) {
        best_gap = gap;
        best = t[i][i];
      }
    }
  }
  if (best_gap > check_tol * std::max(1.0, std::abs(best)))
    throw std::runtime_error("finite-difference derivative failed to converge");
  return best;
}

inline DerivativeSet finite_difference_derivatives(const EnergyModel& model, double c1,
                                                   double c2) {
  auto f = [&](double x1, double x2) { return eval_energy(model, x1, x2); };
  DerivativeSet d;
  d.analytic = false;
  d.e0 = f(c1, c2);
  d.d1 = romberg_derivative([&](double h) { return (f(c1 + h, c2) - f(c1 - h, c2)) / (2 * h); });
  d.d2 = romberg_derivative([&](double h) { return (f(c1, c2 + h) - f(c1, c2 - h)) / (2 * h); });
  d.d11 = romberg_derivative(
      [&](double h) { return (f(c1 + h, c2) - 2 * d.e0 + f(c1 - h, c2)) / (h * h); });
  d.d22 = romberg_derivative(
      [&](double h) { return (f(c1, c2 + h) - 2 * d.e0 + f(c1, c2 - h)) / (h * h); });
  d.d12 = romberg_derivative([&](double h) {
    return (f(c1 + h, c2 + h) - f(c1 + h, c2 - h) - f(c1 - h, c2 + h) + f(c1 - h, c2 - h)) /
           (4 * h * h);
  });
  return d;
}

}  // namespace detail

// Partials of the model energy at (nbar1, nbar2): analytic for the
// built-in variants, Richardson-extrapolated central differences for
// Polynomial.
inline DerivativeSet derivatives(const EnergyModel& model, const Lattice& lat) {
  validate(lat);
  const double c1 = lat.nbar1;
  const double c2 = lat.nbar2;
  DerivativeSet d;
  if (const auto* box = std::get_if<Box2D>(&model)) {
    const double w1 = two_pi * pi / box->lsq1;  // 2 pi^2 / L1^2
    const double w2 = two_pi * pi / box->lsq2;
    d.e0 = w1 * c1 * c1 + w2 * c2 * c2;
    d.d1 = 2.0 * w1 * c1;
    d.d2 = 2.0 * w2 * c2;
    d.d11 = 2.0 * w1;
    d.d22 = 2.0 * w2;
    d.d12 = 0.0;
  } else if (const auto* stark = std::get_if<StarkHydrogen>(&model)) {
    if (c1 == 0.0) throw std::domain_error("StarkHydrogen: derivatives undefined at n = 0");
    const double F = stark->field;
    d.e0 = -1.0 / (2.0 * c1 * c1) + 1.5 * c1 * c2 * F;
    d.d1 = 1.0 / (c1 * c1 * c1) + 1.5 * c2 * F;
    d.d2 = 1.5 * c1 * F;
    d.d11 = -3.0 / (c1 * c1 * c1 * c1);
    d.d22 = 0.0;
    d.d12 = 1.5 * F;
  } else {
    d = detail::finite_difference_derivatives(model, c1, c2);
  }
  for (double v : {d.e0, d.d1, d.d2, d.d11, d.d22, d.d12})
    if (!std::isfinite(v)) throw std::runtime_error("derivatives: non-finite result");
  return d;
}

// The five controlling time scales on the effective integer lattice.
// Entries are signed (a negative second derivative gives a negative
// revival time) and absent when the corresponding effective derivative
// vanishes.
struct TimeScales {
  std::optional<double> tcl1, tcl2;
  std::optional<double> trev1, trev2;
  std::optional<double> trev12;
};

inline TimeScales timescales(const DerivativeSet& d, const Lattice& lat) {
  validate(lat);
  auto period = [](double eff) -> std::optional<double> {
    if (eff == 0.0) return std::nullopt;
    return two_pi / eff;
  };
  TimeScales ts;
  ts.tcl1 = period(lat.step1 * d.d1);
  ts.tcl2 = period(lat.step2 * d.d2);
  ts.trev1 = period(0.5 * lat.step1 * lat.step1 * d.d11);
  ts.trev2 = period(0.5 * lat.step2 * lat.step2 * d.d22);
  bool cross_zero = d.analytic
                        ? d.d12 == 0.0
                        : std::abs(d.d12) < 1e-12 * std::max(std::abs(d.d11), std::abs(d.d22));
  ts.trev12 = cross_zero ? std::nullopt
                         : period(static_cast<double>(lat.step1) * lat.step2 * d.d12);
  return ts;
}

// Exact trev1/trev2 for a box whose squared lengths were given as
// rationals; the lattice stride enters squared.
inline std::optional<Fraction> exact_revival_ratio(const Box2D& box, const Lattice& lat) {
  if (!box.lsq1_exact || !box.lsq2_exact) return std::nullopt;
  Fraction stride(static_cast<long long>(lat.step2) * lat.step2,
                  static_cast<long long>(lat.step1) * lat.step1);
  return (*box.lsq1_exact / *box.lsq2_exact) * stride;
}

}  // namespace revival
