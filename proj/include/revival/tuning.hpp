#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "revival/fraction.hpp"
#include "revival/models.hpp"

namespace revival {

// One-parameter model family, mapped to the time scales it produces.
using ModelFamily = std::function<TimeScales(double)>;

// Tuning goal: either an exact target for the ratio trev1/trev2, or a
// target value for the cross-revival time.
struct TuneTarget {
  enum class Kind { rev_ratio, rev12_value };
  Kind kind = Kind::rev_ratio;
  Fraction ratio;
  double value = 0.0;

  static TuneTarget rev_ratio(const Fraction& trev1_over_trev2) {
    TuneTarget t;
    t.kind = Kind::rev_ratio;
    t.ratio = trev1_over_trev2;
    return t;
  }
  static TuneTarget rev12_value(double trev12) {
    TuneTarget t;
    t.kind = Kind::rev12_value;
    t.value = trev12;
    return t;
  }
};

struct TuneHit {
  double param = 0.0;
  TimeScales scales;
  double residual = 0.0;
};

namespace detail {

inline double tune_residual(const TimeScales& ts, const TuneTarget& target) {
  if (target.kind == TuneTarget::Kind::rev_ratio) {
    if (!ts.trev1 || !ts.trev2) return std::numeric_limits<double>::quiet_NaN();
    return *ts.trev1 / *ts.trev2 - target.ratio.value();
  }
  if (!ts.trev12) return std::numeric_limits<double>::quiet_NaN();
  return (*ts.trev12 - target.value) / std::max(1.0, std::abs(target.value));
}

}  // namespace detail

// Scans [lo, hi] on a uniform grid and refines every bracketed root of
// the ratio residual by bisection.  Parameter values whose residual ends
// up within tol are reported; an empty list means the target cannot be
// reached on this range.
inline std::vector<TuneHit> tune_parameter(const ModelFamily& family, double lo, double hi,
                                           const TuneTarget& target, int grid_points = 64,
                                           double tol = 1e-9) {
  if (!(hi > lo)) throw std::invalid_argument("tune_parameter: empty range");
  if (grid_points < 2) throw std::invalid_argument("tune_parameter: need at least 2 grid points");

  auto residual = [&](double p) { return detail::tune_residual(family(p), target); };

  std::vector<TuneHit> hits;
  auto record = [&](double p) {
    TimeScales ts = family(p);
    double r = detail::tune_residual(ts, target);
    if (std::isfinite(r) && std::abs(r) <= tol) hits.push_back(TuneHit{p, ts, r});
  };

  double prev_p = lo;
  double prev_r = residual(lo);
  if (prev_r == 0.0) record(lo);
  for (int i = 1; i <= grid_points; ++i) {
    double p = lo + (hi - lo) * static_cast<double>(i) / grid_points;
    double r = residual(p);
    if (std::isfinite(prev_r) && std::isfinite(r)) {
      if (r == 0.0) {
        record(p);
      } else if (prev_r * r < 0.0) {
        double a = prev_p, b = p, ra = prev_r;
        for (int it = 0; it < 200; ++it) {
          double m = 0.5 * (a + b);
          double rm = residual(m);
          if (rm == 0.0 || (b - a) <= 1e-15 * std::max(1.0, std::abs(m))) {
            a = b = m;
            break;
          }
          if ((ra < 0.0) == (rm < 0.0)) {
            a = m;
            ra = rm;
          } else {
            b = m;
          }
        }
        record(0.5 * (a + b));
      }
    }
    prev_p = p;
    prev_r = r;
  }
  return hits;
}

// Box with L2 fixed, tuned in L1.
inline ModelFamily box_length_family(double L2, const Lattice& lat) {
  return [L2, lat](double L1) {
    EnergyModel m = Box2D(L1, L2);
    return timescales(derivatives(m, lat), lat);
  };
}

// Stark hydrogen tuned in the field strength.
inline ModelFamily stark_field_family(const Lattice& lat) {
  return [lat](double F) {
    EnergyModel m = StarkHydrogen(F);
    return timescales(derivatives(m, lat), lat);
  };
}

}  // namespace revival
