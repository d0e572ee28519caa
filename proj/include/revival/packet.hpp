#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "revival/models.hpp"

namespace revival {

using Complex = std::complex<double>;

// Gaussian packet specification: widths are in effective index units and
// apply to the probabilities |c|^2.
struct PacketSpec {
  Lattice lattice;
  double sigma1 = 2.5;
  double sigma2 = 2.5;
};

inline void validate(const PacketSpec& spec) {
  validate(spec.lattice);
  if (!(spec.sigma1 > 0) || !(spec.sigma2 > 0))
    throw std::invalid_argument("PacketSpec: sigma must be positive");
  if (spec.lattice.halfwidth1 < std::ceil(4.0 * spec.sigma1) ||
      spec.lattice.halfwidth2 < std::ceil(4.0 * spec.sigma2))
    throw std::invalid_argument("PacketSpec: halfwidth must be >= ceil(4 sigma)");
}

// Normalized product-Gaussian weights c_{k1 k2} = c1[k1] c2[k2] on the
// truncated window; amplitudes are real and positive.
class CoefficientGrid {
 public:
  CoefficientGrid(const Lattice& lat, std::vector<double> amp1, std::vector<double> amp2)
      : lattice_(lat), amp1_(std::move(amp1)), amp2_(std::move(amp2)) {}

  const Lattice& lattice() const { return lattice_; }
  int halfwidth1() const { return lattice_.halfwidth1; }
  int halfwidth2() const { return lattice_.halfwidth2; }

  double axis_amplitude1(int k1) const { return amp1_[k1 + lattice_.halfwidth1]; }
  double axis_amplitude2(int k2) const { return amp2_[k2 + lattice_.halfwidth2]; }
  double amplitude(int k1, int k2) const { return axis_amplitude1(k1) * axis_amplitude2(k2); }
  double prob(int k1, int k2) const {
    double a = amplitude(k1, k2);
    return a * a;
  }

  double norm() const {
    double s = 0.0;
    for (int k1 = -halfwidth1(); k1 <= halfwidth1(); ++k1)
      for (int k2 = -halfwidth2(); k2 <= halfwidth2(); ++k2) s += prob(k1, k2);
    return s;
  }

 private:
  Lattice lattice_;
  std::vector<double> amp1_, amp2_;
};

inline CoefficientGrid build_coefficients(const PacketSpec& spec) {
  validate(spec);
  auto axis = [](int halfwidth, double sigma) {
    std::vector<double> amp(2 * halfwidth + 1);
    double sum = 0.0;
    for (int k = -halfwidth; k <= halfwidth; ++k) {
      double a = std::exp(-static_cast<double>(k) * k / (4.0 * sigma * sigma));
      amp[k + halfwidth] = a;
      sum += a * a;
    }
    double inv = 1.0 / std::sqrt(sum);
    for (double& a : amp) a *= inv;
    return amp;
  };
  return CoefficientGrid(spec.lattice, axis(spec.lattice.halfwidth1, spec.sigma1),
                         axis(spec.lattice.halfwidth2, spec.sigma2));
}

enum class EvolutionMode { exact, second_order, first_order };

// Per-component phase of the evolved packet; each component carries the
// factor exp(-i phase(k1, k2, t)).  Exact mode uses model energies with
// the center energy subtracted; the truncated modes use the time scales.
class PhaseEvolution {
 public:
  PhaseEvolution(const EnergyModel& model, const Lattice& lat, EvolutionMode mode)
      : lattice_(lat), mode_(mode) {
    validate(lat);
    DerivativeSet d = derivatives(model, lat);
    ts_ = timescales(d, lat);
    auto rate = [](const std::optional<double>& scale) {
      return scale ? two_pi / *scale : 0.0;
    };
    w1_ = rate(ts_.tcl1);
    w2_ = rate(ts_.tcl2);
    w11_ = rate(ts_.trev1);
    w22_ = rate(ts_.trev2);
    w12_ = rate(ts_.trev12);
    if (mode == EvolutionMode::exact) {
      const int w1 = lat.halfwidth1, w2h = lat.halfwidth2;
      delta_e_.resize((2 * w1 + 1) * (2 * w2h + 1));
      const double e0 = energy(model, lat.nbar1, lat.nbar2);
      for (int k1 = -w1; k1 <= w1; ++k1)
        for (int k2 = -w2h; k2 <= w2h; ++k2)
          delta_e_[index(k1, k2)] = energy(model, lat.n1(k1), lat.n2(k2)) - e0;
    }
  }

  const TimeScales& scales() const { return ts_; }
  const Lattice& lattice() const { return lattice_; }
  EvolutionMode mode() const { return mode_; }

  double raw_phase(int k1, int k2, double t) const {
    switch (mode_) {
      case EvolutionMode::exact:
        return delta_e_[index(k1, k2)] * t;
      case EvolutionMode::second_order:
        return (w1_ * k1) * t + (w2_ * k2) * t + (w11_ * k1 * k1) * t + (w22_ * k2 * k2) * t +
               (w12_ * k1 * k2) * t;
      case EvolutionMode::first_order:
        return (w1_ * k1) * t + (w2_ * k2) * t;
    }
    return 0.0;
  }

  double phase(int k1, int k2, double t) const { return std::fmod(raw_phase(k1, k2, t), two_pi); }

 private:
  int index(int k1, int k2) const {
    return (k1 + lattice_.halfwidth1) * (2 * lattice_.halfwidth2 + 1) +
           (k2 + lattice_.halfwidth2);
  }

  Lattice lattice_;
  EvolutionMode mode_;
  TimeScales ts_;
  double w1_ = 0, w2_ = 0, w11_ = 0, w22_ = 0, w12_ = 0;
  std::vector<double> delta_e_;
};

// A(t) = <Psi(0)|Psi(t)> = sum |c|^2 exp(-i phase); eigenstate
// orthonormality removes any position-space integral.
inline Complex autocorrelation(const CoefficientGrid& grid, const PhaseEvolution& phases,
                               double t) {
  Complex acc(0.0, 0.0);
  for (int k1 = -grid.halfwidth1(); k1 <= grid.halfwidth1(); ++k1)
    for (int k2 = -grid.halfwidth2(); k2 <= grid.halfwidth2(); ++k2) {
      double w = grid.prob(k1, k2);
      double p = phases.raw_phase(k1, k2, t);
      acc += Complex(w * std::cos(p), -w * std::sin(p));
    }
  return acc;
}

// Overlap of Psi(0) with the doubly-periodic classical wave evaluated at
// independent arguments (t1, t2); periods are Tcl1 and Tcl2.
inline Complex classical_overlap(const CoefficientGrid& grid, const TimeScales& ts, double t1,
                                 double t2) {
  const double u1 = ts.tcl1 ? two_pi / *ts.tcl1 : 0.0;
  const double u2 = ts.tcl2 ? two_pi / *ts.tcl2 : 0.0;
  Complex acc(0.0, 0.0);
  for (int k1 = -grid.halfwidth1(); k1 <= grid.halfwidth1(); ++k1)
    for (int k2 = -grid.halfwidth2(); k2 <= grid.halfwidth2(); ++k2) {
      double w = grid.prob(k1, k2);
      double p = (u1 * k1) * t1 + (u2 * k2) * t2;
      acc += Complex(w * std::cos(p), -w * std::sin(p));
    }
  return acc;
}

struct AutocorrelationSeries {
  std::vector<double> times;
  std::vector<Complex> values;
  std::vector<double> abs2;
};

inline AutocorrelationSeries sample_series(const CoefficientGrid& grid,
                                           const PhaseEvolution& phases,
                                           const std::vector<double>& t_grid) {
  AutocorrelationSeries s;
  s.times = t_grid;
  s.values.reserve(t_grid.size());
  s.abs2.reserve(t_grid.size());
  for (double t : t_grid) {
    Complex a = autocorrelation(grid, phases, t);
    double a2 = std::norm(a);
    if (!(a2 <= 1.0 + 1e-12))
      throw std::logic_error("sample_series: |A| exceeded 1 beyond roundoff");
    s.values.push_back(a);
    s.abs2.push_back(a2);
  }
  return s;
}

}  // namespace revival
