#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "revival/commensurate.hpp"

using namespace revival;

namespace {

TimeScales figure1_scales() {
  EnergyModel m = Box2D::from_squared(Fraction(3, 4), Fraction(1));
  Lattice lat{18, 18, 1, 1, 12, 12};
  return timescales(derivatives(m, lat), lat);
}

TimeScales figure2_scales() {
  EnergyModel m = Box2D::from_squared(Fraction(1), Fraction(3));
  Lattice lat{18, 18, 1, 1, 12, 12};
  return timescales(derivatives(m, lat), lat);
}

bool contains_fraction_pair(const std::vector<FracTime>& pts, const Fraction& p1q1,
                            const Fraction& p2q2) {
  for (const FracTime& ft : pts)
    if (ft.p1q1 == p1q1 && ft.p2q2 == p2q2) return true;
  return false;
}

}  // namespace

TEST_CASE("classical beat of the figure-1 box") {
  auto beat = classical_beat(1.0 / (48.0 * pi), 1.0 / (36.0 * pi));
  REQUIRE(beat.has_value());
  REQUIRE(beat->a == 3);
  REQUIRE(beat->b == 4);
  REQUIRE_THAT(beat->period, Catch::Matchers::WithinRel(1.0 / (12.0 * pi), 1e-12));
}

TEST_CASE("equal classical periods beat trivially") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> period(1e-6, 1e6);
  for (int i = 0; i < 50; ++i) {
    double T = period(rng);
    auto beat = classical_beat(T, T);
    REQUIRE(beat.has_value());
    REQUIRE(beat->a == 1);
    REQUIRE(beat->b == 1);
    REQUIRE(beat->period == T);
  }
}

TEST_CASE("incommensurate classical periods have no beat") {
  REQUIRE_FALSE(classical_beat(1.0, std::sqrt(2.0)).has_value());
  REQUIRE_THROWS_AS(classical_beat(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("revival triples of the figure scenarios") {
  TimeScales f1 = figure1_scales();
  auto triple = revival_triple(f1);
  REQUIRE(triple.has_value());
  REQUIRE(triple->f2.inverse() == Fraction(3, 4));  // trev1/trev2
  REQUIRE_FALSE(triple->f12.has_value());

  TimeScales f2 = figure2_scales();
  auto triple2 = revival_triple(f2);
  REQUIRE(triple2.has_value());
  REQUIRE(triple2->f2.inverse() == Fraction(1, 3));
}

TEST_CASE("irrational revival ratio yields no triple") {
  TimeScales ts;
  ts.trev1 = 1.0;
  ts.trev2 = std::sqrt(3.0);
  REQUIRE_FALSE(revival_triple(ts).has_value());
  ts.trev2.reset();
  REQUIRE_THROWS_AS(revival_triple(ts), std::invalid_argument);
}

TEST_CASE("figure-1 fractional revival times with qmax 4") {
  TimeScales ts = figure1_scales();
  auto triple = revival_triple(ts);
  REQUIRE(triple.has_value());
  auto pts = enumerate_fractimes(*triple, ts, 4, 3.0 / pi + 1e-12);

  REQUIRE(contains_fraction_pair(pts, Fraction(1), Fraction(3, 4)));    // t = trev1
  REQUIRE(contains_fraction_pair(pts, Fraction(4), Fraction(3)));      // full revival
  REQUIRE(contains_fraction_pair(pts, Fraction(2), Fraction(3, 2)));   // t = 2 trev1

  for (const FracTime& ft : pts) {
    REQUIRE(ft.t > 0.0);
    REQUIRE(ft.p1q1.den() <= 4);
    REQUIRE(ft.p2q2.den() <= 4);
  }
  REQUIRE(std::is_sorted(pts.begin(), pts.end(),
                         [](const FracTime& a, const FracTime& b) { return a.t < b.t; }));

  // the full revival lands at 3/pi
  bool found = false;
  for (const FracTime& ft : pts)
    if (ft.p1q1 == Fraction(4)) {
      found = true;
      REQUIRE_THAT(ft.t, Catch::Matchers::WithinRel(3.0 / pi, 1e-12));
    }
  REQUIRE(found);
}

TEST_CASE("figure-2 enumeration includes the four-wave time") {
  TimeScales ts = figure2_scales();
  auto triple = revival_triple(ts);
  auto pts = enumerate_fractimes(*triple, ts, 4, 1.0);
  REQUIRE(contains_fraction_pair(pts, Fraction(3, 4), Fraction(1, 4)));
  for (const FracTime& ft : pts)
    if (ft.p1q1 == Fraction(3, 4))
      REQUIRE_THAT(ft.t, Catch::Matchers::WithinAbs(0.24, 2e-3));
}

TEST_CASE("enumerated times satisfy their defining identity exactly") {
  for (const TimeScales& ts : {figure1_scales(), figure2_scales()}) {
    auto triple = revival_triple(ts);
    REQUIRE(triple.has_value());
    for (const FracTime& ft : enumerate_fractimes(*triple, ts, 12, 1.3)) {
      Fraction u1 = ft.p1q1 * triple->f1;
      Fraction u2 = ft.p2q2 * triple->f2;
      REQUIRE(u1 == u2);  // cross-multiplied: p1 q2 f1 == p2 q1 f2
    }
  }
}

TEST_CASE("full-revival closure: the least common integer time appears") {
  TimeScales ts = figure1_scales();
  auto triple = revival_triple(ts);
  auto pts = enumerate_fractimes(*triple, ts, 12, 3.0 / pi + 1e-9);
  bool has_full = false;
  for (const FracTime& ft : pts)
    if (ft.p1q1.is_integer() && ft.p2q2.is_integer()) {
      has_full = true;
      REQUIRE(ft.p1q1 == Fraction(4));  // first full revival is t = 4 trev1
      break;  // sorted ascending: the first one is the least
    }
  REQUIRE(has_full);
}

TEST_CASE("signed revival times enumerate with negative fractions") {
  // concave-in-n1 spectrum: trev1 = -pi/2, trev2 = 2 pi/3
  Polynomial poly;
  poly.coeffs[{2, 0}] = -4.0;
  poly.coeffs[{0, 2}] = 3.0;
  poly.coeffs[{1, 0}] = 5.0;
  poly.coeffs[{0, 1}] = 7.0;
  EnergyModel m = poly;
  Lattice lat{30, 30, 1, 1, 4, 4};
  TimeScales ts = timescales(derivatives(m, lat), lat);
  REQUIRE(*ts.trev1 < 0.0);
  REQUIRE_THAT(*ts.trev1, Catch::Matchers::WithinRel(-pi / 2.0, 1e-12));

  auto triple = revival_triple(ts);
  REQUIRE(triple.has_value());
  REQUIRE(triple->f2 == Fraction(-4, 3));  // trev2 = (-4/3) trev1

  auto pts = enumerate_fractimes(*triple, ts, 6, 3.0);
  REQUIRE_FALSE(pts.empty());
  for (const FracTime& ft : pts) {
    REQUIRE(ft.t > 0.0);
    REQUIRE(ft.p1q1.is_negative());  // t / trev1 < 0
    REQUIRE_FALSE(ft.p2q2.is_negative());
    REQUIRE(ft.p1q1 * triple->f1 == ft.p2q2 * triple->f2);
  }
  // t = trev2 appears as p1/q1 = -4/3, p2/q2 = 1
  REQUIRE(contains_fraction_pair(pts, Fraction(-4, 3), Fraction(1)));
}

TEST_CASE("cross ratios from the fraction pairs") {
  FracTime ft;
  ft.p1q1 = Fraction(1, 2);
  ft.p2q2 = Fraction(1, 2);
  ft.p12q12 = Fraction(1, 2);
  auto cr = cross_ratios(ft);
  REQUIRE(cr.has_value());
  REQUIRE(cr->r1s1 == Fraction(1));

  ft.p1q1 = Fraction(1, 3);
  ft.p12q12 = Fraction(1, 6);
  cr = cross_ratios(ft);
  REQUIRE(cr->r1s1 == Fraction(1, 2));

  ft.p12q12.reset();
  REQUIRE_FALSE(cross_ratios(ft).has_value());
}

TEST_CASE("cross-term enumeration carries the third fraction") {
  // trev1 = pi/2, trev2 = 2 pi/3, trev12 = pi from a quadratic spectrum
  Polynomial poly;
  poly.coeffs[{2, 0}] = 4.0;
  poly.coeffs[{0, 2}] = 3.0;
  poly.coeffs[{1, 1}] = 2.0;
  poly.coeffs[{1, 0}] = 5.0;
  poly.coeffs[{0, 1}] = 7.0;
  EnergyModel m = poly;
  Lattice lat{30, 30, 1, 1, 4, 4};
  TimeScales ts = timescales(derivatives(m, lat), lat);
  REQUIRE(ts.trev12.has_value());
  auto triple = revival_triple(ts);
  REQUIRE(triple.has_value());
  auto pts = enumerate_fractimes(*triple, ts, 12, 4.0 * pi);
  REQUIRE_FALSE(pts.empty());
  for (const FracTime& ft : pts) {
    REQUIRE(ft.p12q12.has_value());
    REQUIRE(ft.p12q12->den() <= 12);
    // identity across all three components
    REQUIRE(ft.p1q1 * triple->f1 == ft.p2q2 * triple->f2);
    REQUIRE(ft.p1q1 * triple->f1 == *ft.p12q12 * *triple->f12);
  }
  // the full revival of all three scales: t = 4 trev1 = 3 trev2 = 2 trev12
  bool full = false;
  for (const FracTime& ft : pts)
    if (ft.p1q1 == Fraction(4) && ft.p2q2 == Fraction(3) && *ft.p12q12 == Fraction(2)) full = true;
  REQUIRE(full);
}
