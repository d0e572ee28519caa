#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "revival/fractional.hpp"

using namespace revival;

namespace {

// Fraction pairs and cross terms exercised by the oracle comparisons.
std::vector<Fraction> proper_fractions(int qmax) {
  std::vector<Fraction> out{Fraction(0)};
  for (int q = 1; q <= qmax; ++q)
    for (int p = 1; p <= q; ++p)
      if (std::gcd(p, q) == 1) out.push_back(Fraction(p, q));
  return out;
}

std::vector<ThetaSpec> cross_catalog() {
  std::vector<ThetaSpec> specs;
  const std::vector<std::pair<Fraction, Fraction>> pairs = {
      {Fraction(1, 2), Fraction(1, 2)}, {Fraction(1, 3), Fraction(2, 3)},
      {Fraction(1, 4), Fraction(3, 4)}, {Fraction(1, 2), Fraction(1, 3)},
      {Fraction(2, 3), Fraction(1, 6)}, {Fraction(0), Fraction(1, 2)},
      {Fraction(1, 6), Fraction(5, 6)}, {Fraction(3, 4), Fraction(1, 4)}};
  for (long long q12 : {2, 3, 4})
    for (const auto& [a, b] : pairs) specs.push_back(ThetaSpec{a, b, Fraction(1, q12)});
  // Stark-like: no diagonal second-order term in the second index, and
  // a negative first fraction from the signed revival time
  specs.push_back(ThetaSpec{Fraction(-1, 2), Fraction(0), Fraction(1, 3)});
  specs.push_back(ThetaSpec{Fraction(-2, 3), Fraction(0), Fraction(3, 4)});
  specs.push_back(ThetaSpec{Fraction(1, 5), Fraction(-1, 2), Fraction(2, 5)});
  return specs;
}

RevivalPoint point_from_spec(const ThetaSpec& spec) {
  FracTime ft;
  ft.p1q1 = spec.p1q1;
  ft.p2q2 = spec.p2q2;
  ft.p12q12 = spec.p12q12;
  return make_revival_point(ft);
}

}  // namespace

TEST_CASE("theta evaluates the exact quadratic fractions") {
  ThetaSpec fig1_rev{Fraction(1), Fraction(3, 4), std::nullopt};
  REQUIRE(theta(fig1_rev, 0, 0) == Fraction(0));
  REQUIRE(theta(fig1_rev, 1, 1) == Fraction(3, 4));

  ThetaSpec half{Fraction(1, 2), Fraction(0), std::nullopt};
  REQUIRE(theta(half, 2, 0) == Fraction(0));
  REQUIRE(theta(half, 3, 5) == Fraction(1, 2));

  ThetaSpec cross{Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)};
  // 1/2 + 4/3 + 2/6 mod 1
  REQUIRE(theta(cross, 1, 2) == (Fraction(1, 2) + Fraction(4, 3) + Fraction(2, 6)).mod1());
}

TEST_CASE("minimal periods of the quoted specs") {
  CyclicPeriods lp = minimal_periods(ThetaSpec{Fraction(1), Fraction(3, 4), std::nullopt});
  REQUIRE(lp.l1 == 1);
  REQUIRE(lp.l2 == 2);

  lp = minimal_periods(ThetaSpec{Fraction(1, 2), Fraction(1, 2), std::nullopt});
  REQUIRE(lp.l1 == 2);
  REQUIRE(lp.l2 == 2);

  lp = minimal_periods(ThetaSpec{Fraction(0), Fraction(0), std::nullopt});
  REQUIRE(lp.l1 == 1);
  REQUIRE(lp.l2 == 1);
}

TEST_CASE("minimal periods match the residue-scan oracle") {
  for (const Fraction& p1 : proper_fractions(8))
    for (const Fraction& p2 : {Fraction(0), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4)}) {
      ThetaSpec spec{p1, p2, std::nullopt};
      CyclicPeriods got = minimal_periods(spec);
      CyclicPeriods want = oracle::minimal_periods_scan(spec, 12);
      REQUIRE(got.l1 == want.l1);
      REQUIRE(got.l2 == want.l2);
    }
  for (const ThetaSpec& spec : cross_catalog()) {
    CyclicPeriods got = minimal_periods(spec);
    long long qmax = std::max(spec.p1q1.den(), spec.p2q2.den());
    long long safe = 2 * qmax * spec.p12q12->den() + 2;  // past any true period
    CyclicPeriods want = oracle::minimal_periods_scan(spec, safe);
    REQUIRE(got.l1 == want.l1);
    REQUIRE(got.l2 == want.l2);
  }
}

TEST_CASE("expansion coefficients of a full revival collapse to one term") {
  RevivalPoint point = point_from_spec(ThetaSpec{Fraction(2), Fraction(3), std::nullopt});
  REQUIRE(point.l1 == 1);
  REQUIRE(point.l2 == 1);
  REQUIRE_THAT(std::abs(point.coeffs[0][0] - Complex(1.0, 0.0)),
               Catch::Matchers::WithinAbs(0.0, 1e-14));
}

TEST_CASE("half revival reforms one packet half a cycle out of phase") {
  auto a = expansion_coefficients_1d(Fraction(1, 2), 2);
  REQUIRE_THAT(std::abs(a[0]), Catch::Matchers::WithinAbs(0.0, 1e-14));
  REQUIRE_THAT(std::abs(a[1] - Complex(1.0, 0.0)), Catch::Matchers::WithinAbs(0.0, 1e-14));
}

TEST_CASE("figure-1 revival time splits into two equal subsidiary waves") {
  RevivalPoint point = point_from_spec(ThetaSpec{Fraction(1), Fraction(3, 4), std::nullopt});
  REQUIRE(point.l1 == 1);
  REQUIRE(point.l2 == 2);
  REQUIRE_THAT(std::abs(point.coeffs[0][0] - Complex(0.5, 0.5)),
               Catch::Matchers::WithinAbs(0.0, 1e-14));
  REQUIRE_THAT(std::abs(point.coeffs[0][1] - Complex(0.5, -0.5)),
               Catch::Matchers::WithinAbs(0.0, 1e-14));
  Classification cls = classify(point);
  REQUIRE(cls.n_waves == 2);
  REQUIRE(cls.equal_norm);
  REQUIRE(cls.separable);
}

TEST_CASE("expansion identity holds across the catalog") {
  double worst = 0.0;
  for (const ThetaSpec& spec : cross_catalog()) {
    RevivalPoint point = point_from_spec(spec);
    worst = std::max(worst, verify_expansion(point));
    REQUIRE_THAT(sum_abs2(point.coeffs), Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
  REQUIRE(worst <= 1e-12);
}

TEST_CASE("verify_expansion detects corrupted coefficients") {
  RevivalPoint point = point_from_spec(ThetaSpec{Fraction(1), Fraction(3, 4), std::nullopt});
  REQUIRE(verify_expansion(point) <= 1e-12);
  point.coeffs[0][0] += 0.1;
  REQUIRE(verify_expansion(point) >= 0.1 - 1e-9);
}

TEST_CASE("separable product law without a cross term") {
  for (const Fraction& p1 : {Fraction(1, 2), Fraction(2, 3), Fraction(3, 4), Fraction(1, 6)})
    for (const Fraction& p2 : {Fraction(1, 3), Fraction(1, 4), Fraction(5, 6)}) {
      RevivalPoint point = point_from_spec(ThetaSpec{p1, p2, std::nullopt});
      auto a1 = expansion_coefficients_1d(p1, point.l1);
      auto a2 = expansion_coefficients_1d(p2, point.l2);
      double worst = 0.0;
      for (long long s1 = 0; s1 < point.l1; ++s1)
        for (long long s2 = 0; s2 < point.l2; ++s2)
          worst = std::max(worst, std::abs(point.coeffs[s1][s2] - a1[s1] * a2[s2]));
      REQUIRE(worst <= 1e-12);

      auto counts = component_wave_counts(point);
      REQUIRE(counts.has_value());
      REQUIRE(classify(point).n_waves == counts->first * counts->second);
      REQUIRE(classify(point).separable);
    }
}

TEST_CASE("one-dimensional factors have equal nonzero norms") {
  for (const Fraction& pq : proper_fractions(12)) {
    ThetaSpec spec{pq, Fraction(0), std::nullopt};
    long long l = minimal_periods(spec).l1;
    auto a = expansion_coefficients_1d(pq, l);
    double lo = 2.0, hi = 0.0;
    for (const Complex& c : a) {
      double m = std::abs(c);
      if (m > 1e-10) {
        lo = std::min(lo, m);
        hi = std::max(hi, m);
      }
    }
    REQUIRE(hi > 0.0);
    REQUIRE(hi - lo <= 1e-12);
  }
}

TEST_CASE("figure-2 classification counts") {
  // trev1/trev2 = 1/3: t = (p1/q1) trev1 has p2/q2 = p1/(3 q1)
  auto point_at = [](const Fraction& p1q1) {
    return point_from_spec(ThetaSpec{p1q1, p1q1 * Fraction(1, 3), std::nullopt});
  };

  REQUIRE(classify(point_at(Fraction(1, 2))).n_waves == 3);
  REQUIRE(classify(point_at(Fraction(1))).n_waves == 3);
  REQUIRE(classify(point_at(Fraction(2))).n_waves == 3);
  REQUIRE(classify(point_at(Fraction(5, 2))).n_waves == 3);
  REQUIRE(classify(point_at(Fraction(3, 4))).n_waves == 4);
  REQUIRE(classify(point_at(Fraction(9, 4))).n_waves == 4);

  // the exception at 3 trev1 / 2: one packet in each component
  RevivalPoint exception = point_at(Fraction(3, 2));
  REQUIRE(classify(exception).n_waves == 1);
  auto counts = component_wave_counts(exception);
  REQUIRE(counts->first == 1);
  REQUIRE(counts->second == 1);
  // both single packets sit half a cycle out: the only coefficient is at
  // (s1, s2) = (1, 1) with l1 = l2 = 2
  REQUIRE(exception.l1 == 2);
  REQUIRE(exception.l2 == 2);
  REQUIRE(std::abs(exception.coeffs[1][1]) > 0.99);
}

TEST_CASE("cross-term catalog case: non-product support with flat norms") {
  RevivalPoint point =
      point_from_spec(ThetaSpec{Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)});
  REQUIRE(point.l1 == 3);
  REQUIRE(point.l2 == 3);
  Classification cls = classify(point);
  REQUIRE(cls.n_waves == 3);
  REQUIRE_FALSE(cls.separable);
  // support is the anti-diagonal s1 + s2 = 0 (mod 3) — not a product set,
  // so norms differ across entries of every row and column
  for (long long s1 = 0; s1 < 3; ++s1)
    for (long long s2 = 0; s2 < 3; ++s2) {
      double m = std::abs(point.coeffs[s1][s2]);
      if ((s1 + s2) % 3 == 0)
        REQUIRE_THAT(m, Catch::Matchers::WithinAbs(1.0 / std::sqrt(3.0), 1e-12));
      else
        REQUIRE(m <= 1e-12);
    }
  REQUIRE_THAT(std::abs(point.coeffs[0][0] - Complex(0.0, -1.0 / std::sqrt(3.0))),
               Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("prediction holds for signed revival times") {
  Polynomial poly;
  poly.coeffs[{2, 0}] = -4.0;
  poly.coeffs[{0, 2}] = 3.0;
  poly.coeffs[{1, 0}] = 5.0;
  poly.coeffs[{0, 1}] = 7.0;
  EnergyModel m = poly;
  Lattice lat{30, 30, 1, 1, 8, 8};
  CoefficientGrid grid = build_coefficients(PacketSpec{lat, 1.5, 1.5});
  PhaseEvolution phases(m, lat, EvolutionMode::second_order);
  const TimeScales& ts = phases.scales();
  auto triple = revival_triple(ts);
  REQUIRE(triple.has_value());
  for (const FracTime& ft : enumerate_fractimes(*triple, ts, 4, 2.5)) {
    RevivalPoint point = make_revival_point(ft);
    REQUIRE(verify_expansion(point) <= 1e-12);
    Complex pred = predict_autocorrelation(point, grid, ts, ft.t);
    Complex direct = autocorrelation(grid, phases, ft.t);
    REQUIRE(std::abs(pred - direct) <= 1e-9);
  }
}

TEST_CASE("prediction matches the direct autocorrelation at t_frac") {
  EnergyModel model = Box2D::from_squared(Fraction(3, 4), Fraction(1));
  Lattice lat{18, 18, 1, 1, 12, 12};
  CoefficientGrid grid = build_coefficients(PacketSpec{lat, 2.5, 2.5});
  PhaseEvolution phases(model, lat, EvolutionMode::exact);
  const TimeScales& ts = phases.scales();

  FracTime ft;
  ft.t = *ts.trev1;
  ft.p1q1 = Fraction(1);
  ft.p2q2 = Fraction(3, 4);
  RevivalPoint point = make_revival_point(ft);

  Complex pred = predict_autocorrelation(point, grid, ts, ft.t);
  Complex direct = autocorrelation(grid, phases, ft.t);
  REQUIRE_THAT(std::norm(pred), Catch::Matchers::WithinAbs(0.5, 0.05));
  REQUIRE(std::abs(pred - direct) <= 1e-9);

  // full revival: prediction reduces to the diagonal classical overlap
  FracTime full;
  full.t = 3.0 / pi;
  full.p1q1 = Fraction(4);
  full.p2q2 = Fraction(3);
  RevivalPoint full_point = make_revival_point(full);
  Complex pred_full = predict_autocorrelation(full_point, grid, ts, full.t);
  REQUIRE(std::abs(pred_full - classical_overlap(grid, ts, full.t, full.t)) <= 1e-13);
  REQUIRE_THAT(std::norm(pred_full), Catch::Matchers::WithinAbs(1.0, 1e-9));

  // t = 0 is the trivial point
  FracTime zero;
  zero.p1q1 = Fraction(0);
  zero.p2q2 = Fraction(0);
  RevivalPoint zero_point = make_revival_point(zero);
  REQUIRE(std::abs(predict_autocorrelation(zero_point, grid, ts, 0.0) - Complex(1.0, 0.0)) <=
          1e-13);
}
