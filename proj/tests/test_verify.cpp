#include <alqes/verify.hpp>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"

using namespace alqes;

namespace {

PotentialParams integer_case(double m, double shift) {
  return PotentialParams(Rational(2), Rational(1), ModulusParam(m), shift);
}

PotentialParams half_case_paper(double m) {
  const double d9 = std::sqrt(4.0 - 4.0 * m + 25.0 * m * m);
  return PotentialParams(Rational(7, 2), Rational(1, 2), ModulusParam(m),
                         -2.0 - 29.0 * m / 4.0 + d9);
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("constant potential reproduces the textbook monodromy") {
  // At m = 0 the potential reduces to the constant `shift`, the period is
  // 2K(0) = pi, and the transfer matrix is a rotation/dilation with
  // frequency omega = sqrt(E - shift).
  const double shift = 0.25;
  const PotentialParams p = integer_case(0.0, shift);
  const double length = 2.0 * complete_k(p.m);
  CHECK(std::abs(length - 2.0 * std::asin(1.0)) <= 1e-14);

  const FloquetIntegrator fi(p, 4000);
  CHECK(std::abs(fi.period() - length) <= 1e-14);
  for (const double e : {0.55, 1.25, 3.0, 7.75, 12.5}) {
    const double omega = std::sqrt(e - shift);
    const Monodromy mm = fi.monodromy(e);
    CHECK(std::abs(mm.m11 - std::cos(omega * length)) <= 1e-10);
    CHECK(std::abs(mm.m12 - std::sin(omega * length) / omega) <= 1e-10);
    CHECK(std::abs(mm.m21 + omega * std::sin(omega * length)) <= 1e-10);
    CHECK(std::abs(mm.m22 - std::cos(omega * length)) <= 1e-10);
  }
  // Below the constant potential the discriminant grows as 2 cosh.
  const double below = shift - 1.0;
  CHECK(std::abs(fi.discriminant(below) - 2.0 * std::cosh(length)) <= 1e-9);
  CHECK(fi.discriminant(below) > 2.0);
}

TEST_CASE("monodromy determinant stays on the Wronskian constraint") {
  std::mt19937 rng(20240816);
  std::uniform_real_distribution<double> es(-5.0, 30.0);
  for (const PotentialParams& p : {integer_case(0.5, -2.0), half_case_paper(0.5)}) {
    const FloquetIntegrator fi(p, 20000);
    for (int i = 0; i < 20; ++i) {
      CHECK(std::abs(fi.monodromy(es(rng)).determinant() - 1.0) <= 1e-8);
    }
  }
}

TEST_CASE("step-count contracts") {
  const PotentialParams p = integer_case(0.5, 0.0);
  CHECK_THROWS_AS(monodromy(1.0, p, 999), std::invalid_argument);
  CHECK_NOTHROW(monodromy(1.0, p, 1000));
  CHECK_THROWS_AS(FloquetIntegrator(p, 1), std::invalid_argument);
  CHECK_NOTHROW(FloquetIntegrator(p, 2));

  // The reusable integrator and the one-shot helper agree.
  const Monodromy a = FloquetIntegrator(p, 2000).monodromy(3.3);
  const Monodromy b = monodromy(3.3, p, 2000);
  CHECK(std::abs(a.trace() - b.trace()) <= 1e-13);
  CHECK(std::abs(a.m12 - b.m12) <= 1e-13);
}

TEST_CASE("discriminant error scales as the fourth power of the step") {
  const PotentialParams p = integer_case(0.5, -2.0);
  const FloquetIntegrator ref(p, 64000);
  for (const double e : {0.0, 0.3377223398316203, 1.354248688935409, 5.0, 6.662277660168380}) {
    const double dref = ref.discriminant(e);
    const double e250 = std::abs(FloquetIntegrator(p, 250).discriminant(e) - dref);
    const double e500 = std::abs(FloquetIntegrator(p, 500).discriminant(e) - dref);
    const double e1000 = std::abs(FloquetIntegrator(p, 1000).discriminant(e) - dref);
    CHECK(e250 <= 1e-6);
    // Two halvings must win at least 2^6 even when higher-order terms help.
    CHECK(e1000 <= e250 / 64.0 + 1e-12);
    CHECK(e500 <= e250 / 8.0 + 1e-12);
  }
  // Away from accidental cancellations the classical 16x per halving shows.
  for (const double e : {0.0, 0.3377223398316203, 5.0}) {
    const double dref = ref.discriminant(e);
    const double e250 = std::abs(FloquetIntegrator(p, 250).discriminant(e) - dref);
    const double e500 = std::abs(FloquetIntegrator(p, 500).discriminant(e) - dref);
    CHECK(e250 / e500 >= 12.0);
    CHECK(e250 / e500 <= 22.0);
  }
}

TEST_CASE("discriminant trace samples a uniform inclusive grid") {
  const PotentialParams p = integer_case(0.5, -2.0);
  const auto two = discriminant_trace(p, -1.0, 12.0, 2, 4000);
  REQUIRE(two.size() == 2);
  CHECK(two[0].energy == -1.0);
  CHECK(two[1].energy == 12.0);

  const auto five = discriminant_trace(p, 0.0, 1.0, 5, 4000);
  REQUIRE(five.size() == 5);
  const FloquetIntegrator fi(p, 4000);
  for (size_t i = 0; i < 5; ++i) {
    CHECK(std::abs(five[i].energy - 0.25 * static_cast<double>(i)) <= 1e-12);
    CHECK(std::abs(five[i].delta - fi.discriminant(five[i].energy)) <= 1e-12);
  }

  CHECK_THROWS_AS(discriminant_trace(p, 1.0, 1.0, 2, 4000), std::invalid_argument);
  CHECK_THROWS_AS(discriminant_trace(p, 0.0, 1.0, 1, 4000), std::invalid_argument);
}

TEST_CASE("discriminant magnitude classifies bands and gaps") {
  const PotentialParams p = integer_case(0.5, -2.0);
  const FloquetIntegrator fi(p, 8000);
  CHECK(fi.discriminant(-1.0) > 2.0);                 // below the spectrum
  CHECK(std::abs(fi.discriminant(0.1)) < 2.0);        // inside the first band
  CHECK(fi.discriminant(0.8) < -2.0);                 // inside the first gap
  CHECK(std::abs(fi.discriminant(5.0)) < 2.0);        // inside the third band
  CHECK(fi.discriminant(6.655) < -2.0);               // inside the narrow top gap
}

TEST_CASE("band edges of the integer case: locations, kinds, interlacing") {
  const PotentialParams p = integer_case(0.5, -2.0);
  FindEdgeOptions opts;
  opts.scan_points = 600;
  const BandEdgeScan scan = find_band_edges(p, -0.5, 8.0, opts);
  CHECK(scan.warnings.empty());
  REQUIRE(scan.edges.size() == 6);

  // Five analytic edges plus one tangential touch where a gap closes; the
  // closed-form edge energies for m = 1/2, and the touch location frozen
  // from a fine-grid scan of this oracle.
  const double expected[] = {0.0,
                             0.337722339831620,
                             1.354248688935409,
                             3.099938045199,
                             6.645751311064590,
                             6.662277660168380};
  const EdgeKind kinds[] = {EdgeKind::periodic_2k,     EdgeKind::antiperiodic_4k,
                            EdgeKind::antiperiodic_4k, EdgeKind::degenerate_2k,
                            EdgeKind::antiperiodic_4k, EdgeKind::antiperiodic_4k};
  for (size_t i = 0; i < 6; ++i) {
    CHECK(std::abs(scan.edges[i].energy - expected[i]) <= 1e-6);
    CHECK(scan.edges[i].kind == kinds[i]);
  }
  for (size_t i = 0; i + 1 < 6; ++i) CHECK(scan.edges[i].energy <= scan.edges[i + 1].energy);
}

TEST_CASE("band edges of the half-integer case include non-analytic gaps") {
  const double m = 0.5;
  const PotentialParams p = half_case_paper(m);
  const double d9 = std::sqrt(4.0 - 4.0 * m + 25.0 * m * m);
  FindEdgeOptions opts;
  opts.scan_points = 600;
  const BandEdgeScan scan = find_band_edges(p, -0.5, 14.1, opts);
  CHECK(scan.warnings.empty());
  REQUIRE(scan.edges.size() == 8);

  // Only four of the edges belong to the analytically solvable sector.
  CHECK(std::abs(scan.edges[0].energy - 0.0) <= 1e-6);
  CHECK(scan.edges[0].kind == EdgeKind::periodic_2k);
  CHECK(std::abs(scan.edges[3].energy - (d9 - m + 2.0)) <= 1e-6);
  CHECK(scan.edges[3].kind == EdgeKind::periodic_2k);
  CHECK(std::abs(scan.edges[4].energy - 2.0 * d9) <= 1e-6);
  CHECK(scan.edges[4].kind == EdgeKind::periodic_2k);
  CHECK(std::abs(scan.edges[7].energy - (14.0 - 7.0 * m + d9)) <= 1e-5);
  CHECK(scan.edges[7].kind == EdgeKind::degenerate_2k);

  // The remaining gaps are real but outside the solvable sector; their
  // locations are frozen against this oracle at steps = 20000.
  CHECK(std::abs(scan.edges[1].energy - 0.045388728105) <= 1e-6);
  CHECK(std::abs(scan.edges[2].energy - 3.636394802168) <= 1e-6);
  CHECK(std::abs(scan.edges[5].energy - 8.408504729369) <= 1e-6);
  CHECK(std::abs(scan.edges[6].energy - 8.567644814997) <= 1e-6);
  for (const size_t i : {1, 2, 5, 6}) CHECK(scan.edges[i].kind == EdgeKind::antiperiodic_4k);
}

TEST_CASE("a window inside an allowed band holds no edges") {
  const BandEdgeScan scan = find_band_edges(integer_case(0.5, -2.0), 4.5, 6.0);
  CHECK(scan.edges.empty());
  CHECK(scan.warnings.empty());
}

TEST_CASE("crosscheck passes for both published cases") {
  for (const PotentialParams& p : {integer_case(0.5, -2.0), half_case_paper(0.5)}) {
    const auto sols = solve_band_edges(p);
    const CrosscheckReport rep = crosscheck(sols, p, 20000);
    REQUIRE(rep.entries.size() == sols.size());
    CHECK(rep.all_passed);
    for (const auto& e : rep.entries) {
      CHECK(e.discriminant_ok);
      CHECK(e.discriminant_defect <= 1e-5);
      CHECK(e.edge_ok);
      CHECK(e.edge_distance <= 1e-6);
      CHECK(e.period_ok);
      CHECK(e.passed);
    }
  }
}

TEST_CASE("crosscheck flags the degenerate pair as tangential") {
  const PotentialParams p = half_case_paper(0.5);
  const auto sols = solve_band_edges(p);
  const CrosscheckReport rep = crosscheck(sols, p, 20000);
  REQUIRE(rep.entries.size() == 5);
  for (size_t i = 0; i < 3; ++i) CHECK_FALSE(rep.entries[i].tangential);
  CHECK(rep.entries[3].tangential);
  CHECK(rep.entries[4].tangential);
  CHECK(rep.entries[3].passed);
  CHECK(rep.entries[4].passed);
}

TEST_CASE("an injected energy fault fails both independent checks") {
  const PotentialParams p = integer_case(0.5, -2.0);
  auto sols = solve_band_edges(p);
  REQUIRE(sols.size() == 5);
  sols[1].energy += 0.05;
  const CrosscheckReport rep = crosscheck(sols, p, 20000);
  CHECK_FALSE(rep.all_passed);
  CHECK_FALSE(rep.entries[1].discriminant_ok);
  CHECK_FALSE(rep.entries[1].edge_ok);
  CHECK(rep.entries[1].edge_distance >= 0.01);
  CHECK_FALSE(rep.entries[1].passed);
  CHECK(rep.entries[0].passed);
  CHECK(rep.entries[2].passed);
}

TEST_CASE("a wrong period class fails the sign check only") {
  const PotentialParams p = integer_case(0.5, -2.0);
  auto sols = solve_band_edges(p);
  sols[0].record.period_class = PeriodClass::four_k;  // truth: 2K at delta = +2
  const CrosscheckReport rep = crosscheck(sols, p, 20000);
  CHECK_FALSE(rep.all_passed);
  CHECK(rep.entries[0].discriminant_ok);
  CHECK(rep.entries[0].edge_ok);
  CHECK_FALSE(rep.entries[0].period_ok);
  CHECK_FALSE(rep.entries[0].passed);
}

TEST_CASE("crosscheck validates its arguments") {
  const PotentialParams p = integer_case(0.5, -2.0);
  CHECK_THROWS_AS(crosscheck({}, p, 20000), std::invalid_argument);
  const auto sols = solve_band_edges(p);
  CHECK_THROWS_AS(crosscheck(sols, p, 1), std::invalid_argument);
}

}  // TEST_SUITE
