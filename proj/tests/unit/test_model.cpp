#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "xyberry/ed.hpp"
#include "xyberry/errors.hpp"
#include "xyberry/model.hpp"

using namespace xyberry;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("mode_momenta sits on the half-odd-integer grid") {
  const auto m4 = mode_momenta(4);
  REQUIRE(m4.size() == 2);
  CHECK(m4[0].q == Approx(pi / 4).epsilon(1e-15));
  CHECK(m4[1].q == Approx(3 * pi / 4).epsilon(1e-15));

  const auto m8 = mode_momenta(8);
  REQUIRE(m8.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(m8[i].index == i);
    CHECK(m8[i].q == Approx((2 * i + 1) * pi / 8).epsilon(1e-15));
    CHECK(m8[i].q > 0.0);
    CHECK(m8[i].q < pi);
    if (i > 0) CHECK(m8[i].q > m8[i - 1].q);
  }
}

TEST_CASE("mode_momenta rejects odd or small rings") {
  CHECK_THROWS_AS(mode_momenta(7), Error);
  CHECK_THROWS_AS(mode_momenta(2), Error);
  CHECK_THROWS_AS(mode_momenta(0), Error);
  CHECK_THROWS_AS(XYParams::make(0.5, 0.5, 0.0, 5), Error);
}

TEST_CASE("XYParams reduces phi modulo pi") {
  CHECK(XYParams::make(0, 0, pi + 0.25, 4).phi == Approx(0.25).epsilon(1e-14));
  CHECK(XYParams::make(0, 0, -0.25, 4).phi == Approx(pi - 0.25).epsilon(1e-14));
  CHECK(XYParams::make(0, 0, pi, 4).phi == Approx(0.0).epsilon(1e-14));
}

TEST_CASE("mode_angles examples") {
  SUBCASE("equator at zero field") {
    const auto a = mode_angles(pi / 2, 0.0, 1.0);
    CHECK(a.epsilon == Approx(0.0).epsilon(1e-15));
    CHECK(a.gap == Approx(1.0));
    CHECK(a.theta == Approx(pi / 2));
  }
  SUBCASE("gamma = 0 pins the Bloch vector to z") {
    for (double q : {0.3, 1.2, 2.0, 2.9}) {
      const auto a = mode_angles(q, 0.0, 0.0);
      CHECK(a.gap == Approx(std::abs(std::cos(q))));
      CHECK(a.theta == Approx(std::cos(q) > 0 ? 0.0 : pi));
    }
  }
  SUBCASE("q = pi/4, lambda = gamma = 0.5") {
    // Frozen from an independent numpy evaluation; confirmed via ED at N=4 below.
    const auto a = mode_angles(pi / 4, 0.5, 0.5);
    CHECK(a.epsilon == Approx(0.207106781186548).epsilon(1e-13));
    CHECK(a.gap == Approx(0.409747750223784).epsilon(1e-13));
    CHECK(a.cos_theta == Approx(0.505449465124424).epsilon(1e-13));
    CHECK(std::cos(a.theta) == Approx(a.cos_theta).epsilon(1e-12));
  }
  SUBCASE("gap = 0 convention") {
    const auto a = mode_angles(pi / 3, std::cos(pi / 3), 0.0);
    CHECK(a.gap == Approx(0.0).epsilon(1e-15));
    CHECK(a.theta == Approx(pi / 2));
  }
}

TEST_CASE("mode_angles invariants over random draws") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uq(1e-6, pi - 1e-6), up(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const double q = uq(rng), l = up(rng), g = up(rng);
    const auto a = mode_angles(q, l, g);
    CHECK(a.gap >= 0.0);
    CHECK(a.gap * a.gap ==
          Approx(a.epsilon * a.epsilon + g * g * std::sin(q) * std::sin(q)).epsilon(1e-12));
    CHECK(std::cos(a.theta) * a.gap == Approx(a.epsilon).epsilon(1e-12).scale(1.0));
    CHECK(a.theta >= 0.0);
    CHECK(a.theta <= pi);
    CHECK(a.cos_theta >= -1.0);
    CHECK(a.cos_theta <= 1.0);

    // lambda reflection: (q; -lambda) <-> (pi - q; lambda) with eps -> -eps.
    const auto r = mode_angles(pi - q, -l, g);
    CHECK(r.epsilon == Approx(-a.epsilon).scale(1.0).epsilon(1e-12));
    CHECK(r.gap == Approx(a.gap).epsilon(1e-12));

    // gamma enters only through gamma^2.
    CHECK(mode_angles(q, l, -g).gap == a.gap);
    CHECK(mode_angles(q, l, -g).cos_theta == a.cos_theta);
  }
}

TEST_CASE("min_gap_mode") {
  SUBCASE("brute-force argmin at lambda = 0, gamma = 0.5, N = 8") {
    const auto g = min_gap_mode(XYParams::make(0.0, 0.5, 0.0, 8));
    // Modes 3pi/8 and 5pi/8 tie; the smaller q wins.
    CHECK(g.mode.index == 1);
    CHECK(g.mode.q == Approx(3 * pi / 8));
  }
  SUBCASE("Ising plane picks the smallest momentum") {
    for (int n : {16, 64, 256}) {
      const auto g = min_gap_mode(XYParams::make(1.0, 1.0, 0.0, n));
      CHECK(g.mode.index == 0);
      CHECK(g.angles.gap == Approx(std::sqrt(2.0 * (1.0 - std::cos(pi / n)))));
    }
  }
  SUBCASE("large N approaches cos q* = lambda / (1 - gamma^2)") {
    const double l = 0.5, gm = 0.5;
    const auto g = min_gap_mode(XYParams::make(l, gm, 0.0, 20000));
    CHECK(std::cos(g.mode.q) == Approx(l / (1 - gm * gm)).epsilon(1e-3));
  }
  SUBCASE("gap shrinks towards the critical manifold as N grows") {
    double prev = 1e9;
    for (int n : {8, 16, 32, 64, 128, 256}) {
      const double gap = min_gap_mode(XYParams::make(1.0, 0.7, 0.0, n)).angles.gap;
      CHECK(gap < prev);
      prev = gap;
    }
    // Near the XX line the grid hops around q*; only the continuum bound holds.
    for (int n : {8, 16, 32, 64, 128, 256}) {
      const double gap = min_gap_mode(XYParams::make(0.2, 1e-4, 0.0, n)).angles.gap;
      CHECK(gap >= oracle::brute_min_gap(0.2, 1e-4) - 1e-12);
    }
  }
}

TEST_CASE("ground_energy is phi independent") {
  CHECK(ground_energy(XYParams::make(0.5, 0.5, 0.0, 10)) ==
        ground_energy(XYParams::make(0.5, 0.5, 1.1, 10)));
}

TEST_CASE("ground_energy matches exact diagonalization") {
  // Values frozen from an independent numpy ED of the even-parity sector.
  CHECK(ground_energy(XYParams::make(0.5, 0.5, 0.0, 6)) ==
        Approx(-5.078149820128959).epsilon(1e-12));
  CHECK(ground_energy(XYParams::make(2.0, 1.0, 0.0, 6)) ==
        Approx(-12.769389127207349).epsilon(1e-12));

  for (auto [l, g] : {std::pair{0.5, 0.5}, std::pair{2.0, 1.0}}) {
    const auto p = XYParams::make(l, g, 0.0, 6);
    CHECK(std::abs(ground_energy(p) - ed::ground_energy_ed(p).value) < 1e-10);
  }

  std::mt19937_64 rng(2024);
  for (int n : {4, 6, 8}) {
    for (int i = 0; i < 20; ++i) {
      const auto [l, g] = oracle::noncritical_draw(rng, -2, 2, -2, 2);
      const auto p = XYParams::make(l, g, 0.0, n);
      INFO("N=" << n << " lambda=" << l << " gamma=" << g);
      CHECK(std::abs(ground_energy(p) - ed::ground_energy_ed(p).value) < 1e-8);
    }
  }
}

TEST_CASE("classify_criticality") {
  CHECK(classify_criticality(0.5, 0.0).tag == CriticalityTag::XXLine);
  CHECK(classify_criticality(1.0, 0.7).tag == CriticalityTag::IsingPlane);
  CHECK(classify_criticality(-1.0, 0.0).tag == CriticalityTag::IsingPlane);
  const auto c = classify_criticality(2.0, 1.0);
  CHECK(c.tag == CriticalityTag::NonCritical);
  CHECK(c.distance == Approx(1.0));
  CHECK(classify_criticality(0.5, 0.2).distance == Approx(0.2));
  CHECK(classify_criticality(1.5, 0.0).tag == CriticalityTag::NonCritical);
  CHECK(classify_criticality(0.5, 1e-10).tag == CriticalityTag::XXLine);
  CHECK(classify_criticality(0.5, 1e-10, 1e-12).tag == CriticalityTag::NonCritical);
  CHECK_THROWS_AS(classify_criticality(0.5, 0.5, 0.0), Error);
}

TEST_CASE("require_noncritical rejects degenerate points") {
  CHECK_THROWS_AS(require_noncritical(XYParams::make(0.0, 0.0, 0.0, 4)), Error);
  CHECK_THROWS_AS(require_noncritical(XYParams::make(1.0, 0.3, 0.0, 4)), Error);
  CHECK_NOTHROW(require_noncritical(XYParams::make(0.3, 0.3, 0.0, 4)));
  try {
    require_noncritical(XYParams::make(-1.0, 0.3, 0.0, 4));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CriticalPoint);
  }
}
