#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "rggcrit/errors.hpp"
#include "rggcrit/geometry.hpp"

using namespace rggcrit;
using namespace rggcrit::geometry;

namespace {

/// Two balls via the radical plane: a cap of each.
double ball_ball_oracle(int d, double r, double R, double s) {
  if (s + r <= R) return oracle::unit_ball(d) * std::pow(r, d);
  if (s + R <= r) return oracle::unit_ball(d) * std::pow(R, d);
  if (s >= r + R) return 0.0;
  const double a = (s * s + r * r - R * R) / (2.0 * s);
  return oracle::segment(d, r, -a) + oracle::segment(d, R, -(s - a));
}

bool within_sigma(const VolumeEstimate& est, double exact, double sigmas) {
  return std::abs(est.value - exact) <= sigmas * est.std_error + 1e-15;
}

}  // namespace

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-15));
  for (int d = 2; d <= 10; ++d) {
    CHECK(unit_ball_volume(d) == doctest::Approx(oracle::unit_ball(d)).epsilon(1e-14));
    CHECK(ball_volume(d, 0.3) == doctest::Approx(oracle::unit_ball(d) * std::pow(0.3, d)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(ball_volume(3, -1.0), DomainError);
}

TEST_CASE("segment volume against slicing") {
  for (int d = 2; d <= 7; ++d)
    for (double t : {-0.9, -0.5, -0.1, 0.0, 0.2, 0.5, 0.95}) {
      CAPTURE(d);
      CAPTURE(t);
      CHECK(segment_volume(d, 0.7, 0.7 * t) == doctest::Approx(oracle::segment(d, 0.7, 0.7 * t)).epsilon(1e-9));
    }
  const double full = ball_volume(4, 2.0);
  CHECK(segment_volume(4, 2.0, 2.0) == doctest::Approx(full).epsilon(1e-15));
  CHECK(segment_volume(4, 2.0, -2.0) == doctest::Approx(0.0));
  CHECK(segment_volume(4, 2.0, 0.0) == doctest::Approx(full / 2).epsilon(1e-15));
  // complement symmetry
  CHECK(segment_volume(5, 1.0, 0.3) + segment_volume(5, 1.0, -0.3) == doctest::Approx(ball_volume(5, 1.0)));
  CHECK_THROWS_AS(segment_volume(3, 1.0, 1.5), DomainError);
  CHECK_THROWS_AS(segment_volume(3, 0.0, 0.0), DomainError);
}

TEST_CASE("lens volume") {
  for (int d = 2; d <= 6; ++d)
    for (double L : {0.05, 0.4, 1.0, 1.7}) {
      CAPTURE(d);
      CHECK(lens_volume(d, 1.0, L) == doctest::Approx(oracle::lens(d, 1.0, L)).epsilon(1e-9));
    }
  CHECK(lens_volume(3, 1.0, 0.0) == doctest::Approx(ball_volume(3, 1.0)));
  CHECK(lens_volume(3, 1.0, 2.0) == doctest::Approx(0.0));
  CHECK(lens_volume(3, 1.0, 5.0) == 0.0);
  // d = 2 closed form: 2 r^2 acos(L/2r) - (L/2) sqrt(4r^2 - L^2)
  const double L = 0.8;
  CHECK(lens_volume(2, 1.0, L) ==
        doctest::Approx(2.0 * std::acos(L / 2) - 0.5 * L * std::sqrt(4.0 - L * L)).epsilon(1e-12));
}

TEST_CASE("shadow volume") {
  for (int d = 3; d <= 6; ++d)
    for (double L : {0.01, 0.1, 0.5, 0.9}) {
      CAPTURE(d);
      CAPTURE(L);
      CHECK(shadow_volume_exact(d, 1.0, L) == doctest::Approx(oracle::shadow_slices(d, 1.0, L)).epsilon(1e-8));
    }
  CHECK(shadow_volume_exact(3, 1.0, 0.0) == 0.0);
  // scaling: V*(r, L) = r^d V*(1, L/r)
  CHECK(shadow_volume_exact(4, 2.0, 0.6) == doctest::Approx(16.0 * shadow_volume_exact(4, 1.0, 0.3)).epsilon(1e-10));
  CHECK_THROWS_AS(shadow_volume_exact(3, 1.0, 1.0), DomainError);
  // the true volume is cubic in L; the bound scales as L^d
  for (int d = 3; d <= 5; ++d)
    for (double L : {0.01, 0.05, 0.1}) CHECK(shadow_volume_exact(d, 1.0, L) >= 0.9 * shadow_lower_bound(d, L));
}

TEST_CASE("Monte Carlo volume estimators agree with the closed forms") {
  Rng rng(2024);
  const std::uint64_t m = 200000;
  for (int d : {2, 3, 5}) {
    CAPTURE(d);
    CHECK(within_sigma(segment_volume_mc(d, 1.0, 0.3, m, rng), segment_volume(d, 1.0, 0.3), 4));
    CHECK(within_sigma(lens_volume_mc(d, 1.0, 0.6, m, rng), lens_volume(d, 1.0, 0.6), 4));
    if (d >= 3) CHECK(within_sigma(shadow_volume_mc(d, 1.0, 0.4, m, rng), shadow_volume_exact(d, 1.0, 0.4), 4));
  }
  // the test-side rejection sampler agrees too
  std::mt19937_64 gen(9);
  const auto o = oracle::shadow_mc(3, 1.0, 0.4, m, gen);
  CHECK(std::abs(o.value - shadow_volume_exact(3, 1.0, 0.4)) <= 4 * o.std_error);
  CHECK_THROWS_AS(segment_volume_mc(3, 1.0, 0.0, 1, rng), DomainError);
}

TEST_CASE("ball-box intersections") {
  const int d = 3;
  const double r = 0.2;
  const double full = ball_volume(d, r);
  const std::vector<AxisInterval> corner(3, AxisInterval{0.0, 1.0});
  CHECK(ball_box_volume(d, r, corner) == doctest::Approx(full / 8).epsilon(1e-10));
  const std::vector<AxisInterval> two{{0.0, 1.0}, {0.0, 1.0}};
  CHECK(ball_box_volume(d, r, two) == doctest::Approx(full / 4).epsilon(1e-10));
  const std::vector<AxisInterval> one{{0.05, 1.0}};
  CHECK(ball_box_volume(d, r, one) == doctest::Approx(segment_volume(d, r, 0.05)).epsilon(1e-12));
  CHECK(ball_box_volume(d, r, {}) == doctest::Approx(full));

  // a generic edge zone against the reflection-free region estimator
  Rng rng(31);
  const Region cube = Region::cube(3);
  const std::vector<double> x{0.05, 0.12, 0.5};
  const std::vector<AxisInterval> slabs{{0.05, 0.95}, {0.12, 0.88}, {0.5, 0.5}};
  const double q = ball_box_volume(d, r, slabs);
  const auto mc = ball_region_volume_mc(cube, x, r, 400000, rng);
  CHECK(std::abs(mc.value - q) <= 4 * mc.std_error);
  CHECK_THROWS_AS(ball_box_volume(2, r, corner), DomainError);
}

TEST_CASE("ball-ball intersections") {
  for (int d = 2; d <= 5; ++d)
    for (double s : {0.0, 0.3, 0.7, 0.95, 1.1, 1.25}) {
      CAPTURE(d);
      CAPTURE(s);
      CHECK(ball_ball_volume(d, 0.3, 1.0, s) == doctest::Approx(ball_ball_oracle(d, 0.3, 1.0, s)).epsilon(1e-8));
    }
  CHECK(ball_ball_volume(3, 0.3, 1.0, 2.0) == 0.0);
}

TEST_CASE("region properties") {
  const Region cube = Region::cube(3);
  CHECK(cube.volume() == 1.0);
  CHECK(cube.surface_area() == doctest::Approx(6.0));
  CHECK(cube.diameter() == doctest::Approx(std::sqrt(3.0)));
  CHECK(cube.contains(std::vector<double>{0.0, 0.5, 1.0}));
  CHECK_FALSE(cube.contains(std::vector<double>{-0.01, 0.5, 0.5}));
  CHECK(cube.distance_to_boundary(std::vector<double>{0.2, 0.5, 0.9}) == doctest::Approx(0.1));

  const Region ball = Region::ball(3);
  const double R = ball.ball_radius();
  CHECK(ball_volume(3, R) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ball.surface_area() == doctest::Approx(3.0 / R).epsilon(1e-12));
  CHECK(ball.diameter() == doctest::Approx(2 * R));
  CHECK(ball.distance_to_boundary(std::vector<double>{0.1, 0.0, 0.0}) == doctest::Approx(R - 0.1));

  const Region box = Region::box({2.0, 0.5, 1.0});
  CHECK(box.surface_area() == doctest::Approx(2 * (1.0 + 2.0 + 0.5)));
  CHECK_THROWS_AS(Region::box({2.0, 2.0}), DomainError);
  CHECK_THROWS_AS(Region::box({-1.0, -1.0}), DomainError);
  CHECK_THROWS_AS(Region::cube(1), DomainError);

  for (const Region& reg : {cube, ball, box, Region::cube(2)}) {
    nlohmann::json j = reg;
    CHECK(region_from_json(j) == reg);
  }
  CHECK_THROWS_AS(region_from_json({{"kind", "torus"}, {"d", 3}}), DomainError);
}

TEST_CASE("ball-region volume") {
  Rng rng(77);
  const Region cube = Region::cube(3);
  const double r = 0.1;
  const double full = ball_volume(3, r);
  const auto interior = ball_region_volume(cube, std::vector<double>{0.5, 0.5, 0.5}, r, 1000, rng);
  CHECK(interior.method == VolumeMethod::Exact);
  CHECK(interior.value == doctest::Approx(full));

  const auto face = ball_region_volume(cube, std::vector<double>{0.5, 0.03, 0.5}, r, 1000, rng);
  CHECK(face.method == VolumeMethod::Exact);
  CHECK(face.value == doctest::Approx(segment_volume(3, r, 0.03)));

  // at a corner every reflection orbit has exactly one point inside
  const auto corner = ball_region_volume(cube, std::vector<double>{0.0, 0.0, 1.0}, r, 1000, rng);
  CHECK(corner.method == VolumeMethod::MonteCarlo);
  CHECK(corner.value == doctest::Approx(full / 8).epsilon(1e-12));

  const Region ball = Region::ball(3);
  const std::vector<double> near{ball.ball_radius() - 0.02, 0.0, 0.0};
  const auto v = ball_region_volume(ball, near, r, 200000, rng);
  CHECK(std::abs(v.value - ball_ball_volume(3, r, ball.ball_radius(), near[0])) <= 4 * v.std_error);

  CHECK_THROWS_AS(ball_region_volume(cube, std::vector<double>{1.5, 0.5, 0.5}, r, 10, rng), DomainError);
  CHECK_THROWS_AS(ball_region_volume(cube, std::vector<double>{0.5, 0.5}, r, 10, rng), DomainError);
}

TEST_CASE("boundary volume-fraction diagnostic") {
  Rng rng(5);
  for (const Region& reg : {Region::cube(3), Region::ball(3), Region::box({2.0, 0.5})}) {
    const auto rep = assumption_one_diagnostic(reg, 0.05, 50, 20000, rng);
    CHECK(rep.probes > 0);
    CHECK(rep.lower_bound == doctest::Approx(std::ldexp(1.0, -reg.dimension())));
    CHECK(rep.min_ratio >= rep.lower_bound * 0.99);
    CHECK(rep.min_ratio <= 1.0);
    CHECK(reg.contains(rep.worst_point));
  }
  // cube corners attain the bound
  CHECK(assumption_one_diagnostic(Region::cube(3), 0.05, 10, 1000, rng).min_ratio == doctest::Approx(0.125));
}

TEST_CASE("samplers stay inside") {
  Rng rng(123);
  for (const Region& reg : {Region::cube(4), Region::ball(3), Region::box({4.0, 0.25})}) {
    double mean0 = 0.0;
    for (int i = 0; i < 5000; ++i) {
      const Point p = sample_uniform(reg, rng);
      REQUIRE(reg.contains(p));
      mean0 += p[0] / 5000;
    }
    const double centre = reg.kind() == RegionKind::Ball ? 0.0 : reg.sides()[0] / 2;
    CHECK(std::abs(mean0 - centre) < 0.05 * (reg.diameter()));
  }
  std::vector<double> c{1.0, 2.0, 3.0}, out(3);
  for (int i = 0; i < 2000; ++i) {
    sample_in_ball(c, 0.5, rng, out);
    REQUIRE(oracle::dist(c.data(), out.data(), 3) <= 0.5);
  }
}
