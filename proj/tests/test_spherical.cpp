#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "geophase/spherical.hpp"

using namespace geophase;
using Catch::Matchers::WithinAbs;
using std::numbers::pi;

namespace {

BlochVector random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return BlochVector(n(rng), n(rng), n(rng)).normalized();
}

// L'Huilier's theorem from the three arc lengths; sign from orientation.
double lhuilier(const BlochVector& a, const BlochVector& b, const BlochVector& c) {
  const double x = std::acos(std::clamp(b.dot(c), -1.0, 1.0));
  const double y = std::acos(std::clamp(c.dot(a), -1.0, 1.0));
  const double z = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
  const double s = 0.5 * (x + y + z);
  const double t = std::tan(s / 2) * std::tan((s - x) / 2) * std::tan((s - y) / 2) * std::tan((s - z) / 2);
  const double excess = 4.0 * std::atan(std::sqrt(std::max(t, 0.0)));
  return a.dot(b.cross(c)) >= 0.0 ? excess : -excess;
}

QutritState state_of(const BlochVector& b) { return axis_state(axis_of(b)); }

double phase_diff(double a, double b) { return std::abs(std::remainder(a - b, 2 * pi)); }

}  // namespace

TEST_CASE("triangle solid angle", "[spherical]") {
  const BlochVector x = BlochVector::UnitX(), y = BlochVector::UnitY(), z = BlochVector::UnitZ();
  CHECK_THAT(triangle_solid_angle(x, y, z), WithinAbs(pi / 2, 1e-15));
  CHECK_THAT(triangle_solid_angle(x, z, y), WithinAbs(-pi / 2, 1e-15));
  CHECK(triangle_solid_angle(x, x, y) == 0.0);

  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    const BlochVector a = random_unit(rng), b = random_unit(rng), c = random_unit(rng);
    CHECK_THAT(triangle_solid_angle(a, b, c), WithinAbs(lhuilier(a, b, c), 1e-10));
  }
}

TEST_CASE("polygon solid angle", "[spherical]") {
  SECTION("equatorial hexagon bounds a hemisphere") {
    std::vector<BlochVector> hex;
    for (int k = 0; k < 6; ++k) hex.emplace_back(std::cos(k * pi / 3), std::sin(k * pi / 3), 0.0);
    CHECK_THAT(solid_angle_polygon(hex), WithinAbs(2 * pi, 1e-12));
    // Reversed orientation: -2 pi, which is the same as 2 pi modulo 4 pi.
    std::reverse(hex.begin(), hex.end());
    CHECK(std::abs(std::remainder(solid_angle_polygon(hex) + 2 * pi, 4 * pi)) < 1e-12);
  }
  SECTION("repeated vertex contributes nothing") {
    std::vector<BlochVector> tri{BlochVector::UnitX(), BlochVector::UnitY(), BlochVector::UnitZ()};
    std::vector<BlochVector> rep{BlochVector::UnitX(), BlochVector::UnitY(), BlochVector::UnitY(),
                                 BlochVector::UnitZ()};
    CHECK_THAT(solid_angle_polygon(rep), WithinAbs(solid_angle_polygon(tri), 1e-15));
  }
  SECTION("small cap matches 2 pi (1 - cos theta) in the fine limit") {
    const double theta = 0.7;
    std::vector<BlochVector> ring;
    for (int k = 0; k < 4096; ++k) {
      const double a = 2 * pi * k / 4096;
      ring.emplace_back(std::sin(theta) * std::cos(a), std::sin(theta) * std::sin(a), std::cos(theta));
    }
    CHECK_THAT(solid_angle_polygon(ring), WithinAbs(2 * pi * (1 - std::cos(theta)), 1e-5));
  }
  SECTION("antipodal neighbours are rejected") {
    std::vector<BlochVector> bad{BlochVector::UnitX(), -BlochVector::UnitX(), BlochVector::UnitZ()};
    CHECK_THROWS_AS(solid_angle_polygon(bad), Error);
  }
}

TEST_CASE("slerp", "[spherical]") {
  const BlochVector mid = slerp(BlochVector::UnitX(), BlochVector::UnitY(), 0.5);
  CHECK((mid - BlochVector(1, 1, 0).normalized()).norm() < 1e-15);
  CHECK((slerp(BlochVector::UnitX(), BlochVector::UnitY(), 0.0) - BlochVector::UnitX()).norm() < 1e-15);
  try {
    slerp(BlochVector::UnitZ(), -BlochVector::UnitZ(), 0.5);
    FAIL("expected an undefined error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::undefined);
  }
}

TEST_CASE("Pancharatnam phase", "[spherical]") {
  SECTION("equatorial hexagon") {
    std::vector<QutritState> loop;
    for (int k = 0; k <= 6; ++k) loop.push_back(axis_state({pi / 2, -2 * pi * k / 6}));
    CHECK(phase_diff(pancharatnam_phase(loop), pi) < 1e-12);
  }
  SECTION("identical states") {
    const QutritState s = axis_state({1.0, 0.3});
    std::vector<QutritState> loop{s, s, s, s};
    CHECK(pancharatnam_phase(loop) == 0.0);
  }
  SECTION("half the solid angle of the triangle") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 200; ++i) {
      const BlochVector a = random_unit(rng), b = random_unit(rng), c = random_unit(rng);
      std::vector<QutritState> loop{state_of(a), state_of(b), state_of(c), state_of(a)};
      CHECK(phase_diff(pancharatnam_phase(loop), 0.5 * triangle_solid_angle(a, b, c)) < 1e-10);
    }
  }
  SECTION("invariant under state rephasing") {
    std::vector<QutritState> loop;
    for (int k = 0; k <= 6; ++k) loop.push_back(axis_state({1.1, -2 * pi * k / 6}) * std::polar(1.0, 0.37 * k));
    CHECK(phase_diff(pancharatnam_phase(loop), 0.5 * 6 * triangle_solid_angle(
        BlochVector::UnitZ(), bloch_of(loop[0]), bloch_of(loop[1]))) < 1e-12);
  }
  SECTION("orthogonal neighbours and open lists are rejected") {
    std::vector<QutritState> ortho{basis_state(level::e), basis_state(level::f), basis_state(level::e)};
    try {
      pancharatnam_phase(ortho);
      FAIL("expected an undefined error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::undefined);
    }
    std::vector<QutritState> open{axis_state({0.5, 0.0}), axis_state({1.0, 0.0})};
    CHECK_THROWS_AS(pancharatnam_phase(open), Error);
  }
}
