#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "geophase/protocol.hpp"
#include "geophase/trajectory.hpp"

using namespace geophase;
using Catch::Matchers::WithinAbs;
using std::numbers::pi;

namespace {

ProtocolSpec spec_at(double theta, double m) { return ProtocolSpec::make(theta, Strength::from_m(m)); }

bool within_sigma(const InterferenceResult& mc, cplx want, double k) {
  return std::abs(mc.amplitude.real() - want.real()) <= k * *mc.stderr_re + 1e-15 &&
         std::abs(mc.amplitude.imag() - want.imag()) <= k * *mc.stderr_im + 1e-15;
}

}  // namespace

TEST_CASE("deterministic trajectories", "[trajectory]") {
  SECTION("m = 1 leaves the state alone") {
    const auto spec = spec_at(1.3, 1.0);
    for (std::uint64_t id = 0; id < 20; ++id) {
      const auto t = sample_trajectory(spec, id, 42);
      CHECK((t.final_state - spec.initial_state()).norm() < 1e-12);
      CHECK(std::abs(t.interference_term - cplx(1.0, 0.0)) < 1e-12);
    }
  }
  SECTION("polar cone gives a real unit term on every trajectory") {
    const auto spec = spec_at(0.0, 0.5);
    for (std::uint64_t id = 0; id < 1000; ++id) {
      const cplx z = sample_trajectory(spec, id, 7).interference_term;
      CHECK(std::abs(z - cplx(1.0, 0.0)) < 1e-12);
    }
    const auto mc = mc_interference(spec, {10000, 1, 1});
    CHECK_THAT(mc.contrast, WithinAbs(1.0, 1e-12));
    CHECK(mc.phase == 0.0);
    CHECK(*mc.stderr_re == 0.0);
    CHECK(*mc.stderr_im == 0.0);
  }
  SECTION("same (seed, id) reproduces the trajectory exactly") {
    const auto spec = spec_at(0.9, 0.4);
    const auto a = sample_trajectory(spec, 123, 99), b = sample_trajectory(spec, 123, 99);
    CHECK(a.readouts == b.readouts);
    CHECK(a.interference_term == b.interference_term);
    CHECK(a.probability_weight == b.probability_weight);
    CHECK(sample_trajectory(spec, 124, 99).readouts != a.readouts);
  }
}

TEST_CASE("Monte Carlo reproduces the selective-average amplitude", "[trajectory][statistical]") {
  SECTION("equatorial loop at m = 0.5") {
    const auto spec = spec_at(pi / 2, 0.5);
    const auto mc = mc_interference(spec, {100000, 42, 0});
    CHECK(within_sigma(mc, run_protocol(spec).result.amplitude, 3.0));
  }
  SECTION("off-equator loop at m = 0.6") {
    const auto spec = spec_at(2 * pi / 5, 0.6);
    const auto mc = mc_interference(spec, {100000, 42, 0});
    CHECK(within_sigma(mc, run_protocol(spec).result.amplitude, 3.0));
  }
  SECTION("projective click/no-click sampler on the hexagon") {
    const auto mc = mc_interference(spec_at(pi / 2, 0.0), {100000, 42, 0});
    CHECK(within_sigma(mc, cplx(-27.0 / 64.0, 0.0), 3.0));
  }
}

TEST_CASE("standard error follows CLT scaling", "[trajectory][statistical]") {
  const auto spec = spec_at(1.1, 0.5);
  const auto small = mc_interference(spec, {10000, 5, 0});
  const auto twice = mc_interference(spec, {20000, 5, 0});
  const auto quad = mc_interference(spec, {40000, 5, 0});
  CHECK_THAT(*twice.stderr_re / *small.stderr_re, WithinAbs(1.0 / std::sqrt(2.0), 0.2 / std::sqrt(2.0)));
  CHECK_THAT(*quad.stderr_re / *small.stderr_re, WithinAbs(0.5, 0.1));
  CHECK_THAT(*quad.stderr_im / *small.stderr_im, WithinAbs(0.5, 0.1));
}

TEST_CASE("estimate is independent of the worker count", "[trajectory]") {
  const auto spec = spec_at(1.4, 0.45);
  const auto one = mc_interference(spec, {20000, 3, 1});
  for (unsigned w : {2u, 4u, 8u}) {
    const auto many = mc_interference(spec, {20000, 3, w});
    CHECK(many.amplitude == one.amplitude);
    CHECK(*many.stderr_re == *one.stderr_re);
    CHECK(*many.stderr_im == *one.stderr_im);
  }
}

TEST_CASE("small sample counts are flagged", "[trajectory]") {
  const auto spec = spec_at(1.0, 0.5);
  CHECK(mc_interference(spec, {50, 1, 1}).insufficient_statistics);
  CHECK_FALSE(mc_interference(spec, {100, 1, 1}).insufficient_statistics);
  CHECK_THROWS_AS(mc_interference(spec, {1, 1, 1}), Error);
}

TEST_CASE("first-measurement readout distribution", "[trajectory][statistical]") {
  SECTION("polar state only populates the null cloud") {
    const auto h = readout_histogram(spec_at(0.0, 0.5), {20000, 11, 1});
    CHECK(h.p_f == 0.0);
    CHECK(h.p_value > 1e-3);
  }
  SECTION("equatorial state mixture weight") {
    const auto spec = spec_at(pi / 2, 0.5);
    // Neighbouring equatorial axes 60 degrees apart: |<perp_1|n_0>|^2 = (1 - cos 60deg) / 2.
    const double p_f = 0.5 * (1.0 - std::cos(pi / 3)) / 2.0;
    const auto h = readout_histogram(spec, {50000, 11, 1});
    CHECK_THAT(h.p_f, WithinAbs(p_f, 1e-12));
    CHECK(h.p_value > 1e-3);

    // Mean readout is p_f r0; estimate p_f from sampled first readouts.
    const double r0 = spec.strength.separation();
    const int n = 20000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = sample_trajectory(spec, static_cast<std::uint64_t>(i), 17).readouts.front();
      sum += r;
      sq += r * r;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sq / n - mean * mean);
    CHECK(std::abs(mean / r0 - p_f) <= 3.0 * sd / (r0 * std::sqrt(double(n))));
  }
  SECTION("weak measurement merges the clouds") {
    const auto h = readout_histogram(spec_at(pi / 2, 0.999999), {20000, 11, 1});
    CHECK(h.p_value > 1e-3);
  }
  CHECK_THROWS_AS(readout_histogram(spec_at(1.0, 0.0), {1000, 1, 1}), Error);
}
