#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/sinh_sinh.hpp>

#include "geophase/measurement.hpp"

using namespace geophase;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using std::numbers::pi;

namespace {

// Independent oracle: double-exponential quadrature over the real line.
template <class F>
double integrate_line(F f) {
  boost::math::quadrature::sinh_sinh<double> q;
  return q.integrate(f, 1e-13);
}

Operator3 diag3(double a, double b, double c) {
  Operator3 d = Operator3::Zero();
  d(0, 0) = a;
  d(1, 1) = b;
  d(2, 2) = c;
  return d;
}

double max_abs(const Operator3& a, const Operator3& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("strength parameterizations", "[measurement]") {
  for (double m : {1e-6, 0.01, 0.3, 0.5, 0.9, 1.0}) {
    const Strength s = Strength::from_m(m);
    CHECK_THAT(Strength::from_gamma_tau(s.gamma_tau()).m(), WithinRel(m, 1e-12));
    CHECK_THAT(Strength::from_separation(s.separation()).m(), WithinRel(m, 1e-12));
    CHECK_THAT(std::exp(-s.separation() * s.separation() / 4.0), WithinRel(m, 1e-12));
  }
  CHECK(Strength::from_m(0.0).is_projective());
  CHECK(std::isinf(Strength::from_m(0.0).gamma_tau()));
  CHECK(Strength::from_m(1.0).gamma_tau() == 0.0);
  CHECK_THROWS_AS(Strength::from_m(-0.1), Error);
  CHECK_THROWS_AS(Strength::from_m(1.1), Error);
  CHECK_THROWS_AS(Strength::from_gamma_tau(-1.0), Error);

  // f attenuation of the null Kraus operator strictly decreases with gamma tau
  double prev = 2.0;
  for (double gt = 0.0; gt < 8.0; gt += 0.25) {
    const double f = kraus_null(Strength::from_gamma_tau(gt))(level::f, level::f).real();
    CHECK(f < prev);
    prev = f;
  }
}

TEST_CASE("Gauss-Hermite rule reproduces Gaussian moments", "[measurement][quadrature]") {
  const GaussHermiteRule rule(64);
  double w0 = 0.0, w2 = 0.0, w4 = 0.0;
  for (int i = 0; i < rule.size(); ++i) {
    const double x = rule.nodes()[i], w = rule.weights()[i];
    w0 += w;
    w2 += w * x * x;
    w4 += w * x * x * x * x;
  }
  CHECK_THAT(w0, WithinRel(std::sqrt(pi), 1e-13));
  CHECK_THAT(w2, WithinRel(std::sqrt(pi) / 2.0, 1e-13));
  CHECK_THAT(w4, WithinRel(3.0 * std::sqrt(pi) / 4.0, 1e-13));
  CHECK_THROWS_AS(GaussHermiteRule(1), Error);
}

TEST_CASE("null-outcome Kraus operator", "[measurement]") {
  CHECK(max_abs(kraus_null(Strength::from_m(0.0)), diag3(0, 1, 1)) == 0.0);
  CHECK(max_abs(kraus_null(Strength::from_m(1.0)), Operator3::Identity()) == 0.0);
  CHECK(max_abs(kraus_null(Strength::from_m(0.5)), diag3(0.5, 1, 1)) == 0.0);
}

TEST_CASE("outcome-resolved Kraus operators", "[measurement]") {
  SECTION("POVM completeness") {
    for (double m : {0.1, 0.5, 0.9}) {
      CHECK(completeness_residual(Strength::from_m(m)) < 1e-8);
    }
  }
  SECTION("overlap of the two readout amplitudes equals m") {
    const Strength s = Strength::from_m(0.5);
    const double r0 = s.separation();
    const double oracle = integrate_line([&](double r) { return readout_amplitude(r) * readout_amplitude(r - r0); });
    CHECK_THAT(oracle, WithinAbs(0.5, 1e-10));
    // Gaussian overlap in closed form: exp(-r0^2 / (8 sd^2)) with sd^2 = 1/2.
    CHECK_THAT(std::exp(-r0 * r0 / 4.0), WithinAbs(0.5, 1e-14));
    const double gh = GaussHermiteRule(64).integrate(
        [&](double r) { return readout_amplitude(r) * kraus_readout(s, r)(level::f, level::f).real(); });
    CHECK_THAT(gh, WithinAbs(oracle, 1e-8));
  }
  SECTION("m = 1 gives Psi(r) times identity") {
    for (double r : {-2.0, 0.0, 0.7, 3.0}) {
      const Operator3 k = kraus_readout(Strength::from_m(1.0), r);
      CHECK(max_abs(k, readout_amplitude(r) * Operator3::Identity()) == 0.0);
    }
  }
  SECTION("projective strength is rejected") {
    CHECK_THROWS_AS(kraus_readout(Strength::from_m(0.0), 0.0), Error);
    CHECK_THROWS_AS(kraus_readout(Strength::from_m(0.5), std::numeric_limits<double>::infinity()), Error);
  }
  SECTION("e/g coherence is untouched by any readout sequence") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0.0, 2.0);
    QutritState s;
    s << cplx(0.3, 0.1), cplx(0.5, -0.2), cplx(0.4, 0.6);
    const cplx ratio = s(level::e) / s(level::g);
    for (int k = 0; k < 20; ++k) {
      s = kraus_readout(Strength::from_m(0.4), n(rng)) * s;
      s /= s.norm();
    }
    CHECK(std::abs(s(level::e) / s(level::g) - ratio) < 1e-14 * std::abs(ratio));
  }
}

TEST_CASE("selective averaging: reference-weighted readout average is the null Kraus operator",
          "[measurement][quadrature]") {
  CHECK(max_abs(effective_kraus_from_integral(Strength::from_m(0.5)).value, diag3(0.5, 1, 1)) < 1e-8);
  CHECK(max_abs(effective_kraus_from_integral(Strength::from_m(1.0)).value, Operator3::Identity()) < 1e-12);
  CHECK(max_abs(effective_kraus_from_integral(Strength::from_m(0.05)).value, diag3(0.05, 1, 1)) < 1e-8);
  for (double m : {0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99}) {
    const auto out = effective_kraus_from_integral(Strength::from_m(m));
    CHECK(max_abs(out.value, kraus_null(Strength::from_m(m))) < 1e-8);
    CHECK(out.completeness_residual < 1e-8);
  }
  SECTION("too few nodes for a wide separation fails with the residual") {
    try {
      effective_kraus_from_integral(Strength::from_m(1e-30), 8);
      FAIL("expected a numeric error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::numeric);
      CHECK(std::string(e.what()).find("residual") != std::string::npos);
    }
  }
}

TEST_CASE("readout density", "[measurement]") {
  const Strength s = Strength::from_m(0.5);
  const double r0 = s.separation();

  const ReadoutDensity on_e = readout_pdf(basis_state(level::e), s);
  CHECK(on_e.p_f() == 0.0);
  CHECK_THAT(on_e(0.3), WithinAbs(ReadoutDensity::gaussian(0.3), 1e-16));

  const ReadoutDensity on_f = readout_pdf(basis_state(level::f), s);
  CHECK(on_f.p_f() == 1.0);
  CHECK_THAT(on_f(r0 + 0.3), WithinAbs(ReadoutDensity::gaussian(0.3), 1e-16));

  QutritState mix;
  mix << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0;
  const ReadoutDensity half = readout_pdf(mix, s);
  CHECK_THAT(integrate_line([&](double r) { return half(r); }), WithinAbs(1.0, 1e-10));
  CHECK_THAT(integrate_line([&](double r) { return r * half(r); }), WithinAbs(r0 / 2.0, 1e-10));
  CHECK_THAT(half.mean(), WithinAbs(r0 / 2.0, 1e-15));
  CHECK_THAT(half.cdf(50.0), WithinAbs(1.0, 1e-15));

  // Density agrees with |M(r) psi|^2.
  for (double r : {-1.0, 0.2, 1.1, 2.5}) {
    CHECK_THAT(half(r), WithinAbs((kraus_readout(s, r) * mix).squaredNorm(), 1e-14));
  }

  CHECK_THROWS_AS(readout_pdf(2.0 * mix, s), Error);
  CHECK_THROWS_AS(readout_pdf(mix, Strength::from_m(0.0)), Error);
}
