#pragma once

// Gaussian-readout model of the selective dispersive probe.
//
// Readout coordinates r are measured in units of the Kraus width sigma, along
// the line joining the two readout clouds. The amplitude
//
//     Psi(r) = pi^{-1/4} exp(-r^2 / 2)
//
// squares to a normalized density, and the f-level amplitude is Psi(r - r0).
// The separation is fixed by requiring the overlap integral of the two
// amplitudes to equal the per-measurement attenuation m = exp(-gamma tau),
// which gives r0 = sqrt(-4 ln m).

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/erf.hpp>

#include "geophase/errors.hpp"
#include "geophase/qutrit.hpp"

namespace geophase {

/// Null-outcome attenuation m of the f amplitude per measurement; m = 0 is
/// projective, m = 1 is no measurement.
class Strength {
 public:
  static Strength from_m(double m) {
    if (!(m >= 0.0 && m <= 1.0)) {
      fail(ErrorKind::domain, "strength: m must lie in [0, 1] (got " + std::to_string(m) + ")");
    }
    return Strength(m);
  }

  static Strength from_gamma_tau(double gamma_tau) {
    if (!(gamma_tau >= 0.0)) {
      fail(ErrorKind::domain, "strength: gamma*tau must be >= 0 (got " + std::to_string(gamma_tau) + ")");
    }
    return Strength(std::exp(-gamma_tau));
  }

  /// From the cloud separation r0/sigma, via m = exp(-r0^2 / (4 sigma^2)).
  static Strength from_separation(double r0_over_sigma) {
    if (!(r0_over_sigma >= 0.0)) {
      fail(ErrorKind::domain, "strength: separation must be >= 0");
    }
    return Strength(std::exp(-0.25 * r0_over_sigma * r0_over_sigma));
  }

  double m() const noexcept { return m_; }
  double gamma_tau() const noexcept { return m_ > 0.0 ? -std::log(m_) : std::numeric_limits<double>::infinity(); }
  double separation() const noexcept { return std::sqrt(4.0 * gamma_tau()); }
  bool is_projective() const noexcept { return m_ == 0.0; }

  friend bool operator==(const Strength&, const Strength&) = default;

 private:
  explicit Strength(double m) : m_(m) {}
  double m_;
};

/// Gauss-Hermite rule for weight exp(-x^2). Node guesses come from the
/// Golub-Welsch eigenproblem; nodes are then polished by Newton iteration on the
/// orthonormal recurrence, which also yields weights with full relative accuracy
/// in the tails.
class GaussHermiteRule {
 public:
  explicit GaussHermiteRule(int n) {
    if (n < 2 || n > 400) {
      fail(ErrorKind::domain, "gauss-hermite: node count must be in [2, 400]");
    }
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
      jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(0.5 * k);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);
    nodes_.resize(n);
    weights_.resize(n);
    for (int i = 0; i < n; ++i) {
      double x = solver.eigenvalues()(i);
      double dp = 0.0;
      for (int it = 0; it < 20; ++it) {
        const auto [p, d] = orthonormal(n, x);
        dp = d;
        const double dx = p / d;
        x -= dx;
        if (std::abs(dx) <= 1e-15 * std::max(1.0, std::abs(x))) break;
      }
      dp = orthonormal(n, x).second;
      nodes_[i] = x;
      weights_[i] = 2.0 / (dp * dp);
    }
  }

  int size() const noexcept { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// Integral over the real line of f(r) dr (the Gaussian weight is divided out).
  template <class F>
  auto integrate(F&& f) const {
    using R = std::decay_t<decltype(f(0.0))>;
    R acc = f(nodes_[0]) * (weights_[0] * std::exp(nodes_[0] * nodes_[0]));
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
      acc += f(nodes_[i]) * (weights_[i] * std::exp(nodes_[i] * nodes_[i]));
    }
    return acc;
  }

 private:
  // Orthonormal Hermite polynomial p_n(x) and its derivative.
  static std::pair<double, double> orthonormal(int n, double x) {
    double p_prev = 0.0;
    double p = 1.0 / std::pow(std::numbers::pi, 0.25);
    for (int j = 1; j <= n; ++j) {
      const double p_next = x * std::sqrt(2.0 / j) * p - std::sqrt((j - 1.0) / j) * p_prev;
      p_prev = p;
      p = p_next;
    }
    return {p, std::sqrt(2.0 * n) * p_prev};
  }

  std::vector<double> nodes_;
  std::vector<double> weights_;
};

inline constexpr int default_quadrature_nodes = 64;

/// Readout amplitude Psi(r) centered at zero.
inline double readout_amplitude(double r) {
  static const double norm = 1.0 / std::pow(std::numbers::pi, 0.25);
  return norm * std::exp(-0.5 * r * r);
}

/// Integrated null-outcome Kraus operator diag(m, 1, 1).
inline Operator3 kraus_null(const Strength& s) {
  Operator3 k = Operator3::Identity();
  k(level::f, level::f) = s.m();
  return k;
}

/// Outcome-resolved Kraus operator diag(Psi(r - r0), Psi(r), Psi(r)).
inline Operator3 kraus_readout(const Strength& s, double r) {
  if (s.is_projective()) {
    fail(ErrorKind::domain, "kraus_readout: m = 0 has no finite-separation Gaussian model; use kraus_null");
  }
  if (!std::isfinite(r)) {
    fail(ErrorKind::domain, "kraus_readout: readout must be finite");
  }
  const double psi = readout_amplitude(r);
  Operator3 k = Operator3::Zero();
  k(level::f, level::f) = readout_amplitude(r - s.separation());
  k(level::e, level::e) = psi;
  k(level::g, level::g) = psi;
  return k;
}

/// max |integral M(r)^dagger M(r) dr - I| over entries.
inline double completeness_residual(const Strength& s, const GaussHermiteRule& rule) {
  const Operator3 total = rule.integrate([&](double r) -> Operator3 {
    const Operator3 k = kraus_readout(s, r);
    return k.adjoint() * k;
  });
  return (total - Operator3::Identity()).cwiseAbs().maxCoeff();
}

inline double completeness_residual(const Strength& s, int nodes = default_quadrature_nodes) {
  return completeness_residual(s, GaussHermiteRule(nodes));
}

struct IntegratedKraus {
  Operator3 value;
  double completeness_residual = 0.0;
};

/// Quadrature evaluation of integral Psi*(r) M(r) dr, the reference-weighted
/// average of the outcome-resolved Kraus operators. Equals kraus_null(s).
inline IntegratedKraus effective_kraus_from_integral(const Strength& s, int nodes = default_quadrature_nodes,
                                                     double tol = 1e-8) {
  const GaussHermiteRule rule(nodes);
  IntegratedKraus out;
  out.value = rule.integrate([&](double r) -> Operator3 { return readout_amplitude(r) * kraus_readout(s, r); });
  out.completeness_residual = completeness_residual(s, rule);
  if (!(out.completeness_residual < tol)) {
    fail(ErrorKind::numeric, "effective_kraus_from_integral: quadrature did not converge, completeness residual " +
                                 std::to_string(out.completeness_residual));
  }
  return out;
}

/// Two-component Gaussian mixture of readouts: weight p_f centered at r0, the
/// rest centered at 0, each with standard deviation 1/sqrt(2) in units of sigma.
class ReadoutDensity {
 public:
  ReadoutDensity(double p_f, double r0) : p_f_(p_f), r0_(r0) {}

  static constexpr double cloud_sd = std::numbers::sqrt2 / 2.0;

  double p_f() const noexcept { return p_f_; }
  double separation() const noexcept { return r0_; }
  double mean() const noexcept { return p_f_ * r0_; }

  double operator()(double r) const {
    return p_f_ * gaussian(r - r0_) + (1.0 - p_f_) * gaussian(r);
  }

  double cdf(double r) const {
    return p_f_ * normal_cdf((r - r0_) / cloud_sd) + (1.0 - p_f_) * normal_cdf(r / cloud_sd);
  }

  /// Draw a readout from two uniforms in (0, 1): one picks the cloud, the other
  /// is pushed through the inverse normal CDF.
  double sample(double u_cloud, double u_gauss) const {
    const double center = u_cloud < p_f_ ? r0_ : 0.0;
    return center + cloud_sd * normal_quantile(u_gauss);
  }

  static double gaussian(double x) { return std::exp(-x * x) / std::sqrt(std::numbers::pi); }
  static double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
  static double normal_quantile(double u) { return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u); }

 private:
  double p_f_;
  double r0_;
};

/// Readout distribution |M(r) psi|^2 for a normalized state expressed in the
/// measurement frame (f is the monitored level).
inline ReadoutDensity readout_pdf(const QutritState& state, const Strength& s) {
  if (std::abs(state.squaredNorm() - 1.0) > 1e-10) {
    fail(ErrorKind::domain, "readout_pdf: state must be normalized");
  }
  if (s.is_projective()) {
    fail(ErrorKind::domain, "readout_pdf: m = 0 has no Gaussian readout model");
  }
  return ReadoutDensity(std::norm(state(level::f)), s.separation());
}

}  // namespace geophase
