#pragma once

// Three-level state algebra in the (f, e, g) basis. The {e, f} pair forms
// the qubit that gets dragged around the Bloch sphere; g is a spectator
// used as phase reference.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "geophase/errors.hpp"

namespace geophase {

using cplx = std::complex<double>;

/// Pure qutrit state, amplitudes ordered (f, e, g). May be unnormalized
/// after a Kraus application; its squared norm is then the outcome probability.
using QutritState = Eigen::Vector3cd;

/// 3x3 operator in the same (f, e, g) ordering.
using Operator3 = Eigen::Matrix3cd;

/// Bloch vector of the {e, f} qubit; |e> is the north pole.
using BlochVector = Eigen::Vector3d;

namespace level {
inline constexpr Eigen::Index f = 0;
inline constexpr Eigen::Index e = 1;
inline constexpr Eigen::Index g = 2;
}  // namespace level

inline QutritState basis_state(Eigen::Index which) {
  QutritState s = QutritState::Zero();
  s(which) = 1.0;
  return s;
}

inline bool is_unitary(const Operator3& u, double tol = 1e-12) {
  return ((u.adjoint() * u) - Operator3::Identity()).cwiseAbs().maxCoeff() < tol;
}

/// True when g does not couple to the {e, f} block.
inline bool is_block_diagonal(const Operator3& op, double tol = 1e-15) {
  using namespace level;
  return std::abs(op(g, e)) < tol && std::abs(op(g, f)) < tol && std::abs(op(e, g)) < tol &&
         std::abs(op(f, g)) < tol;
}

/// Direction on the {e, f} Bloch sphere. theta in [0, pi]; phi unbounded.
class MeasurementAxis {
 public:
  MeasurementAxis(double theta, double phi) : theta_(theta), phi_(phi) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi) || !std::isfinite(phi)) {
      fail(ErrorKind::domain, "measurement axis: theta must lie in [0, pi] and phi must be finite (got theta=" +
                                  std::to_string(theta) + ", phi=" + std::to_string(phi) + ")");
    }
  }

  double theta() const noexcept { return theta_; }
  double phi() const noexcept { return phi_; }

 private:
  double theta_;
  double phi_;
};

/// cos(theta/2)|e> + exp(i phi) sin(theta/2)|f>.
inline QutritState axis_state(const MeasurementAxis& axis) {
  QutritState s;
  s(level::f) = std::polar(std::sin(0.5 * axis.theta()), axis.phi());
  s(level::e) = std::cos(0.5 * axis.theta());
  s(level::g) = 0.0;
  return s;
}

/// Unitary acting as identity on g that sends axis_state(axis) to |e> with no
/// residual phase. The f row is the orthogonal complement cos|f> - e^{-i phi} sin|e>,
/// which is the antipodal axis state up to a phase.
inline Operator3 rotation_to_axis(const MeasurementAxis& axis) {
  using namespace level;
  const double c = std::cos(0.5 * axis.theta());
  const double s = std::sin(0.5 * axis.theta());
  const cplx phase = std::polar(1.0, axis.phi());

  Operator3 r = Operator3::Zero();
  // Row e is <axis|, so R |axis> = <axis|axis> |e> = |e>.
  r(e, f) = std::conj(phase * s);
  r(e, e) = c;
  // Row f is <perp| with |perp> = c|f> - conj(phase) s |e>.
  r(f, f) = c;
  r(f, e) = -phase * s;
  r(g, g) = 1.0;
  return r;
}

/// Bloch vector of the normalized {e, f} projection, with x + iy = 2 a_e conj(a_f).
/// Under this convention axis_state(theta, phi) sits at azimuth -phi, so paths that
/// run toward decreasing phi circulate counterclockwise about |e> and the
/// Pancharatnam phase equals +1/2 the right-handed solid angle.
inline BlochVector bloch_of(const QutritState& state) {
  using namespace level;
  const double n2 = std::norm(state(e)) + std::norm(state(f));
  if (!(n2 > 0.0)) {
    fail(ErrorKind::undefined, "bloch_of: state has no {e,f} component");
  }
  const cplx coh = 2.0 * state(e) * std::conj(state(f)) / n2;
  return {coh.real(), coh.imag(), (std::norm(state(e)) - std::norm(state(f))) / n2};
}

/// Inverse of bloch_of . axis_state; phi is returned in (-pi, pi].
inline MeasurementAxis axis_of(const BlochVector& b) {
  const double z = std::clamp(b.z() / b.norm(), -1.0, 1.0);
  return MeasurementAxis(std::acos(z), -std::atan2(b.y(), b.x()));
}

/// Bloch vector of the axis itself, equal to bloch_of(axis_state(axis)).
inline BlochVector bloch_of(const MeasurementAxis& axis) {
  const double st = std::sin(axis.theta());
  return {st * std::cos(axis.phi()), -st * std::sin(axis.phi()), std::cos(axis.theta())};
}

}  // namespace geophase
