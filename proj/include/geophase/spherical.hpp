#pragma once

// Geodesic geometry on the unit sphere and the discrete Pancharatnam phase.
// Solid angles are right-handed: a loop running counterclockwise when seen
// from outside the sphere encloses positive area.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "geophase/errors.hpp"
#include "geophase/qutrit.hpp"

namespace geophase {

/// Signed solid angle of the geodesic triangle (a, b, c) of unit vectors
/// (Van Oosterom & Strackee). Lies in (-2 pi, 2 pi].
inline double triangle_solid_angle(const BlochVector& a, const BlochVector& b, const BlochVector& c) {
  const double num = a.dot(b.cross(c));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

inline bool nearly_antipodal(const BlochVector& a, const BlochVector& b, double tol = 1e-12) {
  return (a + b).norm() < tol;
}

/// Point at fraction t along the minor geodesic arc from a to b.
inline BlochVector slerp(const BlochVector& a, const BlochVector& b, double t) {
  if (nearly_antipodal(a, b)) {
    fail(ErrorKind::undefined, "slerp: antipodal endpoints have no unique geodesic");
  }
  const double cos_w = std::clamp(a.dot(b), -1.0, 1.0);
  const double w = std::acos(cos_w);
  if (w < 1e-9) {
    return ((1.0 - t) * a + t * b).normalized();
  }
  const double s = std::sin(w);
  return ((std::sin((1.0 - t) * w) / s) * a + (std::sin(t * w) / s) * b).normalized();
}

/// Signed solid angle of the closed geodesic polygon through the vertices (the
/// edge from the last vertex back to the first is implied). Computed as a fan
/// of triangles from the polygon's area-normal direction; the value is defined
/// modulo 4 pi.
inline double solid_angle_polygon(std::span<const BlochVector> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) fail(ErrorKind::domain, "solid_angle_polygon: need at least three vertices");
  BlochVector normal = BlochVector::Zero();
  BlochVector centroid = BlochVector::Zero();
  for (std::size_t k = 0; k < n; ++k) {
    const BlochVector& a = vertices[k];
    const BlochVector& b = vertices[(k + 1) % n];
    if (nearly_antipodal(a, b)) {
      fail(ErrorKind::undefined, "solid_angle_polygon: antipodal consecutive vertices at index " + std::to_string(k));
    }
    normal += a.cross(b);
    centroid += a;
  }
  BlochVector ref = BlochVector::UnitZ();
  if (normal.norm() > 1e-12) {
    ref = normal.normalized();
  } else if (centroid.norm() > 1e-12) {
    ref = centroid.normalized();
  }
  for (const auto& v : vertices) {
    if (nearly_antipodal(ref, v, 1e-9)) {
      ref = -ref;
      break;
    }
  }
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    total += triangle_solid_angle(ref, vertices[k], vertices[(k + 1) % n]);
  }
  return total;
}

/// arg prod_k <psi_{k+1}|psi_k> over a closed list (last state equals the first
/// up to a phase). The final overlap is taken against the first state, so the
/// result does not depend on the phase of any individual entry.
inline double pancharatnam_phase(std::span<const QutritState> states) {
  if (states.size() < 2) fail(ErrorKind::domain, "pancharatnam_phase: need a closed list of at least two states");
  const QutritState& first = states.front();
  const QutritState& last = states.back();
  if (std::abs(std::abs(first.dot(last)) - first.norm() * last.norm()) > 1e-9 * first.norm() * last.norm()) {
    fail(ErrorKind::domain, "pancharatnam_phase: list is not closed");
  }
  cplx product = 1.0;
  for (std::size_t k = 0; k + 1 < states.size(); ++k) {
    const QutritState& next = k + 2 == states.size() ? first : states[k + 1];
    const cplx overlap = next.dot(states[k]);
    if (std::abs(overlap) == 0.0) {
      fail(ErrorKind::undefined, "pancharatnam_phase: zero overlap between states " + std::to_string(k) + " and " +
                                     std::to_string(k + 1));
    }
    product *= overlap / std::abs(overlap);
  }
  return std::arg(product);
}

}  // namespace geophase
