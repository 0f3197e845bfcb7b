#pragma once

// The closed measurement sequence: prepare sqrt(w)|g> + sqrt(1-w)|theta, 0>,
// apply N null-outcome partial measurements along (theta, phi_k), then close
// the path by rotating axis (theta, phi_close) onto |e> and reading the
// g-e interference through A = 2|g><e|.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "geophase/errors.hpp"
#include "geophase/measurement.hpp"
#include "geophase/qutrit.hpp"

namespace geophase {

inline constexpr double contrast_floor = 1e-9;

/// Wraps an angle into (-pi, pi].
inline double wrap_phase(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(a, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

/// phi_k = -2 pi k / N for k = 1..N.
inline std::vector<double> default_phi_schedule(int n_meas) {
  std::vector<double> phis(static_cast<std::size_t>(n_meas));
  for (int k = 1; k <= n_meas; ++k) {
    phis[static_cast<std::size_t>(k - 1)] = -2.0 * std::numbers::pi * k / n_meas;
  }
  return phis;
}

struct ProtocolSpec {
  double theta = 0.0;
  Strength strength = Strength::from_m(0.0);
  std::vector<double> phi_schedule = default_phi_schedule(6);
  double closing_phi = -2.0 * std::numbers::pi;
  double reference_weight = 0.5;

  static ProtocolSpec make(double theta, Strength strength, int n_meas = 6, double reference_weight = 0.5) {
    if (n_meas < 1) {
      fail(ErrorKind::domain, "protocol: n_meas must be positive");
    }
    ProtocolSpec spec;
    spec.theta = theta;
    spec.strength = strength;
    spec.phi_schedule = default_phi_schedule(n_meas);
    spec.reference_weight = reference_weight;
    spec.validate();
    return spec;
  }

  int n_meas() const noexcept { return static_cast<int>(phi_schedule.size()); }

  void validate() const {
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
      fail(ErrorKind::domain, "protocol: theta must lie in [0, pi]");
    }
    if (phi_schedule.empty()) {
      fail(ErrorKind::domain, "protocol: phi schedule must be nonempty");
    }
    for (double phi : phi_schedule) {
      if (!std::isfinite(phi)) fail(ErrorKind::domain, "protocol: phi schedule must be finite");
    }
    if (!std::isfinite(closing_phi)) {
      fail(ErrorKind::domain, "protocol: closing phi must be finite");
    }
    if (!(reference_weight > 0.0 && reference_weight < 1.0)) {
      fail(ErrorKind::domain, "protocol: reference weight must lie in (0, 1)");
    }
  }

  MeasurementAxis axis(std::size_t k) const { return {theta, phi_schedule.at(k)}; }
  MeasurementAxis initial_axis() const { return {theta, 0.0}; }
  MeasurementAxis closing_axis() const { return {theta, closing_phi}; }

  QutritState initial_state() const {
    QutritState s = std::sqrt(1.0 - reference_weight) * axis_state(initial_axis());
    s(level::g) = std::sqrt(reference_weight);
    return s;
  }
};

enum class Method { analytic, projective, monte_carlo };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::analytic: return "analytic";
    case Method::projective: return "projective";
    case Method::monte_carlo: return "monte-carlo";
  }
  return "unknown";
}

struct InterferenceResult {
  cplx amplitude{};        // c e^{i chi}
  double contrast = 0.0;
  double phase = 0.0;      // (-pi, pi]; meaningless when !phase_defined
  bool phase_defined = false;
  Method method = Method::analytic;

  // Monte Carlo only.
  std::optional<double> stderr_re;
  std::optional<double> stderr_im;
  std::optional<double> stderr_contrast;
  std::optional<double> stderr_phase;
  bool insufficient_statistics = false;
};

inline InterferenceResult make_result(cplx amplitude, Method method) {
  InterferenceResult r;
  r.amplitude = amplitude;
  r.contrast = std::abs(amplitude);
  r.phase_defined = r.contrast > contrast_floor;
  r.phase = r.phase_defined ? wrap_phase(std::arg(amplitude)) : 0.0;
  r.method = method;
  return r;
}

struct PathStep {
  MeasurementAxis axis;
  BlochVector pre;
  BlochVector post;
  double amplitude_factor;  // {e,f} norm after / before
};

struct PathRecord {
  BlochVector initial;
  std::vector<PathStep> steps;
};

struct ProtocolRun {
  InterferenceResult result;
  PathRecord path;
  QutritState final_state;  // before the closing rotation
};

/// R^dagger K R psi for an arbitrary lift R of the axis rotation.
inline QutritState measure_along(const QutritState& state, const Operator3& rotation, const Strength& s) {
  return rotation.adjoint() * (kraus_null(s) * (rotation * state));
}

/// Null-outcome partial measurement along an axis. g is untouched.
inline QutritState measure_along(const QutritState& state, const MeasurementAxis& axis, const Strength& s) {
  return measure_along(state, rotation_to_axis(axis), s);
}

/// 2 conj(bra_g) <e| R_close |state>, the A-contraction after the closing rotation.
inline cplx closing_contraction(cplx reference_amplitude, const QutritState& state, const MeasurementAxis& closing) {
  const QutritState rotated = rotation_to_axis(closing) * state;
  return 2.0 * std::conj(reference_amplitude) * rotated(level::e);
}

namespace detail {

inline double ef_norm(const QutritState& s) { return std::hypot(std::abs(s(level::e)), std::abs(s(level::f))); }

template <class Step>
ProtocolRun run_sequence(const ProtocolSpec& spec, Method method, Step&& step) {
  spec.validate();
  ProtocolRun run;
  QutritState state = spec.initial_state();
  run.path.initial = bloch_of(state);
  run.path.steps.reserve(spec.phi_schedule.size());
  BlochVector last = run.path.initial;
  bool annihilated = false;
  for (std::size_t k = 0; k < spec.phi_schedule.size(); ++k) {
    const MeasurementAxis axis = spec.axis(k);
    const double before = ef_norm(state);
    state = step(state, axis);
    const double after = ef_norm(state);
    PathStep rec{axis, last, last, before > 0.0 ? after / before : 0.0};
    if (after > 0.0) {
      rec.post = bloch_of(state);
    } else {
      annihilated = true;
    }
    last = rec.post;
    run.path.steps.push_back(rec);
  }
  run.final_state = state;
  const cplx amp = annihilated ? cplx{} : closing_contraction(std::sqrt(spec.reference_weight), state, spec.closing_axis());
  run.result = make_result(amp, method);
  return run;
}

}  // namespace detail

/// Closed-form evaluation through the product of integrated null-outcome Kraus
/// operators. Handles every m in [0, 1].
inline ProtocolRun run_protocol_analytic(const ProtocolSpec& spec) {
  return detail::run_sequence(spec, Method::analytic, [&](const QutritState& st, const MeasurementAxis& axis) {
    return measure_along(st, axis, spec.strength);
  });
}

/// Projective limit built directly from projectors |n><n| + |g><g|, without the
/// rotation/diagonal factorization.
inline ProtocolRun run_protocol_projective(const ProtocolSpec& spec) {
  if (!spec.strength.is_projective()) {
    fail(ErrorKind::domain, "run_protocol_projective: strength must be m = 0");
  }
  return detail::run_sequence(spec, Method::projective, [](const QutritState& st, const MeasurementAxis& axis) {
    const QutritState n = axis_state(axis);
    QutritState out = n * n.dot(st);  // dot conjugates its left operand
    out(level::g) = st(level::g);
    return out;
  });
}

/// Projective route for m = 0, closed form otherwise.
inline ProtocolRun run_protocol(const ProtocolSpec& spec) {
  return spec.strength.is_projective() ? run_protocol_projective(spec) : run_protocol_analytic(spec);
}

}  // namespace geophase
