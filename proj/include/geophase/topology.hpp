#pragma once

// Phase curves chi(theta), their winding (Chern) number, the degree of the
// Bloch-sphere surface swept by the measurement trajectories, and the critical
// strength at which both flip.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "geophase/errors.hpp"
#include "geophase/measurement.hpp"
#include "geophase/parallel.hpp"
#include "geophase/protocol.hpp"
#include "geophase/qutrit.hpp"
#include "geophase/spherical.hpp"

namespace geophase {

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> xs(n);
  if (n == 1) {
    xs[0] = a;
    return xs;
  }
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = i + 1 == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return xs;
}

/// Protocol at (theta, m) sharing every other setting with `base`.
inline ProtocolSpec at(const ProtocolSpec& base, double theta, Strength s) {
  ProtocolSpec spec = base;
  spec.theta = theta;
  spec.strength = s;
  return spec;
}

struct UnwrapOptions {
  double refine_step = std::numbers::pi / 4;  // refine intervals whose wrapped step exceeds this
  double max_step = std::numbers::pi / 2;     // larger remaining steps make the curve non-unwrappable
  std::size_t max_nodes = 4096;
};

struct PhaseCurve {
  std::vector<double> theta;
  std::vector<double> chi;          // unwrapped; NaN at undefined nodes
  std::vector<double> chi_wrapped;
  std::vector<double> contrast;
  std::vector<bool> undefined;
  Strength strength = Strength::from_m(0.0);
  bool unwrappable = true;
};

/// Unwraps wrapped phases along the given order, skipping undefined entries.
/// Returns the largest absolute step taken.
inline double unwrap_along(const std::vector<double>& wrapped, const std::vector<bool>& undefined,
                           std::vector<double>& out) {
  out.assign(wrapped.size(), std::numeric_limits<double>::quiet_NaN());
  double worst = 0.0;
  std::optional<std::size_t> prev;
  for (std::size_t i = 0; i < wrapped.size(); ++i) {
    if (undefined[i]) continue;
    if (!prev) {
      out[i] = wrapped[i];
    } else {
      const double step = wrap_phase(wrapped[i] - wrapped[*prev]);
      worst = std::max(worst, std::abs(step));
      out[i] = out[*prev] + step;
    }
    prev = i;
  }
  return worst;
}

/// chi(theta) at fixed strength. Intervals with large wrapped steps or
/// undefined endpoints are bisected until the steps are small or the node cap
/// is hit; the unwrapped curve is anchored at the first node.
inline PhaseCurve phase_vs_theta(const ProtocolSpec& base, Strength s, std::vector<double> grid,
                                 const UnwrapOptions& opts = {}) {
  if (grid.size() < 2 || grid.front() != 0.0 || !std::is_sorted(grid.begin(), grid.end())) {
    fail(ErrorKind::domain, "phase_vs_theta: grid must be ascending, start at theta = 0, and hold >= 2 nodes");
  }
  std::vector<std::pair<double, InterferenceResult>> nodes;
  nodes.reserve(grid.size());
  for (double t : grid) nodes.emplace_back(t, run_protocol(at(base, t, s)).result);

  while (nodes.size() < opts.max_nodes) {
    std::vector<std::pair<double, InterferenceResult>> next;
    next.reserve(nodes.size() * 2);
    std::size_t added = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      next.push_back(nodes[i]);
      if (i + 1 == nodes.size()) break;
      const auto& [ta, ra] = nodes[i];
      const auto& [tb, rb] = nodes[i + 1];
      const bool needs = !ra.phase_defined || !rb.phase_defined ||
                         std::abs(wrap_phase(rb.phase - ra.phase)) > opts.refine_step;
      const double mid = 0.5 * (ta + tb);
      if (needs && mid > ta && mid < tb && nodes.size() + added < opts.max_nodes) {
        next.emplace_back(mid, run_protocol(at(base, mid, s)).result);
        ++added;
      }
    }
    nodes.swap(next);
    if (added == 0) break;
  }

  PhaseCurve curve;
  curve.strength = s;
  for (const auto& [t, r] : nodes) {
    curve.theta.push_back(t);
    curve.chi_wrapped.push_back(r.phase);
    curve.contrast.push_back(r.contrast);
    curve.undefined.push_back(!r.phase_defined);
  }
  const double worst = unwrap_along(curve.chi_wrapped, curve.undefined, curve.chi);
  curve.unwrappable = worst <= opts.max_step && !curve.undefined.front() && !curve.undefined.back();
  return curve;
}

/// Winding of chi across the curve, (chi(end) - chi(start)) / 2 pi, rounded.
inline int chern_from_curve(const PhaseCurve& curve, double residual_tol = 0.05) {
  if (!curve.unwrappable || curve.chi.empty() || curve.undefined.front() || curve.undefined.back()) {
    fail(ErrorKind::non_unwrappable, "chern_from_curve: curve at m=" + std::to_string(curve.strength.m()) +
                                         " is not unwrappable");
  }
  const double winding = (curve.chi.back() - curve.chi.front()) / (2.0 * std::numbers::pi);
  const double c = std::round(winding);
  if (std::abs(winding - c) >= residual_tol) {
    fail(ErrorKind::numeric, "chern_from_curve: winding " + std::to_string(winding) + " is not near an integer");
  }
  return static_cast<int>(c);
}

inline std::vector<double> default_theta_grid(std::size_t n = 65) { return linspace(0.0, std::numbers::pi, n); }

inline int chern_number(const ProtocolSpec& base, Strength s, std::size_t grid_nodes = 65) {
  return chern_from_curve(phase_vs_theta(base, s, default_theta_grid(grid_nodes)));
}

/// One closed trajectory loop on the Bloch sphere: the geodesic path through
/// the initial state, every post-measurement state, the closing axis and back.
struct SurfaceLoop {
  double theta = 0.0;
  std::vector<BlochVector> points;  // closed implicitly: the last point connects to the first
};

struct BlochSurface {
  std::vector<SurfaceLoop> loops;
  int degree = 0;
  double raw_degree = 0.0;
};

inline SurfaceLoop trajectory_loop(const ProtocolSpec& spec, int interp_per_segment) {
  const ProtocolRun run = run_protocol(spec);
  std::vector<BlochVector> corners{run.path.initial};
  for (const auto& step : run.path.steps) corners.push_back(step.post);
  corners.push_back(bloch_of(spec.closing_axis()));

  SurfaceLoop loop;
  loop.theta = spec.theta;
  loop.points.reserve(corners.size() * static_cast<std::size_t>(interp_per_segment));
  for (std::size_t k = 0; k < corners.size(); ++k) {
    const BlochVector& a = corners[k];
    const BlochVector& b = corners[(k + 1) % corners.size()];
    if (nearly_antipodal(a, b, 1e-9)) {
      fail(ErrorKind::singular_surface, "surface: antipodal geodesic endpoints at theta=" + std::to_string(spec.theta) +
                                            ", segment=" + std::to_string(k));
    }
    for (int j = 0; j < interp_per_segment; ++j) {
      loop.points.push_back(slerp(a, b, static_cast<double>(j) / interp_per_segment));
    }
  }
  return loop;
}

/// Builds the surface of trajectory loops over theta in [0, pi] and its degree,
/// (1/4 pi) times the signed area. Quads are oriented by ascending theta then
/// ascending path parameter, so a surface that wraps the sphere has degree +1.
inline BlochSurface build_surface(const ProtocolSpec& base, Strength s, const std::vector<double>& theta_grid,
                                  int interp_per_segment, double residual_tol = 0.05) {
  if (s.m() >= 1.0) fail(ErrorKind::domain, "surface: strength must satisfy m < 1");
  if (theta_grid.size() < 32 || interp_per_segment < 1) {
    fail(ErrorKind::domain, "surface: need at least 32 theta nodes and one point per segment");
  }
  if (theta_grid.front() != 0.0 || theta_grid.back() != std::numbers::pi ||
      !std::is_sorted(theta_grid.begin(), theta_grid.end())) {
    fail(ErrorKind::domain, "surface: theta grid must ascend from 0 to pi");
  }
  BlochSurface surf;
  surf.loops.reserve(theta_grid.size());
  for (double t : theta_grid) surf.loops.push_back(trajectory_loop(at(base, t, s), interp_per_segment));

  double area = 0.0;
  for (std::size_t i = 0; i + 1 < surf.loops.size(); ++i) {
    const auto& row = surf.loops[i].points;
    const auto& nxt = surf.loops[i + 1].points;
    const std::size_t n = row.size();
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t jn = (j + 1) % n;
      area += triangle_solid_angle(row[j], nxt[j], nxt[jn]);
      area += triangle_solid_angle(row[j], nxt[jn], row[jn]);
    }
  }
  surf.raw_degree = area / (4.0 * std::numbers::pi);
  surf.degree = static_cast<int>(std::round(surf.raw_degree));
  if (std::abs(surf.raw_degree - surf.degree) >= residual_tol) {
    fail(ErrorKind::numeric, "surface: degree " + std::to_string(surf.raw_degree) + " is not near an integer");
  }
  return surf;
}

inline int surface_degree(const ProtocolSpec& base, Strength s, const std::vector<double>& theta_grid,
                          int interp_per_segment) {
  return build_surface(base, s, theta_grid, interp_per_segment).degree;
}

struct TransitionReport {
  double m_star = 0.0;
  double m_lo = 0.0;
  double m_hi = 1.0;
  double contrast_min = 0.0;       // equatorial contrast at m_star
  int chern_below = 0;             // at m_lo (stronger measurement)
  int chern_above = 0;             // at m_hi
  double jump_at_equator = 0.0;    // |chi(pi/2, m_lo) - chi(pi/2, m_hi)| wrapped to [0, pi]
  double singular_theta = 0.0;     // theta of minimum contrast at m_star
  int bisection_steps = 0;
};

/// Bisects m on the Chern flip, then locates the equatorial contrast minimum
/// inside the final bracket.
inline TransitionReport find_critical_strength(int n_meas, double reference_weight, double tol = 1e-4,
                                               std::size_t grid_nodes = 65) {
  if (!(tol >= 1e-6)) fail(ErrorKind::domain, "find_critical_strength: tol must be >= 1e-6");
  const ProtocolSpec base = ProtocolSpec::make(0.0, Strength::from_m(0.0), n_meas, reference_weight);
  auto chern = [&](double m) {
    try {
      return chern_number(base, Strength::from_m(m), grid_nodes);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::non_unwrappable) throw;
      // landed on the singular cell; nudge off it
      return chern_number(base, Strength::from_m(std::min(1.0, m + 0.125 * tol)), grid_nodes);
    }
  };

  TransitionReport rep;
  rep.m_lo = 0.0;
  rep.m_hi = 1.0;
  rep.chern_below = chern(rep.m_lo);
  rep.chern_above = chern(rep.m_hi);
  if (rep.chern_below == rep.chern_above) {
    fail(ErrorKind::no_transition, "find_critical_strength: Chern number is " + std::to_string(rep.chern_below) +
                                       " at both m=0 and m=1");
  }
  while (rep.m_hi - rep.m_lo > tol) {
    const double mid = 0.5 * (rep.m_lo + rep.m_hi);
    (chern(mid) == rep.chern_below ? rep.m_lo : rep.m_hi) = mid;
    ++rep.bisection_steps;
  }

  constexpr double equator = std::numbers::pi / 2;
  auto equatorial = [&](double m) { return run_protocol(at(base, equator, Strength::from_m(m))).result; };
  const auto [m_star, c2] = boost::math::tools::brent_find_minima(
      [&](double m) { return std::norm(equatorial(m).amplitude); }, rep.m_lo, rep.m_hi,
      std::numeric_limits<double>::digits / 2);
  rep.m_star = m_star;
  rep.contrast_min = std::sqrt(c2);

  const InterferenceResult lo = equatorial(rep.m_lo);
  const InterferenceResult hi = equatorial(rep.m_hi);
  rep.jump_at_equator = std::abs(wrap_phase(lo.phase - hi.phase));

  // Locate the singular theta on a fine grid at m_star.
  double best = std::numeric_limits<double>::infinity();
  for (double t : linspace(0.0, std::numbers::pi, 2049)) {
    const double c = run_protocol(at(base, t, Strength::from_m(rep.m_star))).result.contrast;
    if (c < best) {
      best = c;
      rep.singular_theta = t;
    }
  }
  return rep;
}

struct PhaseMap {
  std::vector<double> theta;
  std::vector<double> m;
  int n_meas = 6;
  double reference_weight = 0.5;
  // Row-major: index = i_theta * m.size() + i_m.
  std::vector<double> chi_wrapped;
  std::vector<double> chi_unwrapped;
  std::vector<double> contrast;
  std::vector<bool> defined;

  std::size_t index(std::size_t i_theta, std::size_t i_m) const { return i_theta * m.size() + i_m; }
};

/// Dense (theta, m) evaluation; each cell is independent. chi_unwrapped is
/// unwrapped along theta within each strength column on the given grid.
inline PhaseMap sweep_phase_map(const std::vector<double>& theta_grid, const std::vector<double>& m_grid,
                                int n_meas, double reference_weight, unsigned workers = 0) {
  if (theta_grid.empty() || m_grid.empty()) fail(ErrorKind::domain, "sweep_phase_map: grids must be nonempty");
  const ProtocolSpec base = ProtocolSpec::make(0.0, Strength::from_m(0.0), n_meas, reference_weight);
  std::vector<Strength> strengths;
  strengths.reserve(m_grid.size());
  for (double m : m_grid) strengths.push_back(Strength::from_m(m));
  for (double t : theta_grid) (void)MeasurementAxis(t, 0.0);

  PhaseMap map;
  map.theta = theta_grid;
  map.m = m_grid;
  map.n_meas = n_meas;
  map.reference_weight = reference_weight;
  const std::size_t cells = theta_grid.size() * m_grid.size();
  map.chi_wrapped.resize(cells);
  map.chi_unwrapped.resize(cells);
  map.contrast.resize(cells);
  std::vector<char> defined(cells);
  parallel_for(cells, worker_count(workers), [&](std::size_t idx) {
    const std::size_t it = idx / m_grid.size();
    const std::size_t im = idx % m_grid.size();
    const InterferenceResult r = run_protocol(at(base, theta_grid[it], strengths[im])).result;
    map.chi_wrapped[idx] = r.phase;
    map.contrast[idx] = r.contrast;
    defined[idx] = r.phase_defined ? 1 : 0;
  });
  map.defined.assign(defined.begin(), defined.end());

  std::vector<double> col(theta_grid.size()), out;
  std::vector<bool> undef(theta_grid.size());
  for (std::size_t im = 0; im < m_grid.size(); ++im) {
    for (std::size_t it = 0; it < theta_grid.size(); ++it) {
      col[it] = map.chi_wrapped[map.index(it, im)];
      undef[it] = !map.defined[map.index(it, im)];
    }
    unwrap_along(col, undef, out);
    for (std::size_t it = 0; it < theta_grid.size(); ++it) map.chi_unwrapped[map.index(it, im)] = out[it];
  }
  return map;
}

}  // namespace geophase
