#pragma once

// Born-rule Monte Carlo over full readout records. Each trajectory applies the
// outcome-resolved Kraus operator of every measurement, renormalizes, and
// contributes <phi|A|phi> of its final normalized state. Because the squared
// norm of the unnormalized state is the Born probability of the record, the
// plain sample mean estimates the ensemble integral of <phi_f|A|phi_f> over all
// records. Every trajectory is kept; there is no postselection.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "geophase/errors.hpp"
#include "geophase/measurement.hpp"
#include "geophase/parallel.hpp"
#include "geophase/protocol.hpp"
#include "geophase/qutrit.hpp"
#include "geophase/rng.hpp"

namespace geophase {

inline constexpr std::size_t min_mc_samples = 100;

struct McConfig {
  std::size_t n_samples = 100000;
  std::uint64_t seed = 42;
  unsigned workers = 0;  // 0: hardware concurrency, capped by GEOPHASE_THREADS
};

struct TrajectorySample {
  std::vector<double> readouts;  // r_k in units of sigma; 0/1 (null/click) for m = 0
  QutritState final_state;
  double probability_weight = 1.0;  // product of per-step outcome densities or probabilities
  cplx interference_term{};
};

namespace detail {

struct NoRecord {
  void readout(double) {}
  void weight(double) {}
};

struct SampleRecord {
  TrajectorySample* out;
  void readout(double r) { out->readouts.push_back(r); }
  void weight(double p) { out->probability_weight *= p; }
};

/// Applies diag(Psi(r - r0), Psi(r), Psi(r)) up to a positive scalar and renormalizes.
inline void apply_readout_backaction(QutritState& rotated, double r, double r0) {
  if (rotated(level::f) == cplx{}) return;  // Kraus acts as a scalar
  const double log_f = -0.5 * (r - r0) * (r - r0);
  const double log_eg = -0.5 * r * r;
  const double top = std::max(log_f, log_eg);
  rotated(level::f) *= std::exp(log_f - top);
  const double s_eg = std::exp(log_eg - top);
  rotated(level::e) *= s_eg;
  rotated(level::g) *= s_eg;
  rotated /= rotated.norm();
}

template <class Recorder>
cplx simulate(const ProtocolSpec& spec, const std::vector<Operator3>& rotations, const Philox4x32& rng,
              std::uint64_t sample_id, QutritState& state, Recorder&& rec) {
  const Strength s = spec.strength;
  const double r0 = s.is_projective() ? 0.0 : s.separation();
  state = spec.initial_state();
  for (std::size_t k = 0; k < rotations.size(); ++k) {
    const auto u = rng.uniform_pair(sample_id, k);
    QutritState rotated = rotations[k] * state;
    const double p_f = std::norm(rotated(level::f));
    if (s.is_projective()) {
      if (u[0] < p_f) {
        rotated = basis_state(level::f);
        rec.readout(1.0);
        rec.weight(p_f);
      } else {
        rotated(level::f) = 0.0;
        rotated /= rotated.norm();
        rec.readout(0.0);
        rec.weight(1.0 - p_f);
      }
    } else {
      const ReadoutDensity density(p_f, r0);
      const double r = density.sample(u[0], u[1]);
      apply_readout_backaction(rotated, r, r0);
      rec.readout(r);
      rec.weight(density(r));
    }
    state = rotations[k].adjoint() * rotated;
  }
  return closing_contraction(state(level::g), state, spec.closing_axis());
}

inline std::vector<Operator3> step_rotations(const ProtocolSpec& spec) {
  std::vector<Operator3> rs;
  rs.reserve(spec.phi_schedule.size());
  for (std::size_t k = 0; k < spec.phi_schedule.size(); ++k) rs.push_back(rotation_to_axis(spec.axis(k)));
  return rs;
}

}  // namespace detail

/// One trajectory, fully determined by (seed, sample_id).
inline TrajectorySample sample_trajectory(const ProtocolSpec& spec, std::uint64_t sample_id, std::uint64_t seed) {
  spec.validate();
  TrajectorySample out;
  out.readouts.reserve(spec.phi_schedule.size());
  out.interference_term = detail::simulate(spec, detail::step_rotations(spec), Philox4x32(seed), sample_id,
                                           out.final_state, detail::SampleRecord{&out});
  return out;
}

/// Sample mean of the per-trajectory interference term with per-component
/// standard errors. The reduction runs in sample order, so the estimate does not
/// depend on the worker count.
inline InterferenceResult mc_interference(const ProtocolSpec& spec, const McConfig& cfg) {
  spec.validate();
  if (cfg.n_samples < 2) {
    fail(ErrorKind::domain, "mc_interference: need at least two samples");
  }
  const auto rotations = detail::step_rotations(spec);
  const Philox4x32 rng(cfg.seed);
  std::vector<cplx> terms(cfg.n_samples);
  parallel_for(cfg.n_samples, worker_count(cfg.workers), [&](std::size_t i) {
    QutritState scratch;
    terms[i] = detail::simulate(spec, rotations, rng, i, scratch, detail::NoRecord{});
  });

  // Shift by the first term so identical samples give an exact mean and zero variance.
  const cplx shift = terms[0];
  const double n = static_cast<double>(cfg.n_samples);
  std::vector<cplx> dev(cfg.n_samples);
  std::transform(terms.begin(), terms.end(), dev.begin(), [&](cplx t) { return t - shift; });
  const cplx dev_mean = pairwise_sum<cplx>(dev) / n;
  std::vector<double> sq_re(cfg.n_samples), sq_im(cfg.n_samples);
  for (std::size_t i = 0; i < cfg.n_samples; ++i) {
    const cplx d = dev[i] - dev_mean;
    sq_re[i] = d.real() * d.real();
    sq_im[i] = d.imag() * d.imag();
  }
  const double se_re = std::sqrt(pairwise_sum<double>(sq_re) / (n - 1.0) / n);
  const double se_im = std::sqrt(pairwise_sum<double>(sq_im) / (n - 1.0) / n);

  InterferenceResult res = make_result(shift + dev_mean, Method::monte_carlo);
  res.stderr_re = se_re;
  res.stderr_im = se_im;
  const double re = res.amplitude.real();
  const double im = res.amplitude.imag();
  const double c = res.contrast;
  if (c > 0.0) {
    res.stderr_contrast = std::sqrt(re * re * se_re * se_re + im * im * se_im * se_im) / c;
    res.stderr_phase = std::sqrt(im * im * se_re * se_re + re * re * se_im * se_im) / (c * c);
  } else {
    res.stderr_contrast = std::hypot(se_re, se_im);
    res.stderr_phase = std::numbers::pi;
  }
  res.insufficient_statistics = cfg.n_samples < min_mc_samples;
  return res;
}

struct ReadoutHistogram {
  std::vector<double> edges;        // bins.size() + 1 edges; tails are folded into the outer bins
  std::vector<std::size_t> counts;
  std::vector<double> expected;
  double p_f = 0.0;                 // analytic mixture weight of the first measurement
  double chi_square = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Histogram of the first-measurement readout against readout_pdf, with a
/// chi-square goodness-of-fit test (bins with expected count < 5 are merged).
inline ReadoutHistogram readout_histogram(const ProtocolSpec& spec, const McConfig& cfg, int bins = 40) {
  spec.validate();
  if (spec.strength.is_projective()) {
    fail(ErrorKind::domain, "readout_histogram: m = 0 has no continuous readout");
  }
  if (bins < 2) fail(ErrorKind::domain, "readout_histogram: need at least two bins");
  const Operator3 rot = rotation_to_axis(spec.axis(0));
  const QutritState rotated = rot * spec.initial_state();
  const ReadoutDensity density = readout_pdf(rotated, spec.strength);
  const Philox4x32 rng(cfg.seed);

  ReadoutHistogram h;
  h.p_f = density.p_f();
  const double lo = -4.0 * ReadoutDensity::cloud_sd;
  const double hi = density.separation() + 4.0 * ReadoutDensity::cloud_sd;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) h.edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / bins;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (std::size_t i = 0; i < cfg.n_samples; ++i) {
    const auto u = rng.uniform_pair(i, 0);
    const double r = density.sample(u[0], u[1]);
    auto b = static_cast<long>(std::floor((r - lo) / (hi - lo) * bins));
    b = std::clamp<long>(b, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  const double n = static_cast<double>(cfg.n_samples);
  h.expected.resize(static_cast<std::size_t>(bins));
  for (int i = 0; i < bins; ++i) {
    const double c_lo = i == 0 ? 0.0 : density.cdf(h.edges[static_cast<std::size_t>(i)]);
    const double c_hi = i == bins - 1 ? 1.0 : density.cdf(h.edges[static_cast<std::size_t>(i) + 1]);
    h.expected[static_cast<std::size_t>(i)] = n * (c_hi - c_lo);
  }

  double obs = 0.0, exp = 0.0;
  int groups = 0;
  double last_obs = 0.0, last_exp = 0.0;
  for (int i = 0; i < bins; ++i) {
    obs += static_cast<double>(h.counts[static_cast<std::size_t>(i)]);
    exp += h.expected[static_cast<std::size_t>(i)];
    if (exp >= 5.0) {
      h.chi_square += (obs - exp) * (obs - exp) / exp;
      last_obs = obs;
      last_exp = exp;
      ++groups;
      obs = exp = 0.0;
    }
  }
  if (exp > 0.0 && groups > 0) {
    // fold the undersized remainder into the last group
    h.chi_square -= (last_obs - last_exp) * (last_obs - last_exp) / last_exp;
    last_obs += obs;
    last_exp += exp;
    h.chi_square += (last_obs - last_exp) * (last_obs - last_exp) / last_exp;
  }
  h.dof = std::max(groups - 1, 1);
  h.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(h.dof), h.chi_square));
  return h;
}

}  // namespace geophase
