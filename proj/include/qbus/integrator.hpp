#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>

#include "qbus/error.hpp"
#include "qbus/types.hpp"

namespace qbus {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  // 0 selects a step from the RHS magnitude
  std::size_t max_steps = 200'000'000;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_calls = 0;
};

/// Dormand-Prince 5(4) with FSAL and Hairer's 4th-order continuous extension.
///
/// Integrates dy/dt = f(t, y) from t0 through the (monotone) `sample_times`,
/// which may run backward in time. `observe(i, t_i, y(t_i))` is called for
/// each sample from the dense output; steps are never truncated to hit samples.
/// State is any Eigen dense object (vector or matrix).
template <class State, class Rhs, class Observer>
OdeStats integrate_dopri5(Rhs&& f, State y, double t0, std::span<const double> sample_times, const OdeOptions& opt,
                          Observer&& observe) {
  OdeStats stats;
  if (sample_times.empty()) return stats;
  const double t_end = sample_times.back();
  const double dir = t_end >= t0 ? 1.0 : -1.0;

  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                   d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                   d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

  auto call = [&](double t, const State& x, State& out) {
    f(t, x, out);
    ++stats.rhs_calls;
  };

  std::size_t next = 0;
  double t = t0;
  while (next < sample_times.size() && (sample_times[next] - t) * dir <= 0.0) {
    observe(next, sample_times[next], y);
    ++next;
  }
  if (next == sample_times.size()) return stats;

  State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
  call(t, y, k1);

  auto err_norm = [&](const State& err, const State& y0, const State& y1) {
    double acc = 0.0;
    const auto n = err.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y0.data()[i]), std::abs(y1.data()[i]));
      const double e = std::abs(err.data()[i]) / sc;
      acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(n));
  };

  double h = opt.initial_step;
  if (h <= 0.0) {
    const double d0 = y.norm(), dy = k1.norm();
    h = (d0 < 1e-5 || dy < 1e-5) ? 1e-6 : 0.01 * d0 / dy;
  }
  h = std::min({h, opt.max_step, std::abs(t_end - t0)});

  double fac_prev = 1e-4;
  while (next < sample_times.size()) {
    if (stats.accepted + stats.rejected >= opt.max_steps) {
      throw NumericalError("integrator exceeded the step budget at t = " + std::to_string(t));
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      throw NumericalError("integrator step size underflow at t = " + std::to_string(t));
    }
    const double hs = dir * std::min(h, std::abs(t_end - t));
    ytmp = y + hs * (a21 * k1);
    call(t + c2 * hs, ytmp, k2);
    ytmp = y + hs * (a31 * k1 + a32 * k2);
    call(t + c3 * hs, ytmp, k3);
    ytmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
    call(t + c4 * hs, ytmp, k4);
    ytmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    call(t + c5 * hs, ytmp, k5);
    ytmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    call(t + hs, ytmp, k6);
    ynew = y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    call(t + hs, ynew, k7);
    ytmp = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double err = err_norm(ytmp, y, ynew);

    if (!std::isfinite(err)) throw NumericalError("integrator produced a non-finite state at t = " + std::to_string(t));

    if (err <= 1.0) {
      const double t_new = t + hs;
      // Dense output on [t, t_new]
      while (next < sample_times.size() && (sample_times[next] - t_new) * dir <= 0.0) {
        const double theta = (sample_times[next] - t) / hs;
        const double th1 = 1.0 - theta;
        const State ydiff = ynew - y;
        const State bspl = hs * k1 - ydiff;
        const State r4 = ydiff - hs * k7 - bspl;
        const State r5 = hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        const State yi = y + theta * (ydiff + th1 * (bspl + theta * (r4 + th1 * r5)));
        observe(next, sample_times[next], yi);
        ++next;
      }
      y = ynew;
      k1 = k7;
      t = t_new;
      ++stats.accepted;
      // PI step control (Hairer's beta = 0.04)
      const double e = std::max(err, 1e-10);
      double fac = 0.9 * std::pow(e, -0.2 + 0.75 * 0.04) * std::pow(fac_prev, 0.04);
      fac = std::clamp(fac, 0.2, 10.0);
      fac_prev = std::max(err, 1e-4);
      h = std::min(std::abs(hs) * fac, opt.max_step);
    } else {
      ++stats.rejected;
      h = std::abs(hs) * std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
  }
  return stats;
}

}  // namespace qbus
