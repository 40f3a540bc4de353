#include "optpump/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace optpump {

namespace {

constexpr double kSteadyTolerance = 1e-6;

struct Rk4Stepper {
  const LaserParams& params;
  double r_opt;
  std::size_t clamps = 0;

  LaserState clamp(LaserState s) {
    if (s.n < 0.0) {
      s.n = 0.0;
      ++clamps;
    }
    if (s.q < 0.0) {
      s.q = 0.0;
      ++clamps;
    }
    return s;
  }

  template <class Current>
  LaserState step(const LaserState& s, double t, double dt, Current&& current) {
    const double half = 0.5 * dt;
    const Derivatives k1 = derivatives(s, current(t), r_opt, params);
    const LaserState s2 = clamp({s.n + half * k1.dn, s.q + half * k1.dq});
    const Derivatives k2 = derivatives(s2, current(t + half), r_opt, params);
    const LaserState s3 = clamp({s.n + half * k2.dn, s.q + half * k2.dq});
    const Derivatives k3 = derivatives(s3, current(t + half), r_opt, params);
    const LaserState s4 = clamp({s.n + dt * k3.dn, s.q + dt * k3.dq});
    const Derivatives k4 = derivatives(s4, current(t + dt), r_opt, params);
    return clamp({s.n + dt / 6.0 * (k1.dn + 2.0 * k2.dn + 2.0 * k3.dn + k4.dn),
                  s.q + dt / 6.0 * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq)});
  }
};

bool converged(const LaserState& s, double i_dc, double r_opt, const LaserParams& p,
               double* residual) {
  const Derivatives d = derivatives(s, i_dc, r_opt, p);
  const double scale = kSteadyTolerance * s.n / p.tau_e;
  *residual = std::max(std::abs(d.dn), std::abs(d.dq));
  return std::abs(d.dn) <= scale && std::abs(d.dq) <= scale;
}

// Eliminating the stimulated term between the two equations gives N as a
// linear function of Q; the photon equation is then positive at Q = 0,
// negative where N reaches zero, and has a single crossing in between.
bool bisect_steady_state(const LaserParams& p, double i_dc, double r_opt, LaserState* out) {
  const double source = i_dc / constants::kElementaryCharge + r_opt;
  const double leak = 1.0 - p.c_sp / p.gamma_conf;
  if (!(leak > 0.0)) return false;

  auto carriers = [&](double q) {
    return std::max(0.0, (source - q / (p.gamma_conf * p.tau_ph)) * p.tau_e / leak);
  };
  auto photon_balance = [&](double q) {
    const LaserState s{carriers(q), q};
    return (gain(s, p) - 1.0) * q / p.tau_ph + p.c_sp * s.n / p.tau_e;
  };

  double lo = 0.0;
  double hi = p.gamma_conf * p.tau_ph * source;
  if (p.c_sp == 0.0) {
    // Without spontaneous seeding Q = 0 is always an equilibrium; prefer the
    // lasing one when it exists.
    const double n0 = carriers(0.0);
    if (n0 <= p.n_th) {
      *out = {n0, 0.0};
      return true;
    }
    lo = std::nextafter(0.0, 1.0);
  }
  for (int it = 0; it < 2000 && lo < hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (photon_balance(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double flo = std::abs(photon_balance(lo));
  const double fhi = std::abs(photon_balance(hi));
  const double q = flo <= fhi ? lo : hi;
  *out = {carriers(q), q};
  return true;
}

LaserState integrate_to_rest(const LaserParams& p, double i_dc, double r_opt,
                             LaserState s, double* residual) {
  Rk4Stepper stepper{p, r_opt};
  const double dt = p.tau_ph / 10.0;
  auto current = [i_dc](double) { return i_dc; };
  const auto steps_per_check = static_cast<std::int64_t>(std::ceil(p.tau_e / dt));
  for (int check = 0; check < 2000; ++check) {
    for (std::int64_t k = 0; k < steps_per_check; ++k) s = stepper.step(s, 0.0, dt, current);
    if (converged(s, i_dc, r_opt, p, residual)) return s;
  }
  return s;
}

}  // namespace

SimConfig SimConfig::make(const LaserParams& params, const DriveWaveform& drive,
                          const PumpScenario& pump, std::size_t periods) {
  SimConfig c;
  c.params = params;
  c.drive = drive;
  c.pump = pump;
  c.dt = 0.1e-12;
  const double period = drive.period();
  const double warm = std::max(20.0 * period, 10.0 * params.tau_e);
  c.warmup = std::ceil(warm / period - 1e-9) * period;
  c.t_total = c.warmup + static_cast<double>(periods) * period;
  c.sample_stride = 1;
  return c;
}

void SimConfig::validate() const {
  params.validate();
  drive.validate();
  pump.validate();
  if (!(dt > 0.0 && dt <= params.tau_ph / 10.0)) {
    throw ValidationError("dt", "must lie in (0, tau_ph/10]");
  }
  if (!(warmup >= 0.0)) throw ValidationError("warmup", "must be >= 0");
  if (!(t_total > warmup)) throw ValidationError("t_total", "must exceed warmup");
  if (sample_stride == 0) throw ValidationError("sample_stride", "must be positive");
}

LaserState steady_state(const LaserParams& params, double i_dc, double r_opt) {
  if (!(i_dc >= 0.0)) throw ValidationError("i_dc", "must be >= 0");
  if (!(r_opt >= 0.0)) throw ValidationError("r_opt", "must be >= 0");
  if (i_dc == 0.0 && r_opt == 0.0) return {0.0, 0.0};

  double residual = 0.0;
  LaserState s;
  if (bisect_steady_state(params, i_dc, r_opt, &s) &&
      converged(s, i_dc, r_opt, params, &residual)) {
    return s;
  }
  const LaserState start{(i_dc / constants::kElementaryCharge + r_opt) * params.tau_e, 0.0};
  s = integrate_to_rest(params, i_dc, r_opt, start, &residual);
  if (converged(s, i_dc, r_opt, params, &residual)) return s;

  std::ostringstream msg;
  msg << "steady state did not converge at i_dc=" << i_dc << " A, r_opt=" << r_opt
      << " 1/s; residual=" << residual << " 1/s";
  throw NumericalError(msg.str());
}

SimTrace simulate(const SimConfig& config) {
  config.validate();
  const LaserParams& p = config.params;
  const double r_opt = config.r_opt();
  const double dt = config.dt;

  const auto total_steps = static_cast<std::int64_t>(std::llround(config.t_total / dt));
  const auto warm_steps = static_cast<std::int64_t>(std::llround(config.warmup / dt));
  const auto stride = static_cast<std::int64_t>(config.sample_stride);

  SimTrace trace;
  trace.sample_interval = dt * static_cast<double>(stride);
  const auto samples = static_cast<std::size_t>((total_steps - warm_steps) / stride + 1);
  trace.t.reserve(samples);
  trace.n.reserve(samples);
  trace.q.reserve(samples);
  trace.p.reserve(samples);

  Rk4Stepper stepper{p, r_opt};
  auto current = [&drive = config.drive](double t) { return drive_current(t, drive); };
  LaserState s = steady_state(p, config.drive.i_bias, r_opt);

  for (std::int64_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (!std::isfinite(s.n) || !std::isfinite(s.q)) {
      std::ostringstream msg;
      msg << "non-finite state at t=" << t << " s";
      throw NumericalError(msg.str());
    }
    if (k >= warm_steps && (k - warm_steps) % stride == 0) {
      trace.t.push_back(t);
      trace.n.push_back(s.n);
      trace.q.push_back(s.q);
      trace.p.push_back(photon_to_power(s.q, p));
    }
    if (k == total_steps) break;
    s = stepper.step(s, t, dt, current);
  }
  trace.clamp_count = stepper.clamps;
  return trace;
}

}  // namespace optpump
