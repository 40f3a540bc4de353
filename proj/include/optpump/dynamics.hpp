#ifndef OPTPUMP_DYNAMICS_HPP
#define OPTPUMP_DYNAMICS_HPP

#include <cstddef>
#include <vector>

#include "optpump/model.hpp"

namespace optpump {

/// Numerical controls for one time-domain run. Build with `make()` to get
/// the default step and warmup.
struct SimConfig {
  LaserParams params;
  DriveWaveform drive;
  PumpScenario pump;
  double t_total = 0.0;  // s, end of integration
  double dt = 0.1e-12;   // s
  double warmup = 0.0;   // s, integrated but not recorded
  std::size_t sample_stride = 1;

  /// Default numerics: dt = 0.1 ps, warmup = max(20 periods, 10 tau_e)
  /// rounded up to whole periods, then `periods` recorded drive periods.
  static SimConfig make(const LaserParams& params, const DriveWaveform& drive,
                        const PumpScenario& pump, std::size_t periods = 20);

  void validate() const;
  double r_opt() const { return pump_rate(pump, params); }
};

/// Uniformly sampled output of `simulate`.
struct SimTrace {
  std::vector<double> t;  // s
  std::vector<double> n;
  std::vector<double> q;
  std::vector<double> p;  // W
  double sample_interval = 0.0;  // s
  std::size_t clamp_count = 0;   // negative excursions clamped to zero

  std::size_t size() const { return t.size(); }
};

/// Instantaneous drive current; the pulse occupies the start of each period.
inline double drive_current(double t, const DriveWaveform& drive) {
  const double cycles = t * drive.rep_rate;
  const double phase = cycles - std::floor(cycles);
  return phase < drive.pulse_width * drive.rep_rate ? drive.i_bias + drive.i_pulse
                                                    : drive.i_bias;
}

/// Equilibrium of the rate equations under dc current `i_dc` and pumping
/// rate `r_opt`. Solved by bisection on the photon number after eliminating
/// N; falls back to integrating the system in time. Throws NumericalError
/// with the residual when neither route converges.
LaserState steady_state(const LaserParams& params, double i_dc, double r_opt);

/// Fixed-step classical RK4 integration over [0, t_total], starting from the
/// steady state at the bias current. Samples from `warmup` onward every
/// `sample_stride` steps. Throws NumericalError on non-finite state.
SimTrace simulate(const SimConfig& config);

}  // namespace optpump

#endif  // OPTPUMP_DYNAMICS_HPP
