#ifndef OPTPUMP_ANALYSIS_HPP
#define OPTPUMP_ANALYSIS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "optpump/dynamics.hpp"
#include "optpump/model.hpp"

namespace optpump {

/// Steady-state output power versus dc drive current.
struct LightCurrentCurve {
  std::vector<double> currents;  // A, strictly increasing
  std::vector<double> powers;    // W
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;

  /// Abscissa where the fitted line crosses zero.
  double zero_crossing() const { return -intercept / slope; }
};

/// Ordinary least squares y = slope*x + intercept. Needs >= 2 distinct x.
LineFit least_squares_line(std::span<const double> x, std::span<const double> y);

/// Evenly spaced grid lo, lo+step, ... up to hi (inclusive within 1e-9 step).
std::vector<double> linear_grid(double lo, double hi, double step);

LightCurrentCurve light_current_curve(const LaserParams& params, double r_opt,
                                      std::span<const double> currents);

/// Differential quantum efficiency (2e/hw) dP/dI, with dP/dI the least-squares
/// slope over the curve points inside [fit_lo, fit_hi]. Needs >= 3 points.
double compute_dqe(const LightCurrentCurve& curve, const LaserParams& params, double fit_lo,
                   double fit_hi);

/// Lasing-branch line fit: points inside [fit_lo, fit_hi] that lie at least
/// `knee_margin` (relative) above the extrapolated threshold, refined until the
/// selected set stops changing.
struct ThresholdFit {
  LineFit line;
  double threshold_current = 0.0;  // A, zero crossing of `line`
  double lo_used = 0.0;            // A, lowest current kept in the fit
  double hi_used = 0.0;
};

ThresholdFit fit_above_threshold(const LightCurrentCurve& curve, double fit_lo, double fit_hi,
                                 double knee_margin = 0.1);

/// compute_dqe restricted to the lasing branch selected by fit_above_threshold.
double compute_dqe_above_threshold(const LightCurrentCurve& curve, const LaserParams& params,
                                   double fit_lo, double fit_hi);

struct PulseMetrics {
  double pulse_energy = 0.0;  // J per period, inside the pulse window
  double avg_power = 0.0;     // W over complete periods
  double peak_power = 0.0;    // W, mean of per-period peaks
  double peak_time = 0.0;     // s after period start, mean over periods
  double floor_power = 0.0;   // W, mean of per-period minima
  std::size_t periods = 0;
};

/// Fraction of the per-period peak that bounds the pulse window. At 1% the
/// window keeps the relaxation-oscillation tail (5-10% of peak at the default
/// drive) while staying well above the inter-pulse spontaneous floor.
inline constexpr double kPulseWindowFraction = 0.01;

/// Per-period pulse statistics averaged over every complete drive period in
/// the trace. The pulse window is the contiguous region around the period's
/// peak with p >= window_fraction * peak, integrated by the trapezoidal rule
/// out to the linearly interpolated threshold crossings. A window spanning
/// the whole period is integrated cyclically.
PulseMetrics pulse_metrics(const SimTrace& trace, const DriveWaveform& drive,
                           double window_fraction = kPulseWindowFraction);

struct SweepRow {
  double p_pump = 0.0;  // W
  double norm_pulse_energy = 1.0;
  double norm_avg_power = 1.0;
};

/// Pulse energy and average power at each pump power, normalized to the
/// unpumped run of the same config. Rows follow input order. `jobs == 0`
/// means hardware concurrency.
std::vector<SweepRow> pump_sweep(const SimConfig& base, std::span<const double> powers,
                                 std::size_t jobs = 0);

/// Pulse-energy ratio pumped/unpumped for `base` at the given pump power and
/// efficiency.
double pulse_energy_ratio(const SimConfig& base, double p_pump, double eps_opt);

struct FitReport {
  double eps_opt = 0.0;
  double ratio = 0.0;      // re-simulated ratio at eps_opt
  double residual = 0.0;   // |ratio - target|
  double bracket_lo = 0.0; // eps bracket the search ran over
  double bracket_hi = 0.0;
  std::size_t evaluations = 0;
};

struct FitOptions {
  double eps_min = 1e-6;
  double eps_max = 1.0;
  std::size_t grid_points = 8;   // log grid used to verify monotonicity and bracket
  double tolerance = 1e-5;       // target |ratio - target|
  std::size_t max_iterations = 200;
  std::size_t jobs = 0;
};

/// Golden-section search over log10(eps_opt) for the pumping efficiency that
/// reproduces `target_ratio` at `target_p_pump`. Throws NumericalError when
/// the target exceeds the ratio reached at eps_max or the ratio is not
/// monotone over the bracketing grid.
FitReport fit_eps_opt(const SimConfig& base, double target_p_pump, double target_ratio,
                      const FitOptions& options = {});

}  // namespace optpump

#endif  // OPTPUMP_ANALYSIS_HPP
