#include "optpump/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "optpump/golden_section.hpp"
#include "optpump/parallel.hpp"

namespace optpump {

LineFit least_squares_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("fit", "x and y lengths differ");
  if (x.size() < 2) throw ValidationError("fit", "need at least two points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("fit", "abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = x.size();
  return fit;
}

std::vector<double> linear_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw ValidationError("step", "must be > 0");
  if (!(hi >= lo)) throw ValidationError("range", "hi must be >= lo");
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  grid.reserve(count);
  for (std::size_t k = 0; k < count; ++k) grid.push_back(lo + static_cast<double>(k) * step);
  return grid;
}

LightCurrentCurve light_current_curve(const LaserParams& params, double r_opt,
                                      std::span<const double> currents) {
  params.validate();
  for (std::size_t k = 0; k < currents.size(); ++k) {
    if (!(currents[k] >= 0.0)) throw ValidationError("currents", "must be >= 0");
    if (k > 0 && !(currents[k] > currents[k - 1])) {
      throw ValidationError("currents", "must be strictly increasing");
    }
  }
  LightCurrentCurve curve;
  curve.currents.assign(currents.begin(), currents.end());
  curve.powers.reserve(currents.size());
  for (double i : currents) {
    curve.powers.push_back(photon_to_power(steady_state(params, i, r_opt).q, params));
  }
  return curve;
}

namespace {

struct Window {
  std::vector<double> x;
  std::vector<double> y;
};

Window select(const LightCurrentCurve& curve, double lo, double hi) {
  if (curve.currents.size() != curve.powers.size()) {
    throw ValidationError("curve", "currents and powers lengths differ");
  }
  Window w;
  for (std::size_t k = 0; k < curve.currents.size(); ++k) {
    if (curve.currents[k] >= lo && curve.currents[k] <= hi) {
      w.x.push_back(curve.currents[k]);
      w.y.push_back(curve.powers[k]);
    }
  }
  return w;
}

double slope_to_dqe(double slope, const LaserParams& params) {
  return 2.0 * constants::kElementaryCharge / params.e_photon_out * slope;
}

}  // namespace

double compute_dqe(const LightCurrentCurve& curve, const LaserParams& params, double fit_lo,
                   double fit_hi) {
  const Window w = select(curve, fit_lo, fit_hi);
  if (w.x.size() < 3) {
    std::ostringstream msg;
    msg << "fit window [" << fit_lo << ", " << fit_hi << "] A holds " << w.x.size()
        << " points, need at least 3";
    throw ValidationError("fit_window", msg.str());
  }
  return slope_to_dqe(least_squares_line(w.x, w.y).slope, params);
}

ThresholdFit fit_above_threshold(const LightCurrentCurve& curve, double fit_lo, double fit_hi,
                                 double knee_margin) {
  const Window all = select(curve, fit_lo, fit_hi);
  if (all.x.size() < 3) {
    throw ValidationError("fit_window", "need at least 3 points inside the window");
  }

  auto fit_from = [&](std::size_t first) {
    return least_squares_line(std::span(all.x).subspan(first), std::span(all.y).subspan(first));
  };

  // Seed from the upper half, which sits on the lasing branch whenever the
  // window reaches well past threshold.
  std::size_t first = std::min(all.x.size() / 2, all.x.size() - 3);
  LineFit line = fit_from(first);
  for (int iteration = 0; iteration < 64; ++iteration) {
    if (!(line.slope > 0.0)) throw NumericalError("no lasing branch inside the fit window");
    const double cut = line.zero_crossing() * (1.0 + knee_margin);
    std::size_t next = 0;
    while (next < all.x.size() && all.x[next] < cut) ++next;
    if (all.x.size() - next < 3) {
      throw NumericalError("fewer than 3 lasing-branch points inside the fit window");
    }
    if (next == first) break;
    first = next;
    line = fit_from(first);
  }

  ThresholdFit out;
  out.line = line;
  out.threshold_current = line.zero_crossing();
  out.lo_used = all.x[first];
  out.hi_used = all.x.back();
  return out;
}

double compute_dqe_above_threshold(const LightCurrentCurve& curve, const LaserParams& params,
                                   double fit_lo, double fit_hi) {
  const ThresholdFit fit = fit_above_threshold(curve, fit_lo, fit_hi);
  return compute_dqe(curve, params, fit.lo_used, fit.hi_used);
}

namespace {

// Trapezoid between the crossing of `cut` on the segment (outside -> inside)
// and the inside sample.
double edge_area(double outside, double inside, double cut, double dt) {
  if (!(inside > outside)) return 0.0;
  const double frac = (inside - cut) / (inside - outside);
  return 0.5 * (cut + inside) * frac * dt;
}

}  // namespace

PulseMetrics pulse_metrics(const SimTrace& trace, const DriveWaveform& drive,
                           double window_fraction) {
  drive.validate();
  const std::size_t n = trace.size();
  if (n < 2 || trace.p.size() != n) throw ValidationError("trace", "too short or ragged");
  const double dt = trace.sample_interval > 0.0 ? trace.sample_interval : trace.t[1] - trace.t[0];
  const double period = drive.period();
  // Sample times sit on a grid; the guard keeps exact period starts from
  // rounding into the previous period.
  const double guard = std::min(1e-6, 0.25 * dt * drive.rep_rate);
  auto period_of = [&](double t) {
    return static_cast<long long>(std::floor(t * drive.rep_rate + guard));
  };

  PulseMetrics m;
  double sum_p = 0.0;
  std::size_t count_p = 0;
  double sum_energy = 0.0;
  double sum_peak = 0.0;
  double sum_peak_time = 0.0;
  double sum_floor = 0.0;
  bool any_light = false;

  std::size_t begin = 0;
  while (begin < n) {
    const long long k = period_of(trace.t[begin]);
    std::size_t end = begin;
    while (end < n && period_of(trace.t[end]) == k) ++end;
    const double start = static_cast<double>(k) * period;
    const bool starts_on_time = trace.t[begin] - start < dt;
    const bool closed = end < n;
    if (starts_on_time && closed) {
      const auto p = std::span(trace.p).subspan(begin, end - begin);
      const auto peak_it = std::max_element(p.begin(), p.end());
      const auto peak_idx = static_cast<std::size_t>(peak_it - p.begin());
      const double peak = *peak_it;
      const double cut = window_fraction * peak;
      std::size_t a = peak_idx;
      std::size_t b = peak_idx;
      while (a > 0 && p[a - 1] >= cut) --a;
      while (b + 1 < p.size() && p[b + 1] >= cut) ++b;

      double energy = 0.0;
      if (a == 0 && b + 1 == p.size()) {
        for (double v : p) energy += v * dt;
      } else {
        for (std::size_t i = a; i < b; ++i) energy += 0.5 * (p[i] + p[i + 1]) * dt;
        // Partial intervals out to the interpolated threshold crossings, so the
        // window edge moves continuously with the waveform.
        if (a > 0) energy += edge_area(p[a - 1], p[a], cut, dt);
        if (b + 1 < p.size()) energy += edge_area(p[b + 1], p[b], cut, dt);
      }
      for (double v : p) sum_p += v;
      count_p += p.size();
      sum_energy += energy;
      sum_peak += peak;
      sum_peak_time += trace.t[begin + peak_idx] - start;
      sum_floor += *std::min_element(p.begin(), p.end());
      any_light = any_light || peak > 0.0;
      ++m.periods;
    }
    begin = end;
  }

  if (m.periods < 5) {
    std::ostringstream msg;
    msg << "trace holds " << m.periods << " complete drive periods, need at least 5";
    throw ValidationError("trace", msg.str());
  }
  if (!any_light) throw NumericalError("no pulse detected: output is zero in every period");

  const auto periods = static_cast<double>(m.periods);
  m.avg_power = sum_p / static_cast<double>(count_p);
  m.pulse_energy = sum_energy / periods;
  m.peak_power = sum_peak / periods;
  m.peak_time = sum_peak_time / periods;
  m.floor_power = sum_floor / periods;
  return m;
}

namespace {

PulseMetrics run_metrics(SimConfig config, double p_pump, double eps_opt) {
  config.pump.p_pump = p_pump;
  config.pump.eps_opt = eps_opt;
  return pulse_metrics(simulate(config), config.drive);
}

}  // namespace

std::vector<SweepRow> pump_sweep(const SimConfig& base, std::span<const double> powers,
                                 std::size_t jobs) {
  base.validate();
  for (std::size_t k = 0; k < powers.size(); ++k) {
    if (!(powers[k] >= 0.0)) throw ValidationError("powers", "must be >= 0");
    if (k > 0 && powers[k] < powers[k - 1]) {
      throw ValidationError("powers", "must be sorted ascending");
    }
  }
  // Index 0 is the unpumped reference; the rest follow input order.
  const auto metrics = parallel_map<PulseMetrics>(powers.size() + 1, jobs, [&](std::size_t i) {
    return run_metrics(base, i == 0 ? 0.0 : powers[i - 1], base.pump.eps_opt);
  });
  const PulseMetrics& ref = metrics.front();
  std::vector<SweepRow> rows;
  rows.reserve(powers.size());
  for (std::size_t k = 0; k < powers.size(); ++k) {
    const PulseMetrics& m = metrics[k + 1];
    rows.push_back({powers[k], m.pulse_energy / ref.pulse_energy, m.avg_power / ref.avg_power});
  }
  return rows;
}

double pulse_energy_ratio(const SimConfig& base, double p_pump, double eps_opt) {
  const PulseMetrics ref = run_metrics(base, 0.0, eps_opt);
  return run_metrics(base, p_pump, eps_opt).pulse_energy / ref.pulse_energy;
}

FitReport fit_eps_opt(const SimConfig& base, double target_p_pump, double target_ratio,
                      const FitOptions& options) {
  base.validate();
  if (!(target_ratio > 1.0)) throw ValidationError("target_ratio", "must exceed 1");
  if (!(target_p_pump > 0.0)) throw ValidationError("target_p_pump", "must be > 0");
  if (!(options.eps_min > 0.0 && options.eps_min < options.eps_max && options.eps_max <= 1.0)) {
    throw ValidationError("eps_range", "need 0 < eps_min < eps_max <= 1");
  }
  if (options.grid_points < 2) throw ValidationError("grid_points", "need at least 2");

  const double reference = run_metrics(base, 0.0, base.pump.eps_opt).pulse_energy;
  std::size_t evaluations = 1;
  auto ratio_at = [&](double eps) {
    return run_metrics(base, target_p_pump, eps).pulse_energy / reference;
  };

  const double log_lo = std::log10(options.eps_min);
  const double log_hi = std::log10(options.eps_max);
  const std::size_t g = options.grid_points;
  std::vector<double> grid(g);
  for (std::size_t k = 0; k < g; ++k) {
    grid[k] = k + 1 == g ? log_hi
                         : log_lo + (log_hi - log_lo) * static_cast<double>(k) /
                                        static_cast<double>(g - 1);
  }
  const auto ratios = parallel_map<double>(g, options.jobs, [&](std::size_t k) {
    return ratio_at(std::pow(10.0, grid[k]));
  });
  evaluations += g;

  for (std::size_t k = 1; k < g; ++k) {
    if (ratios[k] < ratios[k - 1]) {
      std::ostringstream msg;
      msg << "pulse-energy ratio is not monotone in eps_opt: " << ratios[k - 1] << " at eps="
          << std::pow(10.0, grid[k - 1]) << " then " << ratios[k] << " at eps="
          << std::pow(10.0, grid[k]);
      throw NumericalError(msg.str());
    }
  }
  if (ratios.back() < target_ratio) {
    std::ostringstream msg;
    msg << "target ratio " << target_ratio << " unreachable: eps_opt=" << options.eps_max
        << " gives " << ratios.back();
    throw NumericalError(msg.str());
  }
  if (ratios.front() > target_ratio) {
    std::ostringstream msg;
    msg << "target ratio " << target_ratio << " lies below the ratio " << ratios.front()
        << " at eps_opt=" << options.eps_min;
    throw NumericalError(msg.str());
  }

  std::size_t j = 0;
  while (j + 2 < g && ratios[j + 1] < target_ratio) ++j;
  const double lo = grid[j];
  const double hi = grid[j + 1];

  FitReport report;
  report.bracket_lo = std::pow(10.0, lo);
  report.bracket_hi = std::pow(10.0, hi);
  double best_log = std::abs(ratios[j] - target_ratio) <= std::abs(ratios[j + 1] - target_ratio)
                        ? lo
                        : hi;
  double best_residual = std::min(std::abs(ratios[j] - target_ratio),
                                  std::abs(ratios[j + 1] - target_ratio));
  if (best_residual > options.tolerance) {
    const ScalarMinimum found = golden_section_minimize(
        [&](double log_eps) { return std::abs(ratio_at(std::pow(10.0, log_eps)) - target_ratio); },
        lo, hi, 1e-12, options.tolerance, options.max_iterations);
    evaluations += found.evaluations;
    if (found.fx < best_residual) {
      best_log = found.x;
      best_residual = found.fx;
    }
  }
  report.eps_opt = std::pow(10.0, best_log);
  report.ratio = ratio_at(report.eps_opt);
  ++evaluations;
  report.residual = std::abs(report.ratio - target_ratio);
  report.evaluations = evaluations;
  if (!(report.residual < 1e-3)) {
    std::ostringstream msg;
    msg << "fit did not converge: residual " << report.residual << " at eps_opt="
        << report.eps_opt;
    throw NumericalError(msg.str());
  }
  return report;
}

}  // namespace optpump
