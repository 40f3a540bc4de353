// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "optpump/analysis.hpp"
#include "optpump/isolation.hpp"

using namespace optpump;

namespace {

constexpr double kE = constants::kElementaryCharge;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SimConfig table_a1(double p_pump = 0.0, double eps = 0.1) {
  return SimConfig::make(LaserParams{}, DriveWaveform{}, PumpScenario{p_pump, eps}, 10);
}

Outcome isolation_arithmetic() {
  const IsolationChain chain = bundled_chain();
  const double total = chain_isolation(chain);
  const double low = required_isolation({4.0, 140e-6});
  const double high = required_isolation({250.0, 140e-6});
  const Verdict v = verdict(chain, {250.0, 140e-6});
  const bool ok = std::abs(total - 97.6) <= 0.05 && low >= 44.5 && low <= 44.6 &&
                  std::abs(high - 62.5) <= 0.1 && v.resilient && v.margin_db > 0.0;
  return {ok, fmt("total=%.4f dB required(4 W)=%.4f dB required(250 W)=%.4f dB margin=%.4f dB",
                  total, low, high, v.margin_db)};
}

Outcome dqe_round_trip() {
  const auto grid = linear_grid(0.0, 30e-3, 0.25e-3);
  bool ok = true;
  std::string detail;
  for (double eta : {0.3, 0.5, 0.8}) {
    LaserParams p;
    p.eta = eta;
    const double got = compute_dqe_above_threshold(light_current_curve(p, 0.0, grid), p, 7e-3, 25e-3);
    ok = ok && std::abs(got - eta) <= 0.02 * eta;
    detail += fmt("eta=%.1f->%.5f ", eta, got);
  }
  return {ok, detail};
}

Outcome threshold_current() {
  const LaserParams p;
  const auto grid = linear_grid(0.0, 30e-3, 0.1e-3);
  const double analytic = p.threshold_current();
  const double knee0 = fit_above_threshold(light_current_curve(p, 0.0, grid), 7e-3, 25e-3)
                           .threshold_current;
  const double r = pump_rate({1.6e-3, 0.1}, p);
  const double knee1 = fit_above_threshold(light_current_curve(p, r, grid), 7e-3, 25e-3)
                           .threshold_current;
  const double shift = knee0 - knee1;
  const double expected = kE * r;
  const bool ok = std::abs(knee0 - analytic) <= 0.05 * analytic &&
                  std::abs(shift - expected) <= 0.05 * expected;
  return {ok, fmt("knee=%.4f mA (analytic %.4f) shift=%.4e A (expected %.4e)", knee0 * 1e3,
                  analytic * 1e3, shift, expected)};
}

Outcome equivalent_current() {
  double worst = 0.0;
  for (double p_pump : {0.4e-3, 1.6e-3}) {
    const SimConfig pumped = table_a1(p_pump, 0.1);
    SimConfig shifted = table_a1();
    shifted.drive.i_bias += kE * pumped.r_opt();
    const SimTrace a = simulate(pumped);
    const SimTrace b = simulate(shifted);
    if (a.size() != b.size()) return {false, "trace lengths differ"};
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (auto [x, y] : {std::pair{a.n[i], b.n[i]}, std::pair{a.q[i], b.q[i]}, std::pair{a.p[i], b.p[i]}}) {
        const double scale = std::max(std::abs(x), std::abs(y));
        if (scale > 0.0) worst = std::max(worst, std::abs(x - y) / scale);
      }
    }
  }
  return {worst < 1e-9, fmt("max relative difference %.3e", worst)};
}

Outcome step_halving() {
  const SimConfig coarse = table_a1();
  SimConfig fine = coarse;
  fine.dt = 0.05e-12;
  fine.sample_stride = 2;
  const double a = pulse_metrics(simulate(coarse), coarse.drive).pulse_energy;
  const double b = pulse_metrics(simulate(fine), fine.drive).pulse_energy;
  const double rel = std::abs(a - b) / a;
  return {rel < 1e-3, fmt("E(0.1 ps)=%.6e J E(0.05 ps)=%.6e J rel=%.3e", a, b, rel)};
}

Outcome monotonicity() {
  std::vector<double> powers;
  for (int k = 0; k < 8; ++k) powers.push_back(1.6e-3 * k / 7.0);
  const auto rows = pump_sweep(table_a1(0.0, 0.1), powers);
  bool ok = true;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    ok = ok && rows[k].norm_pulse_energy >= rows[k - 1].norm_pulse_energy;
  }
  return {ok, fmt("ratio at 0 mW=%.6f at 1.6 mW=%.6f", rows.front().norm_pulse_energy,
                  rows.back().norm_pulse_energy)};
}

Outcome calibration() {
  const SimConfig base = table_a1();
  const FitReport r = fit_eps_opt(base, 1.6e-3, 1.10);
  const double ratio = pulse_energy_ratio(base, 1.6e-3, r.eps_opt);
  const bool ok = r.residual < 1e-3 && std::abs(ratio - 1.10) <= 1e-3;
  return {ok, fmt("eps_opt=%.6f residual=%.3e re-simulated ratio=%.6f evaluations=%zu", r.eps_opt,
                  r.residual, ratio, static_cast<std::size_t>(r.evaluations))};
}

Outcome pulse_shape() {
  const SimConfig off = table_a1();
  const SimConfig on = table_a1(1.6e-3, 0.1);
  const PulseMetrics a = pulse_metrics(simulate(off), off.drive);
  const PulseMetrics b = pulse_metrics(simulate(on), on.drive);
  const bool ok = b.peak_power > a.peak_power && b.peak_time < a.peak_time;
  return {ok, fmt("peak %.4f -> %.4f mW at %.2f -> %.2f ps", a.peak_power * 1e3, b.peak_power * 1e3,
                  a.peak_time * 1e12, b.peak_time * 1e12)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"isolation arithmetic", isolation_arithmetic},
      {"DQE round trip", dqe_round_trip},
      {"threshold current", threshold_current},
      {"equivalent current", equivalent_current},
      {"step halving", step_halving},
      {"monotonicity", monotonicity},
      {"calibration reproduction", calibration},
      {"pulse shape under pumping", pulse_shape},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str(),
                secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
