#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "optpump/analysis.hpp"
#include "optpump/dynamics.hpp"

using namespace optpump;

namespace {

constexpr double kE = constants::kElementaryCharge;

// Independent oracle: explicit midpoint integration of the rate equations at
// constant current for `duration`, from the empty laser.
LaserState relax_by_midpoint(const LaserParams& p, double i_dc, double r_opt, double duration) {
  const double dt = p.tau_ph / 20.0;
  LaserState s{0.0, 0.0};
  const auto steps = static_cast<long>(duration / dt);
  for (long k = 0; k < steps; ++k) {
    const Derivatives a = derivatives(s, i_dc, r_opt, p);
    const LaserState mid{s.n + 0.5 * dt * a.dn, std::max(0.0, s.q + 0.5 * dt * a.dq)};
    const Derivatives b = derivatives(mid, i_dc, r_opt, p);
    s = {s.n + dt * b.dn, std::max(0.0, s.q + dt * b.dq)};
  }
  return s;
}

SimConfig table_a1(double p_pump = 0.0, double eps = 0.1) {
  return SimConfig::make(LaserParams{}, DriveWaveform{}, PumpScenario{p_pump, eps}, 10);
}

double energy_of(const SimConfig& c) { return pulse_metrics(simulate(c), c.drive).pulse_energy; }

}  // namespace

TEST_CASE("drive current") {
  DriveWaveform d{6e-3, 20e-3, 0.2e-9, 2.5e9};
  CHECK(drive_current(0.0, d) == doctest::Approx(26e-3));
  CHECK(drive_current(0.1e-9, d) == doctest::Approx(26e-3));
  CHECK(drive_current(0.3e-9, d) == doctest::Approx(6e-3));
  CHECK(drive_current(0.45e-9, d) == doctest::Approx(26e-3));
  d.i_pulse = 0.0;
  for (double t : {0.0, 0.05e-9, 0.3e-9, 7.77e-9}) CHECK(drive_current(t, d) == 6e-3);
}

TEST_CASE("steady state") {
  const LaserParams p;

  SUBCASE("dark fixed point") {
    LaserParams dark = p;
    dark.c_sp = 0.0;
    const LaserState s = steady_state(dark, 0.0, 0.0);
    CHECK(s.n == 0.0);
    CHECK(s.q == 0.0);
  }

  SUBCASE("residual below tolerance across drive levels") {
    for (double i : {0.5e-3, 5e-3, 10e-3, 10.41e-3, 11e-3, 20e-3, 60e-3}) {
      for (double r : {0.0, 1e15}) {
        const LaserState s = steady_state(p, i, r);
        const Derivatives d = derivatives(s, i, r, p);
        CHECK(std::abs(d.dn) <= 1e-6 * s.n / p.tau_e);
        CHECK(std::abs(d.dq) <= 1e-6 * s.n / p.tau_e);
        CHECK(s.q >= 0.0);
      }
    }
  }

  SUBCASE("below threshold without spontaneous emission") {
    LaserParams quiet = p;
    quiet.c_sp = 0.0;
    const double i = 5e-3;
    const LaserState s = steady_state(quiet, i, 0.0);
    CHECK(s.n == doctest::Approx(i * quiet.tau_e / kE).epsilon(1e-12));
    CHECK(s.q == 0.0);
    const LaserState oracle = relax_by_midpoint(quiet, i, 0.0, 30.0 * quiet.tau_e);
    CHECK(s.n == doctest::Approx(oracle.n).epsilon(1e-6));
  }

  SUBCASE("above threshold closed form and integration oracle") {
    const double i = 20e-3;
    for (double r : {0.0, 1.055e15}) {
      const LaserState s = steady_state(p, i, r);
      const double slope = p.eta * p.e_photon_out / (2.0 * kE);
      const double closed = slope * (i - p.threshold_current() + kE * r);
      CHECK(photon_to_power(s.q, p) == doctest::Approx(closed).epsilon(0.02));
      const LaserState oracle = relax_by_midpoint(p, i, r, 40.0 * p.tau_e);
      CHECK(s.q == doctest::Approx(oracle.q).epsilon(1e-5));
      CHECK(s.n == doctest::Approx(oracle.n).epsilon(1e-6));
    }
  }

  SUBCASE("falls back to time integration when elimination does not apply") {
    LaserParams odd = p;
    odd.c_sp = 0.5;  // exceeds the confinement factor
    const LaserState s = steady_state(odd, 15e-3, 0.0);
    const Derivatives d = derivatives(s, 15e-3, 0.0, odd);
    CHECK(std::abs(d.dn) <= 1e-6 * s.n / odd.tau_e);
    CHECK(std::abs(d.dq) <= 1e-6 * s.n / odd.tau_e);
  }

  SUBCASE("rejects negative inputs") {
    CHECK_THROWS_AS(steady_state(p, -1e-3, 0.0), ValidationError);
    CHECK_THROWS_AS(steady_state(p, 1e-3, -1.0), ValidationError);
  }
}

TEST_CASE("simulation config") {
  SimConfig c = table_a1();
  CHECK(c.warmup == doctest::Approx(10e-9));  // 10 tau_e beats 20 periods of 0.4 ns
  CHECK(c.t_total == doctest::Approx(14e-9));
  CHECK_NOTHROW(c.validate());
  c.dt = 0.5e-12;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("dt"), ValidationError);
  c = table_a1();
  c.t_total = c.warmup;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = table_a1();
  c.sample_stride = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("trace sampling") {
  SimConfig c = table_a1();
  c.sample_stride = 7;
  const SimTrace tr = simulate(c);
  REQUIRE(tr.size() > 10);
  CHECK(tr.t.front() == doctest::Approx(c.warmup));
  CHECK(tr.sample_interval == doctest::Approx(0.7e-12));
  for (std::size_t i = 1; i < tr.size(); ++i) {
    CHECK(tr.t[i] > tr.t[i - 1]);
    CHECK(tr.t[i] - tr.t[i - 1] == doctest::Approx(0.7e-12).epsilon(1e-6));
  }
  CHECK(tr.n.size() == tr.size());
  CHECK(tr.q.size() == tr.size());
  CHECK(tr.p.size() == tr.size());
}

TEST_CASE("gain-switched pulsing at the default operating point") {
  const SimConfig c = table_a1();
  const SimTrace tr = simulate(c);
  CHECK(tr.clamp_count == 0);
  CHECK(std::all_of(tr.n.begin(), tr.n.end(), [](double v) { return v >= 0.0; }));
  CHECK(std::all_of(tr.q.begin(), tr.q.end(), [](double v) { return v >= 0.0; }));
  const PulseMetrics m = pulse_metrics(tr, c.drive);
  CHECK(m.periods == 10);
  CHECK(m.peak_power > 100.0 * m.floor_power);

  const SimConfig pumped = table_a1(1.6e-3, 0.1);
  CHECK(energy_of(pumped) > m.pulse_energy);
}

TEST_CASE("below threshold without modulation settles to the steady state") {
  SimConfig c = table_a1();
  c.drive.i_pulse = 0.0;
  c.drive.i_bias = 5e-3;
  const SimTrace tr = simulate(c);
  const std::size_t half = tr.size() / 2;
  const auto tail = std::span(tr.p).subspan(half);
  const double mean = std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(tail.size());
  double var = 0.0;
  for (double v : tail) var += (v - mean) * (v - mean);
  const double rsd = std::sqrt(var / static_cast<double>(tail.size())) / mean;
  CHECK(rsd < 0.01);
  const LaserState s = steady_state(c.params, 5e-3, 0.0);
  CHECK(mean == doctest::Approx(photon_to_power(s.q, c.params)).epsilon(1e-6));
}

TEST_CASE("determinism") {
  const SimConfig c = table_a1(0.8e-3, 0.3);
  const SimTrace a = simulate(c);
  const SimTrace b = simulate(c);
  CHECK(a.t == b.t);
  CHECK(a.n == b.n);
  CHECK(a.q == b.q);
  CHECK(a.p == b.p);
}

TEST_CASE("pumping is equivalent to extra dc current") {
  for (double p_pump : {0.4e-3, 1.6e-3}) {
    const SimConfig pumped = table_a1(p_pump, 0.5);
    SimConfig shifted = table_a1();
    shifted.drive.i_bias += kE * pumped.r_opt();
    const SimTrace a = simulate(pumped);
    const SimTrace b = simulate(shifted);
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      worst = std::max(worst, std::abs(a.n[i] - b.n[i]) / std::max(a.n[i], b.n[i]));
      worst = std::max(worst, std::abs(a.q[i] - b.q[i]) / std::max(a.q[i], b.q[i]));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("pulse energy is nondecreasing in the pumping rate") {
  const LaserParams p;
  double prev = 0.0;
  for (int k = 0; k < 8; ++k) {
    // r_opt from 0 to 1.1e15 1/s
    const double r_target = 1.1e15 * k / 7.0;
    const double p_pump = r_target * p.e_photon_pump / 0.1;
    const double e = energy_of(table_a1(p_pump, 0.1));
    CHECK(e >= prev);
    prev = e;
  }
}

TEST_CASE("step halving changes pulse energy by less than 0.1%") {
  const SimConfig coarse = table_a1();
  SimConfig fine = coarse;
  fine.dt = 0.05e-12;
  fine.sample_stride = 2;
  const double a = energy_of(coarse);
  const double b = energy_of(fine);
  CHECK(std::abs(a - b) / a < 1e-3);
}

TEST_CASE("blow-up is reported with its time") {
  SimConfig c = table_a1();
  c.drive.i_pulse = 1e305;
  CHECK_THROWS_WITH_AS(simulate(c), doctest::Contains("t="), NumericalError);
}
