// Command-line front end: scenario files in, CSV and report artifacts out.
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "optpump/analysis.hpp"
#include "optpump/csv.hpp"
#include "optpump/dynamics.hpp"
#include "optpump/isolation.hpp"
#include "optpump/parallel.hpp"
#include "optpump/scenario.hpp"

namespace {

using namespace optpump;

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

std::vector<double> parse_list_mw(const std::string& text, const char* flag) {
  std::vector<double> out;
  for (const std::string& item : csv::split(text)) {
    double v = 0.0;
    if (!csv::parse_double(csv::trim(item), &v)) {
      throw ValidationError(flag, "'" + item + "' is not a number");
    }
    out.push_back(v * 1e-3);
  }
  return out;
}

std::vector<double> parse_range_ma(const std::string& text) {
  const auto parts = csv::split(text, ':');
  double v[3] = {0.0, 0.0, 0.0};
  if (parts.size() != 3) throw ValidationError("--currents", "expected lo:hi:step in mA");
  for (int k = 0; k < 3; ++k) {
    if (!csv::parse_double(csv::trim(parts[k]), &v[k])) {
      throw ValidationError("--currents", "'" + parts[k] + "' is not a number");
    }
  }
  if (!(v[0] >= 0.0)) throw ValidationError("--currents", "lo must be >= 0");
  if (!(v[2] > 0.0)) throw ValidationError("--currents", "step must be > 0");
  if (!(v[1] > v[0])) throw ValidationError("--currents", "empty range: hi must exceed lo");
  std::vector<double> grid = linear_grid(v[0], v[1], v[2]);
  for (double& i : grid) i *= 1e-3;
  return grid;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("--out", "cannot write '" + path + "'");
  return out;
}

// Provenance goes beside the data file so the data itself stays byte-stable.
void write_sidecar(const std::string& data_path, const std::string& command,
                   const std::vector<std::string>& args) {
  nlohmann::json meta;
  meta["tool"] = "optpump";
  meta["command"] = command;
  meta["arguments"] = args;
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  meta["created_utc"] = stamp;
  std::ofstream out(data_path + ".meta.json");
  out << meta.dump(2) << '\n';
}

std::string suffixed(const std::string& path, std::size_t index) {
  const std::filesystem::path p(path);
  std::ostringstream name;
  name << p.stem().string() << ".pump" << index << p.extension().string();
  return (p.parent_path() / name.str()).string();
}

void print_metrics(std::ostream& out, const PulseMetrics& m, std::size_t clamps) {
  out << "pulse_energy_j=" << csv::format_number(m.pulse_energy) << '\n'
      << "avg_power_w=" << csv::format_number(m.avg_power) << '\n'
      << "peak_power_w=" << csv::format_number(m.peak_power) << '\n'
      << "peak_time_s=" << csv::format_number(m.peak_time) << '\n'
      << "floor_power_w=" << csv::format_number(m.floor_power) << '\n'
      << "periods=" << m.periods << '\n'
      << "clamp_count=" << clamps << '\n';
}

struct Options {
  std::string scenario = "tableA1";
  std::string out;
  std::string pump_mw;
  std::string currents = "0:30:0.25";
  double fit_lo_ma = 7.0;
  double fit_hi_ma = 25.0;
  double target_ratio = 1.10;
  std::string chain;
  double attack_w = 250.0;
  double safe_w = 140e-6;
  std::size_t jobs = 0;
};

int cmd_simulate(const Options& o, const std::vector<std::string>& args) {
  Scenario s = load_scenario(o.scenario);
  if (!o.pump_mw.empty()) {
    const auto p = parse_list_mw(o.pump_mw, "--pump-mw");
    if (p.size() != 1) throw ValidationError("--pump-mw", "simulate takes a single power");
    s.pump.p_pump = p.front();
    s.pump.validate();
  }
  const SimConfig config = s.sim_config();
  const SimTrace trace = simulate(config);
  {
    std::ofstream out = open_out(o.out);
    csv::write_trace(out, trace);
  }
  write_sidecar(o.out, "simulate", args);
  print_metrics(std::cout, pulse_metrics(trace, config.drive), trace.clamp_count);
  return 0;
}

int cmd_lcurve(const Options& o, const std::vector<std::string>& args) {
  const Scenario s = load_scenario(o.scenario);
  const std::vector<double> grid = parse_range_ma(o.currents);
  std::vector<double> pumps = o.pump_mw.empty() ? std::vector<double>{s.pump.p_pump}
                                                : parse_list_mw(o.pump_mw, "--pump-mw");
  for (double p : pumps) PumpScenario{p, s.pump.eps_opt}.validate();

  struct Row {
    LightCurrentCurve curve;
    ThresholdFit fit;
    double eta = 0.0;
  };
  const auto rows = parallel_map<Row>(pumps.size(), o.jobs, [&](std::size_t k) {
    Row r;
    const double r_opt = pump_rate({pumps[k], s.pump.eps_opt}, s.laser);
    r.curve = light_current_curve(s.laser, r_opt, grid);
    r.fit = fit_above_threshold(r.curve, o.fit_lo_ma * 1e-3, o.fit_hi_ma * 1e-3);
    r.eta = compute_dqe(r.curve, s.laser, r.fit.lo_used, r.fit.hi_used);
    return r;
  });

  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (o.out.empty()) continue;
    const std::string path = pumps.size() == 1 ? o.out : suffixed(o.out, k);
    std::ofstream out = open_out(path);
    csv::write_curve(out, rows[k].curve);
    out.close();
    write_sidecar(path, "lcurve", args);
  }
  std::cout << "p_pump_mw,eta_meas,threshold_ma,fit_lo_ma,fit_hi_ma\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    std::cout << csv::format_number(pumps[k] * 1e3) << ',' << csv::format_number(rows[k].eta)
              << ',' << csv::format_number(rows[k].fit.threshold_current * 1e3) << ','
              << csv::format_number(rows[k].fit.lo_used * 1e3) << ','
              << csv::format_number(rows[k].fit.hi_used * 1e3) << '\n';
  }
  return 0;
}

int cmd_sweep(const Options& o, const std::vector<std::string>& args) {
  const Scenario s = load_scenario(o.scenario);
  if (o.pump_mw.empty()) throw ValidationError("--pump-mw", "sweep needs a power list");
  const auto powers = parse_list_mw(o.pump_mw, "--pump-mw");
  const auto rows = pump_sweep(s.sim_config(), powers, o.jobs);
  if (o.out.empty()) {
    csv::write_sweep(std::cout, rows);
  } else {
    {
      std::ofstream out = open_out(o.out);
      csv::write_sweep(out, rows);
    }
    write_sidecar(o.out, "sweep", args);
  }
  return 0;
}

int cmd_fit(const Options& o, const std::vector<std::string>& args) {
  const Scenario s = load_scenario(o.scenario);
  double target_p = 1.6e-3;
  if (!o.pump_mw.empty()) {
    const auto p = parse_list_mw(o.pump_mw, "--pump-mw");
    if (p.size() != 1) throw ValidationError("--pump-mw", "fit takes a single power");
    target_p = p.front();
  }
  FitOptions options;
  options.jobs = o.jobs;
  const FitReport report = fit_eps_opt(s.sim_config(), target_p, o.target_ratio, options);
  if (o.out.empty()) {
    csv::write_fit_report(std::cout, report);
  } else {
    {
      std::ofstream out = open_out(o.out);
      csv::write_fit_report(out, report);
    }
    write_sidecar(o.out, "fit", args);
  }
  std::cerr << "ratio_at_fit=" << csv::format_number(report.ratio)
            << " evaluations=" << report.evaluations << '\n';
  return 0;
}

int cmd_budget(const Options& o, const std::vector<std::string>& args) {
  const IsolationChain chain = o.chain.empty() ? bundled_chain() : read_chain_csv_file(o.chain);
  const AttackBudget budget{o.attack_w, o.safe_w};
  const Verdict v = verdict(chain, budget);

  std::cout << "Isolation budget at the attack wavelength\n";
  for (const Component& c : chain.components()) {
    std::cout << "  " << c.name << ": " << csv::format_number(c.loss_db, 6) << " dB\n";
  }
  std::cout << "  attack power " << csv::format_number(budget.attack_power_w, 6) << " W ("
            << csv::format_number(to_dbm(budget.attack_power_w), 6) << " dBm), safe power "
            << csv::format_number(budget.safe_power_w, 6) << " W ("
            << csv::format_number(to_dbm(budget.safe_power_w), 6) << " dBm)\n\n";
  std::cout << format_verdict(v);
  if (!o.out.empty()) {
    {
      std::ofstream out = open_out(o.out);
      out << format_verdict(v);
    }
    write_sidecar(o.out, "budget", args);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optical-pumping attack simulator and isolation budget tool"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::string> args(argv + 1, argv + argc);

  auto add_jobs = [&](CLI::App* cmd) {
    cmd->add_option("--jobs", o.jobs, "Worker threads (0 = available parallelism)");
  };
  auto add_scenario = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", o.scenario,
                    "Scenario JSON path, or a bundled name: tableA1, experiment")
        ->capture_default_str();
  };

  auto* sim = app.add_subcommand("simulate", "Time-domain simulation to a t_s,n,q,p_w CSV");
  add_scenario(sim);
  sim->add_option("--out", o.out, "Trace CSV path")->required();
  sim->add_option("--pump-mw", o.pump_mw, "Override the scenario pump power, mW");

  auto* lcurve = app.add_subcommand("lcurve", "Light-current curve and differential efficiency");
  lcurve->alias("dqe");
  add_scenario(lcurve);
  lcurve->add_option("--out", o.out, "Curve CSV path (suffixed .pumpK for several powers)");
  lcurve->add_option("--currents", o.currents, "lo:hi:step in mA")->capture_default_str();
  lcurve->add_option("--pump-mw", o.pump_mw, "Comma-separated pump powers, mW");
  lcurve->add_option("--fit-lo", o.fit_lo_ma, "Slope window start, mA")->capture_default_str();
  lcurve->add_option("--fit-hi", o.fit_hi_ma, "Slope window end, mA")->capture_default_str();
  add_jobs(lcurve);

  auto* sweep = app.add_subcommand("sweep", "Normalized pulse energy and power vs pump power");
  add_scenario(sweep);
  sweep->add_option("--pump-mw", o.pump_mw, "Comma-separated pump powers, mW, ascending")
      ->required();
  sweep->add_option("--out", o.out, "Sweep CSV path (stdout when omitted)");
  add_jobs(sweep);

  auto* fit = app.add_subcommand("fit", "Fit the pumping efficiency to a pulse-energy ratio");
  add_scenario(fit);
  fit->add_option("--pump-mw", o.pump_mw, "Pump power of the target, mW (default 1.6)");
  fit->add_option("--target-ratio", o.target_ratio, "Target normalized pulse energy")
      ->capture_default_str();
  fit->add_option("--out", o.out, "Fit report CSV path (stdout when omitted)");
  add_jobs(fit);

  auto* budget = app.add_subcommand("budget", "Isolation chain verdict against an attack budget");
  budget->add_option("--chain", o.chain, "name,loss_db CSV (bundled chain when omitted)");
  budget->add_option("--attack-w", o.attack_w, "Maximum injectable power, W")
      ->capture_default_str();
  budget->add_option("--safe-w", o.safe_w, "Largest power without effect, W")
      ->capture_default_str();
  budget->add_option("--out", o.out, "key=value verdict file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (sim->parsed()) return cmd_simulate(o, args);
    if (lcurve->parsed()) return cmd_lcurve(o, args);
    if (sweep->parsed()) return cmd_sweep(o, args);
    if (fit->parsed()) return cmd_fit(o, args);
    if (budget->parsed()) return cmd_budget(o, args);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitValidation;
}
