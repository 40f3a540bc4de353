#include "optpump/scenario.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <set>

#include <json.hpp>

#include "bundled_data.hpp"

namespace optpump {

namespace {

using nlohmann::json;

class Section {
 public:
  Section(const json& root, const std::string& name, bool required,
          std::set<std::string> allowed)
      : name_(name) {
    if (!root.contains(name)) {
      if (required) throw ValidationError(name, "missing required section");
      return;
    }
    node_ = &root.at(name);
    if (!node_->is_object()) throw ValidationError(name, "must be an object");
    for (const auto& [key, value] : node_->items()) {
      if (!allowed.count(key)) throw ValidationError(name + "." + key, "unknown key");
    }
  }

  double number(const std::string& key, double scale) const {
    const json* v = find(key);
    if (!v) throw ValidationError(path(key), "missing required field");
    return as_number(key, *v) * scale;
  }

  double number_or(const std::string& key, double scale, double fallback_si) const {
    const json* v = find(key);
    return v ? as_number(key, *v) * scale : fallback_si;
  }

  bool has(const std::string& key) const { return find(key) != nullptr; }

  std::string path(const std::string& key) const { return name_ + "." + key; }

 private:
  const json* find(const std::string& key) const {
    if (!node_) return nullptr;
    auto it = node_->find(key);
    return it == node_->end() ? nullptr : &*it;
  }

  double as_number(const std::string& key, const json& v) const {
    if (!v.is_number()) throw ValidationError(path(key), "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ValidationError(path(key), "must be finite");
    return x;
  }

  std::string name_;
  const json* node_ = nullptr;
};

// Re-raise a struct-level invariant failure under its dotted file path.
template <class Fn>
void checked(const std::string& section, Fn&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    throw ValidationError(section + "." + e.field(), e.reason());
  }
}

}  // namespace

SimConfig Scenario::sim_config() const {
  SimConfig c = numerics;
  c.params = laser;
  c.drive = drive;
  c.pump = pump;
  return c;
}

Scenario parse_scenario(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError("scenario", std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ValidationError("scenario", "top level must be an object");
  for (const auto& [key, value] : root.items()) {
    if (key != "laser" && key != "drive" && key != "pump" && key != "numerics") {
      throw ValidationError(key, "unknown section");
    }
  }

  Scenario s;
  const Section laser(root, "laser", true,
                      {"tau_e", "tau_ph", "gamma_conf", "n_th", "n_0", "c_sp", "gamma_q", "eta",
                       "lambda_out", "lambda_pump"});
  s.laser.tau_e = laser.number("tau_e", 1e-9);
  s.laser.tau_ph = laser.number("tau_ph", 1e-12);
  s.laser.gamma_conf = laser.number("gamma_conf", 1.0);
  s.laser.n_th = laser.number("n_th", 1.0);
  s.laser.n_0 = laser.number("n_0", 1.0);
  s.laser.c_sp = laser.number("c_sp", 1.0);
  s.laser.gamma_q = laser.number("gamma_q", 1.0);
  s.laser.eta = laser.number_or("eta", 1.0, 0.5);
  for (const char* key : {"lambda_out", "lambda_pump"}) {
    if (!(laser.number(key, 1.0) > 0.0)) throw ValidationError(laser.path(key), "must be > 0");
  }
  s.laser.e_photon_out = photon_energy(laser.number("lambda_out", 1e-9));
  s.laser.e_photon_pump = photon_energy(laser.number("lambda_pump", 1e-9));
  try {
    s.laser.validate();
  } catch (const ValidationError& e) {
    // Photon energies are stored, wavelengths are what the file holds.
    if (e.field() == "e_photon_out") throw ValidationError(laser.path("lambda_out"), e.reason());
    if (e.field() == "e_photon_pump") {
      throw ValidationError(laser.path("lambda_pump"), "must be shorter than lambda_out");
    }
    throw ValidationError(laser.path(e.field()), e.reason());
  }

  const Section drive(root, "drive", true, {"i_bias", "i_pulse", "pulse_width", "rep_rate"});
  s.drive.i_bias = drive.number("i_bias", 1e-3);
  s.drive.i_pulse = drive.number("i_pulse", 1e-3);
  s.drive.pulse_width = drive.number("pulse_width", 1e-9);
  s.drive.rep_rate = drive.number("rep_rate", 1e9);
  checked("drive", [&] { s.drive.validate(); });

  const Section pump(root, "pump", false, {"p_pump", "eps_opt"});
  s.pump.p_pump = pump.number_or("p_pump", 1e-3, 0.0);
  s.pump.eps_opt = pump.number_or("eps_opt", 1.0, 0.1);
  checked("pump", [&] { s.pump.validate(); });

  const Section numerics(root, "numerics", false,
                         {"dt_ps", "t_total_ns", "warmup_ns", "sample_stride"});
  SimConfig defaults = SimConfig::make(s.laser, s.drive, s.pump);
  s.numerics = defaults;
  s.numerics.dt = numerics.number_or("dt_ps", 1e-12, defaults.dt);
  s.numerics.warmup = numerics.number_or("warmup_ns", 1e-9, defaults.warmup);
  if (numerics.has("warmup_ns") && !numerics.has("t_total_ns")) {
    s.numerics.t_total = s.numerics.warmup + (defaults.t_total - defaults.warmup);
  } else {
    s.numerics.t_total = numerics.number_or("t_total_ns", 1e-9, defaults.t_total);
  }
  if (numerics.has("sample_stride")) {
    const double stride = numerics.number("sample_stride", 1.0);
    if (!(stride >= 1.0 && stride == std::floor(stride) && stride < 1e9)) {
      throw ValidationError(numerics.path("sample_stride"), "must be a positive integer");
    }
    s.numerics.sample_stride = static_cast<std::size_t>(stride);
  }
  const SimConfig config = s.sim_config();
  try {
    config.validate();
  } catch (const ValidationError& e) {
    static const std::map<std::string, std::string> names = {{"dt", "dt_ps"},
                                                             {"t_total", "t_total_ns"},
                                                             {"warmup", "warmup_ns"},
                                                             {"sample_stride", "sample_stride"}};
    auto it = names.find(e.field());
    if (it == names.end()) throw;
    throw ValidationError(numerics.path(it->second), e.reason());
  }
  return s;
}

Scenario load_scenario(const std::string& path_or_name) {
  if (path_or_name == "tableA1") return parse_scenario(bundled::kScenarioTableA1);
  if (path_or_name == "experiment") return parse_scenario(bundled::kScenarioExperiment);
  std::ifstream in(path_or_name);
  if (!in) throw ValidationError("scenario", "cannot open '" + path_or_name + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_scenario(text);
}

std::string scenario_to_json(const Scenario& s) {
  const double hc = constants::kPlanck * constants::kSpeedOfLight;
  json root;
  root["laser"] = {{"tau_e", s.laser.tau_e / 1e-9},
                   {"tau_ph", s.laser.tau_ph / 1e-12},
                   {"gamma_conf", s.laser.gamma_conf},
                   {"n_th", s.laser.n_th},
                   {"n_0", s.laser.n_0},
                   {"c_sp", s.laser.c_sp},
                   {"gamma_q", s.laser.gamma_q},
                   {"eta", s.laser.eta},
                   {"lambda_out", hc / s.laser.e_photon_out / 1e-9},
                   {"lambda_pump", hc / s.laser.e_photon_pump / 1e-9}};
  root["drive"] = {{"i_bias", s.drive.i_bias / 1e-3},
                   {"i_pulse", s.drive.i_pulse / 1e-3},
                   {"pulse_width", s.drive.pulse_width / 1e-9},
                   {"rep_rate", s.drive.rep_rate / 1e9}};
  root["pump"] = {{"p_pump", s.pump.p_pump / 1e-3}, {"eps_opt", s.pump.eps_opt}};
  root["numerics"] = {{"dt_ps", s.numerics.dt / 1e-12},
                      {"t_total_ns", s.numerics.t_total / 1e-9},
                      {"warmup_ns", s.numerics.warmup / 1e-9},
                      {"sample_stride", s.numerics.sample_stride}};
  return root.dump(2) + "\n";
}

}  // namespace optpump
