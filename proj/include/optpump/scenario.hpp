#ifndef OPTPUMP_SCENARIO_HPP
#define OPTPUMP_SCENARIO_HPP

#include <string>
#include <string_view>

#include "optpump/dynamics.hpp"
#include "optpump/model.hpp"

namespace optpump {

/// A complete experiment description. Files use human units (ns, ps, nm,
/// mA, GHz, mW); everything here is SI.
///
///   laser:    tau_e [ns], tau_ph [ps], gamma_conf, n_th, n_0, c_sp, gamma_q,
///             eta (optional, 0.5), lambda_out [nm], lambda_pump [nm]
///   drive:    i_bias [mA], i_pulse [mA], pulse_width [ns], rep_rate [GHz]
///   pump:     p_pump [mW] (optional, 0), eps_opt (optional, 0.1)
///   numerics: dt_ps, t_total_ns, warmup_ns, sample_stride (all optional)
struct Scenario {
  LaserParams laser;
  DriveWaveform drive;
  PumpScenario pump;
  SimConfig numerics;  // params/drive/pump mirror the fields above

  SimConfig sim_config() const;
};

/// Parses a JSON scenario document. Unknown sections or keys, missing
/// required keys, wrong types and invariant violations raise
/// ValidationError whose field() is the dotted key path.
Scenario parse_scenario(std::string_view json_text);

/// Loads `tableA1` or `experiment` from the bundled set, otherwise reads the
/// file at `path_or_name`.
Scenario load_scenario(const std::string& path_or_name);

/// Inverse of parse_scenario, in the same human units.
std::string scenario_to_json(const Scenario& scenario);

}  // namespace optpump

#endif  // OPTPUMP_SCENARIO_HPP
