#include "optpump/model.hpp"

#include <cmath>

namespace optpump {

double photon_energy(double wavelength_m) {
  if (!(wavelength_m > 0.0)) {
    throw ValidationError("wavelength", "must be positive");
  }
  return constants::kPlanck * constants::kSpeedOfLight / wavelength_m;
}

namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw ValidationError(field, what);
}

}  // namespace

void LaserParams::validate() const {
  require(std::isfinite(tau_e) && tau_e > 0.0, "tau_e", "must be > 0");
  require(std::isfinite(tau_ph) && tau_ph > 0.0, "tau_ph", "must be > 0");
  require(gamma_conf > 0.0 && gamma_conf <= 1.0, "gamma_conf", "must lie in (0, 1]");
  require(std::isfinite(n_0) && n_0 >= 0.0, "n_0", "must be >= 0");
  require(std::isfinite(n_th) && n_th > n_0, "n_th", "must exceed n_0");
  require(c_sp >= 0.0 && c_sp <= 1.0, "c_sp", "must lie in [0, 1]");
  require(std::isfinite(gamma_q) && gamma_q >= 0.0, "gamma_q", "must be >= 0");
  require(eta > 0.0 && eta <= 1.0, "eta", "must lie in (0, 1]");
  require(std::isfinite(e_photon_out) && e_photon_out > 0.0, "e_photon_out", "must be > 0");
  require(std::isfinite(e_photon_pump) && e_photon_pump > e_photon_out, "e_photon_pump",
          "must exceed e_photon_out (pump wavelength shorter than emission)");
}

void DriveWaveform::validate() const {
  require(std::isfinite(i_bias) && i_bias >= 0.0, "i_bias", "must be >= 0");
  require(std::isfinite(i_pulse) && i_pulse >= 0.0, "i_pulse", "must be >= 0");
  require(std::isfinite(rep_rate) && rep_rate > 0.0, "rep_rate", "must be > 0");
  require(std::isfinite(pulse_width) && pulse_width >= 0.0, "pulse_width", "must be >= 0");
  require(pulse_width * rep_rate < 1.0, "pulse_width", "duty cycle must be below unity");
}

void PumpScenario::validate() const {
  require(std::isfinite(p_pump) && p_pump >= 0.0, "p_pump", "must be >= 0");
  require(eps_opt >= 0.0 && eps_opt <= 1.0, "eps_opt", "must lie in [0, 1]");
}

}  // namespace optpump
