#ifndef OPTPUMP_MODEL_HPP
#define OPTPUMP_MODEL_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace optpump {

/// Physical constants, exact SI values.
namespace constants {
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kPlanck = 6.62607015e-34;             // J s
inline constexpr double kSpeedOfLight = 299792458.0;          // m/s
}  // namespace constants

/// Raised when an input violates a documented invariant. `field()` names the
/// offending quantity so front ends can report it.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, std::string reason)
      : std::invalid_argument(field + ": " + reason),
        field_(std::move(field)),
        reason_(std::move(reason)) {}
  const std::string& field() const noexcept { return field_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string field_;
  std::string reason_;
};

/// Raised when a numerical procedure fails (divergence, blow-up, no pulse).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Photon energy hc/lambda for a vacuum wavelength in meters.
double photon_energy(double wavelength_m);

/// Device constants of a single-mode laser diode rate-equation model.
/// All values SI; carrier and photon numbers are dimensionless counts.
struct LaserParams {
  double tau_e = 1.0e-9;      // carrier lifetime, s
  double tau_ph = 3.0e-12;    // photon lifetime, s
  double gamma_conf = 0.12;   // confinement factor
  double n_th = 6.5e7;        // threshold carrier number
  double n_0 = 5.5e7;         // transparency carrier number
  double c_sp = 1.0e-5;       // spontaneous emission fraction into the mode
  double gamma_q = 1.0e-6;    // gain compression factor
  double eta = 0.5;           // differential quantum output
  double e_photon_out = photon_energy(1550e-9);   // J
  double e_photon_pump = photon_energy(1310e-9);  // J

  /// Throws ValidationError naming the first violated field.
  void validate() const;

  /// Carrier-injection threshold current e*N_th/tau_e, amperes.
  double threshold_current() const {
    return constants::kElementaryCharge * n_th / tau_e;
  }
};

/// Bias plus a rectangular modulation pulse train, pulse-on at period start.
struct DriveWaveform {
  double i_bias = 6.0e-3;       // A
  double i_pulse = 20.0e-3;     // A
  double pulse_width = 0.2e-9;  // s
  double rep_rate = 2.5e9;      // 1/s

  void validate() const;
  double period() const { return 1.0 / rep_rate; }
};

/// Attacker continuous-wave illumination at the pump wavelength.
struct PumpScenario {
  double p_pump = 0.0;    // W reaching the diode
  double eps_opt = 0.1;   // pumping efficiency, a free parameter

  void validate() const;
};

struct LaserState {
  double n = 0.0;  // carrier number
  double q = 0.0;  // normalized photon number
};

struct Derivatives {
  double dn = 0.0;
  double dq = 0.0;
};

/// Dimensionless compressed gain. Negative below transparency.
inline double gain(const LaserState& s, const LaserParams& p) {
  return (s.n - p.n_0) / (p.n_th - p.n_0) / std::sqrt(1.0 + 2.0 * p.gamma_q * s.q);
}

/// Carrier generation rate from optical pumping, 1/s.
inline double pump_rate(const PumpScenario& pump, const LaserParams& p) {
  return pump.eps_opt * pump.p_pump / p.e_photon_pump;
}

/// Right-hand side of the carrier/photon rate equations with optical pumping.
inline Derivatives derivatives(const LaserState& s, double i_now, double r_opt,
                               const LaserParams& p) {
  const double g = gain(s, p);
  Derivatives d;
  d.dn = i_now / constants::kElementaryCharge + r_opt - s.n / p.tau_e -
         s.q * g / (p.gamma_conf * p.tau_ph);
  d.dq = (g - 1.0) * s.q / p.tau_ph + p.c_sp * s.n / p.tau_e;
  return d;
}

/// Single-facet output power for photon number q, watts.
inline double photon_to_power(double q, const LaserParams& p) {
  return q * p.eta * p.e_photon_out / (2.0 * p.gamma_conf * p.tau_ph);
}

}  // namespace optpump

#endif  // OPTPUMP_MODEL_HPP
