#ifndef OPTPUMP_ISOLATION_HPP
#define OPTPUMP_ISOLATION_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace optpump {

/// One optical element on the path from the quantum channel back into the
/// laser, with its backward loss at the attack wavelength.
struct Component {
  std::string name;
  double loss_db = 0.0;
};

class IsolationChain {
 public:
  /// Throws ValidationError when empty or when any loss is negative.
  explicit IsolationChain(std::vector<Component> components);

  const std::vector<Component>& components() const { return components_; }

  /// Concatenation: this chain followed by `other`.
  IsolationChain then(const IsolationChain& other) const;

 private:
  std::vector<Component> components_;
};

/// Attacker's maximum injectable power against the largest power at the
/// laser that has no measurable effect.
struct AttackBudget {
  double attack_power_w = 0.0;
  double safe_power_w = 0.0;

  void validate() const;
};

struct Verdict {
  double total_db = 0.0;
  double required_db = 0.0;
  double margin_db = 0.0;
  bool resilient = false;
};

double to_dbm(double watts);
double from_dbm(double dbm);

double chain_isolation(const IsolationChain& chain);
double required_isolation(const AttackBudget& budget);

/// Resilient iff the chain isolation strictly exceeds the requirement.
Verdict verdict(const IsolationChain& chain, const AttackBudget& budget);

/// Parses `name,loss_db` rows. Blank lines and `#` comments are skipped and a
/// leading `name,loss_db` header is optional. Errors carry the 1-based line.
IsolationChain read_chain_csv(std::istream& in);
IsolationChain read_chain_csv_file(const std::string& path);

/// The ten-component transmitter chain measured at 1310 nm (97.6 dB total).
IsolationChain bundled_chain();

/// `key=value` lines: total_db, required_db, margin_db, verdict.
std::string format_verdict(const Verdict& v);

}  // namespace optpump

#endif  // OPTPUMP_ISOLATION_HPP
