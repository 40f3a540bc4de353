#include "optpump/isolation.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <utility>

#include "bundled_data.hpp"
#include "optpump/csv.hpp"
#include "optpump/model.hpp"

namespace optpump {

IsolationChain::IsolationChain(std::vector<Component> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw ValidationError("chain", "must hold at least one component");
  for (const Component& c : components_) {
    if (!(std::isfinite(c.loss_db) && c.loss_db >= 0.0)) {
      throw ValidationError("loss_db", "component '" + c.name + "' has negative or non-finite loss");
    }
  }
}

IsolationChain IsolationChain::then(const IsolationChain& other) const {
  std::vector<Component> joined = components_;
  joined.insert(joined.end(), other.components_.begin(), other.components_.end());
  return IsolationChain(std::move(joined));
}

void AttackBudget::validate() const {
  if (!(safe_power_w > 0.0)) throw ValidationError("safe_w", "must be > 0");
  if (!(attack_power_w > safe_power_w)) {
    throw ValidationError("attack_w", "must exceed the safe power");
  }
}

double to_dbm(double watts) {
  if (!(watts > 0.0)) throw ValidationError("power", "dBm needs a positive power");
  return 10.0 * std::log10(watts / 1e-3);
}

double from_dbm(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

double chain_isolation(const IsolationChain& chain) {
  const auto& c = chain.components();
  return std::accumulate(c.begin(), c.end(), 0.0,
                         [](double acc, const Component& x) { return acc + x.loss_db; });
}

double required_isolation(const AttackBudget& budget) {
  budget.validate();
  return to_dbm(budget.attack_power_w) - to_dbm(budget.safe_power_w);
}

Verdict verdict(const IsolationChain& chain, const AttackBudget& budget) {
  Verdict v;
  v.total_db = chain_isolation(chain);
  v.required_db = required_isolation(budget);
  v.margin_db = v.total_db - v.required_db;
  v.resilient = v.margin_db > 0.0;
  return v;
}

IsolationChain read_chain_csv(std::istream& in) {
  std::vector<Component> rows;
  std::string line;
  std::size_t line_no = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = csv::trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = csv::split(text);
    if (!seen_data && fields.size() == 2 && csv::trim(fields[0]) == "name" &&
        csv::trim(fields[1]) == "loss_db") {
      seen_data = true;
      continue;
    }
    seen_data = true;
    std::ostringstream where;
    where << "line " << line_no;
    if (fields.size() != 2) throw ValidationError(where.str(), "expected 'name,loss_db'");
    const std::string name = csv::trim(fields[0]);
    if (name.empty()) throw ValidationError(where.str(), "empty component name");
    double loss = 0.0;
    if (!csv::parse_double(csv::trim(fields[1]), &loss)) {
      throw ValidationError(where.str(), "loss_db '" + csv::trim(fields[1]) + "' is not a number");
    }
    if (!(loss >= 0.0)) throw ValidationError(where.str(), "loss_db must be >= 0");
    rows.push_back({name, loss});
  }
  return IsolationChain(std::move(rows));
}

IsolationChain read_chain_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("chain", "cannot open '" + path + "'");
  return read_chain_csv(in);
}

IsolationChain bundled_chain() {
  std::istringstream in{std::string(bundled::kTable1Chain)};
  return read_chain_csv(in);
}

std::string format_verdict(const Verdict& v) {
  std::ostringstream out;
  out << "total_db=" << csv::format_number(v.total_db, 6) << '\n'
      << "required_db=" << csv::format_number(v.required_db, 6) << '\n'
      << "margin_db=" << csv::format_number(v.margin_db, 6) << '\n'
      << "verdict=" << (v.resilient ? "resilient" : "vulnerable") << '\n';
  return out.str();
}

}  // namespace optpump
