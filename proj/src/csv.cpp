#include "optpump/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace optpump::csv {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      return out;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

bool parse_double(std::string_view text, double* out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) return false;
  *out = v;
  return true;
}

std::string format_number(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void write_trace(std::ostream& out, const SimTrace& trace) {
  out << "t_s,n,q,p_w\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << format_number(trace.t[i]) << ',' << format_number(trace.n[i]) << ','
        << format_number(trace.q[i]) << ',' << format_number(trace.p[i]) << '\n';
  }
}

void write_curve(std::ostream& out, const LightCurrentCurve& curve) {
  out << "i_a,p_w\n";
  for (std::size_t i = 0; i < curve.currents.size(); ++i) {
    out << format_number(curve.currents[i]) << ',' << format_number(curve.powers[i]) << '\n';
  }
}

void write_sweep(std::ostream& out, std::span<const SweepRow> rows) {
  out << "p_pump_w,norm_pulse_energy,norm_avg_power\n";
  for (const SweepRow& r : rows) {
    out << format_number(r.p_pump) << ',' << format_number(r.norm_pulse_energy) << ','
        << format_number(r.norm_avg_power) << '\n';
  }
}

void write_fit_report(std::ostream& out, const FitReport& report) {
  out << "eps_opt,residual,bracket_lo,bracket_hi\n"
      << format_number(report.eps_opt) << ',' << format_number(report.residual) << ','
      << format_number(report.bracket_lo) << ',' << format_number(report.bracket_hi) << '\n';
}

}  // namespace optpump::csv
