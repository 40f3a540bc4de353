#ifndef OPTPUMP_CSV_HPP
#define OPTPUMP_CSV_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "optpump/analysis.hpp"
#include "optpump/dynamics.hpp"

namespace optpump::csv {

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view line, char sep = ',');

/// Strict full-string parse; rejects trailing garbage and non-finite values.
bool parse_double(std::string_view text, double* out);

/// Shortest `%.*g` rendering with `digits` significant digits.
std::string format_number(double v, int digits = 12);

/// `t_s,n,q,p_w`, one row per sample, 12 significant digits.
void write_trace(std::ostream& out, const SimTrace& trace);
/// `i_a,p_w`
void write_curve(std::ostream& out, const LightCurrentCurve& curve);
/// `p_pump_w,norm_pulse_energy,norm_avg_power`
void write_sweep(std::ostream& out, std::span<const SweepRow> rows);
/// `eps_opt,residual,bracket_lo,bracket_hi` header plus one row.
void write_fit_report(std::ostream& out, const FitReport& report);

}  // namespace optpump::csv

#endif  // OPTPUMP_CSV_HPP
