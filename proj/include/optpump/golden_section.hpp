#ifndef OPTPUMP_GOLDEN_SECTION_HPP
#define OPTPUMP_GOLDEN_SECTION_HPP

#include <cstddef>
#include <functional>

namespace optpump {

struct ScalarMinimum {
  double x = 0.0;
  double fx = 0.0;
  double lo = 0.0;  // final bracket
  double hi = 0.0;
  std::size_t evaluations = 0;
};

/// Golden-section minimization of a unimodal f on [lo, hi]. Stops when the
/// bracket is narrower than `x_tol`, when the best value drops below `f_tol`,
/// or after `max_iterations` interior evaluations.
ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo,
                                      double hi, double x_tol, double f_tol = 0.0,
                                      std::size_t max_iterations = 200);

}  // namespace optpump

#endif  // OPTPUMP_GOLDEN_SECTION_HPP
