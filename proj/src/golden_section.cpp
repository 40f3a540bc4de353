#include "optpump/golden_section.hpp"

#include <algorithm>
#include <cmath>

#include "optpump/model.hpp"

namespace optpump {

ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo,
                                      double hi, double x_tol, double f_tol,
                                      std::size_t max_iterations) {
  if (!(lo < hi)) throw ValidationError("bracket", "lo must be below hi");
  // 1/phi and 1/phi^2
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const double inv_phi2 = 1.0 - inv_phi;

  double a = lo;
  double b = hi;
  double c = a + inv_phi2 * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  std::size_t evals = 2;

  while (evals < max_iterations && (b - a) > x_tol && std::min(fc, fd) > f_tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = a + inv_phi2 * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++evals;
  }

  ScalarMinimum out;
  out.lo = a;
  out.hi = b;
  out.evaluations = evals;
  if (fc <= fd) {
    out.x = c;
    out.fx = fc;
  } else {
    out.x = d;
    out.fx = fd;
  }
  return out;
}

}  // namespace optpump
