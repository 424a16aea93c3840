#pragma once

#include <functional>
#include <vector>

namespace difflab::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;   // estimated absolute error
  bool converged = true;
};

// Adaptive Gauss-Kronrod (G7, K15) on [a, b]. Breakpoints split the initial
// interval so integrand discontinuities (mask switch times) sit on panel
// edges instead of inside a panel.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const std::vector<double>& breakpoints = {}, double abs_tol = 1e-10,
                 double rel_tol = 1e-12, int max_panels = 4000);

}  // namespace difflab::quad
