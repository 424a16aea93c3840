#pragma once

#include <functional>
#include <stdexcept>

namespace difflab {

// VP-SDE noise schedule with affine beta: g_t = sqrt(beta0 + (beta1-beta0) t).
// All public sampler/solver entry points take time on the generative clock
// t_gen in [0, T]; forward-time quantities are reached through T - t_gen.
struct ScheduleParams {
  double beta0 = 1.0;
  double beta1 = 1.0;
  double T = 2.0;

  static ScheduleParams unit(double T_) { return ScheduleParams{1.0, 1.0, T_}; }
  bool is_unit() const { return beta0 == 1.0 && beta1 == 1.0; }

  void validate() const {
    if (!(beta0 > 0.0)) throw std::invalid_argument("schedule: beta0 must be > 0");
    if (!(beta1 >= beta0)) throw std::invalid_argument("schedule: beta1 must be >= beta0");
    if (!(T > 0.0)) throw std::invalid_argument("schedule: T must be > 0");
  }
};

void check_time(const ScheduleParams& p, double t);

// g_t on the forward clock
double g(const ScheduleParams& p, double t);

// conditional std of X_t | X_0:  varpi_t = sqrt(1 - exp(-t^2 (b1-b0)/2 - t b0))
double varpi(const ScheduleParams& p, double t);

// mean contraction of the forward kernel: mu_t = exp(-t^2 (b1-b0)/4 - t b0 / 2)
double mean_scale(const ScheduleParams& p, double t);

// g evaluated at forward time T - t_gen
inline double g_rev(const ScheduleParams& p, double t_gen) { return g(p, p.T - t_gen); }

// Reverse drift  -f(x) + (g^2 + h^2)/2 * score  as coefficients on x and on
// the score value; both evaluated at forward time T - t_gen.
struct ReverseDriftCoeffs {
  double x_coeff;      // gbar^2 / 2
  double score_coeff;  // (gbar^2 + h^2) / 2
};
ReverseDriftCoeffs reverse_drift_coeffs(const ScheduleParams& p, double t_gen, double h);

// drift = x_coeff * x + score_coeff * score_value, elementwise over dim entries
void reverse_drift(const ScheduleParams& p, const double* score_value, const double* x,
                   int dim, double t_gen, double h, double* out);

// Time rescaling to the unit-g clock. theta = integral of g^2 over [0, T];
// a constant hhat on the unit clock corresponds to h_rev(t_gen) = hhat * g(T - t_gen).
struct UnitRescaling {
  double theta;
  std::function<double(double)> h_of_tgen;  // original-clock reverse h profile
};
UnitRescaling rescale_to_unit_g(const ScheduleParams& p,
                                const std::function<double(double)>& hhat_unit);

// Generative-clock h profile selection: h = alpha * g (experiment axis) or a
// constant h on the unit-g clock (theory axis). Both are stored explicitly.
enum class HMode { AlphaOfG, ConstUnitTime };

}  // namespace difflab
