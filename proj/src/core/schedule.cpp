#include "core/schedule.hpp"

#include <cmath>

#include "core/quadrature.hpp"

namespace difflab {

void check_time(const ScheduleParams& p, double t) {
  if (!(t >= 0.0 && t <= p.T)) throw std::domain_error("schedule: time outside [0, T]");
}

double g(const ScheduleParams& p, double t) {
  check_time(p, t);
  return std::sqrt(p.beta0 + (p.beta1 - p.beta0) * t);
}

double varpi(const ScheduleParams& p, double t) {
  check_time(p, t);
  return std::sqrt(-std::expm1(-0.5 * t * t * (p.beta1 - p.beta0) - t * p.beta0));
}

double mean_scale(const ScheduleParams& p, double t) {
  check_time(p, t);
  return std::exp(-0.25 * t * t * (p.beta1 - p.beta0) - 0.5 * t * p.beta0);
}

ReverseDriftCoeffs reverse_drift_coeffs(const ScheduleParams& p, double t_gen, double h) {
  const double gb = g_rev(p, t_gen);
  return {0.5 * gb * gb, 0.5 * (gb * gb + h * h)};
}

void reverse_drift(const ScheduleParams& p, const double* score_value, const double* x,
                   int dim, double t_gen, double h, double* out) {
  const auto c = reverse_drift_coeffs(p, t_gen, h);
  for (int i = 0; i < dim; ++i) out[i] = c.x_coeff * x[i] + c.score_coeff * score_value[i];
}

UnitRescaling rescale_to_unit_g(const ScheduleParams& p,
                                const std::function<double(double)>& hhat_unit) {
  p.validate();
  if (!(p.beta0 > 0.0)) throw std::runtime_error("rescale: singular schedule, g_t = 0");
  // tau'(t) = g(tau(t))^-2 with tau(0)=0 maps unit time to original time, so
  // theta = tau^-1(T) = integral_0^T g_u^2 du.
  const double theta =
      quad::integrate([&](double u) { return p.beta0 + (p.beta1 - p.beta0) * u; }, 0.0, p.T,
                      {}, 1e-12)
          .value;
  // tau^-1(s) = integral_0^s g^2; on the reverse clock the unit-time position
  // matching original t_gen is theta - tau^-1(T - t_gen).
  auto tau_inv = [p](double s) {
    return p.beta0 * s + 0.5 * (p.beta1 - p.beta0) * s * s;
  };
  auto h_of_tgen = [p, theta, tau_inv, hhat_unit](double t_gen) {
    const double unit_pos = theta - tau_inv(p.T - t_gen);
    return g_rev(p, t_gen) * hhat_unit(unit_pos);
  };
  return {theta, h_of_tgen};
}

}  // namespace difflab
