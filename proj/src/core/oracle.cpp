#include "core/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "core/quadrature.hpp"

namespace difflab {

double OracleSpec::sigma2_fwd(double u) const {
  return 1.0 + (sigma0 * sigma0 - 1.0) * std::exp(-u);
}

double OracleSpec::alpha(double t_gen) const {
  const double m = pert.mask_value(t_gen, T);
  if (pert.mode == PertMode::ScoreProportional) return -m / sigma2_fwd(T - t_gen);
  return m * pert.linear_coeff;
}

void OracleSpec::validate() const {
  if (!(sigma0 > 0.0)) throw std::invalid_argument("oracle: sigma0 must be > 0");
  if (!(T > 0.0)) throw std::invalid_argument("oracle: T must be > 0");
  if (!(h >= 0.0)) throw std::invalid_argument("oracle: h must be >= 0");
}

namespace {

double integrand(const OracleSpec& s, double t) {
  const double hh = s.h * s.h;
  return 0.5 + 0.5 * (1.0 + hh) * (-1.0 / s.sigma2_fwd(s.T - t) +
                                   s.pert.epsilon * s.alpha(t));
}

quad::Result growth_quad(const OracleSpec& s, double t, double abs_tol) {
  return quad::integrate([&](double u) { return integrand(s, u); }, 0.0, t,
                         s.pert.mask_breakpoints(s.T), abs_tol, 1e-13);
}

}  // namespace

double oracle_log_growth(const OracleSpec& spec, double t, double abs_tol) {
  spec.validate();
  if (!(t >= 0.0 && t <= spec.T)) throw std::domain_error("oracle: t outside [0, T]");
  auto r = growth_quad(spec, t, abs_tol);
  if (!r.converged)
    throw std::runtime_error("oracle: quadrature did not converge, tol achieved " +
                             std::to_string(r.error));
  return r.value;
}

double oracle_var_YT_from(const OracleSpec& spec, double var0) {
  spec.validate();
  const double LT = oracle_log_growth(spec, spec.T);
  const double hh = spec.h * spec.h;
  double noise = 0.0;
  if (hh > 0.0) {
    auto r = quad::integrate(
        [&](double t) {
          const double Lt = oracle_log_growth(spec, t);
          return std::exp(2.0 * (LT - Lt)) * hh;
        },
        0.0, spec.T, spec.pert.mask_breakpoints(spec.T), 1e-10, 1e-12, 1200);
    if (!r.converged)
      throw std::runtime_error("oracle: variance quadrature did not converge");
    noise = r.value;
  }
  const double var = std::exp(2.0 * LT) * var0 + noise;
  if (!(var > 0.0)) throw std::runtime_error("oracle: nonpositive terminal variance");
  return var;
}

double oracle_var_YT(const OracleSpec& spec) {
  return oracle_var_YT_from(spec, spec.sigma2_fwd(spec.T));
}

double gaussian_kl_from_var(double var, double sigma0) {
  const double u = var / (sigma0 * sigma0) - 1.0;
  if (std::abs(u) < 1e-3) {
    // series around the minimum; avoids cancellation when var ~ sigma0^2
    return u * u * (0.25 + u * (-1.0 / 3.0 + u * 0.375));
  }
  return 0.5 * std::log1p(u) + 0.5 / (1.0 + u) - 0.5;
}

double oracle_kl(const OracleSpec& spec) {
  return gaussian_kl_from_var(oracle_var_YT(spec), spec.sigma0);
}

LeadingLFit oracle_leading_L(const OracleSpec& spec_no_eps,
                             const std::vector<double>& eps_grid) {
  if (eps_grid.size() < 3)
    throw std::invalid_argument("leading_L: need at least 3 eps values");
  for (double e : eps_grid)
    if (!(e > 0.0)) throw std::invalid_argument("leading_L: eps values must be > 0");

  LeadingLFit fit;
  std::vector<double> x;
  for (double e : eps_grid) {
    OracleSpec s = spec_no_eps;
    s.pert.epsilon = e;
    fit.kl.push_back(oracle_kl(s));
    x.push_back(e * e);
  }
  // weights 1/x^2: slope = mean of KL/eps^2
  double acc = 0.0;
  for (size_t i = 0; i < x.size(); ++i) acc += fit.kl[i] / x[i];
  fit.L = acc / static_cast<double>(x.size());

  double ss_res = 0.0, ss_tot = 0.0, mean = 0.0;
  for (double y : fit.kl) mean += y;
  mean /= static_cast<double>(fit.kl.size());
  for (size_t i = 0; i < x.size(); ++i) {
    ss_res += (fit.kl[i] - fit.L * x[i]) * (fit.kl[i] - fit.L * x[i]);
    ss_tot += (fit.kl[i] - mean) * (fit.kl[i] - mean);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.warn = fit.r2 < 0.999;
  return fit;
}

const std::vector<double>& table_eps_grid() {
  static const std::vector<double> g{0.04, 0.08, 0.12, 0.16, 0.20};
  return g;
}

const std::vector<double>& limit_eps_grid() {
  static const std::vector<double> g{0.00025, 0.0005, 0.001, 0.002};
  return g;
}

}  // namespace difflab
