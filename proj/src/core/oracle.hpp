#pragma once

#include <vector>

#include "core/scores.hpp"

namespace difflab {

// Closed-form ground truth for the 1D Gaussian family on the unit-g clock.
// The generative SDE is linear, so Y_T stays Gaussian with mean zero; the
// terminal variance and KL(p0 || q_T) follow from two time integrals.
struct OracleSpec {
  double sigma0 = 1.0;
  double T = 2.0;
  double h = 0.0;      // constant diffusion on the unit-g clock
  Perturbation pert;   // epsilon and the time mask; spatial mode fixes alpha_t

  double sigma2_fwd(double u) const;      // sigma0^2 e^-u + 1 - e^-u
  double alpha(double t_gen) const;       // E_t(x) = alpha_t x
  void validate() const;
};

// integral_0^t [ 1/2 + (1+h^2)/2 (-1/sigma^2_{T-s} + eps alpha_s) ] ds
// (the log of the fundamental solution of the mean ODE)
double oracle_log_growth(const OracleSpec& spec, double t, double abs_tol = 1e-12);

// var(Y_T) with exact p_T initialization, nested quadrature
double oracle_var_YT(const OracleSpec& spec);

// var(Y_T) with var(Y_0) fixed by the caller (standard-normal init uses 1)
double oracle_var_YT_from(const OracleSpec& spec, double var0);

double gaussian_kl_from_var(double var, double sigma0);
double oracle_kl(const OracleSpec& spec);

struct LeadingLFit {
  double L = 0.0;
  double r2 = 1.0;     // unweighted R^2 of the through-origin fit in (eps^2, KL)
  bool warn = false;   // r2 < 0.999
  std::vector<double> kl;  // per-eps KL values used
};

// Weighted least-squares slope of KL against eps^2 through the origin with
// weights 1/eps^4, i.e. each eps contributes equally on the L scale.
LeadingLFit oracle_leading_L(const OracleSpec& spec_no_eps,
                             const std::vector<double>& eps_grid);

// eps grid reproducing the reference table values (the tabulated fits carry
// visible O(eps^3) bias, so matching them needs the same finite-eps scale)
const std::vector<double>& table_eps_grid();
// small grid for comparisons against the exact eps->0 coefficient
const std::vector<double>& limit_eps_grid();

}  // namespace difflab
