#pragma once

#include <string>
#include <vector>

#include "core/fokker_planck.hpp"
#include "core/oracle.hpp"

namespace difflab {

struct FitLine {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int n_used = 0;
  int n_excluded = 0;  // nonpositive L values dropped before the log fit
  bool flagged = false;
};

// least squares of ln L on hsq; slope sign and R^2 are the verdict payload
FitLine fit_decay(const std::vector<double>& hsq, const std::vector<double>& L);

struct Plateau {
  double T_hat = 0.0;       // mean of L at the top-3 hsq values
  FitLine rate;             // fit_decay on |L - T_hat| below the plateau
  bool unreliable = false;  // tail non-monotone beyond noise
};
Plateau plateau_estimate(std::vector<double> hsq, std::vector<double> L);

// Eq-style plateau bound: (1/(2 m0^2)) integral (div(p0 E_T))^2 / p0 on the
// FP grid, with E_T the terminal error field of the perturbation (no eps).
// m0 <= 0 means "derive from the model" (1/sigma0^2 for the Gaussian family).
double t_bound(const ScoreModel& p0_model, const Perturbation& pert, const Grid1D& grid,
               double T, double m0 = 0.0);

// per-t diagnostic curve (hbar^2 + gbar^2)^2 / (8 hbar^2) * eps^2 * E||E_t||^2
struct KlRateBound {
  bool defined = true;  // false iff h = 0 somewhere (bound uninformative)
  std::vector<double> t;
  std::vector<double> integrand;
  double integral = 0.0;
};
KlRateBound kl_rate_bound(const ScheduleParams& params, double alpha, double eps,
                          const std::function<double(double)>& err_norm2_of_tgen,
                          int n_grid = 512);

enum class KlSource { Oracle, Pde, Mc };
std::string to_string(KlSource s);

struct SweepRow {
  double hsq = 0.0;
  double eps = 0.0;  // 0 for L rows
  std::string metric;
  double value = 0.0;
  std::string source;
  double r2 = 0.0;
  std::string error;  // per-row failure note; empty when the cell succeeded
};

struct SweepProblem {
  double sigma0 = 0.5;
  double T = 2.0;
  int error_case = 1;
  double mask_c = -1.0;                // <= 0 keeps the case default
  std::vector<double> eps_grid;        // for L regression (empty = table grid)
  // pde source
  Grid1D grid{8.0, 800, 0.0};
  // mc source (Euler-Maruyama + binned KL against the exact density)
  int64_t mc_steps = 40000;
  int64_t mc_batch = 100000;
  uint64_t seed = 1;
  int bins = 100;
  double mc_eps = 0.2;

  Perturbation pert(double eps) const;
  OracleSpec oracle_spec(double hsq, double eps) const;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  const SweepRow* find(double hsq, const std::string& metric,
                       const std::string& source) const;
};

// Evaluates KL / L at each h of the grid with shared seeds and grids; cells
// run concurrently and per-cell failures land in the row's error column.
SweepResult sweep_h(const SweepProblem& prob, const std::vector<double>& hsq_grid,
                    KlSource source);

}  // namespace difflab
