#pragma once

#include <Eigen/Dense>

#include "core/scores.hpp"

namespace difflab {

// cell-centered grid on [-R, R]; interior faces carry the fluxes
struct Grid1D {
  double R = 8.0;
  int n = 800;
  double dt = 0.0;  // 0 = derive from the stability/accuracy rule

  void validate() const;
  double dx() const { return 2.0 * R / n; }
  Eigen::VectorXd centers() const;
  Eigen::VectorXd faces() const;
};

// Direct solves of d(mu)/dt = L_t(mu) [+ source] on the generative clock,
// where L_t(mu) = -d/dx(b_t mu) + (h^2/2) mu'' with
// b_t(x) = x/2 + (1+h^2)/2 * score(T - t, x)   (unit-g clock).
// Space: Chang-Cooper flux (exact zero-flux boundaries, divergence form);
// time: backward Euler. h = 0 runs the same flux with the diffusion zeroed.
class FPSolver {
 public:
  FPSolver(const ScoreModel& model, double h, Grid1D grid, double T);

  const Grid1D& grid() const { return grid_; }
  double dt_limit() const { return dt_limit_; }
  double h() const { return h_; }

  // L_t applied to a grid function (for the divergence-form invariants)
  Eigen::VectorXd apply_operator(double t_gen, const Eigen::VectorXd& mu) const;

  // homogeneous solution operator Phi_{s->t}; steps ceil((t-s)/dt)
  Eigen::VectorXd evolve_measure(Eigen::VectorXd mu, double s, double t) const;

  struct VResult {
    Eigen::VectorXd v;
    double mass;           // quadrature total of v (should be ~0)
    double boundary_frac;  // |v| mass share in the outermost cells
    int64_t steps;
  };
  // first-order perturbation v_T: v_0 = 0, source -div((1+h^2)/2 E_t p_t)
  VResult evolve_perturbation(const Perturbation& pert) const;

  // modified potential V_t(x) = (1 + 1/h^2) U_t(x) - x^2/(2 h^2) on the grid
  Eigen::VectorXd potential(double t_gen) const;

 private:
  struct Tridiag {
    Eigen::VectorXd sub, dia, sup;
  };
  Tridiag assemble(double t_gen) const;
  Eigen::VectorXd source(double t_gen, const Perturbation& pert) const;
  void backward_euler(Eigen::VectorXd& v, const Tridiag& op, const Eigen::VectorXd& rhs,
                      double dt) const;

  const ScoreModel& model_;
  double h_;
  Grid1D grid_;
  double T_;
  double dt_limit_;
  Eigen::VectorXd x_, xf_;  // centers, interior faces
};

// L = 1/2 integral of v_T^2 / p0 restricted to p0 > 1e-12 max(p0);
// tail_mass reports the |v| share left out of the quadrature support
double leading_L_pde(const Eigen::VectorXd& v_T, const Eigen::VectorXd& p0, double dx,
                     double* tail_mass = nullptr);

// || Phi_{t->r}(Phi_{s->t}(mu)) - Phi_{s->r}(mu) ||_1 for a zero-mass test
// measure; the two sides step on different uniform grids
double semigroup_defect(const ScoreModel& model, double h, const Grid1D& grid, double T,
                        double s, double t, double r);

}  // namespace difflab
