#include "core/leading_order.hpp"

#include <algorithm>
#include <cmath>

#include "core/metrics.hpp"
#include "core/parallel.hpp"
#include "core/samplers.hpp"

namespace difflab {

namespace {
FitLine linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  FitLine f;
  const size_t n = x.size();
  f.n_used = static_cast<int>(n);
  if (n < 2) {
    f.flagged = true;
    return f;
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) {
    f.flagged = true;
    return f;
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (syy == 0.0) {
    // constant input: slope 0 with undefined R^2
    f.r2 = std::numeric_limits<double>::quiet_NaN();
    f.flagged = true;
    return f;
  }
  double ss_res = 0;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r2 = 1.0 - ss_res / syy;
  return f;
}
}  // namespace

FitLine fit_decay(const std::vector<double>& hsq, const std::vector<double>& L) {
  if (hsq.size() != L.size()) throw std::invalid_argument("fit_decay: size mismatch");
  std::vector<double> x, y;
  int excluded = 0;
  for (size_t i = 0; i < L.size(); ++i) {
    if (L[i] > 0.0) {
      x.push_back(hsq[i]);
      y.push_back(std::log(L[i]));
    } else {
      ++excluded;
    }
  }
  FitLine f = linear_fit(x, y);
  f.n_excluded = excluded;
  if (f.n_used < 4) f.flagged = true;
  return f;
}

Plateau plateau_estimate(std::vector<double> hsq, std::vector<double> L) {
  if (hsq.size() != L.size() || hsq.size() < 3)
    throw std::invalid_argument("plateau: need >= 3 points");
  std::vector<size_t> idx(hsq.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return hsq[a] < hsq[b]; });
  if (hsq[idx.back()] < 20.0)
    throw std::invalid_argument("plateau: grid must reach hsq >= 20");

  Plateau p;
  const size_t n = idx.size();
  p.T_hat = (L[idx[n - 1]] + L[idx[n - 2]] + L[idx[n - 3]]) / 3.0;

  // the tail must approach the plateau from one side; moves against the
  // trend larger than a noise allowance flip the unreliable flag
  const double tol = 0.05 * std::abs(p.T_hat);
  bool rose = false, fell = false;
  std::vector<double> hx, dev;
  for (size_t i = n / 2; i < n; ++i) {
    hx.push_back(hsq[idx[i]]);
    dev.push_back(std::abs(L[idx[i]] - p.T_hat));
    if (i > n / 2) {
      const double step = L[idx[i]] - L[idx[i - 1]];
      if (step > tol) rose = true;
      if (step < -tol) fell = true;
    }
  }
  p.unreliable = rose && fell;
  p.rate = fit_decay(hx, dev);
  return p;
}

double t_bound(const ScoreModel& p0_model, const Perturbation& pert, const Grid1D& grid,
               double T, double m0) {
  if (p0_model.dim() != 1) throw std::invalid_argument("t_bound: 1D grid quadrature only");
  if (m0 <= 0.0) {
    if (const auto* g = dynamic_cast<const Gaussian1D*>(&p0_model))
      m0 = 1.0 / (g->sigma0() * g->sigma0());
    else
      throw std::invalid_argument("t_bound: m0 required for non-Gaussian p0");
  }
  const double maskT = pert.mask_value(T, T);
  if (maskT == 0.0) return 0.0;

  const double dx = grid.dx();
  const Eigen::VectorXd xf = grid.faces();
  const Eigen::VectorXd xc = grid.centers();
  Batch pts(1, xf.size());
  pts.row(0) = xf.transpose();
  Eigen::VectorXd logp;
  p0_model.log_density_batch(0.0, pts, logp);
  Eigen::VectorXd flux;
  if (pert.mode == PertMode::ScoreProportional) {
    Batch s;
    p0_model.score_batch(0.0, pts, s);
    flux = maskT * logp.array().exp() * s.row(0).transpose().array();
  } else {
    flux = (maskT * pert.linear_coeff) * logp.array().exp() * xf.array();
  }
  const int n = grid.n;
  Eigen::VectorXd div(n);
  div[0] = flux[0] / dx;
  for (int i = 1; i < n - 1; ++i) div[i] = (flux[i] - flux[i - 1]) / dx;
  div[n - 1] = -flux[n - 2] / dx;

  Batch cpts(1, xc.size());
  cpts.row(0) = xc.transpose();
  Eigen::VectorXd logp0;
  p0_model.log_density_batch(0.0, cpts, logp0);
  const double floor = 1e-12 * logp0.array().exp().maxCoeff();
  double acc = 0.0, tail = 0.0, total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double p0 = std::exp(logp0[i]);
    total += std::abs(div[i]);
    if (p0 > floor)
      acc += div[i] * div[i] / p0;
    else
      tail += std::abs(div[i]);
  }
  if (total > 0.0 && tail / total > 0.01)
    throw std::runtime_error("t_bound: truncated tail carries > 1% of the field");
  return acc * dx / (2.0 * m0 * m0);
}

KlRateBound kl_rate_bound(const ScheduleParams& params, double alpha, double eps,
                          const std::function<double(double)>& err_norm2_of_tgen,
                          int n_grid) {
  KlRateBound out;
  if (alpha <= 0.0) {
    out.defined = false;  // bound carries no information at h = 0
    return out;
  }
  out.t.resize(n_grid);
  out.integrand.resize(n_grid);
  for (int i = 0; i < n_grid; ++i) {
    const double t = params.T * i / (n_grid - 1.0);
    const double gb = g_rev(params, t);
    const double g2 = gb * gb, h2 = alpha * alpha * g2;
    out.t[i] = t;
    out.integrand[i] =
        (h2 + g2) * (h2 + g2) / (8.0 * h2) * eps * eps * err_norm2_of_tgen(t);
  }
  double acc = 0.0;
  for (int i = 0; i + 1 < n_grid; ++i)
    acc += 0.5 * (out.integrand[i] + out.integrand[i + 1]) * (out.t[i + 1] - out.t[i]);
  out.integral = acc;
  return out;
}

std::string to_string(KlSource s) {
  switch (s) {
    case KlSource::Oracle: return "oracle";
    case KlSource::Pde: return "pde";
    case KlSource::Mc: return "mc";
  }
  return "?";
}

Perturbation SweepProblem::pert(double eps) const {
  return Perturbation::error_case(error_case, eps, mask_c);
}

OracleSpec SweepProblem::oracle_spec(double hsq, double eps) const {
  OracleSpec s;
  s.sigma0 = sigma0;
  s.T = T;
  s.h = std::sqrt(hsq);
  s.pert = pert(eps);
  return s;
}

const SweepRow* SweepResult::find(double hsq, const std::string& metric,
                                  const std::string& source) const {
  for (const auto& r : rows)
    if (r.hsq == hsq && r.metric == metric && r.source == source && r.error.empty()) return &r;
  return nullptr;
}

namespace {

std::vector<SweepRow> oracle_cell(const SweepProblem& prob, double hsq) {
  std::vector<SweepRow> rows;
  const auto& grid = prob.eps_grid.empty() ? table_eps_grid() : prob.eps_grid;
  auto fit = oracle_leading_L(prob.oracle_spec(hsq, 0.0), grid);
  for (size_t i = 0; i < grid.size(); ++i)
    rows.push_back({hsq, grid[i], "kl", fit.kl[i], "oracle", 0.0, ""});
  rows.push_back({hsq, 0.0, "L", fit.L, "oracle", fit.r2, ""});
  return rows;
}

std::vector<SweepRow> pde_cell(const SweepProblem& prob, double hsq) {
  Gaussian1D model(prob.sigma0, ScheduleParams::unit(prob.T));
  FPSolver solver(model, std::sqrt(hsq), prob.grid, prob.T);
  auto vres = solver.evolve_perturbation(prob.pert(1.0));
  Eigen::VectorXd p0(prob.grid.n);
  const Eigen::VectorXd xc = prob.grid.centers();
  Batch pts(1, xc.size());
  pts.row(0) = xc.transpose();
  Eigen::VectorXd logp;
  model.log_density_batch(0.0, pts, logp);
  p0 = logp.array().exp();
  double tail = 0.0;
  const double L = leading_L_pde(vres.v, p0, prob.grid.dx(), &tail);
  return {{hsq, 0.0, "L", L, "pde", 0.0, ""}};
}

std::vector<SweepRow> mc_cell(const SweepProblem& prob, double hsq) {
  std::vector<SweepRow> rows;
  Gaussian1D model(prob.sigma0, ScheduleParams::unit(prob.T));
  GaussianP0 p0(prob.sigma0);
  SamplerConfig cfg;
  cfg.scheme = Scheme::EulerMaruyama;
  cfg.steps = prob.mc_steps;
  cfg.batch = prob.mc_batch;
  cfg.seed = prob.seed;  // common random numbers across eps and h
  cfg.alpha = std::sqrt(hsq);
  cfg.init = InitDist::ExactPT;

  // fixed binning from the exact density: +-6 sigma0
  BinGrid bins{-6.0 * prob.sigma0, 6.0 * prob.sigma0, prob.bins};
  auto cdf = [&](double x) { return 0.5 * std::erfc(-x / (std::sqrt(2.0) * prob.sigma0)); };

  auto run_kl = [&](double eps) {
    PerturbedScore score(model, prob.pert(eps));
    auto batch = simulate_reverse_em(score, model.params(), cfg, &p0);
    return hist_kl_exact_ref(cdf, batch.terminal.row(0).transpose(), bins);
  };
  const double floor = run_kl(0.0);
  rows.push_back({hsq, 0.0, "kl_floor", floor, "mc", 0.0, ""});
  const double kl = run_kl(prob.mc_eps);
  rows.push_back({hsq, prob.mc_eps, "kl", kl, "mc", 0.0, ""});
  rows.push_back(
      {hsq, 0.0, "L", (kl - floor) / (prob.mc_eps * prob.mc_eps), "mc", 0.0, ""});
  return rows;
}

}  // namespace

SweepResult sweep_h(const SweepProblem& prob, const std::vector<double>& hsq_grid,
                    KlSource source) {
  if (hsq_grid.empty()) throw std::invalid_argument("sweep_h: empty grid");
  for (size_t i = 1; i < hsq_grid.size(); ++i)
    if (!(hsq_grid[i] > hsq_grid[i - 1]))
      throw std::invalid_argument("sweep_h: grid must be ascending");

  std::vector<std::vector<SweepRow>> cells(hsq_grid.size());
  parallel_for_each(static_cast<int64_t>(hsq_grid.size()), [&](int64_t i) {
    const double hsq = hsq_grid[i];
    try {
      switch (source) {
        case KlSource::Oracle: cells[i] = oracle_cell(prob, hsq); break;
        case KlSource::Pde: cells[i] = pde_cell(prob, hsq); break;
        case KlSource::Mc: cells[i] = mc_cell(prob, hsq); break;
      }
    } catch (const std::exception& e) {
      cells[i] = {{hsq, 0.0, "L", std::numeric_limits<double>::quiet_NaN(),
                   to_string(source), 0.0, e.what()}};
    }
  });
  SweepResult out;
  for (auto& c : cells)
    for (auto& r : c) out.rows.push_back(std::move(r));
  return out;
}

}  // namespace difflab
