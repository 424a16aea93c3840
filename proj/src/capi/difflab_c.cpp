#include "difflab.h"

#include <cstring>
#include <string>

#include "core/config.hpp"
#include "core/fokker_planck.hpp"
#include "core/leading_order.hpp"
#include "core/metrics.hpp"
#include "core/csv.hpp"
#include "core/oracle.hpp"
#include "core/runner.hpp"
#include "core/samplers.hpp"
#include "core/schedule.hpp"
#include "core/version.hpp"

namespace {

thread_local std::string g_last_error;

dfl_status fail(dfl_status code, const char* what) {
  g_last_error = what ? what : "unknown error";
  return code;
}

template <typename Fn>
dfl_status guarded(Fn&& fn) {
  try {
    fn();
    return DFL_OK;
  } catch (const difflab::ConfigError& e) {
    return fail(DFL_ERR_CONFIG, e.what());
  } catch (const difflab::DivergedError& e) {
    return fail(DFL_ERR_DIVERGED, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(DFL_ERR_INVALID_ARG, e.what());
  } catch (const std::domain_error& e) {
    return fail(DFL_ERR_INVALID_ARG, e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(DFL_ERR_IO, e.what());
  } catch (const std::runtime_error& e) {
    return fail(DFL_ERR_NUMERIC, e.what());
  } catch (const std::exception& e) {
    return fail(DFL_ERR_INTERNAL, e.what());
  }
}

}  // namespace

extern "C" {

struct dfl_schedule {
  difflab::ScheduleParams params;
};

const char* dfl_version(void) { return difflab::kVersionString; }

const char* dfl_last_error(void) { return g_last_error.c_str(); }

dfl_status dfl_schedule_create(double beta0, double beta1, double T, dfl_schedule** out) {
  if (!out) return fail(DFL_ERR_INVALID_ARG, "null output pointer");
  return guarded([&] {
    difflab::ScheduleParams p{beta0, beta1, T};
    p.validate();
    *out = new dfl_schedule{p};
  });
}

void dfl_schedule_destroy(dfl_schedule* s) { delete s; }

dfl_status dfl_schedule_g(const dfl_schedule* s, double t, double* out) {
  if (!s || !out) return fail(DFL_ERR_INVALID_ARG, "null argument");
  return guarded([&] { *out = difflab::g(s->params, t); });
}

dfl_status dfl_schedule_varpi(const dfl_schedule* s, double t, double* out) {
  if (!s || !out) return fail(DFL_ERR_INVALID_ARG, "null argument");
  return guarded([&] { *out = difflab::varpi(s->params, t); });
}

dfl_status dfl_schedule_mean_scale(const dfl_schedule* s, double t, double* out) {
  if (!s || !out) return fail(DFL_ERR_INVALID_ARG, "null argument");
  return guarded([&] { *out = difflab::mean_scale(s->params, t); });
}

dfl_status dfl_schedule_unit_time(const dfl_schedule* s, double* theta) {
  if (!s || !theta) return fail(DFL_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    auto r = difflab::rescale_to_unit_g(s->params, [](double) { return 0.0; });
    *theta = r.theta;
  });
}

static difflab::OracleSpec oracle_spec_from(const dfl_oracle_spec* s) {
  difflab::OracleSpec spec;
  spec.sigma0 = s->sigma0;
  spec.T = s->T;
  if (!(s->hsq >= 0.0)) throw std::invalid_argument("hsq must be >= 0");
  spec.h = std::sqrt(s->hsq);
  spec.pert = difflab::Perturbation::error_case(s->error_case, s->epsilon, s->mask_c);
  return spec;
}

dfl_status dfl_oracle_var(const dfl_oracle_spec* spec, double* var_out) {
  if (!spec || !var_out) return fail(DFL_ERR_INVALID_ARG, "null argument");
  return guarded([&] { *var_out = difflab::oracle_var_YT(oracle_spec_from(spec)); });
}

dfl_status dfl_oracle_kl(const dfl_oracle_spec* spec, double* kl_out) {
  if (!spec || !kl_out) return fail(DFL_ERR_INVALID_ARG, "null argument");
  return guarded([&] { *kl_out = difflab::oracle_kl(oracle_spec_from(spec)); });
}

dfl_status dfl_oracle_leading_l(const dfl_oracle_spec* spec, const double* eps_grid,
                                size_t n_eps, double* l_out, double* r2_out) {
  if (!spec || !l_out) return fail(DFL_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    std::vector<double> grid;
    if (eps_grid && n_eps > 0)
      grid.assign(eps_grid, eps_grid + n_eps);
    else
      grid = difflab::table_eps_grid();
    auto base = oracle_spec_from(spec);
    base.pert.epsilon = 0.0;
    auto fit = difflab::oracle_leading_L(base, grid);
    *l_out = fit.L;
    if (r2_out) *r2_out = fit.r2;
  });
}

dfl_status dfl_fp_leading_l(const dfl_fp_spec* spec, double* l_out, double* tail_mass_out,
                            double* mass_defect_out) {
  if (!spec || !l_out) return fail(DFL_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    difflab::Gaussian1D model(spec->sigma0, difflab::ScheduleParams::unit(spec->T));
    difflab::Grid1D grid{spec->grid_r, spec->grid_n, spec->dt};
    difflab::FPSolver solver(model, std::sqrt(spec->hsq), grid, spec->T);
    auto v = solver.evolve_perturbation(
        difflab::Perturbation::error_case(spec->error_case, 1.0, spec->mask_c));
    Eigen::VectorXd xc = solver.grid().centers();
    difflab::Batch pts(1, xc.size());
    pts.row(0) = xc.transpose();
    Eigen::VectorXd logp;
    model.log_density_batch(0.0, pts, logp);
    double tail = 0.0;
    *l_out = difflab::leading_L_pde(v.v, logp.array().exp(), solver.grid().dx(), &tail);
    if (tail_mass_out) *tail_mass_out = tail;
    if (mass_defect_out) *mass_defect_out = v.mass;
  });
}

dfl_status dfl_metrics_csv(const char* file_a, const char* file_b, int bins, double* kl_out,
                           double* js_out, double* w1_out) {
  if (!file_a || !file_b) return fail(DFL_ERR_INVALID_ARG, "null file path");
  return guarded([&] {
    const Eigen::MatrixXd a = difflab::read_samples_csv(file_a);
    const Eigen::MatrixXd b = difflab::read_samples_csv(file_b);
    if (a.rows() != b.rows()) throw std::invalid_argument("sample dims differ");
    double kl = 0, js = 0, w1 = 0;
    if (a.rows() == 1) {
      auto grid = difflab::BinGrid::from_reference(a.row(0).transpose(), bins);
      kl = difflab::hist_kl(a.row(0).transpose(), b.row(0).transpose(), grid);
      js = difflab::hist_js(a.row(0).transpose(), b.row(0).transpose(), grid);
      w1 = difflab::w1_1d(a.row(0).transpose(), b.row(0).transpose());
    } else if (a.rows() == 2) {
      for (int ax = 0; ax < 2; ++ax) {
        auto grid = difflab::BinGrid::from_reference(a.row(ax).transpose(), bins);
        kl += 0.5 * difflab::hist_kl(a.row(ax).transpose(), b.row(ax).transpose(), grid);
        js += 0.5 * difflab::hist_js(a.row(ax).transpose(), b.row(ax).transpose(), grid);
      }
      w1 = difflab::w1_sliced_2d(a, b, 64, 1);
    } else {
      throw std::invalid_argument("only 1D/2D samples supported");
    }
    if (kl_out) *kl_out = kl;
    if (js_out) *js_out = js;
    if (w1_out) *w1_out = w1;
  });
}

static char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

dfl_status dfl_run_config_file(const char* config_path, const char* out_dir, char** dir_out) {
  if (!config_path) return fail(DFL_ERR_INVALID_ARG, "null config path");
  return guarded([&] {
    auto r = difflab::run_config_file(config_path, out_dir ? out_dir : "");
    if (dir_out) *dir_out = dup_string(r.dir);
  });
}

dfl_status dfl_run_config_text(const char* config_text, const char* out_dir, char** dir_out) {
  if (!config_text) return fail(DFL_ERR_INVALID_ARG, "null config text");
  return guarded([&] {
    auto r = difflab::run_config(difflab::Config::parse(config_text), out_dir ? out_dir : "");
    if (dir_out) *dir_out = dup_string(r.dir);
  });
}

void dfl_string_free(char* s) { std::free(s); }

}  // extern "C"
