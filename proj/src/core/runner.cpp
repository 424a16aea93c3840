#include "core/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>

#include "core/csv.hpp"
#include "core/datasets.hpp"
#include "core/leading_order.hpp"
#include "core/metrics.hpp"
#include "core/parallel.hpp"
#include "core/samplers.hpp"
#include "core/score_match.hpp"
#include "core/svg.hpp"
#include "core/version.hpp"

namespace difflab {

namespace fs = std::filesystem;

uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

struct RunContext {
  fs::path dir;
  std::map<std::string, uint64_t> checksums;
  std::map<std::string, uint64_t> sizes;

  std::string path(const std::string& name) const { return (dir / name).string(); }
  void record(const std::string& name) {
    std::ifstream f(dir / name, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string bytes = ss.str();
    checksums[name] = fnv1a64(bytes);
    sizes[name] = bytes.size();
  }
};

ScheduleParams schedule_from(const Config& c) {
  ScheduleParams p;
  p.beta0 = c.get_num("schedule", "beta0", 1.0);
  p.beta1 = c.get_num("schedule", "beta1", 1.0);
  p.T = c.get_num("schedule", "T", 2.0);
  p.validate();
  return p;
}

Perturbation pert_from(const Config& c) {
  Perturbation p;
  p.epsilon = c.get_num("pert", "epsilon", 0.0);
  const std::string mask = c.get_str("pert", "mask", "one");
  if (mask == "one") p.mask = TimeMask::One;
  else if (mask == "minus_one") p.mask = TimeMask::MinusOne;
  else if (mask == "sin") p.mask = TimeMask::Sinusoid;
  else if (mask == "before") p.mask = TimeMask::Before;
  else if (mask == "after") p.mask = TimeMask::After;
  else if (mask == "pulse") p.mask = TimeMask::Pulse;
  else throw ConfigError("config: [pert] mask '" + mask + "' unknown");
  p.mask_c = c.get_num("pert", "mask_c", 0.95);
  p.pulse_start = c.get_num("pert", "pulse_start", 0.0);
  p.pulse_width = c.get_num("pert", "pulse_width", 0.0);
  const std::string mode = c.get_str("pert", "mode", "score_prop");
  if (mode == "score_prop") p.mode = PertMode::ScoreProportional;
  else if (mode == "linear") p.mode = PertMode::LinearField;
  else throw ConfigError("config: [pert] mode '" + mode + "' unknown");
  p.linear_coeff = c.get_num("pert", "linear_coeff", 1.0);
  return p;
}

struct Problem {
  std::unique_ptr<ScoreModel> model;
  std::unique_ptr<P0Sampler> p0;
  ScheduleParams params;
};

// component lists: axes split by ',', components by ';'
std::vector<Eigen::VectorXd> parse_components(const std::string& text) {
  std::vector<Eigen::VectorXd> out;
  std::stringstream ss(text);
  std::string comp;
  while (std::getline(ss, comp, ';')) {
    std::vector<double> axes;
    std::stringstream cs(comp);
    std::string cell;
    while (std::getline(cs, cell, ',')) {
      if (cell.find_first_not_of(" \t") == std::string::npos) continue;
      axes.push_back(std::strtod(cell.c_str(), nullptr));
    }
    if (axes.empty()) continue;
    out.push_back(Eigen::Map<Eigen::VectorXd>(axes.data(), axes.size()));
  }
  if (out.empty()) throw ConfigError("config: [score] empty component list");
  return out;
}

Problem problem_from(const Config& c) {
  Problem pr;
  pr.params = schedule_from(c);
  const std::string family = c.get_str("score", "family", "gauss1d");
  if (family == "gmm") {
    const auto weights = c.get_list("score", "weights");
    auto m = std::make_unique<GaussianMixture>(
        weights, parse_components(c.get_str("score", "means")),
        parse_components(c.get_str("score", "vars")), pr.params);
    pr.p0 = std::make_unique<GmmP0>(*m);
    pr.model = std::move(m);
    return pr;
  }
  if (family == "gauss1d") {
    const double s0 = c.get_num("score", "sigma0", 0.5);
    pr.model = std::make_unique<Gaussian1D>(s0, pr.params);
    pr.p0 = std::make_unique<GaussianP0>(s0);
  } else if (family == "gmm1d") {
    auto m = std::make_unique<GaussianMixture>(make_gmm1d_2mode(pr.params));
    pr.p0 = std::make_unique<GmmP0>(*m);
    pr.model = std::move(m);
  } else if (family == "gmm2d") {
    auto m = std::make_unique<GaussianMixture>(make_gmm2d_4mode(pr.params));
    pr.p0 = std::make_unique<GmmP0>(*m);
    pr.model = std::move(m);
  } else if (family == "swissroll") {
    pr.p0 = std::make_unique<SwissRollP0>();
    const std::string file = c.get_str("score", "model_file", "");
    if (!file.empty())
      pr.model = std::make_unique<MLPScore>(MLPScore::load(file, pr.params));
  } else if (family == "mlp") {
    const std::string file = c.get_str("score", "model_file");
    pr.model = std::make_unique<MLPScore>(MLPScore::load(file, pr.params));
  } else {
    throw ConfigError("config: [score] family '" + family + "' unknown");
  }
  return pr;
}

SamplerConfig sampler_from(const Config& c, uint64_t seed) {
  SamplerConfig s;
  const std::string scheme = c.get_str("sampler", "scheme", "em");
  if (scheme == "em") s.scheme = Scheme::EulerMaruyama;
  else if (scheme == "ei") s.scheme = Scheme::ExponentialIntegrator;
  else throw ConfigError("config: [sampler] scheme '" + scheme + "' unknown");
  s.steps = c.get_int("sampler", "steps", 1000);
  s.batch = c.get_int("sampler", "batch", 10000);
  s.alpha = c.get_num("sampler", "alpha", 1.0);
  s.seed = seed;
  const std::string init = c.get_str("sampler", "init", "standard_normal");
  if (init == "standard_normal") s.init = InitDist::StandardNormal;
  else if (init == "exact_pt") s.init = InitDist::ExactPT;
  else throw ConfigError("config: [sampler] init '" + init + "' unknown");
  return s;
}

void run_oracle(const Config& c, RunContext& ctx) {
  const double T = c.get_num("oracle", "T", 2.0);
  const auto sigma0s = c.get_list("oracle", "sigma0_grid",
                                  {c.get_num("oracle", "sigma0", 0.2)});
  const auto cases_d = c.get_list("oracle", "cases", {c.get_num("oracle", "case", 1)});
  const auto hsqs = c.get_list("oracle", "hsq_grid", {c.get_num("oracle", "hsq", 20.0)});
  const double mask_c = c.get_num("oracle", "mask_c", -1.0);
  std::vector<double> eps_grid = c.get_list("oracle", "eps_grid", table_eps_grid());
  const double eps_single = c.get_num("oracle", "epsilon", 0.0);

  CsvWriter kl_csv({"hsq", "sigma0", "case", "epsilon", "kl"});
  CsvWriter L_csv({"hsq", "sigma0", "case", "L", "r2"});
  for (double s0 : sigma0s)
    for (double cs : cases_d)
      for (double hsq : hsqs) {
        OracleSpec spec;
        spec.sigma0 = s0;
        spec.T = T;
        spec.h = std::sqrt(hsq);
        spec.pert = Perturbation::error_case(static_cast<int>(cs), 0.0, mask_c);
        if (eps_single > 0.0) {
          spec.pert.epsilon = eps_single;
          kl_csv.add_row({hsq, s0, cs, eps_single, oracle_kl(spec)});
          spec.pert.epsilon = 0.0;
        }
        auto fit = oracle_leading_L(spec, eps_grid);
        for (size_t i = 0; i < eps_grid.size(); ++i)
          kl_csv.add_row({hsq, s0, cs, eps_grid[i], fit.kl[i]});
        L_csv.add_row({hsq, s0, cs, fit.L, fit.r2});
      }
  kl_csv.write(ctx.path("oracle_kl.csv"));
  L_csv.write(ctx.path("oracle_L.csv"));
  ctx.record("oracle_kl.csv");
  ctx.record("oracle_L.csv");
}

void run_fpsolve(const Config& c, RunContext& ctx) {
  const double T = c.get_num("fp", "T", 2.0);
  const double s0 = c.get_num("fp", "sigma0", 0.5);
  const int err_case = static_cast<int>(c.get_int("fp", "case", 1));
  const double mask_c = c.get_num("fp", "mask_c", -1.0);
  Grid1D grid;
  grid.n = static_cast<int>(c.get_int("fp", "grid_n", 800));
  grid.R = c.get_num("fp", "grid_r", 8.0);
  grid.dt = c.get_num("fp", "dt", 0.0);
  const auto hsqs = c.get_list("fp", "hsq_grid", {c.get_num("fp", "hsq", 1.0)});

  Gaussian1D model(s0, ScheduleParams::unit(T));
  CsvWriter csv({"hsq", "L", "tail_mass", "defect"});
  std::vector<std::vector<double>> rows(hsqs.size());
  parallel_for_each(static_cast<int64_t>(hsqs.size()), [&](int64_t i) {
    const double hsq = hsqs[i];
    FPSolver solver(model, std::sqrt(hsq), grid, T);
    auto v = solver.evolve_perturbation(Perturbation::error_case(err_case, 1.0, mask_c));
    Eigen::VectorXd xc = solver.grid().centers();
    Batch pts(1, xc.size());
    pts.row(0) = xc.transpose();
    Eigen::VectorXd logp;
    model.log_density_batch(0.0, pts, logp);
    double tail = 0.0;
    const double L = leading_L_pde(v.v, logp.array().exp(), solver.grid().dx(), &tail);
    const double defect = semigroup_defect(model, std::sqrt(hsq), grid, T, 0.0, T / 2, T);
    rows[i] = {hsq, L, tail, defect};
  });
  for (auto& r : rows) csv.add_row(r);
  csv.write(ctx.path("fpsolve.csv"));
  ctx.record("fpsolve.csv");
}

void run_sweep(const Config& c, RunContext& ctx) {
  SweepProblem prob;
  prob.sigma0 = c.get_num("sweep", "sigma0", 0.5);
  prob.T = c.get_num("sweep", "T", 2.0);
  prob.error_case = static_cast<int>(c.get_int("sweep", "case", 1));
  prob.mask_c = c.get_num("sweep", "mask_c", -1.0);
  if (c.has("sweep", "eps_grid")) prob.eps_grid = c.get_list("sweep", "eps_grid");
  prob.grid.n = static_cast<int>(c.get_int("sweep", "grid_n", 800));
  prob.grid.R = c.get_num("sweep", "grid_r", 8.0);
  prob.mc_steps = c.get_int("sweep", "mc_steps", 40000);
  prob.mc_batch = c.get_int("sweep", "mc_batch", 100000);
  prob.mc_eps = c.get_num("sweep", "mc_eps", 0.2);
  prob.seed = static_cast<uint64_t>(c.get_int("run", "seed", 1));
  const auto hsq_grid =
      c.get_list("sweep", "hsq_grid", {0.0, 0.5, 1.0, 2.0, 4.0, 7.0, 10.0, 14.0, 20.0});

  CsvWriter sweep_csv({"hsq", "eps", "metric", "value", "source", "r2", "error"});
  CsvWriter fits_csv({"source", "what", "slope", "intercept", "r2", "n_used", "n_excluded",
                      "flagged", "T_hat", "plateau_unreliable"});
  std::vector<SvgSeries> series;
  for (const std::string& sname : c.get_str_list("sweep", "sources")) {
    KlSource src;
    if (sname == "oracle") src = KlSource::Oracle;
    else if (sname == "pde") src = KlSource::Pde;
    else if (sname == "mc") src = KlSource::Mc;
    else throw ConfigError("config: [sweep] source '" + sname + "' unknown");
    auto res = sweep_h(prob, hsq_grid, src);
    std::vector<double> hs, Ls;
    for (const auto& r : res.rows) {
      sweep_csv.add_row({CsvWriter::format(r.hsq), CsvWriter::format(r.eps), r.metric,
                         CsvWriter::format(r.value), r.source, CsvWriter::format(r.r2),
                         r.error});
      if (r.metric == "L" && r.error.empty()) {
        hs.push_back(r.hsq);
        Ls.push_back(r.value);
      }
    }
    auto decay = fit_decay(hs, Ls);
    fits_csv.add_row({sname, "decay", CsvWriter::format(decay.slope),
                      CsvWriter::format(decay.intercept), CsvWriter::format(decay.r2),
                      std::to_string(decay.n_used), std::to_string(decay.n_excluded),
                      decay.flagged ? "1" : "0", "", ""});
    if (!hs.empty() && hs.back() >= 20.0 && hs.size() >= 3) {
      auto pl = plateau_estimate(hs, Ls);
      fits_csv.add_row({sname, "plateau", CsvWriter::format(pl.rate.slope),
                        CsvWriter::format(pl.rate.intercept), CsvWriter::format(pl.rate.r2),
                        std::to_string(pl.rate.n_used), std::to_string(pl.rate.n_excluded),
                        pl.rate.flagged ? "1" : "0", CsvWriter::format(pl.T_hat),
                        pl.unreliable ? "1" : "0"});
    }
    SvgSeries s;
    s.label = sname;
    for (size_t i = 0; i < hs.size(); ++i)
      if (Ls[i] > 0) {
        s.x.push_back(hs[i]);
        s.y.push_back(std::log10(Ls[i]));
      }
    series.push_back(std::move(s));
  }
  sweep_csv.write(ctx.path("sweep.csv"));
  fits_csv.write(ctx.path("fits.csv"));
  ctx.record("sweep.csv");
  ctx.record("fits.csv");
  if (c.get_bool("sweep", "svg", false)) {
    write_line_chart(ctx.path("sweep.svg"), "leading-order coefficient", "h^2", "log10 L",
                     series);
    ctx.record("sweep.svg");
  }
}

void run_sample(const Config& c, RunContext& ctx) {
  Problem pr = problem_from(c);
  const uint64_t seed = static_cast<uint64_t>(c.get_int("run", "seed", 1));
  SamplerConfig scfg = sampler_from(c, seed);

  // h profile: alpha_of_g keeps the given clock with h = h_value * g;
  // const_unit_time simulates the rescaled unit-g problem on [0, theta]
  // with a constant h = h_value (equivalent in law by the time rescaling).
  const std::string h_mode = c.get_str("schedule", "h_mode", "alpha_of_g");
  if (c.has("schedule", "h_value")) scfg.alpha = c.get_num("schedule", "h_value");
  if (h_mode == "const_unit_time" && !pr.params.is_unit()) {
    if (c.get_str("score", "family", "gauss1d") != "gauss1d")
      throw ConfigError("config: const_unit_time needs the gauss1d family");
    const double theta = rescale_to_unit_g(pr.params, [](double) { return 0.0; }).theta;
    pr.params = ScheduleParams::unit(theta);
    pr.model = std::make_unique<Gaussian1D>(c.get_num("score", "sigma0", 0.5), pr.params);
  } else if (h_mode != "alpha_of_g" && h_mode != "const_unit_time") {
    throw ConfigError("config: [schedule] h_mode '" + h_mode + "' unknown");
  }
  if (!pr.model) throw ConfigError("config: sampling needs a score model");

  PerturbedScore score(*pr.model, pert_from(c));
  auto batch = simulate_reverse(score, pr.params, scfg, pr.p0.get());
  write_samples_csv(ctx.path("samples.csv"), batch.terminal);
  ctx.record("samples.csv");
}

void run_train(const Config& c, RunContext& ctx) {
  const std::string dataset = c.get_str("train", "dataset", "swissroll");
  ScheduleParams params;
  params.beta0 = c.get_num("schedule", "beta0", 0.1);
  params.beta1 = c.get_num("schedule", "beta1", 20.0);
  params.T = c.get_num("schedule", "T", 1.0);
  std::unique_ptr<P0Sampler> p0;
  std::unique_ptr<GaussianMixture> keep;
  if (dataset == "swissroll") {
    p0 = std::make_unique<SwissRollP0>();
  } else if (dataset == "gmm1d") {
    keep = std::make_unique<GaussianMixture>(make_gmm1d_2mode(params));
    p0 = std::make_unique<GmmP0>(*keep);
  } else if (dataset == "gmm2d") {
    keep = std::make_unique<GaussianMixture>(make_gmm2d_4mode(params));
    p0 = std::make_unique<GmmP0>(*keep);
  } else {
    throw ConfigError("config: [train] dataset '" + dataset + "' unknown");
  }
  TrainConfig tcfg;
  tcfg.steps = c.get_int("train", "steps", 20000);
  tcfg.batch = c.get_int("train", "batch", 400);
  tcfg.lr = c.get_num("train", "lr", 0.01);
  tcfg.lr_halve_every = c.get_int("train", "lr_halve_every", 8000);
  tcfg.t_min_frac = c.get_num("train", "t_min_frac", 0.01);
  tcfg.seed = static_cast<uint64_t>(c.get_int("run", "seed", 1));
  tcfg.plain_sgd = c.get_bool("train", "plain_sgd", false);
  const WeightScheme weight =
      weight_scheme_from_name(c.get_str("train", "weight", "default"));

  auto result = train_dsm(*p0, params, weight, tcfg);
  result.model.save(ctx.path("model.bin"));
  ctx.record("model.bin");

  CsvWriter loss({"step", "loss"});
  for (size_t i = 0; i < result.loss_trace.size(); ++i)
    loss.add_row({static_cast<double>((i + 1) * tcfg.loss_window), result.loss_trace[i]});
  loss.write(ctx.path("loss.csv"));
  ctx.record("loss.csv");

  if (c.get_bool("train", "relsml", false)) {
    auto base = weight == WeightScheme::Default
                    ? std::move(result)
                    : train_dsm(*p0, params, WeightScheme::Default, tcfg);
    const auto& model_w = weight == WeightScheme::Default ? base.model : result.model;
    // evaluation t grid and held-out draws
    std::vector<double> t_grid;
    for (int i = 1; i <= 32; ++i) t_grid.push_back(params.T * i / 32.0);
    Batch eval = p0->draw_batch({tcfg.seed ^ 0xabcdef, rng::kStreamEval}, 0, 2000);
    auto curve = relative_sml(model_w, base.model, params, t_grid, eval, tcfg.seed);
    CsvWriter rel({"t", "ratio"});
    for (size_t i = 0; i < t_grid.size(); ++i) rel.add_row({t_grid[i], curve[i]});
    rel.write(ctx.path("relsml.csv"));
    ctx.record("relsml.csv");
  }
}

void run_metrics(const Config& c, RunContext& ctx) {
  const Eigen::MatrixXd a = read_samples_csv(c.get_str("metrics", "file_a"));
  const Eigen::MatrixXd b = read_samples_csv(c.get_str("metrics", "file_b"));
  const int bins = static_cast<int>(c.get_int("metrics", "bins", 100));
  if (a.rows() != b.rows()) throw ConfigError("metrics: sample dims differ");
  if (a.rows() == 1) {
    BinGrid grid = BinGrid::from_reference(a.row(0).transpose(), bins);
    CsvWriter csv({"kl", "js", "w1"});
    csv.add_row({hist_kl(a.row(0).transpose(), b.row(0).transpose(), grid),
                 hist_js(a.row(0).transpose(), b.row(0).transpose(), grid),
                 w1_1d(a.row(0).transpose(), b.row(0).transpose())});
    csv.write(ctx.path("metrics.csv"));
  } else if (a.rows() == 2) {
    CsvWriter csv({"kl", "js", "w1", "kl_x0", "kl_x1", "js_x0", "js_x1", "w1_x0", "w1_x1"});
    double kls[2], jss[2], w1s[2];
    for (int ax = 0; ax < 2; ++ax) {
      BinGrid grid = BinGrid::from_reference(a.row(ax).transpose(), bins);
      kls[ax] = hist_kl(a.row(ax).transpose(), b.row(ax).transpose(), grid);
      jss[ax] = hist_js(a.row(ax).transpose(), b.row(ax).transpose(), grid);
      w1s[ax] = w1_1d(a.row(ax).transpose(), b.row(ax).transpose());
    }
    const uint64_t seed = static_cast<uint64_t>(c.get_int("run", "seed", 1));
    csv.add_row({0.5 * (kls[0] + kls[1]), 0.5 * (jss[0] + jss[1]),
                 w1_sliced_2d(a, b, 64, seed), kls[0], kls[1], jss[0], jss[1], w1s[0],
                 w1s[1]});
    csv.write(ctx.path("metrics.csv"));
  } else {
    throw ConfigError("metrics: only 1D/2D samples supported");
  }
  ctx.record("metrics.csv");
}

void run_alpha_sweep(const Config& c, RunContext& ctx) {
  Problem pr = problem_from(c);
  if (!pr.model) throw ConfigError("config: alpha_sweep needs a score model");
  const uint64_t seed = static_cast<uint64_t>(c.get_int("run", "seed", 1));
  const auto alphas = c.get_list("alpha_sweep", "alpha_grid", {0.0, 0.5, 1.0, 1.5, 2.0});
  const int64_t n_ref = c.get_int("alpha_sweep", "ref_samples", 10000);
  const int bins = static_cast<int>(c.get_int("alpha_sweep", "bins", 100));
  const Perturbation pert = pert_from(c);
  const int dim = pr.model->dim();

  // fixed reference draw and binning shared across the sweep
  const Batch ref = pr.p0->draw_batch({seed ^ 0x5eed, rng::kStreamData}, 0, n_ref);
  std::vector<BinGrid> grids;
  for (int ax = 0; ax < dim; ++ax)
    grids.push_back(BinGrid::from_reference(ref.row(ax).transpose(), bins));

  std::vector<std::vector<double>> rows(alphas.size());
  parallel_for_each(static_cast<int64_t>(alphas.size()), [&](int64_t i) {
    SamplerConfig scfg = sampler_from(c, seed);
    scfg.alpha = alphas[i];
    PerturbedScore score(*pr.model, pert);
    auto batch = simulate_reverse(score, pr.params, scfg, pr.p0.get());
    std::vector<double> row{alphas[i]};
    for (int ax = 0; ax < dim; ++ax) {
      row.push_back(hist_kl(ref.row(ax).transpose(), batch.terminal.row(ax).transpose(),
                            grids[ax]));
      row.push_back(hist_js(ref.row(ax).transpose(), batch.terminal.row(ax).transpose(),
                            grids[ax]));
    }
    if (dim == 2)
      row.push_back(w1_sliced_2d(ref, batch.terminal, 64, seed));
    else
      row.push_back(w1_1d(ref.row(0).transpose(), batch.terminal.row(0).transpose()));
    rows[i] = std::move(row);
  });

  std::vector<std::string> header{"alpha"};
  for (int ax = 0; ax < dim; ++ax) {
    header.push_back("kl_x" + std::to_string(ax));
    header.push_back("js_x" + std::to_string(ax));
  }
  header.push_back(dim == 2 ? "sliced_w1" : "w1");
  CsvWriter trend(header);
  for (auto& r : rows) trend.add_row(r);
  trend.write(ctx.path("trend.csv"));
  ctx.record("trend.csv");

  CsvWriter fits({"metric", "spearman"});
  for (size_t col = 1; col < header.size(); ++col) {
    std::vector<double> xs, ys;
    for (auto& r : rows) {
      xs.push_back(r[0]);
      ys.push_back(r[col]);
    }
    fits.add_row({header[col], CsvWriter::format(spearman(xs, ys))});
  }
  fits.write(ctx.path("trend_fits.csv"));
  ctx.record("trend_fits.csv");
}

}  // namespace

RunOutcome run_config(const Config& cfg, std::string out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string kind = cfg.get_str("run", "kind");

  RunContext ctx;
  if (out_dir.empty()) {
    const std::string parent = cfg.get_str("output", "dir", "runs");
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y%m%dT%H%M%S", std::gmtime(&tt));
    char hash[24];
    std::snprintf(hash, sizeof(hash), "%08llx",
                  static_cast<unsigned long long>(fnv1a64(cfg.resolved_text()) & 0xffffffffull));
    ctx.dir = fs::path(parent) / (std::string(stamp) + "-" + hash);
  } else {
    ctx.dir = out_dir;
  }
  fs::create_directories(ctx.dir);

  if (kind == "oracle") run_oracle(cfg, ctx);
  else if (kind == "fpsolve") run_fpsolve(cfg, ctx);
  else if (kind == "sweep") run_sweep(cfg, ctx);
  else if (kind == "sample") run_sample(cfg, ctx);
  else if (kind == "train") run_train(cfg, ctx);
  else if (kind == "metrics") run_metrics(cfg, ctx);
  else if (kind == "alpha_sweep") run_alpha_sweep(cfg, ctx);
  else throw ConfigError("config: [run] kind '" + kind + "' unknown");

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  nlohmann::json manifest;
  manifest["version"] = kVersionString;
  manifest["kind"] = kind;
  manifest["seed"] = cfg.get_int("run", "seed", 1);
  manifest["wall_seconds"] = wall;
  manifest["workers"] = worker_count();
  manifest["config"] = cfg.resolved_text();
  for (const auto& [name, sum] : ctx.checksums) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(sum));
    manifest["outputs"][name] = {{"fnv1a64", buf}, {"bytes", ctx.sizes[name]}};
  }
  std::ofstream mf(ctx.dir / "manifest.json");
  mf << manifest.dump(2) << "\n";

  return {ctx.dir.string(), 0};
}

RunOutcome run_config_file(const std::string& path, std::string out_dir) {
  return run_config(Config::load(path), std::move(out_dir));
}

}  // namespace difflab
