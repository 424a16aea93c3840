// difflab CLI: thin front end over the C API. Subcommands either call the
// one-shot helpers or assemble a config and hand it to the run entry point.
#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "difflab.h"

namespace {

int check(dfl_status st) {
  if (st == DFL_OK) return 0;
  std::fprintf(stderr, "error: %s\n", dfl_last_error());
  return st == DFL_ERR_CONFIG ? 2 : 1;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int run_text(const std::string& text, const std::string& out_dir) {
  char* dir = nullptr;
  const dfl_status st =
      dfl_run_config_text(text.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(), &dir);
  if (st == DFL_OK) {
    std::printf("artifacts: %s\n", dir);
    dfl_string_free(dir);
    return 0;
  }
  return check(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"difflab — reverse-diffusion noise-level laboratory"};
  app.require_subcommand(1);
  std::string out_dir;
  app.add_option("--out", out_dir, "artifacts directory (default runs/<stamp>-<hash>)");

  // run <config>
  auto* run = app.add_subcommand("run", "execute an experiment config file");
  std::string config_path;
  run->add_option("config", config_path, "config file")->required();

  // oracle
  auto* oracle = app.add_subcommand("oracle", "closed-form 1D Gaussian leading order");
  dfl_oracle_spec ospec{0.2, 2.0, 20.0, 1, -1.0, 0.0};
  oracle->add_option("--sigma0", ospec.sigma0, "data std");
  oracle->add_option("--hsq", ospec.hsq, "h^2 on the unit-g clock");
  oracle->add_option("--case", ospec.error_case, "error case 1..5");
  oracle->add_option("--mask-c", ospec.mask_c, "indicator threshold fraction");
  oracle->add_option("--epsilon", ospec.epsilon, "error magnitude (0: report L only)");
  oracle->add_option("--T", ospec.T, "time horizon");

  // fpsolve
  auto* fp = app.add_subcommand("fpsolve", "finite-volume leading order");
  dfl_fp_spec fspec{0.5, 2.0, 1.0, 1, -1.0, 800, 8.0, 0.0};
  fp->add_option("--sigma0", fspec.sigma0, "data std");
  fp->add_option("--hsq", fspec.hsq, "h^2 on the unit-g clock");
  fp->add_option("--case", fspec.error_case, "error case 1..5");
  fp->add_option("--mask-c", fspec.mask_c, "indicator threshold fraction");
  fp->add_option("--grid-n", fspec.grid_n, "grid cells");
  fp->add_option("--grid-R", fspec.grid_r, "half width");
  fp->add_option("--dt", fspec.dt, "time step (0 = auto)");
  fp->add_option("--T", fspec.T, "time horizon");

  // sample
  auto* sample = app.add_subcommand("sample", "simulate the reverse SDE, write samples.csv");
  std::string family = "gauss1d", scheme = "em", init = "exact_pt";
  double sigma0 = 0.5, alpha = 1.0, epsilon = 0.0, T = 2.0, beta0 = 1.0, beta1 = 1.0;
  std::string mask = "one";
  double mask_c = 0.95;
  long long steps = 1000, batch = 10000, seed = 1;
  sample->add_option("--family", family, "gauss1d|gmm1d|gmm2d|mlp");
  std::string model_file;
  sample->add_option("--model", model_file, "trained score file (family mlp)");
  sample->add_option("--sigma0", sigma0, "gauss1d data std");
  sample->add_option("--scheme", scheme, "em|ei");
  sample->add_option("--steps", steps, "time steps");
  sample->add_option("--batch", batch, "trajectories");
  sample->add_option("--seed", seed, "seed");
  sample->add_option("--alpha", alpha, "h = alpha g");
  sample->add_option("--init", init, "exact_pt|standard_normal");
  sample->add_option("--epsilon", epsilon, "score error magnitude");
  sample->add_option("--mask", mask, "error time mask");
  sample->add_option("--mask-c", mask_c, "indicator threshold fraction");
  sample->add_option("--T", T, "time horizon");
  sample->add_option("--beta0", beta0, "schedule beta0");
  sample->add_option("--beta1", beta1, "schedule beta1");

  // train
  auto* train = app.add_subcommand("train", "denoising score matching");
  std::string dataset = "swissroll", weight = "default";
  long long tsteps = 20000, tseed = 1;
  bool relsml = false;
  train->add_option("--dataset", dataset, "swissroll|gmm1d|gmm2d");
  train->add_option("--weight", weight, "default|noise|data");
  train->add_option("--steps", tsteps, "optimizer steps");
  train->add_option("--seed", tseed, "seed");
  train->add_flag("--relsml", relsml, "emit relative score-matching loss vs default");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "compare two sample CSV files");
  std::string file_a, file_b;
  int bins = 100;
  metrics->add_option("ref", file_a, "reference samples CSV")->required();
  metrics->add_option("gen", file_b, "generated samples CSV")->required();
  metrics->add_option("--bins", bins, "bins per axis");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "h^2 sweep from a config file");
  std::string sweep_config;
  sweep->add_option("config", sweep_config, "config file")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    char* dir = nullptr;
    const dfl_status st = dfl_run_config_file(
        config_path.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(), &dir);
    if (st == DFL_OK) {
      std::printf("artifacts: %s\n", dir);
      dfl_string_free(dir);
      return 0;
    }
    return check(st);
  }
  if (oracle->parsed()) {
    double L = 0, r2 = 0;
    if (check(dfl_oracle_leading_l(&ospec, nullptr, 0, &L, &r2))) return 1;
    std::printf("hsq,sigma0,case,L,r2\n%s,%s,%d,%s,%s\n", num(ospec.hsq).c_str(),
                num(ospec.sigma0).c_str(), ospec.error_case, num(L).c_str(), num(r2).c_str());
    if (ospec.epsilon > 0.0) {
      double kl = 0;
      if (check(dfl_oracle_kl(&ospec, &kl))) return 1;
      std::printf("hsq,sigma0,case,epsilon,kl\n%s,%s,%d,%s,%s\n", num(ospec.hsq).c_str(),
                  num(ospec.sigma0).c_str(), ospec.error_case, num(ospec.epsilon).c_str(),
                  num(kl).c_str());
    }
    return 0;
  }
  if (fp->parsed()) {
    double L = 0, tail = 0, defect = 0;
    if (check(dfl_fp_leading_l(&fspec, &L, &tail, &defect))) return 1;
    std::printf("hsq,L,tail_mass,defect\n%s,%s,%s,%s\n", num(fspec.hsq).c_str(),
                num(L).c_str(), num(tail).c_str(), num(defect).c_str());
    return 0;
  }
  if (sample->parsed()) {
    std::string text;
    text += "[run]\nkind = sample\nseed = " + std::to_string(seed) + "\n";
    text += "[schedule]\nbeta0 = " + num(beta0) + "\nbeta1 = " + num(beta1) +
            "\nT = " + num(T) + "\n";
    text += "[score]\nfamily = " + family + "\nsigma0 = " + num(sigma0) + "\n";
    if (!model_file.empty()) text += "model_file = " + model_file + "\n";
    text += "[pert]\nepsilon = " + num(epsilon) + "\nmask = " + mask +
            "\nmask_c = " + num(mask_c) + "\n";
    text += "[sampler]\nscheme = " + scheme + "\nsteps = " + std::to_string(steps) +
            "\nbatch = " + std::to_string(batch) + "\nalpha = " + num(alpha) +
            "\ninit = " + init + "\n";
    return run_text(text, out_dir);
  }
  if (train->parsed()) {
    std::string text;
    text += "[run]\nkind = train\nseed = " + std::to_string(tseed) + "\n";
    text += "[train]\ndataset = " + dataset + "\nweight = " + weight +
            "\nsteps = " + std::to_string(tsteps) + "\n";
    if (relsml) text += "relsml = true\n";
    return run_text(text, out_dir);
  }
  if (metrics->parsed()) {
    double kl = 0, js = 0, w1 = 0;
    if (check(dfl_metrics_csv(file_a.c_str(), file_b.c_str(), bins, &kl, &js, &w1)))
      return 1;
    std::printf("kl,js,w1\n%s,%s,%s\n", num(kl).c_str(), num(js).c_str(), num(w1).c_str());
    return 0;
  }
  if (sweep->parsed()) {
    char* dir = nullptr;
    const dfl_status st = dfl_run_config_file(
        sweep_config.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(), &dir);
    if (st == DFL_OK) {
      std::printf("artifacts: %s\n", dir);
      dfl_string_free(dir);
      return 0;
    }
    return check(st);
  }
  return 2;
}
