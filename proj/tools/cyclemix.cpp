// cyclemix: exact mixing analysis of symmetric random walks on Z/pZ.
//
// Subcommands: analyze | random | power2 | tau0 | c0 | clt | theta | sweep.
// Exit codes: 0 ok, 2 validation error, 3 capacity error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "cyclemix/experiments.hpp"
#include "cyclemix/local_clt.hpp"
#include "cyclemix/theta.hpp"

namespace {

using cyclemix::ExperimentConfig;

void emit(const ExperimentConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw cyclemix::ValidationError("cannot open output file " + cfg.out);
  f << text;
}

std::string scalar_line(const char* name, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s = %.12g\n", name, value);
  return buf;
}

int run(int argc, char** argv) {
  CLI::App app{"exact mixing behavior of symmetric random walks on Z/pZ"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::vector<std::string> p_args;
  cfg.jobs = std::max(1u, std::thread::hardware_concurrency());

  const auto add_common = [&](CLI::App* sub, bool with_p) {
    if (with_p) sub->add_option("--p", p_args, "prime modulus (repeat or comma-separate for a grid)");
    sub->add_option("--seed", cfg.seed, "master seed; fully determines all randomness");
    sub->add_option("--eps", cfg.eps, "total-variation thresholds");
    sub->add_option("--jobs", cfg.jobs, "worker threads");
    sub->add_option("--format", cfg.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.out, "output path (default stdout)");
  };

  auto* analyze = app.add_subcommand("analyze", "full report for one explicit generating set");
  add_common(analyze, true);
  analyze->add_option("--half", cfg.half, "half set, e.g. --half 1,2")->required();
  analyze->add_option("--mc-samples", cfg.mc_samples, "covering-radius samples (k >= 3)");

  auto* random = app.add_subcommand("random", "uniform random generating-set ensemble");
  add_common(random, true);
  random->add_option("--k", cfg.k, "number of generator pairs");
  random->add_option("--k-rule", cfg.k_rule, "k as a function of p (logp_over_loglogp)");
  random->add_option("--trials", cfg.trials, "ensemble size");
  random->add_option("--rho", cfg.rho, "tail thresholds for the relaxation-time summary");

  auto* power2 = app.add_subcommand("power2", "power-of-2 walk cut-off check");
  add_common(power2, true);

  auto* sweep = app.add_subcommand("sweep", "power-of-2 cut-off trend over a p grid");
  add_common(sweep, true);

  auto* tau0_cmd = app.add_subcommand("tau0", "circle diffusion mixing/relaxation constant");
  add_common(tau0_cmd, false);
  tau0_cmd->add_option("--tol", cfg.tol, "absolute tolerance");

  auto* c0_cmd = app.add_subcommand("c0", "power-of-2 rate constant");
  add_common(c0_cmd, false);
  c0_cmd->add_option("--tol", cfg.tol, "absolute tolerance");

  auto* clt = app.add_subcommand("clt", "local CLT total-variation check");
  add_common(clt, false);
  clt->add_option("--k", cfg.clt_k, "dimension (1..3)");
  clt->add_option("--n", cfg.clt_n, "step count");

  auto* theta = app.add_subcommand("theta", "Monte Carlo theta TV on the lattice of a set");
  add_common(theta, true);
  theta->add_option("--half", cfg.half, "half set")->required();
  theta->add_option("--t", cfg.theta_t, "diffusion time")->required();
  theta->add_option("--mc-samples", cfg.mc_samples, "sample count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // flag/usage problems are validation errors
  }

  for (const std::string& arg : p_args) {
    std::size_t pos = 0;
    while (pos < arg.size()) {
      std::size_t next = arg.find(',', pos);
      if (next == std::string::npos) next = arg.size();
      const std::string tok = arg.substr(pos, next - pos);
      try {
        cfg.p_grid.push_back(std::stoull(tok));
      } catch (const std::exception&) {
        throw cyclemix::ValidationError("cannot parse modulus '" + tok + "'");
      }
      pos = next + 1;
    }
  }

  if (analyze->parsed()) {
    cfg.command = "analyze";
    emit(cfg, cyclemix::render_analyze(cfg, cyclemix::run_analyze(cfg)));
  } else if (random->parsed()) {
    cfg.command = "random";
    emit(cfg, cyclemix::render_random(cfg, cyclemix::run_random(cfg)));
  } else if (power2->parsed() || sweep->parsed()) {
    cfg.command = power2->parsed() ? "power2" : "sweep";
    emit(cfg, cyclemix::render_power2(cfg, cyclemix::run_power2(cfg)));
  } else if (tau0_cmd->parsed()) {
    cfg.command = "tau0";
    const double v = cyclemix::tau0(cfg.tol);
    if (cfg.format == "json") emit(cfg, cyclemix::render_scalar(cfg, "tau0", v));
    else emit(cfg, scalar_line("tau0", v));
  } else if (c0_cmd->parsed()) {
    cfg.command = "c0";
    const double v = cyclemix::c0(cfg.tol);
    if (cfg.format == "json") emit(cfg, cyclemix::render_scalar(cfg, "c0", v));
    else emit(cfg, scalar_line("c0", v));
  } else if (clt->parsed()) {
    cfg.command = "clt";
    const double v = cyclemix::clt_tv(cfg.clt_k, cfg.clt_n);
    if (cfg.format == "json") emit(cfg, cyclemix::render_scalar(cfg, "clt_tv", v));
    else emit(cfg, scalar_line("clt_tv", v));
  } else if (theta->parsed()) {
    cfg.command = "theta";
    const cyclemix::GenSet a = cyclemix::GenSet::parse(cfg.p(), cfg.half);
    const cyclemix::IndexPLattice l = cyclemix::lattice_of(a);
    const cyclemix::McEstimate est =
        cyclemix::theta_tv_mc(l, cfg.theta_t, cfg.mc_samples, cfg.seed);
    const double proj = cyclemix::theta0_projection_tv(l, cfg.theta_t);
    emit(cfg, cyclemix::render_theta(cfg, est.estimate, est.std_error, proj));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const cyclemix::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const cyclemix::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
