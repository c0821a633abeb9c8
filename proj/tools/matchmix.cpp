// matchmix: command line front end for the experiments.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matchmix/harness.hpp"

namespace hx = matchmix::harness;

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification of the k-perfect-matching random walk"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; flags override its fields")
      ->check(CLI::ExistingFile);

  // Flag values, applied only when given.
  std::int32_t n = 0, k = 2;
  std::vector<std::uint64_t> times;
  std::vector<double> t_factors, betas;
  std::uint64_t t_max = 50, seed = 0;
  double delta = 0.2;
  std::size_t reps = 1;
  std::string out, format = "csv";
  bool coupled = false;

  struct Opts {
    CLI::Option *n, *k, *t, *tf, *tmax, *beta, *delta, *reps, *seed, *out, *format, *coupled;
  };
  std::vector<std::pair<CLI::App*, Opts>> subs;
  const std::vector<std::pair<std::string, std::string>> kinds = {
      {"sample", "Draw matchings (uniform with --k 0, else k-rematches)"},
      {"walk", "Fixed-point profile of the walk from the identity"},
      {"tv-exact", "Exact total variation, full and lumped chains"},
      {"couple", "Three-stage coupling, one row per run"},
      {"contraction", "Contraction estimate per beta"},
      {"giant", "Giant component of the clique graph process"},
      {"verify", "Invariant suite over all modules"}};
  for (const auto& [name, help] : kinds) {
    CLI::App* s = app.add_subcommand(name, help);
    Opts o{};
    o.n = s->add_option("--n", n, "number of pairs");
    o.k = s->add_option("--k", k, "pairs rematched per round");
    o.t = s->add_option("--t", times, "observation rounds")->delimiter(',');
    o.tf = s->add_option("--t-factor", t_factors, "observation times as multiples of n log n / kappa")
               ->delimiter(',');
    o.tmax = s->add_option("--t-max", t_max, "last round for tv-exact");
    o.beta = s->add_option("--beta", betas, "beta values")->delimiter(',');
    o.delta = s->add_option("--delta", delta, "coupling delta");
    o.reps = s->add_option("--reps", reps, "independent replicas");
    o.seed = s->add_option("--seed", seed, "master seed");
    o.out = s->add_option("--out", out, "output file (default stdout)");
    o.format = s->add_option("--format", format, "csv or jsonl");
    o.coupled = s->add_flag("--coupled", coupled, "walk: track coalescence with a coupled copy");
    subs.emplace_back(s, o);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? hx::kOk : hx::kUsage;
  }

  hx::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = hx::load_config_file(config_path);
  } catch (const hx::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hx::kUsage;
  }
  for (auto& [s, o] : subs) {
    if (!s->parsed()) continue;
    if (!cfg.kind.empty() && cfg.kind != s->get_name()) {
      std::cerr << "error: config kind '" << cfg.kind << "' does not match subcommand '" << s->get_name()
                << "'\n";
      return hx::kUsage;
    }
    cfg.kind = s->get_name();
    if (o.n->count()) cfg.n = n;
    if (o.k->count()) cfg.k = k;
    if (o.t->count()) cfg.times = times;
    if (o.tf->count()) cfg.t_factors = t_factors;
    if (o.tmax->count()) cfg.t_max = t_max;
    if (o.beta->count()) cfg.betas = betas;
    if (o.delta->count()) cfg.delta = delta;
    if (o.reps->count()) cfg.reps = reps;
    if (o.seed->count()) cfg.seed = seed;
    if (o.out->count()) cfg.out = out;
    if (o.format->count()) cfg.format = format;
    if (o.coupled->count()) cfg.coupled = coupled;
  }
  return hx::run_experiment(cfg, std::cout, std::cerr);
}
