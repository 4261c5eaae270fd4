// Command-line front end: every flag mirrors a config-file key, a config file
// is loaded first and explicit flags override its values.

#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gsgd/errors.hpp"
#include "gsgd/harness.hpp"

namespace {

struct Subcommand {
  CLI::App* app = nullptr;
  std::string config_path;
  std::vector<std::pair<std::string, std::shared_ptr<std::string>>> options;
  std::function<void(const gsgd::KeyValueConfig&)> fn;
};

void add_keys(Subcommand& sub, const std::vector<std::string>& keys) {
  sub.app->add_option("--config", sub.config_path, "config file (key = value lines)");
  for (const std::string& key : keys) {
    auto storage = std::make_shared<std::string>();
    sub.app->add_option("--" + key, *storage, "sets the '" + key + "' key");
    sub.options.emplace_back(key, storage);
  }
}

gsgd::KeyValueConfig collect(const Subcommand& sub) {
  gsgd::KeyValueConfig cfg;
  if (!sub.config_path.empty())
    cfg = gsgd::KeyValueConfig::from_file(sub.config_path);
  for (const auto& [key, storage] : sub.options) {
    if (sub.app->count("--" + key) > 0) cfg.set(key, *storage);
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gsgd: graph-regularized low-rank matrix completion toolkit"};
  app.require_subcommand(1);

  std::vector<Subcommand> subs(6);

  subs[0].app = app.add_subcommand("synth", "generate a synthetic instance");
  add_keys(subs[0], {"m", "n", "r", "graph", "k", "communities", "intra_p", "inter_p",
                     "filter_scale", "identity_filter", "p", "sigma", "false_edges",
                     "seed", "out"});
  subs[0].fn = gsgd::cmd_synth;

  subs[1].app = app.add_subcommand("run", "run one solver on one instance");
  add_keys(subs[1], {"obs", "g1", "g2", "truth", "holdout", "p", "method", "r", "eta",
                     "beta", "lambda", "max_iters", "target_rmse", "rel_change_tol",
                     "projection", "radius", "c_b", "init", "seed", "out"});
  subs[1].fn = gsgd::cmd_run;

  subs[2].app = app.add_subcommand("bench", "grid-searched solver comparison");
  add_keys(subs[2], {"methods", "p_list", "sigma_list", "seeds", "m", "n", "r", "graph",
                     "k", "communities", "intra_p", "inter_p", "filter_scale",
                     "identity_filter", "false_edges", "grid_eta_mults", "grid_betas",
                     "grid_lambdas", "grid_iters", "final_iters", "seed", "out"});
  subs[2].fn = gsgd::cmd_bench;

  subs[3].app = app.add_subcommand("ingest", "ratings file -> observations + graphs");
  add_keys(subs[3], {"ratings", "format", "holdout_fraction", "user_features",
                     "item_features", "g1", "g2", "knn_k", "seed", "out"});
  subs[3].fn = gsgd::cmd_ingest;

  subs[4].app = app.add_subcommand("eval", "diagnostics for an instance / solution");
  add_keys(subs[4], {"truth", "g1", "g2", "w", "h", "obs", "r", "beta", "lambda", "out"});
  subs[4].fn = gsgd::cmd_eval;

  subs[5].app = app.add_subcommand("toy2d", "two-point factorization trajectories");
  add_keys(subs[5], {"case", "seed", "iters", "beta", "lambda", "out"});
  subs[5].fn = gsgd::cmd_toy2d;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    for (const Subcommand& sub : subs) {
      if (sub.app->parsed()) {
        sub.fn(collect(sub));
        return 0;
      }
    }
    std::cerr << "no subcommand selected\n";
    return 1;
  } catch (const gsgd::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const gsgd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
