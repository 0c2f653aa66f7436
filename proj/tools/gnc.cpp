//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gnc/cli/commands.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  unsigned threads = 0;
  std::string seed;
  std::vector<std::string> sets;
};

}  // namespace

int main(int argc, char **argv) {
  using namespace gnc::cli;

  CLI::App app { "gnc: latent-space generation and multi-target screening" };
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("-c,--config", opt.config, "JSON configuration file");
  app.add_option("-o,--out", opt.out, "work directory (default gnc_out)");
  app.add_option("-j,--threads", opt.threads, "thread cap for parallel stages");
  app.add_option("--seed", opt.seed, "RNG seed (overrides config 'seed')");
  app.add_option("--set", opt.sets, "config override key.path=value")
      ->take_all();

  using Command = int (*)(const Config &, std::ostream &);
  const std::vector<std::tuple<const char *, const char *, Command>> commands {
    { "ingest", "validate the dataset and build the library index", cmd_ingest },
    { "train", "fit models per target with k-fold CV", cmd_train },
    { "generate", "sample latent trajectories", cmd_generate },
    { "screen", "run the gate sequence over the latent batch", cmd_screen },
    { "optimize", "hydroxyl scan over screened molecules", cmd_optimize },
    { "report", "histogram and stage-count tables", cmd_report },
  };
  Command chosen = nullptr;
  for (const auto &[name, help, fn]: commands) {
    auto *sub = app.add_subcommand(name, help);
    sub->callback([&chosen, fn = fn] { chosen = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  return run_command(
      [&] {
        auto overrides = opt.sets;
        if (!opt.seed.empty())
          overrides.push_back("seed=" + opt.seed);
        Config c = load_config(opt.config, overrides);
        if (!opt.out.empty())
          c.out_dir = opt.out;
        else if (!opt.config.empty())
          c.out_dir = c.base_dir / "gnc_out";
        if (opt.threads > 0)
          c.threads = opt.threads;
        return chosen(c, std::cout);
      },
      std::cerr);
}
