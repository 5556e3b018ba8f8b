#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gbo/config.hpp"
#include "gbo/error.hpp"
#include "gbo/runner.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::vector<std::string> suites;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "JSON config file (defaults are used when omitted)");
  sub->add_option("--out", o.out, "output directory (GBO_LAB_OUT takes precedence)");
  sub->add_option("--seed", o.seed, "seed for random ensembles");
  sub->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
}

int execute(const std::string& command, const Options& o, CLI::App* sub) {
  gbo::RunConfig c = o.config.empty() ? gbo::parse_config_text("{}") : gbo::parse_config(o.config);
  if (sub->count("--seed")) c.seed = o.seed;
  if (sub->count("--workers")) c.workers = o.workers;
  std::string out = c.out;
  if (!o.out.empty()) out = o.out;
  if (const char* env = std::getenv("GBO_LAB_OUT"); env && *env) out = env;

  if (command == "sweep") {
    if (!o.suites.empty()) c.suites = o.suites;
    const int status = gbo::run_sweep(c, out, c.workers);
    std::cout << "sweep: " << c.sweep.size() << " runs, status " << status << " (" << out << ")\n";
    return status;
  }
  c.suites = {gbo::suite_for_command(command)};
  const gbo::RunResult r = gbo::run(c, out);
  for (const auto& s : r.suites)
    std::cout << (s.passed ? "PASS " : "FAIL ") << s.name << ": " << s.message << "\n";
  if (r.status == gbo::kAborted) std::cout << "ABORT " << r.abort_message << "\n";
  return r.status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gbo-lab: simulation and verification runs for the generalized Benjamin-Ono equation"};
  app.require_subcommand(1);
  Options o;
  struct Cmd {
    const char* name;
    const char* help;
  };
  const Cmd cmds[] = {
      {"simulate", "run the configured simulation and the conservation checks"},
      {"verify-monotonicity", "monotonicity inequality on random fields and along a trajectory"},
      {"verify-local", "localized interaction functional across a radius ladder"},
      {"verify-positivity", "sphere-constrained minimization and random falsifier"},
      {"verify-norms", "paraproduct identity and space-time norm ratios"},
      {"sweep", "run the config's sweep overrides concurrently"},
  };
  std::vector<std::pair<std::string, CLI::App*>> subs;
  for (const auto& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, o);
    if (std::string(c.name) == "sweep")
      sub->add_option("--suite", o.suites, "suites to run in every sweep member");
    subs.emplace_back(c.name, sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : gbo::kAborted;
  }
  try {
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) return execute(name, o, sub);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return gbo::kAborted;
  }
  return gbo::kAborted;
}
