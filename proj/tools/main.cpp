#include <CLI11.hpp>

#include <iostream>

#include "runner.hpp"
#include "wmlab/errors.hpp"

using namespace wmlab::runner;

int main(int argc, char** argv) {
  CLI::App app{"wmlab: Weyl-Moyal scattering laboratory"};
  app.require_subcommand(1);

  std::string config, out;
  auto* run = app.add_subcommand("run", "run one scenario config");
  run->add_option("config", config, "scenario JSON file")->required();
  run->add_option("--out", out, "output directory (overrides the config)");

  app.add_subcommand("list-suites", "list the available suites");

  std::string which;
  auto* schema = app.add_subcommand("print-schema", "print the config keys of a suite (or all)");
  schema->add_option("suite", which, "suite name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors share the config-error exit code.
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  if (*run) {
    const RunResult r = run_scenario_file(config, out);
    if (r.code == kConfigError || r.code == kRuntimeError) {
      std::cerr << "wmlab: " << r.message << "\n";
      return r.code;
    }
    for (const auto& c : r.checks) std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "\n";
    std::cout << r.suite << ": " << (r.code == kPass ? "pass" : "fail") << " (" << r.output.string() << ")\n";
    return r.code;
  }
  if (app.got_subcommand("list-suites")) {
    for (const auto& s : suites()) std::cout << s.name << "\t" << s.summary << "\n";
    return 0;
  }
  try {
    std::cout << schema_text(which);
  } catch (const wmlab::ConfigError& e) {
    std::cerr << "wmlab: " << e.what() << "\n";
    return kConfigError;
  }
  return 0;
}
