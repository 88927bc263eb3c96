#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "config.hpp"

namespace wmlab::runner {

struct CheckResult {
  std::string name;
  bool pass = false;
  json measured = json::object();
  json tolerance = json::object();
};

// What a suite produces. Files are written by the runner after the suite
// returns, so a failing run never leaves half-written reports.
class Report {
 public:
  void check(std::string name, bool pass, json measured, json tolerance);
  void file(const std::string& name, std::string content);
  void timing(const std::string& phase, double seconds);

  const std::vector<CheckResult>& checks() const { return checks_; }
  const std::map<std::string, std::string>& files() const { return files_; }
  const json& timings() const { return timings_; }
  bool pass() const;

 private:
  std::vector<CheckResult> checks_;
  std::map<std::string, std::string> files_;
  json timings_ = json::object();
};

using Job = std::function<void(Report&)>;

struct Suite {
  std::string name;
  std::string summary;
  // Reads the suite's keys from the root node and returns the work to do.
  // All validation happens here so config errors surface before any run.
  std::function<Job(Node&)> prepare;
};

const std::vector<Suite>& suites();
const Suite* find_suite(const std::string& name);

enum ExitCode { kPass = 0, kCheckFailed = 1, kConfigError = 2, kRuntimeError = 3 };

struct RunResult {
  ExitCode code = kPass;
  std::string suite;
  std::string message;  // diagnostic for codes 2 and 3
  std::filesystem::path output;
  std::vector<CheckResult> checks;
  double wall_seconds = 0.0;
};

// Parses, validates and runs one scenario. Writes summary.json (checks,
// measured values, tolerances, config echo; byte-stable), metadata.json
// (wall time, timings, worker count) and the suite's CSV series into the
// output directory: `output_override` if given, else the config's "output".
RunResult run_scenario(const json& config, const std::filesystem::path& output_override = {});
RunResult run_scenario_file(const std::filesystem::path& path, const std::filesystem::path& output_override = {});

// Schema of one suite (or all with an empty name) as text.
std::string schema_text(const std::string& suite = {});

}  // namespace wmlab::runner
