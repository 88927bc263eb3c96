#include "runner.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "common.hpp"
#include "wmlab/errors.hpp"
#include "wmlab/parallel.hpp"

namespace wmlab::runner {

void Report::check(std::string name, bool pass, json measured, json tolerance) {
  checks_.push_back({std::move(name), pass, std::move(measured), std::move(tolerance)});
}

void Report::file(const std::string& name, std::string content) { files_[name] = std::move(content); }

void Report::timing(const std::string& phase, double seconds) { timings_[phase] = seconds; }

bool Report::pass() const {
  for (const auto& c : checks_)
    if (!c.pass) return false;
  return true;
}

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all{algebra_suite(),         scattering_suite(),          causality_suite(),
                                      green_suite(),           pv_kernel_suite(),           classical_limit_suite(),
                                      classical_mechanics_suite(), covariant_suite(),        determinism_suite()};
  return all;
}

const Suite* find_suite(const std::string& name) {
  for (const auto& s : suites())
    if (s.name == name) return &s;
  return nullptr;
}

namespace {

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write " + p.string());
}

std::string iso_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

RunResult run_scenario(const json& config, const std::filesystem::path& output_override) {
  RunResult res;
  Job job;
  try {
    Node root(&config, "", nullptr);
    res.suite = root.text("suite", "", "");
    const Suite* suite = find_suite(res.suite);
    if (!suite) throw ConfigError("config: key 'suite' names unknown suite '" + res.suite + "'");
    const std::string out = root.text("output", "results/" + res.suite, "");
    root.text("description", "", "");
    job = suite->prepare(root);
    root.finish();
    res.output = output_override.empty() ? std::filesystem::path(out) : output_override;
  } catch (const ConfigError& e) {
    res.code = kConfigError;
    res.message = e.what();
    return res;
  }

  const Stopwatch clock;
  const std::string started = iso_now();
  Report report;
  try {
    job(report);
    res.wall_seconds = clock.seconds();
    std::filesystem::create_directories(res.output);
    json summary;
    summary["suite"] = res.suite;
    summary["pass"] = report.pass();
    json checks = json::array();
    for (const auto& c : report.checks()) {
      json j;
      j["name"] = c.name;
      j["pass"] = c.pass;
      j["measured"] = c.measured;
      j["tolerance"] = c.tolerance;
      checks.push_back(std::move(j));
    }
    summary["checks"] = std::move(checks);
    json files = json::array();
    for (const auto& [name, content] : report.files()) files.push_back(name);
    summary["files"] = std::move(files);
    summary["wall_time"] = "metadata.json";
    summary["config"] = config;
    write_text(res.output / "summary.json", summary.dump(2) + "\n");
    for (const auto& [name, content] : report.files()) write_text(res.output / name, content);

    json meta;
    meta["suite"] = res.suite;
    meta["started"] = started;
    meta["wall_seconds"] = res.wall_seconds;
    meta["workers"] = worker_count();
    meta["timings"] = report.timings();
    write_text(res.output / "metadata.json", meta.dump(2) + "\n");
  } catch (const ConfigError& e) {
    res.code = kConfigError;
    res.message = e.what();
    return res;
  } catch (const std::exception& e) {
    res.code = kRuntimeError;
    res.message = e.what();
    return res;
  }
  res.checks = report.checks();
  res.code = report.pass() ? kPass : kCheckFailed;
  return res;
}

RunResult run_scenario_file(const std::filesystem::path& path, const std::filesystem::path& output_override) {
  std::ifstream in(path);
  if (!in) {
    RunResult r;
    r.code = kConfigError;
    r.message = "config: cannot open " + path.string();
    return r;
  }
  json config;
  try {
    config = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    RunResult r;
    r.code = kConfigError;
    r.message = std::string("config: ") + path.string() + ": " + e.what();
    return r;
  }
  return run_scenario(config, output_override);
}

std::string schema_text(const std::string& only) {
  std::ostringstream os;
  for (const auto& s : suites()) {
    if (!only.empty() && s.name != only) continue;
    std::vector<SchemaEntry> entries;
    Node root(nullptr, "", &entries);
    root.text("suite", s.name, "suite name");
    root.text("output", "results/" + s.name, "output directory (overridden by --out)");
    root.text("description", "", "free text, echoed in summary.json");
    s.prepare(root);
    os << "suite " << s.name << ": " << s.summary << "\n";
    for (const auto& e : entries) {
      os << "  " << std::left << std::setw(34) << e.path << std::setw(10) << e.type << std::setw(26) << e.fallback;
      if (!e.doc.empty()) os << " " << e.doc;
      os << "\n";
    }
    os << "\n";
  }
  if (!only.empty() && os.str().empty()) throw ConfigError("unknown suite '" + only + "'");
  return os.str();
}

}  // namespace wmlab::runner
