#include <fstream>
#include <iterator>
#include <map>
#include <unistd.h>

#include "common.hpp"
#include "wmlab/errors.hpp"

namespace wmlab::runner {

namespace {

namespace fs = std::filesystem;

// Every report file except metadata.json, which carries wall-clock data.
std::map<std::string, std::string> report_files(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().filename() == "metadata.json") continue;
    std::ifstream in(e.path(), std::ios::binary);
    out[e.path().filename().string()] = std::string(std::istreambuf_iterator<char>(in), {});
  }
  return out;
}

json default_runs() {
  return json::parse(R"([
    {"suite": "algebra", "grid": {"N": 32}, "samples": {"round_trip": 3, "correspondence": 2, "associativity": 2},
     "scaling": {"hbars": [0.4, 0.2], "points": [64, 80]}},
    {"suite": "pv-kernel", "orders": {"g": 1, "j": 2, "degree_bound": 6}, "energies": {"points": 31}}
  ])");
}

}  // namespace

Suite determinism_suite() {
  Suite s;
  s.name = "determinism";
  s.summary = "runs embedded scenarios twice and compares every report byte for byte";
  s.prepare = [](Node& root) -> Job {
    read_checks(root, {"byte_identical"});
    std::vector<json> runs = root.objects("runs", "scenario configs to repeat (any suite but determinism)");
    if (!root.has("runs")) {
      runs.clear();
      for (const auto& r : default_runs()) runs.push_back(r);
    }
    const std::string scratch = root.text("scratch", "", "directory for the repeated runs (default: a temp dir)");
    require(!runs.empty(), root, "runs", "must not be empty");
    if (!root.schema_mode()) {
      for (std::size_t i = 0; i < runs.size(); ++i) {
        const std::string where = root.key_path("runs") + "[" + std::to_string(i) + "]";
        if (!runs[i].is_object()) throw ConfigError("config: key '" + where + "' must be an object");
        const std::string name = runs[i].value("suite", "");
        if (name == "determinism") throw ConfigError("config: key '" + where + ".suite' may not nest determinism");
        const Suite* suite = find_suite(name);
        if (!suite) throw ConfigError("config: key '" + where + ".suite' names unknown suite '" + name + "'");
        // Dry parse so errors in the embedded configs surface now.
        Node sub(&runs[i], "", nullptr);
        sub.text("suite", "", "");
        sub.text("output", "", "");
        sub.text("description", "", "");
        try {
          suite->prepare(sub);
          sub.finish();
        } catch (const ConfigError& e) {
          throw ConfigError("config: in '" + where + "': " + e.what());
        }
      }
    }

    return [=](Report& rep) {
      const fs::path base = scratch.empty()
                                ? fs::temp_directory_path() / ("wmlab-determinism-" + std::to_string(::getpid()))
                                : fs::path(scratch);
      Csv csv("run,suite,files,identical,first_difference");
      std::size_t mismatches = 0, compared = 0;
      for (std::size_t i = 0; i < runs.size(); ++i) {
        std::map<std::string, std::string> files[2];
        for (int k = 0; k < 2; ++k) {
          const fs::path dir = base / ("run_" + std::to_string(i) + (k ? "_b" : "_a"));
          fs::remove_all(dir);
          const RunResult r = run_scenario(runs[i], dir);
          if (r.code == kConfigError || r.code == kRuntimeError)
            throw Error("determinism: run " + std::to_string(i) + " (" + r.suite + ") failed: " + r.message);
          files[k] = report_files(dir);
        }
        std::string first;
        if (files[0].size() != files[1].size()) first = "(file list)";
        for (const auto& [name, bytes] : files[0]) {
          auto it = files[1].find(name);
          if (it == files[1].end() || it->second != bytes) {
            if (first.empty()) first = name;
          }
        }
        compared += files[0].size();
        if (!first.empty()) ++mismatches;
        csv.row(i, runs[i].value("suite", ""), files[0].size(), first.empty() ? 1 : 0, first.empty() ? "-" : first);
      }
      if (scratch.empty()) fs::remove_all(base);
      rep.check("byte_identical", mismatches == 0,
                {{"runs", runs.size()}, {"files_compared", compared}, {"mismatched_runs", mismatches}},
                {{"mismatched_runs", 0}});
      rep.file("determinism.csv", csv.str());
    };
  };
  return s;
}

}  // namespace wmlab::runner
