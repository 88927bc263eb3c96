#pragma once

#include <chrono>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "runner.hpp"
#include "wmlab/dynamics.hpp"

namespace wmlab::runner {

struct GridSpec {
  double half_extent = 10.0;
  int points = 128;
  double hbar = 1.0;
  PhaseSpaceGrid make() const { return make_grid(half_extent, points, hbar); }
};

// "grid": {L, N, hbar}
GridSpec read_grid(Node& root, GridSpec fallback = {});

// "potential": {t1, t2, g: [pulse], j: [pulse], g_plateaus: [plateau], j_plateaus}
// Pulses are {center, width, peak}; plateaus {begin, end, ramp, height}.
// An absent list keeps the fallback's; an empty list clears it.
PotentialSpec read_potential(Node& root, const PotentialSpec& fallback, const std::string& key = "potential");

// "numerics": overrides of the library tolerances.
Tolerances read_numerics(Node& root);

// "checks": subset of `all` to run (default all). Unknown names are config errors.
std::vector<std::string> read_checks(Node& root, const std::vector<std::string>& all);
bool wants(const std::vector<std::string>& checks, const std::string& name);

json to_json(const std::vector<double>& v);

// Rows of comma-separated values with 17 significant digits.
class Csv {
 public:
  explicit Csv(const std::string& header);
  template <class... T>
  void row(const T&... v) {
    bool first = true;
    ((out_ << (first ? "" : ",") << v, first = false), ...);
    out_ << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Suite algebra_suite();
Suite scattering_suite();
Suite causality_suite();
Suite green_suite();
Suite pv_kernel_suite();
Suite classical_limit_suite();
Suite classical_mechanics_suite();
Suite covariant_suite();
Suite determinism_suite();

}  // namespace wmlab::runner
