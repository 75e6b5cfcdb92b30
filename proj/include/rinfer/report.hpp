#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "rinfer/assignment.hpp"
#include "rinfer/diagnostics.hpp"

namespace rinfer {

// Fully resolved run description. Everything that influences a number in the
// output lives here and is echoed into the report, so any report can be
// re-run bit-identically. Execution details (threads, formats, output
// directory, kernel choice) do not affect results and are not echoed.
struct RunConfig {
  std::string command;  // test|ci|joint|select-window|falsify|detrend|summarize
  std::string input;
  std::string unit_column = "unit";
  std::string date_column = "date";
  std::string value_column = "count";
  std::string category_column;
  std::string category_filter;
  bool strict_missing = false;

  std::string adoption;  // ISO date
  std::vector<int> taus = {1, 7, 14};
  std::vector<std::string> mechanisms = {"tr"};
  int backdate = -1;            // AT support {-backdate..0}; -1 = tau-1 rule
  std::vector<int> at_support;  // explicit AT support, overrides backdate

  uint64_t nsim = 10000;
  uint64_t seed = 20171101;
  std::string mode = "auto";  // auto|mc|exact
  uint64_t enum_cap = kDefaultEnumCap;
  std::string counting = "plain";  // plain|add-one
  double alpha = 0.05;
  bool ci = false;
  double grid_resolution = 1e-3;

  std::string statistic = "raw";  // raw|detrended
  int detrend_halfwidth = 300;
  bool detrend_preonly = false;

  std::vector<std::string> combiners = {"max", "hotelling", "mean"};
  bool joint_coupled = false;
  int tau_max = 14;
  double threshold = 0.15;
  std::string placebo;  // ISO date or relative offset like -28d

  std::string falsify_mode = "date";  // date|weekday
  std::vector<int> years;

  // summarize inputs
  double theta = 0.0;
  double baseline = 0.0;
  int units = 0;
  int days = 0;

  // execution only, excluded from the echo
  int threads = 1;
  std::vector<std::string> formats = {"json", "csv", "svg"};
  std::string outdir = ".";
  std::string kernel = "auto";  // auto|scalar|avx2

  nlohmann::json echo() const;
  static RunConfig from_echo(const nlohmann::json& j);
};

struct Report {
  nlohmann::json doc;
  std::string json_text;                         // deterministic serialization
  std::map<std::string, std::string> files;      // name -> content (csv, svg)
};

// Executes the configured command and assembles the full report in memory.
// Nothing is written to disk; errors leave no partial outputs.
Report run(const RunConfig& config);

// Writes report.json plus the side files selected by config.formats into
// config.outdir.
std::vector<std::string> write_report(const Report& report,
                                      const RunConfig& config);

struct Summary {
  double pre_total_raw = 0.0;   // baseline x units x days
  double post_total_raw = 0.0;  // (baseline + theta) x units x days
  long long pre_total = 0;      // rounded for display
  long long post_total = 0;
  double relative_pct = 0.0;  // 100 x theta / baseline
  bool baseline_zero = false;
};

// Headline arithmetic on a window estimate: totals over units x days on
// each side of adoption and the relative effect in percent. Rounding is
// display-only; raw values are preserved.
Summary derive_summary(double theta, double baseline, int units, int days);

nlohmann::json summary_json(const Summary& s);

}  // namespace rinfer
