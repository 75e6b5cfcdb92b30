#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rinfer/panel.hpp"
#include "rinfer/statistics.hpp"

namespace rinfer {

enum class CountingRule { plain, add_one };
CountingRule parse_counting(const std::string& name);
const char* counting_name(CountingRule c);

enum class RunMode { auto_select, monte_carlo, exact };
RunMode parse_run_mode(const std::string& name);

struct TestOptions {
  uint64_t n_sim = 10000;
  uint64_t seed = 0;
  CountingRule counting = CountingRule::plain;
  RunMode mode = RunMode::auto_select;
  uint64_t enum_cap = kDefaultEnumCap;
  int threads = 1;
};

struct TestResult {
  int tau = 0;
  Mechanism mechanism = Mechanism::tr;
  double observed_stat = 0.0;
  double control_baseline = 0.0;
  double p_value = 1.0;
  bool exact = false;     // full enumeration instead of Monte Carlo
  uint64_t draws = 0;     // simulations run, or enumerated space size
  uint64_t exceed_count = 0;  // draws with |stat| >= |observed|
  uint64_t seed = 0;
  CountingRule counting = CountingRule::plain;
  std::vector<std::string> warnings;
};

// Two-sided randomization test of the sharp null of no effect. In exact mode
// every assignment is enumerated; in Monte Carlo mode n_sim assignments are
// drawn from the per-simulation hash streams. auto_select enumerates when
// the assignment space is at most enum_cap.
TestResult randomization_test(const WindowView& view, const MechanismSpec& spec,
                              const TestOptions& opts);

struct CIOptions {
  double alpha = 0.05;
  double grid_resolution = 1e-3;
};

struct CIResult {
  double lower = 0.0;
  double upper = 0.0;
  double alpha = 0.05;
  double grid_resolution = 1e-3;
  bool lower_open = false;  // acceptance region ran past the search bracket
  bool upper_open = false;
  bool exhaustive_fallback = false;  // non-monotone flank, full grid scan
  TestResult base;                   // the unshifted test
  std::vector<std::string> warnings;
};

// Test-inversion interval under the constant-effect model: candidate effects
// theta are removed from the factually treated cells and retested with the
// identical seed; kept while p(theta) > alpha. Coarse bracketing around the
// point estimate is refined by bisection down to grid_resolution, falling
// back to an exhaustive grid scan when a flank is not monotone. Throws when
// no candidate on the grid is accepted.
CIResult confidence_interval(const WindowView& view, const MechanismSpec& spec,
                             const TestOptions& opts, const CIOptions& ci);

struct JointOptions {
  bool coupled = false;  // reuse one draw stream across all windows
};

struct JointResult {
  std::vector<int> taus;
  Mechanism mechanism = Mechanism::tr;
  Combiner combiner = Combiner::max_abs;
  double observed = 0.0;  // combined observed value
  double p_value = 1.0;
  std::vector<double> observed_components;  // per-window observed statistics
  uint64_t n_sim = 0;
  uint64_t exceed_count = 0;
  uint64_t seed = 0;
  CountingRule counting = CountingRule::plain;
  bool coupled = false;
  std::vector<std::string> warnings;
};

// Joint test across several windows of the same mechanism (specs ascending
// in tau, adoption-time windows all at least 2 days). Per-window draws come
// from independent sub-streams unless coupled. Monte Carlo only.
JointResult joint_test(const PanelDataset& panel, const AdoptionTime& adoption,
                       const std::vector<MechanismSpec>& windows,
                       Combiner method, const TestOptions& opts,
                       const JointOptions& joint = {});

}  // namespace rinfer
