#pragma once

#include <string>
#include <vector>

#include "rinfer/inference.hpp"

namespace rinfer {

struct SelectionOptions {
  double threshold = 0.15;
  TestOptions test;
};

struct WindowCell {
  int tau = 0;
  double p_value = 1.0;
  double observed_stat = 0.0;
  uint64_t seed = 0;
  bool exact = false;
  uint64_t draws = 0;
};

struct WindowSelectionResult {
  int tau_star = 0;  // largest tau whose whole prefix stays above threshold
  int tau_max = 0;
  double threshold = 0.15;
  Date placebo_date{};
  int placebo_period = 0;
  Mechanism mechanism = Mechanism::tr;
  std::vector<WindowCell> cells;  // tau = 1..tau_max
  std::vector<std::string> warnings;
};

// Runs the test at a placebo adoption time for tau = 1..tau_max and selects
// the largest tau such that every window up to it has p >= threshold (0 if
// tau = 1 already fails). The placebo must sit strictly before the true
// adoption with its largest window clear of it, and every window must fit
// the panel. Per-tau seeds derive from (seed, placebo period, tau,
// mechanism), so enlarging tau_max never changes existing cells.
WindowSelectionResult select_window(const PanelDataset& panel,
                                    const AdoptionTime& true_adoption,
                                    Date placebo, int tau_max,
                                    Mechanism mechanism,
                                    const SelectionOptions& opts);

enum class FalsifyMode { same_date, same_weekday };
FalsifyMode parse_falsify_mode(const std::string& name);
const char* falsify_mode_name(FalsifyMode m);

struct FalsifyCell {
  int year = 0;
  Date artificial{};
  int tau = 0;
  Mechanism mechanism = Mechanism::tr;
  TestResult test;
  bool flagged = false;  // p <= flag_alpha
  int sign = 0;          // sign of the observed statistic
};

struct FalsificationReport {
  FalsifyMode mode = FalsifyMode::same_date;
  double flag_alpha = 0.05;
  std::vector<FalsifyCell> cells;  // year-major, then tau, then mechanism
  std::vector<std::string> warnings;
};

// Repeats the analysis at artificial adoption times in other years: the same
// calendar date, or the same (weekday, occurrence-in-month). Every
// artificial window must fit the panel, must not equal the true adoption,
// and must not straddle it. Cells with p <= flag_alpha are flagged together
// with the sign of the estimate. Per-cell seeds derive from (seed, period,
// tau, mechanism), so a cell equals the standalone test run with that seed.
FalsificationReport falsification_scan(
    const PanelDataset& panel, const AdoptionTime& true_adoption,
    FalsifyMode mode, const std::vector<int>& years,
    const std::vector<int>& taus, const std::vector<Mechanism>& mechanisms,
    const TestOptions& opts, double flag_alpha = 0.05);

}  // namespace rinfer
