#include "rinfer/diagnostics.hpp"

#include <algorithm>

#include "rinfer/error.hpp"
#include "rinfer/rng.hpp"

namespace rinfer {

FalsifyMode parse_falsify_mode(const std::string& name) {
  if (name == "date") return FalsifyMode::same_date;
  if (name == "weekday") return FalsifyMode::same_weekday;
  fail("unknown falsification mode '" + name +
       "' (expected date or weekday)");
}

const char* falsify_mode_name(FalsifyMode m) {
  return m == FalsifyMode::same_date ? "date" : "weekday";
}

namespace {

MechanismSpec spec_for(Mechanism mechanism, int tau) {
  // Adoption-time supports follow the full-backdating rule {-(tau-1)..0}.
  return mechanism == Mechanism::tr
             ? MechanismSpec::treatment_reversal(tau)
             : MechanismSpec::adoption_time_backdated(tau, tau - 1);
}

TestResult run_cell(const PanelDataset& panel, const AdoptionTime& at, int tau,
                    Mechanism mechanism, const TestOptions& base) {
  TestOptions opts = base;
  opts.seed = rng::cell_seed(base.seed, static_cast<uint64_t>(at.period),
                             static_cast<uint64_t>(tau),
                             static_cast<uint64_t>(mechanism));
  return randomization_test(window(panel, at, tau), spec_for(mechanism, tau),
                            opts);
}

}  // namespace

WindowSelectionResult select_window(const PanelDataset& panel,
                                    const AdoptionTime& true_adoption,
                                    Date placebo, int tau_max,
                                    Mechanism mechanism,
                                    const SelectionOptions& opts) {
  require(tau_max >= 1, "tau_max must be at least 1");
  require(opts.threshold >= 0.0 && opts.threshold <= 1.0,
          "selection threshold must lie in [0, 1]");
  AdoptionTime pl = resolve_adoption(panel, placebo);
  require(pl.period + tau_max - 1 < true_adoption.period,
          "placebo windows reach the true adoption: placebo period " +
              std::to_string(pl.period) + " + tau_max - 1 must stay below " +
              std::to_string(true_adoption.period));
  require(pl.period - tau_max >= 1,
          "placebo window of halfwidth " + std::to_string(tau_max) +
              " runs off the start of the panel");

  WindowSelectionResult res;
  res.tau_max = tau_max;
  res.threshold = opts.threshold;
  res.placebo_date = pl.date;
  res.placebo_period = pl.period;
  res.mechanism = mechanism;

  for (int tau = 1; tau <= tau_max; ++tau) {
    TestResult t = run_cell(panel, pl, tau, mechanism, opts.test);
    WindowCell cell;
    cell.tau = tau;
    cell.p_value = t.p_value;
    cell.observed_stat = t.observed_stat;
    cell.seed = t.seed;
    cell.exact = t.exact;
    cell.draws = t.draws;
    res.cells.push_back(cell);
    for (const auto& w : t.warnings)
      res.warnings.push_back("tau " + std::to_string(tau) + ": " + w);
  }

  // Largest tau whose entire prefix stays at or above the threshold.
  int star = 0;
  for (const auto& cell : res.cells) {
    if (cell.p_value >= opts.threshold)
      star = cell.tau;
    else
      break;
  }
  res.tau_star = star;
  return res;
}

FalsificationReport falsification_scan(
    const PanelDataset& panel, const AdoptionTime& true_adoption,
    FalsifyMode mode, const std::vector<int>& years,
    const std::vector<int>& taus, const std::vector<Mechanism>& mechanisms,
    const TestOptions& opts, double flag_alpha) {
  require(!years.empty(), "falsification scan needs at least one year");
  require(!taus.empty(), "falsification scan needs at least one tau");
  require(!mechanisms.empty(),
          "falsification scan needs at least one mechanism");
  require(flag_alpha > 0.0 && flag_alpha < 1.0,
          "flag alpha must lie in (0, 1)");

  FalsificationReport rep;
  rep.mode = mode;
  rep.flag_alpha = flag_alpha;

  const int tau_widest = *std::max_element(taus.begin(), taus.end());
  for (int year : years) {
    Date art = mode == FalsifyMode::same_date
                   ? same_date_in_year(true_adoption.date, year)
                   : same_weekday_in_year(true_adoption.date, year);
    AdoptionTime at = resolve_adoption(panel, art);
    require(at.period != true_adoption.period,
            "artificial time " + format_date(art) +
                " equals the true adoption time");
    // The widest window must sit entirely on one side of the true adoption.
    const int first = at.period - tau_widest;
    const int last = at.period + tau_widest - 1;
    if (first < true_adoption.period && true_adoption.period <= last)
      fail("artificial window around " + format_date(art) + " (periods " +
           std::to_string(first) + ".." + std::to_string(last) +
           ") straddles the true adoption at period " +
           std::to_string(true_adoption.period));
    for (int tau : taus) {
      for (Mechanism mechanism : mechanisms) {
        FalsifyCell cell;
        cell.year = year;
        cell.artificial = art;
        cell.tau = tau;
        cell.mechanism = mechanism;
        cell.test = run_cell(panel, at, tau, mechanism, opts);
        cell.flagged = cell.test.p_value <= flag_alpha;
        cell.sign = cell.test.observed_stat > 0.0
                        ? 1
                        : (cell.test.observed_stat < 0.0 ? -1 : 0);
        rep.cells.push_back(std::move(cell));
      }
    }
  }
  return rep;
}

}  // namespace rinfer
