// rinfer: randomization inference for before-and-after panel studies.
//
// Subcommands mirror the library commands one to one; every flag has a
// config-file twin (INI via --config) and the master seed can come from the
// RINFER_SEED environment variable.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rinfer/error.hpp"
#include "rinfer/report.hpp"

namespace {

using rinfer::RunConfig;

void add_io_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("input", cfg.input, "Input event file (CSV or TSV)")
      ->required();
  cmd->add_option("--unit-column", cfg.unit_column, "Unit id column name")->capture_default_str();
  cmd->add_option("--date-column", cfg.date_column, "Date column name")->capture_default_str();
  cmd->add_option("--value-column", cfg.value_column, "Value column name")->capture_default_str();
  cmd->add_option("--category-column", cfg.category_column,
                  "Optional category column");
  cmd->add_option("--category-filter", cfg.category_filter,
                  "Keep only rows whose category equals this value");
  cmd->add_flag("--strict-missing", cfg.strict_missing,
                "Error on absent (unit, day) cells instead of zero-filling");
  cmd->add_option("--adoption", cfg.adoption, "Adoption date (YYYY-MM-DD)")
      ->required();
}

void add_output_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--outdir", cfg.outdir, "Output directory")->capture_default_str();
  cmd->add_option("--format", cfg.formats,
                  "Output formats to write (json, csv, svg)")->capture_default_str()
      ->delimiter(',');
  cmd->add_option("--kernel", cfg.kernel,
                  "Simulation kernel: auto, scalar, or avx2")->capture_default_str();
  cmd->set_config("--config", "", "Read options from an INI file");
}

void add_statistic_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--statistic", cfg.statistic,
                  "Test statistic input: raw or detrended")->capture_default_str();
  cmd->add_option("--detrend-halfwidth", cfg.detrend_halfwidth,
                  "Days on each side of adoption used by the detrend fit")->capture_default_str();
  cmd->add_flag("--detrend-preonly", cfg.detrend_preonly,
                "Fit unit trends on pre-adoption days only");
}

void add_engine_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--nsim", cfg.nsim, "Monte Carlo simulations")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "Master seed")->capture_default_str()
      ->envname("RINFER_SEED");
  cmd->add_option("--run-mode", cfg.mode,
                  "Test evaluation: auto, mc, or exact")->capture_default_str();
  cmd->add_option("--enum-cap", cfg.enum_cap,
                  "Largest assignment space exact mode will enumerate")->capture_default_str();
  cmd->add_option("--counting", cfg.counting,
                  "Monte Carlo p-value rule: plain or add-one")->capture_default_str();
  cmd->add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();
}

void add_mechanism_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--mechanism", cfg.mechanisms,
                  "Assignment mechanisms (tr, at)")->capture_default_str()
      ->delimiter(',');
  cmd->add_option("--backdate", cfg.backdate,
                  "Adoption-time support {-k..0}; -1 means k = tau-1")->capture_default_str();
  cmd->add_option("--at-support", cfg.at_support,
                  "Explicit adoption-time offsets (overrides --backdate)")
      ->delimiter(',');
}

void print_test_lines(const nlohmann::json& results) {
  for (const auto& t : results.at("tests")) {
    std::printf("tau=%-3d %-3s theta=%- .6g baseline=%.6g p=%.6g%s",
                t.at("tau").get<int>(),
                t.at("mechanism").get<std::string>().c_str(),
                t.at("observed_stat").get<double>(),
                t.at("control_baseline").get<double>(),
                t.at("p_value").get<double>(),
                t.at("exact").get<bool>() ? " (exact)" : "");
    if (t.contains("ci")) {
      const auto& ci = t.at("ci");
      std::printf("  %g%% CI [%.6g, %.6g]",
                  100.0 * (1.0 - ci.at("alpha").get<double>()),
                  ci.at("lower").get<double>(), ci.at("upper").get<double>());
    }
    std::printf("\n");
    for (const auto& w : t.at("warnings"))
      std::printf("  warning: %s\n", w.get<std::string>().c_str());
    if (t.contains("ci"))
      for (const auto& w : t.at("ci").at("warnings"))
        std::printf("  warning: %s\n", w.get<std::string>().c_str());
  }
}

void print_summary(const rinfer::Report& report) {
  const auto& results = report.doc.at("results");
  if (results.contains("tests")) print_test_lines(results);
  if (results.contains("joint")) {
    for (const auto& j : results.at("joint")) {
      std::printf("joint %-3s %-9s taus=%d..%d observed=%.6g p=%.6g\n",
                  j.at("mechanism").get<std::string>().c_str(),
                  j.at("combiner").get<std::string>().c_str(),
                  j.at("taus").front().get<int>(),
                  j.at("taus").back().get<int>(),
                  j.at("observed").get<double>(),
                  j.at("p_value").get<double>());
      for (const auto& w : j.at("warnings"))
        std::printf("  warning: %s\n", w.get<std::string>().c_str());
    }
  }
  if (results.contains("window_selection")) {
    const auto& s = results.at("window_selection");
    std::printf("selected tau* = %d (tau_max=%d, threshold=%g, placebo %s)\n",
                s.at("tau_star").get<int>(), s.at("tau_max").get<int>(),
                s.at("threshold").get<double>(),
                s.at("placebo_date").get<std::string>().c_str());
    for (const auto& c : s.at("cells"))
      std::printf("  tau=%-3d p=%.6g\n", c.at("tau").get<int>(),
                  c.at("p_value").get<double>());
    for (const auto& w : s.at("warnings"))
      std::printf("  warning: %s\n", w.get<std::string>().c_str());
  }
  if (results.contains("falsification")) {
    const auto& f = results.at("falsification");
    int flagged = 0;
    for (const auto& c : f.at("cells")) {
      std::printf("year=%d %s tau=%-3d %-3s p=%.6g%s\n",
                  c.at("year").get<int>(),
                  c.at("artificial_date").get<std::string>().c_str(),
                  c.at("tau").get<int>(),
                  c.at("mechanism").get<std::string>().c_str(),
                  c.at("p_value").get<double>(),
                  c.at("flagged").get<bool>() ? "  FLAGGED" : "");
      flagged += c.at("flagged").get<bool>() ? 1 : 0;
    }
    std::printf("%d of %zu artificial cells flagged at alpha=%g\n", flagged,
                f.at("cells").size(), f.at("flag_alpha").get<double>());
  }
  if (results.contains("detrend") && !results.contains("tests")) {
    const auto& d = results.at("detrend");
    std::printf("detrended %zu units over %s..%s (fit sample %s..%s)\n",
                d.at("units").size(),
                d.at("span_begin").get<std::string>().c_str(),
                d.at("span_end").get<std::string>().c_str(),
                d.at("sample_begin").get<std::string>().c_str(),
                d.at("sample_end").get<std::string>().c_str());
  }
  if (results.contains("summary")) {
    const auto& s = results.at("summary");
    std::printf("pre total %lld, post total %lld",
                s.at("pre_total").get<long long>(),
                s.at("post_total").get<long long>());
    if (s.at("relative_pct").is_null())
      std::printf(", relative change undefined (zero baseline)\n");
    else
      std::printf(", %+.1f%%\n", s.at("relative_pct").get<double>());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomization inference for before-and-after panel studies"};
  app.require_subcommand(1);

  RunConfig cfg;

  CLI::App* test = app.add_subcommand(
      "test", "Randomization test per window and mechanism");
  add_io_options(test, cfg);
  add_statistic_options(test, cfg);
  add_engine_options(test, cfg);
  add_mechanism_options(test, cfg);
  add_output_options(test, cfg);
  test->add_option("--tau", cfg.taus, "Window halfwidths in days")->capture_default_str()
      ->delimiter(',');
  test->add_option("--alpha", cfg.alpha, "Test level")->capture_default_str();
  test->add_flag("--ci", cfg.ci, "Also invert each test into an interval");
  test->add_option("--grid-resolution", cfg.grid_resolution,
                   "Effect grid step for interval inversion")->capture_default_str();

  CLI::App* ci = app.add_subcommand(
      "ci", "Confidence intervals by test inversion (test --ci)");
  add_io_options(ci, cfg);
  add_statistic_options(ci, cfg);
  add_engine_options(ci, cfg);
  add_mechanism_options(ci, cfg);
  add_output_options(ci, cfg);
  ci->add_option("--tau", cfg.taus, "Window halfwidths in days")->capture_default_str()
      ->delimiter(',');
  ci->add_option("--alpha", cfg.alpha, "Interval level is 1 - alpha")->capture_default_str();
  ci->add_option("--grid-resolution", cfg.grid_resolution,
                 "Effect grid step")->capture_default_str();

  CLI::App* joint = app.add_subcommand(
      "joint", "Joint test across nested windows");
  add_io_options(joint, cfg);
  add_statistic_options(joint, cfg);
  add_engine_options(joint, cfg);
  add_mechanism_options(joint, cfg);
  add_output_options(joint, cfg);
  joint->add_option("--tau-max", cfg.tau_max,
                    "Use all windows 1..tau-max (0 to pass --tau instead)")->capture_default_str();
  joint->add_option("--tau", cfg.taus,
                    "Explicit window list (needs --tau-max 0)")
      ->delimiter(',');
  joint->add_option("--combine", cfg.combiners,
                    "Combining statistics (max, mean, hotelling)")->capture_default_str()
      ->delimiter(',');
  joint->add_flag("--joint-coupled", cfg.joint_coupled,
                  "Reuse one draw stream across all windows");

  CLI::App* select = app.add_subcommand(
      "select-window", "Pick the analysis window from placebo p-values");
  add_io_options(select, cfg);
  add_statistic_options(select, cfg);
  add_engine_options(select, cfg);
  add_mechanism_options(select, cfg);
  add_output_options(select, cfg);
  select->add_option("--placebo", cfg.placebo,
                     "Artificial adoption time: a date or offset like -28d")
      ->required();
  select->add_option("--tau-max", cfg.tau_max, "Largest window to try")->capture_default_str();
  select->add_option("--threshold", cfg.threshold,
                     "Smallest acceptable placebo p-value")->capture_default_str();

  CLI::App* falsify = app.add_subcommand(
      "falsify", "Re-run the analysis at artificial adoption times");
  add_io_options(falsify, cfg);
  add_statistic_options(falsify, cfg);
  add_engine_options(falsify, cfg);
  add_mechanism_options(falsify, cfg);
  add_output_options(falsify, cfg);
  falsify->add_option("--mode", cfg.falsify_mode,
                      "Artificial date rule: date or weekday")->capture_default_str();
  falsify->add_option("--years", cfg.years, "Years to scan")
      ->delimiter(',')
      ->required();
  falsify->add_option("--tau", cfg.taus, "Window halfwidths in days")->capture_default_str()
      ->delimiter(',');
  falsify->add_option("--alpha", cfg.alpha, "Flagging level")->capture_default_str();

  CLI::App* detrend = app.add_subcommand(
      "detrend", "Fit per-unit linear trends and emit residuals");
  add_io_options(detrend, cfg);
  add_output_options(detrend, cfg);
  detrend->add_option("--detrend-halfwidth", cfg.detrend_halfwidth,
                      "Days on each side of adoption in the fit span")->capture_default_str();
  detrend->add_flag("--detrend-preonly", cfg.detrend_preonly,
                    "Fit on pre-adoption days only");

  CLI::App* summarize = app.add_subcommand(
      "summarize", "Totals and relative change implied by an estimate");
  summarize->add_option("--theta", cfg.theta, "Effect per unit per day")
      ->required();
  summarize->add_option("--baseline", cfg.baseline,
                        "Control mean per unit per day")
      ->required();
  summarize->add_option("--units", cfg.units, "Number of units")->required();
  summarize->add_option("--days", cfg.days, "Days on each side")->required();
  add_output_options(summarize, cfg);

  CLI11_PARSE(app, argc, argv);

  cfg.command = app.get_subcommands().front()->get_name();

  try {
    rinfer::Report report = rinfer::run(cfg);
    print_summary(report);
    for (const auto& path : rinfer::write_report(report, cfg))
      std::printf("wrote %s\n", path.c_str());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
