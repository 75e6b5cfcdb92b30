#include "rinfer/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rinfer/error.hpp"
#include "rinfer/kernels.hpp"
#include "rinfer/plot.hpp"

namespace rinfer {

namespace {

using nlohmann::json;

// One serializer for every number that appears in both JSON and CSV output,
// so the two views agree to the character.
std::string num(double v) { return json(v).dump(); }

json warnings_json(const std::vector<std::string>& w) {
  return json(w);
}

json test_json(const TestResult& t, const std::string& statistic) {
  json j;
  j["tau"] = t.tau;
  j["mechanism"] = mechanism_name(t.mechanism);
  j["statistic"] = statistic;
  j["observed_stat"] = t.observed_stat;
  j["control_baseline"] = t.control_baseline;
  j["p_value"] = t.p_value;
  j["exact"] = t.exact;
  j["draws"] = t.draws;
  j["exceed_count"] = t.exceed_count;
  j["seed"] = t.seed;
  j["counting"] = counting_name(t.counting);
  j["warnings"] = warnings_json(t.warnings);
  return j;
}

json ci_json(const CIResult& c) {
  json j;
  j["lower"] = c.lower;
  j["upper"] = c.upper;
  j["alpha"] = c.alpha;
  j["grid_resolution"] = c.grid_resolution;
  j["lower_open"] = c.lower_open;
  j["upper_open"] = c.upper_open;
  j["exhaustive_fallback"] = c.exhaustive_fallback;
  j["warnings"] = warnings_json(c.warnings);
  return j;
}

struct LoadedInputs {
  PanelDataset panel;
  AdoptionTime adoption;
  json detrend_info;  // null unless the detrended statistic is in use
};

// Date parsing with the config field named in the message.
Date parse_date_field(const std::string& text, const char* field) {
  try {
    return parse_date(text);
  } catch (const Error& e) {
    fail(std::string(field) + ": " + e.what());
  }
}

LoadedInputs prepare_inputs(const RunConfig& cfg) {
  require(!cfg.input.empty(), "no input file given");
  LoadOptions lo;
  lo.unit_column = cfg.unit_column;
  lo.date_column = cfg.date_column;
  lo.value_column = cfg.value_column;
  lo.category_column = cfg.category_column;
  lo.category_filter = cfg.category_filter;
  lo.strict_missing = cfg.strict_missing;
  LoadedInputs in;
  in.panel = load_panel_file(cfg.input, lo);
  require(!cfg.adoption.empty(), "no adoption date given");
  in.adoption =
      resolve_adoption(in.panel, parse_date_field(cfg.adoption, "adoption"));
  in.detrend_info = nullptr;

  require(cfg.statistic == "raw" || cfg.statistic == "detrended",
          "unknown statistic '" + cfg.statistic +
              "' (expected raw or detrended)");
  if (cfg.statistic == "detrended") {
    std::vector<std::string> notes;
    DetrendResult dres = detrend(in.panel, in.adoption, cfg.detrend_halfwidth,
                                 cfg.detrend_preonly, &notes);
    json info;
    info["halfwidth"] = dres.fit.halfwidth;
    info["pre_only"] = dres.fit.pre_only;
    info["span_begin"] = format_date(in.panel.date_of(dres.fit.fit_begin));
    info["span_end"] = format_date(in.panel.date_of(dres.fit.fit_end));
    info["sample_begin"] =
        format_date(in.panel.date_of(dres.fit.sample_begin));
    info["sample_end"] = format_date(in.panel.date_of(dres.fit.sample_end));
    info["warnings"] = warnings_json(notes);
    in.detrend_info = info;
    Date adoption_date = in.adoption.date;
    in.panel = std::move(dres.residuals);
    in.adoption = resolve_adoption(in.panel, adoption_date);
  }
  return in;
}

MechanismSpec build_spec(const RunConfig& cfg, Mechanism kind, int tau) {
  if (kind == Mechanism::tr) return MechanismSpec::treatment_reversal(tau);
  if (!cfg.at_support.empty())
    return MechanismSpec::adoption_time(tau, cfg.at_support);
  int k = cfg.backdate >= 0 ? cfg.backdate : tau - 1;
  return MechanismSpec::adoption_time_backdated(tau, k);
}

TestOptions test_options(const RunConfig& cfg) {
  TestOptions t;
  t.n_sim = cfg.nsim;
  t.seed = cfg.seed;
  t.counting = parse_counting(cfg.counting);
  t.mode = parse_run_mode(cfg.mode);
  t.enum_cap = cfg.enum_cap;
  t.threads = cfg.threads;
  return t;
}

Date parse_placebo(const std::string& text, Date adoption) {
  require(!text.empty(), "no placebo time given");
  if (text.back() == 'd') {
    // relative form like -28d
    const std::string body = text.substr(0, text.size() - 1);
    char* end = nullptr;
    long off = std::strtol(body.c_str(), &end, 10);
    require(end == body.c_str() + body.size() && !body.empty(),
            "bad placebo offset '" + text + "' (expected e.g. -28d)");
    return adoption + std::chrono::days{off};
  }
  return parse_date_field(text, "placebo");
}

std::vector<Mechanism> parse_mechanisms(const RunConfig& cfg) {
  require(!cfg.mechanisms.empty(), "no mechanism given");
  std::vector<Mechanism> out;
  for (const auto& name : cfg.mechanisms) out.push_back(parse_mechanism(name));
  return out;
}

// ---- command implementations ----------------------------------------------

void run_test_command(const RunConfig& cfg, json& results,
                      std::map<std::string, std::string>& files) {
  LoadedInputs in = prepare_inputs(cfg);
  if (!in.detrend_info.is_null()) results["detrend"] = in.detrend_info;
  const auto mechanisms = parse_mechanisms(cfg);
  const TestOptions topts = test_options(cfg);
  CIOptions ciopts;
  ciopts.alpha = cfg.alpha;
  ciopts.grid_resolution = cfg.grid_resolution;
  require(!cfg.taus.empty(), "no windows given (use --tau)");

  json tests = json::array();
  json summaries = json::array();
  struct Cell {
    TestResult test;
    bool has_ci = false;
    CIResult ci;
  };
  std::map<std::pair<int, int>, Cell> cells;  // (tau index, mech index)

  for (size_t ti = 0; ti < cfg.taus.size(); ++ti) {
    const int tau = cfg.taus[ti];
    const WindowView view = window(in.panel, in.adoption, tau);
    for (size_t mi = 0; mi < mechanisms.size(); ++mi) {
      const MechanismSpec spec = build_spec(cfg, mechanisms[mi], tau);
      Cell cell;
      if (cfg.ci) {
        cell.ci = confidence_interval(view, spec, topts, ciopts);
        cell.test = cell.ci.base;
        cell.has_ci = true;
      } else {
        cell.test = randomization_test(view, spec, topts);
      }
      json tj = test_json(cell.test, cfg.statistic);
      if (cell.has_ci) tj["ci"] = ci_json(cell.ci);
      tests.push_back(tj);

      Summary s = derive_summary(cell.test.observed_stat,
                                 cell.test.control_baseline, view.n, tau);
      json sj = summary_json(s);
      sj["tau"] = tau;
      sj["mechanism"] = mechanism_name(mechanisms[mi]);
      summaries.push_back(sj);
      cells[{static_cast<int>(ti), static_cast<int>(mi)}] = std::move(cell);
    }
  }
  results["tests"] = tests;
  results["summaries"] = summaries;

  // Long-form CSV.
  {
    std::ostringstream csv;
    csv << "tau,mechanism,statistic,observed_stat,control_baseline,p_value,"
           "exact,draws,ci_lower,ci_upper\n";
    for (size_t ti = 0; ti < cfg.taus.size(); ++ti)
      for (size_t mi = 0; mi < mechanisms.size(); ++mi) {
        const Cell& cell = cells[{static_cast<int>(ti), static_cast<int>(mi)}];
        csv << cfg.taus[ti] << "," << mechanism_name(mechanisms[mi]) << ","
            << cfg.statistic << "," << num(cell.test.observed_stat) << ","
            << num(cell.test.control_baseline) << ","
            << num(cell.test.p_value) << "," << (cell.test.exact ? 1 : 0)
            << "," << cell.test.draws << ","
            << (cell.has_ci ? num(cell.ci.lower) : "") << ","
            << (cell.has_ci ? num(cell.ci.upper) : "") << "\n";
      }
    files["test_results.csv"] = csv.str();
  }

  // Wide table: one row per window, estimate + per-mechanism p and interval.
  {
    std::ostringstream csv;
    csv << "tau,theta_hat,control_mean";
    for (auto m : mechanisms) {
      const char* name = mechanism_name(m);
      csv << "," << name << "_p," << name << "_ci_lower," << name
          << "_ci_upper";
    }
    csv << "\n";
    for (size_t ti = 0; ti < cfg.taus.size(); ++ti) {
      const Cell& first = cells[{static_cast<int>(ti), 0}];
      csv << cfg.taus[ti] << "," << num(first.test.observed_stat) << ","
          << num(first.test.control_baseline);
      for (size_t mi = 0; mi < mechanisms.size(); ++mi) {
        const Cell& cell = cells[{static_cast<int>(ti), static_cast<int>(mi)}];
        csv << "," << num(cell.test.p_value) << ","
            << (cell.has_ci ? num(cell.ci.lower) : "") << ","
            << (cell.has_ci ? num(cell.ci.upper) : "");
      }
      csv << "\n";
    }
    files["effects_table.csv"] = csv.str();
  }

  // Estimate bars with the first mechanism's p-values overlaid.
  {
    std::vector<double> est, ps;
    for (size_t ti = 0; ti < cfg.taus.size(); ++ti) {
      const Cell& cell = cells[{static_cast<int>(ti), 0}];
      est.push_back(cell.test.observed_stat);
      ps.push_back(cell.test.p_value);
    }
    files["effects.svg"] = svg_effect_bars(cfg.taus, est, ps, cfg.alpha);
  }
}

void run_joint_command(const RunConfig& cfg, json& results,
                       std::map<std::string, std::string>& files) {
  LoadedInputs in = prepare_inputs(cfg);
  if (!in.detrend_info.is_null()) results["detrend"] = in.detrend_info;
  const auto mechanisms = parse_mechanisms(cfg);
  const TestOptions topts = test_options(cfg);
  JointOptions jopts;
  jopts.coupled = cfg.joint_coupled;

  require(!cfg.combiners.empty(), "no combiner given");
  std::vector<Combiner> combiners;
  for (const auto& name : cfg.combiners)
    combiners.push_back(parse_combiner(name));

  json joint = json::array();
  std::ostringstream csv;
  csv << "mechanism,tau_first,tau_last";
  for (Combiner c : combiners)
    csv << "," << combiner_name(c) << "_observed," << combiner_name(c)
        << "_p";
  csv << "\n";

  for (Mechanism mech : mechanisms) {
    std::vector<int> taus;
    if (cfg.tau_max > 0) {
      for (int tau = mech == Mechanism::at ? 2 : 1; tau <= cfg.tau_max; ++tau)
        taus.push_back(tau);
    } else {
      taus = cfg.taus;
    }
    require(!taus.empty(), "joint test has no windows (check --tau-max)");
    std::vector<MechanismSpec> specs;
    for (int tau : taus) specs.push_back(build_spec(cfg, mech, tau));

    csv << mechanism_name(mech) << "," << taus.front() << "," << taus.back();
    for (Combiner c : combiners) {
      JointResult jr = joint_test(in.panel, in.adoption, specs, c, topts,
                                  jopts);
      json jj;
      jj["mechanism"] = mechanism_name(mech);
      jj["combiner"] = combiner_name(c);
      jj["taus"] = jr.taus;
      jj["observed"] = jr.observed;
      jj["p_value"] = jr.p_value;
      jj["observed_components"] = jr.observed_components;
      jj["n_sim"] = jr.n_sim;
      jj["exceed_count"] = jr.exceed_count;
      jj["seed"] = jr.seed;
      jj["counting"] = counting_name(jr.counting);
      jj["coupled"] = jr.coupled;
      jj["warnings"] = warnings_json(jr.warnings);
      joint.push_back(jj);
      csv << "," << num(jr.observed) << "," << num(jr.p_value);
    }
    csv << "\n";
  }
  results["joint"] = joint;
  files["joint_results.csv"] = csv.str();
}

void run_select_window_command(const RunConfig& cfg, json& results,
                               std::map<std::string, std::string>& files) {
  LoadedInputs in = prepare_inputs(cfg);
  if (!in.detrend_info.is_null()) results["detrend"] = in.detrend_info;
  const auto mechanisms = parse_mechanisms(cfg);
  require(mechanisms.size() == 1,
          "window selection runs one mechanism at a time");
  SelectionOptions sopts;
  sopts.threshold = cfg.threshold;
  sopts.test = test_options(cfg);
  Date placebo = parse_placebo(cfg.placebo, in.adoption.date);

  WindowSelectionResult sel = select_window(in.panel, in.adoption, placebo,
                                            cfg.tau_max, mechanisms[0], sopts);
  json sj;
  sj["tau_star"] = sel.tau_star;
  sj["tau_max"] = sel.tau_max;
  sj["threshold"] = sel.threshold;
  sj["placebo_date"] = format_date(sel.placebo_date);
  sj["placebo_period"] = sel.placebo_period;
  sj["mechanism"] = mechanism_name(sel.mechanism);
  json cells = json::array();
  for (const auto& c : sel.cells) {
    json cj;
    cj["tau"] = c.tau;
    cj["p_value"] = c.p_value;
    cj["observed_stat"] = c.observed_stat;
    cj["seed"] = c.seed;
    cj["exact"] = c.exact;
    cj["draws"] = c.draws;
    cells.push_back(cj);
  }
  sj["cells"] = cells;
  sj["warnings"] = warnings_json(sel.warnings);
  results["window_selection"] = sj;

  std::ostringstream csv;
  csv << "tau,p_value,observed_stat,pass\n";
  for (const auto& c : sel.cells)
    csv << c.tau << "," << num(c.p_value) << "," << num(c.observed_stat)
        << "," << (c.p_value >= sel.threshold ? 1 : 0) << "\n";
  files["window_selection.csv"] = csv.str();
  files["window_selection.svg"] = svg_p_curve(sel);
}

void run_falsify_command(const RunConfig& cfg, json& results,
                         std::map<std::string, std::string>& files) {
  LoadedInputs in = prepare_inputs(cfg);
  if (!in.detrend_info.is_null()) results["detrend"] = in.detrend_info;
  const auto mechanisms = parse_mechanisms(cfg);
  require(!cfg.years.empty(), "falsification needs --years");
  FalsificationReport rep = falsification_scan(
      in.panel, in.adoption, parse_falsify_mode(cfg.falsify_mode), cfg.years,
      cfg.taus, mechanisms, test_options(cfg), cfg.alpha);

  json fj;
  fj["mode"] = falsify_mode_name(rep.mode);
  fj["flag_alpha"] = rep.flag_alpha;
  json cells = json::array();
  for (const auto& c : rep.cells) {
    json cj;
    cj["year"] = c.year;
    cj["artificial_date"] = format_date(c.artificial);
    cj["tau"] = c.tau;
    cj["mechanism"] = mechanism_name(c.mechanism);
    cj["observed_stat"] = c.test.observed_stat;
    cj["p_value"] = c.test.p_value;
    cj["seed"] = c.test.seed;
    cj["exact"] = c.test.exact;
    cj["draws"] = c.test.draws;
    cj["flagged"] = c.flagged;
    cj["sign"] = c.sign;
    cj["warnings"] = warnings_json(c.test.warnings);
    cells.push_back(cj);
  }
  fj["cells"] = cells;
  fj["warnings"] = warnings_json(rep.warnings);
  results["falsification"] = fj;

  std::ostringstream csv;
  csv << "year,artificial_date,tau,mechanism,observed_stat,p_value,flagged,"
         "sign\n";
  for (const auto& c : rep.cells)
    csv << c.year << "," << format_date(c.artificial) << "," << c.tau << ","
        << mechanism_name(c.mechanism) << "," << num(c.test.observed_stat)
        << "," << num(c.test.p_value) << "," << (c.flagged ? 1 : 0) << ","
        << c.sign << "\n";
  files["falsification.csv"] = csv.str();
}

void run_detrend_command(const RunConfig& cfg, json& results,
                         std::map<std::string, std::string>& files) {
  require(!cfg.input.empty(), "no input file given");
  LoadOptions lo;
  lo.unit_column = cfg.unit_column;
  lo.date_column = cfg.date_column;
  lo.value_column = cfg.value_column;
  lo.category_column = cfg.category_column;
  lo.category_filter = cfg.category_filter;
  lo.strict_missing = cfg.strict_missing;
  PanelDataset panel = load_panel_file(cfg.input, lo);
  AdoptionTime adoption =
      resolve_adoption(panel, parse_date_field(cfg.adoption, "adoption"));
  std::vector<std::string> notes;
  DetrendResult dres = detrend(panel, adoption, cfg.detrend_halfwidth,
                               cfg.detrend_preonly, &notes);

  json dj;
  dj["halfwidth"] = dres.fit.halfwidth;
  dj["pre_only"] = dres.fit.pre_only;
  dj["span_begin"] = format_date(panel.date_of(dres.fit.fit_begin));
  dj["span_end"] = format_date(panel.date_of(dres.fit.fit_end));
  dj["sample_begin"] = format_date(panel.date_of(dres.fit.sample_begin));
  dj["sample_end"] = format_date(panel.date_of(dres.fit.sample_end));
  json units = json::array();
  for (int i = 0; i < panel.n(); ++i) {
    json uj;
    uj["unit"] = panel.units[i];
    uj["intercept"] = dres.fit.intercept[i];
    uj["slope"] = dres.fit.slope[i];
    units.push_back(uj);
  }
  dj["units"] = units;
  dj["warnings"] = warnings_json(notes);
  results["detrend"] = dj;

  std::ostringstream fit_csv;
  fit_csv << "unit,intercept,slope\n";
  for (int i = 0; i < panel.n(); ++i)
    fit_csv << panel.units[i] << "," << num(dres.fit.intercept[i]) << ","
            << num(dres.fit.slope[i]) << "\n";
  files["detrend_fit.csv"] = fit_csv.str();

  std::ostringstream res_csv;
  res_csv << "unit,date,residual\n";
  const PanelDataset& r = dres.residuals;
  for (int i = 0; i < r.n(); ++i)
    for (int t = 1; t <= r.num_periods; ++t)
      res_csv << r.units[i] << "," << format_date(r.date_of(t)) << ","
              << num(r.at(i, t)) << "\n";
  files["residuals.csv"] = res_csv.str();
}

void run_summarize_command(const RunConfig& cfg, json& results,
                           std::map<std::string, std::string>& files) {
  Summary s = derive_summary(cfg.theta, cfg.baseline, cfg.units, cfg.days);
  json sj = summary_json(s);
  sj["theta"] = cfg.theta;
  sj["baseline"] = cfg.baseline;
  sj["units"] = cfg.units;
  sj["days"] = cfg.days;
  results["summary"] = sj;

  std::ostringstream csv;
  csv << "theta,baseline,units,days,pre_total,post_total,relative_pct\n";
  csv << num(cfg.theta) << "," << num(cfg.baseline) << "," << cfg.units << ","
      << cfg.days << "," << s.pre_total << "," << s.post_total << ","
      << (s.baseline_zero ? "" : num(s.relative_pct)) << "\n";
  files["summary.csv"] = csv.str();
}

}  // namespace

json RunConfig::echo() const {
  json j;
  j["command"] = command;
  j["input"] = input;
  j["unit_column"] = unit_column;
  j["date_column"] = date_column;
  j["value_column"] = value_column;
  j["category_column"] = category_column;
  j["category_filter"] = category_filter;
  j["strict_missing"] = strict_missing;
  j["adoption"] = adoption;
  j["taus"] = taus;
  j["mechanisms"] = mechanisms;
  j["backdate"] = backdate;
  j["at_support"] = at_support;
  j["nsim"] = nsim;
  j["seed"] = seed;
  j["mode"] = mode;
  j["enum_cap"] = enum_cap;
  j["counting"] = counting;
  j["alpha"] = alpha;
  j["ci"] = ci;
  j["grid_resolution"] = grid_resolution;
  j["statistic"] = statistic;
  j["detrend_halfwidth"] = detrend_halfwidth;
  j["detrend_preonly"] = detrend_preonly;
  j["combiners"] = combiners;
  j["joint_coupled"] = joint_coupled;
  j["tau_max"] = tau_max;
  j["threshold"] = threshold;
  j["placebo"] = placebo;
  j["falsify_mode"] = falsify_mode;
  j["years"] = years;
  j["theta"] = theta;
  j["baseline"] = baseline;
  j["units"] = units;
  j["days"] = days;
  return j;
}

RunConfig RunConfig::from_echo(const json& j) {
  RunConfig c;
  c.command = j.value("command", c.command);
  c.input = j.value("input", c.input);
  c.unit_column = j.value("unit_column", c.unit_column);
  c.date_column = j.value("date_column", c.date_column);
  c.value_column = j.value("value_column", c.value_column);
  c.category_column = j.value("category_column", c.category_column);
  c.category_filter = j.value("category_filter", c.category_filter);
  c.strict_missing = j.value("strict_missing", c.strict_missing);
  c.adoption = j.value("adoption", c.adoption);
  c.taus = j.value("taus", c.taus);
  c.mechanisms = j.value("mechanisms", c.mechanisms);
  c.backdate = j.value("backdate", c.backdate);
  c.at_support = j.value("at_support", c.at_support);
  c.nsim = j.value("nsim", c.nsim);
  c.seed = j.value("seed", c.seed);
  c.mode = j.value("mode", c.mode);
  c.enum_cap = j.value("enum_cap", c.enum_cap);
  c.counting = j.value("counting", c.counting);
  c.alpha = j.value("alpha", c.alpha);
  c.ci = j.value("ci", c.ci);
  c.grid_resolution = j.value("grid_resolution", c.grid_resolution);
  c.statistic = j.value("statistic", c.statistic);
  c.detrend_halfwidth = j.value("detrend_halfwidth", c.detrend_halfwidth);
  c.detrend_preonly = j.value("detrend_preonly", c.detrend_preonly);
  c.combiners = j.value("combiners", c.combiners);
  c.joint_coupled = j.value("joint_coupled", c.joint_coupled);
  c.tau_max = j.value("tau_max", c.tau_max);
  c.threshold = j.value("threshold", c.threshold);
  c.placebo = j.value("placebo", c.placebo);
  c.falsify_mode = j.value("falsify_mode", c.falsify_mode);
  c.years = j.value("years", c.years);
  c.theta = j.value("theta", c.theta);
  c.baseline = j.value("baseline", c.baseline);
  c.units = j.value("units", c.units);
  c.days = j.value("days", c.days);
  return c;
}

Summary derive_summary(double theta, double baseline, int units, int days) {
  require(units >= 1, "summary needs a positive unit count");
  require(days >= 1, "summary needs a positive day count");
  require(std::isfinite(theta) && std::isfinite(baseline),
          "summary inputs must be finite");
  Summary s;
  const double cells = static_cast<double>(units) * days;
  s.pre_total_raw = baseline * cells;
  s.post_total_raw = (baseline + theta) * cells;
  s.pre_total = std::llround(s.pre_total_raw);
  s.post_total = std::llround(s.post_total_raw);
  s.baseline_zero = baseline == 0.0;
  s.relative_pct = s.baseline_zero ? 0.0 : 100.0 * theta / baseline;
  return s;
}

json summary_json(const Summary& s) {
  json j;
  j["pre_total_raw"] = s.pre_total_raw;
  j["post_total_raw"] = s.post_total_raw;
  j["pre_total"] = s.pre_total;
  j["post_total"] = s.post_total;
  if (s.baseline_zero)
    j["relative_pct"] = nullptr;  // undefined against a zero baseline
  else
    j["relative_pct"] = s.relative_pct;
  return j;
}

Report run(const RunConfig& config) {
  if (config.kernel != "auto")
    kernels::force_backend(kernels::parse_backend(config.kernel));

  Report report;
  json results;
  std::map<std::string, std::string> files;

  if (config.command == "test" || config.command == "ci") {
    RunConfig cfg = config;
    if (config.command == "ci") cfg.ci = true;
    run_test_command(cfg, results, files);
    report.doc["config"] = cfg.echo();
  } else if (config.command == "joint") {
    run_joint_command(config, results, files);
  } else if (config.command == "select-window") {
    run_select_window_command(config, results, files);
  } else if (config.command == "falsify") {
    run_falsify_command(config, results, files);
  } else if (config.command == "detrend") {
    run_detrend_command(config, results, files);
  } else if (config.command == "summarize") {
    run_summarize_command(config, results, files);
  } else {
    fail("unknown command '" + config.command + "'");
  }

  if (!report.doc.contains("config")) report.doc["config"] = config.echo();
  report.doc["schema_version"] = "1";
  report.doc["results"] = results;
  report.json_text = report.doc.dump(2) + "\n";
  report.files = std::move(files);
  return report;
}

std::vector<std::string> write_report(const Report& report,
                                      const RunConfig& config) {
  namespace fs = std::filesystem;
  fs::create_directories(config.outdir);
  auto wants = [&](const std::string& fmt) {
    for (const auto& f : config.formats)
      if (f == fmt) return true;
    return false;
  };
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    fs::path path = fs::path(config.outdir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("cannot write output file " + path.string());
    out << content;
    written.push_back(path.string());
  };
  if (wants("json")) emit("report.json", report.json_text);
  for (const auto& [name, content] : report.files) {
    const bool is_svg = name.size() > 4 && name.ends_with(".svg");
    const bool is_csv = name.size() > 4 && name.ends_with(".csv");
    if ((is_svg && wants("svg")) || (is_csv && wants("csv")))
      emit(name, content);
  }
  return written;
}

}  // namespace rinfer
