#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "rinfer/error.hpp"
#include "rinfer/panel.hpp"

using namespace rinfer;

namespace {

PanelDataset load_text(const std::string& text, LoadOptions opts = {}) {
  std::istringstream in(text);
  return load_panel(in, opts);
}

PanelDataset make_panel(int n, int periods, const char* start = "2017-10-01") {
  PanelDataset p;
  for (int i = 0; i < n; ++i) p.units.push_back("u" + std::to_string(i));
  p.start = parse_date(start);
  p.num_periods = periods;
  p.values.assign(static_cast<size_t>(n) * periods, 0.0);
  return p;
}

}  // namespace

TEST_CASE("comma input with sorted units and zero fill") {
  PanelDataset p = load_text(
      "unit,date,count\n"
      "b,2017-11-03,4\n"
      "a,2017-11-01,2\n"
      "a,2017-11-03,1\n");
  CHECK(p.units == std::vector<std::string>{"a", "b"});
  CHECK(p.start == parse_date("2017-11-01"));
  CHECK(p.num_periods == 3);
  CHECK(p.at(0, 1) == 2);
  CHECK(p.at(0, 2) == 0);  // absent day zero-filled
  CHECK(p.at(0, 3) == 1);
  CHECK(p.at(1, 1) == 0);  // unit b never reported on the first day
  CHECK(p.at(1, 3) == 4);
  CHECK(p.date_of(3) == parse_date("2017-11-03"));
}

TEST_CASE("tab delimiter is auto-detected from the header") {
  PanelDataset p = load_text(
      "unit\tdate\tcount\n"
      "a\t2017-11-01\t5\n");
  CHECK(p.n() == 1);
  CHECK(p.at(0, 1) == 5);
}

TEST_CASE("byte-order mark is stripped") {
  PanelDataset p = load_text(
      "\xEF\xBB\xBFunit,date,count\n"
      "a,2017-11-01,5\n");
  CHECK(p.at(0, 1) == 5);
}

TEST_CASE("duplicate unit-day rows accumulate") {
  PanelDataset p = load_text(
      "unit,date,count\n"
      "a,2017-11-01,2\n"
      "a,2017-11-01,3.5\n");
  CHECK(p.at(0, 1) == doctest::Approx(5.5));
}

TEST_CASE("category filter keeps matching rows only") {
  LoadOptions opts;
  opts.category_column = "kind";
  opts.category_filter = "theft";
  PanelDataset p = load_text(
      "unit,date,count,kind\n"
      "a,2017-11-01,2,theft\n"
      "a,2017-11-01,50,robbery\n"
      "a,2017-11-05,1,robbery\n"
      "a,2017-11-02,3,theft\n",
      opts);
  // The date range comes from the rows that survive the filter.
  CHECK(p.num_periods == 2);
  CHECK(p.at(0, 1) == 2);
  CHECK(p.at(0, 2) == 3);

  opts.category_filter = "arson";
  CHECK_THROWS_WITH_AS(load_text("unit,date,count,kind\n"
                                 "a,2017-11-01,2,theft\n",
                                 opts),
                       doctest::Contains("arson"), Error);

  LoadOptions missing_col;
  missing_col.category_filter = "theft";
  CHECK_THROWS_AS(load_text("unit,date,count\na,2017-11-01,2\n", missing_col),
                  Error);
}

TEST_CASE("strict missing names the first absent cell") {
  LoadOptions opts;
  opts.strict_missing = true;
  CHECK_THROWS_WITH_AS(load_text("unit,date,count\n"
                                 "a,2017-11-01,1\n"
                                 "a,2017-11-03,1\n"
                                 "b,2017-11-01,1\n",
                                 opts),
                       doctest::Contains("'a' on 2017-11-02"), Error);
  CHECK_NOTHROW(load_text(
      "unit,date,count\n"
      "a,2017-11-01,1\n"
      "a,2017-11-02,0\n",
      opts));
}

TEST_CASE("malformed rows name the line number") {
  CHECK_THROWS_WITH_AS(load_text("unit,date,count\n"
                                 "a,2017-11-01,1\n"
                                 "a,2017-11-02\n"),
                       doctest::Contains("line 3"), Error);
  CHECK_THROWS_WITH_AS(load_text("unit,date,count\na,2017-13-01,1\n"),
                       doctest::Contains("line 2"), Error);
  CHECK_THROWS_WITH_AS(load_text("unit,date,count\na,2017-11-01,many\n"),
                       doctest::Contains("line 2"), Error);
  CHECK_THROWS_AS(load_text("unit,date,count\n"), Error);
  CHECK_THROWS_AS(load_text(""), Error);
  CHECK_THROWS_AS(load_text("unit,when,count\na,2017-11-01,1\n"), Error);
}

TEST_CASE("blank lines are skipped") {
  PanelDataset p = load_text(
      "unit,date,count\n"
      "\n"
      "a,2017-11-01,1\n"
      "   \n");
  CHECK(p.n() == 1);
}

TEST_CASE("adoption resolution") {
  PanelDataset p = make_panel(2, 10);
  AdoptionTime a = resolve_adoption(p, parse_date("2017-10-04"));
  CHECK(a.period == 4);
  CHECK(a.date == parse_date("2017-10-04"));
  CHECK_THROWS_WITH_AS(resolve_adoption(p, parse_date("2017-09-30")),
                       doctest::Contains("outside panel range"), Error);
  CHECK_THROWS_AS(resolve_adoption(p, parse_date("2017-10-11")), Error);
}

TEST_CASE("window layout around adoption") {
  PanelDataset p = make_panel(1, 6);
  for (int t = 1; t <= 6; ++t) p.at(0, t) = 10 * t;
  AdoptionTime a = resolve_adoption(p, parse_date("2017-10-04"));

  WindowView v = window(p, a, 2);
  CHECK(v.cols() == 4);
  CHECK(v.first_post_col() == 2);
  // Columns cover periods a0-tau .. a0+tau-1.
  CHECK(v.at(0, 0) == 20);
  CHECK(v.at(0, 3) == 50);
  CHECK(v.period_of_col(0) == 2);
  CHECK(v.period_of_col(3) == 5);

  CHECK_THROWS_WITH_AS(window(p, a, 4), doctest::Contains("missing"), Error);
  CHECK_THROWS_AS(window(p, a, 0), Error);
}

TEST_CASE("unit averages under a shifted adoption") {
  // One unit with outcomes (1,3,5,7) in a tau=2 window: shifting adoption one
  // day later leaves only the last column treated.
  PanelDataset p = make_panel(1, 4);
  for (int t = 1; t <= 4; ++t) p.at(0, t) = 2 * t - 1;
  AdoptionTime a = resolve_adoption(p, parse_date("2017-10-03"));
  WindowView v = window(p, a, 2);

  AssignmentDraw shifted{Mechanism::at, {}, {1}};
  UnitAverages ua = unit_averages(v, shifted);
  CHECK(ua.control[0] == doctest::Approx(3.0));
  CHECK(ua.treated[0] == doctest::Approx(7.0));

  AssignmentDraw reversed{Mechanism::tr, {0}, {}};
  ua = unit_averages(v, reversed);
  CHECK(ua.treated[0] == doctest::Approx(2.0));
  CHECK(ua.control[0] == doctest::Approx(6.0));

  AssignmentDraw wrong_n{Mechanism::tr, {1, 1}, {}};
  CHECK_THROWS_AS(unit_averages(v, wrong_n), Error);
}
