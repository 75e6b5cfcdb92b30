#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rinfer/error.hpp"
#include "rinfer/statistics.hpp"

using namespace rinfer;

namespace {

PanelDataset make_panel(int n, int periods) {
  PanelDataset p;
  for (int i = 0; i < n; ++i) p.units.push_back("u" + std::to_string(i));
  p.start = parse_date("2017-01-01");
  p.num_periods = periods;
  p.values.assign(static_cast<size_t>(n) * periods, 0.0);
  return p;
}

}  // namespace

TEST_CASE("difference in means") {
  UnitAverages ua;
  ua.treated = {2.0, 4.0};
  ua.control = {1.0, 1.0};
  StatisticValue s = diff_in_means(ua);
  CHECK(s.treated_mean == doctest::Approx(3.0));
  CHECK(s.control_mean == doctest::Approx(1.0));
  CHECK(s.value == doctest::Approx(2.0));

  ua.control = {1.0};
  CHECK_THROWS_AS(diff_in_means(ua), Error);
  ua.treated = {};
  ua.control = {};
  CHECK_THROWS_AS(diff_in_means(ua), Error);
  ua.treated = {std::nan("")};
  ua.control = {0.0};
  CHECK_THROWS_AS(diff_in_means(ua), Error);
}

TEST_CASE("detrend recovers exact per-unit lines") {
  PanelDataset p = make_panel(3, 40);
  const double a[3] = {5.0, -2.0, 0.5};
  const double b[3] = {0.25, -0.75, 1.5};
  for (int i = 0; i < 3; ++i)
    for (int t = 1; t <= 40; ++t) p.values[i * 40 + t - 1] = a[i] + b[i] * t;
  AdoptionTime ad = resolve_adoption(p, parse_date("2017-01-21"));

  DetrendResult res = detrend(p, ad, 10);
  CHECK(res.fit.fit_begin == 11);
  CHECK(res.fit.fit_end == 30);
  CHECK(res.fit.sample_begin == 11);
  CHECK(res.fit.sample_end == 30);
  for (int i = 0; i < 3; ++i) {
    CHECK(res.fit.slope[i] == doctest::Approx(b[i]).epsilon(1e-12));
    CHECK(res.fit.intercept[i] == doctest::Approx(a[i]).epsilon(1e-10));
  }
  CHECK(res.residuals.n() == 3);
  CHECK(res.residuals.num_periods == 20);
  CHECK(res.residuals.start == p.date_of(11));
  for (double r : res.residuals.values) CHECK(std::fabs(r) <= 1e-9);
}

TEST_CASE("detrend with pre-adoption fit only") {
  PanelDataset p = make_panel(1, 30);
  // Linear before adoption, a level jump afterwards.
  AdoptionTime ad = resolve_adoption(p, parse_date("2017-01-16"));
  for (int t = 1; t <= 30; ++t)
    p.at(0, t) = 1.0 + 2.0 * t + (t >= ad.period ? 10.0 : 0.0);

  DetrendResult res = detrend(p, ad, 10, true);
  CHECK(res.fit.pre_only);
  CHECK(res.fit.sample_begin == 6);
  CHECK(res.fit.sample_end == 15);
  CHECK(res.fit.slope[0] == doctest::Approx(2.0).epsilon(1e-12));
  // Residuals are near zero before adoption and near the jump after it.
  CHECK(std::fabs(res.residuals.at(0, 1)) <= 1e-9);
  CHECK(res.residuals.at(0, res.fit.fit_end - res.fit.fit_begin + 1) ==
        doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("detrend clips the span and warns") {
  PanelDataset p = make_panel(1, 12);
  for (int t = 1; t <= 12; ++t) p.at(0, t) = t;
  AdoptionTime ad = resolve_adoption(p, parse_date("2017-01-05"));
  std::vector<std::string> notes;
  DetrendResult res = detrend(p, ad, 300, false, &notes);
  CHECK(res.fit.fit_begin == 1);
  CHECK(res.fit.fit_end == 12);
  REQUIRE(notes.size() == 1);
  CHECK(notes[0].find("clipped") != std::string::npos);
}

TEST_CASE("detrend needs three estimation periods") {
  PanelDataset p = make_panel(1, 10);
  AdoptionTime ad = resolve_adoption(p, parse_date("2017-01-03"));
  CHECK_THROWS_AS(detrend(p, ad, 300, true), Error);  // only 2 pre periods
  CHECK_NOTHROW(detrend(p, resolve_adoption(p, parse_date("2017-01-04")), 300,
                        true));
  CHECK_THROWS_AS(detrend(p, ad, 0), Error);
}

TEST_CASE("combiner names round-trip") {
  CHECK(parse_combiner("max") == Combiner::max_abs);
  CHECK(parse_combiner("mean") == Combiner::mean_abs);
  CHECK(parse_combiner("hotelling") == Combiner::hotelling);
  CHECK(combiner_name(Combiner::max_abs) == std::string("max"));
  CHECK(combiner_name(Combiner::mean_abs) == std::string("mean"));
  CHECK(combiner_name(Combiner::hotelling) == std::string("hotelling"));
  CHECK_THROWS_AS(parse_combiner("median"), Error);
}

TEST_CASE("max and mean combiners") {
  const double v[3] = {-3.0, 2.0, 2.5};
  CHECK(combine(v, 3, nullptr, 0, Combiner::max_abs) == doctest::Approx(3.0));
  CHECK(combine(v, 3, nullptr, 0, Combiner::mean_abs) ==
        doctest::Approx(0.5));
  CHECK_THROWS_AS(combine(v, 0, nullptr, 0, Combiner::max_abs), Error);
}

TEST_CASE("hotelling quadratic form in one dimension") {
  // Reference sample 1, 2, 3, 4: mean 2.5, variance 5/3.
  const double ref[4] = {1.0, 2.0, 3.0, 4.0};
  HotellingModel m = hotelling_fit(ref, 4, 1);
  CHECK(m.mean[0] == doctest::Approx(2.5));
  CHECK(m.pinv[0] == doctest::Approx(3.0 / 5.0));
  const double x = 4.5;
  CHECK(hotelling_apply(m, &x) == doctest::Approx(4.0 * 0.6));
  CHECK(combine(&x, 1, ref, 4, Combiner::hotelling) ==
        doctest::Approx(4.0 * 0.6));
}

TEST_CASE("hotelling drops degenerate directions") {
  // Second coordinate is constant; its direction must not blow up the form.
  std::vector<double> ref;
  for (int r = 0; r < 8; ++r) {
    ref.push_back(static_cast<double>(r));
    ref.push_back(7.0);
  }
  HotellingModel m = hotelling_fit(ref.data(), 8, 2);
  const double probe[2] = {3.5, 100.0};
  const double same[2] = {3.5, 7.0};
  CHECK(hotelling_apply(m, probe) == doctest::Approx(hotelling_apply(m, same)));

  std::vector<double> flat(10, 1.0);
  CHECK_THROWS_AS(hotelling_fit(flat.data(), 5, 2), Error);
}

TEST_CASE("hotelling needs enough reference draws") {
  std::vector<double> ref(6, 0.0);
  CHECK_THROWS_AS(hotelling_fit(ref.data(), 3, 2), Error);
}

TEST_CASE("hotelling is invariant to coordinate scaling") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> noise;
  const int rows = 200;
  std::vector<double> ref(rows * 2), scaled(rows * 2);
  for (int r = 0; r < rows; ++r) {
    double x = noise(gen), y = 0.5 * x + noise(gen);
    ref[r * 2] = x;
    ref[r * 2 + 1] = y;
    scaled[r * 2] = 10.0 * x;
    scaled[r * 2 + 1] = -2.0 * y;
  }
  HotellingModel m1 = hotelling_fit(ref.data(), rows, 2);
  HotellingModel m2 = hotelling_fit(scaled.data(), rows, 2);
  const double v1[2] = {1.0, 2.0};
  const double v2[2] = {10.0, -4.0};
  CHECK(hotelling_apply(m1, v1) ==
        doctest::Approx(hotelling_apply(m2, v2)).epsilon(1e-9));
}
