#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "rinfer/assignment.hpp"
#include "rinfer/error.hpp"
#include "rinfer/kernels.hpp"
#include "rinfer/panel.hpp"
#include "rinfer/rng.hpp"
#include "rinfer/statistics.hpp"

using namespace rinfer;
using kernels::AtJob;
using kernels::TrJob;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (std::bit_cast<uint64_t>(a[i]) != std::bit_cast<uint64_t>(b[i]))
      return false;
  return true;
}

std::vector<double> random_values(size_t count, uint64_t seed) {
  std::vector<double> v(count);
  for (size_t i = 0; i < count; ++i)
    v[i] = rng::unit_double(rng::draw_hash(seed, i, 0)) * 10.0 - 5.0;
  return v;
}

}  // namespace

TEST_CASE("scalar reversal batch matches a direct transcription") {
  const int n = 5;
  auto delta = random_values(n, 11);
  TrJob job{delta.data(), n, rng::derive_stream(42, 0)};
  std::vector<double> out(7);
  kernels::scalar_backend().tr_stats(job, 3, 10, out.data());
  for (uint64_t s = 3; s < 10; ++s) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      uint64_t h = rng::draw_hash(job.key, s, i);
      acc += rng::tr_bit(h) ? delta[i] : -delta[i];
    }
    CHECK(out[s - 3] == acc / n);
  }
}

TEST_CASE("scalar adoption batch gathers hashed support entries") {
  const int n = 4, j = 3;
  auto table = random_values(static_cast<size_t>(n) * j, 13);
  AtJob job{table.data(), n, j, rng::derive_stream(43, 0)};
  std::vector<double> out(9);
  kernels::scalar_backend().at_stats(job, 0, 9, out.data());
  for (uint64_t s = 0; s < 9; ++s) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      uint64_t h = rng::draw_hash(job.key, s, i);
      acc += table[i * j + rng::at_index(h, j)];
    }
    CHECK(out[s] == acc / n);
  }
}

TEST_CASE("batch kernels agree with the single-draw slab route") {
  // The Monte Carlo engine evaluates precomputed per-unit tables; the exact
  // engine re-averages the window slab per draw. Both must give the same
  // statistic at the same stream position.
  PanelDataset p;
  p.units = {"a", "b", "c", "d", "e", "f"};
  p.start = parse_date("2017-01-01");
  p.num_periods = 8;
  p.values = random_values(48, 7);
  AdoptionTime a = resolve_adoption(p, parse_date("2017-01-05"));
  WindowView v = window(p, a, 3);
  const uint64_t key = rng::derive_stream(987, 0);

  SUBCASE("treatment reversal") {
    MechanismSpec spec = MechanismSpec::treatment_reversal(3);
    std::vector<double> delta(v.n);
    for (int i = 0; i < v.n; ++i) {
      double pre = 0.0, post = 0.0;
      for (int c = 0; c < 3; ++c) pre += v.at(i, c);
      for (int c = 3; c < 6; ++c) post += v.at(i, c);
      delta[i] = post / 3 - pre / 3;
    }
    TrJob job{delta.data(), v.n, key};
    std::vector<double> out(50);
    kernels::scalar_backend().tr_stats(job, 0, 50, out.data());
    for (uint64_t s = 0; s < 50; ++s) {
      auto draw = sample_draw(spec, v.n, {key, s});
      double direct = diff_in_means(unit_averages(v, draw)).value;
      CHECK(out[s] == doctest::Approx(direct).epsilon(1e-12));
    }
  }

  SUBCASE("adoption timing") {
    MechanismSpec spec = MechanismSpec::adoption_time(3, {-2, -1, 0});
    const int j = spec.support_size();
    std::vector<double> table(static_cast<size_t>(v.n) * j);
    for (int i = 0; i < v.n; ++i)
      for (int k = 0; k < j; ++k) {
        int split = 3 + spec.offsets[k];
        double control = 0.0, treated = 0.0;
        for (int c = 0; c < split; ++c) control += v.at(i, c);
        for (int c = split; c < 6; ++c) treated += v.at(i, c);
        table[i * j + k] = treated / (6 - split) - control / split;
      }
    AtJob job{table.data(), v.n, j, key};
    std::vector<double> out(50);
    kernels::scalar_backend().at_stats(job, 0, 50, out.data());
    for (uint64_t s = 0; s < 50; ++s) {
      auto draw = sample_draw(spec, v.n, {key, s});
      double direct = diff_in_means(unit_averages(v, draw)).value;
      CHECK(out[s] == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("exceedance count uses an inclusive absolute comparison") {
  std::vector<double> vals{-2.0, -0.5, 0.5, 1.0, 1.5, -1.0};
  const auto& b = kernels::scalar_backend();
  CHECK(b.count_abs_geq(vals.data(), vals.size(), 1.0) == 4);
  CHECK(b.count_abs_geq(vals.data(), vals.size(), 0.0) == 6);
  CHECK(b.count_abs_geq(vals.data(), vals.size(), 2.5) == 0);
  CHECK(b.count_abs_geq(vals.data(), 0, 1.0) == 0);
}

TEST_CASE("simd backend is bit-identical to the scalar reference") {
  const auto* simd = kernels::avx2_backend();
  if (!simd) {
    MESSAGE("avx2 unavailable on this machine; skipping");
    return;
  }
  std::mt19937_64 gen(2024);
  for (int round = 0; round < 20; ++round) {
    const int n = 1 + static_cast<int>(gen() % 70);
    const uint64_t key = gen();
    const uint64_t begin = gen() % 100;
    // Deliberately not a multiple of the lane width, to cover the tail.
    const uint64_t count = 1 + gen() % 1023;

    auto delta = random_values(n, gen());
    TrJob tr{delta.data(), n, key};
    std::vector<double> a(count), b(count);
    kernels::scalar_backend().tr_stats(tr, begin, begin + count, a.data());
    simd->tr_stats(tr, begin, begin + count, b.data());
    CHECK(same_bits(a, b));

    const int j = 1 + static_cast<int>(gen() % 9);
    auto table = random_values(static_cast<size_t>(n) * j, gen());
    AtJob at{table.data(), n, j, key};
    kernels::scalar_backend().at_stats(at, begin, begin + count, a.data());
    simd->at_stats(at, begin, begin + count, b.data());
    CHECK(same_bits(a, b));

    const double threshold = std::fabs(a[count / 2]);
    CHECK(kernels::scalar_backend().count_abs_geq(a.data(), count,
                                                  threshold) ==
          simd->count_abs_geq(b.data(), count, threshold));
  }
}

TEST_CASE("backend selection") {
  CHECK(kernels::parse_backend("auto") == kernels::BackendChoice::auto_detect);
  CHECK(kernels::parse_backend("scalar") == kernels::BackendChoice::scalar);
  CHECK(kernels::parse_backend("avx2") == kernels::BackendChoice::avx2);
  CHECK_THROWS_AS(kernels::parse_backend("sse9"), Error);

  kernels::force_backend(kernels::BackendChoice::scalar);
  CHECK(std::string(kernels::active_backend().name) == "scalar");
  kernels::force_backend(kernels::BackendChoice::auto_detect);
  if (kernels::avx2_backend())
    CHECK(std::string(kernels::active_backend().name) == "avx2");
}
