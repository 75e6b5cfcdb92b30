#include "rinfer/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <thread>

#include "rinfer/error.hpp"
#include "rinfer/kernels.hpp"
#include "rinfer/rng.hpp"

namespace rinfer {

CountingRule parse_counting(const std::string& name) {
  if (name == "plain") return CountingRule::plain;
  if (name == "add-one") return CountingRule::add_one;
  fail("unknown counting rule '" + name + "' (expected plain or add-one)");
}

const char* counting_name(CountingRule c) {
  return c == CountingRule::plain ? "plain" : "add-one";
}

RunMode parse_run_mode(const std::string& name) {
  if (name == "auto") return RunMode::auto_select;
  if (name == "mc") return RunMode::monte_carlo;
  if (name == "exact") return RunMode::exact;
  fail("unknown mode '" + name + "' (expected auto, mc, or exact)");
}

namespace {

// Ordinal salt for the single-window stream; joint windows use their index,
// so a one-window joint run consumes exactly the single-test stream.
constexpr uint64_t kSingleWindowOrdinal = 0;

// Precomputed per-unit ingredients for the batch kernels. Sums run over slab
// columns in ascending order; the kernels then accumulate units in ascending
// order, so the observed statistic computed here ties exactly with the
// simulated ones.
struct Tables {
  int n = 0;
  int j = 0;                    // AT support size
  std::vector<double> tr_delta;  // n
  std::vector<double> at_table;  // n x j
  double s_obs = 0.0;
  double baseline = 0.0;  // mean over units of the pre-adoption window mean
};

Tables build_tables(const WindowView& view, const MechanismSpec& spec) {
  Tables tb;
  tb.n = view.n;
  const int tau = view.tau;
  const int cols = view.cols();
  double pre_sum_over_units = 0.0;
  if (spec.kind == Mechanism::tr) {
    tb.tr_delta.resize(tb.n);
    double obs = 0.0;
    for (int i = 0; i < tb.n; ++i) {
      double pre = 0.0, post = 0.0;
      for (int c = 0; c < tau; ++c) pre += view.at(i, c);
      for (int c = tau; c < cols; ++c) post += view.at(i, c);
      tb.tr_delta[i] = post / tau - pre / tau;
      obs += tb.tr_delta[i];
      pre_sum_over_units += pre / tau;
    }
    tb.s_obs = obs / tb.n;
  } else {
    tb.j = spec.support_size();
    tb.at_table.resize(static_cast<size_t>(tb.n) * tb.j);
    const int zero = spec.zero_offset_index();
    double obs = 0.0;
    for (int i = 0; i < tb.n; ++i) {
      for (int jj = 0; jj < tb.j; ++jj) {
        const int split = tau + spec.offsets[jj];  // first treated column
        double control = 0.0, treated = 0.0;
        for (int c = 0; c < split; ++c) control += view.at(i, c);
        for (int c = split; c < cols; ++c) treated += view.at(i, c);
        tb.at_table[static_cast<size_t>(i) * tb.j + jj] =
            treated / (cols - split) - control / split;
      }
      obs += tb.at_table[static_cast<size_t>(i) * tb.j + zero];
      double pre = 0.0;
      for (int c = 0; c < tau; ++c) pre += view.at(i, c);
      pre_sum_over_units += pre / tau;
    }
    tb.s_obs = obs / tb.n;
  }
  tb.baseline = pre_sum_over_units / tb.n;
  require(std::isfinite(tb.s_obs) && std::isfinite(tb.baseline),
          "observed statistic is not finite");
  return tb;
}

void fill_stats(const kernels::Backend& backend, Mechanism kind,
                const Tables& tb, uint64_t key, uint64_t n_sim, int threads,
                double* out) {
  auto run_range = [&](uint64_t begin, uint64_t end) {
    if (kind == Mechanism::tr) {
      kernels::TrJob job{tb.tr_delta.data(), tb.n, key};
      backend.tr_stats(job, begin, end, out + begin);
    } else {
      kernels::AtJob job{tb.at_table.data(), tb.n, tb.j, key};
      backend.at_stats(job, begin, end, out + begin);
    }
  };
  const int workers = std::max(1, threads);
  if (workers == 1 || n_sim < 2048) {
    run_range(0, n_sim);
    return;
  }
  // Stats are a pure function of the simulation index, so any split of the
  // range gives identical results.
  std::vector<std::thread> pool;
  const uint64_t chunk = n_sim / workers, extra = n_sim % workers;
  uint64_t begin = 0;
  for (int w = 0; w < workers; ++w) {
    uint64_t end = begin + chunk + (static_cast<uint64_t>(w) < extra ? 1 : 0);
    pool.emplace_back(run_range, begin, end);
    begin = end;
  }
  for (auto& t : pool) t.join();
}

struct InternalRun {
  TestResult result;
  std::vector<double> stats;  // filled only on request
};

InternalRun run_test(const WindowView& view, const MechanismSpec& spec,
                     const TestOptions& opts, bool keep_stats) {
  spec.validate(view.n);
  require(spec.tau == view.tau,
          "mechanism window (tau " + std::to_string(spec.tau) +
              ") does not match the data window (tau " +
              std::to_string(view.tau) + ")");
  InternalRun run;
  TestResult& r = run.result;
  r.tau = view.tau;
  r.mechanism = spec.kind;
  r.seed = opts.seed;
  r.counting = opts.counting;

  const uint64_t space = spec.space_size(view.n);
  const bool exact =
      opts.mode == RunMode::exact ||
      (opts.mode == RunMode::auto_select && space <= opts.enum_cap);
  if (opts.mode == RunMode::exact && space > opts.enum_cap)
    fail("exact mode requested but the assignment space (" +
         (space == UINT64_MAX ? std::string("over 2^64")
                              : std::to_string(space)) +
         ") exceeds the enumeration cap of " + std::to_string(opts.enum_cap));
  if (spec.kind == Mechanism::at && spec.support_size() == 1)
    r.warnings.push_back(
        "adoption-time support is {0}: only the factual assignment exists, "
        "p = 1 by construction");

  if (exact) {
    r.exact = true;
    r.draws = space;
    if (opts.counting == CountingRule::add_one)
      r.warnings.push_back(
          "add-one counting is a Monte Carlo device; exact mode reports "
          "count / space");
    DrawEnumerator en(spec, view.n, opts.enum_cap);
    const auto obs =
        diff_in_means(unit_averages(view, factual_draw(spec, view.n)));
    r.observed_stat = obs.value;
    r.control_baseline = obs.control_mean;
    const double threshold = std::fabs(obs.value);
    uint64_t count = 0;
    if (keep_stats) run.stats.resize(space);
    for (uint64_t k = 0; k < space; ++k) {
      const double s = diff_in_means(unit_averages(view, en.at(k))).value;
      if (keep_stats) run.stats[k] = s;
      if (std::fabs(s) >= threshold) ++count;
    }
    r.exceed_count = count;
    r.p_value = static_cast<double>(count) / static_cast<double>(space);
  } else {
    require(opts.n_sim >= 1, "need at least one simulation");
    r.exact = false;
    r.draws = opts.n_sim;
    const Tables tb = build_tables(view, spec);
    r.observed_stat = tb.s_obs;
    r.control_baseline = tb.baseline;
    const auto& backend = kernels::active_backend();
    const uint64_t key = rng::derive_stream(opts.seed, kSingleWindowOrdinal);
    run.stats.resize(opts.n_sim);
    fill_stats(backend, spec.kind, tb, key, opts.n_sim, opts.threads,
               run.stats.data());
    const uint64_t count = backend.count_abs_geq(
        run.stats.data(), opts.n_sim, std::fabs(tb.s_obs));
    r.exceed_count = count;
    r.p_value =
        opts.counting == CountingRule::add_one
            ? static_cast<double>(count + 1) /
                  static_cast<double>(opts.n_sim + 1)
            : static_cast<double>(count) / static_cast<double>(opts.n_sim);
    if (!keep_stats) run.stats.clear();
  }
  require(std::isfinite(r.p_value) && r.p_value >= 0.0 && r.p_value <= 1.0,
          "p-value out of range");
  return run;
}

// Candidate constant effects are removed from the factually treated cells
// (the post-adoption half of the window).
WindowView shifted_view(const WindowView& view, double theta) {
  WindowView adj = view;
  for (int i = 0; i < adj.n; ++i)
    for (int c = adj.first_post_col(); c < adj.cols(); ++c)
      adj.at(i, c) -= theta;
  return adj;
}

}  // namespace

TestResult randomization_test(const WindowView& view,
                              const MechanismSpec& spec,
                              const TestOptions& opts) {
  return run_test(view, spec, opts, false).result;
}

CIResult confidence_interval(const WindowView& view, const MechanismSpec& spec,
                             const TestOptions& opts, const CIOptions& ci) {
  require(ci.alpha > 0.0 && ci.alpha < 1.0, "alpha must lie in (0, 1)");
  require(ci.grid_resolution > 0.0, "grid resolution must be positive");

  InternalRun base = run_test(view, spec, opts, true);
  CIResult out;
  out.alpha = ci.alpha;
  out.grid_resolution = ci.grid_resolution;
  out.base = base.result;
  const double theta_hat = base.result.observed_stat;
  const double res = ci.grid_resolution;

  double sd = 0.0;
  {
    double mean = 0.0;
    for (double s : base.stats) mean += s;
    mean /= static_cast<double>(base.stats.size());
    for (double s : base.stats) sd += (s - mean) * (s - mean);
    sd = base.stats.size() > 1
             ? std::sqrt(sd / static_cast<double>(base.stats.size() - 1))
             : 0.0;
  }

  // Memoized acceptance on the lattice theta_hat + k * resolution.
  std::map<int64_t, bool> cache;
  auto accepted = [&](int64_t k) {
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    const double theta = theta_hat + static_cast<double>(k) * res;
    const TestResult probe =
        run_test(shifted_view(view, theta), spec, opts, false).result;
    const bool ok = probe.p_value > ci.alpha;
    cache.emplace(k, ok);
    return ok;
  };

  const double half = std::max(10.0 * sd, 100.0 * res);
  const int kCoarsePoints = 20;  // each side
  int64_t cstep = std::max<int64_t>(
      1, static_cast<int64_t>(std::llround(half / res / kCoarsePoints)));

  std::vector<int64_t> probes;
  for (int k = -kCoarsePoints; k <= kCoarsePoints; ++k)
    probes.push_back(k * cstep);

  // Extend a flank while its outermost probe is still accepted.
  const int kMaxExtensions = 6;
  for (int round = 0; round < kMaxExtensions; ++round) {
    if (!accepted(probes.back())) break;
    int64_t edge = probes.back();
    for (int k = 1; k <= kCoarsePoints; ++k) probes.push_back(edge + k * cstep);
  }
  out.upper_open = accepted(probes.back());
  for (int round = 0; round < kMaxExtensions; ++round) {
    if (!accepted(probes.front())) break;
    int64_t edge = probes.front();
    std::vector<int64_t> ext;
    for (int k = kCoarsePoints; k >= 1; --k) ext.push_back(edge - k * cstep);
    probes.insert(probes.begin(), ext.begin(), ext.end());
  }
  out.lower_open = accepted(probes.front());

  std::vector<int64_t> hits;
  for (int64_t k : probes)
    if (accepted(k)) hits.push_back(k);
  if (hits.empty())
    fail("confidence interval: empty acceptance region at resolution " +
         std::to_string(res) + " (no candidate effect has p > alpha)");
  std::sort(hits.begin(), hits.end());

  bool contiguous = true;
  {
    std::sort(probes.begin(), probes.end());
    int64_t lo = hits.front(), hi = hits.back();
    for (int64_t k : probes)
      if (k > lo && k < hi && !accepted(k)) contiguous = false;
  }

  int64_t lower_k = hits.front(), upper_k = hits.back();
  if (!contiguous) {
    // Non-monotone sample path: scan the whole bracket at full resolution.
    out.exhaustive_fallback = true;
    out.warnings.push_back(
        "acceptance region not contiguous across the coarse grid; "
        "fell back to an exhaustive scan");
    const int64_t lo = hits.front() - cstep, hi = hits.back() + cstep;
    require(hi - lo <= 2'000'000,
            "exhaustive confidence-interval scan would need more than 2e6 "
            "grid points; raise the grid resolution");
    lower_k = INT64_MAX;
    upper_k = INT64_MIN;
    for (int64_t k = lo; k <= hi; ++k)
      if (accepted(k)) {
        lower_k = std::min(lower_k, k);
        upper_k = std::max(upper_k, k);
      }
  } else {
    if (!out.upper_open) {
      int64_t a = upper_k, b = upper_k + cstep;  // accepted / rejected
      while (b - a > 1) {
        int64_t m = a + (b - a) / 2;
        (accepted(m) ? a : b) = m;
      }
      upper_k = a;
    } else {
      upper_k = probes.back();
    }
    if (!out.lower_open) {
      int64_t a = lower_k, b = lower_k - cstep;  // accepted / rejected
      while (a - b > 1) {
        int64_t m = b + (a - b) / 2;
        (accepted(m) ? a : b) = m;
      }
      lower_k = a;
    } else {
      lower_k = probes.front();
    }
  }

  out.lower = theta_hat + static_cast<double>(lower_k) * res;
  out.upper = theta_hat + static_cast<double>(upper_k) * res;
  if (out.lower_open || out.upper_open)
    out.warnings.push_back(
        "acceptance region reaches the search bracket; interval reported as "
        "open at that end");
  return out;
}

JointResult joint_test(const PanelDataset& panel, const AdoptionTime& adoption,
                       const std::vector<MechanismSpec>& windows,
                       Combiner method, const TestOptions& opts,
                       const JointOptions& joint) {
  require(!windows.empty(), "joint test needs at least one window");
  const int L = static_cast<int>(windows.size());
  const Mechanism kind = windows[0].kind;
  for (int l = 0; l < L; ++l) {
    require(windows[l].kind == kind,
            "joint test windows must share one mechanism");
    if (l > 0)
      require(windows[l].tau > windows[l - 1].tau,
              "joint test windows must be strictly ascending in tau");
    if (kind == Mechanism::at)
      require(windows[l].tau >= 2,
              "adoption-time windows in a joint test need tau >= 2");
  }
  require(opts.mode != RunMode::exact,
          "joint tests are Monte Carlo only; exact mode is not available");
  require(opts.n_sim >= 1, "need at least one simulation");
  if (method == Combiner::hotelling)
    require(opts.n_sim >= static_cast<uint64_t>(L) + 2,
            "hotelling combiner needs at least L + 2 simulations");

  JointResult r;
  r.mechanism = kind;
  r.combiner = method;
  r.n_sim = opts.n_sim;
  r.seed = opts.seed;
  r.counting = opts.counting;
  r.coupled = joint.coupled;

  const auto& backend = kernels::active_backend();
  const uint64_t n_sim = opts.n_sim;
  std::vector<double> comp(static_cast<size_t>(n_sim) * L);
  std::vector<double> buffer(n_sim);
  r.observed_components.resize(L);
  for (int l = 0; l < L; ++l) {
    const MechanismSpec& spec = windows[l];
    spec.validate(panel.n());
    r.taus.push_back(spec.tau);
    if (spec.kind == Mechanism::at && spec.support_size() == 1)
      r.warnings.push_back("window tau " + std::to_string(spec.tau) +
                           ": adoption-time support is {0}; its component is "
                           "constant across draws");
    const WindowView view = window(panel, adoption, spec.tau);
    const Tables tb = build_tables(view, spec);
    r.observed_components[l] = tb.s_obs;
    const uint64_t key = rng::derive_stream(
        opts.seed, joint.coupled ? kSingleWindowOrdinal : uint64_t(l));
    fill_stats(backend, kind, tb, key, n_sim, opts.threads, buffer.data());
    for (uint64_t s = 0; s < n_sim; ++s)
      comp[s * L + l] = buffer[s];
  }

  uint64_t count = 0;
  if (method == Combiner::hotelling) {
    const HotellingModel model = hotelling_fit(comp.data(), n_sim, L);
    r.observed = hotelling_apply(model, r.observed_components.data());
    for (uint64_t s = 0; s < n_sim; ++s)
      if (hotelling_apply(model, comp.data() + s * L) >= r.observed) ++count;
  } else {
    r.observed = combine(r.observed_components.data(), L, nullptr, 0, method);
    for (uint64_t s = 0; s < n_sim; ++s)
      if (combine(comp.data() + s * L, L, nullptr, 0, method) >= r.observed)
        ++count;
  }
  r.exceed_count = count;
  r.p_value = opts.counting == CountingRule::add_one
                  ? static_cast<double>(count + 1) /
                        static_cast<double>(n_sim + 1)
                  : static_cast<double>(count) / static_cast<double>(n_sim);
  require(std::isfinite(r.observed), "joint statistic is not finite");
  return r;
}

}  // namespace rinfer
