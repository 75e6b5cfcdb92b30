// ============================================================================
// Scalar reference kernels.
//
// These define the numeric contract for every SIMD variant: identical hash
// streams, identical per-simulation accumulation order over units, identical
// final division. A vector backend is correct only if it reproduces these
// outputs bit for bit.
// ============================================================================

#include <cmath>

#include "rinfer/kernels.hpp"
#include "rinfer/rng.hpp"

namespace rinfer::kernels {

namespace {

void tr_stats_scalar(const TrJob& job, uint64_t sim_begin, uint64_t sim_end,
                     double* out) {
  const double* delta = job.delta;
  const int n = job.n;
  for (uint64_t s = sim_begin; s < sim_end; ++s) {
    uint64_t state = rng::sim_state(job.key, s);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      uint64_t h = rng::draw_hash_from_state(state, static_cast<uint64_t>(i));
      acc += (h >> 63) ? delta[i] : -delta[i];
    }
    out[s - sim_begin] = acc / n;
  }
}

void at_stats_scalar(const AtJob& job, uint64_t sim_begin, uint64_t sim_end,
                     double* out) {
  const double* table = job.table;
  const int n = job.n;
  const auto j = static_cast<uint32_t>(job.j);
  for (uint64_t s = sim_begin; s < sim_end; ++s) {
    uint64_t state = rng::sim_state(job.key, s);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      uint64_t h = rng::draw_hash_from_state(state, static_cast<uint64_t>(i));
      acc += table[static_cast<uint32_t>(i) * j + rng::at_index(h, j)];
    }
    out[s - sim_begin] = acc / n;
  }
}

uint64_t count_abs_geq_scalar(const double* values, uint64_t count,
                              double threshold) {
  uint64_t hits = 0;
  for (uint64_t k = 0; k < count; ++k)
    hits += std::fabs(values[k]) >= threshold ? 1 : 0;
  return hits;
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend backend{"scalar", tr_stats_scalar, at_stats_scalar,
                               count_abs_geq_scalar};
  return backend;
}

}  // namespace rinfer::kernels
