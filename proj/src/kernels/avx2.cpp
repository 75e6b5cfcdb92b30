// ============================================================================
// AVX2 kernels: four simulations per iteration.
//
// Lanes are independent simulations, so each lane accumulates over units in
// exactly the scalar order and the results are bit-identical to the scalar
// reference. No FMA anywhere: contraction would change rounding.
// ============================================================================

#include <immintrin.h>

#include "rinfer/kernels.hpp"
#include "rinfer/rng.hpp"

namespace rinfer::kernels {

namespace {

// Low 64 bits of the lane-wise product (no native 64x64 multiply in AVX2).
inline __m256i mullo64(__m256i a, __m256i b) {
  __m256i bswap = _mm256_shuffle_epi32(b, 0xB1);    // swap 32-bit halves
  __m256i prodlh = _mm256_mullo_epi32(a, bswap);    // lo*hi, hi*lo
  __m256i zero = _mm256_setzero_si256();
  __m256i prodlh2 = _mm256_hadd_epi32(prodlh, zero);
  __m256i prodlh3 = _mm256_shuffle_epi32(prodlh2, 0x73);  // into high halves
  __m256i prodll = _mm256_mul_epu32(a, b);          // lo*lo, 64-bit
  return _mm256_add_epi64(prodll, prodlh3);
}

inline __m256i mix64_v(__m256i x) {
  x = _mm256_xor_si256(x, _mm256_srli_epi64(x, 30));
  x = mullo64(x, _mm256_set1_epi64x(int64_t(0xBF58476D1CE4E5B9ull)));
  x = _mm256_xor_si256(x, _mm256_srli_epi64(x, 27));
  x = mullo64(x, _mm256_set1_epi64x(int64_t(0x94D049BB133111EBull)));
  x = _mm256_xor_si256(x, _mm256_srli_epi64(x, 31));
  return x;
}

// States for simulations s..s+3; the Weyl products are exact uint64 scalar
// arithmetic, as in rng::sim_state.
inline __m256i sim_state4(uint64_t key, uint64_t s) {
  __m256i weyl = _mm256_set_epi64x(int64_t((s + 3) * rng::kGolden),
                                   int64_t((s + 2) * rng::kGolden),
                                   int64_t((s + 1) * rng::kGolden),
                                   int64_t(s * rng::kGolden));
  __m256i keyed =
      _mm256_add_epi64(_mm256_set1_epi64x(int64_t(key)), weyl);
  return mix64_v(keyed);
}

void tr_stats_avx2(const TrJob& job, uint64_t sim_begin, uint64_t sim_end,
                   double* out) {
  const int n = job.n;
  const __m256i signbit = _mm256_set1_epi64x(int64_t(0x8000000000000000ull));
  const __m256d inv = _mm256_set1_pd(static_cast<double>(n));
  uint64_t s = sim_begin;
  for (; s + 4 <= sim_end; s += 4) {
    __m256i state = sim_state4(job.key, s);
    __m256d acc = _mm256_setzero_pd();
    for (int i = 0; i < n; ++i) {
      __m256i salted = _mm256_set1_epi64x(
          int64_t(static_cast<uint64_t>(i) + rng::kUnitSalt));
      __m256i h = mix64_v(_mm256_xor_si256(state, salted));
      // Hash bit 63 set: +delta. Clear: flip delta's sign bit.
      __m256i flip = _mm256_andnot_si256(h, signbit);
      __m256d value = _mm256_xor_pd(_mm256_set1_pd(job.delta[i]),
                                    _mm256_castsi256_pd(flip));
      acc = _mm256_add_pd(acc, value);
    }
    _mm256_storeu_pd(out + (s - sim_begin), _mm256_div_pd(acc, inv));
  }
  if (s < sim_end)
    scalar_backend().tr_stats(job, s, sim_end, out + (s - sim_begin));
}

void at_stats_avx2(const AtJob& job, uint64_t sim_begin, uint64_t sim_end,
                   double* out) {
  const int n = job.n;
  const __m256i jvec = _mm256_set1_epi64x(int64_t(uint64_t(job.j)));
  const __m256d inv = _mm256_set1_pd(static_cast<double>(n));
  uint64_t s = sim_begin;
  for (; s + 4 <= sim_end; s += 4) {
    __m256i state = sim_state4(job.key, s);
    __m256d acc = _mm256_setzero_pd();
    for (int i = 0; i < n; ++i) {
      __m256i salted = _mm256_set1_epi64x(
          int64_t(static_cast<uint64_t>(i) + rng::kUnitSalt));
      __m256i h = mix64_v(_mm256_xor_si256(state, salted));
      // index = (top 32 hash bits * j) >> 32, as in rng::at_index
      __m256i hi32 = _mm256_srli_epi64(h, 32);
      __m256i idx = _mm256_srli_epi64(_mm256_mul_epu32(hi32, jvec), 32);
      const double* row = job.table + static_cast<size_t>(i) * job.j;
      acc = _mm256_add_pd(acc, _mm256_i64gather_pd(row, idx, 8));
    }
    _mm256_storeu_pd(out + (s - sim_begin), _mm256_div_pd(acc, inv));
  }
  if (s < sim_end)
    scalar_backend().at_stats(job, s, sim_end, out + (s - sim_begin));
}

uint64_t count_abs_geq_avx2(const double* values, uint64_t count,
                            double threshold) {
  const __m256d absmask = _mm256_castsi256_pd(
      _mm256_set1_epi64x(int64_t(0x7FFFFFFFFFFFFFFFull)));
  const __m256d t = _mm256_set1_pd(threshold);
  uint64_t hits = 0;
  uint64_t k = 0;
  for (; k + 4 <= count; k += 4) {
    __m256d v = _mm256_and_pd(_mm256_loadu_pd(values + k), absmask);
    __m256d m = _mm256_cmp_pd(v, t, _CMP_GE_OQ);
    hits += static_cast<unsigned>(__builtin_popcount(_mm256_movemask_pd(m)));
  }
  for (; k < count; ++k)
    hits += (values[k] < 0 ? -values[k] : values[k]) >= threshold ? 1 : 0;
  return hits;
}

}  // namespace

const Backend& avx2_backend_ref() {
  static const Backend backend{"avx2", tr_stats_avx2, at_stats_avx2,
                               count_abs_geq_avx2};
  return backend;
}

}  // namespace rinfer::kernels
