#pragma once

#include <cstdint>
#include <string>

// Batch simulation kernels: the hot loops of the Monte Carlo engine.
// A scalar reference implementation defines the contract; SIMD variants are
// selected at runtime and must produce bit-identical output (they consume
// identical integer hash streams and accumulate in the same order).

namespace rinfer::kernels {

// Treatment-reversal batch: out[s - sim_begin], for s in [sim_begin,
// sim_end), is the mean over units of +-delta[i], the sign taken from the
// per-(s, i) hash bit.
struct TrJob {
  const double* delta;  // n per-unit (after mean - before mean) values
  int n;
  uint64_t key;  // stream key
};

// Adoption-time batch: table is row-major n x j; unit i contributes
// table[i*j + index(s, i)] where index is the hashed draw from the support.
struct AtJob {
  const double* table;
  int n;
  int j;
  uint64_t key;
};

struct Backend {
  const char* name;
  void (*tr_stats)(const TrJob& job, uint64_t sim_begin, uint64_t sim_end,
                   double* out);
  void (*at_stats)(const AtJob& job, uint64_t sim_begin, uint64_t sim_end,
                   double* out);
  // Count of values with |values[k]| >= threshold.
  uint64_t (*count_abs_geq)(const double* values, uint64_t count,
                            double threshold);
};

const Backend& scalar_backend();

// nullptr when AVX2 is unavailable (not compiled in or not supported by the
// CPU at run time).
const Backend* avx2_backend();

enum class BackendChoice { auto_detect, scalar, avx2 };

BackendChoice parse_backend(const std::string& name);

// Honors force_backend() first, then the RINFER_KERNEL environment variable
// (scalar | avx2 | auto), then picks the best supported variant.
const Backend& active_backend();

// Throws Error when the requested variant is unsupported on this machine.
void force_backend(BackendChoice choice);

}  // namespace rinfer::kernels
