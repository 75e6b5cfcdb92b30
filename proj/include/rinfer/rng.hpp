#pragma once

#include <cstdint>

// Counter-based random number derivation. Every random quantity in the
// library is a pure function of (stream key, simulation index, unit index),
// so results are independent of thread count and simulation order, and any
// single draw can be reproduced in isolation.

namespace rinfer::rng {

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr uint64_t kUnitSalt = 0xD1B54A32D192ED03ull;

// Finalizer with full avalanche; the standard 64-bit xorshift-multiply mixer.
inline uint64_t mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

// Derives a child stream key from a parent key and an integer salt.
inline uint64_t derive_stream(uint64_t key, uint64_t salt) {
  return mix64(key ^ mix64(salt + kGolden));
}

// Per-simulation state, hoisted out of the per-unit loop.
inline uint64_t sim_state(uint64_t key, uint64_t sim) {
  return mix64(key + sim * kGolden);
}

inline uint64_t draw_hash_from_state(uint64_t state, uint64_t unit) {
  return mix64(state ^ (unit + kUnitSalt));
}

// The canonical per-(simulation, unit) hash.
inline uint64_t draw_hash(uint64_t key, uint64_t sim, uint64_t unit) {
  return draw_hash_from_state(sim_state(key, sim), unit);
}

// Reversal bit for the treatment-reversal mechanism.
inline bool tr_bit(uint64_t h) { return (h >> 63) != 0; }

// Index into a support of size j, via fixed-point multiply on the top hash
// bits. Bias is j / 2^32, negligible for the support sizes seen here.
inline uint32_t at_index(uint64_t h, uint32_t j) {
  return static_cast<uint32_t>(((h >> 32) * static_cast<uint64_t>(j)) >> 32);
}

// Uniform double in [0, 1), 53 bits.
inline double unit_double(uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Stable per-cell seed for diagnostic grids: adding rows or columns to a
// scan never perturbs existing cells.
inline uint64_t cell_seed(uint64_t master, uint64_t period, uint64_t tau,
                          uint64_t mechanism) {
  return derive_stream(derive_stream(derive_stream(master, period), tau),
                       mechanism);
}

}  // namespace rinfer::rng
