#include <atomic>
#include <cstdlib>
#include <string>

#include "rinfer/error.hpp"
#include "rinfer/kernels.hpp"

namespace rinfer::kernels {

#if defined(RINFER_HAVE_AVX2)
const Backend& avx2_backend_ref();  // defined in avx2.cpp
#endif

const Backend* avx2_backend() {
#if defined(RINFER_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2")) return &avx2_backend_ref();
#endif
  return nullptr;
}

BackendChoice parse_backend(const std::string& name) {
  if (name == "auto") return BackendChoice::auto_detect;
  if (name == "scalar") return BackendChoice::scalar;
  if (name == "avx2") return BackendChoice::avx2;
  fail("unknown kernel backend '" + name +
       "' (expected auto, scalar, or avx2)");
}

namespace {

std::atomic<const Backend*> g_forced{nullptr};

const Backend* from_choice(BackendChoice choice) {
  switch (choice) {
    case BackendChoice::scalar:
      return &scalar_backend();
    case BackendChoice::avx2: {
      const Backend* b = avx2_backend();
      if (!b) fail("avx2 kernels are not supported on this machine");
      return b;
    }
    case BackendChoice::auto_detect:
    default:
      return nullptr;
  }
}

const Backend* env_choice() {
  const char* env = std::getenv("RINFER_KERNEL");
  if (!env || !*env) return nullptr;
  return from_choice(parse_backend(env));
}

}  // namespace

void force_backend(BackendChoice choice) {
  g_forced.store(from_choice(choice));
}

const Backend& active_backend() {
  if (const Backend* forced = g_forced.load()) return *forced;
  static const Backend* resolved = [] {
    if (const Backend* env = env_choice()) return env;
    if (const Backend* simd = avx2_backend()) return simd;
    return &scalar_backend();
  }();
  return *resolved;
}

}  // namespace rinfer::kernels
