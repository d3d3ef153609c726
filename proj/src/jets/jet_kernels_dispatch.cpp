#include <atomic>
#include <cstdlib>
#include <string_view>

#include "threadsplit/error.hpp"
#include "threadsplit/jet_kernels.hpp"

namespace threadsplit::kernels {

#if !defined(THREADSPLIT_HAVE_AVX2)
const JetKernels* avx2_kernels() { return nullptr; }
#endif

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(THREADSPLIT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return avx2_kernels() != nullptr && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

namespace {

const JetKernels* choose() {
  const char* env = std::getenv("THREADSPLIT_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") return &scalar_kernels();
  if (cpu_supports(Isa::Avx2)) return avx2_kernels();
  return &scalar_kernels();
}

std::atomic<const JetKernels*>& slot() {
  static std::atomic<const JetKernels*> active{choose()};
  return active;
}

}  // namespace

const JetKernels& active() { return *slot().load(std::memory_order_acquire); }

void select(Isa isa) {
  if (!cpu_supports(isa)) {
    throw Error(ErrorKind::Input, std::string("kernel ISA unavailable: ") + to_string(isa));
  }
  slot().store(isa == Isa::Avx2 ? avx2_kernels() : &scalar_kernels(), std::memory_order_release);
}

}  // namespace threadsplit::kernels
