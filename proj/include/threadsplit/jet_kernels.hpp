#pragma once

#include <cstdint>
#include <vector>

namespace threadsplit::kernels {

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa);

// Coefficient-array kernels behind Jet arithmetic. `n` is a coefficient count
// (1, 5, 15 or 35); `order` selects the Leibniz term prefix for mul.
struct JetKernels {
  Isa isa;
  void (*add)(const double* a, const double* b, double* out, int n);
  void (*sub)(const double* a, const double* b, double* out, int n);
  void (*scale)(const double* a, double s, double* out, int n);
  void (*mul)(const double* a, const double* b, double* out, int order);
};

// Leibniz product plan: out[g] = sum_t coef[t] * a[lhs[t]] * b[rhs[t]] over
// the terms of output slot g. The scalar route walks the exact term list; the
// SIMD route walks a copy where each slot's run is zero-padded to 4 or 8 lanes.
struct MulPlan {
  struct Run {
    int out_slot;
    int begin;   // into the exact arrays
    int length;
    int padded_begin;  // into the padded arrays
    int padded_length;
  };
  std::vector<Run> runs;  // one per output slot, graded order
  std::vector<std::int32_t> lhs, rhs;
  std::vector<double> coef;
  std::vector<std::int32_t> padded_lhs, padded_rhs;
  std::vector<double> padded_coef;

  static const MulPlan& instance();
};

const JetKernels& scalar_kernels();
// nullptr when the build has no AVX2 variant.
const JetKernels* avx2_kernels();

bool cpu_supports(Isa isa);

// Kernels used by Jet. Chosen on first use: AVX2 when compiled and supported
// by the CPU, unless THREADSPLIT_SIMD=scalar is set.
const JetKernels& active();
// Overrides the runtime choice; throws if the ISA is unavailable.
void select(Isa isa);

}  // namespace threadsplit::kernels
