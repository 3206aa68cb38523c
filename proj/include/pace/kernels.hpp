#pragma once

#include <cstddef>
#include <string>

namespace pace::kernels {

// Dense float32 inner loops behind every distance and regression pass.
// All kernels accumulate in double so scalar and SIMD backends agree to
// last-ulp-level tolerances and chain scores are reproducible.
struct CosineStats {
    double dot;
    double norm_a_sq;
    double norm_b_sq;
};

struct Ops {
    const char* name;
    double (*dot)(const float* a, const float* b, size_t n);
    double (*squared_norm)(const float* a, size_t n);
    // Single pass producing dot plus both squared norms.
    CosineStats (*cosine_stats)(const float* a, const float* b, size_t n);
    // acc[i] += alpha * x[i]; the Gram-matrix accumulation primitive.
    void (*axpy)(double alpha, const float* x, double* acc, size_t n);
};

const Ops& scalar_ops();
// Null when the binary or the CPU lacks AVX2+FMA.
const Ops* avx2_ops();

// Backend chosen at first use: AVX2 when available, else scalar.
// PACE_KERNELS=scalar|avx2 overrides (unknown/unavailable values throw).
const Ops& active();

// Test hook; pass empty string to restore automatic selection.
void force_backend(const std::string& name);

bool cpu_supports_avx2();

}  // namespace pace::kernels
