#include "pace/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <stdexcept>

namespace pace::kernels {
namespace {

double dot_scalar(const float* a, const float* b, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += double(a[i]) * double(b[i]);
    return acc;
}

double squared_norm_scalar(const float* a, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += double(a[i]) * double(a[i]);
    return acc;
}

CosineStats cosine_stats_scalar(const float* a, const float* b, size_t n) {
    double d = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double x = a[i], y = b[i];
        d += x * y;
        na += x * x;
        nb += y * y;
    }
    return {d, na, nb};
}

void axpy_scalar(double alpha, const float* x, double* acc, size_t n) {
    for (size_t i = 0; i < n; ++i) acc[i] += alpha * double(x[i]);
}

constexpr Ops kScalarOps = {"scalar", dot_scalar, squared_norm_scalar,
                            cosine_stats_scalar, axpy_scalar};

std::atomic<const Ops*> g_active{nullptr};
std::mutex g_select_mutex;

const Ops* select_default() {
    const char* env = std::getenv("PACE_KERNELS");
    if (env && *env) {
        std::string want(env);
        if (want == "scalar") return &kScalarOps;
        if (want == "avx2") {
            const Ops* ops = avx2_ops();
            if (!ops) throw std::runtime_error("PACE_KERNELS=avx2 but AVX2 is unavailable");
            return ops;
        }
        throw std::runtime_error("unknown PACE_KERNELS value: " + want);
    }
    if (const Ops* ops = avx2_ops()) return ops;
    return &kScalarOps;
}

}  // namespace

const Ops& scalar_ops() { return kScalarOps; }

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops& active() {
    const Ops* ops = g_active.load(std::memory_order_acquire);
    if (ops) return *ops;
    std::lock_guard<std::mutex> lock(g_select_mutex);
    ops = g_active.load(std::memory_order_relaxed);
    if (!ops) {
        ops = select_default();
        g_active.store(ops, std::memory_order_release);
    }
    return *ops;
}

void force_backend(const std::string& name) {
    std::lock_guard<std::mutex> lock(g_select_mutex);
    if (name.empty()) {
        g_active.store(nullptr, std::memory_order_release);
        return;
    }
    if (name == "scalar") {
        g_active.store(&kScalarOps, std::memory_order_release);
        return;
    }
    if (name == "avx2") {
        const Ops* ops = avx2_ops();
        if (!ops) throw std::runtime_error("AVX2 backend unavailable");
        g_active.store(ops, std::memory_order_release);
        return;
    }
    throw std::runtime_error("unknown kernel backend: " + name);
}

}  // namespace pace::kernels
