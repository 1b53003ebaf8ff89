#include <atomic>
#include <cassert>
#include <cstdlib>
#include <string>

#include "fdsketch/errors.hpp"
#include "fdsketch/kernels.hpp"

namespace fdsketch::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(FDSKETCH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend detect() {
    if (const char* env = std::getenv("FDSKETCH_KERNELS")) {
        if (std::string(env) == "scalar") return Backend::scalar;
    }
#if defined(FDSKETCH_HAVE_NEON)
    return Backend::neon;
#else
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
#endif
}

std::atomic<Backend>& active() {
    static std::atomic<Backend> backend{detect()};
    return backend;
}

const KernelTable& current() { return table(active().load(std::memory_order_relaxed)); }

}  // namespace

bool backend_supported(Backend backend) {
    switch (backend) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
            return cpu_has_avx2();
        case Backend::neon:
#if defined(FDSKETCH_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

std::vector<Backend> supported_backends() {
    std::vector<Backend> out;
    for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
        if (backend_supported(b)) out.push_back(b);
    }
    return out;
}

const KernelTable& table(Backend backend) {
    if (!backend_supported(backend)) {
        throw InvalidArgument("kernel backend '" + std::string(backend_name(backend)) +
                              "' is not available on this machine");
    }
    switch (backend) {
#if defined(FDSKETCH_HAVE_AVX2)
        case Backend::avx2:
            return avx2::kernels();
#endif
#if defined(FDSKETCH_HAVE_NEON)
        case Backend::neon:
            return neon::kernels();
#endif
        default:
            return scalar::kernels();
    }
}

Backend active_backend() { return active().load(std::memory_order_relaxed); }

void set_backend(Backend backend) {
    (void)table(backend);
    active().store(backend, std::memory_order_relaxed);
}

std::string_view backend_name(Backend backend) {
    switch (backend) {
        case Backend::scalar:
            return "scalar";
        case Backend::avx2:
            return "avx2";
        case Backend::neon:
            return "neon";
    }
    return "unknown";
}

double dot(std::span<const double> x, std::span<const double> y) {
    assert(x.size() == y.size());
    return current().dot(x.data(), y.data(), x.size());
}

double sum_sq(std::span<const double> x) { return current().sum_sq(x.data(), x.size()); }

Gram2 gram2(std::span<const double> x, std::span<const double> y) {
    assert(x.size() == y.size());
    return current().gram2(x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    current().axpy(a, x.data(), y.data(), x.size());
}

void scale(double a, std::span<double> x) { current().scale(a, x.data(), x.size()); }

void rotate(double c, double s, std::span<double> x, std::span<double> y) {
    assert(x.size() == y.size());
    current().rotate(c, s, x.data(), y.data(), x.size());
}

}  // namespace fdsketch::kernels
