#pragma once
//
// Data-parallel inner loops shared by the factorizations and the sketch.
//
// Every kernel has a scalar reference version and, when the target supports
// it, a vectorized variant. The variant is picked once at startup from the
// CPU feature flags; FDSKETCH_KERNELS=scalar in the environment forces the
// reference path. Variants agree with the reference to rounding, not bitwise:
// the vector versions use FMA and a different summation order.
//

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace fdsketch::kernels {

enum class Backend { scalar, avx2, neon };

struct Gram2 {
    double xx = 0.0;
    double yy = 0.0;
    double xy = 0.0;
};

// Function table for one backend.
struct KernelTable {
    double (*dot)(const double* x, const double* y, std::size_t n);
    double (*sum_sq)(const double* x, std::size_t n);
    Gram2 (*gram2)(const double* x, const double* y, std::size_t n);
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    void (*scale)(double a, double* x, std::size_t n);
    // x <- c*x - s*y, y <- s*x + c*y
    void (*rotate)(double c, double s, double* x, double* y, std::size_t n);
};

const KernelTable& table(Backend backend);
bool backend_supported(Backend backend);
std::vector<Backend> supported_backends();

Backend active_backend();
// Throws InvalidArgument when the backend is not supported on this CPU.
void set_backend(Backend backend);

std::string_view backend_name(Backend backend);

double dot(std::span<const double> x, std::span<const double> y);
double sum_sq(std::span<const double> x);
Gram2 gram2(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);
void rotate(double c, double s, std::span<double> x, std::span<double> y);

namespace scalar {
const KernelTable& kernels();
}
#if defined(FDSKETCH_HAVE_AVX2)
namespace avx2 {
const KernelTable& kernels();
}
#endif
#if defined(FDSKETCH_HAVE_NEON)
namespace neon {
const KernelTable& kernels();
}
#endif

// RAII override of the active backend, used by equivalence tests.
class ScopedBackend {
public:
    explicit ScopedBackend(Backend backend) : previous_(active_backend()) { set_backend(backend); }
    ~ScopedBackend() { set_backend(previous_); }
    ScopedBackend(const ScopedBackend&) = delete;
    ScopedBackend& operator=(const ScopedBackend&) = delete;

private:
    Backend previous_;
};

}  // namespace fdsketch::kernels
