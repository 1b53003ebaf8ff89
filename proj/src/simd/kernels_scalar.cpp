#include "fdsketch/kernels.hpp"

namespace fdsketch::kernels::scalar {
namespace {

double dot(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sum_sq(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

Gram2 gram2(const double* x, const double* y, std::size_t n) {
    Gram2 g;
    for (std::size_t i = 0; i < n; ++i) {
        g.xx += x[i] * x[i];
        g.yy += y[i] * y[i];
        g.xy += x[i] * y[i];
    }
    return g;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(double a, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void rotate(double c, double s, double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

}  // namespace

const KernelTable& kernels() {
    static const KernelTable t{dot, sum_sq, gram2, axpy, scale, rotate};
    return t;
}

}  // namespace fdsketch::kernels::scalar
