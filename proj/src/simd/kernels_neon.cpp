// AArch64 variant; Advanced SIMD is mandatory there, so no runtime probe.
#include <arm_neon.h>

#include "fdsketch/kernels.hpp"

namespace fdsketch::kernels::neon {
namespace {

constexpr std::size_t kLanes = 2;

double dot(const double* x, const double* y, std::size_t n) {
    float64x2_t a0 = vdupq_n_f64(0.0);
    float64x2_t a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
        a0 = vfmaq_f64(a0, vld1q_f64(x + i), vld1q_f64(y + i));
        a1 = vfmaq_f64(a1, vld1q_f64(x + i + kLanes), vld1q_f64(y + i + kLanes));
    }
    for (; i + kLanes <= n; i += kLanes) {
        a0 = vfmaq_f64(a0, vld1q_f64(x + i), vld1q_f64(y + i));
    }
    double acc = vaddvq_f64(vaddq_f64(a0, a1));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sum_sq(const double* x, std::size_t n) {
    float64x2_t a0 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const float64x2_t v = vld1q_f64(x + i);
        a0 = vfmaq_f64(a0, v, v);
    }
    double acc = vaddvq_f64(a0);
    for (; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

Gram2 gram2(const double* x, const double* y, std::size_t n) {
    float64x2_t xx = vdupq_n_f64(0.0);
    float64x2_t yy = vdupq_n_f64(0.0);
    float64x2_t xy = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const float64x2_t vx = vld1q_f64(x + i);
        const float64x2_t vy = vld1q_f64(y + i);
        xx = vfmaq_f64(xx, vx, vx);
        yy = vfmaq_f64(yy, vy, vy);
        xy = vfmaq_f64(xy, vx, vy);
    }
    Gram2 g{vaddvq_f64(xx), vaddvq_f64(yy), vaddvq_f64(xy)};
    for (; i < n; ++i) {
        g.xx += x[i] * x[i];
        g.yy += y[i] * y[i];
        g.xy += x[i] * y[i];
    }
    return g;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale(double a, double* x, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
    }
    for (; i < n; ++i) x[i] *= a;
}

void rotate(double c, double s, double* x, double* y, std::size_t n) {
    const float64x2_t vc = vdupq_n_f64(c);
    const float64x2_t vs = vdupq_n_f64(s);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const float64x2_t vx = vld1q_f64(x + i);
        const float64x2_t vy = vld1q_f64(y + i);
        vst1q_f64(x + i, vfmsq_f64(vmulq_f64(vc, vx), vs, vy));
        vst1q_f64(y + i, vfmaq_f64(vmulq_f64(vc, vy), vs, vx));
    }
    for (; i < n; ++i) {
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

}  // namespace fdsketch::kernels::neon
