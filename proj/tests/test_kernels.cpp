#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fdsketch/kernels.hpp"

namespace kernels = fdsketch::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

double rel_close(double a, double b, double scale) { return std::abs(a - b) <= 1e-13 * std::max(1.0, scale); }

}  // namespace

TEST(Kernels, ScalarIsAlwaysSupported) {
    EXPECT_TRUE(kernels::backend_supported(kernels::Backend::scalar));
    EXPECT_FALSE(kernels::supported_backends().empty());
}

TEST(Kernels, ScalarReferenceValues) {
    const auto& t = kernels::scalar::kernels();
    const std::vector<double> x{1, 2, 3};
    const std::vector<double> y{4, -5, 6};
    EXPECT_EQ(t.dot(x.data(), y.data(), 3), 12.0);
    EXPECT_EQ(t.sum_sq(x.data(), 3), 14.0);
    const auto g = t.gram2(x.data(), y.data(), 3);
    EXPECT_EQ(g.xx, 14.0);
    EXPECT_EQ(g.yy, 77.0);
    EXPECT_EQ(g.xy, 12.0);
    EXPECT_EQ(t.dot(x.data(), y.data(), 0), 0.0);
}

TEST(Kernels, RotateMatchesDefinition) {
    std::vector<double> x{1, 0}, y{0, 1};
    kernels::rotate(0.6, 0.8, x, y);
    EXPECT_DOUBLE_EQ(x[0], 0.6);
    EXPECT_DOUBLE_EQ(x[1], -0.8);
    EXPECT_DOUBLE_EQ(y[0], 0.8);
    EXPECT_DOUBLE_EQ(y[1], 0.6);
}

TEST(Kernels, EveryBackendMatchesScalarAcrossLengths) {
    const auto& ref = kernels::scalar::kernels();
    for (auto backend : kernels::supported_backends()) {
        const auto& t = kernels::table(backend);
        SCOPED_TRACE(std::string(kernels::backend_name(backend)));
        for (std::size_t n = 0; n <= 67; ++n) {
            const auto x = random_vector(n, 11 + n);
            const auto y = random_vector(n, 1000 + n);
            const double scale = n;
            EXPECT_TRUE(rel_close(t.dot(x.data(), y.data(), n), ref.dot(x.data(), y.data(), n), scale));
            EXPECT_TRUE(rel_close(t.sum_sq(x.data(), n), ref.sum_sq(x.data(), n), scale));
            const auto g1 = t.gram2(x.data(), y.data(), n);
            const auto g0 = ref.gram2(x.data(), y.data(), n);
            EXPECT_TRUE(rel_close(g1.xx, g0.xx, scale));
            EXPECT_TRUE(rel_close(g1.yy, g0.yy, scale));
            EXPECT_TRUE(rel_close(g1.xy, g0.xy, scale));

            auto y1 = y, y0 = y;
            t.axpy(0.37, x.data(), y1.data(), n);
            ref.axpy(0.37, x.data(), y0.data(), n);
            for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y0[i], 1e-15);

            auto s1 = x, s0 = x;
            t.scale(-1.7, s1.data(), n);
            ref.scale(-1.7, s0.data(), n);
            for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(s1[i], s0[i]);

            auto rx1 = x, ry1 = y, rx0 = x, ry0 = y;
            t.rotate(0.8, -0.6, rx1.data(), ry1.data(), n);
            ref.rotate(0.8, -0.6, rx0.data(), ry0.data(), n);
            for (std::size_t i = 0; i < n; ++i) {
                EXPECT_NEAR(rx1[i], rx0[i], 1e-15);
                EXPECT_NEAR(ry1[i], ry0[i], 1e-15);
            }
        }
    }
}

TEST(Kernels, ScopedBackendRestoresPrevious) {
    const auto before = kernels::active_backend();
    {
        kernels::ScopedBackend scoped(kernels::Backend::scalar);
        EXPECT_EQ(kernels::active_backend(), kernels::Backend::scalar);
    }
    EXPECT_EQ(kernels::active_backend(), before);
}

TEST(Kernels, UnsupportedBackendIsRejected) {
    for (auto b : {kernels::Backend::avx2, kernels::Backend::neon}) {
        if (!kernels::backend_supported(b)) EXPECT_ANY_THROW(kernels::set_backend(b));
    }
}
