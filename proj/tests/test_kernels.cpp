#include "spectra/kernels.hpp"

#include <doctest.h>

#include <cstdlib>
#include <random>
#include <string>
#include <vector>

using namespace spectra::kernels;

namespace {

std::vector<const Table*> variants() {
    std::vector<const Table*> out{&scalar_table()};
    if (const Table* t = avx2_table()) out.push_back(t);
    if (const Table* t = neon_table()) out.push_back(t);
    return out;
}

std::vector<double> uniform(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

}  // namespace

TEST_CASE("counting agrees exactly across variants, ties included") {
    std::mt19937_64 rng(11);
    const Table& ref = scalar_table();
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 31u, 64u, 1001u}) {
        auto E = uniform(n, 0.0, 100.0, rng);
        // Plant exact ties with λ.
        for (std::size_t i = 0; i < n; i += 5) E[i] = 50.0;
        for (double lambda : {-1.0, 0.0, 25.0, 50.0, 99.9, 200.0}) {
            const std::size_t want = ref.count_le_lt(E.data(), n, lambda);
            std::size_t brute = 0;
            for (double e : E) brute += (e <= lambda) + (e < lambda);
            CHECK(want == brute);
            for (const Table* t : variants()) CHECK(t->count_le_lt(E.data(), n, lambda) == want);
        }
    }
}

TEST_CASE("weighted sums agree across variants to rounding") {
    std::mt19937_64 rng(12);
    for (std::size_t n : {1u, 5u, 8u, 13u, 257u}) {
        auto E = uniform(n, 0.0, 10.0, rng);
        auto w = uniform(n, -1.0, 1.0, rng);
        E[0] = 5.0;
        const double want = scalar_table().sum_weights_le_lt(E.data(), w.data(), n, 5.0);
        double scale = 0.0;
        for (double x : w) scale += std::abs(x);
        for (const Table* t : variants())
            CHECK(std::abs(t->sum_weights_le_lt(E.data(), w.data(), n, 5.0) - want) <= 1e-14 * scale);
    }
}

TEST_CASE("shifted norms agree across variants in one and two dimensions") {
    std::mt19937_64 rng(13);
    for (std::size_t n : {1u, 2u, 4u, 9u, 100u}) {
        auto m0 = uniform(n, -30.0, 30.0, rng);
        auto m1 = uniform(n, -30.0, 30.0, rng);
        std::vector<double> want(n), got(n);
        scalar_table().shifted_norm_sq(m0.data(), m1.data(), n, 0.25, -0.125, want.data());
        for (std::size_t i = 0; i < n; ++i) {
            const double a = 0.25 + m0[i], b = -0.125 + m1[i];
            CHECK(want[i] == doctest::Approx(a * a + b * b).epsilon(1e-15));
        }
        for (const Table* t : variants()) {
            t->shifted_norm_sq(m0.data(), m1.data(), n, 0.25, -0.125, got.data());
            for (std::size_t i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-15));
            t->shifted_norm_sq(m0.data(), nullptr, n, 0.25, 0.0, got.data());
            for (std::size_t i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx((0.25 + m0[i]) * (0.25 + m0[i])).epsilon(1e-15));
        }
    }
}

TEST_CASE("complex dot agrees across variants") {
    std::mt19937_64 rng(14);
    for (std::size_t n : {1u, 3u, 4u, 17u, 400u}) {
        auto ar = uniform(n, -1, 1, rng), ai = uniform(n, -1, 1, rng);
        auto pr = uniform(n, -1, 1, rng), pi = uniform(n, -1, 1, rng);
        std::complex<double> brute = 0.0;
        for (std::size_t i = 0; i < n; ++i) brute += std::complex<double>(ar[i], ai[i]) * std::complex<double>(pr[i], pi[i]);
        for (const Table* t : variants()) {
            const auto got = t->complex_dot(ar.data(), ai.data(), pr.data(), pi.data(), n);
            CHECK(std::abs(got - brute) <= 1e-13 * static_cast<double>(n));
        }
    }
}

TEST_CASE("dispatcher honours the environment override") {
    const char* env = std::getenv("SPECTRA_SIMD");
    const std::string name = active_name();
    if (env && std::string(env) == "scalar") {
        CHECK(name == "scalar");
    } else if (avx2_table()) {
        CHECK(name == "avx2");
    } else if (neon_table()) {
        CHECK(name == "neon");
    } else {
        CHECK(name == "scalar");
    }
}
