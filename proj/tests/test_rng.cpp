#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "entspec/rng.hpp"

using namespace entspec;

TEST_CASE("same seed, same stream") {
    Rng a(123), b(123);
    for (int t = 0; t < 100; ++t) {
        REQUIRE(a.next_u64() == b.next_u64());
    }
    Rng c(123), d(124);
    bool differs = false;
    for (int t = 0; t < 10; ++t) differs |= (c.next_u64() != d.next_u64());
    REQUIRE(differs);
}

TEST_CASE("uniform ranges") {
    Rng rng(9);
    for (int t = 0; t < 10000; ++t) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        const double p = rng.uniform_pos();
        REQUIRE(p > 0.0);
        REQUIRE(p <= 1.0);
    }
}

TEST_CASE("uniform_int stays in bounds and hits endpoints") {
    Rng rng(17);
    bool lo = false, hi = false;
    for (int t = 0; t < 2000; ++t) {
        const std::uint64_t v = rng.uniform_int(3, 7);
        REQUIRE(v >= 3);
        REQUIRE(v <= 7);
        lo |= (v == 3);
        hi |= (v == 7);
    }
    REQUIRE(lo);
    REQUIRE(hi);
    REQUIRE(rng.uniform_int(5, 5) == 5);
}

TEST_CASE("gaussian moments are roughly standard") {
    Rng rng(2024);
    const int n = 50000;
    double mean = 0.0, var = 0.0;
    for (int t = 0; t < n; ++t) {
        const double g = rng.gaussian();
        mean += g;
        var += g * g;
    }
    mean /= n;
    var = var / n - mean * mean;
    REQUIRE(std::abs(mean) < 0.02);
    REQUIRE(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("complex gaussian fills both parts") {
    Rng rng(1);
    const std::complex<double> z = rng.complex_gaussian();
    const std::complex<double> w = rng.complex_gaussian();
    REQUIRE(z != w);
    REQUIRE(z.real() != 0.0);
    REQUIRE(z.imag() != 0.0);
}
