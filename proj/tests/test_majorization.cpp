#include <catch2/catch_amalgamated.hpp>

#include "entspec/eigensolver.hpp"
#include "entspec/majorization.hpp"
#include "entspec/rng.hpp"

using namespace entspec;

TEST_CASE("spectrum vector sorts, clamps, rejects") {
    const SpectrumVector v({0.2, 0.5, 0.3});
    REQUIRE(v[0] == 0.5);
    REQUIRE(v[1] == 0.3);
    REQUIRE(v[2] == 0.2);
    REQUIRE(v.sum() == Catch::Approx(1.0));

    const SpectrumVector clamped({0.7, -1e-13, 0.3});
    REQUIRE(clamped[2] == 0.0);

    REQUIRE_THROWS_AS(SpectrumVector({0.7, -1e-3, 0.3}), Error);
    try {
        SpectrumVector({-1e-3});
    } catch (const Error& e) {
        REQUIRE(e.code() == errc::negative_spectrum);
    }

    // A wider clamp admits what the default rejects.
    const SpectrumVector wide({0.7, -1e-10, 0.3}, 1e-9);
    REQUIRE(wide[2] == 0.0);
}

TEST_CASE("padding") {
    const SpectrumVector v({0.6, 0.4});
    const SpectrumVector p = pad_spectrum(v, 4);
    REQUIRE(p.size() == 4);
    REQUIRE(p[2] == 0.0);
    REQUIRE(p[3] == 0.0);
    REQUIRE_THROWS_AS(pad_spectrum(v, 1), Error);
}

TEST_CASE("majorization verdicts with margins") {
    const SpectrumVector uniform({0.25, 0.25, 0.25, 0.25});
    const SpectrumVector halves({0.5, 0.5});  // padded internally to 4

    const MajorizationVerdict ok = majorizes(halves, uniform);
    REQUIRE(ok.holds);
    REQUIRE(ok.first_fail_k == 0);
    REQUIRE(ok.margins.size() == 4);
    REQUIRE(ok.margins[0] == Catch::Approx(0.25));
    REQUIRE(ok.margins[3] == Catch::Approx(0.0).margin(1e-15));

    const SpectrumVector pure({1.0, 0.0, 0.0, 0.0});
    const MajorizationVerdict fail = majorizes(halves, pure);
    REQUIRE_FALSE(fail.holds);
    REQUIRE(fail.first_fail_k == 1);
    REQUIRE(fail.margins[0] == Catch::Approx(-0.5));
    REQUIRE(fail.reason == MajorizationVerdict::Reason::partial_sum);
    REQUIRE(fail.reason_name() == std::string("PARTIAL_SUM"));

    const MajorizationVerdict mismatch =
        majorizes(SpectrumVector({0.6, 0.4}), SpectrumVector({0.3, 0.3, 0.3}));
    REQUIRE_FALSE(mismatch.holds);
    REQUIRE(mismatch.reason == MajorizationVerdict::Reason::total_sum_mismatch);
}

TEST_CASE("weak submajorization drops the total-sum requirement") {
    const SpectrumVector small({0.3, 0.3});
    const SpectrumVector big({0.5, 0.5});
    REQUIRE(weakly_submajorizes(big, small));
    REQUIRE_FALSE(majorizes(big, small).holds);
    REQUIRE_FALSE(weakly_submajorizes(small, big));
}

TEST_CASE("majorization is reflexive and transitive on samples") {
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> raw(5);
        double total = 0.0;
        for (double& v : raw) {
            v = rng.uniform_pos();
            total += v;
        }
        for (double& v : raw) v /= total;
        const SpectrumVector x(raw);
        REQUIRE(majorizes(x, x).holds);
        const SpectrumVector top({1.0});
        REQUIRE(majorizes(top, x).holds);
        const SpectrumVector flat(std::vector<double>(5, 0.2));
        REQUIRE(majorizes(x, flat).holds);
    }
}

TEST_CASE("Hermitian diagonal is majorized by the spectrum") {
    Rng rng(11);
    for (int t = 0; t < 30; ++t) {
        ComplexMatrix g(4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) g(i, j) = rng.complex_gaussian();
        ComplexMatrix rho = (g * g.dagger()).symmetrized();
        rho *= 1.0 / rho.trace().real();
        std::vector<double> diag(4);
        for (std::size_t i = 0; i < 4; ++i) diag[i] = rho(i, i).real();
        const SpectrumVector spectrum(hermitian_eigen(rho).eigenvalues, 1e-9);
        REQUIRE(majorizes(spectrum, SpectrumVector(diag), 1e-9).holds);
    }
}

TEST_CASE("doubly stochastic and substochastic checks") {
    REQUIRE(is_doubly_stochastic(ComplexMatrix::identity(3)));
    REQUIRE(is_doubly_substochastic(ComplexMatrix::identity(3)));

    const ComplexMatrix mix{{0.5, 0.5}, {0.5, 0.5}};
    REQUIRE(is_doubly_stochastic(mix));

    const ComplexMatrix perm{{0.0, 1.0}, {1.0, 0.0}};
    REQUIRE(is_doubly_stochastic(perm));

    const ComplexMatrix sub{{0.5, 0.0}, {0.5, 0.0}};
    REQUIRE(is_doubly_substochastic(sub));
    REQUIRE_FALSE(is_doubly_stochastic(sub));

    const ComplexMatrix hot{{1.1, 0.0}, {0.0, 0.9}};
    REQUIRE_FALSE(is_doubly_substochastic(hot));

    const ComplexMatrix neg{{-0.1, 0.5}, {0.5, 0.1}};
    REQUIRE_FALSE(is_doubly_substochastic(neg));

    ComplexMatrix imag(2, 2);
    imag(0, 0) = Complex{0.5, 0.5};
    REQUIRE_THROWS_AS(is_doubly_substochastic(imag), Error);
    REQUIRE_THROWS_AS(is_doubly_substochastic(ComplexMatrix(2, 3)), Error);
}
