#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "nilforge/gowers.hpp"
#include "nilforge/klein.hpp"
#include "nilforge/rng.hpp"

using namespace nilforge;

namespace {

PhaseTable random_phase(int n, uint32_t level, Rng& rng) {
    PhaseTable f;
    f.n = n;
    f.level = level;
    f.num.resize(size_t(1) << n);
    for (auto& v : f.num) v = uint16_t(rng.next() & ((uint32_t(1) << level) - 1));
    return f;
}

}  // namespace

TEST_CASE("constant phases have norm one") {
    PhaseTable f;
    f.n = 3;
    f.level = 3;
    f.num.assign(8, 5);
    for (int k = 0; k <= 3; ++k) {
        CHECK(gowers_norm_naive(f, k) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(gowers_norm_recursive(f, k) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("polynomial phases have norm one at their degree") {
    Rng rng(110);
    auto p = random_poly(3, 5, 5, rng);
    auto f = PhaseTable::from(p);
    CHECK(gowers_norm_naive(f, 5) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(poly_norm_one_certificate(p, 5));
    CHECK(!poly_norm_one_certificate(PolyRep{1, 2, 2, {}, {{1, 1}}}, 1));
    PolyRep zero;
    zero.n = 2;
    zero.d = 3;
    CHECK(poly_norm_one_certificate(zero, 0));
}

TEST_CASE("the two engines agree") {
    Rng rng(111);
    for (int n = 3; n <= 4; ++n)
        for (int t = 0; t < 5; ++t) {
            auto f = random_phase(n, 1 + uint32_t(rng.below(5)), rng);
            double a = gowers_norm_naive(f, 5);
            double b = gowers_norm_recursive(f, 5);
            CHECK(std::abs(a - b) <= 1e-9);
        }
    // threaded reduction is bit-identical to the sequential one
    auto f = random_phase(4, 5, rng);
    CHECK(gowers_norm_recursive(f, 5, 1) == gowers_norm_recursive(f, 5, 2));
}

TEST_CASE("first-order norm is the plain average") {
    Rng rng(112);
    auto f = random_phase(4, 4, rng);
    std::complex<double> acc{0, 0};
    for (uint16_t v : f.num) acc += e_phase(Dyadic::make(v, 4));
    double expect = std::abs(acc) / double(f.num.size());
    CHECK(gowers_norm_recursive(f, 0) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(gowers_norm_naive(f, 0) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("norm invariances") {
    Rng rng(113);
    for (int t = 0; t < 6; ++t) {
        int n = 3 + int(rng.below(2));
        auto f = random_phase(n, 5, rng);
        double base = gowers_norm_recursive(f, 5);
        // translation
        CHECK(std::abs(gowers_norm_recursive(translate(f, uint32_t(rng.below(8))), 5) - base) <=
              1e-9);
        // multiplication by a low-degree polynomial phase
        auto q = random_classical(n, 2, rng);
        CHECK(std::abs(gowers_norm_recursive(add_classical_phase(f, q), 5) - base) <= 1e-9);
        // monotonicity in the order
        for (int k = 0; k < 5; ++k)
            CHECK(gowers_norm_recursive(f, k) <= gowers_norm_recursive(f, k + 1) + 1e-9);
    }
}

TEST_CASE("correlation") {
    Rng rng(114);
    auto p = random_poly(4, 3, 3, rng);
    auto f = PhaseTable::from(p);
    CHECK(correlation(f, p).magnitude == doctest::Approx(1.0).epsilon(1e-12));

    // a global half shift leaves the magnitude unchanged
    PhaseTable g = f;
    for (auto& v : g.num)
        v = uint16_t((v + (uint32_t(1) << (f.level - 1))) & ((uint32_t(1) << f.level) - 1));
    CHECK(correlation(g, p).magnitude == doctest::Approx(1.0).epsilon(1e-12));

    // half-valued differences come with the exact signed count
    PhaseTable a, b;
    a.n = b.n = 2;
    a.level = b.level = 1;
    a.num = {0, 1, 0, 0};
    b.num = {0, 0, 0, 0};
    auto c = correlation(a, b);
    REQUIRE(c.exact.has_value());
    CHECK(c.exact->first == 2);
    CHECK(c.exact->second == 4);
    CHECK(c.magnitude == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sampled pseudo-quintics have positive sixth-order norm") {
    auto base = rho_phase_average();
    CHECK(base.first > 0);
    double cstar = std::pow(double(base.first) / double(base.second), 1.0 / 64.0);
    CHECK(cstar > 0);
    CHECK(cstar < 1);

    // monte-carlo cross-check of the marginal count
    Rng rng(115);
    int64_t acc = 0;
    const int trials = 200000;
    for (int t = 0; t < trials; ++t) {
        std::array<Klein, 15> hh;
        uint64_t bits = rng.next();
        for (int s = 0; s < 15; ++s) {
            hh[size_t(s)] = Klein(bits & 3);
            bits >>= 2;
        }
        acc += rho_pairs(hh).is_zero() ? 1 : -1;
    }
    double mc = double(acc) / trials;
    double exact = double(base.first) / double(base.second);
    CHECK(std::abs(mc - exact) < 0.02);

    for (uint64_t seed : {201u, 202u, 203u}) {
        auto c = sample_ncube(4, 5, seed);
        auto f = PhaseTable::from(c.s);
        double naive = gowers_norm_naive(f, 5);
        double rec = gowers_norm_recursive(f, 5);
        CHECK(naive > 0);
        CHECK(std::abs(naive - rec) <= 1e-9);
    }
}

TEST_CASE("size guards fail fast") {
    PhaseTable f;
    f.n = 8;
    f.level = 2;
    f.num.assign(256, 0);
    CHECK_THROWS_AS(gowers_norm_naive(f, 5), std::invalid_argument);
    CHECK_THROWS_AS(gowers_norm_recursive(f, 5), std::invalid_argument);
}
