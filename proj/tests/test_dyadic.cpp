#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nilforge/dyadic.hpp"
#include "nilforge/rng.hpp"

using namespace nilforge;

TEST_CASE("canonicalization") {
    CHECK(Dyadic::make(2, 2) == Dyadic::make(1, 1));
    CHECK(Dyadic::make(8, 3) == Dyadic{});
    CHECK(Dyadic::make(5, 3).num == 5);
    CHECK(Dyadic::make(5, 3).lev == 3);
    CHECK(Dyadic::make(6, 3) == Dyadic::make(3, 2));
}

TEST_CASE("group laws") {
    CHECK(Dyadic::make(1, 1) + Dyadic::make(1, 1) == Dyadic{});
    CHECK(Dyadic::make(3, 3) + Dyadic::make(3, 3) == Dyadic::make(3, 2));
    Rng rng(7);
    for (int t = 0; t < 2000; ++t) {
        auto a = Dyadic::make(rng.next(), 1 + uint32_t(rng.below(12)));
        auto b = Dyadic::make(rng.next(), 1 + uint32_t(rng.below(12)));
        auto c = Dyadic::make(rng.next(), 1 + uint32_t(rng.below(12)));
        CHECK(a + Dyadic{} == a);
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a + (-a) == Dyadic{});
        // 2-power torsion at the element's own level
        CHECK(a.scale(int64_t(1) << a.lev) == Dyadic{});
        CHECK(a.half() + a.half() == a);
    }
}

TEST_CASE("level lifting is injective and canonical") {
    Rng rng(8);
    for (int t = 0; t < 500; ++t) {
        auto a = Dyadic::make(rng.next(), 1 + uint32_t(rng.below(10)));
        uint32_t r = a.lev + uint32_t(rng.below(6));
        CHECK(Dyadic::make(a.num_at_level(r), r) == a);
    }
}

TEST_CASE("binom2 over all of Z/4Z") {
    CHECK(binom2(0) == 0);
    CHECK(binom2(1) == 0);
    CHECK(binom2(2) == 1);
    CHECK(binom2(3) == 1);
    for (int a = 0; a < 4; ++a) CHECK(binom2(Z4(a + 2)) == (binom2(Z4(a)) ^ 1));
}

TEST_CASE("phase boundary") {
    CHECK(e_phase(Dyadic{}) == std::complex<double>(1, 0));
    CHECK(e_phase(Dyadic::make(1, 1)) == std::complex<double>(-1, 0));
    CHECK(e_phase(Dyadic::make(1, 2)) == std::complex<double>(0, 1));
    Rng rng(9);
    for (int t = 0; t < 10000; ++t) {
        auto a = Dyadic::make(rng.next(), uint32_t(rng.below(16)));
        auto b = Dyadic::make(rng.next(), uint32_t(rng.below(16)));
        CHECK(std::abs(std::abs(e_phase(a)) - 1.0) < 1e-12);
        CHECK(std::abs(e_phase(a + b) - e_phase(a) * e_phase(b)) < 1e-12);
    }
}

TEST_CASE("textual form") {
    CHECK(Dyadic::make(3, 3).str() == "3/8");
    CHECK(Dyadic{}.str() == "0/1");
    CHECK(Dyadic::parse("3/8") == Dyadic::make(3, 3));
    CHECK(Dyadic::parse("6/16") == Dyadic::make(3, 3));
    CHECK(!Dyadic::parse("3/7").has_value());
    CHECK(!Dyadic::parse("/8").has_value());
    Rng rng(10);
    for (int t = 0; t < 300; ++t) {
        auto a = Dyadic::make(rng.next(), uint32_t(rng.below(20)));
        CHECK(Dyadic::parse(a.str()) == a);
    }
}

TEST_CASE("level cap") {
    CHECK_THROWS_AS(Dyadic::make(1, 63), std::overflow_error);
    CHECK(Dyadic::make(1, 62).lev == 62);
}
