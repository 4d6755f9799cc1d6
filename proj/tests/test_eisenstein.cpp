#include "doctest.h"
#include "picard/eisenstein.hpp"

#include <algorithm>

using namespace picard;

TEST_CASE("norms") {
    CHECK(EisensteinInteger(1, 3).norm() == 7);
    CHECK(EisensteinInteger(0, 0).norm() == 0);
    CHECK(EisensteinInteger(-2, 3).norm() == 19);
    CHECK(kSqrtM3 * kSqrtM3 == EisensteinInteger(-3));
}

TEST_CASE("units") {
    auto us = units();
    CHECK(us.size() == 6);
    EisensteinInteger prod{1};
    for (auto u : us) {
        CHECK(u.norm() == 1);
        prod = prod * u;
        for (auto v : us) CHECK(std::find(us.begin(), us.end(), u * v) != us.end());
    }
    // cyclic group of even order: the product is the element of order 2
    CHECK(prod == EisensteinInteger(-1));
    CHECK(pow(EisensteinInteger(1, 1), 6) == EisensteinInteger(1));  // -r^2 = 1 + r
}

TEST_CASE("split_prime") {
    CHECK(split_prime(7) == EisensteinInteger(1, 3));
    CHECK(split_prime(13) == EisensteinInteger(1, -3));
    CHECK(split_prime(19) == EisensteinInteger(-2, 3));
    CHECK(split_prime(31) == EisensteinInteger(1, 6));
    CHECK_THROWS_AS(split_prime(5), NotSplit);
    CHECK_THROWS_AS(split_prime(21), NotSplit);
    for (std::int64_t p = 7; p < 400; p += 6)
        if (is_rational_prime(p)) {
            auto nu = split_prime(p);
            CHECK(nu * nu.conj() == EisensteinInteger(p));
            CHECK(is_one_mod_three(nu));
        }
}

TEST_CASE("enumerate_norm") {
    CHECK(enumerate_norm(1).size() == 6);
    CHECK(enumerate_norm(2).empty());
    CHECK(enumerate_norm(7).size() == 12);
    // brute force comparison
    for (std::int64_t n = 1; n <= 60; ++n) {
        std::size_t cnt = 0;
        for (std::int64_t a = -10; a <= 10; ++a)
            for (std::int64_t b = -10; b <= 10; ++b)
                if (a * a - a * b + b * b == n) ++cnt;
        CHECK(enumerate_norm(n).size() == cnt);
        CHECK(cnt % 6 == 0);
    }
}

TEST_CASE("factor round trip") {
    auto f3 = factor(EisensteinInteger(3));
    CHECK(f3.primes.size() == 1);
    CHECK(f3.primes[0].first == kSqrtM3);
    CHECK(f3.primes[0].second == 2);
    CHECK(f3.expand() == EisensteinInteger(3));
    auto f7 = factor(EisensteinInteger(7));
    CHECK(f7.primes.size() == 2);
    CHECK(factor(EisensteinInteger(0, 1)).primes.empty());
    for (std::int64_t a = -60; a <= 60; ++a)
        for (std::int64_t b = -60; b <= 60; ++b) {
            EisensteinInteger x{a, b};
            if (x.is_zero() || x.norm() > 10000) continue;
            REQUIRE(factor(x).expand() == x);
        }
}

TEST_CASE("multiplicativity of norm and trace") {
    for (std::int64_t a = -5; a <= 5; ++a)
        for (std::int64_t b = -5; b <= 5; ++b)
            for (std::int64_t c = -3; c <= 3; ++c)
                for (std::int64_t d = -3; d <= 3; ++d) {
                    EisensteinInteger x{a, b}, y{c, d};
                    CHECK((x * y).norm() == x.norm() * y.norm());
                    CHECK((x + x.conj()) == EisensteinInteger(x.trace()));
                }
}

TEST_CASE("cyclotomic rationals") {
    Cyc r = Cyc::rho();
    CHECK(r * r == Cyc(-1, -1));
    CHECK(Cyc::sqrt_m3() * Cyc::sqrt_m3() == Cyc(-3));
    Cyc x(mpq_class(3, 7), mpq_class(-2, 5));
    CHECK(x * x.inverse() == Cyc(1));
    CHECK(Cyc(EisensteinInteger(2, 3)) * Cyc(EisensteinInteger(-1, 4)) == Cyc(EisensteinInteger(2, 3) * EisensteinInteger(-1, 4)));
    CHECK(Cyc::parse("759+261*r") == Cyc(759, 261));
    CHECK(Cyc::parse("759+261r") == Cyc(759, 261));
    CHECK(Cyc::parse("-105-297r") == Cyc(-105, -297));
    CHECK(Cyc::parse("-r") == Cyc(0, -1));
    CHECK(Cyc::parse("1/3-2/9*r") == Cyc(mpq_class(1, 3), mpq_class(-2, 9)));
    CHECK(Cyc(759, 261).str() == "759+261*r");
    CHECK(Cyc(-105, -297).str() == "-105-297*r");
    CHECK(Cyc(72).str() == "72");
    for (auto s : {"3/4-5/7*r", "r", "-1", "2*r", "0"}) CHECK(Cyc::parse(Cyc::parse(s).str()) == Cyc::parse(s));
    CHECK_THROWS_AS(Cyc::parse("abc"), ParseError);
}
