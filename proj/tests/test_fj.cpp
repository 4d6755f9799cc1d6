#include "doctest.h"
#include "picard/fj.hpp"
#include "support.hpp"

#include <random>

using namespace picard;
using S = SectionElement;

namespace {

FJSeries random_series(std::mt19937& rng, int vt, int order = 0) {
    std::uniform_int_distribution<int> d(-3, 3);
    FJSeries f(vt);
    for (int n = order; n <= vt; ++n) {
        S s(n);
        for (std::size_t i = 0; i < s.dim(); ++i) s[i] = Cyc(d(rng), d(rng));
        f[n] = s;
    }
    if (f[order].is_zero()) f[order] = S::Y().pow(order);
    return f;
}

const S Y = S::Y(), Z = S::Z(), X = S::X();

}  // namespace

TEST_CASE("theta_0 cubed") {
    auto& cat = test::catalog(8);
    FJSeries th = cat.theta(0);
    FJSeries cube = mul(mul(th, th), th);
    CHECK(cube[0] == S::constant(1));
    CHECK(cube[1] == (Y + Z) * Cyc(9));
    CHECK(cube[2] == Y * Y * Cyc(27) + Y * Z * Cyc(54) + Z * Z * Cyc(27));
    CHECK(cube == cat.last("phi0"));
    FJSeries one = FJSeries::constant(1, 8);
    CHECK(mul(th, one) == th);
}

TEST_CASE("n_operator") {
    auto& cat = test::catalog(8);
    CHECK(n_operator(FJSeries::constant(Cyc(5), 6)).is_zero());
    std::mt19937 rng(3);
    auto f = random_series(rng, 6);
    auto g = n_operator(n_operator(f));
    for (int n = 0; n <= 6; ++n) CHECK(g[n] == f[n] * Cyc(n * n));
    CHECK(n_operator(cat.last("phi0"))[1] == (Y + Z) * Cyc(9));
}

TEST_CASE("bracket gives Phi_0") {
    auto& cat = test::catalog(8);
    const auto& p1 = cat.last("phi1");
    const auto& p2 = cat.last("phi2");
    auto b = bracket(p1, 3, p2, 3);
    CHECK(b.j == 1);
    CHECK(b.k == 7);
    const auto& big = cat.last("big_phi0");
    CHECK(big[1] == Y - Z);
    CHECK(big[2] == Z * Z * Cyc(6) - Y * Y * Cyc(6));
    auto lam = proportionality(b.last, big);
    REQUIRE(lam.has_value());
    CHECK(!lam->is_zero());
    CHECK(bracket(p1, 3, p1, 3).last.is_zero());
}

TEST_CASE("divide undoes mul") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        auto f = random_series(rng, 6);
        auto g = random_series(rng, 6, trial % 3);
        auto q = divide(mul(f, g), g);
        CHECK(q.valid_to() == 6 - g.order());
        CHECK(q == f.truncated(q.valid_to()));
    }
}

TEST_CASE("phi0 / zeta is not divisible") {
    auto& cat = test::catalog(8);
    CHECK_THROWS_AS(divide(cat.last("phi0"), cat.last("zeta")), NotDivisible);
}

TEST_CASE("wedge of a form with itself vanishes") {
    auto& cat = test::catalog(10);
    const auto& f = cat.get("big_phi1");
    CHECK(wedge({f, f}).is_zero());
}

TEST_CASE("Phi_1 ^ Phi_2 over zeta^2 phi_0 is constant") {
    auto& cat = test::catalog(12);
    auto w = wedge({cat.get("big_phi1"), cat.get("big_phi2")});
    auto den = mul(mul(cat.last("zeta"), cat.last("zeta")), cat.last("phi0"));
    auto q = divide(w, den);
    REQUIRE(q.valid_to() >= 2);
    CHECK(!q[0].is_zero());
    for (int n = 1; n <= q.valid_to(); ++n) CHECK(q[n].is_zero());
}

TEST_CASE("restriction to the modular curve") {
    auto& cat = test::catalog(8);
    auto r0 = restrict_to_curve(cat.last("phi0").truncated(4));
    CHECK(r0.str() == "1 + 18q + 108q^2 + 234q^3 + 234q^4");
    auto r1 = restrict_to_curve(cat.last("phi1").truncated(4));
    QSeries ref{{Cyc(1), Cyc(-9), Cyc(27), Cyc(-9), Cyc(-117)}};
    auto lam = proportionality(r1, ref);
    REQUIRE(lam.has_value());
    CHECK(!lam->is_zero());
    auto rz = restrict_to_curve(cat.last("zeta"));
    for (const auto& c : rz.c) CHECK(c.is_zero());
}

TEST_CASE("serialization round-trip and pretty printing") {
    auto& cat = test::catalog(8);
    const auto& z = cat.last("zeta");
    CHECK(FJSeries::deserialize(z.serialize()) == z);
    CHECK(cat.last("phi0").pretty(1) == "1 + (9Y+9Z)w + O(w^2)");
    std::string zp = z.pretty(7);
    CHECK(zp.find("(-211XY^6+136XY^3Z^3-211XZ^6)w^7") != std::string::npos);
    CHECK(zp.rfind("Xw - 27XYZw^3", 0) == 0);
}

TEST_CASE("truncation bookkeeping") {
    std::mt19937 rng(11);
    auto f = random_series(rng, 5), g = random_series(rng, 3);
    CHECK((f + g).valid_to() == 3);
    CHECK(mul(f, g).valid_to() == 3);
    FJSeries w(5);
    w[1] = X;
    CHECK(mul(w, f).valid_to() == 5);
}
