#include "doctest.h"
#include "picard/theta.hpp"
#include "support.hpp"

#include <sys/stat.h>

#include <cstdio>

using namespace picard;
using S = SectionElement;

namespace {

bool small(const Real& x, int bits) { return x < pow(Real(2), -bits); }

bool close(const Complex& a, const Complex& b, int bits) { return small((a - b).abs(), bits); }

// denominators only powers of 3
bool three_integral(const Cyc& c) {
    for (mpz_class d : {c.a.get_den(), c.b.get_den()}) {
        while (d % 3 == 0) d /= 3;
        if (d != 1) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("model diagnostics at 256 bits") {
    PrecisionScope ps(256);
    auto m = AnalyticModel::bootstrap(256);
    auto d = m.diagnose();
    CHECK(small(d.cubic_residual, 150));
    CHECK(small(d.y0_error, 150));
    CHECK(small(d.x0_error, 150));
    CHECK(small(d.mu6_residual, 150));
    CHECK(small(d.periodicity_residual, 150));
}

TEST_CASE("mu6 acts on X by -r^2 and swaps Y, Z") {
    PrecisionScope ps(256);
    auto m = AnalyticModel::bootstrap(256);
    Complex g = -(complex_rho() * complex_rho());
    for (int i = 1; i <= 10; ++i) {
        Complex u(Real(i) / 7, Real(3 - i) / 11);
        auto a = m.eval(u);
        auto b = m.eval(g * u);
        CHECK(close(b[0], g * a[0], 150));
        CHECK(close(b[1], a[2], 150));
        CHECK(close(b[2], a[1], 150));
    }
    auto z = m.eval(Complex(0));
    CHECK(small(z[0].abs(), 150));
    CHECK(close(z[1], Complex(1), 150));
}

TEST_CASE("validate_model reproduces phi0 through w^3") {
    auto& t = test::table();
    auto rep = validate_model(t);
    CHECK(rep.ok);
    REQUIRE(rep.phi0.size() == 4);
    CHECK(rep.phi0[1] == S::Y() * Cyc(9) + S::Z() * Cyc(9));
    S Y = S::Y(), Z = S::Z();
    CHECK(rep.phi0[3] == Y.pow(3) * Cyc(36) + Y * Y * Z * Cyc(81) + Y * Z * Z * Cyc(81) + Z.pow(3) * Cyc(36));
}

TEST_CASE("m on units is the exact mu6 action") {
    auto& t = test::table();
    EisensteinInteger one{1, 0}, minus_one{-1, 0}, g{1, 1};  // g = -r^2
    auto m1 = t.m(one);
    CHECK(m1[0] == S::X());
    CHECK(m1[1] == S::Y());
    CHECK(m1[2] == S::Z());
    auto mg = t.m(g);
    CHECK(mg[0] == S::X() * Cyc(1, 1));
    CHECK(mg[1] == S::Z());
    CHECK(mg[2] == S::Y());
    auto mm = t.m(minus_one);
    CHECK(mm[0] == -S::X());
    CHECK(mm[1] == S::Z());
    CHECK(mm[2] == S::Y());
}

TEST_CASE("numeric m for a unit agrees with the exact action") {
    auto& t = test::table();
    EisensteinInteger g{1, 1};
    CHECK(t.compute_m_numeric(g) == cusp::unit_action(g));
}

TEST_CASE("t_a m_a = N(a) on small degrees") {
    auto& t = test::table();
    for (EisensteinInteger a : {EisensteinInteger{1, 3}, EisensteinInteger{-2, 0}, EisensteinInteger{1, 1}}) {
        for (int n = 1; n <= 2; ++n) {
            for (std::size_t i = 0; i < graded_dim(n); ++i) {
                auto mo = mono_at(n, i);
                S s = S::monomial(mo.a, mo.b, mo.c);
                CHECK(t.apply_t(a, t.apply_m(a, s)) == s * Cyc(a.norm()));
            }
        }
    }
}

TEST_CASE("every cached t satisfies t_a m_a = N(a)") {
    auto& t = test::table();
    for (const auto& [key, mat] : t.t_entries()) {
        auto [a, n] = key;
        if (n == 0) continue;
        for (std::size_t i = 0; i < graded_dim(n); ++i) {
            auto mo = mono_at(n, i);
            S s = S::monomial(mo.a, mo.b, mo.c);
            CHECK_MESSAGE(t.apply_t(a, t.apply_m(a, s)) == s * Cyc(a.norm()), a.str() << " degree " << n);
        }
    }
}

TEST_CASE("m is multiplicative and commutative") {
    auto& t = test::table();
    std::vector<EisensteinInteger> small_ones;
    for (int n : {3, 4, 7}) for (auto a : enumerate_norm(n)) small_ones.push_back(a);
    for (auto a : small_ones)
        for (auto b : small_ones) {
            auto ab = t.m(a * b);
            CHECK(compose(t.m(a), t.m(b)) == ab);
            CHECK(compose(t.m(b), t.m(a)) == ab);
        }
}

TEST_CASE("entries lie in Z[r][1/3]") {
    auto& t = test::table();
    bool ok = true;
    for (const auto& [a, img] : t.m_entries())
        for (const auto& s : img)
            for (std::size_t i = 0; i < s.dim(); ++i) ok = ok && three_integral(s[i]);
    for (const auto& [k, mat] : t.t_entries())
        for (std::size_t i = 0; i < mat.rows(); ++i)
            for (std::size_t j = 0; j < mat.cols(); ++j) ok = ok && three_integral(mat(i, j));
    CHECK(ok);
}

TEST_CASE("exactification does not depend on the precision") {
    EisensteinInteger a{1, 3};
    OperatorTable lo(TableMeta{256, 531441}), hi(TableMeta{384, 531441});
    CHECK(lo.compute_m_numeric(a) == hi.compute_m_numeric(a));
    CHECK(lo.compute_t_numeric(a, 1) == hi.compute_t_numeric(a, 1));
}

TEST_CASE("coset representatives") {
    CHECK(coset_reps(EisensteinInteger{1, 3}).size() == 7);
    CHECK(coset_reps(EisensteinInteger{2, 0}).size() == 4);
    CHECK(coset_reps(EisensteinInteger{1, 0}).size() == 1);
}

TEST_CASE("exactify") {
    PrecisionScope ps(256);
    Real tiny = pow(Real(10), -60);
    Complex x(Real(1) / 2, real_sqrt3() / 2);
    CHECK(exactify(x, 531441, tiny) == Cyc(1, 1));
    CHECK(exactify(Complex(Real(18) + tiny / 2), 531441, tiny) == Cyc(18));
    Complex third = to_complex(Cyc(mpq_class(1, 3), mpq_class(-2, 9)));
    CHECK(exactify(third, 531441, tiny) == Cyc(mpq_class(1, 3), mpq_class(-2, 9)));
    CHECK_THROWS_AS(exactify(Complex(Real(18) + Real(3) / 10), 100, Real(3) / 10), ReconstructionFailed);
}

TEST_CASE("cache text round-trips exactly") {
    auto& t = test::table();
    t.m(EisensteinInteger{1, 3});
    t.t(EisensteinInteger{1, 3}, 1);
    auto text = t.serialize();
    auto back = OperatorTable::deserialize(text);
    CHECK(back.serialize() == text);
    CHECK(back.m_entries() == t.m_entries());
    CHECK(back.t_entries() == t.t_entries());
}

TEST_CASE("cache lock") {
    std::string path = "picard_lock_test.cache";
    {
        CacheLock held(path, true);
        CHECK_THROWS_AS(CacheLock(path, true, false), LockHeld);
        CHECK_THROWS_AS(CacheLock(path, false, false), LockHeld);
    }
    CHECK_NOTHROW(CacheLock(path, true, false));
    {
        CacheLock a(path, false), b(path, false, false);  // readers share
    }
    std::remove((path + ".lock").c_str());
}

TEST_CASE("missing table without compute") {
    OperatorTable t;
    t.allow_compute(false);
    CHECK_THROWS_AS(t.m(EisensteinInteger{1, 3}), MissingOperatorTable);
    CHECK_NOTHROW(t.m(EisensteinInteger{0, 1}));  // units are exact
    CHECK_THROWS_AS(t.t(EisensteinInteger{1, 3}, 1), MissingOperatorTable);
}
