#include "doctest.h"
#include "picard/hecke.hpp"
#include "support.hpp"

using namespace picard;

namespace {

Cyc eig(const std::string& name, const std::string& op, int w = 16) {
    auto& cat = test::catalog(w);
    return eigenvalue(cat.get(name), HeckeOperator::parse(op), test::table()).eigenvalue;
}

const EisensteinInteger nu7{1, 3};

}  // namespace

TEST_CASE("operator parsing") {
    auto a = HeckeOperator::parse("1+3r");
    CHECK(a.kind() == HeckeOperator::Kind::Nu);
    CHECK(a.p() == 7);
    CHECK(a.step() == 7);
    CHECK(HeckeOperator::parse("T(1+3*r)").nu() == nu7);
    auto b = HeckeOperator::parse("-2");
    CHECK(b.kind() == HeckeOperator::Kind::MinusP);
    CHECK(b.p() == 2);
    CHECK(b.step() == 4);
    CHECK(HeckeOperator::parse("7").nu().norm() == 7);
    CHECK(HeckeOperator::parse("13").nu().norm() == 13);
}

TEST_CASE("scalar weight 3: phi_0") {
    CHECK(eig("phi0", "1+3r") == Cyc(3, 27));
    Cyc nu(nu7), nb(nu7.conj());
    CHECK(eig("phi0", "1+3r") == Cyc(8) * nu + nb * nb);
    CHECK(eig("phi0", "-2") == Cyc(-9));
    CHECK(eig("phi0", "-2") == eisenstein_eigenvalue(0, 3, HeckeOperator::parse("-2")));
}

TEST_CASE("phi_0 + phi_1 + phi_2 is an eigenform with a consistent ratio") {
    auto& cat = test::catalog(16);
    FJSeries s = cat.last("phi0") + cat.last("phi1") + cat.last("phi2");
    auto T = HeckeOperator::parse("1+3r");
    auto rep = eigen_ratio(s, apply_scalar(T, s, 3, test::table()));
    CHECK(rep.consistent());
    CHECK(rep.coefficients_checked.size() >= 3);
    CHECK(rep.eigenvalue == Cyc(3, 27));
}

TEST_CASE("the literal scalar variant is inconsistent on phi_0") {
    auto& cat = test::catalog(16);
    auto T = HeckeOperator::parse("1+3r");
    const auto& f = cat.last("phi0");
    CHECK_THROWS_AS(eigen_ratio(f, apply_scalar(T, f, 3, test::table(), ScalarVariant::Literal)), NotAnEigenform);
}

TEST_CASE("vector formula at j = 0 agrees with the scalar formula") {
    auto& cat = test::catalog(16);
    for (std::string op : {"1+3r", "-2"}) {
        auto T = HeckeOperator::parse(op);
        const auto& f = cat.last("phi1");
        CHECK(apply_last(T, f, 0, 3, test::table()) == apply_scalar(T, f, 3, test::table()));
    }
}

TEST_CASE("Phi eigenvalues") {
    CHECK(eig("big_phi0", "1+3r") == Cyc(759, 261));
    CHECK(eig("big_phi0", "-2") == Cyc(72));
}

TEST_CASE("Psi_2 and D_0") {
    CHECK(eig("psi2", "-2") == Cyc(-684));
    CHECK(eig("psi2", "1+3r") == Cyc(-6549, -17352));
    CHECK(eig("d0", "1+3r") == Cyc(-105, -297));
    CHECK(eig("d0", "-2") == Cyc(-72));
}

TEST_CASE("D_0 under T_{-5}") {
    CHECK(eig("d0", "-5", 32) == Cyc(-810));
}

TEST_CASE("t_2 on the w^4 coefficient of Phi_0") {
    auto& cat = test::catalog(16);
    const auto& f = cat.last("big_phi0");
    CHECK(test::table().apply_t(EisensteinInteger{-2, 0}, f[4]) == f[1] * Cyc(-80));
}

TEST_CASE("weight (3,3) Eisenstein closed forms on E_0..E_3") {
    // E3 starts at w^3 and loses 6 orders to its denominator
    auto& cat = test::catalog(32);
    for (std::string op : {"1+3r", "-2"}) {
        auto T = HeckeOperator::parse(op);
        Cyc want = eisenstein_eigenvalue(3, 3, T);
        auto first = eigenvalue(cat.get("e33_0"), T, test::table()).eigenvalue;
        CHECK(first == want);
        for (auto n : {"e33_1", "e33_2", "e33_3"}) CHECK(eigenvalue(cat.get(n), T, test::table()).eigenvalue == want);
    }
}

TEST_CASE("eisenstein closed forms") {
    auto T = HeckeOperator::parse("1+3r");
    Cyc nu(nu7), nb(nu7.conj());
    CHECK(eisenstein_eigenvalue(3, 3, T) == Cyc(8) * pow(nu, 4) + pow(nb, 5));
    CHECK(eisenstein_eigenvalue(0, 3, HeckeOperator::parse("-2")) == Cyc(-9));
    Cyc e11 = eisenstein_eigenvalue(1, 1, T);
    CHECK((e11.a.get_den() != 1 || e11.b.get_den() != 1));
}

TEST_CASE("lift closed forms") {
    auto ap = eta_product_coefficients(14);
    CHECK(ap[0] == 0);
    CHECK(ap[1] == 1);
    CHECK(ap[2] == -6);
    CHECK(ap[3] == 9);
    Cyc nu(nu7), nb(nu7.conj());
    CHECK(lift_eigenvalue(LiftKind::Kudla, Cyc(0), 1, 4, nu7) == pow(nb, 7));
    CHECK(lift_eigenvalue(LiftKind::Kudla, Cyc(ap[7]), 1, 4, nu7) == Cyc(ap[7]) * nu * nu + pow(nb, 7));
    CHECK(lift_eigenvalue(LiftKind::Rogawski, Cyc(0), 1, 4, nu7) == nu * nu * pow(nb, 5));
    CHECK(lift_eigenvalue(LiftKind::Kudla, Cyc(ap[7]), 1, 4, nu7) == Cyc(1326, 369));
}

TEST_CASE("Psi_1 has the shape a(p) + nu^2 conj(nu)^5") {
    Cyc nu(nu7), nb(nu7.conj());
    Cyc a = eig("psi1", "1+3r") - nu * nu * pow(nb, 5);
    CHECK(a.b == 0);
    CHECK(a.a.get_den() == 1);
}

TEST_CASE("hecke matrix of a one-element span") {
    auto& cat = test::catalog(16);
    auto T = HeckeOperator::parse("1+3r");
    auto m = hecke_matrix({cat.get("big_phi0")}, T, test::table());
    REQUIRE(m.matrix.rows() == 1);
    CHECK(m.matrix(0, 0) == Cyc(759, 261));
}

TEST_CASE("zero series and non-eigenforms") {
    auto T = HeckeOperator::parse("1+3r");
    FJSeries z(16);
    CHECK(apply_scalar(T, z, 3, test::table()).is_zero());
    CHECK_THROWS_AS(eigen_ratio(z, z), AllCoefficientsZero);
    auto& cat = test::catalog(16);
    FJSeries f = cat.last("phi0");
    FJSeries g = f * Cyc(5);
    g[2] = g[2] + f[2];
    CHECK_THROWS_AS(eigen_ratio(f, g), NotAnEigenform);
}

TEST_CASE("charpoly and exact eigenspaces") {
    Matrix m(2, 2);
    m(0, 0) = Cyc(2);
    m(0, 1) = Cyc(1);
    m(1, 1) = Cyc(3);
    auto cp = charpoly(m);
    REQUIRE(cp.size() == 3);
    CHECK(cp[0] == Cyc(6));
    CHECK(cp[1] == Cyc(-5));
    CHECK(cp[2] == Cyc(1));
    auto ed = exact_eigen(m);
    CHECK(ed.spaces.size() == 2);
    CHECK(ed.unresolved_degree == 0);
    Matrix r(2, 2);
    r(0, 1) = Cyc(-1);
    r(1, 0) = Cyc(1);
    auto er = exact_eigen(r);  // x^2 + 1 has no root in Q(r)
    CHECK(er.spaces.empty());
    CHECK(er.unresolved_degree == 2);
}
