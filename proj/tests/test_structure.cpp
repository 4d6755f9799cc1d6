#include "doctest.h"
#include "picard/structure.hpp"
#include "picard/tables.hpp"
#include "support.hpp"

using namespace picard;

TEST_CASE("dimension formulas") {
    CHECK(dim_formula("S1_gamma1", 1, 2) == 9);
    CHECK(dim_formula("S1", 1, 2, 0) == 3);
    CHECK(dim_formula("M3", 3, 1) == 12);
    CHECK(dim_formula("S3", 3, 1) == 8);
    CHECK(dim_formula("M0", 0, 2) == 6);
    CHECK(dim_formula("S2", 2, 1) == 3);
    CHECK(dim_formula("M2_det2", 2, 1) == 4);
    for (int k = 1; k <= 5; ++k)
        CHECK(dim_formula("S1", 1, k, 0) + dim_formula("S1", 1, k, 1) + dim_formula("S1", 1, k, 2) ==
              dim_formula("S1_gamma1", 1, k));
    CHECK_THROWS_AS(dim_formula("nosuch", 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(dim_formula("S2", 2, 0), OutOfStatedRange);
}

TEST_CASE("rank examples") {
    auto& cat = test::catalog(16);
    CHECK(rank_of_span(cat, {"big_phi0", "big_phi1", "big_phi2"}, 1).rank == 8);
    CHECK(rank_of_span(cat, {Generator{"psi1", 1}, Generator{"psi2", 0}}).rank == 4);
    CHECK(rank_of_span(cat, {"d0", "d1", "d2"}, 0).rank == 3);
}

TEST_CASE("rank refuses a truncation that is too short") {
    auto& cat = test::catalog(8);
    CHECK_THROWS_AS(rank_of_span(cat, {"big_phi0", "big_phi1", "big_phi2"}, 3), TruncationAmbiguous);
}

TEST_CASE("kernels") {
    auto& cat = test::catalog(16);
    auto k = kernel_of_span(cat, {"big_phi0", "big_phi1", "big_phi2"}, 1);
    REQUIRE(k.relations.size() == 1);
    // sum phi_i Phi_i: slot of phi_i in the block of Phi_i, monomials in lex order (phi0, phi1, phi2)
    std::vector<Cyc> rel(9);
    rel[0] = rel[4] = rel[8] = Cyc(1);
    CHECK(in_kernel(k, rel));
    rel[8] = Cyc(2);
    CHECK(!in_kernel(k, rel));
    CHECK(kernel_of_span(cat, {Generator{"psi1", 1}, Generator{"psi2", 0}}).relations.empty());
}

TEST_CASE("S3 characters") {
    auto& cat = test::catalog(12);
    auto phi = isotypic_decompose({cat.get("big_phi0"), cat.get("big_phi1"), cat.get("big_phi2")});
    CHECK(phi == s3_restriction("s[2,1,1]"));
    CHECK(isotypic_decompose({cat.get("zeta")}) == S3Character{0, 1, 0});
    CHECK(isotypic_decompose({cat.get("k2")}) == S3Character{1, 0, 0});
    CHECK(s3_restriction("s[3,1]") == S3Character{1, 0, 1});
    CHECK(s3_restriction("s[2,2]") == S3Character{0, 0, 1});
    CHECK(s4_candidates(S3Character{0, 1, 1}) == std::vector<std::string>{"s[2,1,1]"});
    CHECK(s4_candidates(S3Character{0, 0, 0}).empty());
}

TEST_CASE("structure checks at W = 16 where the truncation allows") {
    auto& cat = test::catalog(16);
    for (auto id : {"rank_s1_l0_k2", "rank_s2_k1", "kernel_phi_Phi", "kernel_r4", "kernel_r5", "dim_gamma1_sum",
                    "dim_step_gamma1", "s3_phi", "s3_zeta", "s3_d"}) {
        auto rep = verify_structure(cat, id);
        std::string why;
        for (const auto& d : rep.details) why += d + "; ";
        CHECK_MESSAGE(rep.pass, id << ": " << why);
    }
    CHECK_THROWS_AS(verify_structure(cat, "nosuch"), UnknownForm);
}

TEST_CASE("span spectrum of the phi_i D_j products at T(1+3r)") {
    auto& cat = test::catalog(16);
    auto span = build_span(cat, "s2_8");
    auto refine = HeckeOperator::parse("-2");
    auto sp = span_spectrum(span, "s2_8", HeckeOperator::parse("1+3r"), test::table(), &refine);
    CHECK(sp.rank == static_cast<std::size_t>(dim_formula("S2", 2, 2)));
    CHECK(sp.character.dim() == static_cast<int>(sp.rank));
    // W = 16 is too shallow to separate everything; what is not separated is counted, not guessed
    for (const auto& part : sp.parts) {
        std::size_t seen = part.unseparated;
        for (const auto& [lam, mult] : part.values) seen += mult;
        CHECK(seen + static_cast<std::size_t>(part.unresolved_degree) == part.dim);
    }
    CHECK_THROWS_AS(build_span(cat, "nosuch"), UnknownForm);
}
