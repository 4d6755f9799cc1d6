// Dimension formulas, ranks of module presentations at finite truncation, and the S3 action.
#pragma once

#include "picard/catalog.hpp"
#include "picard/hecke.hpp"

#include <string>
#include <vector>

namespace picard {

struct OutOfStatedRange : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct TruncationAmbiguous : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotClosed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Families:
//   "M_gamma1"   dim M_{j,j+3k}(Gamma_1[sqrt-3]), 0 <= j <= 3, j+3k > 4
//   "S1_gamma1"  dim S_{1,3k+1}(Gamma_1[sqrt-3]) = 3k^2-3, k >= 1
//   "S1"         dim S_{1,3k+1}(Gamma[sqrt-3], det^ell), k >= 1
//   "M0"         dim M_{3k}(Gamma[sqrt-3]) = (k+1)(k+2)/2
//   "S2"         dim S_{2,3k+2}(Gamma[sqrt-3]) = 3k(k+1)/2, k >= 1
//   "M2_det2"    dim M_{2,3k+2}(Gamma[sqrt-3], det^2) = (3k^2+3k+2)/2
//   "M3"         dim M_{3,3k+3}(Gamma[sqrt-3]) = 2k^2+6k+4
//   "S3"         dim S_{3,3k+3}(Gamma[sqrt-3]) = 2k^2+6k
// The per-character formulas carry constants c', c'' that are not tabulated; only their
// first differences in k are available, through dim_step.
int dim_formula(const std::string& family, int j, int k, int ell = 0);
const std::vector<std::string>& dim_families();
// dim M_{j,j+3(k+1)}(det^ell) - dim M_{j,j+3k}(det^ell) from the per-character formulas
int dim_step(int j, int k, int ell);

// a generator and the degree of the phi-monomials multiplying it (negative: left out)
struct Generator {
    std::string name;
    int degree = 0;
};

// products (monomial in phi_0, phi_1, phi_2) * generator; generator-major, monomials in lex order
struct ProductSpan {
    struct Term {
        std::size_t generator;
        std::vector<int> exponents;  // of phi_0, phi_1, phi_2
    };
    std::vector<Term> terms;
    std::vector<FJSeries> series;  // parallel to terms
    int valid_to = 0;
};
ProductSpan product_span(Catalog& cat, const std::vector<Generator>& generators);
ProductSpan product_span(Catalog& cat, const std::vector<std::string>& generators, int degree);

struct RankResult {
    std::size_t rank = 0;
    std::size_t products = 0;
    int valid_to = 0;
};
// throws TruncationAmbiguous if the truncation is below 3*degree + (max generator order) + 2,
// or if the rank is still growing within the top two orders
RankResult rank_of_span(Catalog& cat, const std::vector<Generator>& generators);
RankResult rank_of_span(Catalog& cat, const std::vector<std::string>& generators, int degree);

struct KernelResult {
    std::vector<std::vector<Cyc>> relations;  // coefficients on product_span().series
    ProductSpan span;
};
KernelResult kernel_of_span(Catalog& cat, const std::vector<Generator>& generators);
KernelResult kernel_of_span(Catalog& cat, const std::vector<std::string>& generators, int degree);
// whether a combination of the products is a relation, i.e. lies in the kernel
bool in_kernel(const KernelResult& k, const std::vector<Cyc>& combination);

// multiplicities of the trivial, sign and two-dimensional characters of S3
struct S3Character {
    int trivial = 0, sign = 0, standard = 0;
    int dim() const { return trivial + sign + 2 * standard; }
    std::string str() const;
    friend bool operator==(const S3Character&, const S3Character&) = default;
};

// restrictions of the S4 irreducibles s[4], s[3,1], s[2,2], s[2,1,1], s[1,1,1,1]
S3Character s3_restriction(const std::string& s4_irrep);
const std::vector<std::string>& s4_irreps();
// names of the S4 irreducibles whose restriction is exactly c, when c is one of the five
std::vector<std::string> s4_candidates(const S3Character& c);

// R2 and R3 as matrices on a span of last components (basis from SeriesSpan)
struct S3Action {
    SpanOperator r2, r3;
};
// throws NotClosed when a substitution leaves the span
S3Action s3_action(const std::vector<VectorFormFJ>& span);
// traces of R2, R3 on the invariant subspace spanned by v (coordinates in the action's basis)
S3Character s3_character(const S3Action& act, const std::vector<std::vector<Cyc>>& v);
S3Character isotypic_decompose(const std::vector<VectorFormFJ>& span);

// rank, kernel and dimension-formula checks, reported like the catalog identities
const std::vector<std::string>& structure_check_names();
// throws UnknownForm for an unknown id
IdentityReport verify_structure(Catalog& cat, const std::string& id);

}  // namespace picard
