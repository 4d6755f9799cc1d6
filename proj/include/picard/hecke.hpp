// Hecke operators on Fourier-Jacobi expansions, eigenvalues and closed forms.
#pragma once

#include "picard/fj.hpp"
#include "picard/linalg.hpp"
#include "picard/theta.hpp"

#include <optional>
#include <string>
#include <vector>

namespace picard {

struct NotAnEigenform : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AllCoefficientsZero : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotInvariant : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// T_nu for nu = 1 mod 3 of prime norm p = 1 mod 3, or T_{-p} for a prime p = 2 mod 3
class HeckeOperator {
public:
    enum class Kind { Nu, MinusP };

    static HeckeOperator t_nu(EisensteinInteger nu);
    static HeckeOperator t_minus_p(std::int64_t p);
    // "1+3r", "-2", "T(1+3r)"; a rational integer -p selects T_{-p}, a norm p = 1 mod 3 selects split_prime(p)
    static HeckeOperator parse(const std::string& s);

    Kind kind() const { return kind_; }
    EisensteinInteger nu() const { return nu_; }
    std::int64_t p() const { return p_; }
    // output coefficient n needs input through n * step()
    int step() const { return static_cast<int>(kind_ == Kind::Nu ? p_ : p_ * p_); }
    std::string str() const;

private:
    Kind kind_ = Kind::Nu;
    EisensteinInteger nu_;
    std::int64_t p_ = 0;
};

// The scalar formula read literally has nu^-1 on the f_n term; the vector formula at j = 0
// gives conj(nu)^-1 there. Only the second one makes phi an eigenform, so it is the default.
enum class ScalarVariant { Literal, VectorAtJ0 };

FJSeries apply_scalar(const HeckeOperator& T, const FJSeries& f, int k, OperatorTable& table,
                      ScalarVariant variant = ScalarVariant::VectorAtJ0);
// last component of T F for F of weight (j, k)
FJSeries apply_last(const HeckeOperator& T, const FJSeries& last, int j, int k, OperatorTable& table);
FJSeries apply_last(const HeckeOperator& T, const VectorFormFJ& f, OperatorTable& table);

struct EigenReport {
    Cyc eigenvalue;
    std::vector<int> coefficients_checked;
    std::vector<bool> residual_zero;  // per checked coefficient
    bool consistent() const;
    std::string str() const;  // "a+b*r|n0,n1,..."
};

// lambda with g = lambda f; throws AllCoefficientsZero or NotAnEigenform
EigenReport eigen_ratio(const FJSeries& f, const FJSeries& g);
EigenReport eigenvalue(const VectorFormFJ& f, const HeckeOperator& T, OperatorTable& table);

// Eisenstein-type closed forms: ((p^(k-2)+1) nu^(j+1) + conj(nu)^(j+k-1) for T_nu, a cubic in p for T_{-p}
Cyc eisenstein_eigenvalue(int j, int k, const HeckeOperator& T);

enum class LiftKind { Kudla, Rogawski };
// Kudla: a_p nu^(a+1) + conj(nu)^(a+b+2); Rogawski: a_p + nu^(a+1) conj(nu)^(b+1)
Cyc lift_eigenvalue(LiftKind kind, const Cyc& ap, int a, int b, EisensteinInteger nu);

// q-expansion coefficients c_0..c_order of (eta(3 tau) eta(tau))^6
std::vector<mpz_class> eta_product_coefficients(int order);

// ---------------- spans of truncated series

// coordinates of a series through w^vt, coefficient by coefficient
std::vector<Cyc> flatten(const FJSeries& s, int vt);

// the span of some series in truncated coordinates, with an independent subset as basis
class SeriesSpan {
public:
    SeriesSpan(const std::vector<FJSeries>& gens, int vt);

    int valid_to() const { return vt_; }
    std::size_t rank() const { return basis_.size(); }
    // indices into the generator list
    const std::vector<std::size_t>& basis() const { return basis_; }
    // coordinates in the basis, nullopt when outside the span
    std::optional<std::vector<Cyc>> coords(const FJSeries& s) const;

private:
    int vt_;
    std::vector<std::size_t> basis_;
    Matrix cols_;                    // flattened basis, one column per element
    std::vector<std::size_t> rows_;  // rows on which the basis restricts invertibly
    Solver square_;
};

struct SpanOperator {
    Matrix matrix;                   // column i = image of basis element i
    std::vector<std::size_t> basis;  // generator indices
    int certified_to = 0;            // images compared through this order
};

// matrix of a map given on last components; images must be valid through certify_to.
// Throws TruncationTooShallow if the basis is not separated at certify_to, NotInvariant if an image leaves the span.
template <class F>
SpanOperator span_operator(const std::vector<FJSeries>& gens, F&& map, int certify_to);

SpanOperator hecke_matrix(const std::vector<VectorFormFJ>& span, const HeckeOperator& T, OperatorTable& table);

// characteristic polynomial det(x I - M), coefficients from x^0 up
std::vector<Cyc> charpoly(const Matrix& m);

struct ExactEigenspace {
    Cyc value;
    int algebraic_multiplicity = 0;
    std::vector<std::vector<Cyc>> vectors;  // kernel of M - value
};
struct EigenDecomposition {
    std::vector<Cyc> charpoly;
    std::vector<ExactEigenspace> spaces;  // roots in Q(r)
    int unresolved_degree = 0;            // degree of the part without roots in Q(r)
};
EigenDecomposition exact_eigen(const Matrix& m);

// the restriction of M to the M-invariant subspace spanned by the columns of v
Matrix restrict_to(const Matrix& m, const std::vector<std::vector<Cyc>>& v);

// ---------------- template body

template <class F>
SpanOperator span_operator(const std::vector<FJSeries>& gens, F&& map, int certify_to) {
    int full = gens.at(0).valid_to();
    for (auto& g : gens) full = std::min(full, g.valid_to());
    SeriesSpan wide(gens, full);
    std::vector<FJSeries> cut;
    for (std::size_t i : wide.basis()) cut.push_back(gens[i].truncated(certify_to));
    SeriesSpan narrow(cut, certify_to);
    if (narrow.rank() < wide.rank())
        throw TruncationTooShallow("span of rank " + std::to_string(wide.rank()) + " has rank " +
                                   std::to_string(narrow.rank()) + " through w^" + std::to_string(certify_to));
    SpanOperator out;
    out.basis = wide.basis();
    out.certified_to = certify_to;
    out.matrix = Matrix(out.basis.size(), out.basis.size());
    for (std::size_t i = 0; i < out.basis.size(); ++i) {
        FJSeries img = map(gens[out.basis[i]]);
        if (img.valid_to() < certify_to)
            throw TruncationTooShallow("image valid only through w^" + std::to_string(img.valid_to()));
        auto c = narrow.coords(img.truncated(certify_to));
        if (!c) throw NotInvariant("image of generator " + std::to_string(out.basis[i]) + " leaves the span");
        for (std::size_t r = 0; r < c->size(); ++r) out.matrix(r, i) = (*c)[r];
    }
    return out;
}

}  // namespace picard
