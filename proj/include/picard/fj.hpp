// Truncated Fourier-Jacobi series with section-valued coefficients.
#pragma once

#include "picard/sections.hpp"

#include <optional>
#include <string>
#include <vector>

namespace picard {

struct ShapeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
// a divisor vanishes through the carried precision
struct TruncationTooShallow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// sum c_n w^n for n <= valid_to, deg c_n = n
class FJSeries {
public:
    FJSeries() = default;
    explicit FJSeries(int valid_to);

    static FJSeries constant(const Cyc& v, int valid_to);
    // a single term s w^n, s of degree n
    static FJSeries term(const SectionElement& s, int valid_to);

    int valid_to() const { return static_cast<int>(c_.size()) - 1; }
    const SectionElement& operator[](int n) const { return c_.at(static_cast<std::size_t>(n)); }
    SectionElement& operator[](int n) { return c_.at(static_cast<std::size_t>(n)); }

    bool is_zero() const;
    // index of the first nonzero coefficient, -1 for zero
    int order() const;
    FJSeries truncated(int valid_to) const;

    FJSeries& operator+=(const FJSeries& o);
    FJSeries& operator-=(const FJSeries& o);
    FJSeries& operator*=(const Cyc& s);
    FJSeries operator-() const;
    friend FJSeries operator+(FJSeries x, const FJSeries& y) { return x += y; }
    friend FJSeries operator-(FJSeries x, const FJSeries& y) { return x -= y; }
    friend FJSeries operator*(FJSeries x, const Cyc& s) { return x *= s; }
    friend FJSeries operator*(const Cyc& s, FJSeries x) { return x *= s; }
    friend FJSeries operator*(const FJSeries& x, const FJSeries& y);
    friend bool operator==(const FJSeries&, const FJSeries&) = default;

    FJSeries pow(int e) const;

    // 1 + (9Y+9Z)w + (27Y^2+54YZ+27Z^2)w^2 + ...
    std::string pretty(int upto = -1) const;
    // one line per nonzero coefficient: "n|a,b,c|coef"
    std::string serialize() const;
    static FJSeries deserialize(const std::string& text);

private:
    std::vector<SectionElement> c_;
};

// series with prime-linear coefficients (first components of vector forms)
class DiffFJSeries {
public:
    DiffFJSeries() = default;
    explicit DiffFJSeries(int valid_to);
    explicit DiffFJSeries(const FJSeries& f);

    int valid_to() const { return static_cast<int>(c_.size()) - 1; }
    const DiffSectionElement& operator[](int n) const { return c_.at(static_cast<std::size_t>(n)); }
    DiffSectionElement& operator[](int n) { return c_.at(static_cast<std::size_t>(n)); }
    DiffFJSeries truncated(int valid_to) const;

    DiffFJSeries& operator+=(const DiffFJSeries& o);
    DiffFJSeries& operator-=(const DiffFJSeries& o);
    DiffFJSeries& operator*=(const Cyc& s);
    friend DiffFJSeries operator+(DiffFJSeries x, const DiffFJSeries& y) { return x += y; }
    friend DiffFJSeries operator-(DiffFJSeries x, const DiffFJSeries& y) { return x -= y; }
    friend DiffFJSeries operator*(DiffFJSeries x, const Cyc& s) { return x *= s; }
    friend DiffFJSeries operator*(const DiffFJSeries& x, const FJSeries& y);
    friend DiffFJSeries operator*(const FJSeries& y, const DiffFJSeries& x) { return x * y; }

private:
    std::vector<DiffSectionElement> c_;
};

FJSeries mul(const FJSeries& f, const FJSeries& g);
// c_n -> n c_n, the normalized v-derivative
FJSeries n_operator(const FJSeries& f);
// coefficientwise derivation, the normalized u-derivative
DiffFJSeries delta(const FJSeries& f);
// exact quotient f/g; valid_to drops by the order of g; throws NotDivisible, or
// TruncationTooShallow when g is zero through its valid_to
FJSeries divide(const FJSeries& f, const FJSeries& g);
// coefficientwise ring map by degree-one images (cusp stabilizer)
FJSeries substitute(const FJSeries& f, const ImageTriple& images);
// coefficientwise Wronskian reduction
FJSeries wronskian_reduce(const DiffFJSeries& f);

// q-expansion of the restriction to the modular curve at order u^0
struct QSeries {
    std::vector<Cyc> c;
    std::string str() const;
    friend bool operator==(const QSeries&, const QSeries&) = default;
};
QSeries restrict_to_curve(const FJSeries& f);
// lambda with a = lambda b, or nullopt; zero series is proportional to anything
std::optional<Cyc> proportionality(const QSeries& a, const QSeries& b);
std::optional<Cyc> proportionality(const FJSeries& a, const FJSeries& b);

// A weight-(1,k) vector (first_num/den, last_num/den) kept with its denominator, so that
// pairwise wedges can be formed before dividing.
struct J1Data {
    DiffFJSeries first_num;
    FJSeries last_num;
    FJSeries den;
};

// form = (sum_t coef_t Sym^j(bases[basis_t])) / den
struct SymPresentation {
    struct Term {
        FJSeries coef;
        int basis;
    };
    int j = 1;
    std::vector<J1Data> bases;
    std::vector<Term> terms;
    FJSeries den;
};

struct VectorFormFJ {
    std::string name;
    int j = 0, k = 0, ell = 0;
    FJSeries last;
    std::optional<SymPresentation> pres;
    std::string provenance;

    int valid_to() const { return last.valid_to(); }
};

// constant term at the cusp (first component, w^0); nullopt when the presentation
// does not determine it without prime powers above one
std::optional<Cyc> constant_term(const VectorFormFJ& f);

// weight (1, k+l+1): last = (1/l) f N h - (1/k) h N f, first = same with delta
VectorFormFJ bracket(const FJSeries& f, int k, const FJSeries& h, int l, int ell = 0);

// scalar form as a j = 0 record
VectorFormFJ scalar_form(const std::string& name, int k, int ell, FJSeries f);

// s * F for a scalar series s
VectorFormFJ scale(const VectorFormFJ& f, const FJSeries& s, int weight_s, int ell_s);
VectorFormFJ scale(const VectorFormFJ& f, const Cyc& s);
// sum of forms of equal weight; presentations merge over the product of the distinct denominators
VectorFormFJ combine(const std::vector<std::pair<FJSeries, VectorFormFJ>>& parts, int weight_coef, int ell_coef);
// F / g, exact on the last component; the presentation keeps g as a denominator
VectorFormFJ divide(const VectorFormFJ& f, const FJSeries& g, int weight_g, int ell_g);
// coef * Sym^j(F) / den for a j = 1 form F
VectorFormFJ sym_power(const VectorFormFJ& f, int j, const Cyc& coef, const FJSeries& den, int weight_den, int ell_den);

// the determinant of j+1 forms presented as symmetric powers
FJSeries wedge(const std::vector<VectorFormFJ>& forms);

// series of the pairwise factor first(u) last(v) - first(v) last(u), reduced, over den(u) den(v)
FJSeries pair_wedge(const J1Data& u, const J1Data& v);

}  // namespace picard
