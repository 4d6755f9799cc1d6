// Graded ring A = Q(r)[X,Y,Z]/(X^3 - r(Y^3 - Z^3)) and its prime-linear extension.
#pragma once

#include "picard/eisenstein.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace picard {

struct NotDivisible : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RelationViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotReducible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Monomial {
    int a, b, c;
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

// number of reduced monomials X^a Y^b Z^c, a <= 2, of degree n
constexpr std::size_t graded_dim(int n) { return n < 0 ? 0 : (n == 0 ? 1 : 3 * static_cast<std::size_t>(n)); }

// order: a ascending, then b ascending
constexpr std::size_t mono_index(int a, int b, int n) {
    std::size_t off = a == 0 ? 0 : (a == 1 ? static_cast<std::size_t>(n) + 1 : 2 * static_cast<std::size_t>(n) + 1);
    return off + static_cast<std::size_t>(b);
}
Monomial mono_at(int n, std::size_t idx);

class SectionElement {
public:
    SectionElement() : deg_(0), c_(1) {}
    // negative degree gives the (empty) zero space, used for primes of constants
    explicit SectionElement(int degree) : deg_(degree), c_(graded_dim(degree)) {}

    static SectionElement constant(const Cyc& v);
    static SectionElement X();
    static SectionElement Y();
    static SectionElement Z();
    // coef * X^a Y^b Z^c with a arbitrary (reduced on construction)
    static SectionElement monomial(int a, int b, int c, const Cyc& coef = Cyc(1));

    int degree() const { return deg_; }
    std::size_t dim() const { return c_.size(); }
    const Cyc& operator[](std::size_t i) const { return c_[i]; }
    Cyc& operator[](std::size_t i) { return c_[i]; }
    const std::vector<Cyc>& coeffs() const { return c_; }
    const Cyc& coeff(int a, int b, int c) const { return c_[mono_index(a, b, a + b + c)]; }

    bool is_zero() const;

    SectionElement& operator+=(const SectionElement& o);
    SectionElement& operator-=(const SectionElement& o);
    SectionElement& operator*=(const Cyc& s);
    SectionElement operator-() const;
    friend SectionElement operator+(SectionElement x, const SectionElement& y) { return x += y; }
    friend SectionElement operator-(SectionElement x, const SectionElement& y) { return x -= y; }
    friend SectionElement operator*(SectionElement x, const Cyc& s) { return x *= s; }
    friend SectionElement operator*(const Cyc& s, SectionElement x) { return x *= s; }
    friend SectionElement operator*(const SectionElement& x, const SectionElement& y);
    friend bool operator==(const SectionElement& x, const SectionElement& y) = default;

    // acc += x*y, acc must have degree deg x + deg y
    friend void addmul(SectionElement& acc, const SectionElement& x, const SectionElement& y);

    SectionElement pow(int e) const;

    // canonical: "coef*X^a*Y^b*Z^c" terms joined by " + ", monomials in ascending (a,b) order
    std::string str() const;
    // compact: 27Y^2+54YZ+27Z^2
    std::string pretty() const;
    static SectionElement parse(std::string_view s, int degree);

private:
    int deg_;
    std::vector<Cyc> c_;
};

using ImageTriple = std::array<SectionElement, 3>;

SectionElement mul(const SectionElement& s, const SectionElement& t);
// q with q*g = f, or throws NotDivisible
SectionElement exact_divide(const SectionElement& f, const SectionElement& g);
// division by a fixed g, reusing its norm
class Divider {
public:
    explicit Divider(const SectionElement& g);
    SectionElement operator()(const SectionElement& f) const;
    const SectionElement& divisor() const { return g_; }

private:
    SectionElement g_, co_;
    std::vector<Cyc> norm_;
};
// same result through a dense linear solve; kept as a cross-check
SectionElement exact_divide_linear(const SectionElement& f, const SectionElement& g);
// ring endomorphism X,Y,Z -> images (common degree d)
SectionElement substitute(const SectionElement& s, const ImageTriple& images);
void check_relation(const ImageTriple& images);
// images of the endomorphism s -> substitute(substitute(s, inner), outer)
ImageTriple compose_images(const ImageTriple& outer, const ImageTriple& inner);
Cyc ev_zero(const SectionElement& s);

// base + PX*X' + PY*Y' + PZ*Z', with PX, PY, PZ of degree n-1
class DiffSectionElement {
public:
    DiffSectionElement() = default;
    explicit DiffSectionElement(int degree);
    explicit DiffSectionElement(SectionElement base);

    int degree() const { return base.degree(); }
    bool has_prime() const;
    bool is_zero() const { return !has_prime() && base.is_zero(); }

    SectionElement base;
    std::array<SectionElement, 3> prime;  // coefficients of X', Y', Z'

    DiffSectionElement& operator+=(const DiffSectionElement& o);
    DiffSectionElement& operator-=(const DiffSectionElement& o);
    DiffSectionElement& operator*=(const Cyc& s);
    friend DiffSectionElement operator+(DiffSectionElement x, const DiffSectionElement& y) { return x += y; }
    friend DiffSectionElement operator-(DiffSectionElement x, const DiffSectionElement& y) { return x -= y; }
    friend DiffSectionElement operator*(DiffSectionElement x, const Cyc& s) { return x *= s; }
    friend DiffSectionElement operator*(const DiffSectionElement& x, const SectionElement& y);
    friend DiffSectionElement operator*(const SectionElement& y, const DiffSectionElement& x) { return x * y; }
    friend void addmul(DiffSectionElement& acc, const DiffSectionElement& x, const SectionElement& y);
    friend bool operator==(const DiffSectionElement&, const DiffSectionElement&) = default;

    std::string str() const;
};

DiffSectionElement derivation(const SectionElement& s);
// prime-free representative modulo the Wronskian relations, or throws NotReducible
SectionElement wronskian_reduce(const DiffSectionElement& e);
// same, by a linear solve against the relation generators in each degree
SectionElement wronskian_reduce_linear(const DiffSectionElement& e);
// true iff e is zero modulo the relations
bool is_zero_mod_relations(const DiffSectionElement& e);

// cusp-stabilizer generators
namespace cusp {
ImageTriple identity();
ImageTriple r2();    // (X,Y,Z) -> (-X, Z, Y)
ImageTriple r3();    // (X,Y,Z) -> (X, rY, r^2 Z)
ImageTriple mu6();   // (X,Y,Z) -> (-r^2 X, Z, Y), i.e. z -> -r^2 z
ImageTriple unit_action(EisensteinInteger u);  // pullback by z -> u z
}  // namespace cusp

}  // namespace picard
