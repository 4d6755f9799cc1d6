// Arithmetic in Z[r] and Q(r), r a primitive cube root of unity (r^2 = -r - 1).
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace picard {

struct NotSplit : std::domain_error {
    using std::domain_error::domain_error;
};

struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// a + b*r with machine integers; norms stay far below 2^62 for our use
struct EisensteinInteger {
    std::int64_t a = 0, b = 0;

    constexpr EisensteinInteger() = default;
    constexpr EisensteinInteger(std::int64_t a_, std::int64_t b_ = 0) : a(a_), b(b_) {}

    constexpr bool is_zero() const { return a == 0 && b == 0; }
    constexpr EisensteinInteger conj() const { return {a - b, -b}; }
    constexpr std::int64_t norm() const { return a * a - a * b + b * b; }
    constexpr std::int64_t trace() const { return 2 * a - b; }

    friend constexpr EisensteinInteger operator+(EisensteinInteger x, EisensteinInteger y) { return {x.a + y.a, x.b + y.b}; }
    friend constexpr EisensteinInteger operator-(EisensteinInteger x, EisensteinInteger y) { return {x.a - y.a, x.b - y.b}; }
    friend constexpr EisensteinInteger operator-(EisensteinInteger x) { return {-x.a, -x.b}; }
    friend constexpr EisensteinInteger operator*(EisensteinInteger x, EisensteinInteger y) {
        return {x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a - x.b * y.b};
    }
    friend constexpr bool operator==(EisensteinInteger, EisensteinInteger) = default;
    friend constexpr auto operator<=>(EisensteinInteger, EisensteinInteger) = default;

    // x / y if exact, else throws
    bool divides(EisensteinInteger x) const;
    EisensteinInteger exact_div(EisensteinInteger y) const;

    bool is_unit() const { return norm() == 1; }
    std::string str() const;
};

constexpr EisensteinInteger kRho{0, 1};
constexpr EisensteinInteger kSqrtM3{1, 2};  // sqrt(-3) = 1 + 2r

// canonical generator: a = 1 (mod 3), b = 0 (mod 3)
inline bool is_one_mod_three(EisensteinInteger x) {
    return ((x.a - 1) % 3 == 0) && (x.b % 3 == 0);
}

std::vector<EisensteinInteger> units();
std::vector<EisensteinInteger> enumerate_norm(std::int64_t n);
EisensteinInteger split_prime(std::int64_t p);
bool is_rational_prime(std::int64_t p);

struct Factorization {
    EisensteinInteger unit{1};
    std::vector<std::pair<EisensteinInteger, int>> primes;
    EisensteinInteger expand() const;
};
Factorization factor(EisensteinInteger x);

EisensteinInteger pow(EisensteinInteger x, unsigned e);

// element a + b*r of Q(r)
class Cyc {
public:
    mpq_class a, b;

    Cyc() = default;
    Cyc(long v) : a(v), b(0) {}
    Cyc(int v) : a(v), b(0) {}
    Cyc(mpq_class a_, mpq_class b_ = 0) : a(std::move(a_)), b(std::move(b_)) {}
    Cyc(const mpz_class& v) : a(v), b(0) {}
    explicit Cyc(EisensteinInteger x) : a(static_cast<long>(x.a)), b(static_cast<long>(x.b)) {}

    static Cyc rho() { return Cyc(0, 1); }
    static Cyc sqrt_m3() { return Cyc(1, 2); }

    bool is_zero() const { return sgn(a) == 0 && sgn(b) == 0; }
    bool is_rational() const { return sgn(b) == 0; }
    Cyc conj() const { return Cyc(a - b, -b); }
    mpq_class norm() const { return a * a - a * b + b * b; }
    mpq_class trace() const { return 2 * a - b; }
    Cyc inverse() const;

    Cyc& operator+=(const Cyc& o) { a += o.a; b += o.b; return *this; }
    Cyc& operator-=(const Cyc& o) { a -= o.a; b -= o.b; return *this; }
    Cyc& operator*=(const Cyc& o);
    Cyc& operator*=(const mpq_class& q) { a *= q; b *= q; return *this; }
    Cyc& operator/=(const Cyc& o) { return *this *= o.inverse(); }
    Cyc operator-() const { return Cyc(-a, -b); }

    friend Cyc operator+(Cyc x, const Cyc& y) { return x += y; }
    friend Cyc operator-(Cyc x, const Cyc& y) { return x -= y; }
    friend Cyc operator*(Cyc x, const Cyc& y) { return x *= y; }
    friend Cyc operator/(Cyc x, const Cyc& y) { return x /= y; }
    friend bool operator==(const Cyc& x, const Cyc& y) { return x.a == y.a && x.b == y.b; }

    // times r, cheaper than a general product
    Cyc times_rho() const { return Cyc(-b, a - b); }

    // integral with denominator a power of 3 (Z[r][1/3])
    bool in_z_rho_third() const;
    bool is_integral() const;

    std::string str() const;
    static Cyc parse(std::string_view s);
};

// acc += x*y without temporaries on the hot path
void addmul(Cyc& acc, const Cyc& x, const Cyc& y);

Cyc pow(Cyc x, int e);

}  // namespace picard
