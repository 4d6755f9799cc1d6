#include "picard/eisenstein.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstdlib>
#include <tuple>

namespace picard {

bool EisensteinInteger::divides(EisensteinInteger x) const {
    if (is_zero()) return x.is_zero();
    // x * conj(this) / N(this) must be integral
    EisensteinInteger t = x * conj();
    std::int64_t n = norm();
    return t.a % n == 0 && t.b % n == 0;
}

EisensteinInteger EisensteinInteger::exact_div(EisensteinInteger y) const {
    if (!y.divides(*this)) throw std::domain_error("EisensteinInteger::exact_div: not divisible");
    EisensteinInteger t = *this * y.conj();
    std::int64_t n = y.norm();
    return {t.a / n, t.b / n};
}

std::string EisensteinInteger::str() const { return Cyc(*this).str(); }

EisensteinInteger pow(EisensteinInteger x, unsigned e) {
    EisensteinInteger r{1};
    while (e--) r = r * x;
    return r;
}

std::vector<EisensteinInteger> units() {
    return {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {-1, -1}, {1, 1}};
}

std::vector<EisensteinInteger> enumerate_norm(std::int64_t n) {
    std::vector<EisensteinInteger> out;
    if (n < 0) return out;
    if (n == 0) return {EisensteinInteger{}};
    // a^2 - ab + b^2 >= 3b^2/4, so |b| <= sqrt(4n/3)
    auto bmax = static_cast<std::int64_t>(std::sqrt(4.0 * static_cast<double>(n) / 3.0)) + 1;
    for (std::int64_t b = -bmax; b <= bmax; ++b)
        for (std::int64_t a = -bmax; a <= bmax; ++a)
            if (a * a - a * b + b * b == n) out.push_back({a, b});
    return out;
}

bool is_rational_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

EisensteinInteger split_prime(std::int64_t p) {
    if (!is_rational_prime(p) || p % 3 != 1)
        throw NotSplit("split_prime: " + std::to_string(p) + " is not a prime = 1 mod 3");
    // two candidates = 1 mod 3 (nu and its conjugate); take the one with smaller |a|
    std::vector<EisensteinInteger> cands;
    for (auto x : enumerate_norm(p))
        if (is_one_mod_three(x)) cands.push_back(x);
    auto key = [](EisensteinInteger x) { return std::tuple(std::llabs(x.a), x.a, x.b); };
    return *std::min_element(cands.begin(), cands.end(),
                             [&](auto x, auto y) { return key(x) < key(y); });
}

EisensteinInteger Factorization::expand() const {
    EisensteinInteger r = unit;
    for (auto& [pi, e] : primes) r = r * pow(pi, static_cast<unsigned>(e));
    return r;
}

Factorization factor(EisensteinInteger x) {
    if (x.is_zero()) throw std::domain_error("factor: zero");
    Factorization f;
    std::int64_t n = x.norm();
    std::vector<std::int64_t> ps;
    for (std::int64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    if (n > 1) ps.push_back(n);
    std::vector<EisensteinInteger> cand;
    for (auto p : ps) {
        if (p == 3)
            cand.push_back(kSqrtM3);
        else if (p % 3 == 2)
            cand.push_back({p, 0});
        else {
            auto nu = split_prime(p);
            cand.push_back(nu);
            cand.push_back(nu.conj());
        }
    }
    for (auto pi : cand) {
        int e = 0;
        while (pi.divides(x)) {
            x = x.exact_div(pi);
            ++e;
        }
        if (e) f.primes.emplace_back(pi, e);
    }
    if (!x.is_unit()) throw std::logic_error("factor: leftover non-unit " + x.str());
    f.unit = x;
    return f;
}

// ---------------- Cyc

Cyc& Cyc::operator*=(const Cyc& o) {
    // (a+br)(c+dr) = (ac - bd) + (ad + bc - bd) r
    mpq_class bd = b * o.b;
    mpq_class na = a * o.a - bd;
    mpq_class nb = a * o.b + b * o.a - bd;
    a = std::move(na);
    b = std::move(nb);
    return *this;
}

Cyc Cyc::inverse() const {
    mpq_class n = norm();
    if (sgn(n) == 0) throw std::domain_error("Cyc: division by zero");
    Cyc c = conj();
    c.a /= n;
    c.b /= n;
    return c;
}

void addmul(Cyc& acc, const Cyc& x, const Cyc& y) {
    thread_local mpq_class t1, t2, t3;
    mpq_mul(t1.get_mpq_t(), x.a.get_mpq_t(), y.a.get_mpq_t());
    mpq_mul(t2.get_mpq_t(), x.b.get_mpq_t(), y.b.get_mpq_t());
    mpq_add(acc.a.get_mpq_t(), acc.a.get_mpq_t(), t1.get_mpq_t());
    mpq_sub(acc.a.get_mpq_t(), acc.a.get_mpq_t(), t2.get_mpq_t());
    mpq_sub(acc.b.get_mpq_t(), acc.b.get_mpq_t(), t2.get_mpq_t());
    mpq_mul(t3.get_mpq_t(), x.a.get_mpq_t(), y.b.get_mpq_t());
    mpq_add(acc.b.get_mpq_t(), acc.b.get_mpq_t(), t3.get_mpq_t());
    mpq_mul(t3.get_mpq_t(), x.b.get_mpq_t(), y.a.get_mpq_t());
    mpq_add(acc.b.get_mpq_t(), acc.b.get_mpq_t(), t3.get_mpq_t());
}

Cyc pow(Cyc x, int e) {
    if (e < 0) return pow(x.inverse(), -e);
    Cyc r(1);
    while (e) {
        if (e & 1) r *= x;
        x *= x;
        e >>= 1;
    }
    return r;
}

static bool den_is_3power(const mpz_class& d) {
    mpz_class t = d;
    while (t % 3 == 0) t /= 3;
    return t == 1;
}

bool Cyc::in_z_rho_third() const {
    return den_is_3power(a.get_den()) && den_is_3power(b.get_den());
}

bool Cyc::is_integral() const { return a.get_den() == 1 && b.get_den() == 1; }

std::string Cyc::str() const {
    if (sgn(b) == 0) return a.get_str();
    std::string rb;
    if (b == 1)
        rb = "r";
    else if (b == -1)
        rb = "-r";
    else
        rb = b.get_str() + "*r";
    if (sgn(a) == 0) return rb;
    return a.get_str() + (sgn(b) > 0 ? "+" : "") + rb;
}

Cyc Cyc::parse(std::string_view s) {
    std::string t;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) throw ParseError("empty number");
    Cyc out;
    std::size_t i = 0;
    while (i < t.size()) {
        std::size_t j = i + 1;
        while (j < t.size() && t[j] != '+' && t[j] != '-') ++j;
        std::string term = t.substr(i, j - i);
        bool is_r = !term.empty() && term.back() == 'r';
        if (is_r) {
            term.pop_back();
            if (!term.empty() && term.back() == '*') term.pop_back();
            if (term.empty() || term == "+") term = "1";
            if (term == "-") term = "-1";
        }
        if (!term.empty() && term[0] == '+') term.erase(0, 1);
        mpq_class q;
        if (term.empty() || q.set_str(term, 10) != 0) throw ParseError("bad number: " + std::string(s));
        q.canonicalize();
        (is_r ? out.b : out.a) += q;
        i = j;
    }
    return out;
}

}  // namespace picard
