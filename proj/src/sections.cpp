#include "picard/sections.hpp"

#include "picard/linalg.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>

namespace picard {

Monomial mono_at(int n, std::size_t idx) {
    auto i = static_cast<int>(idx);
    if (n == 0) return {0, 0, 0};
    if (i <= n) return {0, i, n - i};
    i -= n + 1;
    if (i <= n - 1) return {1, i, n - 1 - i};
    i -= n;
    return {2, i, n - 2 - i};
}

SectionElement SectionElement::constant(const Cyc& v) {
    SectionElement s(0);
    s.c_[0] = v;
    return s;
}

SectionElement SectionElement::X() { return monomial(1, 0, 0); }
SectionElement SectionElement::Y() { return monomial(0, 1, 0); }
SectionElement SectionElement::Z() { return monomial(0, 0, 1); }

SectionElement SectionElement::monomial(int a, int b, int c, const Cyc& coef) {
    if (a < 0 || b < 0 || c < 0) throw std::invalid_argument("SectionElement::monomial: negative exponent");
    if (a <= 2) {
        SectionElement s(a + b + c);
        s.c_[mono_index(a, b, a + b + c)] = coef;
        return s;
    }
    // X^3 = r Y^3 - r Z^3
    return monomial(a - 3, b + 3, c, coef.times_rho()) - monomial(a - 3, b, c + 3, coef.times_rho());
}

bool SectionElement::is_zero() const {
    for (auto& x : c_)
        if (!x.is_zero()) return false;
    return true;
}

SectionElement& SectionElement::operator+=(const SectionElement& o) {
    if (o.deg_ != deg_) throw std::invalid_argument("SectionElement: degree mismatch in +");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

SectionElement& SectionElement::operator-=(const SectionElement& o) {
    if (o.deg_ != deg_) throw std::invalid_argument("SectionElement: degree mismatch in -");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

SectionElement& SectionElement::operator*=(const Cyc& s) {
    for (auto& x : c_)
        if (!x.is_zero()) x *= s;
    return *this;
}

SectionElement SectionElement::operator-() const {
    SectionElement r(deg_);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = -c_[i];
    return r;
}

namespace {

struct Term {
    int a, b;
    const Cyc* v;
};

std::vector<Term> nonzero_terms(const SectionElement& s) {
    std::vector<Term> t;
    int n = s.degree();
    for (std::size_t i = 0; i < s.dim(); ++i)
        if (!s[i].is_zero()) {
            auto m = mono_at(n, i);
            t.push_back({m.a, m.b, &s[i]});
        }
    return t;
}

}  // namespace

void addmul(SectionElement& acc, const SectionElement& x, const SectionElement& y) {
    int n = x.deg_ + y.deg_;
    if (acc.deg_ != n) throw std::invalid_argument("addmul: degree mismatch");
    if (x.deg_ < 0 || y.deg_ < 0) return;
    auto tx = nonzero_terms(x);
    auto ty = nonzero_terms(y);
    Cyc t;
    for (auto& p : tx)
        for (auto& q : ty) {
            int a = p.a + q.a, b = p.b + q.b;
            if (a <= 2) {
                addmul(acc.c_[mono_index(a, b, n)], *p.v, *q.v);
            } else {
                t = Cyc();
                addmul(t, *p.v, *q.v);
                t = t.times_rho();
                acc.c_[mono_index(a - 3, b + 3, n)] += t;
                acc.c_[mono_index(a - 3, b, n)] -= t;
            }
        }
}

SectionElement operator*(const SectionElement& x, const SectionElement& y) {
    SectionElement r(x.deg_ + y.deg_);
    addmul(r, x, y);
    return r;
}

SectionElement mul(const SectionElement& s, const SectionElement& t) { return s * t; }

SectionElement SectionElement::pow(int e) const {
    if (e < 0) throw std::invalid_argument("SectionElement::pow: negative exponent");
    SectionElement r = constant(Cyc(1));
    SectionElement b = *this;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

namespace {

std::string coef_factor(const Cyc& c) {
    std::string s = c.str();
    if (!c.is_rational() && sgn(c.a) != 0) return "(" + s + ")";
    return s;
}

std::string mono_str(const Monomial& m, bool stars) {
    std::string s;
    auto part = [&](char v, int e) {
        if (e == 0) return;
        if (stars && !s.empty()) s += '*';
        s += v;
        if (e > 1) s += "^" + std::to_string(e);
    };
    part('X', m.a);
    part('Y', m.b);
    part('Z', m.c);
    return s;
}

}  // namespace

// a ascending, Y-power descending: 27Y^2+54YZ+27Z^2
std::vector<std::size_t> print_order(int n) {
    std::vector<std::size_t> idx;
    if (n < 0) return idx;
    if (n == 0) return {0};
    for (int a = 0; a <= 2 && a <= n; ++a)
        for (int b = n - a; b >= 0; --b) idx.push_back(mono_index(a, b, n));
    return idx;
}

std::string SectionElement::str() const {
    std::string out;
    for (std::size_t i : print_order(deg_)) {
        if (c_[i].is_zero()) continue;
        if (!out.empty()) out += " + ";
        out += coef_factor(c_[i]);
        if (deg_ > 0) out += "*" + mono_str(mono_at(deg_, i), true);
    }
    return out.empty() ? "0" : out;
}

std::string SectionElement::pretty() const {
    std::string out;
    for (std::size_t i : print_order(deg_)) {
        const Cyc& c = c_[i];
        if (c.is_zero()) continue;
        std::string m = deg_ > 0 ? mono_str(mono_at(deg_, i), false) : "";
        std::string cs;
        if (!c.is_rational() && sgn(c.a) != 0)
            cs = "(" + c.str() + ")";
        else
            cs = c.str();
        if (!m.empty()) {
            if (cs == "1") cs = "";
            else if (cs == "-1") cs = "-";
        }
        std::string term = cs + m;
        if (!out.empty() && term[0] != '-') out += "+";
        out += term;
    }
    return out.empty() ? "0" : out;
}

SectionElement SectionElement::parse(std::string_view s, int degree) {
    SectionElement r(degree);
    std::string str(s);
    if (str == "0") return r;
    std::size_t pos = 0;
    while (pos <= str.size()) {
        std::size_t nxt = str.find(" + ", pos);
        std::string term = str.substr(pos, nxt == std::string::npos ? std::string::npos : nxt - pos);
        std::string coef;
        int e[3] = {0, 0, 0};
        std::stringstream ss(term);
        std::string tok;
        while (std::getline(ss, tok, '*')) {
            if (!tok.empty() && (tok[0] == 'X' || tok[0] == 'Y' || tok[0] == 'Z')) {
                int v = tok[0] == 'X' ? 0 : (tok[0] == 'Y' ? 1 : 2);
                e[v] += tok.size() > 2 && tok[1] == '^' ? std::stoi(tok.substr(2)) : 1;
            } else {
                if (!coef.empty()) coef += '*';
                coef += tok;
            }
        }
        if (coef.size() >= 2 && coef.front() == '(' && coef.back() == ')') coef = coef.substr(1, coef.size() - 2);
        if (e[0] + e[1] + e[2] != degree) throw ParseError("section term of wrong degree: " + term);
        r += monomial(e[0], e[1], e[2], Cyc::parse(coef.empty() ? "1" : coef));
        if (nxt == std::string::npos) break;
        pos = nxt + 3;
    }
    return r;
}

// ---------------- division

namespace {

// X -> r^k X, the conjugates of A over Q(r)[Y,Z]
SectionElement twist(const SectionElement& g, int k) {
    SectionElement r = g;
    int n = g.degree();
    Cyc w1 = pow(Cyc::rho(), k), w2 = w1 * w1;
    for (std::size_t i = 0; i < r.dim(); ++i) {
        int a = mono_at(n, i).a;
        if (a == 1) r[i] *= w1;
        else if (a == 2) r[i] *= w2;
    }
    return r;
}

// exact quotient of binary forms in Y, Z given by coefficient vectors indexed by the Y-exponent
std::optional<std::vector<Cyc>> binary_divide(std::vector<Cyc> f, const std::vector<Cyc>& g) {
    int df = static_cast<int>(f.size()) - 1, dg = static_cast<int>(g.size()) - 1;
    int dq = df - dg;
    if (dq < 0) return std::nullopt;
    int top = dg;
    while (top >= 0 && g[top].is_zero()) --top;
    if (top < 0) throw std::invalid_argument("binary_divide: zero divisor");
    Cyc inv = g[top].inverse();
    std::vector<Cyc> q(dq + 1);
    Cyc t;
    for (int i = df; i >= top; --i) {
        if (f[i].is_zero()) continue;
        int k = i - top;
        if (k > dq) return std::nullopt;
        q[k] = f[i] * inv;
        for (int j = 0; j <= top; ++j) {
            if (g[j].is_zero()) continue;
            t = q[k] * g[j];
            f[k + j] -= t;
        }
    }
    for (int i = 0; i < top; ++i)
        if (!f[i].is_zero()) return std::nullopt;
    return q;
}

std::vector<Cyc> x_part(const SectionElement& s, int a) {
    int n = s.degree();
    std::vector<Cyc> v(n - a + 1);
    for (int b = 0; b <= n - a; ++b) v[b] = s.coeff(a, b, n - a - b);
    return v;
}

}  // namespace

// q = f * g' * g'' / N(g), N(g) = g g' g'' free of X
Divider::Divider(const SectionElement& g) : g_(g) {
    if (g.is_zero()) throw std::invalid_argument("exact_divide: zero divisor");
    if (g.degree() > 0) {
        co_ = twist(g, 1) * twist(g, 2);
        norm_ = x_part(co_ * g, 0);
    } else {
        co_ = SectionElement::constant(g[0].inverse());
    }
}

SectionElement Divider::operator()(const SectionElement& f) const {
    int d = g_.degree();
    int m = f.degree() - d;
    if (m < 0) throw NotDivisible("exact_divide: degree of divisor too large");
    if (f.is_zero()) return SectionElement(m);
    if (d == 0) return f * co_[0];
    auto num = f * co_;
    SectionElement q(m);
    for (int a = 0; a <= 2 && a <= m; ++a) {
        auto r = binary_divide(x_part(num, a), norm_);
        if (!r) throw NotDivisible("exact_divide: no solution");
        for (int b = 0; b <= m - a; ++b) q[mono_index(a, b, m)] = (*r)[b];
    }
    for (int a = m + 1; a <= 2; ++a)
        for (auto& c : x_part(num, a))
            if (!c.is_zero()) throw NotDivisible("exact_divide: no solution");
    return q;
}

SectionElement exact_divide(const SectionElement& f, const SectionElement& g) { return Divider(g)(f); }

SectionElement exact_divide_linear(const SectionElement& f, const SectionElement& g) {
    if (g.is_zero()) throw std::invalid_argument("exact_divide: zero divisor");
    int m = f.degree() - g.degree();
    if (m < 0) throw NotDivisible("exact_divide: degree of divisor too large");
    Matrix a(f.dim(), graded_dim(m));
    for (std::size_t j = 0; j < graded_dim(m); ++j) {
        auto mo = mono_at(m, j);
        auto col = SectionElement::monomial(mo.a, mo.b, mo.c) * g;
        for (std::size_t i = 0; i < f.dim(); ++i) a(i, j) = col[i];
    }
    auto sol = Solver(a).solve(f.coeffs());
    if (!sol) throw NotDivisible("exact_divide: no solution");
    SectionElement q(m);
    for (std::size_t j = 0; j < q.dim(); ++j) q[j] = (*sol)[j];
    if (!(q * g == f)) throw NotDivisible("exact_divide: residual check failed");
    return q;
}

// ---------------- substitution

void check_relation(const ImageTriple& im) {
    int d = im[0].degree();
    if (im[1].degree() != d || im[2].degree() != d) throw RelationViolated("image degrees differ");
    auto lhs = im[0].pow(3);
    auto rhs = (im[1].pow(3) - im[2].pow(3)) * Cyc::rho();
    if (!(lhs == rhs)) throw RelationViolated("images violate X^3 = r(Y^3 - Z^3)");
}

SectionElement substitute(const SectionElement& s, const ImageTriple& im) {
    int n = s.degree();
    int d = im[0].degree();
    SectionElement out(n * d);
    if (n == 0) {
        out[0] = s[0];
        return out;
    }
    // powers of Y and Z images, shared by all monomials
    std::vector<SectionElement> yp{SectionElement::constant(1)}, zp{SectionElement::constant(1)};
    for (int i = 1; i <= n; ++i) {
        yp.push_back(yp.back() * im[1]);
        zp.push_back(zp.back() * im[2]);
    }
    SectionElement xp = SectionElement::constant(1);
    for (int a = 0; a <= 2 && a <= n; ++a) {
        // inner sum over b for fixed a, built Horner-free but with shared powers
        SectionElement inner((n - a) * d);
        bool any = false;
        for (int b = 0; b <= n - a; ++b) {
            const Cyc& c = s.coeff(a, b, n - a - b);
            if (c.is_zero()) continue;
            any = true;
            SectionElement t = yp[b] * zp[n - a - b];
            t *= c;
            inner += t;
        }
        if (any) addmul(out, xp, inner);
        xp = xp * im[0];
    }
    return out;
}

ImageTriple compose_images(const ImageTriple& outer, const ImageTriple& inner) {
    return {substitute(inner[0], outer), substitute(inner[1], outer), substitute(inner[2], outer)};
}

Cyc ev_zero(const SectionElement& s) {
    Cyc r;
    int n = s.degree();
    if (n < 0) return r;
    for (int b = 0; b <= n; ++b) r += s.coeff(0, b, n - b);
    return r;
}

// ---------------- prime-linear elements

DiffSectionElement::DiffSectionElement(int degree)
    : base(degree), prime{SectionElement(degree - 1), SectionElement(degree - 1), SectionElement(degree - 1)} {}

DiffSectionElement::DiffSectionElement(SectionElement b) : DiffSectionElement(b.degree()) { base = std::move(b); }

bool DiffSectionElement::has_prime() const {
    for (auto& p : prime)
        if (!p.is_zero()) return true;
    return false;
}

DiffSectionElement& DiffSectionElement::operator+=(const DiffSectionElement& o) {
    base += o.base;
    for (int i = 0; i < 3; ++i) prime[i] += o.prime[i];
    return *this;
}

DiffSectionElement& DiffSectionElement::operator-=(const DiffSectionElement& o) {
    base -= o.base;
    for (int i = 0; i < 3; ++i) prime[i] -= o.prime[i];
    return *this;
}

DiffSectionElement& DiffSectionElement::operator*=(const Cyc& s) {
    base *= s;
    for (auto& p : prime) p *= s;
    return *this;
}

void addmul(DiffSectionElement& acc, const DiffSectionElement& x, const SectionElement& y) {
    addmul(acc.base, x.base, y);
    for (int i = 0; i < 3; ++i) addmul(acc.prime[i], x.prime[i], y);
}

DiffSectionElement operator*(const DiffSectionElement& x, const SectionElement& y) {
    DiffSectionElement r(x.degree() + y.degree());
    addmul(r, x, y);
    return r;
}

std::string DiffSectionElement::str() const {
    std::string s = base.str();
    const char* names[3] = {"X'", "Y'", "Z'"};
    for (int i = 0; i < 3; ++i)
        if (!prime[i].is_zero()) s += " + [" + prime[i].str() + "]*" + names[i];
    return s;
}

DiffSectionElement derivation(const SectionElement& s) {
    int n = s.degree();
    DiffSectionElement d(n);
    if (n <= 0) return d;
    for (std::size_t i = 0; i < s.dim(); ++i) {
        if (s[i].is_zero()) continue;
        auto m = mono_at(n, i);
        if (m.a) d.prime[0] += SectionElement::monomial(m.a - 1, m.b, m.c, s[i] * Cyc(m.a));
        if (m.b) d.prime[1] += SectionElement::monomial(m.a, m.b - 1, m.c, s[i] * Cyc(m.b));
        if (m.c) d.prime[2] += SectionElement::monomial(m.a, m.b, m.c - 1, s[i] * Cyc(m.c));
    }
    return d;
}

namespace {

// Relations with kappa = 1:
//   YZ' - Y'Z = X^2,  ZX' - Z'X = -r Y^2,  XY' - X'Y = r Z^2,
//   X^2 X' - r Y^2 Y' + r Z^2 Z' = 0.
std::vector<DiffSectionElement> relation_generators() {
    using S = SectionElement;
    std::vector<DiffSectionElement> g(4);
    g[0] = DiffSectionElement(2);
    g[0].prime[1] = -S::Z();
    g[0].prime[2] = S::Y();
    g[0].base = -S::monomial(2, 0, 0);
    g[1] = DiffSectionElement(2);
    g[1].prime[0] = S::Z();
    g[1].prime[2] = -S::X();
    g[1].base = S::monomial(0, 2, 0, Cyc::rho());
    g[2] = DiffSectionElement(2);
    g[2].prime[0] = -S::Y();
    g[2].prime[1] = S::X();
    g[2].base = S::monomial(0, 0, 2, -Cyc::rho());
    g[3] = DiffSectionElement(3);
    g[3].prime[0] = S::monomial(2, 0, 0);
    g[3].prime[1] = S::monomial(0, 2, 0, -Cyc::rho());
    g[3].prime[2] = S::monomial(0, 0, 2, Cyc::rho());
    return g;
}

struct Reducer {
    int n;
    Solver solver;
    Matrix base_of;  // base part of each unknown's generator multiple
};

std::shared_ptr<const Reducer> reducer_for(int n) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const Reducer>> cache;
    {
        std::lock_guard lk(mu);
        if (auto it = cache.find(n); it != cache.end()) return it->second;
    }
    auto gens = relation_generators();
    std::vector<DiffSectionElement> cols;
    for (auto& g : gens) {
        int m = n - g.degree();
        for (std::size_t j = 0; j < graded_dim(m); ++j) {
            auto mo = mono_at(m, j);
            cols.push_back(g * SectionElement::monomial(mo.a, mo.b, mo.c));
        }
    }
    std::size_t pd = graded_dim(n - 1);
    Matrix m(3 * pd, cols.size());
    Matrix b(graded_dim(n), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        for (int v = 0; v < 3; ++v)
            for (std::size_t i = 0; i < pd; ++i) m(v * pd + i, j) = cols[j].prime[v][i];
        for (std::size_t i = 0; i < graded_dim(n); ++i) b(i, j) = cols[j].base[i];
    }
    auto r = std::make_shared<Reducer>(Reducer{n, Solver(m), std::move(b)});
    std::lock_guard lk(mu);
    return cache.emplace(n, std::move(r)).first->second;
}

}  // namespace

SectionElement wronskian_reduce_linear(const DiffSectionElement& e) {
    if (!e.has_prime()) return e.base;
    int n = e.degree();
    auto red = reducer_for(n);
    std::size_t pd = graded_dim(n - 1);
    std::vector<Cyc> v(3 * pd);
    for (int k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < pd; ++i) v[k * pd + i] = e.prime[k][i];
    auto sol = red->solver.solve(v);
    if (!sol) throw NotReducible("wronskian_reduce: not congruent to a prime-free section");
    auto corr = red->base_of.apply(*sol);
    SectionElement out = e.base;
    for (std::size_t i = 0; i < out.dim(); ++i) out[i] -= corr[i];
    return out;
}

// (X',Y',Z') = lambda (X,Y,Z) + particular solution, lambda transcendental; so P.(X',Y',Z')
// is prime-free iff X PX + Y PY + Z PZ = 0, and then equals (-r Z^2 PX + X^2 PZ) / Y.
SectionElement wronskian_reduce(const DiffSectionElement& e) {
    if (!e.has_prime()) return e.base;
    using S = SectionElement;
    const auto& p = e.prime;
    auto euler = S::X() * p[0] + S::Y() * p[1] + S::Z() * p[2];
    if (!euler.is_zero()) throw NotReducible("wronskian_reduce: not congruent to a prime-free section");
    int n = e.degree();
    auto num = S::monomial(2, 0, 0) * p[2] - S::monomial(0, 0, 2, Cyc::rho()) * p[0];
    // num is divisible by Y: shift the Y exponent down
    SectionElement out = e.base;
    for (int a = 0; a <= 2 && a <= n + 1; ++a)
        for (int b = 0; b <= n + 1 - a; ++b) {
            const Cyc& c = num.coeff(a, b, n + 1 - a - b);
            if (c.is_zero()) continue;
            if (b == 0) throw NotReducible("wronskian_reduce: quotient by Y failed");
            out[mono_index(a, b - 1, n)] += c;
        }
    return out;
}

bool is_zero_mod_relations(const DiffSectionElement& e) {
    try {
        return wronskian_reduce(e).is_zero();
    } catch (const NotReducible&) {
        return false;
    }
}

// ---------------- cusp stabilizer

namespace cusp {

ImageTriple identity() { return {SectionElement::X(), SectionElement::Y(), SectionElement::Z()}; }

ImageTriple r2() { return {-SectionElement::X(), SectionElement::Z(), SectionElement::Y()}; }

ImageTriple r3() {
    return {SectionElement::X(), SectionElement::Y() * Cyc::rho(), SectionElement::Z() * (Cyc::rho() * Cyc::rho())};
}

ImageTriple mu6() { return unit_action({1, 1}); }

ImageTriple unit_action(EisensteinInteger u) {
    if (!u.is_unit()) throw std::invalid_argument("unit_action: not a unit");
    // u = (-r^2)^k; odd k swap Y and Z
    bool odd = u == EisensteinInteger{1, 1} || u == EisensteinInteger{-1, 0} || u == EisensteinInteger{0, -1};
    auto x = SectionElement::X() * Cyc(u);
    if (odd) return {x, SectionElement::Z(), SectionElement::Y()};
    return {x, SectionElement::Y(), SectionElement::Z()};
}

}  // namespace cusp

}  // namespace picard
