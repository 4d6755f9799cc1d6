#include "picard/hecke.hpp"

#include <algorithm>
#include <sstream>

namespace picard {

namespace {

Cyc qpow(std::int64_t base, int e) {
    mpz_class b = static_cast<long>(base);
    mpz_class r = 1;
    for (int i = 0; i < std::abs(e); ++i) r *= b;
    if (e >= 0) return Cyc(mpq_class(r));
    mpq_class q(mpz_class(1), r);
    q.canonicalize();
    return Cyc(q);
}

bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

}  // namespace

// ---------------- operators

HeckeOperator HeckeOperator::t_nu(EisensteinInteger nu) {
    std::int64_t p = nu.norm();
    if (!is_prime(p) || p % 3 != 1) throw std::invalid_argument("T_nu: norm " + std::to_string(p) + " is not a prime = 1 mod 3");
    if (!is_one_mod_three(nu)) throw std::invalid_argument("T_nu: " + nu.str() + " is not 1 mod 3");
    HeckeOperator T;
    T.kind_ = Kind::Nu;
    T.nu_ = nu;
    T.p_ = p;
    return T;
}

HeckeOperator HeckeOperator::t_minus_p(std::int64_t p) {
    if (!is_prime(p) || p % 3 != 2) throw std::invalid_argument("T_-p: " + std::to_string(p) + " is not a prime = 2 mod 3");
    HeckeOperator T;
    T.kind_ = Kind::MinusP;
    T.nu_ = EisensteinInteger{-p, 0};
    T.p_ = p;
    return T;
}

HeckeOperator HeckeOperator::parse(const std::string& s) {
    std::string t;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.size() > 3 && (t[0] == 'T' || t[0] == 't') && t[1] == '(' && t.back() == ')') t = t.substr(2, t.size() - 3);
    Cyc c = Cyc::parse(t);
    if (c.a.get_den() != 1 || c.b.get_den() != 1)
        throw std::invalid_argument("hecke operator '" + s + "' is not an Eisenstein integer");
    EisensteinInteger x{c.a.get_num().get_si(), c.b.get_num().get_si()};
    if (x.b == 0 && x.a < 0) return t_minus_p(-x.a);
    if (x.b == 0 && x.a > 1 && x.a % 3 == 1 && is_prime(x.a)) return t_nu(split_prime(x.a));
    return t_nu(x);
}

std::string HeckeOperator::str() const { return "T(" + nu_.str() + ")"; }

// ---------------- application

namespace {

void need(const FJSeries& f, const HeckeOperator& T) {
    if (f.valid_to() < T.step())
        throw TruncationTooShallow(T.str() + " needs the input through w^" + std::to_string(T.step()) + ", have w^" +
                                   std::to_string(f.valid_to()));
}

// c1 m_nu(f_{n/p}) + c2 t_{conj nu}(f_{np}) + c3 t_nu m_{conj nu}(f_n)
FJSeries apply_nu(const HeckeOperator& T, const FJSeries& f, const Cyc& c1, const Cyc& c2, const Cyc& c3,
                  OperatorTable& table) {
    need(f, T);
    int p = static_cast<int>(T.p());
    EisensteinInteger nu = T.nu(), nb = nu.conj();
    int out = f.valid_to() / p;
    FJSeries g(out);
    for (int n = 0; n <= out; ++n) {
        SectionElement acc(n);
        if (n % p == 0 && !f[n / p].is_zero()) acc += table.apply_m(nu, f[n / p]) * c1;
        if (!f[n * p].is_zero()) acc += table.apply_t(nb, f[n * p]) * c2;
        if (!f[n].is_zero()) acc += table.apply_t(nu, table.apply_m(nb, f[n])) * c3;
        g[n] = std::move(acc);
    }
    return g;
}

// c1 m_{-p}(f_{n/p^2}) + (c2 (p 1(p|n) - 1)) f_n + c3 t_{-p}(f_{np^2})
FJSeries apply_minus_p(const HeckeOperator& T, const FJSeries& f, const Cyc& c1, const Cyc& c2, const Cyc& c3,
                       OperatorTable& table) {
    need(f, T);
    int p = static_cast<int>(T.p()), p2 = p * p;
    EisensteinInteger a = T.nu();
    int out = f.valid_to() / p2;
    FJSeries g(out);
    for (int n = 0; n <= out; ++n) {
        SectionElement acc(n);
        if (n % p2 == 0 && !f[n / p2].is_zero()) acc += table.apply_m(a, f[n / p2]) * c1;
        acc += f[n] * (c2 * Cyc(n % p == 0 ? p - 1 : -1));
        if (!f[n * p2].is_zero()) acc += table.apply_t(a, f[n * p2]) * c3;
        g[n] = std::move(acc);
    }
    return g;
}

}  // namespace

FJSeries apply_scalar(const HeckeOperator& T, const FJSeries& f, int k, OperatorTable& table, ScalarVariant variant) {
    std::int64_t p = T.p();
    if (T.kind() == HeckeOperator::Kind::Nu) {
        Cyc nu(T.nu()), nb(T.nu().conj());
        Cyc c1 = nu * qpow(p, k - 2);
        Cyc c2 = variant == ScalarVariant::Literal ? nu.inverse() : nb.inverse();
        Cyc c3 = pow(nb, k - 2) * nu.inverse();
        return apply_nu(T, f, c1, c2, c3, table);
    }
    Cyc c1 = qpow(-p, 2 * k - 3);
    Cyc c2 = qpow(-p, k - 3);
    Cyc c3 = Cyc(mpq_class(-1, static_cast<long>(p)));
    return apply_minus_p(T, f, c1, c2, c3, table);
}

FJSeries apply_last(const HeckeOperator& T, const FJSeries& last, int j, int k, OperatorTable& table) {
    std::int64_t p = T.p();
    if (T.kind() == HeckeOperator::Kind::Nu) {
        Cyc nu(T.nu());
        Cyc pre = nu * qpow(p, k - 2);
        return apply_nu(T, last, pre * qpow(p, j), pre * qpow(p, 1 - k), pre * pow(nu, j - k), table);
    }
    Cyc c1 = -qpow(p, 2 * j + 2 * k - 3);
    Cyc c2 = qpow(-p, k + j - 3);
    Cyc c3 = Cyc(mpq_class(-1, static_cast<long>(p)));
    return apply_minus_p(T, last, c1, c2, c3, table);
}

FJSeries apply_last(const HeckeOperator& T, const VectorFormFJ& f, OperatorTable& table) {
    return apply_last(T, f.last, f.j, f.k, table);
}

// ---------------- eigenvalues

bool EigenReport::consistent() const {
    return !residual_zero.empty() && std::all_of(residual_zero.begin(), residual_zero.end(), [](bool b) { return b; });
}

std::string EigenReport::str() const {
    std::ostringstream os;
    os << eigenvalue.str() << '|';
    for (std::size_t i = 0; i < coefficients_checked.size(); ++i) os << (i ? "," : "") << coefficients_checked[i];
    return os.str();
}

EigenReport eigen_ratio(const FJSeries& f, const FJSeries& g) {
    int vt = std::min(f.valid_to(), g.valid_to());
    EigenReport rep;
    bool found = false;
    for (int n = 0; n <= vt && !found; ++n)
        for (std::size_t i = 0; i < f[n].dim(); ++i)
            if (!f[n][i].is_zero()) {
                rep.eigenvalue = g[n][i] / f[n][i];
                found = true;
                break;
            }
    if (!found) throw AllCoefficientsZero("eigenvalue: input vanishes through w^" + std::to_string(vt));
    std::string bad;
    for (int n = 0; n <= vt; ++n) {
        rep.coefficients_checked.push_back(n);
        bool ok = g[n] == f[n] * rep.eigenvalue;
        rep.residual_zero.push_back(ok);
        if (!ok) bad += (bad.empty() ? "" : ",") + std::to_string(n);
    }
    if (!bad.empty())
        throw NotAnEigenform("ratio " + rep.eigenvalue.str() + " from the leading coefficient fails at w^" + bad);
    return rep;
}

EigenReport eigenvalue(const VectorFormFJ& f, const HeckeOperator& T, OperatorTable& table) {
    FJSeries g = f.j == 0 ? apply_scalar(T, f.last, f.k, table, ScalarVariant::VectorAtJ0) : apply_last(T, f, table);
    if (g.valid_to() < 1)
        throw TruncationTooShallow(T.str() + " on " + f.name + " certifies only w^0; raise the truncation");
    return eigen_ratio(f.last, g);
}

Cyc eisenstein_eigenvalue(int j, int k, const HeckeOperator& T) {
    std::int64_t p = T.p();
    if (T.kind() == HeckeOperator::Kind::Nu) {
        Cyc nu(T.nu()), nb(T.nu().conj());
        return (qpow(p, k - 2) + Cyc(1)) * pow(nu, j + 1) + pow(nb, j + k - 1);
    }
    Cyc inner = qpow(p, 2 * k + j - 3) + qpow(p, j + 1) + Cyc(k % 2 == 0 ? 1 : -1) * Cyc(static_cast<long>(p - 1)) * qpow(p, k + j - 3);
    return (j % 2 == 0 ? Cyc(-1) : Cyc(1)) * inner;
}

Cyc lift_eigenvalue(LiftKind kind, const Cyc& ap, int a, int b, EisensteinInteger nu) {
    Cyc n(nu), nb(nu.conj());
    if (kind == LiftKind::Kudla) return ap * pow(n, a + 1) + pow(nb, a + b + 2);
    return ap + pow(n, a + 1) * pow(nb, b + 1);
}

std::vector<mpz_class> eta_product_coefficients(int order) {
    // prod (1-q^n)^6 (1-q^{3n})^6 through q^(order-1), then shift by q
    std::vector<mpz_class> c(static_cast<std::size_t>(std::max(order, 0)), 0);
    if (order <= 0) return {0};
    c[0] = 1;
    auto times_one_minus = [&](int e) {
        for (int i = order - 1; i >= e; --i) c[i] -= c[i - e];
    };
    for (int n = 1; n < order; ++n)
        for (int r = 0; r < 6; ++r) {
            times_one_minus(n);
            if (3 * n < order) times_one_minus(3 * n);
        }
    std::vector<mpz_class> out(static_cast<std::size_t>(order) + 1, 0);
    for (int i = 0; i < order; ++i) out[i + 1] = c[i];
    return out;
}

// ---------------- spans

std::vector<Cyc> flatten(const FJSeries& s, int vt) {
    if (s.valid_to() < vt) throw TruncationTooShallow("flatten: series valid only through w^" + std::to_string(s.valid_to()));
    std::vector<Cyc> v;
    for (int n = 0; n <= vt; ++n)
        for (std::size_t i = 0; i < s[n].dim(); ++i) v.push_back(s[n][i]);
    return v;
}

SeriesSpan::SeriesSpan(const std::vector<FJSeries>& gens, int vt) : vt_(vt) {
    std::vector<std::vector<Cyc>> cols;
    for (auto& g : gens) cols.push_back(flatten(g, vt));
    std::size_t R = cols.empty() ? 0 : cols[0].size();
    // independent columns, greedily in order
    Matrix all(R, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < R; ++i) all(i, j) = cols[j][i];
    Matrix red = all;
    basis_ = rref(red);
    cols_ = Matrix(R, basis_.size());
    for (std::size_t j = 0; j < basis_.size(); ++j)
        for (std::size_t i = 0; i < R; ++i) cols_(i, j) = cols[basis_[j]][i];
    // rows on which the basis is invertible
    Matrix t = cols_.transpose();
    rows_ = rref(t);
    Matrix sq(basis_.size(), basis_.size());
    for (std::size_t a = 0; a < rows_.size(); ++a)
        for (std::size_t j = 0; j < basis_.size(); ++j) sq(a, j) = cols_(rows_[a], j);
    square_ = Solver(sq);
}

std::optional<std::vector<Cyc>> SeriesSpan::coords(const FJSeries& s) const {
    auto v = flatten(s, vt_);
    std::vector<Cyc> rhs;
    for (auto r : rows_) rhs.push_back(v[r]);
    auto x = square_.solve(rhs);
    if (!x) return std::nullopt;
    for (std::size_t i = 0; i < v.size(); ++i) {
        Cyc acc;
        for (std::size_t j = 0; j < x->size(); ++j) addmul(acc, cols_(i, j), (*x)[j]);
        if (!(acc == v[i])) return std::nullopt;
    }
    return x;
}

SpanOperator hecke_matrix(const std::vector<VectorFormFJ>& span, const HeckeOperator& T, OperatorTable& table) {
    if (span.empty()) throw std::invalid_argument("hecke_matrix: empty span");
    const auto& f0 = span[0];
    std::vector<FJSeries> gens;
    int vt = f0.valid_to();
    for (auto& f : span) {
        if (f.j != f0.j || f.k != f0.k || f.ell != f0.ell)
            throw ShapeMismatch("hecke_matrix: span members differ in weight or character");
        gens.push_back(f.last);
        vt = std::min(vt, f.valid_to());
    }
    for (auto& g : gens) g = g.truncated(vt);
    int out = vt / T.step();
    int j = f0.j, k = f0.k;
    return span_operator(
        gens,
        [&](const FJSeries& g) { return j == 0 ? apply_scalar(T, g, k, table) : apply_last(T, g, j, k, table); }, out);
}

// ---------------- exact eigen decomposition

namespace {

using Poly = std::vector<Cyc>;  // low to high

void trim(Poly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

Poly derivative(const Poly& p) {
    Poly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Cyc(static_cast<long>(i)));
    trim(d);
    return d;
}

// quotient and remainder
std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
    Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
    Cyc inv = b.back().inverse();
    while (a.size() >= b.size() && !a.empty()) {
        std::size_t s = a.size() - b.size();
        Cyc c = a.back() * inv;
        q[s] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[s + i] -= c * b[i];
        a.pop_back();
        trim(a);
    }
    trim(q);
    return {q, a};
}

Poly gcd(Poly a, Poly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Cyc inv = a.back().inverse();
        for (auto& c : a) c *= inv;
    }
    return a;
}

Cyc eval(const Poly& p, const Cyc& x) {
    Cyc r;
    for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
    return r;
}

// all complex roots of a squarefree polynomial, Durand-Kerner
std::vector<Complex> roots(const Poly& p) {
    std::size_t d = p.size() - 1;
    std::vector<Complex> c(d + 1);
    Complex lead = to_complex(p.back());
    for (std::size_t i = 0; i <= d; ++i) c[i] = to_complex(p[i]) / lead;
    Real bound = 1;
    for (std::size_t i = 0; i < d; ++i) bound = std::max(bound, Real(1) + c[i].abs());
    std::vector<Complex> z(d);
    Complex seed(Real("0.4"), Real("0.9"));
    Complex cur(1);
    for (std::size_t i = 0; i < d; ++i) {
        cur *= seed;
        z[i] = cur * bound;
    }
    Real tol = pow(Real(2), -Real(std::max(64, static_cast<int>(Real::default_precision() * 3) - 16)));
    for (int it = 0; it < 5000; ++it) {
        Real change = 0;
        for (std::size_t i = 0; i < d; ++i) {
            Complex val = c[d];
            for (std::size_t k = d; k-- > 0;) val = val * z[i] + c[k];
            Complex den(1);
            for (std::size_t k = 0; k < d; ++k)
                if (k != i) den *= z[i] - z[k];
            Complex step = val / den;
            z[i] -= step;
            change = std::max(change, step.abs() / (Real(1) + z[i].abs()));
        }
        if (change < tol) break;
    }
    return z;
}

}  // namespace

std::vector<Cyc> charpoly(const Matrix& m) {
    std::size_t n = m.rows();
    if (m.cols() != n) throw ShapeMismatch("charpoly: matrix not square");
    // Faddeev-LeVerrier
    std::vector<Cyc> c(n + 1);
    c[n] = Cyc(1);
    Matrix mk(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t i = 0; i < n; ++i) mk(i, i) += c[n - k + 1];
        mk = m * mk;
        Cyc tr;
        for (std::size_t i = 0; i < n; ++i) tr += mk(i, i);
        c[n - k] = tr * Cyc(mpq_class(-1, static_cast<long>(k)));
    }
    return c;
}

EigenDecomposition exact_eigen(const Matrix& m) {
    EigenDecomposition out;
    out.charpoly = charpoly(m);
    Poly p = out.charpoly;
    trim(p);
    std::size_t n = m.rows();
    if (n == 0) return out;
    Poly sf = divmod(p, gcd(p, derivative(p))).first;
    PrecisionScope ps(320);
    std::vector<Cyc> found;
    if (sf.size() > 1)
        for (auto& z : roots(sf)) {
            Cyc cand;
            try {
                cand = exactify(z, mpz_class(531441), pow(Real(2), -70));
            } catch (const ReconstructionFailed&) {
                continue;
            }
            if (!eval(sf, cand).is_zero()) continue;
            if (std::find(found.begin(), found.end(), cand) != found.end()) continue;
            found.push_back(cand);
        }
    int resolved = 0;
    for (auto& lam : found) {
        ExactEigenspace s;
        s.value = lam;
        Poly rest = p, lin = {-lam, Cyc(1)};
        while (rest.size() > 1) {
            auto [q, r] = divmod(rest, lin);
            if (!r.empty()) break;
            rest = q;
            ++s.algebraic_multiplicity;
        }
        Matrix a = m;
        for (std::size_t i = 0; i < n; ++i) a(i, i) -= lam;
        s.vectors = kernel(a);
        resolved += s.algebraic_multiplicity;
        out.spaces.push_back(std::move(s));
    }
    out.unresolved_degree = static_cast<int>(n) - resolved;
    return out;
}

Matrix restrict_to(const Matrix& m, const std::vector<std::vector<Cyc>>& v) {
    std::size_t n = m.rows(), r = v.size();
    Matrix vm(n, r);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < n; ++i) vm(i, j) = v[j][i];
    Solver s(vm);
    if (s.rank() < r) throw std::invalid_argument("restrict_to: vectors are dependent");
    Matrix out(r, r);
    for (std::size_t j = 0; j < r; ++j) {
        auto x = s.solve(m.apply(v[j]));
        if (!x) throw NotInvariant("restrict_to: subspace is not invariant");
        for (std::size_t i = 0; i < r; ++i) out(i, j) = (*x)[i];
    }
    return out;
}

}  // namespace picard
