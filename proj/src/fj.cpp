#include "picard/fj.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace picard {

// ---------------- FJSeries

FJSeries::FJSeries(int valid_to) {
    if (valid_to < 0) throw std::invalid_argument("FJSeries: negative truncation");
    c_.reserve(static_cast<std::size_t>(valid_to) + 1);
    for (int n = 0; n <= valid_to; ++n) c_.emplace_back(n);
}

FJSeries FJSeries::constant(const Cyc& v, int valid_to) {
    FJSeries f(valid_to);
    f[0] = SectionElement::constant(v);
    return f;
}

FJSeries FJSeries::term(const SectionElement& s, int valid_to) {
    FJSeries f(valid_to);
    if (s.degree() <= valid_to) f[s.degree()] = s;
    return f;
}

bool FJSeries::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const SectionElement& s) { return s.is_zero(); });
}

int FJSeries::order() const {
    for (std::size_t n = 0; n < c_.size(); ++n)
        if (!c_[n].is_zero()) return static_cast<int>(n);
    return -1;
}

FJSeries FJSeries::truncated(int valid_to) const {
    if (valid_to > this->valid_to()) throw std::invalid_argument("truncated: cannot extend a series");
    FJSeries f;
    f.c_.assign(c_.begin(), c_.begin() + valid_to + 1);
    return f;
}

FJSeries& FJSeries::operator+=(const FJSeries& o) {
    if (o.valid_to() < valid_to()) c_.resize(o.c_.size());
    for (std::size_t n = 0; n < c_.size(); ++n) c_[n] += o.c_[n];
    return *this;
}

FJSeries& FJSeries::operator-=(const FJSeries& o) {
    if (o.valid_to() < valid_to()) c_.resize(o.c_.size());
    for (std::size_t n = 0; n < c_.size(); ++n) c_[n] -= o.c_[n];
    return *this;
}

FJSeries& FJSeries::operator*=(const Cyc& s) {
    for (auto& x : c_) x *= s;
    return *this;
}

FJSeries FJSeries::operator-() const {
    FJSeries f = *this;
    for (auto& x : f.c_) x = -x;
    return f;
}

FJSeries operator*(const FJSeries& x, const FJSeries& y) {
    int vt = std::min(x.valid_to(), y.valid_to());
    FJSeries out(vt);
    int ox = x.order(), oy = y.order();
    if (ox < 0 || oy < 0) return out;
    for (int a = ox; a <= vt; ++a) {
        if (x[a].is_zero()) continue;
        for (int b = oy; a + b <= vt; ++b) {
            if (y[b].is_zero()) continue;
            addmul(out[a + b], x[a], y[b]);
        }
    }
    return out;
}

FJSeries mul(const FJSeries& f, const FJSeries& g) { return f * g; }

FJSeries FJSeries::pow(int e) const {
    if (e < 0) throw std::invalid_argument("FJSeries::pow: negative exponent");
    FJSeries r = constant(Cyc(1), valid_to()), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

std::string FJSeries::pretty(int upto) const {
    int top = upto < 0 ? valid_to() : std::min(upto, valid_to());
    std::string out;
    for (int n = 0; n <= top; ++n) {
        const auto& s = c_[static_cast<std::size_t>(n)];
        if (s.is_zero()) continue;
        std::string body = s.pretty();
        std::string wpart = n == 0 ? "" : (n == 1 ? "w" : "w^" + std::to_string(n));
        int nterms = 0;
        for (std::size_t i = 0; i < s.dim(); ++i) nterms += !s[i].is_zero();
        std::string term;
        if (n == 0) {
            term = body;
        } else if (nterms == 1) {
            if (body == "1") body.clear();
            if (body == "-1") body = "-";
            term = body + wpart;
        } else {
            term = "(" + body + ")" + wpart;
        }
        if (!out.empty()) {
            if (term[0] == '-') {
                out += " - " + term.substr(1);
                continue;
            }
            out += " + ";
        }
        out += term;
    }
    if (out.empty()) out = "0";
    if (top < valid_to() || upto < 0) out += " + O(w^" + std::to_string(top + 1) + ")";
    return out;
}

std::string FJSeries::serialize() const {
    std::ostringstream os;
    os << "valid_to|" << valid_to() << "\n";
    for (int n = 0; n <= valid_to(); ++n) {
        const auto& s = c_[static_cast<std::size_t>(n)];
        for (std::size_t i = 0; i < s.dim(); ++i) {
            if (s[i].is_zero()) continue;
            auto m = mono_at(n, i);
            os << n << "|" << m.a << "," << m.b << "," << m.c << "|" << s[i].str() << "\n";
        }
    }
    return os.str();
}

FJSeries FJSeries::deserialize(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line.rfind("valid_to|", 0) != 0) throw ParseError("series: missing header");
    FJSeries f(std::stoi(line.substr(9)));
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto p1 = line.find('|'), p2 = line.find('|', p1 + 1);
        if (p1 == std::string::npos || p2 == std::string::npos) throw ParseError("series: bad line '" + line + "'");
        int n = std::stoi(line.substr(0, p1));
        int a, b, c;
        if (std::sscanf(line.substr(p1 + 1, p2 - p1 - 1).c_str(), "%d,%d,%d", &a, &b, &c) != 3 || a + b + c != n || a > 2 ||
            n > f.valid_to())
            throw ParseError("series: bad monomial in '" + line + "'");
        f[n][mono_index(a, b, n)] = Cyc::parse(line.substr(p2 + 1));
    }
    return f;
}

// ---------------- DiffFJSeries

DiffFJSeries::DiffFJSeries(int valid_to) {
    for (int n = 0; n <= valid_to; ++n) c_.emplace_back(n);
}

DiffFJSeries::DiffFJSeries(const FJSeries& f) {
    for (int n = 0; n <= f.valid_to(); ++n) c_.emplace_back(f[n]);
}

DiffFJSeries DiffFJSeries::truncated(int valid_to) const {
    if (valid_to > this->valid_to()) throw std::invalid_argument("truncated: cannot extend a series");
    DiffFJSeries f;
    f.c_.assign(c_.begin(), c_.begin() + valid_to + 1);
    return f;
}

DiffFJSeries& DiffFJSeries::operator+=(const DiffFJSeries& o) {
    if (o.valid_to() < valid_to()) c_.resize(o.c_.size());
    for (std::size_t n = 0; n < c_.size(); ++n) c_[n] += o.c_[n];
    return *this;
}

DiffFJSeries& DiffFJSeries::operator-=(const DiffFJSeries& o) {
    if (o.valid_to() < valid_to()) c_.resize(o.c_.size());
    for (std::size_t n = 0; n < c_.size(); ++n) c_[n] -= o.c_[n];
    return *this;
}

DiffFJSeries& DiffFJSeries::operator*=(const Cyc& s) {
    for (auto& x : c_) x *= s;
    return *this;
}

DiffFJSeries operator*(const DiffFJSeries& x, const FJSeries& y) {
    int vt = std::min(x.valid_to(), y.valid_to());
    DiffFJSeries out(vt);
    int oy = y.order();
    if (oy < 0) return out;
    for (int a = 0; a <= vt; ++a) {
        if (x[a].is_zero()) continue;
        for (int b = oy; a + b <= vt; ++b) {
            if (y[b].is_zero()) continue;
            addmul(out[a + b], x[a], y[b]);
        }
    }
    return out;
}

// ---------------- free functions

FJSeries n_operator(const FJSeries& f) {
    FJSeries g = f;
    for (int n = 0; n <= g.valid_to(); ++n) g[n] *= Cyc(n);
    return g;
}

DiffFJSeries delta(const FJSeries& f) {
    DiffFJSeries d(f.valid_to());
    for (int n = 0; n <= f.valid_to(); ++n) d[n] = derivation(f[n]);
    return d;
}

FJSeries divide(const FJSeries& f, const FJSeries& g) {
    int n0 = g.order();
    if (n0 < 0) throw TruncationTooShallow("divide: divisor vanishes through w^" + std::to_string(g.valid_to()));
    int vt = std::min(f.valid_to(), g.valid_to()) - n0;
    if (vt < 0) throw std::invalid_argument("divide: truncation shallower than the divisor's order");
    for (int n = 0; n < n0; ++n)
        if (!f[n].is_zero()) throw NotDivisible("divide: dividend vanishes to lower order than divisor");
    Divider lead(g[n0]);
    FJSeries q(vt);
    for (int m = 0; m <= vt; ++m) {
        SectionElement r = f[m + n0];
        for (int i = 0; i < m; ++i) {
            if (q[i].is_zero() || g[m + n0 - i].is_zero()) continue;
            r -= q[i] * g[m + n0 - i];
        }
        q[m] = lead(r);
    }
    return q;
}

FJSeries substitute(const FJSeries& f, const ImageTriple& images) {
    if (images[0].degree() != 1) throw std::invalid_argument("substitute: series need degree-one images");
    FJSeries g(f.valid_to());
    for (int n = 0; n <= f.valid_to(); ++n) g[n] = substitute(f[n], images);
    return g;
}

FJSeries wronskian_reduce(const DiffFJSeries& f) {
    FJSeries g(f.valid_to());
    for (int n = 0; n <= f.valid_to(); ++n) g[n] = wronskian_reduce(f[n]);
    return g;
}

// ---------------- restriction

std::string QSeries::str() const {
    std::string out;
    for (std::size_t n = 0; n < c.size(); ++n) {
        if (c[n].is_zero()) continue;
        std::string cs = c[n].is_rational() ? c[n].str() : "(" + c[n].str() + ")";
        std::string qp = n == 0 ? "" : (n == 1 ? "q" : "q^" + std::to_string(n));
        if (n > 0 && cs == "1") cs.clear();
        if (n > 0 && cs == "-1") cs = "-";
        std::string term = cs + qp;
        if (!out.empty()) out += term[0] == '-' ? " - " + term.substr(1) : " + " + term;
        else out = term;
    }
    return out.empty() ? "0" : out;
}

QSeries restrict_to_curve(const FJSeries& f) {
    QSeries q;
    for (int n = 0; n <= f.valid_to(); ++n) q.c.push_back(ev_zero(f[n]));
    return q;
}

std::optional<Cyc> proportionality(const QSeries& a, const QSeries& b) {
    std::size_t len = std::min(a.c.size(), b.c.size());
    std::optional<Cyc> lam;
    for (std::size_t i = 0; i < len && !lam; ++i)
        if (!b.c[i].is_zero()) lam = a.c[i] / b.c[i];
    if (!lam) {
        for (std::size_t i = 0; i < len; ++i)
            if (!a.c[i].is_zero()) return std::nullopt;
        return Cyc(0);
    }
    for (std::size_t i = 0; i < len; ++i)
        if (!(a.c[i] == *lam * b.c[i])) return std::nullopt;
    return lam;
}

std::optional<Cyc> proportionality(const FJSeries& a, const FJSeries& b) {
    int len = std::min(a.valid_to(), b.valid_to());
    std::optional<Cyc> lam;
    for (int n = 0; n <= len && !lam; ++n)
        for (std::size_t i = 0; i < b[n].dim(); ++i)
            if (!b[n][i].is_zero()) {
                lam = a[n][i] / b[n][i];
                break;
            }
    if (!lam) {
        for (int n = 0; n <= len; ++n)
            if (!a[n].is_zero()) return std::nullopt;
        return Cyc(0);
    }
    for (int n = 0; n <= len; ++n)
        if (!(a[n] == b[n] * *lam)) return std::nullopt;
    return lam;
}

// ---------------- vector forms

namespace {

bool same_series(const FJSeries& a, const FJSeries& b) {
    return a.valid_to() == b.valid_to() && a == b;
}

bool same_basis(const J1Data& u, const J1Data& v) {
    if (!same_series(u.last_num, v.last_num) || !same_series(u.den, v.den)) return false;
    if (u.first_num.valid_to() != v.first_num.valid_to()) return false;
    for (int n = 0; n <= u.first_num.valid_to(); ++n)
        if (!(u.first_num[n] == v.first_num[n])) return false;
    return true;
}

bool is_one(const FJSeries& s) {
    if (!(s[0] == SectionElement::constant(Cyc(1)))) return false;
    for (int n = 1; n <= s.valid_to(); ++n)
        if (!s[n].is_zero()) return false;
    return true;
}

FJSeries one_like(int vt) { return FJSeries::constant(Cyc(1), vt); }

int mod3(int x) { return ((x % 3) + 3) % 3; }

// the j = 1 form as a single numerator pair over one denominator
J1Data flatten(const VectorFormFJ& f) {
    if (f.j != 1 || !f.pres) throw ShapeMismatch(f.name + ": need a presented j = 1 form");
    const auto& p = *f.pres;
    FJSeries common = p.den;
    std::vector<const J1Data*> bs;
    for (auto& t : p.terms) bs.push_back(&p.bases.at(static_cast<std::size_t>(t.basis)));
    // common denominator: pres den times the distinct basis dens
    std::vector<FJSeries> dens;
    for (auto* b : bs) {
        if (is_one(b->den)) continue;
        bool seen = false;
        for (auto& d : dens) seen = seen || same_series(d, b->den);
        if (!seen) dens.push_back(b->den);
    }
    for (auto& d : dens) common = common * d;
    int vt = common.valid_to();
    for (auto* b : bs) vt = std::min({vt, b->last_num.valid_to(), b->first_num.valid_to()});
    J1Data out{DiffFJSeries(vt), FJSeries(vt), common.truncated(vt)};
    for (std::size_t i = 0; i < p.terms.size(); ++i) {
        FJSeries mult = p.terms[i].coef;
        for (auto& d : dens)
            if (!same_series(d, bs[i]->den)) mult = mult * d;
        out.last_num += (mult * bs[i]->last_num).truncated(vt);
        out.first_num += (bs[i]->first_num * mult).truncated(vt);
    }
    return out;
}

}  // namespace

VectorFormFJ bracket(const FJSeries& f, int k, const FJSeries& h, int l, int ell) {
    if (k < 1 || l < 1) throw std::invalid_argument("bracket: weights must be positive");
    Cyc il = Cyc(1) / Cyc(l), ik = Cyc(1) / Cyc(k);
    VectorFormFJ v;
    v.j = 1;
    v.k = k + l + 1;
    v.ell = mod3(ell);
    v.last = f * n_operator(h) * il - h * n_operator(f) * ik;
    DiffFJSeries first = delta(h) * f * il - delta(f) * h * ik;
    int vt = v.last.valid_to();
    SymPresentation p;
    p.j = 1;
    p.bases.push_back(J1Data{first, v.last, one_like(vt)});
    p.terms.push_back({one_like(vt), 0});
    p.den = one_like(vt);
    v.pres = std::move(p);
    return v;
}

VectorFormFJ scalar_form(const std::string& name, int k, int ell, FJSeries f) {
    VectorFormFJ v;
    v.name = name;
    v.j = 0;
    v.k = k;
    v.ell = mod3(ell);
    v.last = std::move(f);
    return v;
}

VectorFormFJ scale(const VectorFormFJ& f, const FJSeries& s, int weight_s, int ell_s) {
    VectorFormFJ v = f;
    v.k += weight_s;
    v.ell = mod3(f.ell + ell_s);
    v.last = f.last * s;
    if (v.pres)
        for (auto& t : v.pres->terms) t.coef = t.coef * s;
    return v;
}

VectorFormFJ scale(const VectorFormFJ& f, const Cyc& s) {
    VectorFormFJ v = f;
    v.last *= s;
    if (v.pres)
        for (auto& t : v.pres->terms) t.coef *= s;
    return v;
}

VectorFormFJ combine(const std::vector<std::pair<FJSeries, VectorFormFJ>>& parts, int weight_coef, int ell_coef) {
    if (parts.empty()) throw std::invalid_argument("combine: nothing to combine");
    const auto& f0 = parts[0].second;
    VectorFormFJ v;
    v.j = f0.j;
    v.k = f0.k + weight_coef;
    v.ell = mod3(f0.ell + ell_coef);
    bool presented = true;
    for (auto& [s, f] : parts) {
        if (f.j != v.j || f.k != f0.k || f.ell != f0.ell) throw ShapeMismatch("combine: weights differ");
        presented = presented && f.pres.has_value();
    }
    v.last = parts[0].first * f0.last;
    for (std::size_t i = 1; i < parts.size(); ++i) v.last += parts[i].first * parts[i].second.last;
    if (!presented || v.j == 0) return v;

    // common denominator over the distinct presentation dens
    std::vector<FJSeries> dens;
    for (auto& [s, f] : parts) {
        bool seen = false;
        for (auto& d : dens) seen = seen || same_series(d, f.pres->den);
        if (!seen) dens.push_back(f.pres->den);
    }
    SymPresentation p;
    p.j = v.j;
    p.den = dens[0];
    for (std::size_t i = 1; i < dens.size(); ++i) p.den = p.den * dens[i];
    for (auto& [s, f] : parts) {
        FJSeries mult = s;
        for (auto& d : dens)
            if (!same_series(d, f.pres->den)) mult = mult * d;
        for (auto& t : f.pres->terms) {
            const J1Data& b = f.pres->bases.at(static_cast<std::size_t>(t.basis));
            int idx = -1;
            for (std::size_t q = 0; q < p.bases.size() && idx < 0; ++q)
                if (same_basis(p.bases[q], b)) idx = static_cast<int>(q);
            if (idx < 0) {
                idx = static_cast<int>(p.bases.size());
                p.bases.push_back(b);
            }
            FJSeries c = t.coef * mult;
            bool merged = false;
            for (auto& pt : p.terms)
                if (pt.basis == idx) {
                    pt.coef += c;
                    merged = true;
                }
            if (!merged) p.terms.push_back({c, idx});
        }
    }
    v.pres = std::move(p);
    return v;
}

VectorFormFJ divide(const VectorFormFJ& f, const FJSeries& g, int weight_g, int ell_g) {
    VectorFormFJ v = f;
    v.k -= weight_g;
    v.ell = mod3(f.ell - ell_g);
    v.last = divide(f.last, g);
    if (v.pres) v.pres->den = v.pres->den * g;
    return v;
}

VectorFormFJ sym_power(const VectorFormFJ& f, int j, const Cyc& coef, const FJSeries& den, int weight_den, int ell_den) {
    if (j < 1) throw std::invalid_argument("sym_power: j must be positive");
    J1Data b = flatten(f);
    VectorFormFJ v;
    v.j = j;
    v.k = j * f.k - weight_den;
    v.ell = mod3(j * f.ell - ell_den);
    FJSeries full_den = b.den.pow(j) * den;
    v.last = divide(b.last_num.pow(j) * coef, full_den);
    SymPresentation p;
    p.j = j;
    int vt = b.last_num.valid_to();
    p.terms.push_back({FJSeries::constant(coef, vt), 0});
    p.bases.push_back(std::move(b));
    p.den = den;
    v.pres = std::move(p);
    return v;
}

FJSeries pair_wedge(const J1Data& u, const J1Data& v) {
    FJSeries num = wronskian_reduce(u.first_num * v.last_num - v.first_num * u.last_num);
    if (is_one(u.den) && is_one(v.den)) return num;
    return divide(num, u.den * v.den);
}

namespace {

FJSeries raw_pair(const J1Data& u, const J1Data& v) {
    return wronskian_reduce(u.first_num * v.last_num - v.first_num * u.last_num);
}

}  // namespace

FJSeries wedge(const std::vector<VectorFormFJ>& forms) {
    if (forms.empty()) throw ShapeMismatch("wedge: no forms");
    int j = forms[0].j;
    if (static_cast<int>(forms.size()) != j + 1) throw ShapeMismatch("wedge: need j + 1 forms");
    if (j == 0) return forms[0].last;
    for (auto& f : forms)
        if (f.j != j || !f.pres || f.pres->j != j) throw ShapeMismatch("wedge: forms must be Sym^j presentations of one j");

    // distinct bases across all forms
    std::vector<const J1Data*> bases;
    std::vector<std::vector<std::pair<int, const FJSeries*>>> choice(forms.size());
    for (std::size_t i = 0; i < forms.size(); ++i)
        for (auto& t : forms[i].pres->terms) {
            const J1Data& b = forms[i].pres->bases.at(static_cast<std::size_t>(t.basis));
            int idx = -1;
            for (std::size_t q = 0; q < bases.size() && idx < 0; ++q)
                if (same_basis(*bases[q], b)) idx = static_cast<int>(q);
            if (idx < 0) {
                idx = static_cast<int>(bases.size());
                bases.push_back(&b);
            }
            choice[i].push_back({idx, &t.coef});
        }

    std::map<std::pair<int, int>, FJSeries> pairs;
    auto pw = [&](int a, int b) -> FJSeries {
        bool swap = a > b;
        auto key = swap ? std::pair{b, a} : std::pair{a, b};
        auto it = pairs.find(key);
        if (it == pairs.end()) it = pairs.emplace(key, raw_pair(*bases[key.first], *bases[key.second])).first;
        return swap ? -it->second : it->second;
    };

    std::optional<FJSeries> total;
    std::vector<std::size_t> pick(forms.size(), 0);
    while (true) {
        std::vector<int> idx;
        for (std::size_t i = 0; i < forms.size(); ++i) idx.push_back(choice[i][pick[i]].first);
        bool distinct = true;
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = a + 1; b < idx.size(); ++b) distinct = distinct && idx[a] != idx[b];
        if (distinct) {
            FJSeries term = *choice[0][pick[0]].second;
            for (std::size_t i = 1; i < forms.size(); ++i) term = term * *choice[i][pick[i]].second;
            for (std::size_t a = 0; a < idx.size(); ++a)
                for (std::size_t b = a + 1; b < idx.size(); ++b) term = term * pw(idx[a], idx[b]);
            FJSeries bden;
            bool any = false;
            for (int q : idx)
                if (!is_one(bases[static_cast<std::size_t>(q)]->den)) {
                    auto d = bases[static_cast<std::size_t>(q)]->den.pow(j);
                    bden = any ? bden * d : d;
                    any = true;
                }
            if (any) term = divide(term, bden);
            if (total) *total += term;
            else total = term;
        }
        std::size_t i = 0;
        while (i < forms.size() && ++pick[i] == choice[i].size()) pick[i++] = 0;
        if (i == forms.size()) break;
    }
    int vt = forms[0].valid_to();
    for (auto& f : forms) vt = std::min(vt, f.valid_to());
    FJSeries out = total ? *total : FJSeries(vt);
    FJSeries den;
    bool any = false;
    for (auto& f : forms)
        if (!is_one(f.pres->den)) {
            den = any ? den * f.pres->den : f.pres->den;
            any = true;
        }
    if (any) out = divide(out, den);
    return out;
}

// ---------------- constant term

namespace {

// polynomial in the free parameter l of X' = l X + p_X etc., times Y:
// Y * (base + PX X' + PY Y' + PZ Z') = (Y base - r Z^2 PX + X^2 PZ) + l Y (X PX + Y PY + Z PZ)
using LamPoly = std::vector<SectionElement>;  // index = power of l, entries scaled by Y^(#factors)

LamPoly lam_of(const DiffSectionElement& e) {
    auto y = SectionElement::Y();
    if (!e.has_prime()) return {y * e.base, SectionElement(e.degree() + 1)};
    const auto& p = e.prime;
    auto c0 = y * e.base - SectionElement::monomial(0, 0, 2, Cyc::rho()) * p[0] + SectionElement::monomial(2, 0, 0) * p[2];
    auto c1 = y * (SectionElement::X() * p[0] + y * p[1] + SectionElement::Z() * p[2]);
    return {c0, c1};
}

LamPoly lam_mul(const LamPoly& a, const LamPoly& b) {
    int deg = a[0].degree() + b[0].degree();
    LamPoly r(a.size() + b.size() - 1, SectionElement(deg));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) addmul(r[i + k], a[i], b[k]);
    return r;
}

}  // namespace

std::optional<Cyc> constant_term(const VectorFormFJ& f) {
    if (f.j == 0) return f.last[0][0];
    if (!f.pres) return std::nullopt;
    const auto& p = *f.pres;
    int j = p.j;
    // first component = sum_t coef_t first_b^j / den_b^j / den, over a common denominator
    std::vector<FJSeries> dens;
    for (auto& t : p.terms) {
        const auto& b = p.bases.at(static_cast<std::size_t>(t.basis));
        if (is_one(b.den)) continue;
        bool seen = false;
        for (auto& d : dens) seen = seen || same_series(d, b.den);
        if (!seen) dens.push_back(b.den);
    }
    FJSeries D = p.den;
    for (auto& d : dens) D = D * d.pow(j);
    int d = D.order();
    if (d < 0) return std::nullopt;
    // numerator through w^d, entries scaled by Y^j
    std::vector<LamPoly> num(static_cast<std::size_t>(d) + 1);
    for (int n = 0; n <= d; ++n) num[static_cast<std::size_t>(n)] = LamPoly(j + 1, SectionElement(n + j));
    for (auto& t : p.terms) {
        const auto& b = p.bases.at(static_cast<std::size_t>(t.basis));
        if (b.first_num.valid_to() < d) return std::nullopt;
        FJSeries mult = t.coef;
        for (auto& dd : dens)
            if (!same_series(dd, b.den)) mult = mult * dd.pow(j);
        // series of first_num^j with l-polynomial coefficients
        std::vector<LamPoly> pw;
        for (int n = 0; n <= d; ++n) pw.push_back(lam_of(b.first_num[n]));
        std::vector<LamPoly> acc = pw;
        for (int e = 1; e < j; ++e) {
            std::vector<LamPoly> nxt;
            for (int n = 0; n <= d; ++n) {
                LamPoly s(static_cast<std::size_t>(e + 2), SectionElement(n + e + 1));
                for (int a = 0; a <= n; ++a) {
                    auto pr = lam_mul(acc[static_cast<std::size_t>(a)], pw[static_cast<std::size_t>(n - a)]);
                    for (std::size_t q = 0; q < pr.size(); ++q) s[q] += pr[q];
                }
                nxt.push_back(std::move(s));
            }
            acc = std::move(nxt);
        }
        for (int n = 0; n <= d; ++n)
            for (int a = 0; a <= n; ++a) {
                if (a > mult.valid_to() || mult[a].is_zero()) continue;
                const auto& src = acc[static_cast<std::size_t>(n - a)];
                for (std::size_t q = 0; q < src.size(); ++q) addmul(num[static_cast<std::size_t>(n)][q], src[q], mult[a]);
            }
    }
    for (int n = 0; n < d; ++n)
        for (auto& s : num[static_cast<std::size_t>(n)])
            if (!s.is_zero()) return std::nullopt;
    auto& top = num[static_cast<std::size_t>(d)];
    for (std::size_t q = 1; q < top.size(); ++q)
        if (!top[q].is_zero()) return std::nullopt;
    try {
        auto q = exact_divide(top[0], SectionElement::Y().pow(j) * D[d]);
        return q[0];
    } catch (const NotDivisible&) {
        return std::nullopt;
    }
}

}  // namespace picard
