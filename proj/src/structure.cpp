#include "picard/structure.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace picard {

namespace {

void need_k(bool ok, const std::string& what) {
    if (!ok) throw OutOfStatedRange(what);
}

}  // namespace

const std::vector<std::string>& dim_families() {
    static const std::vector<std::string> f = {"M_gamma1", "S1_gamma1", "S1", "M0", "S2", "M2_det2", "M3", "S3"};
    return f;
}

int dim_formula(const std::string& family, int j, int k, int ell) {
    if (family == "M_gamma1") {
        need_k(j >= 0 && j <= 3, "M_gamma1: the constant c is stated for 0 <= j <= 3");
        need_k(j + 3 * k > 4, "M_gamma1: stated for j + 3k > 4");
        static const int c[4] = {4, 2, 2, 4};
        return 3 * (k - 1) * (j + 1) * (j + k) / 2 + j * (j + 1) * (j + 2) / 3 + c[j];
    }
    if (family == "S1_gamma1") {
        need_k(k >= 1, "S1_gamma1: stated for k >= 1");
        return 3 * k * k - 3;
    }
    if (family == "S1") {
        need_k(k >= 1, "S1: stated for k >= 1");
        switch (ell) {
            case 0: return k * k - 1;
            case 1: return (k + 1) * (k + 1) - 4;
            case 2: return (k - 1) * (k - 1);
        }
        throw OutOfStatedRange("S1: ell must be 0, 1 or 2");
    }
    if (family == "M0") {
        need_k(k >= 0, "M0: k >= 0");
        return (k + 1) * (k + 2) / 2;
    }
    if (family == "S2") {
        need_k(k >= 1, "S2: stated for k >= 1");
        return 3 * k * (k + 1) / 2;
    }
    if (family == "M2_det2") {
        need_k(k >= 0, "M2_det2: k >= 0");
        return (3 * k * k + 3 * k + 2) / 2;
    }
    if (family == "M3") {
        need_k(k >= 0, "M3: k >= 0");
        return 2 * k * k + 6 * k + 4;
    }
    if (family == "S3") {
        need_k(k >= 0, "S3: k >= 0");
        return 2 * k * k + 6 * k;
    }
    throw OutOfStatedRange("unknown dimension family '" + family + "'");
}

int dim_step(int j, int k, int ell) {
    need_k(j >= 0 && ell >= 0 && ell <= 2, "dim_step: j >= 0, ell in 0..2");
    // (j+1)/2 ((k+1)^2 - k^2) + ((j^2-1)/2 + eps), times 2 to stay integral
    int eps = 0;
    if (j % 3 != 2) {
        if (ell == 2) eps = -2;
        else if (j % 3 == ell) eps = 2;
    }
    int twice = (j + 1) * (2 * k + 1) + (j * j - 1) + 2 * eps;
    return twice / 2;
}

// ---------------- products and ranks

namespace {

std::vector<std::vector<int>> monomials(int degree) {
    std::vector<std::vector<int>> out;
    for (int a = degree; a >= 0; --a)
        for (int b = degree - a; b >= 0; --b) out.push_back({a, b, degree - a - b});
    return out;
}

std::vector<Generator> uniform(const std::vector<std::string>& names, int degree) {
    if (degree < 0) throw std::invalid_argument("product_span: negative degree");
    std::vector<Generator> g;
    for (auto& n : names) g.push_back({n, degree});
    return g;
}

void guard(Catalog& cat, const std::vector<Generator>& generators, int vt) {
    int deg = 0, order = 0;
    for (auto& g : generators) {
        if (g.degree < 0) continue;
        deg = std::max(deg, g.degree);
        order = std::max(order, cat.last(g.name).order());
    }
    int need = 3 * deg + order + 2;
    if (vt < need)
        throw TruncationAmbiguous("rank at w^" + std::to_string(vt) + " is inconclusive; need w^" + std::to_string(need));
}

}  // namespace

ProductSpan product_span(Catalog& cat, const std::vector<Generator>& generators) {
    ProductSpan out;
    int vt = cat.truncation();
    for (auto& g : generators)
        if (g.degree >= 0) vt = std::min(vt, cat.get(g.name).valid_to());
    FJSeries phi[3] = {cat.last("phi0").truncated(vt), cat.last("phi1").truncated(vt), cat.last("phi2").truncated(vt)};
    for (std::size_t gi = 0; gi < generators.size(); ++gi) {
        if (generators[gi].degree < 0) continue;
        FJSeries g = cat.last(generators[gi].name).truncated(vt);
        for (auto& m : monomials(generators[gi].degree)) {
            FJSeries s = g;
            for (int i = 0; i < 3; ++i)
                for (int e = 0; e < m[i]; ++e) s = s * phi[i];
            out.terms.push_back({gi, m});
            out.series.push_back(std::move(s));
        }
    }
    out.valid_to = vt;
    return out;
}

ProductSpan product_span(Catalog& cat, const std::vector<std::string>& generators, int degree) {
    return product_span(cat, uniform(generators, degree));
}

RankResult rank_of_span(Catalog& cat, const std::vector<Generator>& generators) {
    auto ps = product_span(cat, generators);
    guard(cat, generators, ps.valid_to);
    if (ps.series.empty()) return {0, 0, ps.valid_to};
    SeriesSpan full(ps.series, ps.valid_to);
    SeriesSpan lower(ps.series, ps.valid_to - 2);
    if (lower.rank() != full.rank())
        throw TruncationAmbiguous("rank grows from " + std::to_string(lower.rank()) + " to " + std::to_string(full.rank()) +
                                  " within the last two orders");
    return {full.rank(), ps.series.size(), ps.valid_to};
}

RankResult rank_of_span(Catalog& cat, const std::vector<std::string>& generators, int degree) {
    return rank_of_span(cat, uniform(generators, degree));
}

KernelResult kernel_of_span(Catalog& cat, const std::vector<Generator>& generators) {
    KernelResult out;
    out.span = product_span(cat, generators);
    guard(cat, generators, out.span.valid_to);
    std::vector<std::vector<Cyc>> cols;
    for (auto& s : out.span.series) cols.push_back(flatten(s, out.span.valid_to));
    std::size_t R = cols.empty() ? 0 : cols[0].size();
    Matrix m(R, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < R; ++i) m(i, j) = cols[j][i];
    out.relations = kernel(std::move(m));
    return out;
}

KernelResult kernel_of_span(Catalog& cat, const std::vector<std::string>& generators, int degree) {
    return kernel_of_span(cat, uniform(generators, degree));
}

bool in_kernel(const KernelResult& k, const std::vector<Cyc>& combination) {
    std::size_t n = combination.size();
    if (n != k.span.series.size()) throw ShapeMismatch("in_kernel: combination has the wrong length");
    Matrix m(n, k.relations.size() + 1);
    for (std::size_t j = 0; j < k.relations.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) m(i, j) = k.relations[j][i];
    for (std::size_t i = 0; i < n; ++i) m(i, k.relations.size()) = combination[i];
    return rank(m) == k.relations.size();
}

// ---------------- S3

std::string S3Character::str() const {
    return std::to_string(trivial) + " triv + " + std::to_string(sign) + " sign + " + std::to_string(standard) + " std";
}

const std::vector<std::string>& s4_irreps() {
    static const std::vector<std::string> v = {"s[4]", "s[3,1]", "s[2,2]", "s[2,1,1]", "s[1,1,1,1]"};
    return v;
}

S3Character s3_restriction(const std::string& s4_irrep) {
    static const std::map<std::string, S3Character> t = {{"s[4]", {1, 0, 0}},
                                                         {"s[3,1]", {1, 0, 1}},
                                                         {"s[2,2]", {0, 0, 1}},
                                                         {"s[2,1,1]", {0, 1, 1}},
                                                         {"s[1,1,1,1]", {0, 1, 0}}};
    auto it = t.find(s4_irrep);
    if (it == t.end()) throw std::invalid_argument("unknown S4 irreducible '" + s4_irrep + "'");
    return it->second;
}

std::vector<std::string> s4_candidates(const S3Character& c) {
    std::vector<std::string> out;
    for (auto& n : s4_irreps())
        if (s3_restriction(n) == c) out.push_back(n);
    return out;
}

S3Action s3_action(const std::vector<VectorFormFJ>& span) {
    if (span.empty()) throw std::invalid_argument("s3_action: empty span");
    std::vector<FJSeries> gens;
    int vt = span[0].valid_to();
    for (auto& f : span) {
        if (f.j != span[0].j || f.k != span[0].k) throw ShapeMismatch("s3_action: span members differ in weight");
        vt = std::min(vt, f.valid_to());
    }
    for (auto& f : span) gens.push_back(f.last.truncated(vt));
    bool odd = (span[0].k + span[0].j) % 2 != 0;
    auto r2 = [&](const FJSeries& s) {
        FJSeries t = substitute(s, cusp::r2());
        return odd ? -t : t;
    };
    auto r3 = [&](const FJSeries& s) { return substitute(s, cusp::r3()); };
    try {
        return {span_operator(gens, r2, vt), span_operator(gens, r3, vt)};
    } catch (const NotInvariant& e) {
        throw NotClosed(std::string("s3_action: ") + e.what());
    }
}

S3Character s3_character(const S3Action& act, const std::vector<std::vector<Cyc>>& v) {
    Matrix a2 = restrict_to(act.r2.matrix, v), a3 = restrict_to(act.r3.matrix, v);
    Cyc t2, t3;
    for (std::size_t i = 0; i < v.size(); ++i) {
        t2 += a2(i, i);
        t3 += a3(i, i);
    }
    if (!t2.is_rational() || !t3.is_rational() || t2.a.get_den() != 1 || t3.a.get_den() != 1)
        throw NotClosed("s3_character: traces " + t2.str() + ", " + t3.str() + " are not rational integers");
    int tr2 = static_cast<int>(t2.a.get_num().get_si()), tr3 = static_cast<int>(t3.a.get_num().get_si());
    int d = static_cast<int>(v.size());
    // d = a + b + 2c, tr R2 = a - b, tr R3 = a + b - c
    S3Character c;
    if ((d - tr3) % 3 != 0) throw NotClosed("s3_character: inconsistent traces");
    c.standard = (d - tr3) / 3;
    int ab = tr3 + c.standard;
    if ((ab + tr2) % 2 != 0) throw NotClosed("s3_character: inconsistent traces");
    c.trivial = (ab + tr2) / 2;
    c.sign = (ab - tr2) / 2;
    if (c.trivial < 0 || c.sign < 0 || c.standard < 0) throw NotClosed("s3_character: negative multiplicity");
    return c;
}

S3Character isotypic_decompose(const std::vector<VectorFormFJ>& span) {
    auto act = s3_action(span);
    std::size_t r = act.r2.basis.size();
    std::vector<std::vector<Cyc>> all(r, std::vector<Cyc>(r));
    for (std::size_t i = 0; i < r; ++i) all[i][i] = Cyc(1);
    return s3_character(act, all);
}

// ---------------- checks

namespace {

struct Check {
    std::string id;
    std::string anchor;
    std::function<void(Catalog&, IdentityReport&)> run;
};

void note(IdentityReport& r, const std::string& what, bool ok) {
    r.details.push_back(std::string(ok ? "ok: " : "FAIL: ") + what);
    if (!ok) r.pass = false;
}

std::vector<Generator> gens(std::initializer_list<const char*> names, int degree) {
    std::vector<Generator> g;
    for (auto* n : names) g.push_back({n, degree});
    return g;
}

// rank equals the formula, and when free also no relations
Check rank_check(const std::string& id, const std::string& anchor, std::vector<Generator> g, int expected, bool free_module) {
    return {id, anchor, [g, expected, free_module](Catalog& cat, IdentityReport& r) {
                auto rr = rank_of_span(cat, g);
                note(r,
                     "rank " + std::to_string(rr.rank) + " of " + std::to_string(rr.products) + " products through w^" +
                         std::to_string(rr.valid_to) + ", formula " + std::to_string(expected),
                     static_cast<int>(rr.rank) == expected);
                if (free_module)
                    note(r, "no relations (" + std::to_string(rr.products - rr.rank) + " found)", rr.rank == rr.products);
            }};
}

// position of generator gi times phi_m in a degree-1 product span
std::size_t slot(std::size_t gi, int m) { return gi * 3 + static_cast<std::size_t>(m); }

Check relation_check(const std::string& id, const std::string& anchor, std::vector<Generator> g,
                     std::vector<std::pair<std::size_t, Cyc>> entries, int expected_kernel) {
    return {id, anchor, [g, entries, expected_kernel](Catalog& cat, IdentityReport& r) {
                auto k = kernel_of_span(cat, g);
                std::vector<Cyc> v(k.span.series.size());
                for (auto& [i, c] : entries) v.at(i) += c;
                note(r, "relation lies in the kernel (dimension " + std::to_string(k.relations.size()) + ")", in_kernel(k, v));
                if (expected_kernel >= 0)
                    note(r, "kernel dimension " + std::to_string(k.relations.size()) + ", expected " + std::to_string(expected_kernel),
                         static_cast<int>(k.relations.size()) == expected_kernel);
            }};
}

Check character_check(const std::string& id, const std::string& anchor, std::vector<std::string> names, S3Character want) {
    return {id, anchor, [names, want](Catalog& cat, IdentityReport& r) {
                std::vector<VectorFormFJ> span;
                for (auto& n : names) span.push_back(cat.get(n));
                auto c = isotypic_decompose(span);
                auto cands = s4_candidates(c);
                std::string which;
                for (auto& x : cands) which += (which.empty() ? "" : ",") + x;
                note(r, "S3 character " + c.str() + (which.empty() ? "" : " (restriction of " + which + ")"), c == want);
            }};
}

const std::vector<Check>& checks() {
    static const std::vector<Check> v = [] {
        std::vector<Check> c;
        for (int k = 2; k <= 4; ++k)
            c.push_back(rank_check("rank_s1_l0_k" + std::to_string(k), "S_{1,3k+1}, trivial character",
                                   gens({"big_phi0", "big_phi1", "big_phi2"}, k - 2), dim_formula("S1", 1, k, 0), false));
        for (int k = 2; k <= 3; ++k)
            c.push_back(rank_check("rank_s1_l1_k" + std::to_string(k), "S_{1,3k+1}, character det",
                                   gens({"gamma12", "gamma13", "gamma14", "gamma23", "gamma24", "gamma34"}, k - 2),
                                   dim_formula("S1", 1, k, 1), false));
        for (int k = 2; k <= 4; ++k)
            c.push_back(rank_check("rank_s1_l2_k" + std::to_string(k), "S_{1,3k+1}, character det^2, free on Psi1, Psi2",
                                   {{"psi1", k - 2}, {"psi2", k - 3}}, dim_formula("S1", 1, k, 2), true));
        for (int k = 1; k <= 3; ++k)
            c.push_back(rank_check("rank_s2_k" + std::to_string(k), "S_{2,3k+2}, free on D_i",
                                   gens({"d0", "d1", "d2"}, k - 1), dim_formula("S2", 2, k), true));
        for (int k = 0; k <= 3; ++k)
            c.push_back(rank_check("rank_m2_det2_k" + std::to_string(k), "M_{2,3k+2}(det^2), free on K2, K5, K8",
                                   {{"k2", k}, {"k5", k - 1}, {"k8", k - 2}}, dim_formula("M2_det2", 2, k), true));
        for (int k = 0; k <= 3; ++k)
            c.push_back(rank_check("rank_m3_k" + std::to_string(k), "M_{3,3k+3}, free on E_0..E_3",
                                   gens({"e33_0", "e33_1", "e33_2", "e33_3"}, k), dim_formula("M3", 3, k), true));
        for (int k = 0; k <= 3; ++k)
            c.push_back(rank_check("free_d_prime_k" + std::to_string(k), "D'_i generate a free module",
                                   gens({"d0p", "d1p", "d2p"}, k), 3 * dim_formula("M0", 0, k), true));
        c.push_back(relation_check("kernel_phi_Phi", "sum phi_i Phi_i = 0 is the only relation in degree 1",
                                   gens({"big_phi0", "big_phi1", "big_phi2"}, 1),
                                   {{slot(0, 0), Cyc(1)}, {slot(1, 1), Cyc(1)}, {slot(2, 2), Cyc(1)}}, 1));
        c.push_back(relation_check("kernel_r4", "R4: phi_0 G_0 + phi_1 G_1 + phi_2 G_2 = 0",
                                   gens({"g0", "g1", "g2", "h1", "h2", "j0"}, 1),
                                   {{slot(0, 0), Cyc(1)}, {slot(1, 1), Cyc(1)}, {slot(2, 2), Cyc(1)}}, -1));
        c.push_back(relation_check("kernel_r5", "R5: phi_1 K02 - phi_0 K12 - (phi_2 - phi_0) K23 + (phi_1 - phi_0) K13 = 0",
                                   gens({"k02", "k12", "k23", "k13"}, 1),
                                   {{slot(0, 1), Cyc(1)},
                                    {slot(1, 0), Cyc(-1)},
                                    {slot(2, 2), Cyc(-1)},
                                    {slot(2, 0), Cyc(1)},
                                    {slot(3, 1), Cyc(1)},
                                    {slot(3, 0), Cyc(-1)}},
                                   -1));
        c.push_back({"dim_gamma1_sum", "Gamma_1 count is the sum over the three characters", [](Catalog&, IdentityReport& r) {
                         for (int k = 1; k <= 8; ++k) {
                             int g = dim_formula("S1_gamma1", 1, k), s = 0;
                             for (int l = 0; l < 3; ++l) s += dim_formula("S1", 1, k, l);
                             note(r, "k=" + std::to_string(k) + ": " + std::to_string(g) + " = " + std::to_string(s), g == s);
                         }
                     }});
        c.push_back({"dim_step_gamma1", "first differences of the Gamma_1 formula against the per-character steps",
                     [](Catalog&, IdentityReport& r) {
                         for (int j = 0; j <= 3; ++j)
                             for (int k = 2; k <= 8; ++k) {
                                 int d = dim_formula("M_gamma1", j, k + 1) - dim_formula("M_gamma1", j, k), s = 0;
                                 for (int l = 0; l < 3; ++l) s += dim_step(j, k, l);
                                 note(r, "j=" + std::to_string(j) + " k=" + std::to_string(k) + ": " + std::to_string(d) + " = " +
                                             std::to_string(s),
                                      d == s);
                             }
                     }});
        c.push_back(character_check("s3_phi", "phi_i span s[2,1,1]", {"phi0", "phi1", "phi2"}, s3_restriction("s[2,1,1]")));
        c.push_back(character_check("s3_zeta", "zeta spans the sign character", {"zeta"}, s3_restriction("s[1,1,1,1]")));
        c.push_back(character_check("s3_big_phi", "Phi_i span s[2,1,1]", {"big_phi0", "big_phi1", "big_phi2"},
                                    s3_restriction("s[2,1,1]")));
        c.push_back(character_check("s3_k2", "K2 is invariant", {"k2"}, s3_restriction("s[4]")));
        c.push_back(character_check("s3_d", "D_i span s[3,1]", {"d0", "d1", "d2"}, s3_restriction("s[3,1]")));
        c.push_back(character_check("s3_d_prime", "D'_i span s[3,1]", {"d0p", "d1p", "d2p"}, s3_restriction("s[3,1]")));
        return c;
    }();
    return v;
}

}  // namespace

const std::vector<std::string>& structure_check_names() {
    static const std::vector<std::string> v = [] {
        std::vector<std::string> n;
        for (auto& c : checks()) n.push_back(c.id);
        return n;
    }();
    return v;
}

IdentityReport verify_structure(Catalog& cat, const std::string& id) {
    for (auto& c : checks()) {
        if (c.id != id) continue;
        IdentityReport r;
        r.id = c.id;
        r.anchor = c.anchor;
        r.truncation = cat.truncation();
        r.pass = true;
        try {
            c.run(cat, r);
        } catch (const std::exception& e) {
            note(r, e.what(), false);
        }
        return r;
    }
    throw UnknownForm("unknown structure check '" + id + "'");
}

}  // namespace picard
