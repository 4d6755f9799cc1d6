// One PASS/FAIL line per acceptance criterion, with the individual checks indented above it.
#include "golden.hpp"
#include "picard/catalog.hpp"
#include "picard/hecke.hpp"
#include "picard/structure.hpp"
#include "picard/tables.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace picard;

namespace {

struct Criterion {
    int number;
    std::string title;
    bool pass = true;
    std::vector<std::string> lines;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
};

OperatorTable& table() {
    static OperatorTable t = [] {
        OperatorTable x;
        x.load(PICARD_TEST_CACHE);
        return x;
    }();
    return t;
}

void persist() {
    if (table().dirty()) table().save(PICARD_TEST_CACHE);
}

std::string joined(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : "; ") + x;
    return s;
}

void identity(Criterion& c, Catalog& cat, const std::string& id) {
    try {
        auto rep = verify_identity(cat, id);
        c.check(rep.pass, id + " (" + rep.anchor + ", W=" + std::to_string(rep.truncation) + "): " + joined(rep.details));
    } catch (const std::exception& e) {
        c.check(false, id + ": " + e.what());
    }
}

// ---------------- criteria

void golden_series(Criterion& c, Catalog& cat) {
    for (const auto& s : golden::exact_series()) {
        auto o = golden::compare(cat, s);
        c.check(o.pass, s.form + " through w^" + std::to_string(s.through) +
                            (s.scale == "1" ? "" : " (reference scale " + s.scale + ")") + ": " + o.detail);
    }
}

void proportional_series(Criterion& c, Catalog& cat) {
    for (const auto& s : golden::proportional_series()) {
        auto o = golden::compare(cat, s);
        c.check(o.pass, s.form + " through w^" + std::to_string(s.through) + " up to a factor: " + o.detail);
    }
    QSeries ref{{Cyc(1), Cyc(-9), Cyc(27), Cyc(-9), Cyc(-117)}};
    QSeries r1 = restrict_to_curve(cat.last("phi1").truncated(4));
    auto lam = proportionality(r1, ref);
    c.check(lam && !lam->is_zero(), "restriction of phi1 = " + r1.str() + ", proportional to 1 - 9q + 27q^2 - 9q^3 - 117q^4" +
                                        (lam ? " (ratio " + lam->str() + ")" : ""));
}

void restriction(Criterion& c, Catalog& cat) {
    QSeries r0 = restrict_to_curve(cat.last("phi0").truncated(4));
    QSeries want{{Cyc(1), Cyc(18), Cyc(108), Cyc(234), Cyc(234)}};
    c.check(r0 == want, "restriction of phi0 = " + r0.str());
}

void ring_identities(Criterion& c, Catalog& cat) {
    for (auto id : {"zeta_cubed", "gamma_sum", "phi_g", "phi_Phi_relation", "r4", "r5", "quotients_exist"})
        identity(c, cat, id);
}

void wedge_identities(Criterion& c, Catalog& cat) {
    for (auto id : {"phi_wedge", "eight_over_seven_ratio", "d_wedge", "e_wedge"}) identity(c, cat, id);
}

void hecke_tables(Criterion& c, Catalog& cat) {
    TableChecker chk(cat);
    for (const auto& claim : table_claims()) {
        if (claim.group != "table") continue;
        try {
            auto r = chk.check(claim);
            c.check(r.pass, claim.id + " expected " + claim.expected + ", found " + r.found +
                                (r.pass ? "" : " [" + r.detail + "]"));
        } catch (const std::exception& e) {
            c.check(false, claim.id + ": " + e.what());
        }
        persist();
    }
}

void closed_forms(Criterion& c, Catalog& cat, Catalog& deep) {
    const auto& phi0 = cat.get("phi0");
    for (std::string op : {"1+3r", "1-3r", "-2", "-5"}) {
        auto T = HeckeOperator::parse(op);
        Cyc want;
        if (T.kind() == HeckeOperator::Kind::Nu) {
            Cyc nu(T.nu()), nb(T.nu().conj());
            want = Cyc(T.p() + 1) * nu + nb * nb;
        } else {
            want = Cyc(-1 - T.p() * T.p() * T.p());
        }
        try {
            auto rep = eigenvalue(phi0, T, table());
            c.check(rep.eigenvalue == want, "phi0 under " + T.str() + ": " + rep.eigenvalue.str() + ", closed form " +
                                                want.str());
        } catch (const std::exception& e) {
            c.check(false, "phi0 under " + T.str() + ": " + e.what());
        }
    }
    for (std::string op : {"1+3r", "-2"}) {
        auto T = HeckeOperator::parse(op);
        Cyc want = eisenstein_eigenvalue(3, 3, T);
        for (auto name : {"e33_0", "e33_1", "e33_2", "e33_3"}) {
            try {
                auto rep = eigenvalue(cat.get(name), T, table());
                c.check(rep.eigenvalue == want, std::string(name) + " under " + T.str() + ": " + rep.eigenvalue.str() +
                                                    ", closed form " + want.str());
            } catch (const std::exception& e) {
                c.check(false, std::string(name) + " under " + T.str() + ": " + e.what());
            }
        }
    }
    TableChecker chk(deep);
    for (const auto& claim : table_claims()) {
        if (claim.group != "lift") continue;
        auto r = chk.check(claim);
        c.check(r.pass, claim.id + ": a_p nu^2 + conj(nu)^7 = " + claim.expected + ", found " + r.found);
    }
}

void properties(Criterion& c, Catalog& cat) {
    auto& t = table();
    // t_a m_a = N(a) on every stored degree
    std::size_t checked = 0;
    bool ok = true;
    for (const auto& [key, mat] : t.t_entries()) {
        auto [a, n] = key;
        if (n == 0) continue;
        for (std::size_t i = 0; i < graded_dim(n); ++i) {
            auto mo = mono_at(n, i);
            auto s = SectionElement::monomial(mo.a, mo.b, mo.c);
            ok = ok && t.apply_t(a, t.apply_m(a, s)) == s * Cyc(a.norm());
        }
        ++checked;
    }
    c.check(ok && checked > 0, "t_a m_a = N(a) on " + std::to_string(checked) + " cached (a, degree) pairs");

    // multiplicativity and commutativity on cached pairs with cached product
    std::vector<EisensteinInteger> keys;
    for (const auto& [a, img] : t.m_entries()) keys.push_back(a);
    std::size_t pairs = 0;
    ok = true;
    for (auto a : keys)
        for (auto b : keys) {
            if (!t.has_m(a * b)) continue;
            ok = ok && compose(t.m(a), t.m(b)) == t.m(a * b) && compose(t.m(b), t.m(a)) == t.m(a * b);
            ++pairs;
        }
    c.check(ok && pairs > 0, "m_a m_b = m_ab = m_b m_a on " + std::to_string(pairs) + " cached pairs");

    // divide undoes mul
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> d(-5, 5);
    auto random_series = [&](int vt, int order) {
        FJSeries f(vt);
        for (int n = order; n <= vt; ++n) {
            SectionElement s(n);
            for (std::size_t i = 0; i < s.dim(); ++i) s[i] = Cyc(d(rng), d(rng));
            f[n] = s;
        }
        f[order] += SectionElement::monomial(0, order, 0);
        return f;
    };
    ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        auto f = random_series(8, 0);
        auto g = random_series(8, trial % 4);
        auto q = divide(mul(f, g), g);
        ok = ok && q == f.truncated(q.valid_to());
    }
    ok = ok && divide(mul(cat.last("zeta"), cat.last("phi1")), cat.last("zeta")) ==
                   cat.last("phi1").truncated(cat.truncation() - 1);
    c.check(ok, "divide(mul(f, g), g) = f on 20 random pairs and on zeta phi1 / zeta");

    // exactification is precision independent
    OperatorTable lo(TableMeta{256, 531441}), hi(TableMeta{320, 531441});
    ok = true;
    for (EisensteinInteger a : {EisensteinInteger{1, 3}, EisensteinInteger{-2, 0}, EisensteinInteger{1, -3}})
        ok = ok && lo.compute_m_numeric(a) == hi.compute_m_numeric(a) &&
             lo.compute_t_numeric(a, 1) == hi.compute_t_numeric(a, 1);
    c.check(ok, "m and t for 1+3r, -2, 1-3r agree at 256 and 320 bits");

    for (const auto& id : structure_check_names()) {
        try {
            auto rep = verify_structure(cat, id);
            c.check(rep.pass, id + " (" + rep.anchor + "): " + joined(rep.details));
        } catch (const std::exception& e) {
            c.check(false, id + ": " + e.what());
        }
    }
}

}  // namespace

int main() {
    const int W = 32, W_TABLES = 40, W_SMALL = 16;
    std::cout << "operator cache: " << PICARD_TEST_CACHE << "\n";
    auto start = std::chrono::steady_clock::now();
    Catalog small(table(), W_SMALL), cat(table(), W), deep(table(), W_TABLES);

    std::vector<std::pair<Criterion, std::function<void(Criterion&)>>> all = {
        {{1, "golden Fourier-Jacobi series, exact"}, [&](Criterion& c) { golden_series(c, small); }},
        {{2, "golden series up to a factor, restriction of phi1"}, [&](Criterion& c) { proportional_series(c, small); }},
        {{3, "restriction of phi0"}, [&](Criterion& c) { restriction(c, small); }},
        {{4, "ring and module identities at W=32"}, [&](Criterion& c) { ring_identities(c, cat); }},
        {{5, "wedge identities"}, [&](Criterion& c) { wedge_identities(c, cat); }},
        {{6, "Hecke eigenvalue tables"}, [&](Criterion& c) { hecke_tables(c, deep); }},
        {{7, "closed-form eigenvalues"}, [&](Criterion& c) { closed_forms(c, cat, deep); }},
        {{8, "operator properties, ranks and kernels"}, [&](Criterion& c) { properties(c, cat); }},
    };
    int failed = 0;
    for (auto& [c, run] : all) {
        auto t0 = std::chrono::steady_clock::now();
        try {
            run(c);
        } catch (const std::exception& e) {
            c.check(false, std::string("aborted: ") + e.what());
        }
        persist();
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (const auto& l : c.lines) std::cout << "    " << l << "\n";
        std::ostringstream tm;
        tm.precision(1);
        tm << std::fixed << secs;
        std::cout << (c.pass ? "PASS" : "FAIL") << " criterion " << c.number << ": " << c.title << " (" << tm.str()
                  << " s)\n"
                  << std::flush;
        if (!c.pass) ++failed;
    }
    double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << all.size() - failed << " of " << all.size() << " criteria pass, " << static_cast<int>(total)
              << " s total\n";
    return failed ? 1 : 0;
}
