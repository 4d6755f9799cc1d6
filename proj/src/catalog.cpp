#include "picard/catalog.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace picard {

namespace {

const Cyc kS3 = Cyc::sqrt_m3();

int idx3(int i) { return ((i % 3) + 3) % 3; }

std::string gname(int i, int j) {
    if (i > j) std::swap(i, j);
    return "gamma" + std::to_string(i) + std::to_string(j);
}

FJSeries one(int vt) { return FJSeries::constant(Cyc(1), vt); }

// first index where a and b differ, or -1
int first_mismatch(const FJSeries& a, const FJSeries& b) {
    int top = std::min(a.valid_to(), b.valid_to());
    for (int n = 0; n <= top; ++n)
        if (!(a[n] == b[n])) return n;
    return -1;
}

}  // namespace

Catalog::Catalog(OperatorTable& table, int truncation) : table_(&table), w_(truncation) {
    if (truncation < 1) throw std::invalid_argument("Catalog: truncation must be positive");
}

const std::vector<std::string>& Catalog::names() {
    static const std::vector<std::string> v = [] {
        std::vector<std::string> n = {"theta0", "theta1", "theta2", "phi0", "phi1", "phi2", "zeta",
                                      "x1", "x2", "x3", "x4", "big_phi0", "big_phi1", "big_phi2",
                                      "big_x1", "big_x2", "big_x3", "big_x4"};
        for (int i = 1; i <= 4; ++i)
            for (int j = i + 1; j <= 4; ++j) n.push_back(gname(i, j));
        for (auto s : {"a1", "a2", "a3", "a4", "b12_34", "b13_24", "b14_23", "psi1", "psi2", "e11", "e14", "d0", "d1",
                       "d2", "d0p", "d1p", "d2p", "k2", "k5", "k8", "e33_0", "e33_1", "e33_2", "e33_3", "g0", "g1", "g2",
                       "h1", "h2", "j0", "k02", "k12", "k23", "k13"})
            n.push_back(s);
        return n;
    }();
    return v;
}

bool Catalog::known(const std::string& name) {
    const auto& n = names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

FJSeries Catalog::theta(int nu) {
    FJSeries f(w_);
    f[0] = SectionElement::constant(Cyc(1));
    for (int n = 1; n <= w_; ++n)
        for (auto xi : enumerate_norm(n)) {
            int e = idx3(-nu * static_cast<int>(xi.trace()));
            f[n] += table_->m(xi)[1] * pow(Cyc::rho(), e);
        }
    return f;
}

FJSeries Catalog::zeta_series() {
    FJSeries f(w_);
    for (int n = 1; n <= w_; ++n)
        for (auto xi : enumerate_norm(n)) f[n] += table_->m(xi)[0] * Cyc(pow(xi, 5));
    f *= Cyc(mpq_class(1, 6));
    return f;
}

const FormRecord& Catalog::get(const std::string& name) {
    if (auto it = forms_.find(name); it != forms_.end()) return it->second;
    if (!known(name)) throw UnknownForm("unknown form '" + name + "'");
    FormRecord r = build(name);
    r.name = name;
    return forms_.emplace(name, std::move(r)).first->second;
}

FormRecord Catalog::build(const std::string& name) {
    auto phi = [&](int i) -> const FJSeries& { return last("phi" + std::to_string(idx3(i))); };
    auto P = [&](int i) -> const FormRecord& { return get("big_phi" + std::to_string(idx3(i))); };
    auto D = [&](int i) -> const FormRecord& { return get("d" + std::to_string(idx3(i))); };
    auto E = [&](int i) -> const FormRecord& { return get("e33_" + std::to_string(i)); };
    auto with = [](FormRecord r, const std::string& prov) {
        r.provenance = prov;
        return r;
    };

    if (name.rfind("theta", 0) == 0) {
        int nu = name.back() - '0';
        return with(scalar_form(name, 1, 0, theta(nu)), "sum rho^(-nu Tr xi) m_xi(Y) w^N(xi)");
    }
    if (name.rfind("phi", 0) == 0) {
        auto t = last("theta" + name.substr(3));
        return with(scalar_form(name, 3, 0, t * t * t), "theta^3");
    }
    if (name == "zeta") return with(scalar_form(name, 6, 1, zeta_series()), "(1/6) sum xi^5 m_xi(X) w^N(xi)");
    if (name[0] == 'x') {
        int i = name[1] - '0';
        FJSeries s = phi(0) + phi(1) + phi(2);
        if (i > 1) s -= phi(i - 2) * Cyc(4);
        return with(scalar_form(name, 3, 0, s), "x_i basis of weight 3");
    }
    if (name.rfind("big_phi", 0) == 0) {
        int i = name.back() - '0';
        // (phi_{i+2} N phi_{i+1} - phi_{i+1} N phi_{i+2}) / (9 sqrt(-3))
        auto b = bracket(phi(i + 2), 3, phi(i + 1), 3, 0);
        return with(scale(b, Cyc(1) / (Cyc(3) * kS3)), "bracket of phi_{i+1}, phi_{i+2} over 9 sqrt(-3)");
    }
    if (name.rfind("big_x", 0) == 0) {
        int i = name.back() - '0';
        if (i == 1) return with(combine({{one(w_), P(0)}, {one(w_), P(1)}, {one(w_), P(2)}}, 0, 0), "Phi_0+Phi_1+Phi_2");
        return with(scale(P(i - 2), Cyc(-1)), "-Phi_{i-2}");
    }
    if (name.rfind("gamma", 0) == 0) {
        int i = name[5] - '0', j = name[6] - '0';
        FJSeries h = last("x" + std::to_string(i)) - last("x" + std::to_string(j));
        auto b = bracket(last("zeta"), 6, h, 3, 1);
        return with(divide(b, h, 3, 0), "[zeta, x_i - x_j] / (x_i - x_j)");
    }
    if (name[0] == 'a' && name.size() == 2) {
        int i = name[1] - '0';
        std::vector<int> o;
        for (int q = 1; q <= 4; ++q)
            if (q != i) o.push_back(q);
        return with(combine({{one(w_), get(gname(o[0], o[1]))},
                             {one(w_), get(gname(o[0], o[2]))},
                             {one(w_), get(gname(o[1], o[2]))}},
                            0, 0),
                    "gamma_jk + gamma_jl + gamma_kl");
    }
    if (name[0] == 'b' && name.size() == 6) {
        int i = name[1] - '0', j = name[2] - '0', k = name[4] - '0', l = name[5] - '0';
        return with(combine({{one(w_), get(gname(i, j))}, {one(w_), get(gname(k, l))}}, 0, 0), "gamma_ij + gamma_kl");
    }
    if (name == "psi1" || name == "psi2") {
        const FJSeries &p0 = phi(0), &p1 = phi(1), &p2 = phi(2);
        FJSeries c0, c2;
        int wc;
        if (name == "psi1") {
            c0 = p0 * (p1 - p0);
            c2 = -(p2 * (p2 - p1));
            wc = 6;
        } else {
            c0 = p0 * (p0 - p1) * (p0 + p1 - p2 * Cyc(3));
            c2 = -(p2 * (p1 - p2) * (p1 + p2 - p0 * Cyc(3)));
            wc = 9;
        }
        auto num = combine({{c0, P(0)}, {c2, P(2)}}, wc, 0);
        return with(divide(num, last("zeta"), 6, 1), "combination of Phi_0, Phi_2 over zeta");
    }
    if (name == "e11") return with(divide(get("psi1"), last("zeta"), 6, 1), "Psi_1 / zeta");
    if (name == "e14") return with(divide(get("psi2"), last("zeta"), 6, 1), "Psi_2 / zeta");
    if (name.size() == 2 && name[0] == 'd') {
        int i = name[1] - '0';
        FJSeries den = phi(i + 1) * phi(i + 2) * (phi(i + 1) - phi(i + 2));
        return with(sym_power(P(i), 2, Cyc(9) * kS3, den, 9, 0), "9 sqrt(-3) Sym^2(Phi_i) / (phi phi (phi - phi))");
    }
    if (name.size() == 3 && name[0] == 'd' && name[2] == 'p') {
        int i = name[1] - '0';
        auto s = combine({{one(w_), D(i + 1)}, {one(w_), D(i + 2)}}, 0, 0);
        s = scale(s, last("zeta"), 6, 1);
        return with(divide(s, phi(i) * (phi(i + 1) - phi(i + 2)), 6, 0), "zeta (D_{i+1} + D_{i+2}) / (phi_i (phi_{i+1} - phi_{i+2}))");
    }
    if (name == "k2") return with(sym_power(get("e11"), 2, Cyc(1), one(w_), 0, 0), "Sym^2(E_{1,1})");
    if (name == "k8") return with(sym_power(get("e14"), 2, Cyc(1), one(w_), 0, 0), "Sym^2(E_{1,4})");
    if (name == "k5") {
        const FJSeries &p0 = phi(0), &p1 = phi(1), &p2 = phi(2);
        auto s = combine({{p0 * (p0 - p1 - p2), D(0)}, {p1 * (p1 - p0 - p2), D(1)}, {p2 * (p2 - p0 - p1), D(2)}}, 6, 0);
        return with(divide(s, last("zeta"), 6, 1), "phi-combination of D_i over zeta");
    }
    if (name.rfind("e33_", 0) == 0) {
        int i = name[4] - '0';
        if (i < 3) {
            FJSeries d = phi(i + 1) * phi(i + 2) * (phi(i + 1) - phi(i + 2));
            return with(sym_power(P(i), 3, Cyc(1), d * d, 18, 0), "Sym^3(Phi_i) / (phi phi (phi - phi))^2");
        }
        auto s = combine({{one(w_), P(0)}, {one(w_), P(1)}, {one(w_), P(2)}}, 0, 0);
        FJSeries d = (phi(0) - phi(1)) * (phi(0) - phi(2)) * (phi(1) - phi(2));
        return with(sym_power(s, 3, Cyc(1), d * d, 18, 0), "Sym^3(Phi_0+Phi_1+Phi_2) / (product of differences)^2");
    }
    const FJSeries &p0 = phi(0), &p1 = phi(1), &p2 = phi(2);
    if (name == "g0") return with(combine({{p2, E(1)}, {-p1, E(2)}, {p2 - p1, E(3)}}, 3, 0), "G_0");
    if (name == "g1") return with(combine({{-p2, E(0)}, {p0, E(2)}, {p0 - p2, E(3)}}, 3, 0), "G_1");
    if (name == "g2") return with(combine({{p1, E(0)}, {-p0, E(1)}, {p1 - p0, E(3)}}, 3, 0), "G_2");
    if (name == "h1") return with(combine({{p1, E(0)}, {p0 - p2, E(1)}, {-p1, E(2)}, {p0 - p2, E(3)}}, 3, 0), "H_1");
    if (name == "h2") return with(combine({{p2, E(0)}, {-p2, E(1)}, {p0 - p1, E(2)}, {p0 - p1, E(3)}}, 3, 0), "H_2");
    if (name == "j0")
        return with(combine({{p1 * Cyc(3), E(0)}, {p0 + p2, E(1)}, {p1 * Cyc(3), E(2)}, {p0 - p1 * Cyc(2) + p2, E(3)}}, 3, 0), "J_0");
    if (name == "k02") return with(scale(E(2), p0, 3, 0), "phi_0 E_2");
    if (name == "k12") return with(scale(E(2), p1, 3, 0), "phi_1 E_2");
    if (name == "k23") return with(scale(E(3), p1 - p0, 3, 0), "(phi_1 - phi_0) E_3");
    if (name == "k13") return with(scale(E(3), p2 - p0, 3, 0), "(phi_2 - phi_0) E_3");
    throw UnknownForm("no builder for '" + name + "'");
}

FJSeries act_r2(const FormRecord& f) {
    FJSeries s = substitute(f.last, cusp::r2());
    if ((f.k + f.j) % 2 != 0) s = -s;
    return s;
}

FJSeries act_r3(const FormRecord& f) { return substitute(f.last, cusp::r3()); }

// ---------------- identities

namespace {

struct Ctx {
    Catalog& cat;
    IdentityReport& rep;

    const FJSeries& L(const std::string& n) { return cat.last(n); }
    const FormRecord& F(const std::string& n) { return cat.get(n); }

    // records a pass/fail line for a = b
    bool eq(const std::string& what, const FJSeries& a, const FJSeries& b) {
        int top = std::min(a.valid_to(), b.valid_to());
        int m = first_mismatch(a, b);
        bool ok = m < 0;
        rep.details.push_back(what + ": " + (ok ? "equal through w^" + std::to_string(top)
                                                : "differs at w^" + std::to_string(m)));
        rep.pass = rep.pass && ok;
        return ok;
    }
    bool zero(const std::string& what, const FJSeries& a) { return eq(what, a, FJSeries(a.valid_to())); }
    bool check(const std::string& what, bool ok) {
        rep.details.push_back(what + ": " + (ok ? "ok" : "FAILED"));
        rep.pass = rep.pass && ok;
        return ok;
    }
    // a / b is a constant; returns it
    std::optional<Cyc> constant_ratio(const std::string& what, const FJSeries& a, const FJSeries& b) {
        auto lam = proportionality(a, b);
        bool ok = lam && !lam->is_zero();
        rep.details.push_back(what + ": " + (ok ? "ratio " + lam->str() + " through w^" +
                                                      std::to_string(std::min(a.valid_to(), b.valid_to()))
                                                : "not a nonzero constant multiple"));
        rep.pass = rep.pass && ok;
        return ok ? lam : std::nullopt;
    }
};

using Fn = std::function<void(Ctx&)>;

struct IdDef {
    std::string id, anchor;
    Fn run;
};

FJSeries phi_wedge(Ctx& c) { return wedge({c.F("big_phi1"), c.F("big_phi2")}); }

const std::vector<IdDef>& registry() {
    static const std::vector<IdDef> defs = [] {
        std::vector<IdDef> d;
        d.push_back({"zeta_cubed", "zeta^3 relation", [](Ctx& c) {
                         const auto &p0 = c.L("phi0"), &p1 = c.L("phi1"), &p2 = c.L("phi2"), &z = c.L("zeta");
                         Cyc k = -Cyc::rho() / (Cyc::sqrt_m3() * Cyc(2187));
                         c.eq("zeta^3 vs phi product", z * z * z, p0 * p1 * p2 * (p1 - p0) * (p2 - p0) * (p2 - p1) * k);
                     }});
        d.push_back({"x_sum", "sum of x_i", [](Ctx& c) { c.zero("x1+x2+x3+x4", c.L("x1") + c.L("x2") + c.L("x3") + c.L("x4")); }});
        d.push_back({"big_x_sum", "sum of X_i", [](Ctx& c) {
                         c.zero("X1+X2+X3+X4", c.L("big_x1") + c.L("big_x2") + c.L("big_x3") + c.L("big_x4"));
                     }});
        d.push_back({"gamma_sum", "sum of gamma_ij", [](Ctx& c) {
                         FJSeries s = c.L("gamma12");
                         for (auto n : {"gamma13", "gamma14", "gamma23", "gamma24", "gamma34"}) s += c.L(n);
                         c.zero("sum gamma_ij", s);
                     }});
        d.push_back({"a_sum", "sum of a_i", [](Ctx& c) { c.zero("sum a_i", c.L("a1") + c.L("a2") + c.L("a3") + c.L("a4")); }});
        d.push_back({"b_sum", "sum of b_ij,kl", [](Ctx& c) { c.zero("sum b", c.L("b12_34") + c.L("b13_24") + c.L("b14_23")); }});
        d.push_back({"phi_g", "Phi_0 against gamma_13 - gamma_14", [](Ctx& c) {
                         const auto &z = c.L("zeta"), &p1 = c.L("phi1"), &p2 = c.L("phi2");
                         const auto &x1 = c.L("x1"), &x3 = c.L("x3"), &x4 = c.L("x4");
                         FJSeries lhs = z * c.L("big_phi0");
                         c.eq("zeta Phi_0 (x3-x1)(x4-x1) = -16 zeta X_2 phi_1 phi_2", lhs * (x3 - x1) * (x4 - x1),
                              z * c.L("big_x2") * p1 * p2 * Cyc(-16));
                         c.eq("3 sqrt(-3) zeta Phi_0 = phi_1 phi_2 (gamma13 - gamma14)", lhs * (Cyc(3) * Cyc::sqrt_m3()),
                              p1 * p2 * (c.L("gamma13") - c.L("gamma14")));
                     }});
        d.push_back({"phi_Phi_relation", "sum phi_i Phi_i = 0", [](Ctx& c) {
                         c.zero("sum phi_i Phi_i",
                                c.L("phi0") * c.L("big_phi0") + c.L("phi1") * c.L("big_phi1") + c.L("phi2") * c.L("big_phi2"));
                     }});
        d.push_back({"r4", "relation R4", [](Ctx& c) {
                         c.zero("phi0 G0 + phi1 G1 + phi2 G2",
                                c.L("phi0") * c.L("g0") + c.L("phi1") * c.L("g1") + c.L("phi2") * c.L("g2"));
                     }});
        d.push_back({"r5", "relation R5", [](Ctx& c) {
                         const auto &p0 = c.L("phi0"), &p1 = c.L("phi1"), &p2 = c.L("phi2");
                         c.zero("phi1 K02 - phi0 K12 - (phi2-phi0) K23 + (phi1-phi0) K13",
                                p1 * c.L("k02") - p0 * c.L("k12") - (p2 - p0) * c.L("k23") + (p1 - p0) * c.L("k13"));
                     }});
        d.push_back({"k2_alt", "K2 = (phi0 D0 + phi1 D1 + phi2 D2)/zeta", [](Ctx& c) {
                         FJSeries s = c.L("phi0") * c.L("d0") + c.L("phi1") * c.L("d1") + c.L("phi2") * c.L("d2");
                         c.constant_ratio("zeta K2 / sum phi_i D_i", c.L("zeta") * c.L("k2"), s);
                     }});
        d.push_back({"quotients_exist", "zero-remainder divisions", [](Ctx& c) {
                         for (auto n : {"psi1", "psi2", "e11", "e14", "d0", "d1", "d2", "d0p", "d1p", "d2p", "k2", "k5", "k8",
                                        "e33_0", "e33_1", "e33_2", "e33_3"}) {
                             bool ok = true;
                             std::string why;
                             try {
                                 c.F(n);
                             } catch (const NotDivisible& e) {
                                 ok = false;
                                 why = std::string(" (") + e.what() + ")";
                             }
                             c.check(std::string(n) + " divides exactly" + why, ok);
                         }
                     }});
        d.push_back({"r3_orbits", "R3 substitution permutes indices", [](Ctx& c) {
                         for (int i = 0; i < 3; ++i) {
                             auto s = std::to_string(i), t = std::to_string((i + 1) % 3);
                             c.eq("R3 phi" + s + " = phi" + t, act_r3(c.F("phi" + s)), c.L("phi" + t));
                             c.eq("R3 Phi" + s + " = Phi" + t, act_r3(c.F("big_phi" + s)), c.L("big_phi" + t));
                             c.eq("R3 D" + s + " = D" + t, act_r3(c.F("d" + s)), c.L("d" + t));
                             c.eq("R3 E" + s + " = E" + t, act_r3(c.F("e33_" + s)), c.L("e33_" + t));
                         }
                     }});
        d.push_back({"phi_wedge", "Phi_1 ^ Phi_2 = c zeta^2 phi_0", [](Ctx& c) {
                         auto w = phi_wedge(c);
                         const auto& z = c.L("zeta");
                         c.constant_ratio("Phi_1^Phi_2 / (zeta^2 phi_0)", w, z * z * c.L("phi0"));
                         c.constant_ratio("Phi_0^Phi_1 / (zeta^2 phi_2)", wedge({c.F("big_phi0"), c.F("big_phi1")}),
                                          z * z * c.L("phi2"));
                         c.constant_ratio("Phi_2^Phi_0 / (zeta^2 phi_1)", wedge({c.F("big_phi2"), c.F("big_phi0")}),
                                          z * z * c.L("phi1"));
                     }});
        d.push_back({"eight_over_seven_ratio", "(Psi1^Psi2) phi0 / ((Phi1^Phi2) zeta)", [](Ctx& c) {
                         auto w = phi_wedge(c);
                         auto ww = wedge({c.F("psi1"), c.F("psi2")});
                         auto lam = c.constant_ratio("(Psi1^Psi2) phi0 vs (Phi1^Phi2) zeta", ww * c.L("phi0"), w * c.L("zeta"));
                         Cyc want = Cyc(4 * 2187) * (Cyc::rho() - Cyc(1));
                         c.check("ratio equals 2^2 3^7 (rho - 1) = " + want.str(), lam && *lam == want);
                     }});
        d.push_back({"psi1_gamma", "Psi1 ^ gamma_1j against zeta^2 (phi0+phi1+phi2-2 phi_m)", [](Ctx& c) {
                         auto w = phi_wedge(c);
                         auto cz = proportionality(w, c.L("zeta") * c.L("zeta") * c.L("phi0"));
                         const auto &p0 = c.L("phi0"), &p1 = c.L("phi1"), &p2 = c.L("phi2"), &z = c.L("zeta");
                         std::vector<int> ms;
                         for (int j = 2; j <= 4; ++j) {
                             auto pg = wedge({c.F("psi1"), c.F(gname(1, j))});
                             int found = -1;
                             std::optional<Cyc> lam;
                             for (int m = 0; m < 3 && found < 0; ++m) {
                                 const FJSeries& pm = m == 0 ? p0 : (m == 1 ? p1 : p2);
                                 auto l = proportionality(pg, z * z * (p0 + p1 + p2 - pm * Cyc(2)));
                                 if (l && !l->is_zero()) {
                                     found = m;
                                     lam = l;
                                 }
                             }
                             std::string msg = "Psi1^gamma1" + std::to_string(j);
                             if (found >= 0) {
                                 msg += " ~ zeta^2(phi0+phi1+phi2-2 phi" + std::to_string(found) + ")";
                                 if (cz) msg += ", constant / c = " + (*lam / *cz).str();
                                 if (cz) msg += " (reference -1/(6 sqrt(-3)) = " + (Cyc(-1) / (Cyc(6) * Cyc::sqrt_m3())).str() + ")";
                             }
                             c.check(msg, found >= 0);
                         }
                     }});
        d.push_back({"d_wedge", "D0 ^ D1 ^ D2 = -rho c^3 zeta^3", [](Ctx& c) {
                         auto w = phi_wedge(c);
                         const auto& z = c.L("zeta");
                         auto cc = c.constant_ratio("c from Phi_1^Phi_2", w, z * z * c.L("phi0"));
                         auto dw = wedge({c.F("d0"), c.F("d1"), c.F("d2")});
                         auto cd = c.constant_ratio("D0^D1^D2 / zeta^3", dw, z * z * z);
                         if (cc && cd) c.check("D constant = -rho c^3", *cd == -Cyc::rho() * *cc * *cc * *cc);
                     }});
        d.push_back({"e_wedge", "E0 ^ E1 ^ E2 ^ E3 = c2 zeta^3", [](Ctx& c) {
                         auto ew = wedge({c.F("e33_0"), c.F("e33_1"), c.F("e33_2"), c.F("e33_3")});
                         const auto& z = c.L("zeta");
                         c.constant_ratio("E-wedge / zeta^3", ew, z * z * z);
                     }});
        d.push_back({"cusp_flags", "constant terms at infinity", [](Ctx& c) {
                         for (auto n : {"big_phi0", "gamma12", "psi1", "psi2", "d0", "d0p", "g0", "h1", "j0"}) {
                             auto ct = constant_term(c.F(n));
                             c.check(std::string(n) + " has zero constant term", ct && ct->is_zero());
                         }
                         for (auto n : {"e11", "k2", "k8"}) {
                             auto ct = constant_term(c.F(n));
                             c.check(std::string(n) + " has nonzero constant term" + (ct ? " " + ct->str() : ""),
                                     ct && !ct->is_zero());
                         }
                         int nonzero = 0;
                         std::string which;
                         for (int i = 0; i < 4; ++i) {
                             auto ct = constant_term(c.F("e33_" + std::to_string(i)));
                             if (!ct) {
                                 c.check("E" + std::to_string(i) + " constant term determined", false);
                                 continue;
                             }
                             if (!ct->is_zero()) {
                                 ++nonzero;
                                 which += " E" + std::to_string(i) + "=" + ct->str();
                             }
                         }
                         c.check("exactly one of E0..E3 nonzero at infinity:" + which, nonzero == 1);
                     }});
        return d;
    }();
    return defs;
}

}  // namespace

const std::vector<std::string>& identity_names() {
    static const std::vector<std::string> v = [] {
        std::vector<std::string> n;
        for (auto& d : registry()) n.push_back(d.id);
        return n;
    }();
    return v;
}

IdentityReport verify_identity(Catalog& cat, const std::string& id) {
    for (auto& d : registry()) {
        if (d.id != id) continue;
        IdentityReport rep;
        rep.id = d.id;
        rep.anchor = d.anchor;
        rep.truncation = cat.truncation();
        rep.pass = true;
        Ctx c{cat, rep};
        try {
            d.run(c);
        } catch (const NotDivisible& e) {
            c.check(std::string("construction: ") + e.what(), false);
        } catch (const TruncationTooShallow& e) {
            c.check(std::string("truncation W=") + std::to_string(cat.truncation()) + " too short: " + e.what(), false);
        } catch (const NotReducible& e) {
            c.check(std::string("wedge reduction: ") + e.what(), false);
        }
        return rep;
    }
    throw UnknownForm("unknown identity '" + id + "'");
}

}  // namespace picard
