#include "picard/tables.hpp"

#include <algorithm>
#include <sstream>

namespace picard {

const std::vector<SpanDef>& table_spans() {
    static const std::vector<SpanDef> v = {
        {"s1_10", "S_{1,10}", "phi_i Phi_j"},
        {"s1_7_det", "S_{1,7}(det)", "gamma_ij"},
        {"s1_10_det", "S_{1,10}(det)", "phi_i gamma_jk"},
        {"s2_8", "S_{2,8}", "phi_i D_j"},
        {"s2_8_det2", "S_{2,8}(det^2)", "phi_i phi_j K2, phi_i K5, K8"},
        {"s3_6", "M_{3,6}", "phi_i E_j"},
    };
    return v;
}

bool is_table_span(const std::string& id) {
    for (auto& s : table_spans())
        if (s.id == id) return true;
    return false;
}

namespace {

const char* kGammas[6] = {"gamma12", "gamma13", "gamma14", "gamma23", "gamma24", "gamma34"};

VectorFormFJ times_phi(Catalog& cat, int i, const VectorFormFJ& f) {
    auto out = scale(f, cat.last("phi" + std::to_string(i)), 3, 0);
    out.name = "phi" + std::to_string(i) + "*" + f.name;
    return out;
}

}  // namespace

std::vector<VectorFormFJ> build_span(Catalog& cat, const std::string& id) {
    std::vector<VectorFormFJ> out;
    auto phis_times = [&](const std::vector<std::string>& names) {
        for (int i = 0; i < 3; ++i)
            for (auto& n : names) out.push_back(times_phi(cat, i, cat.get(n)));
    };
    if (id == "s1_10") {
        phis_times({"big_phi0", "big_phi1", "big_phi2"});
    } else if (id == "s1_7_det") {
        for (auto* g : kGammas) out.push_back(cat.get(g));
    } else if (id == "s1_10_det") {
        phis_times({kGammas, kGammas + 6});
    } else if (id == "s2_8") {
        phis_times({"d0", "d1", "d2"});
    } else if (id == "s2_8_det2") {
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) out.push_back(times_phi(cat, i, times_phi(cat, j, cat.get("k2"))));
        for (int i = 0; i < 3; ++i) out.push_back(times_phi(cat, i, cat.get("k5")));
        out.push_back(cat.get("k8"));
    } else if (id == "s3_6") {
        phis_times({"e33_0", "e33_1", "e33_2", "e33_3"});
    } else {
        throw UnknownForm("unknown span '" + id + "'");
    }
    return out;
}

std::string part_name(S3Part p) {
    switch (p) {
        case S3Part::Trivial: return "trivial";
        case S3Part::Sign: return "sign";
        case S3Part::Standard: return "standard";
    }
    return "?";
}

std::size_t PartSpectrum::multiplicity(const Cyc& lambda) const {
    std::size_t m = 0;
    for (auto& [v, n] : values)
        if (v == lambda) m += n;
    return m;
}

S3Character SpanSpectrum::character_of(const Cyc& lambda) const {
    S3Character c;
    for (auto& p : parts) {
        int m = static_cast<int>(p.multiplicity(lambda));
        if (p.part == S3Part::Trivial) c.trivial = m;
        if (p.part == S3Part::Sign) c.sign = m;
        if (p.part == S3Part::Standard) c.standard = m;
    }
    return c;
}

std::vector<Cyc> SpanSpectrum::eigenvalues() const {
    std::vector<Cyc> out;
    for (auto& p : parts)
        for (auto& [v, n] : p.values)
            if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    return out;
}

namespace {

// kernel of the stacked blocks (A_i - c_i I)
std::vector<std::vector<Cyc>> joint_kernel(const std::vector<std::pair<const Matrix*, Cyc>>& blocks) {
    std::size_t n = blocks.at(0).first->rows();
    Matrix m(n * blocks.size(), n);
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Cyc x = (*blocks[b].first)(i, j);
                if (i == j) x -= blocks[b].second;
                m(b * n + i, j) = x;
            }
    return kernel(std::move(m));
}

void merge(PartSpectrum& ps, const EigenDecomposition& e) {
    for (auto& sp : e.spaces) {
        auto it = std::find_if(ps.values.begin(), ps.values.end(), [&](auto& x) { return x.first == sp.value; });
        if (it == ps.values.end()) ps.values.push_back({sp.value, sp.vectors.size()});
        else it->second += sp.vectors.size();
    }
    ps.unresolved_degree += e.unresolved_degree;
}

std::vector<FJSeries> combine_series(const std::vector<FJSeries>& gens, const std::vector<std::vector<Cyc>>& vecs,
                                     const std::vector<std::size_t>& basis, int vt) {
    std::vector<FJSeries> out;
    for (auto& v : vecs) {
        FJSeries s = FJSeries::constant(Cyc(0), vt);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!v[i].is_zero()) s += gens[basis[i]] * v[i];
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

SpanSpectrum span_spectrum(const std::vector<VectorFormFJ>& span, const std::string& span_id, const HeckeOperator& T,
                           OperatorTable& table, const HeckeOperator* refine) {
    SpanSpectrum out;
    out.span = span_id;
    out.op = T.str();
    auto act = s3_action(span);
    out.rank = act.r2.basis.size();
    {
        std::vector<std::vector<Cyc>> all(out.rank, std::vector<Cyc>(out.rank));
        for (std::size_t i = 0; i < out.rank; ++i) all[i][i] = Cyc(1);
        out.character = s3_character(act, all);
    }
    int vt = span.at(0).valid_to();
    for (auto& f : span) vt = std::min(vt, f.valid_to());
    int j = span[0].j, k = span[0].k;
    const Matrix &r2 = act.r2.matrix, &r3 = act.r3.matrix;
    std::vector<std::pair<S3Part, std::vector<std::vector<Cyc>>>> pieces = {
        {S3Part::Trivial, joint_kernel({{&r2, Cyc(1)}, {&r3, Cyc(1)}})},
        {S3Part::Sign, joint_kernel({{&r2, Cyc(-1)}, {&r3, Cyc(1)}})},
        {S3Part::Standard, joint_kernel({{&r3, Cyc::rho()}})},
    };
    auto hecke_of = [&](const HeckeOperator& op) {
        return [&, op](const FJSeries& g) { return j == 0 ? apply_scalar(op, g, k, table) : apply_last(op, g, j, k, table); };
    };
    std::vector<FJSeries> gens;
    for (auto& f : span) gens.push_back(f.last.truncated(vt));
    for (auto& [part, vecs] : pieces) {
        PartSpectrum ps;
        ps.part = part;
        ps.dim = vecs.size();
        ps.certified_to = vt / T.step();
        if (vecs.empty()) {
            out.parts.push_back(std::move(ps));
            continue;
        }
        auto series = combine_series(gens, vecs, act.r2.basis, vt);
        try {
            auto op = span_operator(series, hecke_of(T), vt / T.step());
            merge(ps, exact_eigen(op.matrix));
        } catch (const TruncationTooShallow&) {
            if (!refine || refine->str() == T.str()) throw;
            SpanOperator rop;
            try {
                rop = span_operator(series, hecke_of(*refine), vt / refine->step());
            } catch (const TruncationTooShallow&) {
                ps.refined_by = refine->str();
                ps.unseparated = ps.dim;
                out.parts.push_back(std::move(ps));
                continue;
            }
            auto re = exact_eigen(rop.matrix);
            if (re.unresolved_degree)
                throw TruncationTooShallow("the " + part_name(part) + " part needs " + T.str() + " deeper than w^" +
                                           std::to_string(vt / T.step()) + " and does not split over Q(r) under " +
                                           refine->str());
            ps.refined_by = refine->str();
            for (auto& sp : re.spaces) {
                auto sub = combine_series(series, sp.vectors, rop.basis, vt);
                try {
                    auto op = span_operator(sub, hecke_of(T), vt / T.step());
                    merge(ps, exact_eigen(op.matrix));
                } catch (const TruncationTooShallow&) {
                    ps.unseparated += sub.size();
                }
            }
        }
        out.parts.push_back(std::move(ps));
    }
    return out;
}

// ---------------- claims

namespace {

std::vector<TableClaim> make_claims() {
    std::vector<TableClaim> v = {
        {"big_phi.7", "big_phi0", "", "1+3r", "759+261*r", "table"},
        {"big_phi.13", "big_phi0", "", "1-3r", "-4137+1683*r", "table"},
        {"big_phi.-2", "big_phi0", "", "-2", "72", "table"},
        {"big_phi.-5", "big_phi0", "", "-5", "89622", "table"},
        {"s1_10.s[3,1].7", "s1_10", "s[3,1]", "1+3r", "-13515+3573*r", "table"},
        {"s1_10.s[2,2].7", "s1_10", "s[2,2]", "1+3r", "15159+10863*r", "table"},
        {"s1_10.s[2,1,1].7", "s1_10", "s[2,1,1]", "1+3r", "26985+20097*r", "table"},
        {"s1_10.s[3,1].-2", "s1_10", "s[3,1]", "-2", "36", "table"},
        {"s1_10.s[2,2].-2", "s1_10", "s[2,2]", "-2", "1008", "table"},
        {"s1_10.s[2,1,1].-2", "s1_10", "s[2,1,1]", "-2", "-1548", "table"},
        {"s1_7_det.s[2,2].7", "s1_7_det", "s[2,2]", "1+3r", "-294+855*r", "table"},
        {"s1_7_det.s[2,2].-2", "s1_7_det", "s[2,2]", "-2", "180", "table"},
        {"s1_10_det.s[2,1,1].7", "s1_10_det", "s[2,1,1]", "1+3r", "-19320-7497*r", "table"},
        {"s1_10_det.s[2,1,1].-2", "s1_10_det", "s[2,1,1]", "-2", "-36", "table"},
        {"psi2.7", "psi2", "", "1+3r", "-6549-17352*r", "table"},
        {"psi2.13", "psi2", "", "1-3r", "223599+133992*r", "table"},
        {"psi2.-2", "psi2", "", "-2", "-684", "table"},
        {"d.7", "d0", "", "1+3r", "-105-297*r", "table"},
        {"d.13", "d0", "", "1-3r", "1137+945*r", "table"},
        {"d.-2", "d0", "", "-2", "-72", "table"},
        {"d.-5", "d0", "", "-5", "-810", "table"},
        {"s2_8.s[2,1,1].7", "s2_8", "s[2,1,1]", "1+3r", "-3039-765*r", "table"},
        {"s2_8.s[2,1,1].-2", "s2_8", "s[2,1,1]", "-2", "-288", "table"},
        {"s2_8_det2.s[3,1].7", "s2_8_det2", "s[3,1]", "1+3r", "-2175-1602*r", "table"},
        {"s2_8_det2.s[3,1].-2", "s2_8_det2", "s[3,1]", "-2", "792", "table"},
        {"s3_6.s[2,1,1].7", "s3_6", "s[2,1,1]", "1+3r", "3189-459*r", "table"},
        {"s3_6.s[3,1].7", "s3_6", "s[3,1]", "1+3r", "273+2457*r", "table"},
        {"s3_6.s[2,1,1].-2", "s3_6", "s[2,1,1]", "-2", "-36", "table"},
        {"s3_6.s[3,1].-2", "s3_6", "s[3,1]", "-2", "-36", "table"},
    };
    // the s[2,1,1] part of S_{1,7}(det) is a lift: a_p nu^2 + conj(nu)^7, a_p from (eta(3 tau) eta(tau))^6
    auto eta = eta_product_coefficients(20);
    for (std::int64_t p : {7, 13}) {
        auto T = HeckeOperator::parse(std::to_string(p));
        Cyc want = lift_eigenvalue(LiftKind::Kudla, Cyc(eta[static_cast<std::size_t>(p)]), 1, 4, T.nu());
        v.push_back({"s1_7_det.s[2,1,1]." + std::to_string(p), "s1_7_det", "s[2,1,1]", T.nu().str(), want.str(), "lift"});
    }
    return v;
}

bool contains(const S3Character& big, const S3Character& small) {
    return big.trivial >= small.trivial && big.sign >= small.sign && big.standard >= small.standard;
}

}  // namespace

const std::vector<TableClaim>& table_claims() {
    static const std::vector<TableClaim> v = make_claims();
    return v;
}

const SpanSpectrum& TableChecker::spectrum(const std::string& span_id, const std::string& op) {
    auto key = std::make_pair(span_id, op);
    auto it = spectra_.find(key);
    if (it != spectra_.end()) return it->second;
    auto sit = spans_.find(span_id);
    if (sit == spans_.end()) sit = spans_.emplace(span_id, build_span(*cat_, span_id)).first;
    auto refine = HeckeOperator::t_minus_p(2);
    auto sp = span_spectrum(sit->second, span_id, HeckeOperator::parse(op), cat_->table(), &refine);
    return spectra_.emplace(key, std::move(sp)).first->second;
}

ClaimResult TableChecker::check(const TableClaim& c) {
    ClaimResult r;
    r.claim = c;
    Cyc want = Cyc::parse(c.expected);
    try {
        if (c.irrep.empty()) {
            auto rep = eigenvalue(cat_->get(c.span), HeckeOperator::parse(c.op), cat_->table());
            r.found = rep.eigenvalue.str();
            r.pass = rep.eigenvalue == want;
            r.detail = "eigenform, coefficients " + rep.str();
            return r;
        }
        const auto& sp = spectrum(c.span, c.op);
        std::ostringstream all;
        for (auto& p : sp.parts) {
            all << part_name(p.part) << "[" << p.dim << ", w^" << p.certified_to << "]:";
            for (auto& [v, n] : p.values) all << " " << v.str() << "x" << n;
            if (p.unresolved_degree) all << " +" << p.unresolved_degree << " irrational";
            if (p.unseparated) all << " +" << p.unseparated << " not separated";
            if (!p.refined_by.empty()) all << " (split by " << p.refined_by << ")";
            all << ";";
        }
        r.found = all.str();
        auto ch = sp.character_of(want);
        auto need = s3_restriction(c.irrep);
        r.pass = contains(ch, need);
        r.detail = "eigenspace character " + ch.str() + ", " + c.irrep + " restricts to " + need.str() + ", span " +
                   sp.character.str();
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = e.what();
    }
    return r;
}

}  // namespace picard
