#include "cli.hpp"

#include "picard/catalog.hpp"
#include "picard/config.hpp"
#include "picard/hecke.hpp"
#include "picard/structure.hpp"
#include "picard/tables.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

namespace picard {

namespace {

struct Options {
    std::string config_file;
    std::optional<int> truncation;
    std::optional<int> precision;
    std::string denominator_bound;
    std::string cache;
    std::string format;
    bool compute = false;
    bool no_compute = false;

    std::string name;
    std::optional<int> order;
    bool serialize = false;

    std::string op_kind;
    std::string op_arg;

    std::string target = "all";

    std::string cache_action;
    std::optional<int> norms_up_to;
    std::string cache_op;
    int degree = 0;
    bool no_wait = false;
};

Config resolve(const Options& o) {
    Config c = o.config_file.empty() ? Config{} : Config::from_file(o.config_file);
    if (o.truncation) c.truncation = *o.truncation;
    if (o.precision) c.precision_bits = *o.precision;
    if (!o.denominator_bound.empty()) c.set("denominator_bound", o.denominator_bound);
    if (!o.cache.empty()) c.cache_path = o.cache;
    if (!o.format.empty()) c.set("output_format", o.format);
    c.validate();
    return c;
}

bool delimited(const Config& c) { return c.format == OutputFormat::Delimited; }

// header of an existing cache file, if any
std::optional<TableMeta> cache_meta(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    TableMeta m;
    std::string line, key;
    for (int i = 0; i < 3 && std::getline(in, line); ++i) {
        std::istringstream ls(line);
        ls >> key;
        if (key == "precision_bits") ls >> m.precision_bits;
        if (key == "denominator_bound") ls >> m.denominator_bound;
    }
    return m;
}

// entries computed under other settings are not mixed with new ones; cache refresh rewrites them
void require_same_meta(const Config& c) {
    auto m = cache_meta(c.cache_path);
    if (!m || (m->precision_bits == c.precision_bits && m->denominator_bound == c.denominator_bound)) return;
    throw ConfigError(c.cache_path + " was built with precision_bits " + std::to_string(m->precision_bits) +
                      " and denominator_bound " + m->denominator_bound.get_str() +
                      "; use the same settings or run 'cache refresh'");
}

// loads the cache; the caller saves whatever got computed
struct Session {
    Config cfg;
    OperatorTable table;

    Session(const Config& c, bool compute) : cfg(c), table(c.table_meta()) {
        table.allow_compute(compute);
        require_same_meta(cfg);
        table.load(cfg.cache_path);
    }
    void persist() {
        if (table.dirty()) table.save(cfg.cache_path);
    }
};

struct Built {
    std::unique_ptr<Catalog> cat;
};

// With --order and no -W, start at max(order, 8) and go deeper until the form is exact
// through w^order; divisions by presentation denominators cost a few orders.
Built build_form(OperatorTable& table, const Options& o, const Config& c) {
    if (!Catalog::known(o.name)) throw UnknownForm("unknown form '" + o.name + "'");
    int w = o.order && !o.truncation ? std::max(*o.order, 8) : c.truncation;
    for (;;) {
        Built b{std::make_unique<Catalog>(table, w)};
        int vt = b.cat->get(o.name).valid_to();
        if (!o.order || vt >= *o.order || o.truncation) return b;
        w += *o.order - vt;
    }
}

HeckeOperator operator_from(const std::string& kind, const std::string& arg) {
    if (kind == "Tm" || kind == "tm") {
        std::int64_t p = std::stoll(arg);
        return HeckeOperator::t_minus_p(p < 0 ? -p : p);
    }
    if (kind == "T" || kind == "t") return HeckeOperator::parse(arg);
    throw CLI::ValidationError("operator", "expected T or Tm, got '" + kind + "'");
}

std::string weight_str(const FormRecord& f) {
    std::ostringstream os;
    os << "weight (" << f.j << "," << f.k << ")";
    if (f.ell) os << " det^" << f.ell;
    return os.str();
}

// ---------------- build / restrict

int cmd_build(const Options& o, std::ostream& out) {
    Config cfg = resolve(o);
    Session s(cfg, !o.no_compute);
    Built b = build_form(s.table, o, cfg);
    const auto& f = b.cat->get(o.name);
    int upto = o.order ? std::min(*o.order, f.valid_to()) : f.valid_to();
    if (o.serialize || delimited(cfg)) {
        out << f.last.truncated(upto).serialize();
    } else {
        out << f.name << "  " << weight_str(f) << (f.j ? ", last component" : "") << ", exact through w^" << upto
            << "\n";
        out << f.last.pretty(upto) << "\n";
    }
    s.persist();
    return kOk;
}

int cmd_restrict(const Options& o, std::ostream& out) {
    Config cfg = resolve(o);
    Session s(cfg, !o.no_compute);
    Built b = build_form(s.table, o, cfg);
    const auto& f = b.cat->get(o.name);
    int upto = o.order ? std::min(*o.order, f.valid_to()) : f.valid_to();
    QSeries q = restrict_to_curve(f.last.truncated(upto));
    if (delimited(cfg)) {
        out << f.name << "|";
        for (std::size_t i = 0; i < q.c.size(); ++i) out << (i ? "," : "") << q.c[i].str();
        out << "\n";
    } else {
        out << f.name << " restricted to the modular curve" << (f.j ? " (last component)" : "") << ":\n"
            << q.str() << "\n";
    }
    s.persist();
    return kOk;
}

// ---------------- hecke

std::string checked_list(const std::vector<int>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

int cmd_hecke(const Options& o, std::ostream& out) {
    Config cfg = resolve(o);
    Session s(cfg, o.compute);
    HeckeOperator T = operator_from(o.op_kind, o.op_arg);
    std::string p = T.kind() == HeckeOperator::Kind::Nu ? std::to_string(T.p()) : std::to_string(-T.p());

    if (is_table_span(o.name)) {
        Catalog cat(s.table, cfg.tables_truncation);
        TableChecker chk(cat);
        const auto& sp = chk.spectrum(o.name, T.str());
        for (const auto& part : sp.parts) {
            for (const auto& [lam, mult] : part.values) {
                if (delimited(cfg))
                    out << o.name << "|" << T.str() << "|" << p << "|" << lam.str() << "|" << part_name(part.part) << "|"
                        << mult << "\n";
                else
                    out << o.name << " " << part_name(part.part) << " part: " << T.str() << " eigenvalue " << lam.str()
                        << " multiplicity " << mult << " (certified through w^" << part.certified_to << ")\n";
            }
            if (part.unseparated || part.unresolved_degree)
                out << (delimited(cfg) ? "# " : "") << o.name << " " << part_name(part.part) << " part: "
                    << part.unseparated << " dimensions not separated, " << part.unresolved_degree
                    << " outside Q(r)\n";
        }
        s.persist();
        return kOk;
    }

    if (!Catalog::known(o.name)) throw UnknownForm("unknown form or span '" + o.name + "'");
    Catalog cat(s.table, cfg.truncation);
    const auto& f = cat.get(o.name);
    EigenReport rep = eigenvalue(f, T, s.table);
    s.persist();
    if (!rep.consistent()) throw NotAnEigenform(o.name + " is not an eigenform of " + T.str());
    if (delimited(cfg))
        out << o.name << "|" << T.str() << "|" << p << "|" << rep.eigenvalue.str() << "|"
            << checked_list(rep.coefficients_checked) << "\n";
    else
        out << o.name << " " << T.str() << " p=" << p << ": " << rep.eigenvalue.str() << "  (coefficients "
            << checked_list(rep.coefficients_checked) << " agree)\n";
    return kOk;
}

// ---------------- verify

int cmd_verify(const Options& o, std::ostream& out) {
    Config cfg = resolve(o);
    if (o.order) cfg.truncation = *o.order;
    cfg.validate();
    Session s(cfg, !o.no_compute);
    const auto& ids = identity_names();
    const auto& checks = structure_check_names();
    std::vector<std::string> todo;
    if (o.target == "all") {
        todo = ids;
        todo.insert(todo.end(), checks.begin(), checks.end());
    } else {
        todo.push_back(o.target);
    }
    Catalog cat(s.table, cfg.truncation);
    bool all_ok = true;
    for (const auto& id : todo) {
        IdentityReport rep;
        bool identity = std::find(ids.begin(), ids.end(), id) != ids.end();
        bool structure = std::find(checks.begin(), checks.end(), id) != checks.end();
        if (!identity && !structure) throw UnknownForm("unknown check '" + id + "'");
        try {
            rep = identity ? verify_identity(cat, id) : verify_structure(cat, id);
        } catch (const MissingOperatorTable&) {
            throw;
        } catch (const std::exception& e) {
            rep.id = id;
            rep.truncation = cfg.truncation;
            rep.pass = false;
            rep.details.push_back(std::string("error: ") + e.what());
        }
        all_ok = all_ok && rep.pass;
        if (delimited(cfg)) {
            out << rep.id << "|" << rep.anchor << "|" << rep.truncation << "|" << (rep.pass ? "pass" : "fail") << "\n";
        } else {
            out << (rep.pass ? "PASS " : "FAIL ") << rep.id << "  " << rep.anchor << "  W=" << rep.truncation << "\n";
            if (!rep.pass || todo.size() == 1)
                for (const auto& d : rep.details) out << "    " << d << "\n";
        }
    }
    s.persist();
    return all_ok ? kOk : kVerificationFailed;
}

// ---------------- tables

int cmd_tables(const Options& o, std::ostream& out) {
    Config cfg = resolve(o);
    if (o.order) cfg.tables_truncation = *o.order;
    Session s(cfg, !o.no_compute);
    Catalog cat(s.table, cfg.tables_truncation);
    TableChecker chk(cat);
    std::vector<TableClaim> todo;
    for (const auto& c : table_claims())
        if (o.target == "all" || c.id == o.target || c.span == o.target) todo.push_back(c);
    if (todo.empty()) throw UnknownForm("unknown table entry or span '" + o.target + "'");
    bool all_ok = true;
    for (const auto& c : todo) {
        ClaimResult r = chk.check(c);
        all_ok = all_ok && r.pass;
        if (delimited(cfg))
            out << c.id << "|" << c.op << "|" << c.expected << "|" << r.found << "|" << (r.pass ? "pass" : "fail") << "\n";
        else
            out << (r.pass ? "PASS " : "FAIL ") << c.id << "  " << c.op << "  expected " << c.expected << "  found "
                << r.found << "\n    " << r.detail << "\n";
        s.persist();
    }
    return all_ok ? kOk : kVerificationFailed;
}

// ---------------- cache

void write_table(const OperatorTable& t, const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp);
        f << t.serialize();
        if (!f) throw std::runtime_error("cannot write " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot replace " + path);
}

int cache_list(const Config& cfg, std::ostream& out) {
    OperatorTable t(cfg.table_meta());
    t.load(cfg.cache_path);
    bool d = delimited(cfg);
    if (!d)
        out << cfg.cache_path << ": precision_bits " << cfg.precision_bits << ", denominator bound "
            << cfg.denominator_bound.get_str() << "\n";
    std::map<EisensteinInteger, std::vector<int>> degrees;
    for (const auto& [k, m] : t.t_entries()) degrees[k.first].push_back(k.second);
    std::set<EisensteinInteger> keys;
    for (const auto& [a, img] : t.m_entries()) keys.insert(a);
    for (const auto& [a, v] : degrees) keys.insert(a);
    for (auto a : keys) {
        bool has_m = t.has_m(a);
        std::string deg = degrees.count(a) ? checked_list(degrees[a]) : "";
        if (d)
            out << a.str() << "|" << a.norm() << "|" << (has_m ? "m" : "") << "|" << deg << "\n";
        else
            out << "  " << a.str() << "  N=" << a.norm() << (has_m ? "  m" : "")
                << (deg.empty() ? "" : "  t in degrees " + deg) << "\n";
    }
    if (!d) out << t.m_entries().size() << " m entries, " << t.t_entries().size() << " t entries\n";
    return kOk;
}

int cache_compute(const Options& o, const Config& cfg, std::ostream& out) {
    if (!o.norms_up_to && o.cache_op.empty())
        throw CLI::ValidationError("cache compute", "give --norms-up-to N and/or --hecke OP --degree n");
    CacheLock lock(cfg.cache_path, true, !o.no_wait);
    require_same_meta(cfg);
    OperatorTable t(cfg.table_meta());
    t.load(cfg.cache_path, false);
    std::size_t before_m = t.m_entries().size(), before_t = t.t_entries().size();
    if (o.norms_up_to)
        for (int n = 1; n <= *o.norms_up_to; ++n)
            for (auto a : enumerate_norm(n)) t.m(a);
    if (!o.cache_op.empty()) {
        if (o.degree < 1) throw CLI::ValidationError("--degree", "must be at least 1");
        HeckeOperator T = HeckeOperator::parse(o.cache_op);
        std::vector<EisensteinInteger> as;
        if (T.kind() == HeckeOperator::Kind::Nu) as = {T.nu(), T.nu().conj()};
        else as = {EisensteinInteger{T.p(), 0}};
        for (auto a : as) {
            t.m(a);
            for (int n = 1; n <= o.degree; ++n) t.t(a, n);
        }
    }
    t.save(cfg.cache_path, false);
    out << "computed " << t.m_entries().size() - before_m << " m and " << t.t_entries().size() - before_t
        << " t entries into " << cfg.cache_path << "\n";
    return kOk;
}

// recompute every cached entry from scratch, report differences, write the fresh values
int cache_refresh(const Options& o, const Config& cfg, std::ostream& out) {
    CacheLock lock(cfg.cache_path, true, !o.no_wait);
    OperatorTable old(cfg.table_meta());
    old.load(cfg.cache_path, false);
    OperatorTable fresh(cfg.table_meta());
    int changed = 0;
    for (const auto& [a, img] : old.m_entries()) {
        if (!(fresh.m(a) == img)) {
            ++changed;
            out << "m " << a.str() << " changed\n";
        }
    }
    for (const auto& [k, mat] : old.t_entries()) {
        if (!(fresh.t(k.first, k.second) == mat)) {
            ++changed;
            out << "t " << k.first.str() << " degree " << k.second << " changed\n";
        }
    }
    write_table(fresh, cfg.cache_path);
    out << "refreshed " << old.m_entries().size() << " m and " << old.t_entries().size() << " t entries, " << changed
        << " changed\n";
    return kOk;
}

int cmd_cache(const Options& o, std::ostream& out) {
    Config cfg = resolve(o);
    if (o.cache_action == "list") return cache_list(cfg, out);
    if (o.cache_action == "compute") return cache_compute(o, cfg, out);
    if (o.cache_action == "refresh") return cache_refresh(o, cfg, out);
    throw CLI::ValidationError("cache", "action is list, compute or refresh");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Picard modular forms: Fourier-Jacobi expansions, Hecke eigenvalues, identity checks", "picard"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    Options o;
    app.add_option("--config", o.config_file, "key = value configuration file");
    app.add_option("-W,--truncation", o.truncation, "Fourier-Jacobi truncation (default 32)");
    app.add_option("--precision", o.precision, "working precision in bits for operator tables");
    app.add_option("--denominator-bound", o.denominator_bound, "rational reconstruction bound");
    app.add_option("--cache", o.cache, "operator cache file");
    app.add_option("--format", o.format, "human or delimited")->check(CLI::IsMember({"human", "delimited"}));
    app.add_flag("--compute", o.compute, "compute missing operator tables for hecke");
    app.add_flag("--no-compute", o.no_compute, "fail on a missing operator table instead of computing it");

    auto* build = app.add_subcommand("build", "print the expansion of a named form");
    build->add_option("name", o.name)->required();
    build->add_option("--order", o.order, "last power of w to print");
    build->add_flag("--serialize", o.serialize, "one line per (n, monomial, coefficient)");

    auto* hecke = app.add_subcommand("hecke", "Hecke eigenvalue of a form, or the spectrum of a span");
    hecke->add_option("name", o.name)->required();
    hecke->add_option("kind", o.op_kind, "T (for T_nu) or Tm (for T_{-p})")->required();
    hecke->add_option("arg", o.op_arg, "nu = 1 mod 3, a split prime, or p for Tm")->required();

    auto* verify = app.add_subcommand("verify", "check identities and module presentations");
    verify->add_option("target", o.target, "all or a check id");
    verify->add_option("--order", o.order, "truncation to check through");

    auto* cache = app.add_subcommand("cache", "inspect or fill the operator cache");
    cache->add_option("action", o.cache_action, "list, compute or refresh")->required();
    cache->add_option("--norms-up-to", o.norms_up_to, "m tables for every alpha of norm up to N");
    cache->add_option("--hecke", o.cache_op, "operator whose t tables to compute");
    cache->add_option("--degree", o.degree, "t tables through this degree");
    cache->add_flag("--no-wait", o.no_wait, "fail at once if another process holds the cache");

    auto* tables = app.add_subcommand("tables", "check the Hecke eigenvalue table entries");
    tables->add_option("target", o.target, "all, an entry id or a span id");
    tables->add_option("--order", o.order, "truncation for the spans (default tables_truncation)");

    auto* restrict_ = app.add_subcommand("restrict", "q-expansion of the restriction to the modular curve");
    restrict_->add_option("name", o.name)->required();
    restrict_->add_option("--order", o.order, "last power of q");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*build) return cmd_build(o, out);
        if (*restrict_) return cmd_restrict(o, out);
        if (*hecke) return cmd_hecke(o, out);
        if (*verify) return cmd_verify(o, out);
        if (*tables) return cmd_tables(o, out);
        if (*cache) return cmd_cache(o, out);
    } catch (const MissingOperatorTable& e) {
        err << "missing operator table: " << e.what() << "\n"
            << "run 'picard cache compute' or pass --compute\n";
        return kMissingCache;
    } catch (const NotAnEigenform& e) {
        err << e.what() << "\n";
        return kVerificationFailed;
    } catch (const ReconstructionFailed& e) {
        err << "reconstruction failed: " << e.what() << "\n";
        return kReconstructionFailed;
    } catch (const PrecisionExhausted& e) {
        err << "precision exhausted: " << e.what() << "\n";
        return kReconstructionFailed;
    } catch (const ValidationFailed& e) {
        err << "model validation failed: " << e.what() << "\n";
        return kReconstructionFailed;
    } catch (const TruncationTooShallow& e) {
        err << e.what() << "\nraise -W\n";
        return kUsage;
    } catch (const CLI::Error& e) {
        err << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace picard
