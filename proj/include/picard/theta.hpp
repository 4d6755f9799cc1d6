// Analytic model of the sections X, Y, Z and exact Shintani operators m_a, t_a.
#pragma once

#include "picard/eisenstein.hpp"
#include "picard/linalg.hpp"
#include "picard/mpcomplex.hpp"
#include "picard/sections.hpp"

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace picard {

struct PrecisionExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ReconstructionFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CosetEnumerationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingOperatorTable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct LockHeld : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// sets the working MPFR precision for its lifetime
class PrecisionScope {
public:
    explicit PrecisionScope(int bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned old_;
};

Real real_pi();
Real real_sqrt3();
Complex complex_rho();
Complex to_complex(EisensteinInteger x);
Complex to_complex(const Cyc& x);

// theta basis of H^0(E, L^n): sum over m = r (mod 3n), m in Z + n/2, of
// exp(A m^2 + B m + 2 pi i m u/sqrt(-3)), times exp(-pi n u^2/sqrt3)
class AnalyticModel {
public:
    static AnalyticModel bootstrap(int precision_bits);

    int precision_bits() const { return bits_; }
    int tail_terms() const { return kmax_; }
    const Real& tail_bound() const { return tail_; }

    // values of the 3n basis functions at u, no lattice reduction
    std::vector<Complex> basis(int n, const Complex& u) const;
    // f(u + xi) = factor(n, xi, u) f(u) for xi in sqrt(-3) O
    Complex factor(int n, const Complex& xi, const Complex& u) const;
    // X, Y, Z at u (reduced into the fundamental domain first)
    std::array<Complex, 3> eval(const Complex& u) const;
    std::array<Complex, 3> eval_unreduced(const Complex& u) const;

    // coefficient vectors of X, Y, Z in the degree-1 basis
    const std::array<std::array<Complex, 3>, 3>& coefficients() const { return coef_; }

    // replaces X by w*X (w a cube root of unity); used to probe scale invariance
    AnalyticModel with_x_scaled(const Cyc& w) const;

    struct Diagnostics {
        Real cubic_residual, y0_error, x0_error, mu6_residual, periodicity_residual;
    };
    Diagnostics diagnose() const;

private:
    int bits_ = 0;
    int kmax_ = 0;
    Real tail_;
    std::array<std::array<Complex, 3>, 3> coef_;
};

// rational reconstruction of both coordinates of x in the basis {1, r}
Cyc exactify(const Complex& x, const mpz_class& denominator_bound, const Real& error);

// complex least squares A x = B (columns of B solved together), Householder QR
struct LstsqResult {
    std::vector<std::vector<Complex>> x;  // x[col][unknown]
    Real condition;
    Real residual;
};
LstsqResult lstsq(std::vector<std::vector<Complex>> a, std::vector<std::vector<Complex>> b);

struct TableMeta {
    int precision_bits = 256;
    mpz_class denominator_bound = 531441;  // 3^12
};

class OperatorTable {
public:
    explicit OperatorTable(TableMeta meta = {});

    const TableMeta& meta() const { return meta_; }
    void allow_compute(bool on) { compute_ = on; }
    bool compute_allowed() const { return compute_; }

    // m_a images of (X, Y, Z), degree N(a)
    const ImageTriple& m(EisensteinInteger a);
    // t_a as a matrix from degree n N(a) to degree n (rows: degree-n monomials)
    const Matrix& t(EisensteinInteger a, int n);

    bool has_m(EisensteinInteger a) const { return m_.count(a) > 0; }
    bool has_t(EisensteinInteger a, int n) const { return t_.count({a, n}) > 0; }
    const std::map<EisensteinInteger, ImageTriple>& m_entries() const { return m_; }
    const std::map<std::pair<EisensteinInteger, int>, Matrix>& t_entries() const { return t_; }

    // apply m_a and t_a to a section
    SectionElement apply_m(EisensteinInteger a, const SectionElement& s);
    SectionElement apply_t(EisensteinInteger a, const SectionElement& s);

    const AnalyticModel& model();

    // numerical solves without touching the table
    ImageTriple compute_m_numeric(EisensteinInteger a);
    Matrix compute_t_numeric(EisensteinInteger a, int n);

    // cache file: shared lock to read, exclusive to write; pass lock = false when a CacheLock is held
    void load(const std::string& path, bool lock = true);
    void save(const std::string& path, bool lock = true) const;
    // merge entries of another table; throws if an entry disagrees
    void merge(const OperatorTable& o);
    bool dirty() const { return dirty_; }

    std::string serialize() const;
    static OperatorTable deserialize(const std::string& text);

    void clear() {
        m_.clear();
        t_.clear();
    }

private:
    TableMeta meta_;
    bool compute_ = true;
    bool dirty_ = false;
    std::map<EisensteinInteger, ImageTriple> m_;
    std::map<std::pair<EisensteinInteger, int>, Matrix> t_;
    std::unique_ptr<AnalyticModel> model_;
};

// advisory lock on path + ".lock"; with wait = false a held lock throws LockHeld at once
class CacheLock {
public:
    CacheLock(const std::string& path, bool exclusive, bool wait = true);
    ~CacheLock();
    CacheLock(const CacheLock&) = delete;
    CacheLock& operator=(const CacheLock&) = delete;

private:
    int fd_;
};

// right-to-left composition: images for a*b given images for a and for b
ImageTriple compose(const ImageTriple& ma, const ImageTriple& mb);

// coset representatives of O / a O
std::vector<EisensteinInteger> coset_reps(EisensteinInteger a);

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> lines;
    std::vector<SectionElement> phi0;  // phi_0 through w^3
};
// rebuilds theta_0 through w^3 from the table and checks phi_0 = theta_0^3
ValidationReport validate_model(OperatorTable& table);

}  // namespace picard
