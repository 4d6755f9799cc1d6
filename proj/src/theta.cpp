#include "picard/theta.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace picard {

namespace {
unsigned bits_to_digits(int bits) { return static_cast<unsigned>(std::ceil(bits * 0.30103)) + 5; }
}  // namespace

PrecisionScope::PrecisionScope(int bits) : old_(Real::default_precision()) {
    Real::default_precision(bits_to_digits(bits));
}
PrecisionScope::~PrecisionScope() { Real::default_precision(old_); }

Real real_pi() {
    Real p;
    mpfr_const_pi(p.backend().data(), MPFR_RNDN);
    return p;
}

Real real_sqrt3() { return sqrt(Real(3)); }

Complex complex_rho() { return {Real(-1) / 2, real_sqrt3() / 2}; }

Complex to_complex(EisensteinInteger x) {
    Real b(static_cast<long>(x.b));
    return {Real(static_cast<long>(x.a)) - b / 2, b * real_sqrt3() / 2};
}

Complex to_complex(const Cyc& x) {
    Real a(x.a.get_mpq_t()), b(x.b.get_mpq_t());
    return {a - b / 2, b * real_sqrt3() / 2};
}

// ---------------- model

namespace {

struct Params {
    Complex A, B;
};

Params params(int n) {
    Real pi = real_pi(), s3 = real_sqrt3();
    Complex i(Real(0), Real(1));
    Complex rho = complex_rho();
    Complex A = i * rho * (pi / (3 * n));
    // C = pi n sqrt3 (1 - r)
    Complex C = (Complex(1) - rho) * (pi * s3 * n);
    Complex B = (-C - A * Real(9 * n * n)) * (Real(1) / (3 * n));
    return {A, B};
}

Complex sqrt_m3() { return {Real(0), real_sqrt3()}; }

// nearest lattice vector of sqrt(-3) O
std::pair<Complex, EisensteinInteger> reduce(const Complex& u) {
    Complex w = u / sqrt_m3();
    Real t = w.im / (real_sqrt3() / 2);
    Real s = w.re + t / 2;
    auto p = static_cast<std::int64_t>(round(s).convert_to<long>());
    auto q = static_cast<std::int64_t>(round(t).convert_to<long>());
    EisensteinInteger e{p, q};
    Complex xi = sqrt_m3() * to_complex(e);
    return {u - xi, e};
}

std::array<Complex, 3> combine(const std::array<std::array<Complex, 3>, 3>& coef, const std::vector<Complex>& b) {
    std::array<Complex, 3> out;
    for (int g = 0; g < 3; ++g)
        for (int j = 0; j < 3; ++j) out[g] += coef[g][j] * b[j];
    return out;
}

std::array<Complex, 3> cross(const std::array<Complex, 3>& a, const std::array<Complex, 3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

std::vector<Complex> AnalyticModel::basis(int n, const Complex& u) const {
    auto [A, B] = params(n);
    Real pi = real_pi();
    Complex t = u / sqrt_m3();
    Complex twopiit = Complex(Real(0), 2 * pi) * t;
    Complex pref = cexp(u * u * (-(pi * n) / real_sqrt3()));
    std::vector<Complex> out;
    int K = kmax_ / std::max(1, n / 2) + 2;
    for (int i = 0; i < 3 * n; ++i) {
        Complex s;
        for (int k = -K; k <= K; ++k) {
            Real m = Real(n) / 2 + i + 3 * n * k;
            s += cexp(A * (m * m) + B * m + twopiit * m);
        }
        out.push_back(pref * s);
    }
    return out;
}

Complex AnalyticModel::factor(int n, const Complex& xi, const Complex& u) const {
    return cexp((xi.conj() * u - complex_rho() * xi.norm2()) * (2 * real_pi() * n / real_sqrt3()));
}

std::array<Complex, 3> AnalyticModel::eval_unreduced(const Complex& u) const {
    PrecisionScope ps(bits_);
    return combine(coef_, basis(1, u));
}

std::array<Complex, 3> AnalyticModel::eval(const Complex& u) const {
    PrecisionScope ps(bits_);
    auto [u0, e] = reduce(u);
    auto v = combine(coef_, basis(1, u0));
    if (e.is_zero()) return v;
    Complex f = factor(1, sqrt_m3() * to_complex(e), u0);
    for (auto& x : v) x *= f;
    return v;
}

AnalyticModel AnalyticModel::bootstrap(int precision_bits) {
    if (precision_bits < 128) throw std::invalid_argument("bootstrap_model: precision_bits < 128");
    PrecisionScope ps(precision_bits);
    AnalyticModel mdl;
    mdl.bits_ = precision_bits;
    // Gaussian decay of the n=1 sums is about exp(-8.16 k^2); linear terms at most ~40 k
    double need = precision_bits * std::log(2.0) + 30;
    int K = 2;
    while (8.16 * (K - 1) * (K - 1) - 40.0 * K < need) ++K;
    mdl.kmax_ = K;
    mdl.tail_ = exp(Real(-(8.16 * (K - 1) * (K - 1) - 40.0 * K)));

    // matrix of z -> -r^2 z on the basis, fitted at sample points
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Complex g = Complex(1) + complex_rho();
    std::vector<Complex> pts;
    for (int i = 0; i < 8; ++i) pts.emplace_back(Real(uni(rng)), Real(uni(rng)));
    std::vector<std::vector<Complex>> M, R;
    for (auto& p : pts) {
        M.push_back(mdl.basis(1, p));
        auto pg = p * g;
        R.push_back(mdl.basis(1, pg));
    }
    auto fit = lstsq(M, R);
    // S[r][s] = x[r][s]; eigenvectors of S^T
    std::array<std::array<Complex, 3>, 3> ST;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) ST[i][j] = fit.x[j][i];
    auto eigvec = [&](const Complex& lam) {
        std::array<std::array<Complex, 3>, 3> A = ST;
        for (int i = 0; i < 3; ++i) A[i][i] -= lam;
        std::array<Complex, 3> best;
        Real bn = -1;
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
                auto v = cross(A[a], A[b]);
                Real nv = v[0].norm2() + v[1].norm2() + v[2].norm2();
                if (nv > bn) {
                    bn = nv;
                    best = v;
                }
            }
        return best;
    };
    auto vx = eigvec(g);
    auto v1 = eigvec(Complex(1));
    auto vm = eigvec(Complex(-1));
    auto ev = [&](const std::array<Complex, 3>& v, const Complex& u) {
        auto b = mdl.basis(1, u);
        return v[0] * b[0] + v[1] * b[1] + v[2] * b[2];
    };
    Complex a = Complex(1) / ev(v1, Complex(0));
    // cubic relation x^3 + beta o^2 m + gamma m^3 = 0
    std::vector<std::vector<Complex>> CM, CR;
    for (auto& p : pts) {
        Complex x = ev(vx, p), o = ev(v1, p), m = ev(vm, p);
        CM.push_back({o * o * m, m * m * m});
        CR.push_back({-(x * x * x)});
    }
    auto cf = lstsq(CM, CR);
    Complex beta = cf.x[0][0], gamma = cf.x[0][1];
    Complex b = csqrt(a * a * gamma * Complex(3) / beta);
    if (b.re < 0) b = -b;
    Complex c = ccbrt(complex_rho() * b * a * a * Complex(-6) / beta);
    for (int j = 0; j < 3; ++j) {
        mdl.coef_[0][j] = c * vx[j];
        mdl.coef_[1][j] = a * v1[j] + b * vm[j];
        mdl.coef_[2][j] = a * v1[j] - b * vm[j];
    }
    auto d = mdl.diagnose();
    Real tol = pow(Real(2), -precision_bits / 2);
    if (d.cubic_residual > tol || d.y0_error > tol || d.mu6_residual > tol)
        throw PrecisionExhausted("bootstrap_model: constraint residuals too large at this precision");
    return mdl;
}

AnalyticModel AnalyticModel::with_x_scaled(const Cyc& w) const {
    PrecisionScope ps(bits_);
    AnalyticModel m = *this;
    Complex cw = to_complex(w);
    for (auto& x : m.coef_[0]) x *= cw;
    return m;
}

AnalyticModel::Diagnostics AnalyticModel::diagnose() const {
    PrecisionScope ps(bits_);
    Diagnostics d;
    d.cubic_residual = d.y0_error = d.x0_error = d.mu6_residual = d.periodicity_residual = 0;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> uni(-0.9, 0.9);
    Complex rho = complex_rho();
    Complex g = Complex(1) + rho;
    auto v0 = eval_unreduced(Complex(0));
    d.y0_error = (v0[1] - Complex(1)).abs();
    d.x0_error = v0[0].abs();
    for (int i = 0; i < 6; ++i) {
        Complex u(Real(uni(rng)), Real(uni(rng)));
        auto v = eval_unreduced(u);
        Complex res = v[0] * v[0] * v[0] - rho * (v[1] * v[1] * v[1] - v[2] * v[2] * v[2]);
        d.cubic_residual = std::max(d.cubic_residual, Real(res.abs()));
        auto vg = eval_unreduced(u * g);
        d.mu6_residual = std::max(d.mu6_residual, Real((vg[0] - g * v[0]).abs()));
        d.mu6_residual = std::max(d.mu6_residual, Real((vg[1] - v[2]).abs()));
        d.mu6_residual = std::max(d.mu6_residual, Real((vg[2] - v[1]).abs()));
        for (auto e : {EisensteinInteger{1, 0}, EisensteinInteger{0, 1}, EisensteinInteger{2, 1}}) {
            Complex xi = sqrt_m3() * to_complex(e);
            auto vs = eval_unreduced(u + xi);
            Complex f = factor(1, xi, u);
            for (int k = 0; k < 3; ++k) {
                Real r = (vs[k] - f * v[k]).abs() / (Real(1) + (f * v[k]).abs());
                d.periodicity_residual = std::max(d.periodicity_residual, r);
            }
        }
    }
    return d;
}

// ---------------- numerics

LstsqResult lstsq(std::vector<std::vector<Complex>> a, std::vector<std::vector<Complex>> b) {
    std::size_t m = a.size(), n = a.empty() ? 0 : a[0].size();
    std::size_t k = b.empty() ? 0 : b[0].size();
    if (m < n) throw std::invalid_argument("lstsq: underdetermined");
    Real maxd = 0, mind = -1;
    for (std::size_t j = 0; j < n; ++j) {
        Real nrm2 = 0;
        for (std::size_t i = j; i < m; ++i) nrm2 += a[i][j].norm2();
        Real nrm = sqrt(nrm2);
        if (nrm == 0) throw PrecisionExhausted("lstsq: rank deficient");
        Real ax = a[j][j].abs();
        Complex phase = ax == 0 ? Complex(1) : a[j][j] * (Real(1) / ax);
        Complex alpha = -(phase * nrm);
        std::vector<Complex> v(m - j);
        for (std::size_t i = j; i < m; ++i) v[i - j] = a[i][j];
        v[0] -= alpha;
        Real vn = 0;
        for (auto& x : v) vn += x.norm2();
        if (vn != 0) {
            auto apply = [&](auto&& col_get) {
                Complex dot;
                for (std::size_t i = 0; i < v.size(); ++i) dot += v[i].conj() * col_get(i + j);
                dot *= Real(2) / vn;
                for (std::size_t i = 0; i < v.size(); ++i) col_get(i + j) -= v[i] * dot;
            };
            for (std::size_t c = j; c < n; ++c) apply([&](std::size_t i) -> Complex& { return a[i][c]; });
            for (std::size_t c = 0; c < k; ++c) apply([&](std::size_t i) -> Complex& { return b[i][c]; });
        }
        Real d = a[j][j].abs();
        if (d > maxd) maxd = d;
        if (mind < 0 || d < mind) mind = d;
    }
    LstsqResult res;
    res.condition = mind > 0 ? Real(maxd / mind) : Real(-1);
    res.residual = 0;
    for (std::size_t i = n; i < m; ++i)
        for (std::size_t c = 0; c < k; ++c) res.residual += b[i][c].norm2();
    res.residual = sqrt(res.residual);
    res.x.assign(k, std::vector<Complex>(n));
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t jj = n; jj-- > 0;) {
            Complex s = b[jj][c];
            for (std::size_t l = jj + 1; l < n; ++l) s -= a[jj][l] * res.x[c][l];
            res.x[c][jj] = s / a[jj][jj];
        }
    return res;
}

namespace {

// best approximation p/q with q <= bound via continued fractions
std::optional<mpq_class> rational_reconstruct(const Real& x, const mpz_class& bound, const Real& tol) {
    mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    Real r = x;
    for (int it = 0; it < 200; ++it) {
        Real fl = floor(r);
        mpz_class a;
        {
            // exact conversion of the integer part
            mpfr_get_z(a.get_mpz_t(), fl.backend().data(), MPFR_RNDN);
        }
        mpz_class p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > bound) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        Real approx = Real(mpq_class(p1, q1).get_mpq_t());
        if (abs(Real(x - approx)) <= tol) return mpq_class(p1, q1);
        Real frac = r - fl;
        if (frac == 0) break;
        r = 1 / frac;
    }
    if (q1 != 0) {
        Real approx = Real(mpq_class(p1, q1).get_mpq_t());
        if (abs(Real(x - approx)) <= tol) return mpq_class(p1, q1);
    }
    return std::nullopt;
}

}  // namespace

Cyc exactify(const Complex& x, const mpz_class& bound, const Real& error) {
    Real lim = Real(1) / (Real(4) * Real(mpz_class(bound * bound).get_mpz_t()));
    if (error >= lim) throw ReconstructionFailed("exactify: error bound too large for the denominator bound");
    Real b = x.im / (real_sqrt3() / 2);
    Real a = x.re + b / 2;
    auto qa = rational_reconstruct(a, bound, error * 4);
    auto qb = rational_reconstruct(b, bound, error * 4);
    if (!qa || !qb) throw ReconstructionFailed("exactify: no rational candidate within the error ball");
    Cyc c(*qa, *qb);
    if ((to_complex(c) - x).abs() > error * 8) throw ReconstructionFailed("exactify: verification residual too large");
    return c;
}

// ---------------- operator table

ImageTriple compose(const ImageTriple& ma, const ImageTriple& mb) {
    return {substitute(mb[0], ma), substitute(mb[1], ma), substitute(mb[2], ma)};
}

std::vector<EisensteinInteger> coset_reps(EisensteinInteger a) {
    std::int64_t N = a.norm();
    if (N == 0) throw CosetEnumerationError("coset_reps: zero modulus");
    auto fdiv = [](std::int64_t x, std::int64_t y) {
        std::int64_t q = x / y;
        if ((x % y != 0) && ((x < 0) != (y < 0))) --q;
        return q;
    };
    std::set<EisensteinInteger> reps;
    for (std::int64_t i = 0; i < N; ++i)
        for (std::int64_t j = 0; j < N; ++j) {
            EisensteinInteger x{i, j};
            EisensteinInteger t = x * a.conj();
            EisensteinInteger q{fdiv(t.a, N), fdiv(t.b, N)};
            reps.insert(x - q * a);
        }
    if (static_cast<std::int64_t>(reps.size()) != N)
        throw CosetEnumerationError("coset_reps: found " + std::to_string(reps.size()) + " classes, expected " +
                                    std::to_string(N));
    return {reps.begin(), reps.end()};
}

OperatorTable::OperatorTable(TableMeta meta) : meta_(std::move(meta)) {}

const AnalyticModel& OperatorTable::model() {
    if (!model_) model_ = std::make_unique<AnalyticModel>(AnalyticModel::bootstrap(meta_.precision_bits));
    return *model_;
}

namespace {

// jittered grid in the fundamental parallelogram of sqrt(-3) O
std::vector<Complex> sample_points(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jit(-0.25, 0.25);
    auto k = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(count))));
    Complex w1 = sqrt_m3();
    Complex w2 = sqrt_m3() * complex_rho();
    std::vector<Complex> pts;
    for (std::size_t i = 0; i < k && pts.size() < count; ++i)
        for (std::size_t j = 0; j < k && pts.size() < count; ++j) {
            Real s = (Real(static_cast<double>(i) + 0.5 + jit(rng)) / static_cast<double>(k)) - Real(0.5);
            Real t = (Real(static_cast<double>(j) + 0.5 + jit(rng)) / static_cast<double>(k)) - Real(0.5);
            pts.push_back(w1 * s + w2 * t);
        }
    return pts;
}

// values of all reduced monomials of degree n at (x, y, z)
std::vector<Complex> monomial_values(int n, const std::array<Complex, 3>& v) {
    std::vector<Complex> yp{Complex(1)}, zp{Complex(1)};
    for (int i = 1; i <= n; ++i) {
        yp.push_back(yp.back() * v[1]);
        zp.push_back(zp.back() * v[2]);
    }
    std::vector<Complex> out(graded_dim(n));
    Complex xp(1);
    for (int a = 0; a <= 2 && a <= n; ++a) {
        for (int b = 0; b <= n - a; ++b) out[mono_index(a, b, n)] = xp * yp[b] * zp[n - a - b];
        xp *= v[0];
    }
    return out;
}

Real max_abs(const std::vector<Complex>& v) {
    Real m = 0;
    for (auto& x : v) {
        Real a = x.abs();
        if (a > m) m = a;
    }
    return m;
}

}  // namespace

ImageTriple OperatorTable::compute_m_numeric(EisensteinInteger alpha) {
    const AnalyticModel& mdl = model();
    PrecisionScope ps(mdl.precision_bits());
    int N = static_cast<int>(alpha.norm());
    std::size_t dim = graded_dim(N);
    auto pts = sample_points(dim + 8, 1000 + static_cast<std::uint64_t>(N));
    Complex ca = to_complex(alpha);
    std::vector<std::vector<Complex>> A, B;
    for (auto& z : pts) {
        auto row = monomial_values(N, mdl.eval(z));
        auto rhs = mdl.eval(ca * z);
        Real sc = Real(1) / max_abs(row);
        for (auto& x : row) x *= sc;
        A.push_back(std::move(row));
        B.push_back({rhs[0] * sc, rhs[1] * sc, rhs[2] * sc});
    }
    auto sol = lstsq(A, B);
    Real err = pow(Real(2), -mdl.precision_bits() / 3);
    if (sol.condition < 0 || sol.condition * pow(Real(2), -mdl.precision_bits() + 8) > err)
        throw ReconstructionFailed("compute_m: sampling system too ill-conditioned");
    ImageTriple out{SectionElement(N), SectionElement(N), SectionElement(N)};
    for (int g = 0; g < 3; ++g)
        for (std::size_t i = 0; i < dim; ++i) out[g][i] = exactify(sol.x[g][i], meta_.denominator_bound, err);
    check_relation(out);
    // independent points
    auto chk = sample_points(5, 777 + static_cast<std::uint64_t>(N));
    for (auto& z : chk) {
        auto mv = monomial_values(N, mdl.eval(z));
        auto rhs = mdl.eval(ca * z);
        Real sc = Real(1) / max_abs(mv);
        for (int g = 0; g < 3; ++g) {
            Complex s;
            for (std::size_t i = 0; i < dim; ++i)
                if (!out[g][i].is_zero()) s += to_complex(out[g][i]) * mv[i];
            if (((s - rhs[g]) * sc).abs() > err) throw ReconstructionFailed("compute_m: back-substitution check failed");
        }
    }
    return out;
}

Matrix OperatorTable::compute_t_numeric(EisensteinInteger alpha, int n) {
    const AnalyticModel& mdl = model();
    PrecisionScope ps(mdl.precision_bits());
    int N = static_cast<int>(alpha.norm());
    int src = n * N;
    std::size_t rows = graded_dim(n), cols = graded_dim(src);
    auto reps = coset_reps(alpha);
    std::vector<Complex> cs;
    for (auto r : reps) cs.push_back(sqrt_m3() * to_complex(r));
    Complex ca = to_complex(alpha);
    Complex cinv = Complex(1) / ca;
    Real pi = real_pi(), s3 = real_sqrt3();
    Complex rho = complex_rho();
    auto pts = sample_points(rows + 8, 5000 + static_cast<std::uint64_t>(N * 100 + n));
    std::vector<std::vector<Complex>> A, B;
    for (auto& z : pts) {
        auto row = monomial_values(n, mdl.eval(z));
        std::vector<Complex> rhs(cols);
        for (auto& c : cs) {
            auto vals = monomial_values(src, mdl.eval((z + c) * cinv));
            Complex e = cexp((rho * c.norm2() - c.conj() * z) * (2 * pi * n / s3));
            for (std::size_t j = 0; j < cols; ++j) rhs[j] += vals[j] * e;
        }
        Real sc = Real(1) / max_abs(row);
        for (auto& x : row) x *= sc;
        for (auto& x : rhs) x *= sc;
        A.push_back(std::move(row));
        B.push_back(std::move(rhs));
    }
    auto sol = lstsq(A, B);
    Real err = pow(Real(2), -mdl.precision_bits() / 3);
    if (sol.condition < 0 || sol.condition * pow(Real(2), -mdl.precision_bits() + 8) > err)
        throw ReconstructionFailed("compute_t: sampling system too ill-conditioned");
    Matrix out(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) out(i, j) = exactify(sol.x[j][i], meta_.denominator_bound, err);
    return out;
}

namespace {

template <class F>
auto with_retries(OperatorTable& tbl, std::unique_ptr<AnalyticModel>& model, TableMeta& meta, F&& f) {
    int base = meta.precision_bits;
    mpz_class base_bound = meta.denominator_bound;
    for (int attempt = 0;; ++attempt) {
        try {
            auto r = f();
            if (attempt) {
                meta.precision_bits = base;
                meta.denominator_bound = base_bound;
                model.reset();
            }
            return r;
        } catch (const ReconstructionFailed&) {
            if (attempt == 2) {
                meta.precision_bits = base;
                meta.denominator_bound = base_bound;
                model.reset();
                throw;
            }
            // double the bound and the working precision
            meta.denominator_bound *= meta.denominator_bound;
            meta.precision_bits *= 2;
            model.reset();
            (void)tbl;
        }
    }
}

}  // namespace

const ImageTriple& OperatorTable::m(EisensteinInteger a) {
    if (a.is_zero()) throw std::invalid_argument("m: zero");
    if (a.is_unit()) {
        static std::map<EisensteinInteger, ImageTriple> unit_images = [] {
            std::map<EisensteinInteger, ImageTriple> m;
            for (auto u : units()) m.emplace(u, cusp::unit_action(u));
            return m;
        }();
        return unit_images.at(a);
    }
    if (auto it = m_.find(a); it != m_.end()) return it->second;
    auto f = factor(a);
    ImageTriple img;
    if (f.primes.size() == 1 && f.primes[0].second == 1 && f.unit == EisensteinInteger{1}) {
        if (!compute_) throw MissingOperatorTable("no m table for " + a.str());
        img = with_retries(*this, model_, meta_, [&] { return compute_m_numeric(a); });
    } else {
        img = m(f.unit);
        for (auto& [pi, e] : f.primes)
            for (int i = 0; i < e; ++i) img = compose(img, m(pi));
    }
    dirty_ = true;
    return m_.emplace(a, std::move(img)).first->second;
}

const Matrix& OperatorTable::t(EisensteinInteger a, int n) {
    if (auto it = t_.find({a, n}); it != t_.end()) return it->second;
    Matrix mat;
    int N = static_cast<int>(a.norm());
    if (n == 0) {
        mat = Matrix(1, 1);
        mat(0, 0) = Cyc(N);
    } else if (a.is_unit()) {
        // single coset: t_u = m_{u^-1}
        auto inv = m(a.conj());
        mat = Matrix(graded_dim(n), graded_dim(n));
        for (std::size_t j = 0; j < graded_dim(n); ++j) {
            auto mo = mono_at(n, j);
            auto col = substitute(SectionElement::monomial(mo.a, mo.b, mo.c), inv);
            for (std::size_t i = 0; i < graded_dim(n); ++i) mat(i, j) = col[i];
        }
        return t_.emplace(std::pair{a, n}, std::move(mat)).first->second;
    } else {
        if (!compute_) throw MissingOperatorTable("no t table for " + a.str() + " in degree " + std::to_string(n));
        mat = with_retries(*this, model_, meta_, [&] { return compute_t_numeric(a, n); });
    }
    dirty_ = true;
    return t_.emplace(std::pair{a, n}, std::move(mat)).first->second;
}

SectionElement OperatorTable::apply_m(EisensteinInteger a, const SectionElement& s) { return substitute(s, m(a)); }

SectionElement OperatorTable::apply_t(EisensteinInteger a, const SectionElement& s) {
    int N = static_cast<int>(a.norm());
    if (s.degree() % N != 0) throw std::invalid_argument("apply_t: degree not divisible by N(a)");
    int n = s.degree() / N;
    const Matrix& mt = t(a, n);
    SectionElement out(n);
    auto v = mt.apply(s.coeffs());
    for (std::size_t i = 0; i < out.dim(); ++i) out[i] = std::move(v[i]);
    return out;
}

// ---------------- cache

std::string OperatorTable::serialize() const {
    std::ostringstream os;
    os << "picard-operator-cache 1\n";
    os << "precision_bits " << meta_.precision_bits << "\n";
    os << "denominator_bound " << meta_.denominator_bound.get_str() << "\n";
    const char* gen[3] = {"X", "Y", "Z"};
    for (auto& [a, img] : m_)
        for (int g = 0; g < 3; ++g) os << "m " << a.str() << " " << gen[g] << " " << img[g].str() << "\n";
    for (auto& [key, mat] : t_) {
        bool any = false;
        for (std::size_t i = 0; i < mat.rows(); ++i)
            for (std::size_t j = 0; j < mat.cols(); ++j)
                if (!mat(i, j).is_zero() || (!any && i + 1 == mat.rows() && j + 1 == mat.cols())) {
                    os << "t " << key.first.str() << " " << key.second << " " << i << " " << j << " "
                       << mat(i, j).str() << "\n";
                    any = true;
                }
    }
    return os.str();
}

namespace {

EisensteinInteger parse_ei(const std::string& s) {
    Cyc c = Cyc::parse(s);
    if (!c.is_integral()) throw ParseError("not an Eisenstein integer: " + s);
    return {c.a.get_num().get_si(), c.b.get_num().get_si()};
}

}  // namespace

OperatorTable OperatorTable::deserialize(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);
    if (line != "picard-operator-cache 1") throw ParseError("operator cache: bad header");
    TableMeta meta;
    std::map<EisensteinInteger, std::array<std::optional<SectionElement>, 3>> ms;
    std::map<std::pair<EisensteinInteger, int>, Matrix> ts;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "precision_bits") {
            ls >> meta.precision_bits;
        } else if (kind == "denominator_bound") {
            std::string v;
            ls >> v;
            meta.denominator_bound = mpz_class(v);
        } else if (kind == "m") {
            std::string as, g;
            ls >> as >> g;
            std::string rest;
            std::getline(ls, rest);
            if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
            auto a = parse_ei(as);
            int gi = g == "X" ? 0 : (g == "Y" ? 1 : (g == "Z" ? 2 : -1));
            if (gi < 0) throw ParseError("operator cache: bad generator " + g);
            ms[a][gi] = SectionElement::parse(rest, static_cast<int>(a.norm()));
        } else if (kind == "t") {
            std::string as, val;
            int n;
            std::size_t i, j;
            ls >> as >> n >> i >> j >> val;
            auto a = parse_ei(as);
            auto key = std::pair{a, n};
            auto it = ts.find(key);
            if (it == ts.end())
                it = ts.emplace(key, Matrix(graded_dim(n), graded_dim(n * static_cast<int>(a.norm())))).first;
            it->second(i, j) = Cyc::parse(val);
        } else {
            throw ParseError("operator cache: unknown line kind " + kind);
        }
    }
    OperatorTable t(meta);
    for (auto& [a, arr] : ms) {
        if (!arr[0] || !arr[1] || !arr[2]) throw ParseError("operator cache: incomplete m entry for " + a.str());
        t.m_.emplace(a, ImageTriple{*arr[0], *arr[1], *arr[2]});
    }
    t.t_ = std::move(ts);
    return t;
}

void OperatorTable::merge(const OperatorTable& o) {
    for (auto& [a, img] : o.m_) {
        auto [it, fresh] = m_.emplace(a, img);
        if (!fresh && !(it->second == img)) throw std::runtime_error("operator cache disagreement for m " + a.str());
    }
    for (auto& [k, mat] : o.t_) {
        auto [it, fresh] = t_.emplace(k, mat);
        if (!fresh && !(it->second == mat)) throw std::runtime_error("operator cache disagreement for t " + k.first.str());
    }
}

namespace {

std::optional<std::string> slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

CacheLock::CacheLock(const std::string& path, bool exclusive, bool wait) {
    fd_ = ::open((path + ".lock").c_str(), O_RDWR | O_CREAT, 0644);
    if (fd_ < 0) throw std::runtime_error("cannot open lock file for " + path);
    int op = (exclusive ? LOCK_EX : LOCK_SH) | (wait ? 0 : LOCK_NB);
    if (::flock(fd_, op) != 0) {
        ::close(fd_);
        throw LockHeld("operator cache is locked: " + path);
    }
}

CacheLock::~CacheLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
}

void OperatorTable::load(const std::string& path, bool lock) {
    std::optional<CacheLock> lk;
    if (lock) lk.emplace(path, false);
    auto text = slurp(path);
    if (!text) return;
    auto other = deserialize(*text);
    merge(other);
}

void OperatorTable::save(const std::string& path, bool lock) const {
    std::optional<CacheLock> lk;
    if (lock) lk.emplace(path, true);
    OperatorTable all(meta_);
    all.merge(*this);
    if (auto text = slurp(path)) all.merge(deserialize(*text));
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        out << all.serialize();
        if (!out) throw std::runtime_error("cannot write " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot replace " + path);
}

// ---------------- validation

ValidationReport validate_model(OperatorTable& table) {
    ValidationReport rep;
    std::vector<SectionElement> th(4);
    th[0] = SectionElement::constant(1);
    for (int n = 1; n <= 3; ++n) {
        th[n] = SectionElement(n);
        for (auto xi : enumerate_norm(n)) th[n] += table.m(xi)[1];
    }
    std::vector<SectionElement> sq(4), cube(4);
    for (int n = 0; n <= 3; ++n) {
        sq[n] = SectionElement(n);
        cube[n] = SectionElement(n);
        for (int k = 0; k <= n; ++k) addmul(sq[n], th[k], th[n - k]);
    }
    for (int n = 0; n <= 3; ++n)
        for (int k = 0; k <= n; ++k) addmul(cube[n], sq[k], th[n - k]);
    const char* expect[4] = {"1", "9*Y + 9*Z", "27*Y^2 + 54*Y*Z + 27*Z^2", "36*Y^3 + 81*Y^2*Z + 81*Y*Z^2 + 36*Z^3"};
    for (int n = 0; n <= 3; ++n) {
        auto want = SectionElement::parse(expect[n], n);
        bool ok = cube[n] == want;
        rep.ok = rep.ok && ok;
        rep.lines.push_back("phi0[" + std::to_string(n) + "] " + (ok ? "pass " : "FAIL ") + cube[n].pretty());
    }
    rep.phi0 = cube;
    return rep;
}

}  // namespace picard
