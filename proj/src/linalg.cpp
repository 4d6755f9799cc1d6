#include "picard/linalg.hpp"

#include <stdexcept>

namespace picard {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

std::vector<Cyc> Matrix::row(std::size_t i) const {
    return {d_.begin() + static_cast<long>(i * c_), d_.begin() + static_cast<long>((i + 1) * c_)};
}

std::vector<Cyc> Matrix::col(std::size_t j) const {
    std::vector<Cyc> v(r_);
    for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
}

Matrix Matrix::transpose() const {
    Matrix t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool Matrix::is_zero() const {
    for (auto& x : d_)
        if (!x.is_zero()) return false;
    return true;
}

Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.c_ != y.r_) throw std::invalid_argument("Matrix product: shape mismatch");
    Matrix z(x.r_, y.c_);
    for (std::size_t i = 0; i < x.r_; ++i)
        for (std::size_t k = 0; k < x.c_; ++k) {
            const Cyc& a = x(i, k);
            if (a.is_zero()) continue;
            for (std::size_t j = 0; j < y.c_; ++j)
                if (!y(k, j).is_zero()) addmul(z(i, j), a, y(k, j));
        }
    return z;
}

Matrix operator-(const Matrix& x, const Matrix& y) {
    if (x.r_ != y.r_ || x.c_ != y.c_) throw std::invalid_argument("Matrix difference: shape mismatch");
    Matrix z = x;
    for (std::size_t i = 0; i < z.d_.size(); ++i) z.d_[i] -= y.d_[i];
    return z;
}

std::vector<Cyc> Matrix::apply(const std::vector<Cyc>& v) const {
    if (v.size() != c_) throw std::invalid_argument("Matrix::apply: shape mismatch");
    std::vector<Cyc> out(r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < c_; ++j)
            if (!v[j].is_zero() && !(*this)(i, j).is_zero()) addmul(out[i], (*this)(i, j), v[j]);
    return out;
}

namespace {

// shared elimination; optionally mirrors row operations on t
std::vector<std::size_t> eliminate(Matrix& m, Matrix* t) {
    std::vector<std::size_t> piv;
    std::size_t row = 0;
    Cyc f;
    for (std::size_t c = 0; c < m.cols() && row < m.rows(); ++c) {
        std::size_t p = row;
        while (p < m.rows() && m(p, c).is_zero()) ++p;
        if (p == m.rows()) continue;
        if (p != row) {
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
            if (t)
                for (std::size_t j = 0; j < t->cols(); ++j) std::swap((*t)(p, j), (*t)(row, j));
        }
        Cyc inv = m(row, c).inverse();
        for (std::size_t j = c; j < m.cols(); ++j)
            if (!m(row, j).is_zero()) m(row, j) *= inv;
        if (t)
            for (std::size_t j = 0; j < t->cols(); ++j)
                if (!(*t)(row, j).is_zero()) (*t)(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, c).is_zero()) continue;
            f = -m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                if (!m(row, j).is_zero()) addmul(m(i, j), f, m(row, j));
            if (t)
                for (std::size_t j = 0; j < t->cols(); ++j)
                    if (!(*t)(row, j).is_zero()) addmul((*t)(i, j), f, (*t)(row, j));
        }
        piv.push_back(c);
        ++row;
    }
    return piv;
}

}  // namespace

std::vector<std::size_t> rref(Matrix& m) { return eliminate(m, nullptr); }

std::size_t rank(Matrix m) { return rref(m).size(); }

std::vector<std::vector<Cyc>> kernel(Matrix m) {
    auto piv = rref(m);
    std::vector<bool> is_piv(m.cols(), false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<std::vector<Cyc>> out;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_piv[f]) continue;
        std::vector<Cyc> v(m.cols());
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m(i, f);
        out.push_back(std::move(v));
    }
    return out;
}

Cyc determinant(Matrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: not square");
    Cyc det(1);
    std::size_t n = m.rows();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c).is_zero()) ++p;
        if (p == n) return Cyc(0);
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        Cyc inv = m(c, c).inverse();
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c).is_zero()) continue;
            Cyc f = -(m(i, c) * inv);
            for (std::size_t j = c; j < n; ++j) addmul(m(i, j), f, m(c, j));
        }
    }
    return det;
}

Solver::Solver(const Matrix& m) : rows_(m.rows()), cols_(m.cols()), e_(Matrix::identity(m.rows())), r_(m) {
    pivots_ = eliminate(r_, &e_);
}

std::optional<std::vector<Cyc>> Solver::solve(const std::vector<Cyc>& v) const {
    if (v.size() != rows_) throw std::invalid_argument("Solver::solve: shape mismatch");
    // rows past the rank must map to zero
    for (std::size_t i = pivots_.size(); i < rows_; ++i) {
        Cyc s;
        for (std::size_t j = 0; j < rows_; ++j)
            if (!v[j].is_zero() && !e_(i, j).is_zero()) addmul(s, e_(i, j), v[j]);
        if (!s.is_zero()) return std::nullopt;
    }
    std::vector<Cyc> x(cols_);
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
        Cyc s;
        for (std::size_t j = 0; j < rows_; ++j)
            if (!v[j].is_zero() && !e_(i, j).is_zero()) addmul(s, e_(i, j), v[j]);
        x[pivots_[i]] = std::move(s);
    }
    return x;
}

}  // namespace picard
