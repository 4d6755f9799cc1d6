// Dense exact linear algebra over Q(r).
#pragma once

#include "picard/eisenstein.hpp"

#include <optional>
#include <vector>

namespace picard {

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), d_(rows * cols) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    Cyc& operator()(std::size_t i, std::size_t j) { return d_[i * c_ + j]; }
    const Cyc& operator()(std::size_t i, std::size_t j) const { return d_[i * c_ + j]; }

    std::vector<Cyc> row(std::size_t i) const;
    std::vector<Cyc> col(std::size_t j) const;
    Matrix transpose() const;
    bool is_zero() const;

    friend Matrix operator*(const Matrix& x, const Matrix& y);
    friend Matrix operator-(const Matrix& x, const Matrix& y);
    friend bool operator==(const Matrix& x, const Matrix& y) = default;
    std::vector<Cyc> apply(const std::vector<Cyc>& v) const;

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<Cyc> d_;
};

// reduced row echelon form in place; returns pivot columns
std::vector<std::size_t> rref(Matrix& m);
std::size_t rank(Matrix m);
// basis of {x : m x = 0}
std::vector<std::vector<Cyc>> kernel(Matrix m);
Cyc determinant(Matrix m);

// Factors M once, then solves M x = v for many right-hand sides.
class Solver {
public:
    Solver() = default;
    explicit Solver(const Matrix& m);

    // nullopt if v is not in the column space
    std::optional<std::vector<Cyc>> solve(const std::vector<Cyc>& v) const;
    std::size_t rank() const { return pivots_.size(); }
    std::size_t unknowns() const { return cols_; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    Matrix e_;  // row transform with e_ * M = rref(M)
    Matrix r_;
    std::vector<std::size_t> pivots_;
};

}  // namespace picard
