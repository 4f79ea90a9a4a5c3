#pragma once

// Dense matrices over an exact field type. Entries carry their own domain
// (characteristic), so matrices are built from a sample element rather than
// a default constructor.

#include <concepts>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlat {

template <typename T>
concept FieldElement = std::copyable<T> && requires(const T& a, const T& b) {
    { a + b } -> std::convertible_to<T>;
    { a - b } -> std::convertible_to<T>;
    { a * b } -> std::convertible_to<T>;
    { -a } -> std::convertible_to<T>;
    { a.inverse() } -> std::convertible_to<T>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { a.zero_like() } -> std::convertible_to<T>;
    { a.one_like() } -> std::convertible_to<T>;
    { a == b } -> std::convertible_to<bool>;
};

template <FieldElement T>
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols, const T& fill)
        : rows_(rows), cols_(cols), e_(rows * cols, fill) {}

    static Matrix identity(std::size_t n, const T& sample) {
        Matrix m(n, n, sample.zero_like());
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = sample.one_like();
        return m;
    }

    static Matrix diagonal(const std::vector<T>& d) {
        if (d.empty()) throw std::invalid_argument("empty diagonal");
        Matrix m(d.size(), d.size(), d.front().zero_like());
        for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const T& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    Matrix operator+(const Matrix& o) const {
        check_same_shape(o);
        Matrix r(*this);
        for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] + o.e_[k];
        return r;
    }

    Matrix operator-(const Matrix& o) const {
        check_same_shape(o);
        Matrix r(*this);
        for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] - o.e_[k];
        return r;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix shape mismatch in product");
        Matrix r(rows_, o.cols_, e_.front().zero_like());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const T& a = at(i, k);
                if (a.is_zero()) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, j) = r.at(i, j) + a * o.at(k, j);
            }
        return r;
    }

    std::vector<T> apply(const std::vector<T>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("vector length mismatch");
        std::vector<T> r(rows_, e_.front().zero_like());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r[i] = r[i] + at(i, j) * v[j];
        return r;
    }

    Matrix transpose() const {
        Matrix r(cols_, rows_, e_.front().zero_like());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    bool is_symmetric() const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if (!(at(i, j) == at(j, i))) return false;
        return true;
    }

    bool is_square() const { return rows_ == cols_; }

    // Gaussian elimination on a working copy; exact because T is a field.
    T determinant() const {
        if (rows_ != cols_) throw std::invalid_argument("determinant of non-square matrix");
        Matrix w(*this);
        T det = e_.front().one_like();
        for (std::size_t c = 0; c < cols_; ++c) {
            std::size_t pivot = c;
            while (pivot < rows_ && w.at(pivot, c).is_zero()) ++pivot;
            if (pivot == rows_) return e_.front().zero_like();
            if (pivot != c) {
                w.swap_rows(pivot, c);
                det = -det;
            }
            det = det * w.at(c, c);
            T inv = w.at(c, c).inverse();
            for (std::size_t r = c + 1; r < rows_; ++r) {
                if (w.at(r, c).is_zero()) continue;
                T f = w.at(r, c) * inv;
                for (std::size_t j = c; j < cols_; ++j)
                    w.at(r, j) = w.at(r, j) - f * w.at(c, j);
            }
        }
        return det;
    }

    Matrix inverse() const {
        if (rows_ != cols_) throw std::invalid_argument("inverse of non-square matrix");
        Matrix w(*this);
        Matrix r = identity(rows_, e_.front());
        for (std::size_t c = 0; c < cols_; ++c) {
            std::size_t pivot = c;
            while (pivot < rows_ && w.at(pivot, c).is_zero()) ++pivot;
            if (pivot == rows_) throw std::domain_error("matrix is singular");
            if (pivot != c) {
                w.swap_rows(pivot, c);
                r.swap_rows(pivot, c);
            }
            T inv = w.at(c, c).inverse();
            for (std::size_t j = 0; j < cols_; ++j) {
                w.at(c, j) = w.at(c, j) * inv;
                r.at(c, j) = r.at(c, j) * inv;
            }
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == c || w.at(i, c).is_zero()) continue;
                T f = w.at(i, c);
                for (std::size_t j = 0; j < cols_; ++j) {
                    w.at(i, j) = w.at(i, j) - f * w.at(c, j);
                    r.at(i, j) = r.at(i, j) - f * r.at(c, j);
                }
            }
        }
        return r;
    }

    // P^T * G * P for a basis change P applied to this Gram matrix G.
    Matrix congruent(const Matrix& p) const { return p.transpose() * (*this) * p; }

    void swap_rows(std::size_t i, std::size_t j) {
        for (std::size_t c = 0; c < cols_; ++c) std::swap(at(i, c), at(j, c));
    }
    void swap_cols(std::size_t i, std::size_t j) {
        for (std::size_t r = 0; r < rows_; ++r) std::swap(at(r, i), at(r, j));
    }
    // row_i += f * row_j
    void add_row_multiple(std::size_t i, std::size_t j, const T& f) {
        for (std::size_t c = 0; c < cols_; ++c) at(i, c) = at(i, c) + f * at(j, c);
    }
    void add_col_multiple(std::size_t i, std::size_t j, const T& f) {
        for (std::size_t r = 0; r < rows_; ++r) at(r, i) = at(r, i) + f * at(r, j);
    }

private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix shape mismatch");
    }

    std::size_t rows_, cols_;
    std::vector<T> e_;
};

}  // namespace qlat
