#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "quatlat/rational.hpp"

namespace quatlat {

// Dense row-major matrix over Int or Rat. Sizes here are tiny (rank <= 8),
// so everything is written for clarity over asymptotics.
template <class T>
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c) {}
    Mat(std::initializer_list<std::initializer_list<T>> ll) {
        rows_ = ll.size();
        cols_ = rows_ ? ll.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (auto& row : ll) {
            if (row.size() != cols_) throw qerror("BadShape", "ragged initializer");
            for (auto& x : row) a_.push_back(x);
        }
    }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    Mat transposed() const {
        Mat t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool is_square() const { return rows_ == cols_; }

    bool is_symmetric() const {
        if (!is_square()) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

    bool is_zero() const {
        for (auto& x : a_)
            if (x != 0) return false;
        return true;
    }

    std::vector<T> row(std::size_t i) const {
        return std::vector<T>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
    }

    void set_row(std::size_t i, const std::vector<T>& r) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = r[j];
    }

    void swap_rows(std::size_t i, std::size_t k) {
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(i, j), (*this)(k, j));
    }

    // row i += c * row k
    void add_row(std::size_t i, std::size_t k, const T& c) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) += c * (*this)(k, j);
    }

    void scale_row(std::size_t i, const T& c) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) *= c;
    }

private:
    std::size_t rows_, cols_;
    std::vector<T> a_;
};

using IntMat = Mat<Int>;
using RatMat = Mat<Rat>;

template <class T>
Mat<T> operator*(const Mat<T>& a, const Mat<T>& b) {
    if (a.cols() != b.rows()) throw qerror("BadShape", "matrix product shape mismatch");
    Mat<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T& aik = a(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

template <class T>
Mat<T> operator+(const Mat<T>& a, const Mat<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw qerror("BadShape", "matrix sum shape mismatch");
    Mat<T> c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

template <class T>
Mat<T> operator-(const Mat<T>& a, const Mat<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw qerror("BadShape", "matrix difference shape mismatch");
    Mat<T> c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

template <class T>
Mat<T> operator*(const T& c, const Mat<T>& a) {
    Mat<T> r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = c * a(i, j);
    return r;
}

// row vector * matrix
template <class T>
std::vector<T> operator*(const std::vector<T>& v, const Mat<T>& a) {
    if (v.size() != a.rows()) throw qerror("BadShape", "vector*matrix shape mismatch");
    std::vector<T> r(a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (v[i] == 0) continue;
        for (std::size_t j = 0; j < a.cols(); ++j) r[j] += v[i] * a(i, j);
    }
    return r;
}

template <class T>
T dot(const std::vector<T>& x, const std::vector<T>& y) {
    T s(0);
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline RatMat to_rat(const IntMat& m) {
    RatMat r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
    return r;
}

inline std::vector<Rat> to_rat(const std::vector<Int>& v) {
    std::vector<Rat> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
    return r;
}

// Throws unless every entry is an integer.
inline IntMat to_int(const RatMat& m) {
    IntMat r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!is_integer(m(i, j))) throw qerror("NotIntegral", "matrix entry not an integer");
            r(i, j) = m(i, j).get_num();
        }
    return r;
}

inline bool is_integral(const RatMat& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!is_integer(m(i, j))) return false;
    return true;
}

inline Int common_denominator(const RatMat& m) {
    Int d = 1;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) d = lcm(d, m(i, j).get_den());
    return d;
}

// Exact determinant by fraction-full Gaussian elimination.
inline Rat det(const RatMat& m0) {
    if (!m0.is_square()) throw qerror("BadShape", "determinant of non-square matrix");
    RatMat m = m0;
    std::size_t n = m.rows();
    Rat d(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m(piv, c) == 0) ++piv;
        if (piv == n) return Rat(0);
        if (piv != c) {
            m.swap_rows(piv, c);
            d = -d;
        }
        d *= m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c) == 0) continue;
            Rat f = m(i, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return d;
}

inline Rat det(const IntMat& m) { return det(to_rat(m)); }

// Spec'd entry point for symmetric Gram determinants.
inline Rat det_sym(const RatMat& g) {
    if (!g.is_square()) throw qerror("BadShape", "det_sym of non-square matrix");
    if (!g.is_symmetric()) throw qerror("NotSymmetric", "det_sym of non-symmetric matrix");
    return det(g);
}

inline RatMat inverse(const RatMat& m0) {
    if (!m0.is_square()) throw qerror("BadShape", "inverse of non-square matrix");
    std::size_t n = m0.rows();
    RatMat m = m0, inv = RatMat::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m(piv, c) == 0) ++piv;
        if (piv == n) throw qerror("Singular", "inverse of singular matrix");
        if (piv != c) {
            m.swap_rows(piv, c);
            inv.swap_rows(piv, c);
        }
        Rat f = m(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            m(c, j) /= f;
            inv(c, j) /= f;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || m(i, c) == 0) continue;
            Rat g = m(i, c);
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) -= g * m(c, j);
                inv(i, j) -= g * inv(c, j);
            }
        }
    }
    return inv;
}

inline std::size_t rank(const RatMat& m0) {
    RatMat m = m0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t piv = r;
        while (piv < m.rows() && m(piv, c) == 0) ++piv;
        if (piv == m.rows()) continue;
        m.swap_rows(piv, r);
        for (std::size_t i = r + 1; i < m.rows(); ++i) {
            if (m(i, c) == 0) continue;
            Rat f = m(i, c) / m(r, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        ++r;
    }
    return r;
}

// Solve x * a = b for a square invertible; returns x.
inline std::vector<Rat> solve_left(const RatMat& a, const std::vector<Rat>& b) {
    return b * inverse(a);
}

inline IntMat symmetric_int_mat(std::initializer_list<std::initializer_list<Int>> ll) {
    IntMat m(ll);
    if (!m.is_symmetric()) throw qerror("NotSymmetric", "expected symmetric matrix");
    return m;
}

inline RatMat symmetric_rat_mat(std::initializer_list<std::initializer_list<Rat>> ll) {
    RatMat m(ll);
    if (!m.is_symmetric()) throw qerror("NotSymmetric", "expected symmetric matrix");
    return m;
}

}  // namespace quatlat
