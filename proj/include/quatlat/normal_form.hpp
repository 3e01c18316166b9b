#pragma once

#include <algorithm>
#include <vector>

#include "quatlat/matrix.hpp"

namespace quatlat {

struct HnfResult {
    IntMat h;  // Hermite normal form of the input
    IntMat u;  // unimodular, u * m = h
};

namespace detail {

// Classical upper/row-echelon HNF: pivot columns strictly increase, pivots
// positive, entries above a pivot reduced into [0, pivot), zero rows last.
inline HnfResult hnf_upper(const IntMat& m0) {
    IntMat h = m0;
    IntMat u = IntMat::identity(m0.rows());
    std::size_t r = 0;
    for (std::size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
        // Gather a single positive pivot at (r, c) by extended-gcd row ops.
        for (std::size_t i = r + 1; i < h.rows(); ++i) {
            if (h(i, c) == 0) continue;
            if (h(r, c) == 0) {
                h.swap_rows(r, i);
                u.swap_rows(r, i);
                continue;
            }
            Int g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(),
                       h(r, c).get_mpz_t(), h(i, c).get_mpz_t());
            Int p = h(r, c) / g, q = h(i, c) / g;
            // (row r, row i) <- (s*row r + t*row i, -q*row r + p*row i)
            for (std::size_t j = 0; j < h.cols(); ++j) {
                Int x = h(r, j), y = h(i, j);
                h(r, j) = s * x + t * y;
                h(i, j) = p * y - q * x;
            }
            for (std::size_t j = 0; j < u.cols(); ++j) {
                Int x = u(r, j), y = u(i, j);
                u(r, j) = s * x + t * y;
                u(i, j) = p * y - q * x;
            }
        }
        if (h(r, c) == 0) continue;
        if (h(r, c) < 0) {
            h.scale_row(r, Int(-1));
            u.scale_row(r, Int(-1));
        }
        for (std::size_t i = 0; i < r; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(r, c).get_mpz_t());
            if (q != 0) {
                h.add_row(i, r, -q);
                u.add_row(i, r, -q);
            }
        }
        ++r;
    }
    return {h, h.rows() ? u : IntMat::identity(0)};
}

template <class T>
Mat<T> reverse_rows_cols(const Mat<T>& m) {
    Mat<T> r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            r(i, j) = m(m.rows() - 1 - i, m.cols() - 1 - j);
    return r;
}

template <class T>
Mat<T> reverse_rows(const Mat<T>& m) {
    Mat<T> r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(m.rows() - 1 - i, j);
    return r;
}

}  // namespace detail

// Row-style HNF in the lower-triangular convention used throughout this
// library: pivots are the last nonzero entry of each row, positive, with the
// entries below a pivot reduced into [0, pivot); zero rows come first. For a
// nonsingular square input this is lower-triangular with positive diagonal.
// This is the canonical form backing every lattice-equality test.
inline HnfResult hnf(const IntMat& m) {
    if (m.rows() == 0 || m.cols() == 0) return {m, IntMat::identity(m.rows())};
    HnfResult up = detail::hnf_upper(detail::reverse_rows_cols(m));
    IntMat h = detail::reverse_rows_cols(up.h);
    // u' acts on reversed rows: conjugate by the row-reversal permutation.
    IntMat u(m.rows(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.rows(); ++j)
            u(i, j) = up.u(m.rows() - 1 - i, m.rows() - 1 - j);
    return {h, u};
}

struct SnfResult {
    std::vector<Int> d;  // diagonal, d[0] | d[1] | ..., all >= 0
    IntMat u, v;         // unimodular, u * m * v = diag(d)
};

inline SnfResult snf(const IntMat& m0) {
    IntMat a = m0;
    std::size_t rows = a.rows(), cols = a.cols();
    IntMat u = IntMat::identity(rows), v = IntMat::identity(cols);
    auto add_col = [&](IntMat& x, std::size_t j, std::size_t k, const Int& c) {
        for (std::size_t i = 0; i < x.rows(); ++i) x(i, j) += c * x(i, k);
    };
    auto swap_cols = [&](IntMat& x, std::size_t j, std::size_t k) {
        for (std::size_t i = 0; i < x.rows(); ++i) std::swap(x(i, j), x(i, k));
    };

    std::size_t t = 0;
    while (t < rows && t < cols) {
        // Find a nonzero entry of minimal absolute value in the trailing block.
        std::size_t pi = t, pj = t;
        bool found = false;
        Int best;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j) {
                if (a(i, j) == 0) continue;
                Int ab = abs(a(i, j));
                if (!found || ab < best) {
                    best = ab;
                    pi = i;
                    pj = j;
                    found = true;
                }
            }
        if (!found) break;
        if (pi != t) {
            a.swap_rows(pi, t);
            u.swap_rows(pi, t);
        }
        if (pj != t) {
            swap_cols(a, pj, t);
            swap_cols(v, pj, t);
        }
        bool dirty = false;
        for (std::size_t i = t + 1; i < rows; ++i) {
            if (a(i, t) == 0) continue;
            Int q = a(i, t) / a(t, t);
            a.add_row(i, t, -q);
            u.add_row(i, t, -q);
            if (a(i, t) != 0) dirty = true;
        }
        for (std::size_t j = t + 1; j < cols; ++j) {
            if (a(t, j) == 0) continue;
            Int q = a(t, j) / a(t, t);
            add_col(a, j, t, -q);
            add_col(v, j, t, -q);
            if (a(t, j) != 0) dirty = true;
        }
        if (dirty) continue;  // smaller remainders appeared, redo the pivot hunt
        // Divisibility: the pivot must divide the whole trailing block.
        bool ok = true;
        for (std::size_t i = t + 1; i < rows && ok; ++i)
            for (std::size_t j = t + 1; j < cols && ok; ++j)
                if (a(i, j) % a(t, t) != 0) {
                    a.add_row(t, i, Int(1));
                    u.add_row(t, i, Int(1));
                    ok = false;
                }
        if (!ok) continue;
        if (a(t, t) < 0) {
            a.scale_row(t, Int(-1));
            u.scale_row(t, Int(-1));
        }
        ++t;
    }
    std::vector<Int> d(std::min(rows, cols));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a(i, i);
    return {d, u, v};
}

// Row lattice {c in Z^rows : c * m == 0 (mod n)}, returned as a full-rank
// HNF basis (it always contains n * Z^rows).
inline IntMat kernel_mod(const IntMat& m, const Int& n) {
    if (n <= 0) throw qerror("BadArgument", "kernel_mod modulus must be positive");
    // m = u^{-1} D v^{-1}, so with y = c u^{-1} the condition c*m ≡ 0 (mod n)
    // becomes y_i d_i ≡ 0 (mod n); the solutions are y_i ≡ 0 mod n/gcd(d_i,n)
    // (free where d_i = 0 or past the diagonal), mapped back by c = y u.
    SnfResult s = snf(m);
    std::size_t rows = m.rows();
    IntMat gens(rows, rows);
    for (std::size_t i = 0; i < rows; ++i) {
        Int t = 1;
        if (i < s.d.size() && s.d[i] != 0) t = n / gcd(s.d[i], n);
        for (std::size_t j = 0; j < rows; ++j) gens(i, j) = t * s.u(i, j);
    }
    return hnf(gens).h;
}

// Saturated kernel {c in Z^rows : c * m = 0}, one HNF basis row per free
// dimension.
inline IntMat integer_kernel(const IntMat& m) {
    SnfResult s = snf(m);
    std::vector<std::size_t> free_rows;
    for (std::size_t i = 0; i < m.rows(); ++i)
        if (i >= s.d.size() || s.d[i] == 0) free_rows.push_back(i);
    IntMat gens(free_rows.size(), m.rows());
    for (std::size_t i = 0; i < free_rows.size(); ++i)
        for (std::size_t j = 0; j < m.rows(); ++j) gens(i, j) = s.u(free_rows[i], j);
    return hnf(gens).h;
}

// ---------------------------------------------------------------------------
// Row-lattice helpers over Q. A lattice is given by a full-row-rank RatMat of
// basis rows in some fixed ambient coordinates.
// ---------------------------------------------------------------------------

// Canonical basis: scale to integers, HNF, drop zero rows, scale back.
inline RatMat lattice_canonical(const RatMat& basis) {
    Int den = common_denominator(basis);
    IntMat scaled(basis.rows(), basis.cols());
    for (std::size_t i = 0; i < basis.rows(); ++i)
        for (std::size_t j = 0; j < basis.cols(); ++j) {
            Rat e = basis(i, j) * Rat(den);
            scaled(i, j) = e.get_num();
        }
    IntMat h = hnf(scaled).h;
    std::size_t nz = 0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        bool zero = true;
        for (std::size_t j = 0; j < h.cols(); ++j)
            if (h(i, j) != 0) zero = false;
        if (!zero) ++nz;
    }
    RatMat out(nz, h.cols());
    std::size_t k = 0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        bool zero = true;
        for (std::size_t j = 0; j < h.cols(); ++j)
            if (h(i, j) != 0) zero = false;
        if (zero) continue;
        for (std::size_t j = 0; j < h.cols(); ++j) out(k, j) = make_rat(h(i, j), den);
        ++k;
    }
    return out;
}

inline bool lattice_equal(const RatMat& a, const RatMat& b) {
    return lattice_canonical(a) == lattice_canonical(b);
}

inline RatMat lattice_sum(const RatMat& a, const RatMat& b) {
    if (a.cols() != b.cols()) throw qerror("BadShape", "lattice_sum ambient mismatch");
    RatMat stack(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) stack(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) stack(a.rows() + i, j) = b(i, j);
    return lattice_canonical(stack);
}

// Coordinate dual (w.r.t. the standard dot product) of a full-rank lattice.
inline RatMat lattice_dual_coords(const RatMat& basis) {
    if (!basis.is_square()) throw qerror("BadShape", "dual of non-full-rank lattice");
    return inverse(basis).transposed();
}

inline RatMat lattice_intersect(const RatMat& a, const RatMat& b) {
    RatMat da = lattice_dual_coords(lattice_canonical(a));
    RatMat db = lattice_dual_coords(lattice_canonical(b));
    RatMat s = lattice_sum(da, db);
    return lattice_canonical(lattice_dual_coords(s));
}

inline bool lattice_contains(const RatMat& basis, const std::vector<Rat>& v) {
    std::vector<Rat> c = v * inverse(basis);
    for (auto& x : c)
        if (!is_integer(x)) return false;
    return true;
}

// [sup : sub] for full-rank sub <= sup; throws if not contained.
inline Int lattice_index(const RatMat& sup, const RatMat& sub) {
    RatMat c = sub * inverse(sup);
    if (!is_integral(c)) throw qerror("NotContained", "lattice_index: not a sublattice");
    Rat d = det(c);
    Int idx = abs(d.get_num());
    if (d.get_den() != 1 || idx == 0) throw qerror("Internal", "lattice_index: bad determinant");
    return idx;
}

// ---------------------------------------------------------------------------
// Exact LLL on a Gram matrix (delta = 3/4), used only as a preconditioner for
// enumeration; every downstream consumer re-verifies with exact arithmetic.
// Returns unimodular U with G' = U G U^T reduced.
// ---------------------------------------------------------------------------
struct LllResult {
    IntMat u;
    RatMat gram;
};

inline LllResult lll_gram(const RatMat& g0) {
    std::size_t n = g0.rows();
    IntMat u = IntMat::identity(n);
    RatMat g = g0;
    if (n <= 1) return {u, g};

    auto gso = [&](std::vector<Rat>& bstar, RatMat& mu) {
        bstar.assign(n, Rat(0));
        mu = RatMat(n, n);
        // mu(i,j) for j<i; bstar via the recurrence on the Gram matrix.
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                Rat s = g(i, j);
                for (std::size_t k = 0; k < j; ++k) s -= mu(i, k) * mu(j, k) * bstar[k];
                mu(i, j) = s / bstar[j];
            }
            Rat s = g(i, i);
            for (std::size_t k = 0; k < i; ++k) s -= mu(i, k) * mu(i, k) * bstar[k];
            bstar[i] = s;
        }
    };

    std::vector<Rat> bstar;
    RatMat mu;
    auto apply_add = [&](std::size_t i, std::size_t k, const Int& c) {
        // row_i <- row_i + c*row_k on the implicit basis; update U and G.
        u.add_row(i, k, c);
        Rat cr(c);
        for (std::size_t j = 0; j < n; ++j) g(i, j) += cr * g(k, j);
        for (std::size_t j = 0; j < n; ++j) g(j, i) += cr * g(j, k);
    };

    gso(bstar, mu);
    std::size_t k = 1;
    while (k < n) {
        for (std::size_t j = k; j-- > 0;) {
            Int c = round_rat(mu(k, j));
            if (c != 0) {
                apply_add(k, j, -c);
                gso(bstar, mu);
            }
        }
        Rat lhs = bstar[k];
        Rat rhs = (Rat(3, 4) - mu(k, k - 1) * mu(k, k - 1)) * bstar[k - 1];
        if (lhs >= rhs) {
            ++k;
        } else {
            u.swap_rows(k, k - 1);
            g.swap_rows(k, k - 1);
            for (std::size_t j = 0; j < n; ++j) std::swap(g(j, k), g(j, k - 1));
            gso(bstar, mu);
            k = std::max<std::size_t>(1, k - 1);
        }
    }
    return {u, g};
}

}  // namespace quatlat
