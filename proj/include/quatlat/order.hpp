#pragma once

#include <optional>
#include <utility>

#include "quatlat/enumerate.hpp"
#include "quatlat/quat.hpp"

namespace quatlat {

class Order;
Order order_from_basis(const QuaternionAlgebra& alg, const std::array<Quat, 4>& basis);

// Rank-4 sublattice of an order, held as an HNF basis in order coordinates.
struct Sublattice {
    IntMat basis;  // 4x4, rows = coordinates on the order basis

    Int index() const {
        Rat d = det(basis);
        return abs(d.get_num());
    }
    bool operator==(const Sublattice& o) const { return basis == o.basis; }
};

// Z-order in a definite quaternion algebra: a rank-4 lattice containing 1,
// closed under multiplication, with integral reduced traces and norms.
class Order {
public:
    const QuaternionAlgebra& algebra() const { return alg_; }
    const std::array<Quat, 4>& basis() const { return basis_; }
    const RatMat& basis_matrix() const { return bmat_; }  // rows = coords on (1,i,j,k)
    const RatMat& gram() const { return gram_; }          // tr(conj(b_i) b_j)
    const Int& reduced_discriminant() const { return disc_; }

    bool is_maximal() const { return disc_ == alg_.discriminant(); }

    std::vector<Rat> coords(const Quat& x) const {
        return std::vector<Rat>{x.c[0], x.c[1], x.c[2], x.c[3]} * binv_;
    }
    bool contains(const Quat& x) const {
        for (auto& c : coords(x))
            if (!is_integer(c)) return false;
        return true;
    }
    Quat element(const std::vector<Rat>& c) const {
        Quat x;
        for (int t = 0; t < 4; ++t)
            for (int s = 0; s < 4; ++s) x.c[s] += c[t] * basis_[t].c[s];
        return x;
    }
    Quat element(const std::vector<Int>& c) const { return element(to_rat(c)); }

    // Row i = coords(b_i * x): coords(y x) = coords(y) * right_mult(x).
    RatMat right_mult(const Quat& x) const {
        RatMat m(4, 4);
        for (int i = 0; i < 4; ++i) m.set_row(i, coords(alg_.mul(basis_[i], x)));
        return m;
    }
    // Row i = coords(x * b_i): coords(x y) = coords(y) * left_mult(x).
    RatMat left_mult(const Quat& x) const {
        RatMat m(4, 4);
        for (int i = 0; i < 4; ++i) m.set_row(i, coords(alg_.mul(x, basis_[i])));
        return m;
    }

    // All x with n(x) = n (and tr(x) = 0 when trace_zero), sorted by
    // coordinate vector; exact and complete.
    std::vector<Quat> enumerate_by_norm(const Int& n, bool trace_zero) const {
        std::vector<Quat> res;
        if (n < 0) return res;
        if (n == 0) {
            res.push_back(Quat());
            return res;
        }
        RatMat q = Rat(1, 2) * gram_;  // n(x) = (1/2) (x,x)
        for (auto& e : enumerate_up_to(q, Rat(n))) {
            if (e.value != Rat(n)) continue;
            Quat x = element(e.x);
            if (trace_zero && trace(x) != 0) continue;
            res.push_back(x);
        }
        return res;
    }

    std::vector<Quat> unit_group() const;
    Sublattice different() const;
    std::optional<Quat> principal_different_witness() const;
    std::pair<Quat, Quat> find_pi_lambda() const;

    // Sublattice helpers -----------------------------------------------------

    Sublattice sublattice_from_rows(const RatMat& rows) const {
        RatMat can = lattice_canonical(rows);
        if (can.rows() != 4) throw qerror("BadArgument", "sublattice must have full rank");
        return Sublattice{to_int(can)};
    }

    Sublattice principal_right_ideal(const Quat& x) const {
        return sublattice_from_rows(to_rat(IntMat::identity(4)) * left_mult(x));
    }
    Sublattice principal_left_ideal(const Quat& x) const {
        return sublattice_from_rows(to_rat(IntMat::identity(4)) * right_mult(x));
    }

    bool closed_under_right_mult(const Sublattice& s) const {
        RatMat b = to_rat(s.basis), binv = inverse(b);
        for (int k = 0; k < 4; ++k)
            if (!is_integral(b * right_mult(basis_[k]) * binv)) return false;
        return true;
    }
    bool closed_under_left_mult(const Sublattice& s) const {
        RatMat b = to_rat(s.basis), binv = inverse(b);
        for (int k = 0; k < 4; ++k)
            if (!is_integral(b * left_mult(basis_[k]) * binv)) return false;
        return true;
    }

private:
    friend Order order_from_basis(const QuaternionAlgebra&, const std::array<Quat, 4>&);
    Order(QuaternionAlgebra alg, std::array<Quat, 4> basis, RatMat bmat, RatMat binv, RatMat gram,
          Int disc)
        : alg_(std::move(alg)), basis_(std::move(basis)), bmat_(std::move(bmat)),
          binv_(std::move(binv)), gram_(std::move(gram)), disc_(std::move(disc)) {}

    QuaternionAlgebra alg_;
    std::array<Quat, 4> basis_;
    RatMat bmat_, binv_;
    RatMat gram_;
    Int disc_;
};

inline Order order_from_basis(const QuaternionAlgebra& alg, const std::array<Quat, 4>& basis) {
    RatMat bmat(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) bmat(i, j) = basis[i].c[j];
    if (rank(bmat) != 4) throw qerror("BadBasis", "order basis must have rank 4");
    RatMat binv = inverse(bmat);

    auto coords_of = [&](const Quat& x) {
        return std::vector<Rat>{x.c[0], x.c[1], x.c[2], x.c[3]} * binv;
    };
    for (auto& c : coords_of(Quat::one()))
        if (!is_integer(c)) throw qerror("NoUnit", "1 is not in the lattice");
    for (int i = 0; i < 4; ++i) {
        auto [t, n] = alg.trace_norm(basis[i]);
        if (!is_integer(t) || !is_integer(n))
            throw qerror("NotIntegral", "basis element with non-integral trace or norm");
    }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (auto& c : coords_of(alg.mul(basis[i], basis[j])))
                if (!is_integer(c))
                    throw qerror("NotClosed", "basis product leaves the lattice");

    RatMat gram(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) gram(i, j) = alg.inner(basis[i], basis[j]);
    Rat d = det_sym(gram);
    if (d.get_den() != 1) throw qerror("Internal", "order Gram determinant not integral");
    Int root;
    if (!is_square(d.get_num(), &root))
        throw qerror("Internal", "order Gram determinant is not a perfect square");
    return Order(alg, basis, bmat, binv, gram, root);
}

inline std::vector<Quat> Order::unit_group() const {
    std::vector<Quat> units = enumerate_by_norm(Int(1), false);
    // group sanity: closed under product and inverse
    auto find = [&](const Quat& x) {
        for (auto& u : units)
            if (u == x) return true;
        return false;
    };
    for (auto& u : units) {
        if (!find(alg_.inverse(u))) throw qerror("Internal", "unit set not closed under inverse");
        for (auto& v : units)
            if (!find(alg_.mul(u, v))) throw qerror("Internal", "unit set not closed under product");
    }
    return units;
}

// The different, computed globally as {x in O : tr(x O) ⊆ D Z}; comes out as
// the unique two-sided ideal of index D^2.
inline Sublattice Order::different() const {
    if (!is_maximal()) throw qerror("NotMaximal", "different requires a maximal order");
    const Int& d = alg_.discriminant();
    IntMat t(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Rat v = trace(alg_.mul(basis_[i], basis_[j]));
            if (!is_integer(v)) throw qerror("Internal", "non-integral trace in order");
            t(i, j) = v.get_num();
        }
    Sublattice m{kernel_mod(t, d)};
    if (m.index() != d * d) throw qerror("Internal", "different has wrong index");
    if (!closed_under_right_mult(m) || !closed_under_left_mult(m))
        throw qerror("Internal", "different is not a two-sided ideal");
    return m;
}

inline std::optional<Quat> Order::principal_different_witness() const {
    const Int& d = alg_.discriminant();
    auto cands = enumerate_by_norm(d, true);
    if (cands.empty()) return std::nullopt;
    Quat x = cands.front();
    // x has trace 0 and norm D, hence x^2 = -D; and xO = Ox = the different.
    if (alg_.mul(x, x) != Quat::scalar(Rat(-d))) throw qerror("Internal", "witness square mismatch");
    Sublattice m = different();
    if (!(principal_right_ideal(x) == m) || !(principal_left_ideal(x) == m))
        throw qerror("Internal", "witness does not generate the different");
    return x;
}

// Deterministic generator search: pi is the coordinate-lexicographically least
// element of norm D with pi*O = O*pi = different; lambda is the least element
// of the smallest norm = -1 (mod D), preferring norm exactly D-1.
inline std::pair<Quat, Quat> Order::find_pi_lambda() const {
    const Int& d = alg_.discriminant();
    Sublattice m = different();
    std::optional<Quat> pi;
    for (auto& x : enumerate_by_norm(d, false)) {
        if (principal_right_ideal(x) == m && principal_left_ideal(x) == m) {
            pi = x;
            break;
        }
    }
    if (!pi) throw qerror("NotPrincipal", "the different of this order is not principal");
    for (Int nl = d - 1; nl < 64 * d; nl += d) {
        auto cands = enumerate_by_norm(nl, false);
        if (!cands.empty()) return {*pi, cands.front()};
    }
    throw qerror("Internal", "no lambda with norm = -1 mod D found in range");
}

// ---------------------------------------------------------------------------
// Maximalization
// ---------------------------------------------------------------------------

namespace detail {

// F_p row kernel of an integer matrix: returns lifted basis rows with entries
// in [0, p).
inline std::vector<std::vector<Int>> fp_kernel(const IntMat& m, const Int& p) {
    std::size_t rows = m.rows(), cols = m.cols();
    // Gaussian elimination over F_p done with exact integers mod p.
    auto inv_mod = [&](const Int& x) {
        Int r;
        if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()) == 0)
            throw qerror("Internal", "fp_kernel: non-invertible pivot");
        return r;
    };
    IntMat w(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) w(i, j) = mod_floor(m(i, j), p);
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && w(piv, c) == 0) ++piv;
        if (piv == rows) continue;
        w.swap_rows(piv, r);
        Int f = inv_mod(w(r, c));
        for (std::size_t j = 0; j < cols; ++j) w(r, j) = mod_floor(w(r, j) * f, p);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || w(i, c) == 0) continue;
            Int g = w(i, c);
            for (std::size_t j = 0; j < cols; ++j) w(i, j) = mod_floor(w(i, j) - g * w(r, j), p);
        }
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<std::vector<Int>> kernel;
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_col) is_pivot[c] = true;
    for (std::size_t c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        std::vector<Int> v(cols, 0);
        v[c] = 1;
        for (std::size_t i = 0; i < pivot_col.size(); ++i)
            v[pivot_col[i]] = mod_floor(-w(i, c), p);
        kernel.push_back(std::move(v));
    }
    return kernel;
}

// This is the kernel of v -> v*M over F_p for row vectors: pass transposed.
inline std::vector<std::vector<Int>> fp_row_kernel(const IntMat& m, const Int& p) {
    return fp_kernel(m.transposed(), p);
}

}  // namespace detail

namespace detail_order {

// Radical of O/pO. An element is nilpotent iff its reduced trace and norm both
// vanish mod p, and the radical is {x : n(x) = 0, tr(x y) = 0 for all y}.
// For odd p the trace kernel already equals the radical; at p = 2 the norm cuts
// it down by one more F_2-linear condition (n is additive on the trace kernel).
inline std::vector<std::vector<Int>> radical_mod_p(const Order& o, const Int& p) {
    IntMat t(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Rat v = trace(o.algebra().mul(o.basis()[i], o.basis()[j]));
            t(i, j) = v.get_num();
        }
    auto k = detail::fp_row_kernel(t, p);
    auto norm_of = [&](const std::vector<Int>& c) {
        Rat n = o.algebra().norm(o.element(c));
        return mod_floor(n.get_num(), p);
    };
    if (p != 2) {
        for (auto& v : k)
            if (norm_of(v) != 0)
                throw qerror("Internal", "odd-p trace radical contains non-nilpotent");
        return k;
    }
    // p = 2: kernel of c -> sum c_i n(k_i) on the trace kernel
    if (k.empty()) return k;
    IntMat cond(k.size(), 1);
    for (std::size_t i = 0; i < k.size(); ++i) cond(i, 0) = norm_of(k[i]);
    auto combo = detail::fp_row_kernel(cond, p);
    std::vector<std::vector<Int>> out;
    for (auto& c : combo) {
        std::vector<Int> v(4, 0);
        for (std::size_t i = 0; i < k.size(); ++i)
            for (int j = 0; j < 4; ++j) v[j] = mod_floor(v[j] + c[i] * k[i][j], p);
        bool zero = true;
        for (auto& e : v)
            if (e != 0) zero = false;
        if (!zero) out.push_back(std::move(v));
    }
    return out;
}

// Lattice pO + lifts, as a full-rank sublattice of O in order coordinates.
inline IntMat ideal_lattice(const Int& p, const std::vector<std::vector<Int>>& lifts) {
    IntMat gens(4 + lifts.size(), 4);
    for (int i = 0; i < 4; ++i) gens(i, i) = p;
    for (std::size_t i = 0; i < lifts.size(); ++i)
        for (int j = 0; j < 4; ++j) gens(4 + i, j) = lifts[i][j];
    IntMat h = hnf(gens).h;
    IntMat out(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) = h(h.rows() - 4 + i, j);
    return out;
}

// Close a lattice under two-sided multiplication by the order basis.
inline IntMat two_sided_closure(const Order& o, IntMat lat) {
    for (;;) {
        RatMat b = to_rat(lat);
        std::vector<std::vector<Rat>> gens;
        for (std::size_t i = 0; i < 4; ++i) gens.push_back(b.row(i));
        for (int k = 0; k < 4; ++k) {
            RatMat r = b * o.right_mult(o.basis()[k]);
            RatMat l = b * o.left_mult(o.basis()[k]);
            for (std::size_t i = 0; i < 4; ++i) {
                gens.push_back(r.row(i));
                gens.push_back(l.row(i));
            }
        }
        RatMat stack(gens.size(), 4);
        for (std::size_t i = 0; i < gens.size(); ++i) stack.set_row(i, gens[i]);
        IntMat closed = to_int(lattice_canonical(stack));
        if (closed == lat) return lat;
        lat = closed;
    }
}

// Idealizer {x in (1/p) O : I x ⊆ I} (right = true) or {x : x I ⊆ I}; returns
// the new order basis rows in order coordinates (rational, denominator p).
inline std::optional<RatMat> idealizer(const Order& o, const IntMat& ideal, const Int& p,
                                       bool right) {
    RatMat ib = to_rat(ideal), ibinv = inverse(ib);
    // unknown v in F_p^4 (numerator coords of x = v/p): for each ideal basis
    // element h_i and condition h_i * x in I, i.e. coords_I(h_i * b_j) stacked.
    IntMat sys(4, 16);
    for (int j = 0; j < 4; ++j) {
        RatMat mults = right ? (ib * o.right_mult(o.basis()[j]) * ibinv)
                             : (ib * o.left_mult(o.basis()[j]) * ibinv);
        // mults(i, t) = coords_I(h_i * b_j)_t (right) or coords_I(b_j * h_i)_t
        for (int i = 0; i < 4; ++i)
            for (int t = 0; t < 4; ++t) {
                Rat v = mults(i, t);
                if (!is_integer(v)) throw qerror("Internal", "idealizer: ideal not O-stable");
                sys(j, 4 * i + t) = mod_floor(v.get_num(), p);
            }
    }
    // unknown v with x = sum_j v_j b_j / p; fp_row_kernel solves v * sys == 0
    auto ker = detail::fp_row_kernel(sys, p);
    std::vector<std::vector<Rat>> gens;
    RatMat id = to_rat(IntMat::identity(4));
    for (std::size_t i = 0; i < 4; ++i) gens.push_back(id.row(i));
    bool grew = false;
    for (auto& v : ker) {
        std::vector<Rat> g(4);
        bool in_o = true;
        for (int j = 0; j < 4; ++j) {
            g[j] = make_rat(v[j], p);
            if (!is_integer(g[j])) in_o = false;
        }
        if (!in_o) grew = true;
        gens.push_back(std::move(g));
    }
    if (!grew) return std::nullopt;
    RatMat stack(gens.size(), 4);
    for (std::size_t i = 0; i < gens.size(); ++i) stack.set_row(i, gens[i]);
    RatMat can = lattice_canonical(stack);
    if (can.rows() != 4) throw qerror("Internal", "idealizer: rank drop");
    if (lattice_equal(can, id)) return std::nullopt;
    return can;
}

inline Order order_from_coord_rows(const Order& o, const RatMat& rows) {
    RatMat b = rows * o.basis_matrix();
    std::array<Quat, 4> nb;
    for (int i = 0; i < 4; ++i) nb[i] = Quat(b(i, 0), b(i, 1), b(i, 2), b(i, 3));
    return order_from_basis(o.algebra(), nb);
}

// One strict enlargement of o at p, or nullopt if o is already p-maximal.
inline std::optional<Order> enlarge_at(const Order& o, const Int& p) {
    auto rad = radical_mod_p(o, p);
    std::vector<IntMat> ideals;
    if (!rad.empty()) ideals.push_back(two_sided_closure(o, ideal_lattice(p, rad)));

    // Maximal two-sided ideals above the radical: split the (commutative)
    // semisimple quotient by hunting roots of minimal polynomials.
    {
        std::vector<std::vector<Int>> cand_elems;
        for (int i = 0; i < 4; ++i) {
            std::vector<Int> e(4, 0);
            e[i] = 1;
            cand_elems.push_back(e);
        }
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                std::vector<Int> e(4, 0);
                e[i] = 1;
                e[j] = 1;
                cand_elems.push_back(e);
            }
        for (auto& c : cand_elems) {
            Quat s = o.element(c);
            // char poly of s: X^2 - tr X + n; roots mod p give candidate splits
            Int tr = trace(s).get_num(), nm = o.algebra().norm(s).get_num();
            for (Int r = 0; r < p; ++r) {
                if (mod_floor(r * r - tr * r + nm, p) != 0) continue;
                Quat sr = s - Quat::scalar(Rat(r));
                auto co = o.coords(sr);
                std::vector<Int> lift(4);
                for (int t = 0; t < 4; ++t) lift[t] = mod_floor(co[t].get_num(), p);
                auto gens = rad;
                gens.push_back(lift);
                IntMat lat = two_sided_closure(o, ideal_lattice(p, gens));
                Rat d = det(to_rat(lat));
                if (d != 1 && d != -1) ideals.push_back(lat);  // proper ideal only
            }
        }
    }

    for (auto& ideal : ideals) {
        for (bool right : {true, false}) {
            auto grown = idealizer(o, ideal, p, right);
            if (!grown) continue;
            Order bigger = order_from_coord_rows(o, *grown);
            if (bigger.reduced_discriminant() < o.reduced_discriminant()) return bigger;
        }
    }

    // last resort: brute-force index-p superorders
    for (Int c0 = 0; c0 < p; ++c0)
        for (Int c1 = 0; c1 < p; ++c1)
            for (Int c2 = 0; c2 < p; ++c2)
                for (Int c3 = 0; c3 < p; ++c3) {
                    if (c0 == 0 && c1 == 0 && c2 == 0 && c3 == 0) continue;
                    RatMat rows(5, 4);
                    for (int i = 0; i < 4; ++i) rows(i, i) = Rat(1);
                    rows(4, 0) = make_rat(c0, p);
                    rows(4, 1) = make_rat(c1, p);
                    rows(4, 2) = make_rat(c2, p);
                    rows(4, 3) = make_rat(c3, p);
                    RatMat can = lattice_canonical(rows);
                    if (can.rows() != 4 || lattice_equal(can, to_rat(IntMat::identity(4))))
                        continue;
                    try {
                        Order bigger = order_from_coord_rows(o, can);
                        if (bigger.reduced_discriminant() < o.reduced_discriminant())
                            return bigger;
                    } catch (const qerror&) {
                    }
                }
    return std::nullopt;
}

}  // namespace detail_order

// Maximal order containing o; idempotent on maximal orders. Enlarges one prime
// at a time via radical / maximal-ideal idealizers.
inline Order maximalize(Order o) {
    const Int d = o.algebra().discriminant();
    while (o.reduced_discriminant() != d) {
        Int f = o.reduced_discriminant() / d;
        bool grew = false;
        for (auto& [p, e] : factor(f)) {
            auto bigger = detail_order::enlarge_at(o, p);
            if (bigger) {
                o = *bigger;
                grew = true;
                break;
            }
        }
        if (!grew) throw qerror("Internal", "maximalize: no enlargement found");
    }
    return o;
}

}  // namespace quatlat
