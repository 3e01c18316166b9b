#pragma once

#include <atomic>
#include <thread>

#include "quatlat/hamiltonian.hpp"

namespace quatlat {

// Rank-3 even lattice, either the trace-zero part of an order (with its
// embedding remembered) or a representative produced by enumeration.
struct TernaryLattice {
    ZLattice lat;
    std::optional<std::array<Quat, 3>> embedding;  // trace-zero quaternions
};

// L(O) = {x in O : tr x = 0} with the pairing tr(conj(x) y); determinant 2d^2.
inline TernaryLattice trace_zero_lattice(const Order& o) {
    if (!o.is_maximal()) throw qerror("NotMaximal", "trace-zero lattice wants a maximal order");
    IntMat tr_col(4, 1);
    for (int i = 0; i < 4; ++i) {
        Rat t = trace(o.basis()[i]);
        tr_col(i, 0) = t.get_num();
    }
    IntMat k = integer_kernel(tr_col);
    if (k.rows() != 3) throw qerror("Internal", "trace-zero sublattice must have rank 3");
    RatMat rows = to_rat(k);
    RatMat gram = rows * o.gram() * rows.transposed();
    ZLattice lat(gram);
    const Int& d = o.algebra().discriminant();
    if (lat.determinant() != Rat(2 * d * d))
        throw qerror("Internal", "trace-zero lattice has wrong determinant");
    if (!lat.is_even()) throw qerror("Internal", "trace-zero lattice must be even");
    std::array<Quat, 3> emb;
    for (int i = 0; i < 3; ++i) emb[i] = o.element(rows.row(i));
    return {std::move(lat), emb};
}

// M(L; d): the largest even sublattice of sqrt(d)((d^{-1}L) ∩ L#), with the
// transition matrix back to L coordinates. Applying it twice returns to L
// (exactly, once the ambient d-rescale is divided out) whenever res L is
// anisotropic.
struct MTransform {
    TernaryLattice m;
    RatMat basis_in_parent;
};

inline MTransform m_transform(const ZLattice& l, const Int& d) {
    std::size_t n = l.rank();
    RatMat dinv = make_rat(1, d) * to_rat(IntMat::identity(n));
    RatMat k = lattice_intersect(dinv, inverse(l.gram()));
    // even condition for the d-rescaled Gram: sum of diagonal entries mod 2
    RatMat q_rat = Rat(d) * (k * l.gram() * k.transposed());
    IntMat q = to_int(q_rat);
    IntMat diag(n, 1);
    for (std::size_t i = 0; i < n; ++i) diag(i, 0) = q(i, i);
    IntMat e = kernel_mod(diag, Int(2));
    RatMat basis = to_rat(e) * k;
    RatMat gram = Rat(d) * (basis * l.gram() * basis.transposed());
    return {TernaryLattice{ZLattice(gram), std::nullopt}, basis};
}

inline MTransform m_transform(const TernaryLattice& l, const Int& d) {
    return m_transform(l.lat, d);
}

// Exercise Lemma-style double transform: returns true when M(M(L;d);d) = L as
// a sublattice of L (x) Q, checked in HNF after clearing the ambient rescale.
inline bool m_transform_is_involution(const ZLattice& l, const Int& d) {
    MTransform first = m_transform(l, d);
    MTransform second = m_transform(first.m.lat, d);
    RatMat composite = Rat(d) * (second.basis_in_parent * first.basis_in_parent);
    if (!is_integral(composite)) return false;
    return lattice_equal(composite, to_rat(IntMat::identity(l.rank())));
}

// p-adic symbol data at an odd prime p | d for a rank-3 even lattice of
// determinant 2d: the Gram splits p-adically as A_p ⊥ B_p with A_p of unit
// determinant and rank 2; e_p and e_p' are the Legendre symbols of det A_p
// and p^{-1} det B_p.
struct GenusSymbol {
    Int p;
    int e_p;
    int e_p_prime;
};

namespace detail_ternary {

// Legendre symbol of a p-adic unit given as a rational.
inline int legendre_rat(const Rat& u, const Int& p) {
    return legendre(u.get_num() * u.get_den(), p);
}

// Diagonalize a symmetric rational Gram over Z_(p) (odd p): returns the
// diagonal entries; all transformations are p-integral.
inline std::vector<Rat> p_adic_diagonal(RatMat g, const Int& p) {
    std::size_t n = g.rows();
    for (std::size_t t = 0; t < n; ++t) {
        // entry of minimal valuation in the trailing block, diagonal preferred
        std::size_t bi = t, bj = t;
        bool found = false;
        int bestv = 0;
        for (std::size_t i = t; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                if (g(i, j) == 0) continue;
                int v = valuation(g(i, j), p);
                bool better = !found || v < bestv || (v == bestv && bi != bj && i == j);
                if (better) {
                    bestv = v;
                    bi = i;
                    bj = j;
                    found = true;
                }
            }
        if (!found) throw qerror("Internal", "p-adic diagonalization hit a zero block");
        if (bi != bj) {
            // row/col add makes the diagonal entry attain the minimum (p odd)
            for (std::size_t c = 0; c < n; ++c) g(bi, c) += g(bj, c);
            for (std::size_t r = 0; r < n; ++r) g(r, bi) += g(r, bj);
        }
        if (bi != t) {
            g.swap_rows(bi, t);
            for (std::size_t r = 0; r < n; ++r) std::swap(g(r, bi), g(r, t));
        }
        for (std::size_t i = t + 1; i < n; ++i) {
            if (g(i, t) == 0) continue;
            Rat f = g(i, t) / g(t, t);
            if (valuation(f, p) < 0) throw qerror("Internal", "p-adic pivot not minimal");
            for (std::size_t c = 0; c < n; ++c) g(i, c) -= f * g(t, c);
            for (std::size_t r = 0; r < n; ++r) g(r, i) -= f * g(r, t);
        }
    }
    std::vector<Rat> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = g(i, i);
    return out;
}

}  // namespace detail_ternary

inline GenusSymbol genus_symbols(const ZLattice& m, const Int& d, const Int& p) {
    if (p == 2 || !is_prime(p) || d % p != 0 || (d / p) % p == 0)
        throw qerror("BadArgument", "genus symbols need an odd prime exactly dividing d");
    if (m.determinant() != Rat(2 * d)) throw qerror("BadArgument", "genus symbols need det 2d");
    auto diag = detail_ternary::p_adic_diagonal(m.gram(), p);
    Rat unit_prod(1);
    std::optional<Rat> ramified;
    for (auto& x : diag) {
        int v = valuation(x, p);
        if (v == 0)
            unit_prod *= x;
        else if (v == 1 && !ramified)
            ramified = x / Rat(p);
        else
            throw qerror("Internal", "unexpected p-adic valuations in rank-3 splitting");
    }
    if (!ramified) throw qerror("Internal", "no p-valuation-1 component found");
    GenusSymbol gs{p, detail_ternary::legendre_rat(unit_prod, p),
                   detail_ternary::legendre_rat(*ramified, p)};
    Int twodp = 2 * (d / p);
    if (gs.e_p * gs.e_p_prime != legendre(twodp, p))
        throw qerror("Internal", "genus symbol relation e_p e_p' = (2d/p | p) failed");
    return gs;
}

// Genus membership for the determinant-2d family: e_p = -(-1|p) at every odd
// p | d. The equivalent residue-side test (res M_p cyclic of order p with
// q = a x^2 / p, (a|p) = -((-d/p)|p)) is computed too and must agree.
inline bool in_genus_S(const ZLattice& m, const Int& d) {
    if (m.determinant() != Rat(2 * d) || !m.is_even()) return false;
    for (auto& [p, e] : factor(d)) {
        if (p == 2) continue;
        GenusSymbol gs = genus_symbols(m, d, p);
        bool routeA = gs.e_p == -legendre(Int(-1), p);
        QeModule res = residue(m).p_part(p);
        bool routeB = false;
        if (res.invariant_factors() == std::vector<Int>{p}) {
            Rat scaled = res.q({Int(1)}) * Rat(p);  // q(g) = a/p with a a unit mod p
            Int a = scaled.get_num() * scaled.get_den();
            Int minus_d_over_p = -(d / p);
            routeB = legendre(a, p) == -legendre(minus_d_over_p, p);
        }
        if (routeA != routeB)
            throw qerror("Internal", "the two genus membership tests disagree");
        if (!routeA) return false;
    }
    return true;
}

// Membership in the determinant-2d^2 family: anisotropic residue at every odd
// p | d.
inline bool in_genus_R(const ZLattice& l, const Int& d) {
    if (l.determinant() != Rat(2 * d * d) || !l.is_even()) return false;
    for (auto& [p, e] : factor(d)) {
        if (p == 2) continue;
        if (!is_anisotropic(residue(l).p_part(p))) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Enumeration of the two genera by reduced-form bounds. Minkowski-reduced
// ternary Grams satisfy G11 <= G22 <= G33, |2 Gij| <= Gii, and
// G11 G22 G33 <= 2 det, so scanning that box hits every class at least once;
// duplicates are removed with the exact isometry test.
// ---------------------------------------------------------------------------

namespace detail_ternary {

inline std::vector<ZLattice> enumerate_even_det(const Int& target_det, long slack = 2) {
    long target = target_det.get_si();
    std::vector<ZLattice> out;
    long triple_bound = slack * target;
    for (long g11 = 2; g11 * g11 * g11 <= triple_bound; g11 += 2)
        for (long g22 = g11; g11 * g22 * g22 <= triple_bound; g22 += 2)
            for (long g33 = g22; g11 * g22 * g33 <= triple_bound; g33 += 2)
                for (long g12 = -g11 / 2; g12 <= g11 / 2; ++g12)
                    for (long g13 = -g11 / 2; g13 <= g11 / 2; ++g13)
                        for (long g23 = -g22 / 2; g23 <= g22 / 2; ++g23) {
                            long det = g11 * (g22 * g33 - g23 * g23) -
                                       g12 * (g12 * g33 - g23 * g13) +
                                       g13 * (g12 * g23 - g22 * g13);
                            if (det != target) continue;
                            IntMat g({{Int(g11), Int(g12), Int(g13)},
                                      {Int(g12), Int(g22), Int(g23)},
                                      {Int(g13), Int(g23), Int(g33)}});
                            RatMat gr = to_rat(g);
                            if (!is_positive_definite(gr)) continue;
                            out.push_back(ZLattice(gr));
                        }
    return out;
}

inline std::vector<Int> norm_profile(const ZLattice& l) {
    std::vector<Int> prof;
    auto sv = shortest_vectors(l, Rat(8));
    for (Rat b(2); b <= 8; b += 2) {
        Int c = 0;
        for (auto& v : sv.values)
            if (v == b) ++c;
        prof.push_back(c);
    }
    return prof;
}

inline std::vector<ZLattice> dedupe_classes(std::vector<ZLattice> cands) {
    // sort by Gram entries so representatives are canonical
    std::sort(cands.begin(), cands.end(), [](const ZLattice& a, const ZLattice& b) {
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                if (a.gram()(i, j) != b.gram()(i, j)) return a.gram()(i, j) < b.gram()(i, j);
        return false;
    });
    std::vector<ZLattice> reps;
    std::vector<std::vector<Int>> profiles;
    for (auto& c : cands) {
        std::vector<Int> prof = norm_profile(c);
        bool dup = false;
        for (std::size_t i = 0; i < reps.size() && !dup; ++i) {
            if (profiles[i] != prof) continue;
            if (is_isometric(c, reps[i]).has_value()) dup = true;
        }
        if (!dup) {
            reps.push_back(c);
            profiles.push_back(prof);
        }
    }
    return reps;
}

}  // namespace detail_ternary

inline std::vector<TernaryLattice> enumerate_S(const Int& d) {
    if (!is_admissible_discriminant(d))
        throw qerror("BadArgument", "d must be squarefree with an odd number of prime factors");
    std::vector<ZLattice> cands;
    for (auto& l : detail_ternary::enumerate_even_det(2 * d))
        if (in_genus_S(l, d)) cands.push_back(l);
    std::vector<TernaryLattice> out;
    for (auto& l : detail_ternary::dedupe_classes(std::move(cands)))
        out.push_back({l, std::nullopt});
    return out;
}

inline std::vector<TernaryLattice> enumerate_R(const Int& d) {
    if (!is_admissible_discriminant(d))
        throw qerror("BadArgument", "d must be squarefree with an odd number of prime factors");
    std::vector<ZLattice> cands;
    for (auto& l : detail_ternary::enumerate_even_det(2 * d * d))
        if (in_genus_R(l, d)) cands.push_back(l);
    std::vector<TernaryLattice> out;
    for (auto& l : detail_ternary::dedupe_classes(std::move(cands)))
        out.push_back({l, std::nullopt});
    return out;
}

struct TableRow {
    Int d;
    int t = 0;
    int t_dnp = 0;
};

// A class represents 1 iff its lattice has a vector of norm 2.
inline bool represents_one(const ZLattice& m) { return lattice_minimum(m) == 2; }

inline TableRow table_row(const Int& d) {
    TableRow row{d, 0, 0};
    for (auto& cls : enumerate_S(d)) {
        ++row.t;
        if (!represents_one(cls.lat)) ++row.t_dnp;
    }
    if (!(row.t_dnp < row.t)) throw qerror("Internal", "every genus has a class representing 1");
    return row;
}

inline std::vector<Int> admissible_d_up_to(const Int& dmax) {
    std::vector<Int> ds;
    for (Int d = 2; d <= dmax; ++d)
        if (is_admissible_discriminant(d)) ds.push_back(d);
    return ds;
}

// Full table over admissible d <= dmax; optionally parallel over d.
inline std::vector<TableRow> table(const Int& dmax, unsigned jobs = 1) {
    if (dmax < 2) throw qerror("BadArgument", "table needs dmax >= 2");
    std::vector<Int> ds = admissible_d_up_to(dmax);
    std::vector<TableRow> rows(ds.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < ds.size(); ++i) rows[i] = table_row(ds[i]);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    unsigned n = std::min<unsigned>(jobs, std::max<std::size_t>(ds.size(), 1));
    for (unsigned t = 0; t < n; ++t)
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= ds.size()) return;
                rows[i] = table_row(ds[i]);
            }
        });
    for (auto& th : pool) th.join();
    return rows;
}

// Proper equivalence classes of primitive positive binary forms ax^2+bxy+cy^2
// of the given negative discriminant, counted through reduced forms
// (|b| <= a <= c, with b >= 0 on the boundaries).
inline Int class_number(const Int& disc) {
    if (disc >= 0) throw qerror("BadArgument", "class_number needs a negative discriminant");
    Int mod4 = mod_floor(disc, 4);
    if (mod4 != 0 && mod4 != 1) return 0;
    Int count = 0;
    for (Int b = mod_floor(disc, 2); 3 * b * b <= -disc; b += 2) {
        Int m4 = b * b - disc;  // = 4ac
        if (m4 % 4 != 0) continue;
        Int m = m4 / 4;
        for (Int a = std::max(b, Int(1)); a * a <= m; ++a) {
            if (m % a != 0) continue;
            Int c = m / a;
            if (gcd(gcd(a, b), c) != 1) continue;
            ++count;
            if (b != 0 && b != a && a != c) ++count;  // the (a,-b,c) class
        }
    }
    return count;
}

// Prime-case cross-check: t(p) - t_dnp(p) = (h(-p) + h(-4p)) / 2.
inline bool deuring_check(const Int& p, const TableRow& row) {
    if (!is_prime(p) || row.d != p) throw qerror("BadArgument", "deuring_check needs a prime row");
    Int lhs = row.t - row.t_dnp;
    Int rhs2 = class_number(-p) + class_number(-4 * p);
    return 2 * lhs == rhs2;
}

inline bool deuring_check(const Int& p) { return deuring_check(p, table_row(p)); }

// ---------------------------------------------------------------------------
// From a ternary lattice back to a maximal order (the constructive leg of the
// correspondence): embed the Gram as trace-zero quaternions of a fixed algebra
// of discriminant d, searched inside (1/N) O_0 with N running over divisors
// of 2d, then saturate the generated order.
// ---------------------------------------------------------------------------
inline Order order_from_ternary(const ZLattice& l, const Int& d) {
    if (!in_genus_R(l, d)) throw qerror("BadArgument", "order_from_ternary expects det 2d^2 input");
    QuaternionAlgebra alg = algebra_of_discriminant(d);
    // trace-zero coordinate frame (i, j, k) of O_0 = Z<1,i,j,k>
    RatMat g0(3, 3);
    std::array<Quat, 3> frame{Quat(Rat(0), Rat(1), Rat(0), Rat(0)),
                              Quat(Rat(0), Rat(0), Rat(1), Rat(0)),
                              Quat(Rat(0), Rat(0), Rat(0), Rat(1))};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g0(i, j) = alg.inner(frame[i], frame[j]);

    // Denominators 1, 2, 3, ... up to 2d. (Divisors of 2d alone do not
    // suffice: the discriminant-13 order needs denominator 4.)
    std::vector<Int> schedule;
    for (Int n = 1; n <= 2 * d; ++n) schedule.push_back(n);

    // Embed a reduced basis; large HNF diagonals would blow up the norm shells.
    const RatMat g = lll_gram(l.gram()).gram;
    for (const Int& den : schedule) {
        Rat scale = Rat(den * den);
        // vectors v with v g0 v^T = N^2 * G_aa, i.e. candidates for N f_a
        auto shell = [&](const Rat& target) {
            std::vector<std::vector<Int>> res;
            for (auto& e : enumerate_up_to(g0, scale * target))
                if (e.value == scale * target) res.push_back(e.x);
            return res;
        };
        auto pair_ok = [&](const std::vector<Int>& x, const std::vector<Int>& y, const Rat& want) {
            return dot(to_rat(x) * g0, to_rat(y)) == scale * want;
        };
        auto c1 = shell(g(0, 0));
        auto c2 = shell(g(1, 1));
        auto c3 = shell(g(2, 2));
        for (auto& f1 : c1)
            for (auto& f2 : c2) {
                if (!pair_ok(f1, f2, g(0, 1))) continue;
                for (auto& f3 : c3) {
                    if (!pair_ok(f1, f3, g(0, 2)) || !pair_ok(f2, f3, g(1, 2))) continue;
                    std::array<Quat, 3> f;
                    std::array<std::vector<Int>, 3> coords{f1, f2, f3};
                    for (int t = 0; t < 3; ++t) {
                        Quat v;
                        for (int s = 0; s < 3; ++s) v = v + Rat(coords[t][s]) * frame[s];
                        f[t] = make_rat(1, den) * v;
                    }
                    // ring generated by 1 and the f's (their pairwise products
                    // close it up)
                    std::vector<Quat> gens{Quat::one(), f[0], f[1], f[2],
                                           alg.mul(f[0], f[1]), alg.mul(f[0], f[2]),
                                           alg.mul(f[1], f[2]),
                                           alg.mul(f[0], alg.mul(f[1], f[2]))};
                    RatMat rows(gens.size(), 4);
                    for (std::size_t r = 0; r < gens.size(); ++r)
                        for (int s = 0; s < 4; ++s) rows(r, s) = gens[r].c[s];
                    RatMat can = lattice_canonical(rows);
                    if (can.rows() != 4) continue;
                    std::array<Quat, 4> basis;
                    for (int r = 0; r < 4; ++r)
                        basis[r] = Quat(can(r, 0), can(r, 1), can(r, 2), can(r, 3));
                    Order o1 = order_from_basis(alg, basis);
                    Order o = maximalize(o1);
                    TernaryLattice lo = trace_zero_lattice(o);
                    if (!is_isometric(lo.lat, l).has_value())
                        throw qerror("Internal",
                                     "reconstructed order has a different trace-zero class");
                    return o;
                }
            }
    }
    throw qerror("EmbeddingNotFound",
                 "no trace-zero embedding found within the denominator schedule");
}

// The five equivalent principality tests, evaluated independently; they must
// agree for every maximal order.
struct PrincipalityReport {
    bool different_principal;      // some x of norm D generates the different
    bool has_norm_d_element;       // n(x) = D solvable in O
    bool has_square_minus_d;       // x^2 = -D solvable in O
    bool trace_zero_witness;       // x in L(O): x.x = 2D, x.y = 0 mod D for all y
    bool m_lattice_min_two;        // min M(O) = 2
    bool all() const { return different_principal; }
};

inline PrincipalityReport theorem25_report(const Order& o) {
    if (!o.is_maximal()) throw qerror("NotMaximal", "principality report needs a maximal order");
    const Int& d = o.algebra().discriminant();
    PrincipalityReport rep{};

    Sublattice m = o.different();
    auto norm_d = o.enumerate_by_norm(d, false);
    rep.has_norm_d_element = !norm_d.empty();
    rep.different_principal = false;
    for (auto& x : norm_d)
        if (o.principal_right_ideal(x) == m) {
            rep.different_principal = true;
            break;
        }
    auto tz = o.enumerate_by_norm(d, true);
    rep.has_square_minus_d = false;
    for (auto& x : tz)
        if (o.algebra().mul(x, x) == Quat::scalar(Rat(-d))) {
            rep.has_square_minus_d = true;
            break;
        }

    TernaryLattice l = trace_zero_lattice(o);
    rep.trace_zero_witness = false;
    auto sv = shortest_vectors(l.lat, Rat(2 * d));
    for (std::size_t i = 0; i < sv.vectors.size(); ++i) {
        if (sv.values[i] != Rat(2 * d)) continue;
        std::vector<Rat> row = to_rat(sv.vectors[i]) * l.lat.gram();
        bool div = true;
        for (auto& e : row)
            if (!is_integer(e) || mod_floor(e.get_num(), d) != 0) div = false;
        if (div) {
            rep.trace_zero_witness = true;
            break;
        }
    }

    MTransform mt = m_transform(l.lat, d);
    rep.m_lattice_min_two = lattice_minimum(mt.m.lat) == 2;

    bool v = rep.different_principal;
    if (rep.has_norm_d_element != v || rep.has_square_minus_d != v ||
        rep.trace_zero_witness != v || rep.m_lattice_min_two != v)
        throw qerror("Theorem25Disagreement", "the five principality tests disagree");
    return rep;
}

}  // namespace quatlat
