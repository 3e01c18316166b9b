#pragma once

#include <complex>
#include <optional>
#include <set>

#include "quatlat/enumerate.hpp"

namespace quatlat {

// Euclidean Z-lattice given abstractly by the Gram matrix of a fixed basis.
class ZLattice {
public:
    explicit ZLattice(RatMat gram) : gram_(std::move(gram)) {
        if (!gram_.is_square() || !gram_.is_symmetric())
            throw qerror("NotSymmetric", "lattice Gram must be symmetric");
        if (!is_positive_definite(gram_))
            throw qerror("NotPositiveDefinite", "lattice Gram must be positive definite");
    }

    std::size_t rank() const { return gram_.rows(); }
    const RatMat& gram() const { return gram_; }
    Rat determinant() const { return det(gram_); }

    bool is_integral() const { return quatlat::is_integral(gram_); }
    bool is_even() const {
        if (!is_integral()) return false;
        for (std::size_t i = 0; i < rank(); ++i)
            if (mod_floor(gram_(i, i).get_num(), 2) != 0) return false;
        return true;
    }

    Rat inner(const std::vector<Int>& x, const std::vector<Int>& y) const {
        return dot(to_rat(x) * gram_, to_rat(y));
    }
    Rat norm(const std::vector<Int>& x) const { return inner(x, x); }

private:
    RatMat gram_;
};

// Sub- or overlattice together with its basis written in the coordinates of
// the lattice it was derived from.
struct DerivedLattice {
    ZLattice lattice;
    RatMat basis_in_parent;
};

// Dual lattice in the primal coordinates: basis rows G^{-1}, Gram G^{-1}.
inline DerivedLattice dual(const ZLattice& l) {
    RatMat ginv = inverse(l.gram());
    return {ZLattice(ginv), ginv};
}

// Finite quadratic module (V, q), V = L#/L, q(x) = x.x/2 mod Z. Elements are
// integer coordinate vectors against the stored generators, taken mod the
// invariant factors.
class QeModule {
public:
    QeModule() = default;

    static QeModule from_residue(const std::vector<Int>& invf, RatMat lifts, std::vector<Rat> qg,
                                 RatMat bil, std::optional<RatMat> coord_map, std::size_t ambient) {
        QeModule v;
        v.invf_ = invf;
        v.lifts_ = std::move(lifts);
        v.qg_ = std::move(qg);
        v.bil_ = std::move(bil);
        v.coord_map_ = std::move(coord_map);
        v.ambient_ = ambient;
        return v;
    }

    const std::vector<Int>& invariant_factors() const { return invf_; }
    std::size_t ngens() const { return invf_.size(); }
    std::size_t ambient_rank() const { return ambient_; }
    const RatMat& generator_lifts() const { return lifts_; }

    Int order() const {
        Int o = 1;
        for (auto& d : invf_) o *= d;
        return o;
    }

    std::vector<Int> reduce(std::vector<Int> a) const {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = mod_floor(a[i], invf_[i]);
        return a;
    }

    Rat q(const std::vector<Int>& a0) const {
        std::vector<Int> a = reduce(a0);
        Rat s(0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            s += Rat(a[i] * a[i]) * qg_[i];
            for (std::size_t j = i + 1; j < a.size(); ++j) s += Rat(a[i] * a[j]) * bil_(i, j);
        }
        return mod1(s);
    }

    Rat bilinear(const std::vector<Int>& a0, const std::vector<Int>& b0) const {
        std::vector<Int> a = reduce(a0), b = reduce(b0);
        Rat s(0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) {
                Rat bij = (i == j) ? mod1(2 * qg_[i]) : bil_(i, j);
                s += Rat(a[i] * b[j]) * bij;
            }
        return mod1(s);
    }

    // Lift of an element to L-coordinates (a vector of L#).
    std::vector<Rat> lift(const std::vector<Int>& a) const {
        std::vector<Rat> y(ambient_, Rat(0));
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < ambient_; ++j) y[j] += Rat(a[i]) * lifts_(i, j);
        return y;
    }

    // Group coordinates of a vector of L# given in L-coordinates.
    std::vector<Int> coords(const std::vector<Rat>& y) const {
        if (!coord_map_) throw qerror("Internal", "qe-module without a coordinate map");
        std::vector<Rat> c = y * (*coord_map_);
        std::vector<Int> a(ngens());
        for (std::size_t i = 0; i < ngens(); ++i) {
            if (!is_integer(c[i])) throw qerror("Internal", "coords: vector not in the dual");
            a[i] = mod_floor(c[i].get_num(), invf_[i]);
        }
        return a;
    }

    // Visit every element exactly once (including zero).
    template <class F>
    void for_each_element(F&& f) const {
        std::vector<Int> a(ngens(), 0);
        for (;;) {
            f(a);
            std::size_t i = 0;
            while (i < ngens()) {
                ++a[i];
                if (a[i] < invf_[i]) break;
                a[i] = 0;
                ++i;
            }
            if (i == ngens()) return;
        }
    }

    // p-primary component, as generators inside this module: pairs of
    // (element coords, order p^v).
    QeModule p_part(const Int& p) const {
        std::vector<Int> invf;
        std::vector<std::size_t> keep;
        std::vector<Int> scale;
        for (std::size_t i = 0; i < ngens(); ++i) {
            int v = valuation(invf_[i], p);
            if (v == 0) continue;
            keep.push_back(i);
            Int pv = pow_int(p, v);
            invf.push_back(pv);
            scale.push_back(invf_[i] / pv);
        }
        RatMat lifts(keep.size(), ambient_);
        std::vector<Rat> qg(keep.size());
        RatMat bil(keep.size(), keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i) {
            for (std::size_t j = 0; j < ambient_; ++j)
                lifts(i, j) = Rat(scale[i]) * lifts_(keep[i], j);
            qg[i] = mod1(Rat(scale[i] * scale[i]) * qg_[keep[i]]);
            for (std::size_t j = 0; j < keep.size(); ++j)
                if (i != j) bil(i, j) = mod1(Rat(scale[i] * scale[j]) * bil_(keep[i], keep[j]));
        }
        return from_residue(invf, std::move(lifts), std::move(qg), std::move(bil), std::nullopt,
                            ambient_);
    }

    std::vector<Int> prime_support() const {
        std::set<Int> ps;
        for (auto& d : invf_)
            for (auto& [p, e] : factor(d)) ps.insert(p);
        return std::vector<Int>(ps.begin(), ps.end());
    }

private:
    std::vector<Int> invf_;
    RatMat lifts_;
    std::vector<Rat> qg_;
    RatMat bil_;
    std::optional<RatMat> coord_map_;
    std::size_t ambient_ = 0;
};

// Residue (discriminant form) L#/L of an integral even lattice.
inline QeModule residue(const ZLattice& l) {
    if (!l.is_integral() || !l.is_even()) throw qerror("NotEven", "residue needs an even lattice");
    IntMat g = to_int(l.gram());
    SnfResult s = snf(g);
    std::size_t n = l.rank();
    // generator i lifts to (row i of U)/d_i; group coords of y are (y G V) mod d
    RatMat ginv = inverse(l.gram());
    std::vector<Int> invf;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (s.d[i] > 1) {
            invf.push_back(s.d[i]);
            keep.push_back(i);
        }
    RatMat lifts(invf.size(), n);
    for (std::size_t i = 0; i < invf.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) lifts(i, j) = make_rat(s.u(keep[i], j), invf[i]);
    std::vector<Rat> qg(invf.size());
    RatMat bil(invf.size(), invf.size());
    for (std::size_t i = 0; i < invf.size(); ++i) {
        std::vector<Rat> gi = lifts.row(i) * l.gram();
        qg[i] = mod1(dot(gi, lifts.row(i)) / 2);
        for (std::size_t j = 0; j < invf.size(); ++j)
            if (i != j) bil(i, j) = mod1(dot(gi, lifts.row(j)));
    }
    RatMat full_map = l.gram() * to_rat(s.v);
    RatMat coord_map(n, invf.size());
    for (std::size_t j = 0; j < invf.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) coord_map(i, j) = full_map(i, keep[j]);
    return QeModule::from_residue(invf, std::move(lifts), std::move(qg), std::move(bil),
                                  std::move(coord_map), n);
}

// Anisotropy checked prime by prime: q vanishes only at zero on each primary
// component iff it vanishes only at zero globally.
inline bool is_anisotropic(const QeModule& v) {
    for (auto& p : v.prime_support()) {
        QeModule w = v.p_part(p);
        bool bad = false;
        w.for_each_element([&](const std::vector<Int>& a) {
            if (bad) return;
            bool zero = true;
            for (auto& x : a)
                if (x != 0) zero = false;
            if (!zero && w.q(a) == 0) bad = true;
        });
        if (bad) return false;
    }
    return true;
}

// gamma(V, q) = |V|^{-1/2} sum over V of e^{2 pi i q(x)}.
inline std::complex<double> gauss_sum(const QeModule& v) {
    constexpr double tau = 6.283185307179586476925286766559;
    std::complex<double> s(0.0, 0.0);
    v.for_each_element([&](const std::vector<Int>& a) {
        double qa = v.q(a).get_d();
        s += std::complex<double>(std::cos(tau * qa), std::sin(tau * qa));
    });
    return s / std::sqrt(v.order().get_d());
}

struct SubgroupSpec {
    std::vector<std::vector<Int>> generators;  // element coordinates in res L
};

// Subgroup generated by the spec inside V, as a sorted element list.
inline std::vector<std::vector<Int>> subgroup_span(const QeModule& v, const SubgroupSpec& spec) {
    std::set<std::vector<Int>> seen;
    std::vector<std::vector<Int>> frontier;
    std::vector<Int> zero(v.ngens(), 0);
    seen.insert(zero);
    frontier.push_back(zero);
    while (!frontier.empty()) {
        std::vector<Int> x = frontier.back();
        frontier.pop_back();
        for (auto& g : spec.generators) {
            std::vector<Int> y(v.ngens());
            for (std::size_t i = 0; i < v.ngens(); ++i) y[i] = x[i] + g[i];
            y = v.reduce(y);
            if (seen.insert(y).second) frontier.push_back(y);
        }
    }
    return std::vector<std::vector<Int>>(seen.begin(), seen.end());
}

// Even overlattice pr^{-1}(I) for an isotropic subgroup I of res L.
inline DerivedLattice glue(const ZLattice& l, const QeModule& v, const SubgroupSpec& spec) {
    if (!l.is_even()) throw qerror("NotEven", "glue needs an even base lattice");
    auto span = subgroup_span(v, spec);
    for (auto& x : span)
        if (v.q(x) != 0) throw qerror("NotIsotropic", "glue subgroup is not isotropic");
    Int m(span.size());

    std::size_t n = l.rank();
    RatMat rows(n + spec.generators.size(), n);
    for (std::size_t i = 0; i < n; ++i) rows(i, i) = Rat(1);
    for (std::size_t i = 0; i < spec.generators.size(); ++i)
        rows.set_row(n + i, v.lift(spec.generators[i]));
    RatMat basis = lattice_canonical(rows);
    if (basis.rows() != n) throw qerror("Internal", "glue: rank drop");
    RatMat gram = basis * l.gram() * basis.transposed();
    ZLattice out(gram);
    if (!out.is_even()) throw qerror("Internal", "glue: overlattice is not even");
    // index and determinant bookkeeping: det = det L / |I|^2
    if (lattice_index(basis, to_rat(IntMat::identity(n))) != m)
        throw qerror("Internal", "glue: wrong index");
    if (out.determinant() * Rat(m * m) != l.determinant())
        throw qerror("Internal", "glue: determinant mismatch");
    return {out, basis};
}

struct ShortVectors {
    Rat min;                          // least nonzero norm of the lattice
    std::vector<std::vector<Int>> vectors;  // complete list with norm <= bound
    std::vector<Rat> values;
};

inline ShortVectors shortest_vectors(const ZLattice& l, const Rat& bound) {
    ShortVectors out{Rat(0), {}, {}};
    auto ents = enumerate_up_to(l.gram(), bound);
    for (auto& e : ents) {
        out.vectors.push_back(e.x);
        out.values.push_back(e.value);
    }
    out.min = ents.empty() ? minimum_value(l.gram()) : ents.front().value;
    return out;
}

inline Rat lattice_minimum(const ZLattice& l) { return minimum_value(l.gram()); }

// Isometry testing for rank <= 4 by backtracking over short-vector images.
inline std::optional<IntMat> is_isometric(const ZLattice& l1, const ZLattice& l2) {
    if (l1.rank() != l2.rank()) return std::nullopt;
    std::size_t n = l1.rank();
    if (n > 4) throw qerror("RankUnsupported", "isometry search supports rank <= 4");
    if (l1.determinant() != l2.determinant()) return std::nullopt;
    if (n == 0) return IntMat::identity(0);

    LllResult red = lll_gram(l1.gram());
    const RatMat& g1 = red.gram;
    // candidate images per basis vector: all vectors of the exact same norm
    std::vector<std::vector<std::vector<Int>>> cand(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& e : enumerate_up_to(l2.gram(), g1(i, i)))
            if (e.value == g1(i, i)) cand[i].push_back(e.x);
        if (cand[i].empty()) return std::nullopt;
    }
    std::vector<std::vector<Int>> chosen(n);
    std::vector<std::vector<Rat>> chosen_g2(n);  // chosen * G2, cached
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == n) return true;
        for (auto& c : cand[i]) {
            bool ok = true;
            std::vector<Rat> cg = to_rat(c) * l2.gram();
            for (std::size_t j = 0; j < i && ok; ++j)
                if (dot(chosen_g2[j], to_rat(c)) != g1(j, i)) ok = false;
            if (!ok) continue;
            chosen[i] = c;
            chosen_g2[i] = cg;
            if (rec(i + 1)) return true;
        }
        return false;
    };
    if (!rec(0)) return std::nullopt;
    IntMat t(n, n);
    for (std::size_t i = 0; i < n; ++i) t.set_row(i, chosen[i]);
    // map back through the LLL transform: rows express images of the original
    // basis of L1 in L2 coordinates
    RatMat m = inverse(to_rat(red.u)) * to_rat(t);
    IntMat out = to_int(m);
    if (to_rat(out) * l2.gram() * to_rat(out).transposed() != l1.gram())
        throw qerror("Internal", "isometry backtracking returned a non-isometry");
    return out;
}

}  // namespace quatlat
