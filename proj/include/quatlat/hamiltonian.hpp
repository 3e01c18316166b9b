#pragma once

#include "quatlat/lattice.hpp"
#include "quatlat/order.hpp"

namespace quatlat {

// Positive definite binary form over the quaternions:
//   f(u, v) = a n(u) + tr(conj(u) b v) + c n(v),  Delta(f) = n(b) - ac < 0.
struct HamiltonianBinaryForm {
    Rat a;
    Quat b;
    Rat c;

    HamiltonianBinaryForm(Rat a_, Quat b_, Rat c_, const QuaternionAlgebra& alg)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {
        if (a <= 0 || c <= 0 || discriminant(alg) >= 0)
            throw qerror("NotDefinite", "form must have a, c > 0 and negative discriminant");
    }

    Rat discriminant(const QuaternionAlgebra& alg) const { return alg.norm(b) - a * c; }
};

// Rank-8 lattice in O^2 (x) Q with a right O-action. Ambient coordinates are
// two copies of the order's coordinate system; the second copy carries a Gram
// scale (1 for sublattices of H x H containing O x O, 1/D for the O x N
// picture, which represents the 1/sqrt(D) stretch exactly).
struct OLattice {
    Order order;
    Rat second_scale;
    RatMat basis;  // 8x8 rows, ambient coordinates
    ZLattice lat;
    std::array<IntMat, 4> action;  // right multiplication by the order basis
    std::optional<std::array<std::vector<Rat>, 2>> obasis_ambient;
};

namespace detail_ham {

inline RatMat ambient_gram(const Order& o, const Rat& s) {
    RatMat g(8, 8);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            g(i, j) = o.gram()(i, j);
            g(4 + i, 4 + j) = s * o.gram()(i, j);
        }
    return g;
}

inline RatMat ambient_action(const Order& o, const Quat& x) {
    RatMat r = o.right_mult(x);
    RatMat m(8, 8);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            m(i, j) = r(i, j);
            m(4 + i, 4 + j) = r(i, j);
        }
    return m;
}

inline std::pair<Quat, Quat> split(const Order& o, const std::vector<Rat>& w) {
    std::vector<Rat> x(w.begin(), w.begin() + 4), y(w.begin() + 4, w.end());
    return {o.element(x), o.element(y)};
}

}  // namespace detail_ham

// Hermitian product h(w, w') = conj(x') x + s conj(y') y for w = (x, y),
// w' = (x', y'); h(w, w) = f0(w) and w.w = 2 f0(w).
inline Quat hermitian_product(const OLattice& ol, const std::vector<Rat>& w,
                              const std::vector<Rat>& wp) {
    auto [x, y] = detail_ham::split(ol.order, w);
    auto [xp, yp] = detail_ham::split(ol.order, wp);
    const QuaternionAlgebra& alg = ol.order.algebra();
    return alg.mul(conj(xp), x) + ol.second_scale * alg.mul(conj(yp), y);
}

// Assembles an OLattice from ambient basis rows, verifying stability under the
// right O-action and the similitude identity A_x G A_x^T = n(x) G.
inline OLattice make_olattice(const Order& o, const Rat& s, const RatMat& basis,
                              std::optional<std::array<std::vector<Rat>, 2>> obasis) {
    RatMat gamb = detail_ham::ambient_gram(o, s);
    RatMat gram = basis * gamb * basis.transposed();
    ZLattice lat(gram);
    RatMat binv = inverse(basis);
    std::array<IntMat, 4> action{IntMat(), IntMat(), IntMat(), IntMat()};
    for (int k = 0; k < 4; ++k) {
        RatMat a = basis * detail_ham::ambient_action(o, o.basis()[k]) * binv;
        if (!is_integral(a)) throw qerror("NotStable", "lattice is not right-O-stable");
        action[k] = to_int(a);
        RatMat sim = to_rat(action[k]) * gram * to_rat(action[k]).transposed();
        if (sim != o.algebra().norm(o.basis()[k]) * gram)
            throw qerror("Internal", "similitude identity failed");
    }
    return OLattice{o, s, basis, std::move(lat), std::move(action), std::move(obasis)};
}

// Action matrix of an arbitrary order element on the lattice basis.
inline IntMat olattice_action(const OLattice& ol, const Quat& x) {
    RatMat a = ol.basis * detail_ham::ambient_action(ol.order, x) * inverse(ol.basis);
    return to_int(a);
}

struct E8Checks {
    bool even;
    Rat det;
    Rat minimum;
    std::size_t root_count;
    std::vector<std::vector<Int>> roots;  // in lattice basis coordinates
};

// The rank-8 identification: even + determinant 1 + minimum 2 (with its 240
// roots) pins the lattice up to isometry.
inline E8Checks e8_checks(const OLattice& ol) {
    E8Checks c{ol.lat.is_even(), ol.lat.determinant(), Rat(0), 0, {}};
    auto sv = shortest_vectors(ol.lat, Rat(2));
    c.minimum = sv.min;
    c.roots = sv.vectors;
    c.root_count = sv.vectors.size();
    return c;
}

inline bool e8_ok(const E8Checks& c) {
    return c.even && c.det == 1 && c.minimum == 2 && c.root_count == 240;
}

// ---------------------------------------------------------------------------
// Lambda route: Lambda_lambda = {(pi^{-1}u, pi^{-1}v) : u, v in O,
// lambda u = v (mod pi O)}, free over O on e1 = (pi^{-1}, pi^{-1} lambda),
// e2 = (0, 1).
// ---------------------------------------------------------------------------
inline OLattice build_lambda_lattice(const Order& o, const Quat& pi, const Quat& lambda) {
    const Int& d = o.algebra().discriminant();
    if (o.algebra().norm(pi) != Rat(d)) throw qerror("BadPi", "n(pi) must equal the discriminant");
    Sublattice m = o.different();
    if (!(o.principal_right_ideal(pi) == m) || !(o.principal_left_ideal(pi) == m))
        throw qerror("BadPi", "pi does not generate the different on both sides");
    Rat nl = o.algebra().norm(lambda);
    if (!o.contains(lambda) || !is_integer(nl) || mod_floor(nl.get_num() + 1, d) != 0)
        throw qerror("BadLambda", "need lambda in O with n(lambda) = -1 (mod D)");

    Quat pinv = o.algebra().inverse(pi);
    RatMat basis(8, 8);
    for (int k = 0; k < 4; ++k) {
        // e1 * b_k = (pi^{-1} b_k, pi^{-1} lambda b_k)
        Quat u = o.algebra().mul(pinv, o.basis()[k]);
        Quat v = o.algebra().mul(o.algebra().mul(pinv, lambda), o.basis()[k]);
        auto cu = o.coords(u), cv = o.coords(v);
        for (int t = 0; t < 4; ++t) {
            basis(k, t) = cu[t];
            basis(k, 4 + t) = cv[t];
        }
        // e2 * b_k = (0, b_k)
        basis(4 + k, 4 + k) = Rat(1);
    }
    std::vector<Rat> e1(8, Rat(0)), e2(8, Rat(0));
    auto cpinv = o.coords(pinv), cpl = o.coords(o.algebra().mul(pinv, lambda));
    auto c1 = o.coords(Quat::one());
    for (int t = 0; t < 4; ++t) {
        e1[t] = cpinv[t];
        e1[4 + t] = cpl[t];
        e2[4 + t] = c1[t];  // e2 = (0, 1)
    }

    OLattice ol = make_olattice(o, Rat(1), basis, std::array<std::vector<Rat>, 2>{e1, e2});

    // index over O x O is |O/piO| = D^2
    Int idx = lattice_index(ol.basis, to_rat(IntMat::identity(8)));
    if (idx != d * d) throw qerror("Internal", "lambda lattice has wrong index over O x O");
    return ol;
}

// ---------------------------------------------------------------------------
// Glue route: start from O x N, N = (1/sqrt D) M, and glue a right-O-stable
// isotropic subgroup of order D^2 found by search, one prime at a time.
// ---------------------------------------------------------------------------
inline OLattice build_glue_lattice(const Order& o) {
    if (!o.is_maximal()) throw qerror("NotMaximal", "glue construction needs a maximal order");
    const Int& d = o.algebra().discriminant();
    Sublattice m = o.different();

    RatMat bl(8, 8);
    for (int i = 0; i < 4; ++i) {
        bl(i, i) = Rat(1);
        for (int j = 0; j < 4; ++j) bl(4 + i, 4 + j) = Rat(m.basis(i, j));
    }
    Rat s = make_rat(1, d);
    RatMat gamb = detail_ham::ambient_gram(o, s);
    ZLattice base(bl * gamb * bl.transposed());
    if (!base.is_even()) throw qerror("Internal", "O x N must be an even lattice");
    QeModule v = residue(base);

    // right-O action written on the coordinates of the base lattice
    RatMat blinv = inverse(bl);
    std::array<RatMat, 4> act;
    for (int k = 0; k < 4; ++k) {
        act[k] = bl * detail_ham::ambient_action(o, o.basis()[k]) * blinv;
        if (!is_integral(act[k])) throw qerror("Internal", "O x N not right-O-stable");
    }

    auto component_order = [&](const std::vector<Rat>& y, int half) {
        Int l = 1;
        for (int t = 0; t < 4; ++t) l = lcm(l, y[4 * half + t].get_den());
        return l;
    };

    std::vector<std::vector<Int>> glue_gens;
    for (auto& p : o.algebra().ramified_primes()) {
        bool found = false;
        std::optional<std::vector<std::vector<Int>>> accepted;
        v.for_each_element([&](const std::vector<Int>& a) {
            if (found) return;
            bool zero = true;
            for (auto& x : a)
                if (x != 0) zero = false;
            if (zero || v.q(a) != 0) return;
            std::vector<Rat> y = v.lift(a);
            if (component_order(y, 0) != p || component_order(y, 1) != p) return;
            // close the candidate under the O-action
            std::vector<std::vector<Int>> gens{a};
            std::vector<std::vector<Int>> span;
            for (;;) {
                span = subgroup_span(v, SubgroupSpec{gens});
                if (Int(span.size()) > p * p) return;  // too big, reject
                bool stable = true;
                for (auto& el : span) {
                    std::vector<Rat> ly = v.lift(el);
                    for (int k = 0; k < 4 && stable; ++k) {
                        std::vector<Int> img = v.coords(ly * act[k]);
                        bool in = false;
                        for (auto& sp : span)
                            if (sp == img) in = true;
                        if (!in) {
                            gens.push_back(img);
                            stable = false;
                        }
                    }
                    if (!stable) break;
                }
                if (stable) break;
            }
            if (Int(span.size()) != p * p) return;
            for (auto& el : span)
                if (v.q(el) != 0) return;
            accepted = gens;
            found = true;
        });
        if (!found)
            throw qerror("GlueNotFound",
                         "no isotropic O-stable subgroup of order p^2 at p = " + p.get_str());
        for (auto& g : *accepted) glue_gens.push_back(g);
    }

    DerivedLattice glued = glue(base, v, SubgroupSpec{glue_gens});
    Int idx = lattice_index(glued.basis_in_parent, to_rat(IntMat::identity(8)));
    if (idx != d * d) throw qerror("Internal", "glued lattice has wrong index over O x N");

    RatMat basis = glued.basis_in_parent * bl;
    return make_olattice(o, s, basis, std::nullopt);
}

// Search for an O-basis (e1, e2) among short vectors: accepted when the eight
// products e_a b_k form a Z-basis. Roots are scanned first, then norm <= 4,
// then norm <= 8.
inline bool find_obasis(OLattice& ol) {
    if (ol.obasis_ambient) return true;
    for (Rat bound : {Rat(2), Rat(4), Rat(8)}) {
        auto sv = enumerate_up_to(ol.lat.gram(), bound);
        for (auto& c1 : sv) {
            IntMat rows(8, 8);
            for (int k = 0; k < 4; ++k) {
                std::vector<Int> img = c1.x * ol.action[k];
                for (int t = 0; t < 8; ++t) rows(k, t) = img[t];
            }
            for (auto& c2 : sv) {
                for (int k = 0; k < 4; ++k) {
                    std::vector<Int> img = c2.x * ol.action[k];
                    for (int t = 0; t < 8; ++t) rows(4 + k, t) = img[t];
                }
                Rat dt = det(rows);
                if (dt == 1 || dt == -1) {
                    std::vector<Rat> e1 = to_rat(c1.x) * ol.basis;
                    std::vector<Rat> e2 = to_rat(c2.x) * ol.basis;
                    ol.obasis_ambient = std::array<std::vector<Rat>, 2>{e1, e2};
                    return true;
                }
            }
        }
    }
    return false;
}

// f_Lambda from an O-basis: (u,v) -> f0(e1 u + e2 v).
inline HamiltonianBinaryForm form_from_obasis(const OLattice& ol) {
    if (!ol.obasis_ambient) throw qerror("NoObasis", "lattice has no O-basis attached");
    const auto& e = *ol.obasis_ambient;
    RatMat gamb = detail_ham::ambient_gram(ol.order, ol.second_scale);
    Rat a = dot(e[0] * gamb, e[0]) / 2;
    Rat c = dot(e[1] * gamb, e[1]) / 2;
    Quat b = hermitian_product(ol, e[0], e[1]);
    return HamiltonianBinaryForm(a, b, c, ol.order.algebra());
}

// Exact minimum of f over nonzero (u, v) in O^2 via the induced rank-8 Gram
// (the Gram of 2f on the Z-basis of O^2).
inline Rat form_minimum(const HamiltonianBinaryForm& f, const Order& o) {
    const QuaternionAlgebra& alg = o.algebra();
    RatMat g(8, 8);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            g(i, j) = f.a * o.gram()(i, j);
            g(4 + i, 4 + j) = f.c * o.gram()(i, j);
            Rat cross = trace(alg.mul(alg.mul(conj(o.basis()[i]), f.b), o.basis()[j]));
            g(i, 4 + j) = cross;
            g(4 + j, i) = cross;
        }
    return minimum_value(g) / 2;
}

// Ordered pairs of roots with prescribed Hermitian product; this counts the
// unitary group of the lattice when the target is h(e1, e2) for a root O-basis.
inline Int count_root_pairs(const OLattice& ol, const Quat& target) {
    auto sv = shortest_vectors(ol.lat, Rat(2));
    if (sv.min != 2) throw qerror("BadArgument", "count_root_pairs needs a minimum-2 lattice");
    std::vector<std::pair<Quat, Quat>> roots;
    roots.reserve(sv.vectors.size());
    for (auto& x : sv.vectors) {
        std::vector<Rat> w = to_rat(x) * ol.basis;
        roots.push_back(detail_ham::split(ol.order, w));
    }
    const QuaternionAlgebra& alg = ol.order.algebra();
    Int count = 0;
    for (auto& [ax, ay] : roots)
        for (auto& [bx, by] : roots) {
            Quat h = alg.mul(conj(bx), ax) + ol.second_scale * alg.mul(conj(by), ay);
            if (h == target) ++count;
        }
    return count;
}

// Consistency report for prime discriminants with one-class orders:
// 24 = (p-1) p^n m and 240 p^n = r |U|.
struct OrbitReport {
    Int p;
    int n = 0;
    Int m;
    Int unitary_order;
    Int r;
};

inline OrbitReport orbit_report(const Int& p, const OLattice& ol) {
    static const std::vector<Int> supported{2, 3, 5, 7, 13};
    bool ok = false;
    for (auto& q : supported) ok = ok || q == p;
    if (!ok) throw qerror("BadArgument", "orbit report needs p in {2,3,5,7,13}");
    if (!ol.obasis_ambient) throw qerror("NoObasis", "orbit report needs a root O-basis");
    OrbitReport rep;
    rep.p = p;
    Int rest = 24 / (p - 1);
    rep.n = 0;
    while (rest % p == 0) {
        rest /= p;
        ++rep.n;
    }
    rep.m = rest;

    const auto& e = *ol.obasis_ambient;
    RatMat gamb = detail_ham::ambient_gram(ol.order, ol.second_scale);
    if (dot(e[0] * gamb, e[0]) != 2 || dot(e[1] * gamb, e[1]) != 2)
        throw qerror("NoObasis", "orbit report needs the O-basis to consist of roots");
    Quat target = hermitian_product(ol, e[0], e[1]);
    rep.unitary_order = count_root_pairs(ol, target);
    Int num = 240 * pow_int(p, rep.n);
    if (rep.unitary_order == 0 || num % rep.unitary_order != 0)
        throw qerror("Internal", "240 p^n = r |U| fails to hold with integral r");
    rep.r = num / rep.unitary_order;
    return rep;
}

struct E8Report {
    Int discriminant;
    std::string construction;  // "lambda" or "glue"
    bool even = false;
    Rat det;
    Rat minimum;
    std::size_t root_count = 0;
    bool obasis_found = false;
    std::optional<HamiltonianBinaryForm> form;
    Rat form_min;
    Rat delta;
    Int gamma2_squared;  // gamma_2(O)^2 = D, i.e. gamma_2 = sqrt(D)
    bool all_checks_passed = false;
    // The upper bound gamma_2 <= sqrt(D) rests on the classical value 2 of the
    // rank-8 Hermite constant, cited rather than recomputed.
    static constexpr const char* upper_bound_note =
        "upper bound uses the classical rank-8 Hermite constant value 2 (cited)";
};

inline E8Report verify_route(const Order& o, OLattice& ol, const std::string& tag) {
    E8Report rep;
    rep.discriminant = o.algebra().discriminant();
    rep.construction = tag;
    E8Checks c = e8_checks(ol);
    rep.even = c.even;
    rep.det = c.det;
    rep.minimum = c.minimum;
    rep.root_count = c.root_count;
    rep.obasis_found = find_obasis(ol);
    rep.gamma2_squared = rep.discriminant;
    rep.all_checks_passed = e8_ok(c) && rep.obasis_found;
    if (rep.obasis_found) {
        rep.form = form_from_obasis(ol);
        rep.form_min = form_minimum(*rep.form, o);
        rep.delta = rep.form->discriminant(o.algebra());
        // the witness identity: min(f)^2 / (-delta) = D
        rep.all_checks_passed =
            rep.all_checks_passed &&
            rep.form_min * rep.form_min == -rep.delta * Rat(rep.discriminant);
    }
    return rep;
}

// gamma_2(O) = sqrt(D): builds the glue-route lattice always and the lambda
// route when (pi, lambda) are supplied, checking the full E8 identification.
inline std::vector<E8Report> verify_gamma2(const Order& o,
                                           const std::optional<std::pair<Quat, Quat>>& pl) {
    std::vector<E8Report> reports;
    if (pl) {
        OLattice l = build_lambda_lattice(o, pl->first, pl->second);
        reports.push_back(verify_route(o, l, "lambda"));
    }
    OLattice g = build_glue_lattice(o);
    reports.push_back(verify_route(o, g, "glue"));
    return reports;
}

}  // namespace quatlat
