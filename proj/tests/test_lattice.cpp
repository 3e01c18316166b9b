#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "quatlat/lattice.hpp"
#include "quatlat/order.hpp"

using namespace quatlat;

namespace {

const IntMat kE8Gram = symmetric_int_mat({{2, 0, -1, 0, 0, 0, 0, 0},
                                          {0, 2, 0, -1, 0, 0, 0, 0},
                                          {-1, 0, 2, -1, 0, 0, 0, 0},
                                          {0, -1, -1, 2, -1, 0, 0, 0},
                                          {0, 0, 0, -1, 2, -1, 0, 0},
                                          {0, 0, 0, 0, -1, 2, -1, 0},
                                          {0, 0, 0, 0, 0, -1, 2, -1},
                                          {0, 0, 0, 0, 0, 0, -1, 2}});

// D8 root basis e1-e2, ..., e7-e8, e7+e8 written in the standard e-basis.
RatMat d8_basis_rows() {
    RatMat b(8, 8);
    for (int i = 0; i < 7; ++i) {
        b(i, i) = Rat(1);
        b(i, i + 1) = Rat(-1);
    }
    b(7, 6) = Rat(1);
    b(7, 7) = Rat(1);
    return b;
}

Order hurwitz() {
    auto alg = algebra_from_pair(Rat(-1), Rat(-1));
    return order_from_basis(alg, {Quat(Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(1, 2)),
                                  Quat(Rat(0), Rat(1), Rat(0), Rat(0)),
                                  Quat(Rat(0), Rat(0), Rat(1), Rat(0)),
                                  Quat(Rat(0), Rat(0), Rat(0), Rat(1))});
}

QeModule qe_cyclic(const Int& d, const Rat& qgen) {
    RatMat lifts(1, 0);
    RatMat bil(1, 1);
    return QeModule::from_residue({d}, std::move(lifts), {mod1(qgen)}, std::move(bil),
                                  std::nullopt, 0);
}

QeModule qe_pair(const Int& d1, const Int& d2, const Rat& q1, const Rat& q2, const Rat& b12) {
    RatMat lifts(2, 0);
    RatMat bil(2, 2);
    bil(0, 1) = mod1(b12);
    bil(1, 0) = mod1(b12);
    return QeModule::from_residue({d1, d2}, std::move(lifts), {mod1(q1), mod1(q2)},
                                  std::move(bil), std::nullopt, 0);
}

IntMat random_gram_even(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> d(-3, 3);
    for (;;) {
        IntMat b(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) b(i, j) = d(rng);
        if (det(b) == 0) continue;
        IntMat g = to_int(Rat(2) * (to_rat(b) * to_rat(b).transposed()));
        return g;
    }
}

}  // namespace

TEST_CASE("dual: unimodular, rank one, Hurwitz order", "[dual]") {
    ZLattice e8(to_rat(kE8Gram));
    auto d8 = dual(e8);
    CHECK(lattice_equal(d8.basis_in_parent, to_rat(IntMat::identity(8))));
    CHECK(d8.lattice.determinant() == 1);

    ZLattice r1(RatMat({{Rat(2)}}));
    CHECK(dual(r1).lattice.gram() == RatMat({{Rat(1, 2)}}));

    // dual of the Hurwitz order is (1+i)^{-1} O, of index 4
    Order h = hurwitz();
    ZLattice ho(h.gram());
    auto hd = dual(ho);
    Quat onepi(Rat(1), Rat(1), Rat(0), Rat(0));
    RatMat scaled = h.left_mult(h.algebra().inverse(onepi));
    CHECK(lattice_equal(hd.basis_in_parent, scaled));
    CHECK(lattice_index(hd.basis_in_parent, to_rat(IntMat::identity(4))) == 4);

    CHECK(dual(ho).lattice.determinant() * ho.determinant() == 1);
    auto dd = dual(dual(ho).lattice);
    CHECK(dd.lattice.gram() == ho.gram());
}

TEST_CASE("residue: trivial, rank-one, quaternionic", "[residue]") {
    QeModule e8res = residue(ZLattice(to_rat(kE8Gram)));
    CHECK(e8res.order() == 1);
    CHECK(e8res.ngens() == 0);

    QeModule r2 = residue(ZLattice(RatMat({{Rat(2)}})));
    REQUIRE(r2.invariant_factors() == std::vector<Int>{2});
    CHECK(r2.q({Int(1)}) == Rat(1, 4));

    // residue of a maximal order at p | D: (Z/p)^2 with an anisotropic form
    Order h = hurwitz();
    QeModule hres = residue(ZLattice(h.gram()));
    CHECK(hres.order() == 4);
    CHECK(hres.invariant_factors() == std::vector<Int>{2, 2});
    CHECK(is_anisotropic(hres));

    CHECK_THROWS_AS(residue(ZLattice(RatMat({{Rat(1)}}))), qerror);  // odd lattice
}

TEST_CASE("residue: group order equals determinant; bilinear nondegenerate", "[residue]") {
    std::mt19937_64 rng(606);
    for (int t = 0; t < 25; ++t) {
        IntMat g = random_gram_even(rng, 1 + t % 4);
        ZLattice l(to_rat(g));
        QeModule v = residue(l);
        CHECK(Rat(v.order()) == l.determinant());
        // nondegeneracy: for each nonzero x there is y with b(x,y) != 0
        bool degenerate = false;
        v.for_each_element([&](const std::vector<Int>& x) {
            bool zero = true;
            for (auto& e : x)
                if (e != 0) zero = false;
            if (zero || degenerate) return;
            bool pairs = false;
            v.for_each_element([&](const std::vector<Int>& y) {
                if (!pairs && v.bilinear(x, y) != 0) pairs = true;
            });
            if (!pairs) degenerate = true;
        });
        CHECK_FALSE(degenerate);
    }
}

TEST_CASE("is_anisotropic: hyperbolic plane vs anisotropic forms", "[residue]") {
    for (long p : {2, 3, 5}) {
        QeModule hyp = qe_pair(Int(p), Int(p), Rat(0), Rat(0), Rat(1, p));
        CHECK_FALSE(is_anisotropic(hyp));  // q(1,0) = 0
    }
    QeModule z4 = qe_cyclic(Int(4), Rat(1, 8));
    CHECK(is_anisotropic(z4));
    QeModule z2 = qe_cyclic(Int(2), Rat(3, 4));
    CHECK(is_anisotropic(z2));
}

TEST_CASE("gauss sums: eighth roots of unity", "[gauss]") {
    auto close = [](std::complex<double> a, std::complex<double> b) {
        return std::abs(a - b) < 1e-9;
    };
    const double pi = 3.14159265358979323846;
    QeModule triv = residue(ZLattice(to_rat(kE8Gram)));
    CHECK(close(gauss_sum(triv), {1.0, 0.0}));

    // Z/2 with q = eps x^2/4 gives e^{i pi eps / 4}
    CHECK(close(gauss_sum(qe_cyclic(Int(2), Rat(1, 4))), std::polar(1.0, pi / 4)));
    CHECK(close(gauss_sum(qe_cyclic(Int(2), Rat(-1, 4))), std::polar(1.0, -pi / 4)));

    // every even rank-3 lattice has gauss sum e^{3 i pi / 4}
    std::vector<RatMat> rank3 = {
        to_rat(symmetric_int_mat({{2, 0, 0}, {0, 2, 0}, {0, 0, 2}})),
        to_rat(symmetric_int_mat({{2, 0, 0}, {0, 4, 0}, {0, 0, 6}})),
        to_rat(symmetric_int_mat({{2, 1, 1}, {1, 2, 1}, {1, 1, 2}})),
        to_rat(symmetric_int_mat({{4, 1, 0}, {1, 4, 1}, {0, 1, 6}})),
    };
    for (auto& g : rank3) CHECK(close(gauss_sum(residue(ZLattice(g))), std::polar(1.0, 3 * pi / 4)));
}

TEST_CASE("Milgram: gauss sum is e^{2 pi i rank/8} on random even lattices", "[gauss]") {
    std::mt19937_64 rng(909);
    const double pi = 3.14159265358979323846;
    for (int t = 0; t < 30; ++t) {
        std::size_t n = 1 + t % 5;
        IntMat g = random_gram_even(rng, n);
        QeModule v = residue(ZLattice(to_rat(g)));
        auto gs = gauss_sum(v);
        CHECK(std::abs(gs - std::polar(1.0, 2 * pi * double(n) / 8)) < 1e-9);
        // and it factors over the primary components
        std::complex<double> prod(1.0, 0.0);
        for (auto& p : v.prime_support()) prod *= gauss_sum(v.p_part(p));
        CHECK(std::abs(gs - prod) < 1e-9);
    }
}

TEST_CASE("glue: trivial subgroup returns the lattice", "[glue]") {
    ZLattice l(to_rat(symmetric_int_mat({{2, 0}, {0, 2}})));
    QeModule v = residue(l);
    auto g = glue(l, v, SubgroupSpec{{}});
    CHECK(g.lattice.gram() == l.gram());
}

TEST_CASE("glue: D8 plus an isotropic glue class is E8", "[glue]") {
    RatMat b = d8_basis_rows();
    ZLattice d8(b * to_rat(IntMat::identity(8)) * b.transposed());
    CHECK(d8.determinant() == 4);
    QeModule v = residue(d8);
    CHECK(v.order() == 4);
    bool found = false;
    v.for_each_element([&](const std::vector<Int>& a) {
        if (found) return;
        bool zero = true;
        for (auto& x : a)
            if (x != 0) zero = false;
        if (zero || v.q(a) != 0) return;
        auto g = glue(d8, v, SubgroupSpec{{a}});
        CHECK(g.lattice.determinant() == 1);
        CHECK(g.lattice.is_even());
        auto sv = shortest_vectors(g.lattice, Rat(2));
        CHECK(sv.min == 2);
        CHECK(sv.vectors.size() == 240);
        found = true;
    });
    CHECK(found);
}

TEST_CASE("glue: rejects non-isotropic subgroups", "[glue]") {
    ZLattice l(RatMat({{Rat(2)}}));
    QeModule v = residue(l);
    CHECK_THROWS_AS(glue(l, v, SubgroupSpec{{{Int(1)}}}), qerror);
}

TEST_CASE("shortest vectors: E8, Z^n, scaling", "[shortest]") {
    ZLattice e8(to_rat(kE8Gram));
    auto sv = shortest_vectors(e8, Rat(2));
    CHECK(sv.min == 2);
    CHECK(sv.vectors.size() == 240);

    for (std::size_t n : {1u, 2u, 3u, 4u}) {
        ZLattice zn(to_rat(IntMat::identity(n)));
        auto s = shortest_vectors(zn, Rat(1));
        CHECK(s.min == 1);
        CHECK(s.vectors.size() == 2 * n);
    }

    ZLattice scaled(Rat(3) * to_rat(kE8Gram));
    auto ss = shortest_vectors(scaled, Rat(6));
    CHECK(ss.min == 6);
    CHECK(ss.vectors.size() == 240);
}

TEST_CASE("shortest vectors agree with box brute force", "[shortest][oracle]") {
    std::mt19937_64 rng(11111);
    std::uniform_int_distribution<int> d(-3, 3);
    int cases = 0;
    while (cases < 25) {
        std::size_t n = 1 + cases % 4;
        IntMat b(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) b(i, j) = d(rng);
        if (det(b) == 0) continue;
        ++cases;
        RatMat g = to_rat(b) * to_rat(b).transposed();
        Rat bound(6);
        auto fast = enumerate_up_to(g, bound);
        // box bound: |x_i| <= sqrt(bound * (G^{-1})_{ii})
        RatMat ginv = inverse(g);
        std::vector<long> box(n);
        for (std::size_t i = 0; i < n; ++i)
            box[i] = floor_sqrt_rat(bound * ginv(i, i)).get_si();
        std::vector<std::vector<Int>> slow;
        std::vector<Int> x(n, 0);
        std::function<void(std::size_t)> walk = [&](std::size_t i) {
            if (i == n) {
                bool zero = true;
                for (auto& e : x)
                    if (e != 0) zero = false;
                if (zero) return;
                Rat v = dot(to_rat(x) * g, to_rat(x));
                if (v <= bound) slow.push_back(x);
                return;
            }
            for (long c = -box[i]; c <= box[i]; ++c) {
                x[i] = c;
                walk(i + 1);
            }
        };
        walk(0);
        REQUIRE(fast.size() == slow.size());
        std::set<std::vector<Int>> fs, ss;
        for (auto& e : fast) fs.insert(e.x);
        for (auto& e : slow) ss.insert(e);
        CHECK(fs == ss);
    }
}

TEST_CASE("is_isometric: reflexivity, permutation, obstruction", "[isometry]") {
    ZLattice a(to_rat(symmetric_int_mat({{2, 1, 0}, {1, 4, 1}, {0, 1, 6}})));
    auto self = is_isometric(a, a);
    REQUIRE(self.has_value());

    RatMat p(3, 3);
    p(0, 2) = Rat(1);
    p(1, 0) = Rat(1);
    p(2, 1) = Rat(1);
    ZLattice b(p * a.gram() * p.transposed());
    auto perm = is_isometric(a, b);
    REQUIRE(perm.has_value());
    CHECK(to_rat(*perm) * b.gram() * to_rat(*perm).transposed() == a.gram());

    // same determinant, different minimum
    ZLattice c(to_rat(symmetric_int_mat({{2, 0}, {0, 6}})));
    ZLattice e(to_rat(symmetric_int_mat({{4, 2}, {2, 4}})));
    CHECK(c.determinant() == e.determinant());
    CHECK_FALSE(is_isometric(c, e).has_value());

    ZLattice big(to_rat(IntMat::identity(5)));
    CHECK_THROWS_AS(is_isometric(big, big), qerror);
}
