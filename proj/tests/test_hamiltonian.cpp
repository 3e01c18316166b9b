#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "quatlat/catalog.hpp"
#include "quatlat/hamiltonian.hpp"

using namespace quatlat;

namespace {

OLattice lambda_lattice_for(const std::string& name, std::size_t which_lambda = 0) {
    const OrderDocument& doc = preset(name);
    Order o = doc.build();
    return build_lambda_lattice(o, *doc.pi, doc.lambdas.at(which_lambda));
}

// Independent construction of Lambda_lambda straight from its congruence
// definition: (1/pi) K with K = {(u,v) in O^2 : lambda u = v (mod pi O)}.
RatMat lambda_lattice_by_definition(const Order& o, const Quat& pi, const Quat& lambda) {
    RatMat lm_lambda = o.left_mult(lambda);
    RatMat pio = lattice_canonical(o.left_mult(pi));  // basis of pi O
    RatMat pinv = inverse(pio);
    RatMat q(8, 4);
    RatMat top = lm_lambda * pinv;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            q(i, j) = top(i, j);
            q(4 + i, j) = (i == j) ? -pinv(i, j) : -pinv(i, j);
        }
    Int den = common_denominator(q);
    IntMat qs(8, 4);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 4; ++j) {
            Rat e = q(i, j) * Rat(den);
            qs(i, j) = e.get_num();
        }
    IntMat k = kernel_mod(qs, den);
    // scale both components by left multiplication with pi^{-1}
    RatMat lpinv = o.left_mult(o.algebra().inverse(pi));
    RatMat out(8, 8);
    for (int r = 0; r < 8; ++r) {
        std::vector<Rat> cu(4), cv(4);
        for (int t = 0; t < 4; ++t) {
            cu[t] = Rat(k(r, t));
            cv[t] = Rat(k(r, 4 + t));
        }
        std::vector<Rat> su = cu * lpinv, sv = cv * lpinv;
        for (int t = 0; t < 4; ++t) {
            out(r, t) = su[t];
            out(r, 4 + t) = sv[t];
        }
    }
    return out;
}

}  // namespace

TEST_CASE("lambda route: E8 invariants for the one-class discriminants", "[lambda]") {
    for (const char* name : {"hurwitz", "d3", "d5", "d7", "d13"}) {
        OLattice ol = lambda_lattice_for(name);
        E8Checks c = e8_checks(ol);
        INFO(name);
        CHECK(c.even);
        CHECK(c.det == 1);
        CHECK(c.minimum == 2);
        CHECK(c.root_count == 240);
        CHECK(ol.obasis_ambient.has_value());
    }
}

TEST_CASE("lambda route: matches the congruence definition", "[lambda]") {
    for (const char* name : {"hurwitz", "d3", "d13"}) {
        const OrderDocument& doc = preset(name);
        Order o = doc.build();
        OLattice ol = build_lambda_lattice(o, *doc.pi, doc.lambdas[0]);
        RatMat direct = lambda_lattice_by_definition(o, *doc.pi, doc.lambdas[0]);
        CHECK(lattice_equal(ol.basis, direct));
    }
}

TEST_CASE("lambda route: depends exactly on lambda mod pi O", "[lambda]") {
    const OrderDocument& doc = preset("d13");
    Order o = doc.build();
    Quat pi = *doc.pi, l1 = doc.lambdas[0], l2 = doc.lambdas[1];
    OLattice a = build_lambda_lattice(o, pi, l1);
    Quat shifted = l1 + o.algebra().mul(pi, o.basis()[2]);
    OLattice b = build_lambda_lattice(o, pi, shifted);
    CHECK(lattice_equal(a.basis, b.basis));
    OLattice c = build_lambda_lattice(o, pi, l2);
    CHECK_FALSE(lattice_equal(a.basis, c.basis));
}

TEST_CASE("lambda route: rejects bad pi and bad lambda", "[lambda]") {
    const OrderDocument& doc = preset("hurwitz");
    Order o = doc.build();
    auto code = [&](const Quat& pi, const Quat& lam) {
        try {
            build_lambda_lattice(o, pi, lam);
        } catch (const qerror& e) {
            return e.code();
        }
        return std::string("ok");
    };
    CHECK(code(Quat::one(), doc.lambdas[0]) == "BadPi");
    CHECK(code(*doc.pi, Quat(Rat(0), Rat(1), Rat(1), Rat(0))) == "BadLambda");  // n = 2 = 0 mod 2
}

TEST_CASE("forms from O-bases: coefficients, discriminant, minimum", "[form]") {
    struct Expected {
        const char* name;
        Quat b;
    };
    std::vector<Expected> table = {
        {"hurwitz", Quat(Rat(1, 2), Rat(-1, 2), Rat(0), Rat(0))},  // (1-i)/2
        {"d3", Quat(Rat(0), Rat(0), Rat(-1, 3), Rat(1, 3))},       // (k-j)/3
        {"d5", Quat(Rat(0), Rat(0), Rat(-2, 5), Rat(0))},          // -(2/5) j
        {"d7", Quat(Rat(0), Rat(-1, 2), Rat(-2, 7), Rat(1, 14))},  // (k-7i-4j)/14
    };
    // n(b) = (D-1)/D pins each value: any entry typo would break it
    for (auto& ex : table) {
        Order o = preset(ex.name).build();
        Int d = o.algebra().discriminant();
        CHECK(o.algebra().norm(ex.b) == make_rat(d - 1, d));
    }
    for (auto& ex : table) {
        const OrderDocument& doc = preset(ex.name);
        Order o = doc.build();
        OLattice ol = build_lambda_lattice(o, *doc.pi, doc.lambdas[0]);
        HamiltonianBinaryForm f = form_from_obasis(ol);
        INFO(ex.name);
        Int d = o.algebra().discriminant();
        CHECK(f.b == ex.b);
        CHECK(f.b == o.algebra().mul(o.algebra().inverse(*doc.pi), doc.lambdas[0]));
        CHECK(f.a == (o.algebra().norm(doc.lambdas[0]) + 1) / Rat(d));
        CHECK(f.c == 1);
        CHECK(f.discriminant(o.algebra()) == make_rat(-1, d));
        CHECK(form_minimum(f, o) == 1);
    }
}

TEST_CASE("form minimum: f0 over a maximal order is 1", "[form]") {
    Order o = preset("d11-a").build();
    HamiltonianBinaryForm f0(Rat(1), Quat(), Rat(1), o.algebra());
    CHECK(form_minimum(f0, o) == 1);
}

TEST_CASE("glue route: E8 invariants for every preset", "[glue]") {
    for (auto& doc : order_catalog()) {
        Order o = doc.build();
        OLattice ol = build_glue_lattice(o);
        E8Checks c = e8_checks(ol);
        INFO(doc.name);
        CHECK(c.even);
        CHECK(c.det == 1);
        CHECK(c.minimum == 2);
        CHECK(c.root_count == 240);
        CHECK(find_obasis(ol));
    }
}

TEST_CASE("root pair counts split the two discriminant-13 orbits", "[orbits]") {
    const OrderDocument& doc = preset("d13");
    Order o = doc.build();
    Quat pinv = o.algebra().inverse(*doc.pi);

    OLattice l1 = build_lambda_lattice(o, *doc.pi, doc.lambdas[0]);
    CHECK(count_root_pairs(l1, o.algebra().mul(pinv, doc.lambdas[0])) == 48);
    OLattice l2 = build_lambda_lattice(o, *doc.pi, doc.lambdas[1]);
    CHECK(count_root_pairs(l2, o.algebra().mul(pinv, doc.lambdas[1])) == 120);

    // Cauchy-Schwarz: no pair of roots has a Hermitian product of norm > 1
    CHECK(count_root_pairs(l1, Quat::scalar(Rat(2))) == 0);
}

TEST_CASE("orbit reports: unitary group orders and orbit counts", "[orbits]") {
    struct Row {
        const char* name;
        long p, expect_u, expect_r;
    };
    // |U| = 240 p^n / r; the one-orbit cases have r = 1 except p = 7 (r = 2).
    std::vector<Row> rows = {{"hurwitz", 2, 1920, 1}, {"d3", 3, 720, 1}, {"d5", 5, 240, 1},
                             {"d7", 7, 120, 2}};
    for (auto& r : rows) {
        OLattice ol = lambda_lattice_for(r.name);
        OrbitReport rep = orbit_report(Int(r.p), ol);
        INFO(r.name);
        CHECK(rep.unitary_order == r.expect_u);
        CHECK(rep.r == r.expect_r);
        CHECK((r.p - 1) * pow_int(Int(r.p), rep.n) * rep.m == 24);
    }
    // p = 13: the two orbits have r = 5 and r = 2, summing to (p+1)/m = 7
    OrbitReport a = orbit_report(Int(13), lambda_lattice_for("d13", 0));
    OrbitReport b = orbit_report(Int(13), lambda_lattice_for("d13", 1));
    CHECK(a.r == 5);
    CHECK(b.r == 2);
    CHECK(a.m == 2);
    CHECK(a.r + b.r == 7);
}

TEST_CASE("similitude invariant on random order elements", "[olattice]") {
    std::mt19937_64 rng(515151);
    for (const char* name : {"hurwitz", "d13"}) {
        OLattice ol = lambda_lattice_for(name);
        std::uniform_int_distribution<int> pick(0, 3);
        for (int t = 0; t < 12; ++t) {
            Quat x = ol.order.basis()[pick(rng)];
            for (int s = 0; s < 2; ++s) x = ol.order.algebra().mul(x, ol.order.basis()[pick(rng)]);
            IntMat a = olattice_action(ol, x);
            RatMat lhs = to_rat(a) * ol.lat.gram() * to_rat(a).transposed();
            CHECK(lhs == ol.order.algebra().norm(x) * ol.lat.gram());
        }
    }
}

TEST_CASE("different O-bases of one lattice give the same minimum and delta", "[form]") {
    OLattice ol = lambda_lattice_for("d3");
    HamiltonianBinaryForm f1 = form_from_obasis(ol);
    // force a fresh search (ignoring the construction-time basis)
    OLattice copy = ol;
    copy.obasis_ambient.reset();
    REQUIRE(find_obasis(copy));
    HamiltonianBinaryForm f2 = form_from_obasis(copy);
    Order o = ol.order;
    CHECK(form_minimum(f1, o) == form_minimum(f2, o));
    CHECK(f1.discriminant(o.algebra()) == f2.discriminant(o.algebra()));
}

TEST_CASE("verify_gamma2 end to end", "[gamma2]") {
    const OrderDocument& doc = preset("hurwitz");
    Order o = doc.build();
    auto reports = verify_gamma2(o, std::make_pair(*doc.pi, doc.lambdas[0]));
    REQUIRE(reports.size() == 2);
    for (auto& r : reports) {
        CHECK(r.all_checks_passed);
        CHECK(r.gamma2_squared == 2);
        CHECK(r.root_count == 240);
    }
    // order-independence: both discriminant-11 classes give sqrt(11)
    for (const char* name : {"d11-a", "d11-b"}) {
        Order o11 = preset(name).build();
        auto reps = verify_gamma2(o11, std::nullopt);
        REQUIRE(reps.size() == 1);
        CHECK(reps[0].all_checks_passed);
        CHECK(reps[0].gamma2_squared == 11);
    }
}
