#include <catch2/catch_amalgamated.hpp>

#include "quatlat/catalog.hpp"
#include "quatlat/ternary.hpp"

using namespace quatlat;

TEST_CASE("trace-zero lattices of the catalog orders", "[tracezero]") {
    Order h = preset("hurwitz").build();
    TernaryLattice lh = trace_zero_lattice(h);
    CHECK(lh.lat.determinant() == 8);
    CHECK(lh.lat.is_even());
    REQUIRE(lh.embedding.has_value());
    for (auto& e : *lh.embedding) CHECK(trace(e) == 0);

    // the two discriminant-11 classes give non-isometric det-242 lattices
    TernaryLattice la = trace_zero_lattice(preset("d11-a").build());
    TernaryLattice lb = trace_zero_lattice(preset("d11-b").build());
    CHECK(la.lat.determinant() == 242);
    CHECK(lb.lat.determinant() == 242);
    CHECK_FALSE(is_isometric(la.lat, lb.lat).has_value());

    // residue at 2 for odd d: Z/2 with q(x) = -x^2/4 = 3/4 mod 1
    for (const char* name : {"d3", "d11-a", "d13"}) {
        QeModule r2 = residue(trace_zero_lattice(preset(name).build()).lat).p_part(Int(2));
        REQUIRE(r2.invariant_factors() == std::vector<Int>{2});
        CHECK(r2.q({Int(1)}) == Rat(3, 4));
    }
    // anisotropic at every odd p | d
    for (auto& doc : order_catalog()) {
        Order o = doc.build();
        CHECK(in_genus_R(trace_zero_lattice(o).lat, o.algebra().discriminant()));
    }
}

TEST_CASE("m-transform: unimodular fixed point, genus exchange, involution", "[mtransform]") {
    const IntMat e8 = symmetric_int_mat({{2, 0, -1, 0, 0, 0, 0, 0},
                                         {0, 2, 0, -1, 0, 0, 0, 0},
                                         {-1, 0, 2, -1, 0, 0, 0, 0},
                                         {0, -1, -1, 2, -1, 0, 0, 0},
                                         {0, 0, 0, -1, 2, -1, 0, 0},
                                         {0, 0, 0, 0, -1, 2, -1, 0},
                                         {0, 0, 0, 0, 0, -1, 2, -1},
                                         {0, 0, 0, 0, 0, 0, -1, 2}});
    MTransform fix = m_transform(ZLattice(to_rat(e8)), Int(1));
    CHECK(lattice_equal(fix.basis_in_parent, to_rat(IntMat::identity(8))));

    for (auto& doc : order_catalog()) {
        Order o = doc.build();
        Int d = o.algebra().discriminant();
        TernaryLattice l = trace_zero_lattice(o);
        MTransform mt = m_transform(l.lat, d);
        INFO(doc.name);
        CHECK(mt.m.lat.determinant() == Rat(2 * d));
        CHECK(in_genus_S(mt.m.lat, d));
        CHECK(m_transform_is_involution(l.lat, d));
    }
}

TEST_CASE("genus symbols: S-membership signs and the prime-d degeneration", "[genus]") {
    // members of the det-2d genus have e_p = -(-1|p) at each odd p | d
    for (const char* name : {"d3", "d5", "d7", "d11-a", "d13"}) {
        Order o = preset(name).build();
        Int d = o.algebra().discriminant();
        MTransform mt = m_transform(trace_zero_lattice(o).lat, d);
        for (auto& [p, e] : factor(d)) {
            if (p == 2) continue;
            GenusSymbol gs = genus_symbols(mt.m.lat, d, p);
            CHECK(gs.e_p == -legendre(Int(-1), p));
        }
    }
    // for prime d, every even det-2d ternary lattice lies in the genus
    for (long d : {11, 13}) {
        for (auto& l : detail_ternary::enumerate_even_det(Int(2 * d)))
            CHECK(in_genus_S(l, Int(d)));
    }
}

TEST_CASE("ternary enumeration bound carries no class loss", "[enumerate][oracle]") {
    // enlarging the reduced-form search box must not add classes
    for (long d : {11, 23, 30}) {
        auto tight = detail_ternary::dedupe_classes(detail_ternary::enumerate_even_det(Int(2 * d), 2));
        auto loose = detail_ternary::dedupe_classes(detail_ternary::enumerate_even_det(Int(2 * d), 4));
        CHECK(tight.size() == loose.size());
    }
}

TEST_CASE("enumerate_S: class counts from the final table", "[enumerate]") {
    CHECK(enumerate_S(Int(2)).size() == 1);
    CHECK(enumerate_S(Int(11)).size() == 2);

    auto s37 = enumerate_S(Int(37));
    REQUIRE(s37.size() == 2);
    int nonrep = 0;
    for (auto& c : s37)
        if (!represents_one(c.lat)) ++nonrep;
    CHECK(nonrep == 1);

    auto s97 = enumerate_S(Int(97));
    REQUIRE(s97.size() == 5);
    nonrep = 0;
    for (auto& c : s97)
        if (!represents_one(c.lat)) ++nonrep;
    CHECK(nonrep == 3);
}

TEST_CASE("R and S genera are in bijection for small d", "[enumerate]") {
    for (long d : {2, 3, 5, 7, 11, 13}) {
        auto r = enumerate_R(Int(d));
        auto s = enumerate_S(Int(d));
        INFO("d = " << d);
        CHECK(r.size() == s.size());
        // the transform maps class lists to class lists bijectively
        for (auto& cls : s) {
            MTransform mt = m_transform(cls.lat, Int(d));
            bool found = false;
            for (auto& rc : r)
                if (is_isometric(mt.m.lat, rc.lat).has_value()) found = true;
            CHECK(found);
        }
    }
}

TEST_CASE("table: first rows and a composite d", "[table]") {
    auto rows = table(Int(7));
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].t == 1);
        CHECK(rows[i].t_dnp == 0);
    }
    TableRow r30 = table_row(Int(30));
    CHECK(r30.t == 1);
    CHECK(r30.t_dnp == 0);
}

TEST_CASE("class numbers by reduced-form counting", "[classnumber]") {
    CHECK(class_number(Int(-3)) == 1);
    CHECK(class_number(Int(-4)) == 1);
    CHECK(class_number(Int(-11)) == 1);
    CHECK(class_number(Int(-44)) == 3);
    CHECK(class_number(Int(-52)) == 2);
    CHECK(class_number(Int(-148)) == 2);
    for (long p : {5, 13, 17, 29, 37}) CHECK(class_number(Int(-p)) == 0);  // -p = 3 mod 4 fails
    CHECK(class_number(Int(-23)) == 3);
}

TEST_CASE("Deuring cross-check at small primes", "[deuring]") {
    CHECK(deuring_check(Int(11)));
    CHECK(deuring_check(Int(13)));
    CHECK(deuring_check(Int(37)));
    TableRow r11 = table_row(Int(11));
    CHECK(r11.t - r11.t_dnp == 2);
    CHECK((class_number(Int(-11)) + class_number(Int(-44))) / 2 == 2);
}

TEST_CASE("order_from_ternary: catalog round trip", "[reconstruct]") {
    for (const char* name : {"hurwitz", "d3", "d13"}) {
        Order o = preset(name).build();
        TernaryLattice l = trace_zero_lattice(o);
        Order back = order_from_ternary(l.lat, o.algebra().discriminant());
        CHECK(back.reduced_discriminant() == o.algebra().discriminant());
        CHECK(is_isometric(trace_zero_lattice(back).lat, l.lat).has_value());
    }
}

TEST_CASE("theorem 25: all five tests agree on the presets", "[thm25]") {
    for (auto& doc : order_catalog()) {
        Order o = doc.build();
        PrincipalityReport rep = theorem25_report(o);
        INFO(doc.name);
        CHECK(rep.all());  // every catalog order has a principal different
    }
}

TEST_CASE("theorem 25 through the d = 37 pullbacks", "[thm25]") {
    auto s37 = enumerate_S(Int(37));
    REQUIRE(s37.size() == 2);
    int princ = 0, nonprinc = 0;
    for (auto& cls : s37) {
        MTransform mt = m_transform(cls.lat, Int(37));
        Order o = order_from_ternary(mt.m.lat, Int(37));
        PrincipalityReport rep = theorem25_report(o);
        bool expect = represents_one(cls.lat);
        CHECK(rep.all() == expect);
        (rep.all() ? princ : nonprinc)++;
    }
    CHECK(princ == 1);
    CHECK(nonprinc == 1);
}
