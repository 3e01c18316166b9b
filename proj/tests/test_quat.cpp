#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "quatlat/quat.hpp"

using namespace quatlat;

namespace {

// Oracle for the 2-adic symbol with odd a, b: a 2-adic zero of z^2 = a x^2 + b y^2
// would reduce to a primitive solution mod 2^7, so "no primitive solution mod
// 128" certifies symbol -1.
bool has_primitive_solution_mod128(long a, long b) {
    const long m = 128;
    for (long x = 0; x < m; ++x)
        for (long y = 0; y < m; ++y)
            for (long z = 0; z < m; ++z) {
                if (x % 2 == 0 && y % 2 == 0 && z % 2 == 0) continue;
                if (((z * z - a * x * x - b * y * y) % m + m) % m == 0) return true;
            }
    return false;
}

Quat random_quat(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-8, 8), den(1, 4);
    return Quat(make_rat(num(rng), den(rng)), make_rat(num(rng), den(rng)),
                make_rat(num(rng), den(rng)), make_rat(num(rng), den(rng)));
}

}  // namespace

TEST_CASE("hilbert symbol: brute-force certificate at p = 2", "[hilbert]") {
    REQUIRE_FALSE(has_primitive_solution_mod128(-1, -1));
    CHECK(hilbert_symbol(Rat(-1), Rat(-1), Int(2)) == -1);
}

TEST_CASE("hilbert symbol: known values", "[hilbert]") {
    CHECK(hilbert_symbol(Rat(-1), Rat(-11), Int(11)) == -1);
    CHECK(hilbert_symbol(Rat(-1), Rat(-11), Int(2)) == 1);
    // 1 is a square, so (1, b)_p = +1 for any b, p
    for (long b : {-7, -1, 2, 15})
        for (long p : {2, 3, 5, 13}) CHECK(hilbert_symbol(Rat(1), Rat(b), Int(p)) == 1);
    CHECK(hilbert_symbol_infinite(Rat(-2), Rat(-3)) == -1);
    CHECK(hilbert_symbol_infinite(Rat(2), Rat(-3)) == 1);
}

TEST_CASE("hilbert symbol: product formula over all places", "[hilbert]") {
    std::mt19937_64 rng(5150);
    std::uniform_int_distribution<int> d(-30, 30);
    int tested = 0;
    while (tested < 200) {
        Rat a(d(rng)), b(d(rng));
        if (a == 0 || b == 0) continue;
        ++tested;
        int prod = hilbert_symbol_infinite(a, b);
        Int support = 2 * a.get_num() * b.get_num();
        for (auto& [p, e] : factor(support)) prod *= hilbert_symbol(a, b, p);
        CHECK(prod == 1);
    }
}

TEST_CASE("algebra_from_pair: discriminants and ramification", "[algebra]") {
    auto h = algebra_from_pair(Rat(-1), Rat(-1));
    CHECK(h.discriminant() == 2);
    CHECK(h.ramified_primes() == std::vector<Int>{2});

    auto a13 = algebra_from_pair(Rat(-2), Rat(-13));
    CHECK(a13.discriminant() == 13);

    auto a3 = algebra_from_pair(Rat(-1), Rat(-3));
    CHECK(a3.discriminant() == 3);

    CHECK_THROWS_AS(algebra_from_pair(Rat(1), Rat(-3)), qerror);
    CHECK_THROWS_AS(algebra_from_pair(Rat(-1), Rat(0)), qerror);
}

TEST_CASE("trace and norm", "[quat]") {
    auto h = algebra_from_pair(Rat(-1), Rat(-1));
    auto [t1, n1] = h.trace_norm(Quat::one());
    CHECK(t1 == 2);
    CHECK(n1 == 1);

    auto a11 = algebra_from_pair(Rat(-1), Rat(-11));
    Quat j(Rat(0), Rat(0), Rat(1), Rat(0));
    auto [tj, nj] = a11.trace_norm(j);
    CHECK(tj == 0);
    CHECK(nj == 11);
    CHECK(a11.mul(j, j) == Quat::scalar(Rat(-11)));

    Quat half(Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(1, 2));
    auto [th, nh] = h.trace_norm(half);
    CHECK(th == 1);
    CHECK(nh == 1);
}

TEST_CASE("conjugation is an anti-involution; norm is multiplicative", "[quat]") {
    std::mt19937_64 rng(8088);
    auto alg = algebra_from_pair(Rat(-2), Rat(-13));
    for (int t = 0; t < 100; ++t) {
        Quat x = random_quat(rng), y = random_quat(rng);
        CHECK(conj(alg.mul(x, y)) == alg.mul(conj(y), conj(x)));
        CHECK(alg.norm(alg.mul(x, y)) == alg.norm(x) * alg.norm(y));
        CHECK(trace(x) == trace(conj(x)));
        CHECK(conj(conj(x)) == x);
        // x * conj(x) = n(x)
        CHECK(alg.mul(x, conj(x)) == Quat::scalar(alg.norm(x)));
        // associativity spot check
        Quat z = random_quat(rng);
        CHECK(alg.mul(alg.mul(x, y), z) == alg.mul(x, alg.mul(y, z)));
    }
}

TEST_CASE("algebra_of_discriminant finds small models", "[algebra]") {
    for (long d : {2, 3, 5, 7, 11, 13, 30}) {
        auto alg = algebra_of_discriminant(Int(d));
        CHECK(alg.discriminant() == d);
    }
    CHECK_THROWS_AS(algebra_of_discriminant(Int(6)), qerror);   // even number of primes
    CHECK_THROWS_AS(algebra_of_discriminant(Int(12)), qerror);  // not squarefree
}
