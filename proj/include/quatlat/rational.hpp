#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace quatlat {

using Int = mpz_class;
using Rat = mpq_class;

// Library errors carry a short stable code ("NotClosed", "NotMaximal", ...)
// so callers and tests can dispatch without string matching on the message.
class qerror : public std::runtime_error {
public:
    qerror(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw qerror("DivisionByZero", "rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline Int floor_rat(const Rat& q) {
    Int f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return f;
}

inline Int ceil_rat(const Rat& q) {
    Int c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return c;
}

// Nearest integer, ties toward +infinity.
inline Int round_rat(const Rat& q) { return floor_rat(q + Rat(1, 2)); }

inline Int isqrt(const Int& n) {
    if (n < 0) throw qerror("NegativeSqrt", "isqrt of negative integer");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_square(const Int& n, Int* root = nullptr) {
    if (n < 0) return false;
    Int r = isqrt(n);
    if (r * r != n) return false;
    if (root) *root = r;
    return true;
}

// Largest k >= 0 with k*k <= q; requires q >= 0.
inline Int floor_sqrt_rat(const Rat& q) {
    if (q < 0) throw qerror("NegativeSqrt", "floor_sqrt_rat of negative rational");
    Int k = isqrt(floor_rat(q));
    while (Rat((k + 1) * (k + 1)) <= q) ++k;
    while (Rat(k * k) > q) --k;
    return k;
}

inline std::string rat_str(const Rat& r) {
    if (is_integer(r)) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

// Accepts "p", "-p", "p/q"; whitespace is not tolerated.
inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw qerror("ParseError", "empty rational literal");
    auto bad = [&] { throw qerror("ParseError", "bad rational literal '" + s + "'"); };
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            Int n(s);
            return Rat(n);
        }
        Int n(s.substr(0, slash));
        Int d(s.substr(slash + 1));
        return make_rat(n, d);
    } catch (const std::invalid_argument&) {
        bad();
    }
    return Rat();  // unreachable
}

inline bool is_prime(const Int& n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    // Trial division is exact and fast for the sizes this library sees;
    // fall back to GMP for anything genuinely large.
    if (n < 1000000) {
        for (Int d = 3; d * d <= n; d += 2)
            if (n % d == 0) return false;
        return true;
    }
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

// Prime factorization by trial division, ascending, with multiplicity.
inline std::vector<std::pair<Int, int>> factor(Int n) {
    if (n < 0) n = -n;
    if (n == 0) throw qerror("BadArgument", "factor(0)");
    std::vector<std::pair<Int, int>> out;
    auto take = [&](const Int& p) {
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        if (e) out.emplace_back(p, e);
    };
    take(2);
    for (Int p = 3; p * p <= n; p += 2) take(p);
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline bool is_squarefree(const Int& n) {
    for (auto& [p, e] : factor(n))
        if (e > 1) return false;
    return true;
}

// d admits a definite rational quaternion algebra of discriminant d iff
// d is squarefree with an odd number of prime factors.
inline bool is_admissible_discriminant(const Int& d) {
    if (d < 2) return false;
    auto f = factor(d);
    for (auto& [p, e] : f)
        if (e > 1) return false;
    return f.size() % 2 == 1;
}

inline int valuation(Int n, const Int& p) {
    if (n == 0) throw qerror("BadArgument", "valuation of 0");
    if (n < 0) n = -n;
    int v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

inline int valuation(const Rat& q, const Int& p) {
    return valuation(q.get_num(), p) - valuation(q.get_den(), p);
}

// Legendre symbol (a/p) for odd prime p.
inline int legendre(const Int& a, const Int& p) {
    return mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
}

inline Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline Int pow_int(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline Int mod_floor(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

// Representative of q in [0,1); q must have denominator coprime-free form.
inline Rat mod1(const Rat& q) {
    Rat r = q - Rat(floor_rat(q));
    return r;
}

}  // namespace quatlat
