#pragma once

#include <array>
#include <string>
#include <vector>

#include "quatlat/matrix.hpp"

namespace quatlat {

// Element of a rational quaternion algebra, written on the basis (1, i, j, k).
// Addition and scaling are algebra-independent; products need the algebra.
struct Quat {
    std::array<Rat, 4> c{};

    Quat() = default;
    Quat(Rat x0, Rat x1, Rat x2, Rat x3) : c{std::move(x0), std::move(x1), std::move(x2), std::move(x3)} {}
    static Quat one() { return Quat(Rat(1), Rat(0), Rat(0), Rat(0)); }
    static Quat scalar(const Rat& r) { return Quat(r, Rat(0), Rat(0), Rat(0)); }

    bool operator==(const Quat& o) const { return c == o.c; }
    bool operator!=(const Quat& o) const { return !(*this == o); }
    bool is_zero() const { return c[0] == 0 && c[1] == 0 && c[2] == 0 && c[3] == 0; }
};

inline Quat operator+(const Quat& x, const Quat& y) {
    return Quat(x.c[0] + y.c[0], x.c[1] + y.c[1], x.c[2] + y.c[2], x.c[3] + y.c[3]);
}
inline Quat operator-(const Quat& x, const Quat& y) {
    return Quat(x.c[0] - y.c[0], x.c[1] - y.c[1], x.c[2] - y.c[2], x.c[3] - y.c[3]);
}
inline Quat operator-(const Quat& x) { return Quat(-x.c[0], -x.c[1], -x.c[2], -x.c[3]); }
inline Quat operator*(const Rat& s, const Quat& x) {
    return Quat(s * x.c[0], s * x.c[1], s * x.c[2], s * x.c[3]);
}

inline Quat conj(const Quat& x) { return Quat(x.c[0], -x.c[1], -x.c[2], -x.c[3]); }
inline Rat trace(const Quat& x) { return 2 * x.c[0]; }

inline std::string quat_str(const Quat& x) {
    static const char* names[4] = {"", "i", "j", "k"};
    std::string s;
    for (int t = 0; t < 4; ++t) {
        if (x.c[t] == 0) continue;
        Rat v = x.c[t];
        if (!s.empty()) {
            s += (v > 0) ? " + " : " - ";
            if (v < 0) v = -v;
        }
        bool unit_coeff = (t > 0 && (v == 1 || v == -1));
        if (!unit_coeff)
            s += rat_str(v) + (t > 0 ? "*" : "");
        else if (v == -1)
            s += "-";
        s += names[t];
    }
    return s.empty() ? "0" : s;
}

// Local Hilbert symbol (a,b)_p at a finite prime, computed from the classical
// closed formulas in terms of Legendre symbols and the mod-8 characters.
inline int hilbert_symbol(const Rat& a0, const Rat& b0, const Int& p) {
    if (a0 == 0 || b0 == 0) throw qerror("BadArgument", "hilbert symbol of zero");
    if (!is_prime(p)) throw qerror("BadArgument", "hilbert symbol at non-prime");
    // replace by integer representatives of the same square class
    Int a = a0.get_num() * a0.get_den();
    Int b = b0.get_num() * b0.get_den();
    int alpha = valuation(a, p), beta = valuation(b, p);
    Int u = a / pow_int(p, alpha), v = b / pow_int(p, beta);
    if (p == 2) {
        auto eps = [](const Int& x) { return mod_floor((x - 1) / 2, 2) == 1; };
        auto omega = [](const Int& x) { return mod_floor((x * x - 1) / 8, 2) == 1; };
        int e = (eps(u) && eps(v)) ? 1 : 0;
        if (alpha % 2 && omega(v)) e ^= 1;
        if (beta % 2 && omega(u)) e ^= 1;
        return e ? -1 : 1;
    }
    int s = 1;
    if ((alpha % 2) && (beta % 2) && mod_floor((p - 1) / 2, 2) == 1) s = -s;
    if (beta % 2) s *= legendre(u, p);
    if (alpha % 2) s *= legendre(v, p);
    return s;
}

inline int hilbert_symbol_infinite(const Rat& a, const Rat& b) {
    if (a == 0 || b == 0) throw qerror("BadArgument", "hilbert symbol of zero");
    return (a < 0 && b < 0) ? -1 : 1;
}

// Definite quaternion algebra (a, b | Q): i^2 = a < 0, j^2 = b < 0, ij = -ji.
class QuaternionAlgebra {
public:
    QuaternionAlgebra(const Rat& a, const Rat& b) : a_(a), b_(b) {
        if (a >= 0 || b >= 0) throw qerror("Indefinite", "need a < 0 and b < 0");
        Int cand = 2 * a.get_num() * a.get_den() * b.get_num() * b.get_den();
        for (auto& [p, e] : factor(cand))
            if (hilbert_symbol(a, b, p) == -1) ramified_.push_back(p);
        disc_ = 1;
        for (auto& p : ramified_) disc_ *= p;
        // product formula sanity: the infinite place ramifies, so the number
        // of finite ramified primes must be odd
        if (hilbert_symbol_infinite(a, b) != -1 || ramified_.size() % 2 == 0)
            throw qerror("Internal", "Hilbert product formula violated");
    }

    const Rat& a() const { return a_; }
    const Rat& b() const { return b_; }
    const std::vector<Int>& ramified_primes() const { return ramified_; }
    const Int& discriminant() const { return disc_; }

    bool operator==(const QuaternionAlgebra& o) const { return a_ == o.a_ && b_ == o.b_; }

    Quat mul(const Quat& x, const Quat& y) const {
        const Rat &a = a_, &b = b_;
        return Quat(
            x.c[0] * y.c[0] + a * x.c[1] * y.c[1] + b * x.c[2] * y.c[2] - a * b * x.c[3] * y.c[3],
            x.c[0] * y.c[1] + x.c[1] * y.c[0] - b * x.c[2] * y.c[3] + b * x.c[3] * y.c[2],
            x.c[0] * y.c[2] + x.c[2] * y.c[0] + a * x.c[1] * y.c[3] - a * x.c[3] * y.c[1],
            x.c[0] * y.c[3] + x.c[3] * y.c[0] + x.c[1] * y.c[2] - x.c[2] * y.c[1]);
    }

    Rat norm(const Quat& x) const {
        return x.c[0] * x.c[0] - a_ * x.c[1] * x.c[1] - b_ * x.c[2] * x.c[2] +
               a_ * b_ * x.c[3] * x.c[3];
    }

    // Euclidean pairing tr(conj(x) y); (x,x) = 2 n(x).
    Rat inner(const Quat& x, const Quat& y) const {
        return 2 * (x.c[0] * y.c[0] - a_ * x.c[1] * y.c[1] - b_ * x.c[2] * y.c[2] +
                    a_ * b_ * x.c[3] * y.c[3]);
    }

    Quat inverse(const Quat& x) const {
        Rat n = norm(x);
        if (n == 0) throw qerror("DivisionByZero", "inverse of zero quaternion");
        return (1 / n) * conj(x);
    }

    std::pair<Rat, Rat> trace_norm(const Quat& x) const { return {trace(x), norm(x)}; }

private:
    Rat a_, b_;
    std::vector<Int> ramified_;
    Int disc_;
};

inline QuaternionAlgebra algebra_from_pair(const Rat& a, const Rat& b) {
    return QuaternionAlgebra(a, b);
}

// Smallest definite algebra (-x, -y | Q) of prescribed squarefree discriminant,
// searched deterministically; used when only the discriminant is given.
inline QuaternionAlgebra algebra_of_discriminant(const Int& d) {
    if (!is_admissible_discriminant(d))
        throw qerror("BadArgument", "no definite algebra of discriminant " + d.get_str());
    for (Int x = 1; x <= 2 * d + 2; ++x)
        for (Int y = x; y <= 2 * d + 2; ++y) {
            QuaternionAlgebra alg(Rat(-x), Rat(-y));
            if (alg.discriminant() == d) return alg;
        }
    throw qerror("Internal", "algebra search exhausted for d = " + d.get_str());
}

}  // namespace quatlat
