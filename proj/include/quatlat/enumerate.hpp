#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "quatlat/normal_form.hpp"

namespace quatlat {

// x G x^T = sum_i d[i] * (x_i + sum_{j>i} r(i,j) x_j)^2 with r unit upper.
struct Ldlt {
    std::vector<Rat> d;
    RatMat r;
};

inline std::optional<Ldlt> ldlt(const RatMat& g) {
    if (!g.is_square() || !g.is_symmetric()) throw qerror("NotSymmetric", "ldlt needs symmetric input");
    std::size_t n = g.rows();
    Ldlt out{std::vector<Rat>(n), RatMat::identity(n)};
    for (std::size_t i = 0; i < n; ++i) {
        Rat di = g(i, i);
        for (std::size_t k = 0; k < i; ++k) di -= out.d[k] * out.r(k, i) * out.r(k, i);
        if (di <= 0) return std::nullopt;
        out.d[i] = di;
        for (std::size_t j = i + 1; j < n; ++j) {
            Rat v = g(i, j);
            for (std::size_t k = 0; k < i; ++k) v -= out.d[k] * out.r(k, i) * out.r(k, j);
            out.r(i, j) = v / di;
        }
    }
    return out;
}

inline bool is_positive_definite(const RatMat& g) { return ldlt(g).has_value(); }

struct EnumEntry {
    std::vector<Int> x;  // coordinates on the lattice basis the Gram was given in
    Rat value;           // x G x^T
};

// Complete Fincke-Pohst enumeration of the nonzero vectors with x G x^T <=
// bound, in exact rational arithmetic. The basis is LLL-preconditioned first;
// results are mapped back and sorted (value, then coordinates) so callers get
// a deterministic list.
inline std::vector<EnumEntry> enumerate_up_to(const RatMat& g, const Rat& bound) {
    std::size_t n = g.rows();
    std::vector<EnumEntry> out;
    if (bound < 0 || n == 0) return out;

    LllResult red = lll_gram(g);
    auto dec = ldlt(red.gram);
    if (!dec) throw qerror("NotPositiveDefinite", "enumeration needs a positive definite Gram");

    std::vector<Int> xs(n, 0);
    // level i fixes x_i given x_{i+1..n-1}; rem is the budget left.
    std::function<void(std::size_t, const Rat&)> rec = [&](std::size_t i, const Rat& rem) {
        std::size_t lvl = i - 1;  // i runs n..1 to keep size_t unsigned-safe
        Rat off(0);
        for (std::size_t j = lvl + 1; j < n; ++j) off += dec->r(lvl, j) * Rat(xs[j]);
        auto term = [&](const Int& c) -> Rat {
            Rat s = Rat(c) + off;
            return dec->d[lvl] * s * s;
        };
        auto descend = [&](const Int& c) {
            Rat t = term(c);
            if (t > rem) return false;
            xs[lvl] = c;
            if (lvl == 0) {
                bool zero = true;
                for (auto& v : xs)
                    if (v != 0) zero = false;
                if (!zero) {
                    EnumEntry e;
                    e.x = xs;
                    out.push_back(std::move(e));
                }
            } else {
                rec(lvl, rem - t);
            }
            return true;
        };
        Int center = floor_rat(-off);
        for (Int c = center;; --c)
            if (!descend(c)) break;
        for (Int c = center + 1;; ++c)
            if (!descend(c)) break;
        xs[lvl] = 0;
    };
    rec(n, bound);

    // map back through the LLL transform and compute exact values
    RatMat u = to_rat(red.u);
    for (auto& e : out) {
        std::vector<Rat> v = to_rat(e.x) * u;
        std::vector<Int> vi(n);
        for (std::size_t j = 0; j < n; ++j) vi[j] = v[j].get_num();
        std::vector<Rat> gv = to_rat(vi) * g;
        e.value = dot(gv, to_rat(vi));
        e.x = std::move(vi);
    }
    std::sort(out.begin(), out.end(), [](const EnumEntry& a, const EnumEntry& b) {
        if (a.value != b.value) return a.value < b.value;
        return a.x < b.x;
    });
    return out;
}

// Least nonzero value of x G x^T; bounded above by the smallest diagonal entry
// of the reduced Gram, so a single enumeration pass suffices.
inline Rat minimum_value(const RatMat& g) {
    LllResult red = lll_gram(g);
    Rat bound = red.gram(0, 0);
    for (std::size_t i = 1; i < g.rows(); ++i) bound = std::min(bound, red.gram(i, i));
    auto all = enumerate_up_to(g, bound);
    if (all.empty()) throw qerror("Internal", "minimum_value: enumeration came back empty");
    return all.front().value;
}

}  // namespace quatlat
