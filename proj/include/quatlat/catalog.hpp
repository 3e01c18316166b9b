#pragma once

#include <json.hpp>

#include "quatlat/order.hpp"

namespace quatlat {

// An order as it travels through files and presets: algebra constants plus a
// basis in (1, i, j, k) coordinates, with optional generator data for the
// different (pi) and the lambda parameters of the rank-8 construction.
struct OrderDocument {
    std::string name;
    Rat a, b;
    std::array<Quat, 4> basis;
    std::optional<Quat> pi;
    std::vector<Quat> lambdas;

    Order build() const { return order_from_basis(QuaternionAlgebra(a, b), basis); }
};

namespace detail_catalog {

inline Quat qparse(const std::array<const char*, 4>& s) {
    return Quat(parse_rat(s[0]), parse_rat(s[1]), parse_rat(s[2]), parse_rat(s[3]));
}

}  // namespace detail_catalog

// The built-in orders. Those with an explicit basis are taken as-is; the
// d5 and d11-b entries are stated by generators and completed to maximal
// orders, deterministically, on first use.
inline const std::vector<OrderDocument>& order_catalog() {
    static const std::vector<OrderDocument> catalog = [] {
        using detail_catalog::qparse;
        std::vector<OrderDocument> v;

        // Hurwitz order, D = 2; pi = 1 + i, lambda = 1.
        v.push_back({"hurwitz", Rat(-1), Rat(-1),
                     {qparse({"1/2", "1/2", "1/2", "1/2"}), qparse({"0", "1", "0", "0"}),
                      qparse({"0", "0", "1", "0"}), qparse({"0", "0", "0", "1"})},
                     qparse({"1", "1", "0", "0"}),
                     {qparse({"1", "0", "0", "0"})}});

        // D = 3: maximal order containing i and (1+j)/2; pi = j, lambda = 1+i.
        v.push_back({"d3", Rat(-1), Rat(-3),
                     {qparse({"1", "0", "0", "0"}), qparse({"0", "1", "0", "0"}),
                      qparse({"1/2", "0", "1/2", "0"}), qparse({"0", "1/2", "0", "1/2"})},
                     qparse({"0", "0", "1", "0"}),
                     {qparse({"1", "1", "0", "0"})}});

        // D = 5: any maximal order containing j in (-2, -5); pi = j, lambda = 2.
        {
            QuaternionAlgebra alg(Rat(-2), Rat(-5));
            Order o0 = order_from_basis(
                alg, {Quat::one(), qparse({"0", "1", "0", "0"}), qparse({"0", "0", "1", "0"}),
                      qparse({"0", "0", "0", "1"})});
            Order m = maximalize(o0);
            v.push_back({"d5", Rat(-2), Rat(-5), m.basis(), qparse({"0", "0", "1", "0"}),
                         {qparse({"2", "0", "0", "0"})}});
        }

        // D = 7: maximal order containing i and (1+j)/2; pi = j,
        // lambda = 2 + i(1+j)/2.
        v.push_back({"d7", Rat(-1), Rat(-7),
                     {qparse({"1", "0", "0", "0"}), qparse({"0", "1", "0", "0"}),
                      qparse({"1/2", "0", "1/2", "0"}), qparse({"0", "1/2", "0", "1/2"})},
                     qparse({"0", "0", "1", "0"}),
                     {qparse({"2", "1/2", "0", "1/2"})}});

        // D = 11, first class: Z[t] + iZ[t] with t = (1+j)/2.
        v.push_back({"d11-a", Rat(-1), Rat(-11),
                     {qparse({"1", "0", "0", "0"}), qparse({"0", "1", "0", "0"}),
                      qparse({"1/2", "0", "1/2", "0"}), qparse({"0", "1/2", "0", "1/2"})},
                     qparse({"0", "0", "1", "0"}),
                     {}});

        // D = 11, second class: a maximal order over Z[t'] + jZ[t'],
        // t' = -1/2 + (i+k)/4.
        {
            QuaternionAlgebra alg(Rat(-1), Rat(-11));
            Quat tp = qparse({"-1/2", "1/4", "0", "1/4"});
            Quat j = qparse({"0", "0", "1", "0"});
            Order o0 = order_from_basis(alg, {Quat::one(), tp, j, alg.mul(j, tp)});
            Order m = maximalize(o0);
            v.push_back({"d11-b", Rat(-1), Rat(-11), m.basis(), j, {}});
        }

        // D = 13: Z + Zi + Z(1+i-j)/2 + Z(2+i+k)/4 in (-2, -13); pi = j,
        // lambda_1 = (3+j-k)/2, lambda_2 = (1+2i-j+k)/2.
        v.push_back({"d13", Rat(-2), Rat(-13),
                     {qparse({"1", "0", "0", "0"}), qparse({"0", "1", "0", "0"}),
                      qparse({"1/2", "1/2", "-1/2", "0"}), qparse({"1/2", "1/4", "0", "1/4"})},
                     qparse({"0", "0", "1", "0"}),
                     {qparse({"3/2", "0", "1/2", "-1/2"}), qparse({"1/2", "1", "-1/2", "1/2"})}});

        return v;
    }();
    return catalog;
}

inline std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (auto& d : order_catalog()) names.push_back(d.name);
    return names;
}

inline const OrderDocument& preset(const std::string& name) {
    for (auto& d : order_catalog())
        if (d.name == name) return d;
    throw qerror("UnknownPreset", "no preset named '" + name + "'");
}

// --------------------------- JSON (de)serialization ------------------------

inline nlohmann::json quat_to_json(const Quat& x) {
    return nlohmann::json::array({rat_str(x.c[0]), rat_str(x.c[1]), rat_str(x.c[2]),
                                  rat_str(x.c[3])});
}

inline Quat quat_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 4) throw qerror("ParseError", "quaternion must be [x0,x1,x2,x3]");
    return Quat(parse_rat(j[0].get<std::string>()), parse_rat(j[1].get<std::string>()),
                parse_rat(j[2].get<std::string>()), parse_rat(j[3].get<std::string>()));
}

inline nlohmann::json order_document_to_json(const OrderDocument& d) {
    nlohmann::json j;
    j["name"] = d.name;
    j["a"] = rat_str(d.a);
    j["b"] = rat_str(d.b);
    nlohmann::json rows = nlohmann::json::array();
    for (auto& q : d.basis) rows.push_back(quat_to_json(q));
    j["basis"] = rows;
    if (d.pi) j["pi"] = quat_to_json(*d.pi);
    if (!d.lambdas.empty()) {
        nlohmann::json ls = nlohmann::json::array();
        for (auto& l : d.lambdas) ls.push_back(quat_to_json(l));
        j["lambda"] = ls;
    }
    return j;
}

inline OrderDocument order_document_from_json(const nlohmann::json& j) {
    OrderDocument d;
    try {
        d.name = j.at("name").get<std::string>();
        d.a = parse_rat(j.at("a").get<std::string>());
        d.b = parse_rat(j.at("b").get<std::string>());
        const auto& rows = j.at("basis");
        if (!rows.is_array() || rows.size() != 4)
            throw qerror("ParseError", "basis must be a 4x4 array");
        for (int i = 0; i < 4; ++i) d.basis[i] = quat_from_json(rows[i]);
        if (j.contains("pi")) d.pi = quat_from_json(j["pi"]);
        if (j.contains("lambda"))
            for (auto& l : j["lambda"]) d.lambdas.push_back(quat_from_json(l));
    } catch (const nlohmann::json::exception& e) {
        throw qerror("ParseError", std::string("order document: ") + e.what());
    }
    return d;
}

}  // namespace quatlat
