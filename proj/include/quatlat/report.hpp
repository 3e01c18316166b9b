#pragma once

#include <chrono>
#include <sstream>

#include "quatlat/catalog.hpp"
#include "quatlat/ternary.hpp"

namespace quatlat {

inline constexpr const char* kVersion = "1.0.0";

// CSV emission shared by the CLI and the acceptance suite so both produce the
// byte-identical table format: header then one "d,t,t_dnp" line per row.
inline std::string table_csv(const std::vector<TableRow>& rows,
                             const std::vector<std::optional<bool>>* deuring = nullptr) {
    std::ostringstream out;
    out << (deuring ? "d,t,t_dnp,deuring_ok\n" : "d,t,t_dnp\n");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << rows[i].d.get_str() << ',' << rows[i].t << ',' << rows[i].t_dnp;
        if (deuring) {
            out << ',';
            if ((*deuring)[i].has_value()) out << (**deuring)[i];
        }
        out << '\n';
    }
    return out.str();
}

inline nlohmann::json gram_to_json(const RatMat& g) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < g.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < g.cols(); ++j) row.push_back(rat_str(g(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline nlohmann::json intmat_to_json(const IntMat& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).get_str());
        rows.push_back(row);
    }
    return rows;
}

inline nlohmann::json e8_report_to_json(const E8Report& r) {
    nlohmann::json j;
    j["discriminant"] = r.discriminant.get_str();
    j["construction"] = r.construction;
    j["even"] = r.even;
    j["det"] = rat_str(r.det);
    j["minimum"] = rat_str(r.minimum);
    j["root_count"] = r.root_count;
    j["obasis_found"] = r.obasis_found;
    if (r.form) {
        j["form"] = {{"a", rat_str(r.form->a)},
                     {"b", quat_to_json(r.form->b)},
                     {"c", rat_str(r.form->c)}};
        j["form_min"] = rat_str(r.form_min);
        j["delta"] = rat_str(r.delta);
    }
    j["gamma2_squared"] = r.gamma2_squared.get_str();
    j["upper_bound_note"] = E8Report::upper_bound_note;
    j["all_checks_passed"] = r.all_checks_passed;
    return j;
}

struct TernaryClassReport {
    RatMat gram;
    std::vector<GenusSymbol> symbols;
    Rat minimum;
    bool represents_one;
};

inline std::vector<TernaryClassReport> ternary_class_reports(const Int& d) {
    std::vector<TernaryClassReport> out;
    for (auto& cls : enumerate_S(d)) {
        TernaryClassReport r{cls.lat.gram(), {}, lattice_minimum(cls.lat), false};
        r.represents_one = (r.minimum == 2);
        for (auto& [p, e] : factor(d))
            if (p != 2) r.symbols.push_back(genus_symbols(cls.lat, d, p));
        out.push_back(std::move(r));
    }
    return out;
}

inline nlohmann::json ternary_class_to_json(const TernaryClassReport& r) {
    nlohmann::json j;
    j["gram"] = gram_to_json(r.gram);
    nlohmann::json syms = nlohmann::json::array();
    for (auto& s : r.symbols)
        syms.push_back({{"p", s.p.get_str()}, {"e_p", s.e_p}, {"e_p_prime", s.e_p_prime}});
    j["genus_symbols"] = syms;
    j["minimum"] = rat_str(r.minimum);
    j["represents_one"] = r.represents_one;
    return j;
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    long long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace quatlat
