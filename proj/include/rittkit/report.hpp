#ifndef RITTKIT_REPORT_HPP
#define RITTKIT_REPORT_HPP

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "rittkit/funcalc.hpp"
#include "rittkit/measure.hpp"
#include "rittkit/operators.hpp"
#include "rittkit/representation.hpp"
#include "rittkit/stolz.hpp"
#include "rittkit/tensor.hpp"

namespace rittkit {

inline constexpr const char* kVersion = "0.1.0";

using json = nlohmann::ordered_json;

inline json to_json(const cdouble& z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const Measure& mu) {
    json atoms = json::array();
    for (const auto& [pt, w] : mu.atoms) {
        json a = json::array();
        if (mu.group)
            a.push_back(pt);
        else
            a.push_back(pt[0]);
        a.push_back(w.real());
        a.push_back(w.imag());
        atoms.push_back(std::move(a));
    }
    json carrier;
    if (mu.group)
        carrier = mu.group->factors;
    else
        carrier = "Z";
    return json{{"carrier", std::move(carrier)}, {"atoms", std::move(atoms)}};
}

inline json to_json(const Symbol& sym) {
    json vals = json::array();
    for (cdouble v : sym.values) vals.push_back(to_json(v));
    json j{{"values", std::move(vals)}};
    if (sym.finite_dual()) {
        j["dual"] = "finite";
    } else {
        j["dual"] = "torus-grid";
        j["lipschitz_bound"] = sym.lipschitz_bound;
        j["grid_eps"] = sym.grid_eps();
    }
    return j;
}

inline json to_json(const BarReport& r) {
    json j{{"finite", r.finite},
           {"constant", r.finite ? json(r.constant) : json("inf")},
           {"witnesses", r.witnesses},
           {"certificate", to_string(r.certificate)}};
    if (r.grid_eps > 0.0) j["grid_eps"] = r.grid_eps;
    return j;
}

inline json to_json(const RittReport& r) {
    return json{{"c0", r.c0},
                {"c1", r.c1},
                {"nmax", r.nmax},
                {"resolvent_k", r.resolvent_k},
                {"gamma_star", r.gamma_star_ok ? json(r.gamma_star) : json("fail")},
                {"verdict", to_string(r.verdict)},
                {"tail_certified", r.tail_certified}};
}

inline json to_json(const CalculusReport& r) {
    json coeffs = json::array();
    for (cdouble c : r.witness.coeffs) coeffs.push_back(to_json(c));
    return json{{"gamma", r.gamma},
                {"ratio", r.ratio},
                {"witness_kind", r.witness_kind},
                {"witness_coefficients", std::move(coeffs)},
                {"family_size", r.family_size},
                {"seed", r.seed},
                {"certificate", to_string(r.certificate)}};
}

inline json to_json(const TransferenceRecord& r) {
    return json{{"lhs", r.lhs},
                {"rhs", r.rhs},
                {"pi_norm", r.pi_norm},
                {"holds", r.holds},
                {"review", r.review},
                {"lhs_certificate", to_string(r.lhs_certificate)},
                {"rhs_certificate", to_string(r.rhs_certificate)}};
}

inline json to_json(const DilationResiduals& r) {
    return json{{"qj_identity", r.qj_identity},
                {"qej_square", r.qej_square},
                {"e_idempotent", r.e_idempotent},
                {"e_unital", r.e_unital},
                {"e_min_entry", r.e_min_entry},
                {"isometry_weight", r.isometry_weight}};
}

inline json to_json(const ChainRow& r) {
    return json{{"n", r.n},
                {"lhs", r.lhs},
                {"rhs", r.rhs},
                {"holds", r.holds},
                {"review", r.review},
                {"lhs_certificate", to_string(r.lhs_certificate)},
                {"rhs_certificate", to_string(r.rhs_certificate)}};
}

inline Measure measure_from_json(const json& j) {
    if (!j.contains("carrier") || !j.contains("atoms"))
        throw config_error("measure needs 'carrier' and 'atoms'");
    const bool integers = j["carrier"].is_string();
    std::optional<FiniteAbelianGroup> g;
    if (!integers) g = FiniteAbelianGroup(j["carrier"].get<std::vector<std::int64_t>>());
    Measure mu;
    mu.group = g;
    for (const auto& a : j["atoms"]) {
        if (!a.is_array() || a.size() < 2)
            throw config_error("atom entries are [point, weight_re(, weight_im)]");
        std::vector<std::int64_t> pt;
        if (a[0].is_array())
            pt = a[0].get<std::vector<std::int64_t>>();
        else
            pt = {a[0].get<std::int64_t>()};
        const double re = a[1].get<double>();
        const double im = a.size() > 2 ? a[2].get<double>() : 0.0;
        mu.atoms[detail::canonical_point(std::move(pt), mu)] += cdouble(re, im);
    }
    mu.prune();
    return mu;
}

/// Write-then-rename so partial output never lands at the target path.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw numeric_error("cannot open " + tmp.string() + " for writing");
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

/// Deterministic decimal formatting for CSV companions.
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace rittkit

#endif
