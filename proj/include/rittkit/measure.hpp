#ifndef RITTKIT_MEASURE_HPP
#define RITTKIT_MEASURE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "rittkit/errors.hpp"
#include "rittkit/group.hpp"

namespace rittkit {

/// Finitely supported complex measure, carried either on a finite abelian
/// group or on the integers. Support points are coordinate tuples for groups
/// and single (possibly negative) integers for Z.
struct Measure {
    std::optional<FiniteAbelianGroup> group; // nullopt => integers
    std::map<std::vector<std::int64_t>, cdouble> atoms;

    bool on_integers() const { return !group.has_value(); }

    double total_variation() const {
        double tv = 0.0;
        for (const auto& [pt, w] : atoms) tv += std::abs(w);
        return tv;
    }

    cdouble total_mass() const {
        cdouble s = 0.0;
        for (const auto& [pt, w] : atoms) s += w;
        return s;
    }

    void prune(double tol = 0.0) {
        std::erase_if(atoms, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
    }
};

namespace detail {

inline std::vector<std::int64_t> canonical_point(std::vector<std::int64_t> pt, const Measure& mu) {
    if (mu.group) {
        check_shape(pt, *mu.group, "measure atom");
        for (std::size_t i = 0; i < pt.size(); ++i) pt[i] = mod(pt[i], mu.group->factors[i]);
    } else if (pt.size() != 1) {
        throw structural_error("integer-carried atoms take a single coordinate");
    }
    return pt;
}

inline void check_same_carrier(const Measure& a, const Measure& b) {
    if (a.on_integers() != b.on_integers() || (a.group && b.group && !(*a.group == *b.group)))
        throw structural_error("measures live on different carriers");
}

} // namespace detail

inline Measure measure_on(const FiniteAbelianGroup& g,
                          std::vector<std::pair<std::vector<std::int64_t>, cdouble>> atoms) {
    Measure mu;
    mu.group = g;
    for (auto& [pt, w] : atoms) mu.atoms[detail::canonical_point(std::move(pt), mu)] += w;
    mu.prune();
    return mu;
}

inline Measure measure_on_integers(std::vector<std::pair<std::int64_t, cdouble>> atoms) {
    Measure mu;
    for (auto& [k, w] : atoms) mu.atoms[{k}] += w;
    mu.prune();
    return mu;
}

inline Measure dirac(const FiniteAbelianGroup& g, std::vector<std::int64_t> point) {
    return measure_on(g, {{std::move(point), 1.0}});
}

inline Measure dirac_z(std::int64_t k) { return measure_on_integers({{k, 1.0}}); }

/// Probability check: nonnegative real weights whose sum drifts from 1 by at
/// most 1e-9. as_probability renormalizes away that drift.
inline bool is_probability(const Measure& mu, double tol = 1e-12) {
    double sum = 0.0;
    for (const auto& [pt, w] : mu.atoms) {
        if (std::abs(w.imag()) > tol || w.real() < -tol) return false;
        sum += w.real();
    }
    return std::abs(sum - 1.0) <= 1e-9;
}

inline Measure as_probability(Measure mu) {
    if (!is_probability(mu))
        throw precondition_error("measure is not a probability measure");
    double sum = 0.0;
    for (auto& [pt, w] : mu.atoms) {
        w = cdouble(std::max(w.real(), 0.0), 0.0);
        sum += w.real();
    }
    for (auto& [pt, w] : mu.atoms) w /= sum;
    mu.prune();
    return mu;
}

inline Measure convolve(const Measure& a, const Measure& b) {
    detail::check_same_carrier(a, b);
    Measure out;
    out.group = a.group;
    for (const auto& [p, wp] : a.atoms)
        for (const auto& [q, wq] : b.atoms) {
            std::vector<std::int64_t> s(p.size());
            if (a.group) {
                for (std::size_t i = 0; i < p.size(); ++i)
                    s[i] = detail::mod(p[i] + q[i], a.group->factors[i]);
            } else {
                s[0] = p[0] + q[0];
            }
            out.atoms[s] += wp * wq;
        }
    out.prune(1e-300);
    return out;
}

inline Measure reflect(const Measure& mu) {
    Measure out;
    out.group = mu.group;
    for (const auto& [p, w] : mu.atoms) {
        std::vector<std::int64_t> q(p.size());
        if (mu.group) {
            for (std::size_t i = 0; i < p.size(); ++i)
                q[i] = detail::mod(-p[i], mu.group->factors[i]);
        } else {
            q[0] = -p[0];
        }
        out.atoms[q] += w;
    }
    return out;
}

inline bool is_symmetric(const Measure& mu, double tol = 1e-12) {
    const Measure r = reflect(mu);
    for (const auto& [p, w] : mu.atoms) {
        auto it = r.atoms.find(p);
        const cdouble other = it == r.atoms.end() ? cdouble(0.0) : it->second;
        if (std::abs(w - other) > tol) return false;
    }
    for (const auto& [p, w] : r.atoms)
        if (!mu.atoms.contains(p) && std::abs(w) > tol) return false;
    return true;
}

inline Measure symmetrize(const Measure& nu) {
    if (!is_probability(nu))
        throw precondition_error("symmetrize expects a probability measure");
    Measure out = reflect(nu);
    for (const auto& [p, w] : nu.atoms) out.atoms[p] += w;
    for (auto& [p, w] : out.atoms) w *= 0.5;
    out.prune();
    return out;
}

/// eta * eta for symmetric eta; the resulting symbol is eta-hat squared and
/// lands in [0,1].
inline Measure square(const Measure& eta) {
    if (!is_probability(eta))
        throw precondition_error("square expects a probability measure");
    if (!is_symmetric(eta))
        throw precondition_error("square requires a symmetric measure (nu = eta * eta needs "
                                 "symmetric eta)");
    return convolve(eta, eta);
}

// ---------------------------------------------------------------------------
// Fourier symbols

/// Values of the Fourier transform, either on the full finite dual group or
/// on an equispaced torus grid carrying a Lipschitz certificate.
struct Symbol {
    std::optional<FiniteAbelianGroup> group; // set for finite duals
    std::vector<cdouble> values;             // dual enumeration order / theta_j = 2 pi j / M
    double lipschitz_bound = 0.0;            // per radian; torus grids only

    bool finite_dual() const { return group.has_value(); }

    /// Certified half-width for grid sup/inf claims.
    double grid_eps() const {
        if (finite_dual()) return 0.0;
        return lipschitz_bound * std::numbers::pi / static_cast<double>(values.size());
    }
};

inline Symbol fourier_symbol(const Measure& mu, std::int64_t resolution = 0) {
    Symbol sym;
    if (mu.group) {
        const auto& g = *mu.group;
        sym.group = g;
        sym.values.resize(static_cast<std::size_t>(g.order()));
        for (std::int64_t xi = 0; xi < g.order(); ++xi) {
            cdouble v = 0.0;
            const DualIndex d = dual_at(xi, g);
            for (const auto& [p, w] : mu.atoms)
                v += w * character(d, GroupElement{p}, g);
            sym.values[static_cast<std::size_t>(xi)] = v;
        }
        return sym;
    }

    double lip = 0.0;
    for (const auto& [p, w] : mu.atoms)
        lip += std::abs(static_cast<double>(p[0])) * std::abs(w);
    sym.lipschitz_bound = lip;

    std::int64_t m = resolution;
    if (m == 0) {
        m = 4096;
        while (lip * std::numbers::pi / static_cast<double>(m) > 1e-6 && m < (1 << 20)) m *= 4;
    } else if (m < 64) {
        throw config_error("torus grid needs at least 64 points");
    }
    sym.values.resize(static_cast<std::size_t>(m));
    for (std::int64_t j = 0; j < m; ++j) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
        cdouble v = 0.0;
        for (const auto& [p, w] : mu.atoms) {
            const double ph = theta * static_cast<double>(p[0]);
            v += w * cdouble(std::cos(ph), std::sin(ph));
        }
        sym.values[static_cast<std::size_t>(j)] = v;
    }
    return sym;
}

/// nu_phi = sum_j a_j nu^{*j} with nu^{*0} = delta_0; a signed measure whose
/// symbol is phi composed with nu-hat.
inline Measure polynomial_push(const std::vector<cdouble>& coeffs, const Measure& nu) {
    if (!is_probability(nu))
        throw precondition_error("polynomial_push expects a probability measure");
    Measure unit = nu.group ? dirac(*nu.group, std::vector<std::int64_t>(nu.group->rank(), 0))
                            : dirac_z(0);
    Measure out;
    out.group = nu.group;
    Measure power = unit;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (j > 0) power = convolve(power, nu);
        for (const auto& [p, w] : power.atoms) out.atoms[p] += coeffs[j] * w;
    }
    out.prune(1e-300);
    return out;
}

} // namespace rittkit

#endif
