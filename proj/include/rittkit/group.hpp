#ifndef RITTKIT_GROUP_HPP
#define RITTKIT_GROUP_HPP

#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "rittkit/errors.hpp"

namespace rittkit {

using cdouble = std::complex<double>;

/// Product of cyclic groups Z_{N_1} x ... x Z_{N_d}. Elements are coordinate
/// tuples reduced mod the factor orders; the dual is identified with the
/// group itself.
struct FiniteAbelianGroup {
    std::vector<std::int64_t> factors;

    explicit FiniteAbelianGroup(std::vector<std::int64_t> f) : factors(std::move(f)) {
        if (factors.empty())
            throw config_error("group needs at least one cyclic factor");
        for (auto n : factors)
            if (n < 1)
                throw config_error("cyclic factor orders must be >= 1");
    }

    std::int64_t order() const {
        std::int64_t o = 1;
        for (auto n : factors) o *= n;
        return o;
    }

    std::size_t rank() const { return factors.size(); }

    bool operator==(const FiniteAbelianGroup&) const = default;
};

struct GroupElement {
    std::vector<std::int64_t> coords;
};

struct DualIndex {
    std::vector<std::int64_t> coords;
};

namespace detail {

inline std::int64_t mod(std::int64_t a, std::int64_t n) {
    std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

inline void check_shape(const std::vector<std::int64_t>& coords, const FiniteAbelianGroup& g,
                        const char* what) {
    if (coords.size() != g.factors.size())
        throw structural_error(std::string(what) + ": coordinate rank does not match the group");
}

} // namespace detail

inline GroupElement reduce(GroupElement e, const FiniteAbelianGroup& g) {
    detail::check_shape(e.coords, g, "reduce");
    for (std::size_t i = 0; i < e.coords.size(); ++i)
        e.coords[i] = detail::mod(e.coords[i], g.factors[i]);
    return e;
}

inline GroupElement group_add(const GroupElement& a, const GroupElement& b,
                              const FiniteAbelianGroup& g) {
    detail::check_shape(a.coords, g, "group_add");
    detail::check_shape(b.coords, g, "group_add");
    GroupElement r;
    r.coords.resize(g.rank());
    for (std::size_t i = 0; i < g.rank(); ++i)
        r.coords[i] = detail::mod(a.coords[i] + b.coords[i], g.factors[i]);
    return r;
}

inline GroupElement group_negate(const GroupElement& a, const FiniteAbelianGroup& g) {
    detail::check_shape(a.coords, g, "group_negate");
    GroupElement r;
    r.coords.resize(g.rank());
    for (std::size_t i = 0; i < g.rank(); ++i)
        r.coords[i] = detail::mod(-a.coords[i], g.factors[i]);
    return r;
}

inline GroupElement group_sub(const GroupElement& a, const GroupElement& b,
                              const FiniteAbelianGroup& g) {
    return group_add(a, group_negate(b, g), g);
}

/// Character pairing <xi, t> = exp(2 pi i sum_j xi_j t_j / N_j).
/// Positive-sign exponent convention.
inline cdouble character(const DualIndex& xi, const GroupElement& t,
                         const FiniteAbelianGroup& g) {
    detail::check_shape(xi.coords, g, "character");
    detail::check_shape(t.coords, g, "character");
    double phase = 0.0;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        auto k = detail::mod(xi.coords[i] * t.coords[i], g.factors[i]);
        phase += static_cast<double>(k) / static_cast<double>(g.factors[i]);
    }
    phase *= 2.0 * std::numbers::pi;
    return {std::cos(phase), std::sin(phase)};
}

/// Row-major flat index of an element, first coordinate most significant.
inline std::int64_t flat_index(const GroupElement& e, const FiniteAbelianGroup& g) {
    detail::check_shape(e.coords, g, "flat_index");
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < g.rank(); ++i)
        idx = idx * g.factors[i] + detail::mod(e.coords[i], g.factors[i]);
    return idx;
}

inline GroupElement element_at(std::int64_t idx, const FiniteAbelianGroup& g) {
    GroupElement e;
    e.coords.resize(g.rank());
    for (std::size_t i = g.rank(); i-- > 0;) {
        e.coords[i] = idx % g.factors[i];
        idx /= g.factors[i];
    }
    return e;
}

inline DualIndex dual_at(std::int64_t idx, const FiniteAbelianGroup& g) {
    return DualIndex{element_at(idx, g).coords};
}

} // namespace rittkit

#endif
