#ifndef RITTKIT_STOLZ_HPP
#define RITTKIT_STOLZ_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "rittkit/errors.hpp"
#include "rittkit/measure.hpp"

namespace rittkit {

/// How a reported sup/inf was obtained.
enum class Certificate {
    exact_finite,     // finite enumeration, exact up to rounding
    grid_with_eps,    // equispaced grid plus a Lipschitz half-width
    mesh_lower_bound, // dense mesh / restarts; certified lower bound only
};

inline const char* to_string(Certificate c) {
    switch (c) {
        case Certificate::exact_finite: return "exact-finite";
        case Certificate::grid_with_eps: return "grid-with-eps";
        case Certificate::mesh_lower_bound: return "mesh-lower-bound";
    }
    return "?";
}

namespace detail {
inline void check_stolz_angle(double gamma) {
    if (!(gamma > 0.0 && gamma < std::numbers::pi / 2.0))
        throw config_error("Stolz angle must lie in (0, pi/2)");
}
} // namespace detail

/// B_gamma: interior of the convex hull of 1 and the disc |z| < sin(gamma).
struct StolzDomain {
    double gamma;
    explicit StolzDomain(double g) : gamma(g) { detail::check_stolz_angle(g); }
};

/// Sigma_omega = {lambda != 0 : |Arg lambda| < omega}.
struct Sector {
    double omega;
    explicit Sector(double w) : omega(w) {
        if (!(w > 0.0 && w < std::numbers::pi))
            throw config_error("sector angle must lie in (0, pi)");
    }
};

/// Membership in closure(B_gamma): |z| <= sin(gamma), or z sits in the cone
/// of half-angle gamma at 1 with |1-z| <= cos(gamma). tol inflates the test
/// uniformly (used by spectral preconditions).
inline bool stolz_contains(double gamma, cdouble z, double tol = 0.0) {
    detail::check_stolz_angle(gamma);
    if (std::abs(z) <= std::sin(gamma) + tol) return true;
    const cdouble w = 1.0 - z;
    const double r = std::abs(w);
    if (r <= tol) return true; // z = 1, hull vertex
    return std::abs(std::arg(w)) <= gamma + tol && r <= std::cos(gamma) + tol;
}

/// Membership in the closed sector closure(Sigma_omega); 0 belongs.
inline bool sector_contains(double omega, cdouble lambda, double tol = 0.0) {
    if (!(omega > 0.0 && omega < std::numbers::pi))
        throw config_error("sector angle must lie in (0, pi)");
    if (std::abs(lambda) <= tol) return true;
    return std::abs(std::arg(lambda)) <= omega + tol;
}

/// Boundary polyline of B_gamma: upper tangent segment from 1, the major arc
/// of the disc |z| = sin(gamma), then the lower segment back to 1. Endpoints
/// included; suitable both for sup meshes and plot export.
inline std::vector<cdouble> stolz_boundary(double gamma, std::size_t arc_points = 512,
                                           std::size_t segment_points = 256) {
    detail::check_stolz_angle(gamma);
    const double s = std::sin(gamma);
    const double c = std::cos(gamma);
    std::vector<cdouble> pts;
    pts.reserve(arc_points + 2 * segment_points + 3);
    // tangent points sit at angles +-(pi/2 - gamma) on the circle of radius s
    const double th0 = std::numbers::pi / 2.0 - gamma;
    for (std::size_t k = 0; k <= segment_points; ++k) {
        const double t = c * static_cast<double>(k) / static_cast<double>(segment_points);
        pts.push_back(1.0 + t * std::polar(1.0, std::numbers::pi - gamma));
    }
    for (std::size_t k = 1; k < arc_points; ++k) {
        const double th = th0 + (2.0 * std::numbers::pi - 2.0 * th0) * static_cast<double>(k) /
                                    static_cast<double>(arc_points);
        pts.push_back(std::polar(s, th));
    }
    for (std::size_t k = 0; k <= segment_points; ++k) {
        const double t = c * (1.0 - static_cast<double>(k) / static_cast<double>(segment_points));
        pts.push_back(1.0 + t * std::polar(1.0, -(std::numbers::pi - gamma)));
    }
    return pts;
}

/// sup of |1-z| / (1-|z|) over B_gamma, by boundary + interior meshes with
/// refinement until successive estimates agree to 1e-6. A certified lower
/// bound of the true constant C_gamma.
inline double stolz_ratio_constant(double gamma, std::size_t samples = 512) {
    detail::check_stolz_angle(gamma);
    const auto ratio = [](cdouble z) {
        const double denom = 1.0 - std::abs(z);
        if (denom <= 1e-15) return 0.0; // z = 1 limit along the reals is 1; skip the vertex
        return std::abs(1.0 - z) / denom;
    };
    double prev = 0.0;
    std::size_t n = samples;
    for (int pass = 0; pass < 8; ++pass) {
        double best = 1.0; // real z in (0,1) give ratio exactly 1
        for (cdouble z : stolz_boundary(gamma, n, n / 2)) best = std::max(best, ratio(z));
        // interior mesh: convex combinations of 1 and circle points; the
        // maximum principle is not assumed for this quotient
        const std::size_t im = n / 4;
        for (std::size_t a = 0; a <= im; ++a)
            for (std::size_t b = 1; b < im; ++b) {
                const double th = 2.0 * std::numbers::pi * static_cast<double>(a) /
                                  static_cast<double>(im);
                const double t = static_cast<double>(b) / static_cast<double>(im);
                const cdouble z = t * std::polar(std::sin(gamma), th) + (1.0 - t);
                best = std::max(best, ratio(z));
            }
        if (pass > 0 && best - prev < 1e-6) return best;
        prev = best;
        n *= 2;
    }
    return prev;
}

/// BAR constant K of a symbol: sup over dual points with value != 1 of
/// |1 - v| / (1 - |v|).
struct BarReport {
    double constant = 1.0;           // >= 1 when finite
    bool finite = true;              // false: some |v| = 1, v != 1
    std::vector<std::size_t> witnesses; // indices into the symbol achieving the sup
    Certificate certificate = Certificate::exact_finite;
    double grid_eps = 0.0;
};

inline BarReport bar_constant(const Symbol& sym) {
    BarReport rep;
    rep.certificate = sym.finite_dual() ? Certificate::exact_finite : Certificate::grid_with_eps;
    rep.grid_eps = sym.grid_eps();
    double best = 0.0;
    for (std::size_t i = 0; i < sym.values.size(); ++i) {
        const cdouble v = sym.values[i];
        if (std::abs(v) > 1.0 + 1e-9)
            throw precondition_error("symbol value exceeds the closed unit disc; not a "
                                     "probability symbol");
        const double num = std::abs(1.0 - v);
        if (num <= 1e-12) continue; // v = 1: the defining inequality is trivial there
        const double den = 1.0 - std::abs(v);
        if (den <= 1e-12) {
            rep.finite = false;
            rep.constant = std::numeric_limits<double>::infinity();
            rep.witnesses.assign(1, i);
            return rep;
        }
        const double r = num / den;
        if (r > best + 1e-12) {
            best = r;
            rep.witnesses.assign(1, i);
        } else if (r > best - 1e-12) {
            rep.witnesses.push_back(i);
        }
    }
    rep.constant = std::max(best, 1.0); // nu-hat identically 1 reports K = 1 by convention
    if (rep.witnesses.empty()) rep.witnesses.push_back(0);
    return rep;
}

/// Smallest gamma with z in closure(B_gamma), by bisection to 1e-9.
/// Returns nullopt when no Stolz closure contains z (|z| = 1, z != 1).
/// gamma = 0 encodes the degenerate segment [0,1].
inline std::optional<double> minimal_stolz_angle_point(cdouble z) {
    if (std::abs(1.0 - z) <= 1e-12) return 0.0;
    if (std::abs(z) >= 1.0 - 1e-12) return std::nullopt;
    if (std::abs(z.imag()) <= 1e-15 && z.real() >= 0.0 && z.real() <= 1.0) return 0.0;
    double lo = 0.0, hi = std::numbers::pi / 2.0;
    if (!stolz_contains(std::nextafter(hi, 0.0), z)) return std::nullopt;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (stolz_contains(mid, z))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

inline std::optional<double> minimal_stolz_angle(const std::vector<cdouble>& values) {
    double gamma = 0.0;
    for (cdouble v : values) {
        const auto g = minimal_stolz_angle_point(v);
        if (!g) return std::nullopt;
        gamma = std::max(gamma, *g);
    }
    return gamma;
}

inline std::optional<double> minimal_stolz_angle(const Symbol& sym) {
    for (cdouble v : sym.values)
        if (std::abs(v) > 1.0 + 1e-9)
            throw precondition_error("symbol value exceeds the closed unit disc");
    return minimal_stolz_angle(sym.values);
}

/// sup over the boundary mesh of |phi_n|, phi_n(z) = n (z^n - z^{n-1}).
/// |phi_n(z)| = n |z|^{n-1} |z-1| needs only moduli, so large n is cheap.
inline double phi_n_sup(std::int64_t n, double gamma, std::size_t mesh = 2048) {
    if (n < 1) throw config_error("phi_n_sup needs n >= 1");
    detail::check_stolz_angle(gamma);
    double best = 0.0;
    for (cdouble z : stolz_boundary(gamma, mesh, mesh / 2)) {
        const double r = std::abs(z);
        const double v = static_cast<double>(n) *
                         std::pow(r, static_cast<double>(n - 1)) * std::abs(z - 1.0);
        best = std::max(best, v);
    }
    return best;
}

} // namespace rittkit

#endif
