#ifndef RITTKIT_FUNCALC_HPP
#define RITTKIT_FUNCALC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rittkit/operators.hpp"
#include "rittkit/stolz.hpp"

namespace rittkit {

/// Complex polynomial a_0 + a_1 z + ... + a_d z^d.
struct Polynomial {
    std::vector<cdouble> coeffs{0.0};

    Polynomial() = default;
    Polynomial(std::vector<cdouble> c) : coeffs(std::move(c)) {
        while (coeffs.size() > 1 && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
        if (coeffs.empty()) coeffs.push_back(0.0);
    }

    std::size_t degree() const { return coeffs.size() - 1; }

    cdouble operator()(cdouble z) const {
        cdouble acc = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
        return acc;
    }

    static Polynomial monomial(std::size_t n) {
        std::vector<cdouble> c(n + 1, 0.0);
        c[n] = 1.0;
        return Polynomial(std::move(c));
    }

    /// phi_n(z) = n (z^n - z^{n-1})
    static Polynomial phi(std::size_t n) {
        std::vector<cdouble> c(n + 1, 0.0);
        c[n] = static_cast<double>(n);
        c[n - 1] = -static_cast<double>(n);
        return Polynomial(std::move(c));
    }
};

/// Horner evaluation of phi(T).
inline LinearOperator eval_poly_operator(const Polynomial& phi, const LinearOperator& t) {
    Matrix acc = Matrix::Zero(t.dim(), t.dim());
    for (std::size_t i = phi.coeffs.size(); i-- > 0;) {
        acc = acc * t.mat;
        acc.diagonal().array() += phi.coeffs[i];
    }
    return LinearOperator(std::move(acc), t.space);
}

/// sup of |phi| over B_gamma via the boundary mesh (maximum modulus
/// principle), refined until successive sups agree to 1e-8.
inline double sup_on_stolz(const Polynomial& phi, double gamma, std::size_t mesh = 1024) {
    detail::check_stolz_angle(gamma);
    double prev = -1.0;
    std::size_t n = mesh;
    for (int pass = 0; pass < 10; ++pass) {
        double best = 0.0;
        for (cdouble z : stolz_boundary(gamma, n, n / 2))
            best = std::max(best, std::abs(phi(z)));
        if (pass > 0 && best - prev < 1e-8) return best;
        prev = best;
        n *= 2;
    }
    return prev;
}

struct HinfFamilySpec {
    std::size_t monomial_max = 64;
    std::size_t phi_max = 64;
    std::size_t random_degree = 32;
    std::size_t random_draws = 256;
    std::size_t cesaro_max = 32;
};

/// Lower-bound estimate of the H-infinity(B_gamma) calculus constant of T.
struct CalculusReport {
    double gamma = 0.0;
    double ratio = 0.0;    // best observed ||phi(T)|| / sup_{B_gamma} |phi|
    Polynomial witness;
    std::string witness_kind;
    std::size_t family_size = 0;
    std::uint64_t seed = 0;
    Certificate certificate = Certificate::mesh_lower_bound;
};

/// Sweeps a polynomial family (monomials, the phi_n, seeded random
/// coefficients on the unit disc, Cesaro averages) and reports the largest
/// ratio ||phi(T)|| / sup |phi|. Requires spectrum(T) inside closure(B_gamma).
inline CalculusReport hinf_ratio(const LinearOperator& t, double gamma,
                                 const HinfFamilySpec& spec = {}, std::uint64_t seed = 0x5eed) {
    detail::check_stolz_angle(gamma);
    for (cdouble l : spectrum(t))
        if (!stolz_contains(gamma, l, 1e-9))
            throw precondition_error("spectrum leaves closure(B_gamma): eigenvalue (" +
                                     std::to_string(l.real()) + ", " + std::to_string(l.imag()) +
                                     ")");
    CalculusReport rep;
    rep.gamma = gamma;
    rep.seed = seed;

    const auto consider = [&](const Polynomial& phi, const char* kind) {
        const double denom = sup_on_stolz(phi, gamma);
        ++rep.family_size;
        if (denom < 1e-14) return;
        const double num = operator_norm(eval_poly_operator(phi, t)).value;
        const double r = num / denom;
        if (r > rep.ratio) {
            rep.ratio = r;
            rep.witness = phi;
            rep.witness_kind = kind;
        }
    };

    for (std::size_t n = 0; n <= spec.monomial_max; ++n) consider(Polynomial::monomial(n), "monomial");
    for (std::size_t n = 1; n <= spec.phi_max; ++n) consider(Polynomial::phi(n), "phi-n");
    for (std::size_t n = 1; n <= spec.cesaro_max; ++n) {
        std::vector<cdouble> c(n, 1.0 / static_cast<double>(n));
        consider(Polynomial(std::move(c)), "cesaro");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t d = 0; d < spec.random_draws; ++d) {
        std::vector<cdouble> c(spec.random_degree + 1);
        for (auto& a : c) {
            // uniform on the unit disc
            const double r = std::sqrt(unit(rng));
            const double th = 2.0 * std::numbers::pi * unit(rng);
            a = std::polar(r, th);
        }
        consider(Polynomial(std::move(c)), "random");
    }
    return rep;
}

} // namespace rittkit

#endif
