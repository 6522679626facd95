#ifndef RITTKIT_REPRESENTATION_HPP
#define RITTKIT_REPRESENTATION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "rittkit/measure.hpp"
#include "rittkit/operators.hpp"

namespace rittkit {

/// Bounded representation by invertible matrices: one generator per cyclic
/// factor for finite groups, or a single generator of Z supplied with an
/// explicit unimodular diagonalization U = V D V^{-1} (which certifies power
/// boundedness; the toolkit does not try to prove it for arbitrary U).
struct Representation {
    std::optional<FiniteAbelianGroup> group; // nullopt => integers
    std::vector<Matrix> generators;          // finite case: one per factor
    Matrix v, v_inv;                         // integer case
    Vector diag;                             // integer case, unimodular
    NormTag space;
    double norm_bound = 1.0;

    bool on_integers() const { return !group.has_value(); }
};

/// pi(g) for a finite-group representation, as the product of generator
/// powers.
inline Matrix rep_apply(const Representation& pi, const GroupElement& g) {
    if (pi.on_integers()) throw structural_error("finite group element fed to a Z representation");
    detail::check_shape(g.coords, *pi.group, "rep_apply");
    Matrix acc = identity(pi.space.dim());
    for (std::size_t i = 0; i < pi.generators.size(); ++i) {
        const std::int64_t k = detail::mod(g.coords[i], pi.group->factors[i]);
        for (std::int64_t j = 0; j < k; ++j) acc = acc * pi.generators[i];
    }
    return acc;
}

inline Matrix rep_apply_z(const Representation& pi, std::int64_t k) {
    if (!pi.on_integers()) throw structural_error("integer power fed to a finite representation");
    Vector dk(pi.diag.size());
    for (Eigen::Index i = 0; i < pi.diag.size(); ++i)
        dk[i] = std::pow(pi.diag[i], cdouble(static_cast<double>(k), 0.0));
    return pi.v * dk.asDiagonal() * pi.v_inv;
}

inline Representation finite_representation(const FiniteAbelianGroup& g,
                                            std::vector<Matrix> generators, NormTag space) {
    if (generators.size() != g.rank())
        throw structural_error("need one generator per cyclic factor");
    Representation pi;
    pi.group = g;
    pi.generators = std::move(generators);
    pi.space = std::move(space);
    const std::int64_t d = pi.space.dim();
    for (std::size_t i = 0; i < pi.generators.size(); ++i) {
        const Matrix& u = pi.generators[i];
        if (u.rows() != d || u.cols() != d)
            throw structural_error("generator dimension does not match the space");
        Matrix p = identity(d);
        for (std::int64_t k = 0; k < g.factors[i]; ++k) p = p * u;
        if ((p - identity(d)).cwiseAbs().maxCoeff() > 1e-9)
            throw precondition_error("generator order does not divide the factor order "
                                     "(U^N != I)");
        for (std::size_t j = 0; j < i; ++j) {
            const Matrix& w = pi.generators[j];
            if ((u * w - w * u).cwiseAbs().maxCoeff() > 1e-9)
                throw precondition_error("generators of an abelian representation must commute");
        }
    }
    double nb = 0.0;
    for (std::int64_t idx = 0; idx < g.order(); ++idx)
        nb = std::max(nb, operator_norm(rep_apply(pi, element_at(idx, g)), pi.space).value);
    pi.norm_bound = nb;
    return pi;
}

inline Representation integer_representation(Matrix v, Vector unimodular_diag, NormTag space) {
    Representation pi;
    for (Eigen::Index i = 0; i < unimodular_diag.size(); ++i)
        if (std::abs(std::abs(unimodular_diag[i]) - 1.0) > 1e-12)
            throw precondition_error("diagonal must be unimodular");
    pi.space = std::move(space);
    if (v.rows() != pi.space.dim() || v.cols() != pi.space.dim() ||
        unimodular_diag.size() != pi.space.dim())
        throw structural_error("diagonalization dimensions do not match the space");
    Eigen::PartialPivLU<Matrix> lu(v);
    pi.v = std::move(v);
    pi.v_inv = lu.inverse();
    if (!pi.v_inv.allFinite()) throw precondition_error("V is not invertible");
    pi.diag = std::move(unimodular_diag);
    pi.norm_bound =
        operator_norm(pi.v, pi.space).value * operator_norm(pi.v_inv, pi.space).value;
    return pi;
}

/// S(pi, nu) = sum_t nu({t}) pi(t).
inline LinearOperator average_operator(const Representation& pi, const Measure& nu) {
    if (!is_probability(nu))
        throw precondition_error("average_operator expects a probability measure");
    if (pi.on_integers() != nu.on_integers() ||
        (pi.group && nu.group && !(*pi.group == *nu.group)))
        throw structural_error("measure carrier does not match the representation");
    Matrix acc = Matrix::Zero(pi.space.dim(), pi.space.dim());
    for (const auto& [pt, w] : nu.atoms) {
        if (pi.on_integers())
            acc += w * rep_apply_z(pi, pt[0]);
        else
            acc += w * rep_apply(pi, GroupElement{pt});
    }
    return LinearOperator(std::move(acc), pi.space);
}

struct TransferenceRecord {
    double lhs = 0.0;     // ||S(pi, nu)|| on the representation space
    double rhs = 0.0;     // ||pi||^2 ||C_nu tensor I_X|| on L^p(G; X)
    double pi_norm = 0.0;
    bool holds = true;
    bool review = false;  // asymmetric certificates: flagged, never auto-failed
    Certificate lhs_certificate = Certificate::exact_finite;
    Certificate rhs_certificate = Certificate::exact_finite;
};

/// Finite transference: ||S(pi,nu)|| <= ||pi||^2 ||C_{nu,p} tensor I_X||.
/// On a finite group the Folner quotient is exactly 1, so the inequality is
/// exact, not asymptotic.
inline TransferenceRecord transference_check(const Representation& pi, const Measure& nu,
                                             double p) {
    if (pi.on_integers())
        throw precondition_error("finite transference needs a finite-group representation");
    const LinearOperator s = average_operator(pi, nu);
    const auto lhs = operator_norm(s);

    // X = the representation space, placed on the inner leg of L^p(G; X)
    const NormTag mixed{p, {pi.group->order()}, pi.space.p, pi.space.dim(), {}};
    check_dim_guard(mixed.dim());
    const LinearOperator conv = convolution_operator(nu, *pi.group, mixed);
    const auto conv_norm = operator_norm(conv);

    TransferenceRecord rec;
    rec.pi_norm = pi.norm_bound;
    rec.lhs = lhs.value;
    rec.rhs = rec.pi_norm * rec.pi_norm * conv_norm.value;
    rec.lhs_certificate = lhs.certificate;
    rec.rhs_certificate = conv_norm.certificate;
    if (rec.lhs <= rec.rhs + 1e-9) {
        rec.holds = true;
    } else if (rec.rhs_certificate == Certificate::mesh_lower_bound &&
               rec.lhs_certificate != Certificate::mesh_lower_bound) {
        // lhs exact vs rhs lower bound cannot certify a violation
        rec.holds = true;
        rec.review = true;
    } else {
        rec.holds = false;
    }
    return rec;
}

struct ProfileRow {
    std::int64_t n;
    double subordinated;       // n ||S^n - S^{n-1}||
    double convolution_scaled; // ||pi||^2 n ||C^n - C^{n-1}|| on L^2(G)
};

/// Ritt profile of the subordinated operator next to the transferred bound.
inline std::vector<ProfileRow> powers_profile(const Representation& pi, const Measure& nu,
                                              std::int64_t nmax) {
    if (nmax < 1) throw config_error("powers_profile needs nmax >= 1");
    const LinearOperator s = average_operator(pi, nu);
    std::vector<ProfileRow> rows;
    rows.reserve(static_cast<std::size_t>(nmax));

    Matrix sp = identity(s.dim());
    std::optional<LinearOperator> conv;
    Matrix cp;
    if (!pi.on_integers()) {
        conv = convolution_operator(nu, *pi.group, lp_tag(2.0, pi.group->order()));
        cp = identity(conv->dim());
    }
    const double scale = pi.norm_bound * pi.norm_bound;
    for (std::int64_t n = 1; n <= nmax; ++n) {
        const Matrix sn = sp * s.mat;
        ProfileRow row{n, static_cast<double>(n) * operator_norm(sn - sp, s.space).value, 0.0};
        sp = sn;
        if (conv) {
            const Matrix cn = cp * conv->mat;
            row.convolution_scaled =
                scale * static_cast<double>(n) * operator_norm(cn - cp, conv->space).value;
            cp = cn;
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace rittkit

#endif
