#ifndef RITTKIT_NORMS_HPP
#define RITTKIT_NORMS_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "rittkit/errors.hpp"
#include "rittkit/stolz.hpp"

namespace rittkit {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double inf = std::numeric_limits<double>::infinity();

// dense matrices only; keeps dim^2 entries within the documented guard
inline constexpr std::int64_t kDimGuard = 1000;

/// Normed space tag: outer exponent p over the product of the outer legs,
/// inner l^q of dimension m, optional positive weights on the flattened
/// outer coordinates (path-space measures). Plain l^p_N is legs={N}, m=1.
struct NormTag {
    double p = 2.0;
    std::vector<std::int64_t> legs{1};
    double q = 2.0;
    std::int64_t m = 1;
    std::vector<double> weights; // empty = counting measure

    std::int64_t outer_dim() const {
        std::int64_t d = 1;
        for (auto l : legs) d *= l;
        return d;
    }
    std::int64_t dim() const { return outer_dim() * m; }

    bool is_hilbert() const { return p == 2.0 && (q == 2.0 || m == 1); }
    bool is_weighted() const { return !weights.empty(); }
};

inline NormTag lp_tag(double p, std::int64_t n) { return NormTag{p, {n}, p, 1, {}}; }

inline NormTag mixed_tag(double p, std::int64_t n, double q, std::int64_t m) {
    return NormTag{p, {n}, q, m, {}};
}

inline void check_dim_guard(std::int64_t dim) {
    if (dim > kDimGuard)
        throw guard_error("dimension " + std::to_string(dim) + " exceeds the dense guard of " +
                          std::to_string(kDimGuard));
}

inline void check_operator_shape(const Matrix& a, const NormTag& tag) {
    if (a.rows() != a.cols() || a.rows() != tag.dim())
        throw structural_error("matrix shape does not match the tagged space");
    if (tag.is_weighted() && static_cast<std::int64_t>(tag.weights.size()) != tag.outer_dim())
        throw structural_error("weight vector length does not match the outer dimension");
}

namespace detail {

inline double lq_norm(const Eigen::Ref<const Vector>& v, double q) {
    if (q == inf) {
        double m = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
        return m;
    }
    if (q == 2.0) return v.norm();
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]), q);
    return std::pow(s, 1.0 / q);
}

inline double dual_exponent(double p) {
    if (p == 1.0) return inf;
    if (p == inf) return 1.0;
    return p / (p - 1.0);
}

} // namespace detail

/// Mixed (and optionally weighted) vector norm for the tag.
inline double vector_norm(const Vector& x, const NormTag& tag) {
    if (x.size() != tag.dim()) throw structural_error("vector length does not match the tag");
    const std::int64_t blocks = tag.outer_dim();
    const auto w = [&](std::int64_t s) { return tag.is_weighted() ? tag.weights[s] : 1.0; };
    if (tag.p == inf) {
        double best = 0.0;
        for (std::int64_t s = 0; s < blocks; ++s)
            best = std::max(best, detail::lq_norm(x.segment(s * tag.m, tag.m), tag.q));
        return best;
    }
    double acc = 0.0;
    for (std::int64_t s = 0; s < blocks; ++s)
        acc += w(s) * std::pow(detail::lq_norm(x.segment(s * tag.m, tag.m), tag.q), tag.p);
    return std::pow(acc, 1.0 / tag.p);
}

namespace detail {

// argmax over ||x||_q = 1 of Re <x, v>, pairing <x, v> = sum x_i conj(v_i)
inline Vector lq_norming(const Eigen::Ref<const Vector>& v, double q) {
    const Eigen::Index n = v.size();
    Vector x = Vector::Zero(n);
    const double nv = lq_norm(v, dual_exponent(q));
    if (nv <= 0.0) {
        x[0] = 1.0;
        return x;
    }
    if (q == 1.0) {
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < n; ++i)
            if (std::abs(v[i]) > std::abs(v[best])) best = i;
        x[best] = std::abs(v[best]) > 0 ? v[best] / std::abs(v[best]) : cdouble(1.0);
        return x;
    }
    if (q == inf) {
        for (Eigen::Index i = 0; i < n; ++i)
            x[i] = std::abs(v[i]) > 0 ? v[i] / std::abs(v[i]) : cdouble(1.0);
        return x;
    }
    const double qp = dual_exponent(q);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double a = std::abs(v[i]);
        if (a > 0.0) x[i] = (v[i] / a) * std::pow(a / nv, qp - 1.0);
    }
    return x;
}

} // namespace detail

/// argmax over the tag's unit ball of Re <x, v>; attains the dual norm of v.
inline Vector norming_vector(const Vector& v, const NormTag& tag) {
    const std::int64_t blocks = tag.outer_dim();
    const auto w = [&](std::int64_t s) { return tag.is_weighted() ? tag.weights[s] : 1.0; };
    Vector x = Vector::Zero(v.size());
    std::vector<double> dual(static_cast<std::size_t>(blocks));
    for (std::int64_t s = 0; s < blocks; ++s)
        dual[s] = detail::lq_norm(v.segment(s * tag.m, tag.m), detail::dual_exponent(tag.q));

    // weighted pairing duality: treat v_s / w_s blockwise, weight re-enters
    // through the outer norming below
    std::vector<double> eff(dual);
    if (tag.is_weighted())
        for (std::int64_t s = 0; s < blocks; ++s) eff[s] = dual[s] / std::max(w(s), 1e-300);

    std::vector<double> a(static_cast<std::size_t>(blocks), 0.0);
    if (tag.p == 1.0) {
        std::int64_t best = 0;
        for (std::int64_t s = 1; s < blocks; ++s)
            if (eff[s] > eff[best]) best = s;
        if (eff[best] > 0.0) a[best] = 1.0 / w(best);
    } else if (tag.p == inf) {
        for (std::int64_t s = 0; s < blocks; ++s) a[s] = 1.0;
    } else {
        const double pp = detail::dual_exponent(tag.p);
        double acc = 0.0;
        for (std::int64_t s = 0; s < blocks; ++s) acc += w(s) * std::pow(eff[s], pp);
        const double nv = std::pow(acc, 1.0 / pp);
        if (nv > 0.0)
            for (std::int64_t s = 0; s < blocks; ++s) a[s] = std::pow(eff[s] / nv, pp - 1.0);
    }
    for (std::int64_t s = 0; s < blocks; ++s) {
        if (a[s] == 0.0) continue;
        x.segment(s * tag.m, tag.m) = a[s] * detail::lq_norming(v.segment(s * tag.m, tag.m), tag.q);
    }
    const double nx = vector_norm(x, tag);
    if (nx > 0.0) x /= nx;
    else x[0] = 1.0;
    return x;
}

inline NormTag dual_tag(const NormTag& tag) {
    NormTag d = tag;
    d.p = detail::dual_exponent(tag.p);
    d.q = detail::dual_exponent(tag.q);
    return d;
}

struct NormEstimate {
    double value = 0.0;
    Certificate certificate = Certificate::exact_finite;
};

namespace detail {

// conjugate a weighted-space operator to the unweighted coordinates:
// A ~> D^{1/p} A D^{-1/p}, D = diag(weights) expanded over the inner leg
inline Matrix unweight(const Matrix& a, const NormTag& tag) {
    if (!tag.is_weighted()) return a;
    const double e = tag.p == inf ? 0.0 : 1.0 / tag.p;
    Eigen::VectorXd d(tag.dim());
    for (std::int64_t s = 0; s < tag.outer_dim(); ++s) {
        if (tag.weights[s] <= 0.0)
            throw structural_error("weights must be strictly positive; restrict to the support");
        d.segment(s * tag.m, tag.m).setConstant(std::pow(tag.weights[s], e));
    }
    return d.asDiagonal() * a * d.cwiseInverse().asDiagonal();
}

inline double spectral_norm(const Matrix& a) {
    if (a.rows() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

// Boyd-style alternating maximization of ||Ax|| over the tag's unit ball.
// Monotone in the objective; a lower bound on the induced norm.
inline double alternating_norm(const Matrix& a, const NormTag& tag, int restarts,
                               std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const NormTag dual = dual_tag(tag);
    double best = 0.0;
    const Matrix ah = a.adjoint();
    for (int r = 0; r < restarts; ++r) {
        Vector x(a.cols());
        if (r == 0) {
            // deterministic start: norming vector of the column-sum profile
            Eigen::VectorXd cs = a.cwiseAbs().colwise().sum().transpose();
            x = norming_vector(cs.cast<cdouble>(), tag);
        } else {
            for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = cdouble(gauss(rng), gauss(rng));
            const double nx = vector_norm(x, tag);
            x /= nx > 0 ? nx : 1.0;
        }
        double val = 0.0;
        for (int it = 0; it < 200; ++it) {
            const Vector y = a * x;
            const double ny = vector_norm(y, tag);
            if (ny <= val + 1e-13 && it > 0) break;
            val = ny;
            if (ny <= 0.0) break;
            const Vector u = norming_vector(y, dual); // functional norming y
            x = norming_vector(ah * u, tag);
        }
        best = std::max(best, val);
    }
    return best;
}

} // namespace detail

/// Induced operator norm on the tagged space. Exact routes: Hilbert tags via
/// the largest singular value, p = q = 1 via column sums, p = q = inf via row
/// sums. Everything else is an alternating-maximization lower bound with
/// 32 restarts.
inline NormEstimate operator_norm(const Matrix& a, const NormTag& tag, int restarts = 32,
                                  std::uint64_t seed = 0x5eed) {
    check_operator_shape(a, tag);
    const Matrix b = detail::unweight(a, tag);
    if (tag.is_hilbert())
        return {detail::spectral_norm(b), Certificate::exact_finite};
    const bool plain_q = tag.q == tag.p || tag.m == 1;
    if (plain_q && tag.p == 1.0) {
        double best = 0.0;
        for (Eigen::Index j = 0; j < b.cols(); ++j)
            best = std::max(best, b.col(j).template lpNorm<1>());
        return {best, Certificate::exact_finite};
    }
    if (plain_q && tag.p == inf) {
        double best = 0.0;
        for (Eigen::Index i = 0; i < b.rows(); ++i)
            best = std::max(best, b.row(i).template lpNorm<1>());
        return {best, Certificate::exact_finite};
    }
    NormTag flat = tag;
    flat.weights.clear();
    return {detail::alternating_norm(b, flat, restarts, seed), Certificate::mesh_lower_bound};
}

/// Kronecker product helper (row-major leg order: first factor is the most
/// significant index block).
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Matrix identity(std::int64_t n) { return Matrix::Identity(n, n); }

} // namespace rittkit

#endif
