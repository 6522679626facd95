#ifndef RITTKIT_TENSOR_HPP
#define RITTKIT_TENSOR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "rittkit/measure.hpp"
#include "rittkit/operators.hpp"

namespace rittkit {

/// T tensor I_m on the mixed space (outer legs of T, inner l^q_m).
inline LinearOperator tensor_extend(const LinearOperator& t, double q, std::int64_t m) {
    if (t.space.m != 1)
        throw structural_error("tensor_extend expects a scalar-valued operator");
    NormTag tag = t.space;
    tag.q = q;
    tag.m = m;
    check_dim_guard(tag.dim());
    if (m == 1) return LinearOperator(t.mat, tag);
    return LinearOperator(kron(t.mat, identity(m)), tag);
}

namespace detail {

// I x ... x A x ... x I with A acting on (0-based) leg `pos` of `n` legs of
// equal size; first leg is the most significant index block
inline Matrix leg_operator(const Matrix& a, std::size_t pos, std::size_t n) {
    const std::int64_t d = a.rows();
    std::int64_t left = 1, right = 1;
    for (std::size_t i = 0; i < pos; ++i) left *= d;
    for (std::size_t i = pos + 1; i < n; ++i) right *= d;
    return kron(kron(identity(left), a), identity(right));
}

} // namespace detail

struct InterchangeResult {
    bool holds = true;
    double max_residual = 0.0;
};

/// Pointwise kernel identity behind the tensorisation lemma, on a finite
/// group (the cutoff is identically 1 there): for each j,
///   [S_{nj}...S_{1j} x I_X (f)](s_1+...+s_n) =
///   [(S_{nj} x ... x S_{1j} x I_X)(F)](s_1,...,s_n),
/// with F the lift of f along the sum map.
inline InterchangeResult interchange_identity_check(
    const std::vector<std::vector<Measure>>& family, const FiniteAbelianGroup& g,
    const Matrix& f, double tol = 1e-10) {
    const std::size_t n = family.size();
    if (n < 1) throw config_error("need at least one row of measures");
    const std::size_t m_cols = family.front().size();
    const std::int64_t N = g.order();
    const std::int64_t m_inner = f.cols();
    if (f.rows() != N) throw structural_error("test function must have |G| rows");
    std::int64_t lifted = m_inner;
    for (std::size_t i = 0; i < n; ++i) lifted *= N;
    check_dim_guard(lifted);

    // lifted F, flattened row index s_1 N^{n-1} + ... + s_n
    std::int64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= N;
    Matrix F(total, m_inner);
    for (std::int64_t idx = 0; idx < total; ++idx) {
        std::int64_t rem = idx, sum = 0;
        for (std::size_t i = n; i-- > 0;) {
            sum += rem % N;
            rem /= N;
        }
        F.row(idx) = f.row(sum % N);
    }

    InterchangeResult res;
    const NormTag scalar = lp_tag(2.0, N);
    for (std::size_t j = 0; j < m_cols; ++j) {
        Matrix lhs_op = identity(N);
        Matrix rhs_op = identity(total);
        for (std::size_t i = 0; i < n; ++i) {
            if (family[i].size() != m_cols)
                throw structural_error("measure family must be rectangular");
            const Matrix c = convolution_operator(family[i][j], g, scalar).mat;
            lhs_op = c * lhs_op;
            rhs_op = detail::leg_operator(c, i, n) * rhs_op;
        }
        const Matrix lhs_f = lhs_op * f;
        const Matrix rhs_F = rhs_op * F;
        for (std::int64_t idx = 0; idx < total; ++idx) {
            std::int64_t rem = idx, sum = 0;
            for (std::size_t i = n; i-- > 0;) {
                sum += rem % N;
                rem /= N;
            }
            const double r = (rhs_F.row(idx) - lhs_f.row(sum % N)).cwiseAbs().maxCoeff();
            res.max_residual = std::max(res.max_residual, r);
        }
    }
    res.holds = res.max_residual <= tol;
    return res;
}

struct LemmaLemResult {
    double lhs = 0.0; // || sum_j S_{nj}...S_{1j} x I_X || on L^p(G; X)
    double rhs = 0.0; // || sum_j S_{nj} x ... x S_{1j} x I_X || on L^p(G^n; X)
    bool holds = true;
    bool review = false;
    Certificate lhs_certificate = Certificate::exact_finite;
    Certificate rhs_certificate = Certificate::exact_finite;
};

inline LemmaLemResult lemma_lem_check(const std::vector<std::vector<Measure>>& family,
                                      const FiniteAbelianGroup& g, double p, double q,
                                      std::int64_t m_inner) {
    const std::size_t n = family.size();
    if (n < 1) throw config_error("need at least one row of measures");
    const std::size_t m_cols = family.front().size();
    const std::int64_t N = g.order();
    std::int64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= N;
    check_dim_guard(total * m_inner);

    const NormTag scalar = lp_tag(2.0, N);
    Matrix lhs_sum = Matrix::Zero(N, N);
    Matrix rhs_sum = Matrix::Zero(total, total);
    for (std::size_t j = 0; j < m_cols; ++j) {
        Matrix prod = identity(N);
        Matrix tens = identity(total);
        for (std::size_t i = 0; i < n; ++i) {
            const Matrix c = convolution_operator(family[i][j], g, scalar).mat;
            prod = c * prod;
            tens = detail::leg_operator(c, i, n) * tens;
        }
        lhs_sum += prod;
        rhs_sum += tens;
    }

    NormTag lhs_tag{p, {N}, q, m_inner, {}};
    NormTag rhs_tag{p, std::vector<std::int64_t>(n, N), q, m_inner, {}};
    if (m_inner > 1) {
        lhs_sum = kron(lhs_sum, identity(m_inner));
        rhs_sum = kron(rhs_sum, identity(m_inner));
    }
    const auto lhs = operator_norm(lhs_sum, lhs_tag);
    const auto rhs = operator_norm(rhs_sum, rhs_tag);

    LemmaLemResult res;
    res.lhs = lhs.value;
    res.rhs = rhs.value;
    res.lhs_certificate = lhs.certificate;
    res.rhs_certificate = rhs.certificate;
    if (res.lhs <= res.rhs + 1e-9) {
        res.holds = true;
    } else if (rhs.certificate == Certificate::mesh_lower_bound) {
        res.holds = true;
        res.review = true;
    } else {
        res.holds = false;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Rota dilation for reversible chains

/// Path-space dilation of the SQUARE of a reversible Markov operator:
/// Q E J = P^2 and Q J = I. Omega is the support {(x,y) : pi_x P(x,y) > 0}
/// of the one-step path measure, so all weights are strictly positive.
struct DilationTriple {
    Matrix j;                              // L^p(pi) -> L^p(m), (Jf)(x,y) = f(x)
    Matrix e;                              // conditional expectation onto the second coordinate
    Matrix q;                              // (Qg)(x) = sum_y P(x,y) g(x,y)
    std::vector<double> base_measure;      // pi
    std::vector<double> path_measure;      // m(x,y) on the support pairs
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
};

inline DilationTriple rota_dilation(const Eigen::MatrixXd& p, const std::vector<double>& pi) {
    const std::int64_t k = p.rows();
    if (p.cols() != k || static_cast<std::int64_t>(pi.size()) != k)
        throw structural_error("chain and stationary distribution sizes disagree");
    for (std::int64_t x = 0; x < k; ++x) {
        double row = 0.0;
        for (std::int64_t y = 0; y < k; ++y) {
            if (p(x, y) < -1e-15) throw precondition_error("chain has a negative entry");
            row += p(x, y);
        }
        if (std::abs(row - 1.0) > 1e-12)
            throw precondition_error("row " + std::to_string(x) + " does not sum to 1");
    }
    for (std::int64_t x = 0; x < k; ++x)
        for (std::int64_t y = 0; y < k; ++y)
            if (std::abs(pi[x] * p(x, y) - pi[y] * p(y, x)) > 1e-12)
                throw precondition_error("detailed balance fails at pair (" + std::to_string(x) +
                                         ", " + std::to_string(y) + ")");

    DilationTriple d;
    d.base_measure = pi;
    for (std::int64_t x = 0; x < k; ++x)
        for (std::int64_t y = 0; y < k; ++y)
            if (pi[x] * p(x, y) > 0.0) {
                d.pairs.emplace_back(x, y);
                d.path_measure.push_back(pi[x] * p(x, y));
            }
    const std::int64_t no = static_cast<std::int64_t>(d.pairs.size());
    check_dim_guard(no);

    d.j = Matrix::Zero(no, k);
    d.q = Matrix::Zero(k, no);
    d.e = Matrix::Zero(no, no);
    // column mass of the path measure; equals pi_y by stationarity
    std::vector<double> col(static_cast<std::size_t>(k), 0.0);
    for (std::int64_t a = 0; a < no; ++a) col[d.pairs[a].second] += d.path_measure[a];
    for (std::int64_t a = 0; a < no; ++a) {
        const auto [x, y] = d.pairs[a];
        d.j(a, x) = 1.0;
        d.q(x, a) = p(x, y);
        for (std::int64_t b = 0; b < no; ++b)
            if (d.pairs[b].second == y) d.e(a, b) = d.path_measure[b] / col[y];
    }
    return d;
}

struct DilationResiduals {
    double qj_identity = 0.0;     // ||QJ - I||_max
    double qej_square = 0.0;      // ||QEJ - P^2||_max
    double e_idempotent = 0.0;    // ||E^2 - E||_max
    double e_unital = 0.0;        // ||E 1 - 1||_max
    double e_min_entry = 0.0;     // most negative entry of E
    double isometry_weight = 0.0; // max_x |sum_y m(x,y) - pi_x|
};

inline DilationResiduals validate_dilation(const DilationTriple& d, const Eigen::MatrixXd& p) {
    DilationResiduals r;
    const std::int64_t k = p.rows();
    const std::int64_t no = d.j.rows();
    r.qj_identity = (d.q * d.j - identity(k)).cwiseAbs().maxCoeff();
    r.qej_square = (d.q * d.e * d.j - (p * p).cast<cdouble>()).cwiseAbs().maxCoeff();
    r.e_idempotent = (d.e * d.e - d.e).cwiseAbs().maxCoeff();
    r.e_unital = (d.e * Vector::Ones(no) - Vector::Ones(no)).cwiseAbs().maxCoeff();
    r.e_min_entry = d.e.real().minCoeff();
    std::vector<double> mass(static_cast<std::size_t>(k), 0.0);
    for (std::size_t a = 0; a < d.pairs.size(); ++a) mass[d.pairs[a].first] += d.path_measure[a];
    for (std::int64_t x = 0; x < k; ++x)
        r.isometry_weight = std::max(r.isometry_weight, std::abs(mass[x] - d.base_measure[x]));
    return r;
}

// ---------------------------------------------------------------------------
// Pisier's commuting-projection expression

/// || sum_k (I - P_k) prod_{j != k} P_j || on L^p(Omega^n; l^q_m), with
/// P_j = I x ... x E x ... x I x I_X (E in leg j) and the path measure
/// tensorized over the legs. Exact at p = q = 2.
inline NormEstimate pisier_expression_norm(const Matrix& e, const std::vector<double>& weights,
                                           std::int64_t n, double p, double q, std::int64_t m) {
    const std::int64_t no = e.rows();
    if (e.cols() != no || static_cast<std::int64_t>(weights.size()) != no)
        throw structural_error("expectation matrix and weights disagree");
    if ((e * e - e).cwiseAbs().maxCoeff() > 1e-10)
        throw precondition_error("E is not idempotent");
    if (n < 1) throw config_error("need at least one tensor leg");
    std::int64_t total = 1;
    for (std::int64_t i = 0; i < n; ++i) total *= no;
    check_dim_guard(total * m);

    std::vector<Matrix> proj;
    for (std::int64_t j = 0; j < n; ++j)
        proj.push_back(detail::leg_operator(e, static_cast<std::size_t>(j),
                                            static_cast<std::size_t>(n)));
    Matrix expr = Matrix::Zero(total, total);
    for (std::int64_t k = 0; k < n; ++k) {
        Matrix others = identity(total);
        for (std::int64_t j = 0; j < n; ++j)
            if (j != k) others = proj[j] * others;
        expr += (identity(total) - proj[k]) * others;
    }
    if (m > 1) expr = kron(expr, identity(m));

    NormTag tag{p, std::vector<std::int64_t>(n, no), q, m, {}};
    tag.weights.resize(static_cast<std::size_t>(total));
    for (std::int64_t idx = 0; idx < total; ++idx) {
        double w = 1.0;
        std::int64_t rem = idx;
        for (std::int64_t i = 0; i < n; ++i) {
            w *= weights[rem % no];
            rem /= no;
        }
        tag.weights[static_cast<std::size_t>(idx)] = w;
    }
    return operator_norm(expr, tag);
}

struct ChainRow {
    std::int64_t n;
    double lhs;  // n ||(T^n - T^{n-1}) x I_X|| on L^p(G; X)
    double rhs;  // Pisier expression norm on the path-space legs
    bool holds;
    bool review;
    Certificate lhs_certificate;
    Certificate rhs_certificate;
};

/// Main-theorem chain at finite scale: T = C_{eta*eta, p}, the dilated
/// operator is the square of the reversible chain C_eta, and the tensorized
/// difference is dominated by the commuting-projection expression.
inline std::vector<ChainRow> subordination_chain_check(const Measure& eta,
                                                       const FiniteAbelianGroup& g, double p,
                                                       double q, std::int64_t m,
                                                       std::int64_t nmax) {
    if (!is_probability(eta) || !is_symmetric(eta))
        throw precondition_error("chain check needs a symmetric probability measure eta");
    const std::int64_t N = g.order();
    const Measure nu = convolve(eta, eta);

    const Eigen::MatrixXd chain =
        convolution_operator(eta, g, lp_tag(2.0, N)).mat.real();
    const std::vector<double> uniform(static_cast<std::size_t>(N), 1.0 / static_cast<double>(N));
    const DilationTriple dil = rota_dilation(chain, uniform);

    NormTag tag{p, {N}, q, m, {}};
    const Matrix t = convolution_operator(nu, g, lp_tag(2.0, N)).mat;
    std::vector<ChainRow> rows;
    Matrix prev = identity(N);
    for (std::int64_t n = 1; n <= nmax; ++n) {
        const Matrix cur = prev * t;
        Matrix diff = cur - prev;
        if (m > 1) diff = kron(diff, identity(m));
        const auto lhs = operator_norm(diff, tag);
        const auto rhs = pisier_expression_norm(dil.e, dil.path_measure, n, p, q, m);
        ChainRow row{n, static_cast<double>(n) * lhs.value, rhs.value, true, false,
                     lhs.certificate, rhs.certificate};
        if (row.lhs > row.rhs + 1e-9) {
            if (rhs.certificate == Certificate::mesh_lower_bound)
                row.review = true;
            else
                row.holds = false;
        }
        rows.push_back(row);
        prev = cur;
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Growth probes (regular norm, K-convexity)

/// ||T x I_{l^inf_n}|| for n = 1..nmax, as a nondecreasing running maximum of
/// alternating-maximization lower bounds. Constant (= ||T||) for entrywise
/// nonnegative T, which positivity makes regular with equal norm.
inline std::vector<double> regular_norm_lower(const LinearOperator& t, std::int64_t nmax) {
    if (t.space.m != 1) throw structural_error("regular_norm_lower expects a scalar operator");
    std::vector<double> vals;
    double running = 0.0;
    for (std::int64_t n = 1; n <= nmax; ++n) {
        const LinearOperator ext = tensor_extend(t, inf, n);
        running = std::max(running, operator_norm(ext).value);
        vals.push_back(running);
    }
    return vals;
}

/// Lower bound on the K-convexity constant of l^q_m: the Rademacher
/// projection on the discrete cube {-1,1}^N, tensorized with I_X, normed on
/// L^2(cube; l^q_m). Exactly 1 for q = 2.
inline NormEstimate kconvexity_lower(double q, std::int64_t m, std::int64_t rademacher_vars) {
    const std::int64_t nvars = rademacher_vars;
    if (nvars < 1 || nvars > 12) throw config_error("Rademacher variable count must be in 1..12");
    const std::int64_t cube = std::int64_t{1} << nvars;
    check_dim_guard(cube * m);
    Matrix rad = Matrix::Zero(cube, cube);
    for (std::int64_t w = 0; w < cube; ++w)
        for (std::int64_t v = 0; v < cube; ++v) {
            double s = 0.0;
            for (std::int64_t bit = 0; bit < nvars; ++bit) {
                const double ew = (w >> bit) & 1 ? -1.0 : 1.0;
                const double ev = (v >> bit) & 1 ? -1.0 : 1.0;
                s += ew * ev;
            }
            rad(w, v) = s / static_cast<double>(cube);
        }
    Matrix ext = m > 1 ? kron(rad, identity(m)) : rad;
    const NormTag tag{2.0, {cube}, q, m, {}};
    return operator_norm(ext, tag);
}

} // namespace rittkit

#endif
