#ifndef RITTKIT_CORPUS_HPP
#define RITTKIT_CORPUS_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

#include "rittkit/measure.hpp"
#include "rittkit/norms.hpp"

namespace rittkit {

/// Random probability measure with full support on the group.
inline Measure random_probability(const FiniteAbelianGroup& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::pair<std::vector<std::int64_t>, cdouble>> atoms;
    double sum = 0.0;
    std::vector<double> w(static_cast<std::size_t>(g.order()));
    for (auto& x : w) {
        x = unit(rng);
        sum += x;
    }
    for (std::int64_t i = 0; i < g.order(); ++i)
        atoms.emplace_back(element_at(i, g).coords, w[static_cast<std::size_t>(i)] / sum);
    return measure_on(g, std::move(atoms));
}

/// Random symmetric probability measure (symmetrized random measure).
inline Measure random_symmetric(const FiniteAbelianGroup& g, std::mt19937_64& rng) {
    return symmetrize(random_probability(g, rng));
}

/// Random reversible row-stochastic chain from a symmetric conductance
/// matrix, together with its stationary distribution.
inline std::pair<Eigen::MatrixXd, std::vector<double>> random_reversible_chain(
    std::int64_t size, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.1, 1.0);
    Eigen::MatrixXd c(size, size);
    for (std::int64_t i = 0; i < size; ++i)
        for (std::int64_t j = i; j < size; ++j) c(i, j) = c(j, i) = unit(rng);
    Eigen::MatrixXd p(size, size);
    std::vector<double> pi(static_cast<std::size_t>(size));
    const double total = c.sum();
    for (std::int64_t i = 0; i < size; ++i) {
        const double row = c.row(i).sum();
        p.row(i) = c.row(i) / row;
        pi[static_cast<std::size_t>(i)] = row / total;
    }
    return {p, pi};
}

/// Random well-conditioned invertible V (identity plus a small perturbation)
/// and a unimodular diagonal, for power-bounded generators U = V D V^{-1}.
inline std::pair<Matrix, Vector> random_conjugated_unitary(std::int64_t dim,
                                                           std::mt19937_64& rng,
                                                           std::int64_t root_order = 0) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Matrix v = identity(dim);
    for (std::int64_t i = 0; i < dim; ++i)
        for (std::int64_t j = 0; j < dim; ++j)
            v(i, j) += 0.25 * cdouble(gauss(rng), gauss(rng));
    Vector d(dim);
    for (std::int64_t i = 0; i < dim; ++i) {
        double th;
        if (root_order > 0) {
            // N-th roots of unity, so that U^N = I
            std::uniform_int_distribution<std::int64_t> pick(0, root_order - 1);
            th = 2.0 * std::numbers::pi * static_cast<double>(pick(rng)) /
                 static_cast<double>(root_order);
        } else {
            th = 2.0 * std::numbers::pi * unit(rng);
        }
        d[i] = std::polar(1.0, th);
    }
    return {v, d};
}

} // namespace rittkit

#endif
