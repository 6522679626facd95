#include <catch_amalgamated.hpp>

#include <random>

#include "rittkit/corpus.hpp"
#include "rittkit/funcalc.hpp"
#include "rittkit/report.hpp"
#include "rittkit/representation.hpp"

using namespace rittkit;

namespace {

Representation random_rep(const FiniteAbelianGroup& g, std::int64_t dim, double q,
                          std::mt19937_64& rng) {
    // one shared conjugation keeps the generators commuting
    auto [v, d0] = random_conjugated_unitary(dim, rng, g.factors[0]);
    const Matrix vi = v.partialPivLu().inverse();
    std::vector<Matrix> gens{v * d0.asDiagonal() * vi};
    for (std::size_t i = 1; i < g.rank(); ++i) {
        auto [w, d] = random_conjugated_unitary(dim, rng, g.factors[i]);
        gens.push_back(v * d.asDiagonal() * vi);
    }
    return finite_representation(g, gens, lp_tag(q, dim));
}

} // namespace

TEST_CASE("representation law pi(j) pi(k) = pi(j+k)") {
    const FiniteAbelianGroup g({6});
    std::mt19937_64 rng(71);
    const Representation pi = random_rep(g, 3, 2.0, rng);
    for (std::int64_t j = 0; j < 6; ++j)
        for (std::int64_t k = 0; k < 6; ++k) {
            const Matrix lhs = rep_apply(pi, GroupElement{{j}}) * rep_apply(pi, GroupElement{{k}});
            const Matrix rhs = rep_apply(pi, GroupElement{{j + k}});
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
        }
}

TEST_CASE("generator validation") {
    const FiniteAbelianGroup g({4});
    Matrix u(2, 2);
    u << 1.0, 1.0, 0.0, 1.0; // not of finite order
    CHECK_THROWS_AS(finite_representation(g, {u}, lp_tag(2.0, 2)), precondition_error);

    const FiniteAbelianGroup g2({2, 2});
    Matrix a(2, 2), b(2, 2);
    a << 0.0, 1.0, 1.0, 0.0;
    b << 1.0, 0.0, 0.0, -1.0;
    // a and b anticommute, so they cannot generate an abelian representation
    CHECK_THROWS_AS(finite_representation(g2, {a, b}, lp_tag(2.0, 2)), precondition_error);
}

TEST_CASE("average operator respects convolution (Fubini identity)") {
    const FiniteAbelianGroup g({8});
    std::mt19937_64 rng(73);
    const Representation pi = random_rep(g, 4, 2.0, rng);
    for (int trial = 0; trial < 10; ++trial) {
        const Measure mu = random_probability(g, rng);
        const Measure nu = random_probability(g, rng);
        const Matrix lhs = average_operator(pi, convolve(mu, nu)).mat;
        const Matrix rhs = average_operator(pi, mu).mat * average_operator(pi, nu).mat;
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("polynomial calculus routes through the pushed measure") {
    const FiniteAbelianGroup g({5});
    std::mt19937_64 rng(79);
    const Representation pi = random_rep(g, 3, 2.0, rng);
    const Measure nu = random_probability(g, rng);
    const std::vector<cdouble> coeffs{cdouble(0.5), cdouble(-1.0), cdouble(0.25),
                                      cdouble(0.0, 0.75)};
    const LinearOperator s = average_operator(pi, nu);
    const Matrix route1 = eval_poly_operator(Polynomial(coeffs), s).mat;
    Matrix route2 = Matrix::Zero(3, 3);
    const Measure pushed = polynomial_push(coeffs, nu);
    for (const auto& [pt, w] : pushed.atoms) route2 += w * rep_apply(pi, GroupElement{pt});
    CHECK((route1 - route2).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("regular representation turns averages into convolutions") {
    // generators = shift matrices give S(pi, nu) = C_nu exactly
    const FiniteAbelianGroup g({6});
    Matrix shift = Matrix::Zero(6, 6);
    for (std::int64_t s = 0; s < 6; ++s) shift((s + 1) % 6, s) = 1.0;
    const Representation reg = finite_representation(g, {shift}, lp_tag(2.0, 6));
    CHECK(reg.norm_bound == Catch::Approx(1.0));
    std::mt19937_64 rng(83);
    const Measure nu = random_probability(g, rng);
    const Matrix lhs = average_operator(reg, nu).mat;
    const Matrix rhs = convolution_operator(nu, g, lp_tag(2.0, 6)).mat;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("transference inequality over a randomized corpus") {
    const FiniteAbelianGroup g({8});
    std::mt19937_64 rng(89);
    for (int trial = 0; trial < 25; ++trial) {
        const Representation pi = random_rep(g, 4, 2.0, rng);
        const Measure nu = random_probability(g, rng);
        const TransferenceRecord rec = transference_check(pi, nu, 2.0);
        CHECK(rec.holds);
        CHECK_FALSE(rec.review); // Hilbert tags on both sides are exact
        CHECK(rec.pi_norm >= 1.0 - 1e-9);
        CHECK(rec.lhs <= rec.rhs + 1e-9);
    }
}

TEST_CASE("transference on a diagonal unitary representation is tight") {
    // pi generated by diag(1, i) on Z_4; S(pi, nu) is diagonal, and the
    // 1-entry of the generator makes lhs equal the convolution norm, so the
    // bound holds with pi_norm = 1 and equality of certificates
    const FiniteAbelianGroup g({4});
    Matrix u = Matrix::Zero(2, 2);
    u(0, 0) = 1.0;
    u(1, 1) = cdouble(0.0, 1.0);
    const Representation pi = finite_representation(g, {u}, lp_tag(2.0, 2));
    CHECK(pi.norm_bound == Catch::Approx(1.0));
    const Measure nu = measure_on(g, {{{0}, 0.5}, {{1}, 0.5}});
    const TransferenceRecord rec = transference_check(pi, nu, 2.0);
    // lhs: diagonal entries (1, (1+i)/2) so the norm is 1; rhs: the symbol
    // values (1+i^k)/2 peak at 1, so the convolution norm is also 1
    CHECK(rec.lhs == Catch::Approx(1.0).margin(1e-12));
    CHECK(rec.rhs == Catch::Approx(1.0).margin(1e-12));
    CHECK(rec.holds);
}

TEST_CASE("powers profile stays under the transferred profile") {
    const FiniteAbelianGroup g({6});
    std::mt19937_64 rng(97);
    const Representation pi = random_rep(g, 3, 2.0, rng);
    const Measure nu = square(random_symmetric(g, rng));
    const auto rows = powers_profile(pi, nu, 12);
    REQUIRE(rows.size() == 12);
    for (const auto& row : rows) {
        CHECK(row.subordinated <= row.convolution_scaled + 1e-9);
        CHECK(row.n >= 1);
    }
}

TEST_CASE("integer representations average power series") {
    std::mt19937_64 rng(101);
    auto [v, d] = random_conjugated_unitary(3, rng);
    const Representation pi = integer_representation(v, d, lp_tag(2.0, 3));
    CHECK(pi.norm_bound >= 1.0 - 1e-9);
    const Measure nu = measure_on_integers({{-1, 0.25}, {0, 0.5}, {2, 0.25}});
    const LinearOperator s = average_operator(pi, nu);
    const Matrix expect = 0.25 * rep_apply_z(pi, -1) + 0.5 * rep_apply_z(pi, 0) +
                          0.25 * rep_apply_z(pi, 2);
    CHECK((s.mat - expect).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(integer_representation(v, 2.0 * d, lp_tag(2.0, 3)), precondition_error);
}
