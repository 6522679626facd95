#include <catch_amalgamated.hpp>

#include <random>

#include "rittkit/corpus.hpp"
#include "rittkit/operators.hpp"

using namespace rittkit;

TEST_CASE("convolution operator spectrum equals the symbol") {
    const FiniteAbelianGroup g({8});
    std::mt19937_64 rng(41);
    const Measure nu = random_probability(g, rng);
    const LinearOperator c = convolution_operator(nu, g, lp_tag(2.0, 8));
    const Symbol s = fourier_symbol(nu);
    std::vector<double> eig_abs, sym_abs;
    for (cdouble l : spectrum(c)) eig_abs.push_back(std::abs(l));
    for (cdouble v : s.values) sym_abs.push_back(std::abs(v));
    std::sort(eig_abs.begin(), eig_abs.end());
    std::sort(sym_abs.begin(), sym_abs.end());
    for (std::size_t i = 0; i < 8; ++i) CHECK(eig_abs[i] == Catch::Approx(sym_abs[i]).margin(1e-10));
    // the norm on l^2 is the largest symbol modulus
    CHECK(operator_norm(c).value == Catch::Approx(sym_abs.back()).margin(1e-10));
}

TEST_CASE("shift on Z_4 has fourth roots of unity as spectrum and is not Ritt") {
    const FiniteAbelianGroup g({4});
    const LinearOperator t = convolution_operator(dirac(g, {1}), g, lp_tag(2.0, 4));
    const std::vector<cdouble> eig = spectrum(t);
    for (cdouble root : {cdouble(1.0, 0.0), cdouble(0.0, 1.0), cdouble(-1.0, 0.0),
                         cdouble(0.0, -1.0)}) {
        double nearest = 1e30;
        for (cdouble l : eig) nearest = std::min(nearest, std::abs(l - root));
        CHECK(nearest < 1e-9);
    }

    const RittReport rep = ritt_constants(t, 16);
    CHECK(rep.verdict == RittVerdict::not_ritt);
    CHECK_FALSE(rep.gamma_star_ok);
    CHECK(std::abs(std::abs(rep.witness) - 1.0) < 1e-9);
    // n ||T^n - T^{n-1}|| = 2n for the unitary shift (difference of two
    // permutations with disjoint fixed parts has norm 2)
    CHECK(rep.c1 == Catch::Approx(32.0).margin(1e-9));
}

TEST_CASE("identity and zero operators") {
    const NormTag tag = lp_tag(2.0, 3);
    const RittReport id = ritt_constants(LinearOperator(identity(3), tag), 8);
    CHECK(id.c1 == Catch::Approx(0.0).margin(1e-12));
    CHECK(id.verdict == RittVerdict::ritt_certified);
    CHECK(id.gamma_star == Catch::Approx(0.0).margin(1e-12));

    const RittReport zero = ritt_constants(LinearOperator(Matrix::Zero(3, 3), tag), 8);
    CHECK(zero.c1 == Catch::Approx(1.0).margin(1e-12)); // n = 1 term: ||0 - I|| = 1
    CHECK(zero.verdict == RittVerdict::ritt_certified);
}

TEST_CASE("exact circulant Ritt constant matches brute force over a long horizon") {
    const FiniteAbelianGroup g({6});
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const Measure eta = random_symmetric(g, rng);
        const Measure nu = square(eta);
        const LinearOperator t = convolution_operator(nu, g, lp_tag(2.0, 6));
        const RittReport rep = ritt_constants(t, 4);
        REQUIRE(rep.tail_certified);

        double brute = 0.0;
        Matrix prev = identity(6);
        for (std::int64_t n = 1; n <= 2000; ++n) {
            const Matrix cur = prev * t.mat;
            brute = std::max(brute,
                             static_cast<double>(n) * detail::spectral_norm(cur - prev));
            prev = cur;
        }
        CHECK(rep.c1 >= brute - 1e-9);
        CHECK(rep.c1 <= brute + 1e-6);
        // symbol in [0,1] keeps the constant at most 1
        CHECK(rep.c1 <= 1.0 + 1e-9);
    }
}

TEST_CASE("resolvent constant on reference operators") {
    const NormTag tag = lp_tag(2.0, 2);
    // T = 0: (z - T)^{-1} = z^{-1} I, quotient |z-1|/|z| maximized near the
    // far side of the unit circle: sup over |z| > 1 approaches 2
    const double k0 = resolvent_constant(LinearOperator(Matrix::Zero(2, 2), tag), 30, 256);
    CHECK(k0 == Catch::Approx(2.0).margin(1e-2));
    CHECK(k0 <= 2.0 + 1e-9);

    // T = I: quotient is identically 1
    const double k1 = resolvent_constant(LinearOperator(identity(2), tag), 30, 256);
    CHECK(k1 == Catch::Approx(1.0).margin(1e-9));

    Matrix big = 2.0 * identity(2);
    CHECK_THROWS_AS(resolvent_constant(LinearOperator(big, tag)), precondition_error);
}

TEST_CASE("sectorial constant needs the spectrum inside the sector") {
    const NormTag tag = lp_tag(2.0, 2);
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = cdouble(1.0, 1.0); // argument pi/4
    a(1, 1) = 0.5;
    const LinearOperator op(a, tag);
    CHECK_THROWS_AS(sectorial_constant(op, 0.5), precondition_error);
    const double k = sectorial_constant(op, 1.0, 24, 48);
    CHECK(k >= 1.0 - 1e-9);
    CHECK(std::isfinite(k));
}

TEST_CASE("square check inequality on random symmetric chains") {
    const FiniteAbelianGroup g({5});
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 10; ++trial) {
        const Measure eta = random_symmetric(g, rng);
        const LinearOperator c = convolution_operator(eta, g, lp_tag(2.0, 5));
        const SquareCheck chk = ritt_from_square_check(c, 24);
        CHECK(chk.inequality_holds);
        CHECK(chk.max_slack <= 1e-9);
        CHECK(chk.inv_norm >= 0.5 - 1e-9); // ||I + T|| <= 2 forces this
    }
    // -1 in the spectrum blocks the factorization
    const FiniteAbelianGroup z2({2});
    const LinearOperator shift = convolution_operator(dirac(z2, {1}), z2, lp_tag(2.0, 2));
    CHECK_THROWS_AS(ritt_from_square_check(shift, 4), precondition_error);
}

TEST_CASE("operator construction guards") {
    CHECK_THROWS_AS(LinearOperator(Matrix::Zero(2, 3), lp_tag(2.0, 2)), structural_error);
    CHECK_THROWS_AS(LinearOperator(Matrix::Zero(4, 4), lp_tag(2.0, 2)), structural_error);
    const FiniteAbelianGroup g({3});
    CHECK_THROWS_AS(convolution_operator(dirac_z(0), g, lp_tag(2.0, 3)), structural_error);
    CHECK_THROWS_AS(convolution_operator(dirac(g, {0}), g, lp_tag(2.0, 4)), structural_error);
}
