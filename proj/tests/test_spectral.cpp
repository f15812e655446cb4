#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "br/spectral.hpp"
#include "test_helpers.hpp"

using namespace br;
using brtest::random_polynomial;

namespace {

GridFunction sample1d(int N, double (*f)(double)) {
    return GridFunction::sample(1, N, [&](std::span<const double> x) { return f(x[0]); });
}

cd coeff(const SpectralPolynomial& T, std::initializer_list<int> idx) {
    std::vector<int> m(idx);
    return T.at(m);
}

}  // namespace

TEST_CASE("analyze recovers constant, single mode, mixed modes") {
    auto c1 = analyze(sample1d(16, [](double) { return 1.0; }), 2);
    CHECK(std::abs(coeff(c1, {0}) - cd(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(coeff(c1, {1})) < 1e-14);
    CHECK(std::abs(coeff(c1, {2})) < 1e-14);

    auto cc = analyze(sample1d(16, [](double x) { return std::cos(x); }), 2);
    CHECK(std::abs(coeff(cc, {1}) - cd(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(coeff(cc, {-1}) - cd(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(coeff(cc, {0})) < 1e-14);
    CHECK(std::abs(coeff(cc, {2})) < 1e-14);

    auto cm = analyze(sample1d(32, [](double x) { return std::cos(x) + std::sin(2 * x); }), 3);
    CHECK(std::abs(coeff(cm, {1}) - cd(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(coeff(cm, {-1}) - cd(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(coeff(cm, {2}) - cd(0.0, -0.5)) < 1e-14);
    CHECK(std::abs(coeff(cm, {-2}) - cd(0.0, 0.5)) < 1e-14);
    CHECK(std::abs(coeff(cm, {3})) < 1e-14);
}

TEST_CASE("synthesize: constant, single mode, preconditions") {
    SpectralPolynomial one(1, 0);
    one.set(std::vector<int>{0}, cd(1.0, 0.0));
    auto g = synthesize(one, 8);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i] == doctest::Approx(1.0).epsilon(1e-14));

    SpectralPolynomial cosx(1, 1);
    cosx.set(std::vector<int>{1}, cd(0.5, 0.0));
    cosx.set(std::vector<int>{-1}, cd(0.5, 0.0));
    auto gc = synthesize(cosx, 8);
    for (std::size_t i = 0; i < gc.size(); ++i)
        CHECK(gc[i] == doctest::Approx(std::cos(two_pi * static_cast<double>(i) / 8.0)).epsilon(1e-13));

    CHECK_THROWS_AS(synthesize(cosx, 3), resolution_too_small);
    CHECK_THROWS_AS(analyze(GridFunction(1, 8), 4), resolution_too_small);
}

TEST_CASE("synthesize rejects non-Hermitian coefficients") {
    SpectralPolynomial bad(1, 1);
    bad.set(std::vector<int>{1}, cd(0.0, 1.0));
    bad.set(std::vector<int>{-1}, cd(0.0, 1.0));  // conj would be -i
    CHECK_THROWS_AS(synthesize(bad, 8), symmetry_violation);
}

TEST_CASE("round-trip analyze(synthesize(T)) = T for random T in T_4, d=2") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 5; ++trial) {
        auto T = random_polynomial(2, 4, rng);
        auto back = analyze(synthesize(T, 12), 4);
        double max_diff = 0.0, scale = T.max_abs_coeff();
        for (std::size_t i = 0; i < T.box_size(); ++i)
            max_diff = std::max(max_diff, std::abs(back.coeff_flat(i) - T.coeff_flat(i)));
        CHECK(max_diff < 1e-12 * scale);
    }
}

TEST_CASE("lp_norm: constants, cos, homogeneity, max") {
    auto one = sample1d(32, [](double) { return 1.0; });
    CHECK(lp_norm(one, Exponent(2)) == doctest::Approx(std::sqrt(two_pi)).epsilon(1e-12));

    auto c = sample1d(32, [](double) { return -3.0; });
    for (double p : {0.5, 1.0, 2.0, 7.0})
        CHECK(lp_norm(c, Exponent(p)) == doctest::Approx(3.0 * std::pow(two_pi, 1.0 / p)).epsilon(1e-12));
    CHECK(lp_norm(c, Exponent::infinity()) == doctest::Approx(3.0));

    auto cosg = sample1d(64, [](double x) { return std::cos(x); });
    CHECK(lp_norm(cosg, Exponent(2)) == doctest::Approx(std::sqrt(pi)).epsilon(1e-10));
    CHECK(lp_norm(cosg, Exponent::infinity()) == doctest::Approx(1.0).epsilon(1e-14));

    // exact absolute homogeneity
    const double a = lp_norm(cosg, Exponent(0.7));
    GridFunction scaled(1, 64);
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = 2.0 * cosg[i];
    CHECK(lp_norm(scaled, Exponent(0.7)) == doctest::Approx(2.0 * a).epsilon(1e-15));
}

TEST_CASE("double_norm: constant, separation, zero") {
    BiGridFunction F(1, 16);
    for (std::size_t l = 0; l < 16; ++l)
        for (std::size_t x = 0; x < 16; ++x) F.at(x, l) = 1.0;
    CHECK(double_norm(F, Exponent(2)) == doctest::Approx(two_pi).epsilon(1e-12));
    CHECK(double_norm(F, Exponent::infinity()) == doctest::Approx(1.0));

    BiGridFunction C(1, 32);
    for (std::size_t l = 0; l < 32; ++l)
        for (std::size_t x = 0; x < 32; ++x) C.at(x, l) = std::cos(two_pi * static_cast<double>(x) / 32.0);
    CHECK(double_norm(C, Exponent(2)) == doctest::Approx(std::sqrt(pi) * std::sqrt(two_pi)).epsilon(1e-12));

    BiGridFunction Z(1, 8);
    CHECK(double_norm(Z, Exponent(0.5)) == 0.0);
}

TEST_CASE("fractional_laplacian: modes scale by |k|^beta") {
    SpectralPolynomial cosx(1, 2);
    cosx.set(std::vector<int>{1}, cd(0.5, 0.0));
    cosx.set(std::vector<int>{-1}, cd(0.5, 0.0));
    auto l2 = fractional_laplacian(cosx, 2.0);
    CHECK(std::abs(coeff(l2, {1}) - cd(0.5, 0.0)) < 1e-15);

    SpectralPolynomial cos2x(1, 2);
    cos2x.set(std::vector<int>{2}, cd(0.5, 0.0));
    cos2x.set(std::vector<int>{-2}, cd(0.5, 0.0));
    auto l1 = fractional_laplacian(cos2x, 1.0);
    CHECK(std::abs(coeff(l1, {2}) - cd(1.0, 0.0)) < 1e-15);

    SpectralPolynomial diag(2, 2);
    diag.set(std::vector<int>{1, 1}, cd(0.5, 0.0));
    diag.set(std::vector<int>{-1, -1}, cd(0.5, 0.0));
    auto l3 = fractional_laplacian(diag, 3.0);
    CHECK(std::abs(coeff(l3, {1, 1}) - cd(0.5 * std::pow(2.0, 1.5), 0.0)) < 1e-14);

    // k = 0 annihilated
    SpectralPolynomial with_mean(1, 1);
    with_mean.set(std::vector<int>{0}, cd(7.0, 0.0));
    CHECK(std::abs(fractional_laplacian(with_mean, 0.5).coeff_flat(1)) == 0.0);
}

TEST_CASE("apply_multiplier: identity, Riesz value, laplacian agreement, symmetry check") {
    std::mt19937_64 rng(99);
    auto T = random_polynomial(1, 3, rng);

    auto id = apply_multiplier(T, Symbol::radial([](double) { return 1.0; }), 5);
    for (std::size_t i = 0; i < T.box_size(); ++i)
        CHECK(std::abs(id.coeff_flat(i) - T.coeff_flat(i)) < 1e-15);

    SpectralPolynomial cosx(1, 1);
    cosx.set(std::vector<int>{1}, cd(0.5, 0.0));
    cosx.set(std::vector<int>{-1}, cd(0.5, 0.0));
    auto damped = apply_multiplier(
        cosx, Symbol::radial([](double r) { return std::max(0.0, 1.0 - r * r); }), 2);
    CHECK(std::abs(coeff(damped, {1}) - cd(3.0 / 8.0, 0.0)) < 1e-15);

    auto viaMult = apply_multiplier(T, Symbol::radial([](double r) { return std::pow(r, 1.7); }), 1);
    auto viaLap = fractional_laplacian(T, 1.7);
    for (std::size_t i = 0; i < T.box_size(); ++i)
        CHECK(std::abs(viaMult.coeff_flat(i) - viaLap.coeff_flat(i)) < 1e-14);

    Symbol odd{[](std::span<const double> x) { return x[0]; }, "odd"};
    CHECK_THROWS_AS(apply_multiplier(T, odd, 2), symmetry_violation);
}

TEST_CASE("Parseval: ||T||_2^2 = (2 pi)^d sum |c_k|^2") {
    std::mt19937_64 rng(7);
    for (int d : {1, 2}) {
        auto T = random_polynomial(d, 4, rng);
        double sum = 0.0;
        for (std::size_t i = 0; i < T.box_size(); ++i) sum += std::norm(T.coeff_flat(i));
        const double want = std::sqrt(std::pow(two_pi, d) * sum);
        CHECK(lp_norm(T, Exponent(2)) == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("translation equivariance: grid shift multiplies coefficients by e^{i k a}") {
    std::mt19937_64 rng(21);
    auto T = random_polynomial(1, 5, rng);
    const int N = 32, shift = 3;
    const double a = two_pi * shift / N;
    auto g = synthesize(T, N);
    GridFunction shifted(1, N);
    for (int j = 0; j < N; ++j) shifted[static_cast<std::size_t>(j)] = g[static_cast<std::size_t>((j + shift) % N)];
    auto cs = analyze(shifted, 5);
    for (int k = -5; k <= 5; ++k) {
        std::vector<int> m{k};
        const cd want = T.at(m) * std::polar(1.0, k * a);
        CHECK(std::abs(cs.at(m) - want) < 1e-12 * std::max(1.0, T.max_abs_coeff()));
    }
}

TEST_CASE("radial multipliers keep grids real") {
    std::mt19937_64 rng(31);
    auto T = random_polynomial(2, 3, rng);
    auto M = apply_multiplier(T, Symbol::radial([](double r) { return std::exp(-r); }), 3);
    // synthesize asserts the imaginary residue internally
    auto g = synthesize(M, 12);
    CHECK(std::isfinite(g[0]));
}

TEST_CASE("exponent variant behavior") {
    CHECK_THROWS_AS(Exponent(0.0), bad_config);
    CHECK_THROWS_AS(Exponent(-2.0), bad_config);
    CHECK(Exponent::infinity().is_inf());
    CHECK(Exponent::infinity().inv() == 0.0);
    CHECK(Exponent(0.5).pstar() == 0.5);
    CHECK(Exponent(3.0).pstar() == 1.0);
}

TEST_CASE("polynomial point evaluation matches synthesis") {
    std::mt19937_64 rng(55);
    auto T = random_polynomial(2, 3, rng);
    auto g = synthesize(T, 16);
    std::vector<double> x(2);
    for (std::size_t flat : {std::size_t(0), std::size_t(37), std::size_t(200)}) {
        g.node(flat, x);
        CHECK(T.eval(x) == doctest::Approx(g[flat]).epsilon(1e-11));
    }
}
