#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "helpers.hpp"
#include "orthosym/forms.hpp"

using namespace orthosym;
using testing::error_kind;

TEST_CASE("Bernoulli numbers and polynomials") {
    CHECK(bernoulli(0) == 1);
    CHECK(bernoulli(1) == make_rational(-1, 2));
    CHECK(bernoulli(2) == make_rational(1, 6));
    CHECK(bernoulli(3) == 0);
    CHECK(bernoulli(12) == make_rational(-691, 2730));
    CHECK(bernoulli_polynomial(2, make_rational(1, 3)) == make_rational(-1, 18));
    CHECK(bernoulli_polynomial(5, Rational(0)) == bernoulli(5));
}

TEST_CASE("Kronecker symbol and fundamental discriminants") {
    const std::vector<int> m4 = {1, 0, -1, 0, 1, 0, -1, 0};
    const std::vector<int> p5 = {1, -1, -1, 1, 0, 1, -1, -1};
    for (int n = 1; n <= 8; ++n) {
        CHECK(kronecker(-4, n) == m4[n - 1]);
        CHECK(kronecker(5, n) == p5[n - 1]);
    }
    CHECK(kronecker(-3, 2) == -1);
    CHECK(kronecker(-3, 9) == 0);
    auto split_is = [](std::int64_t D0, std::int64_t D, std::int64_t f) {
        const FundamentalSplit s = fundamental_split(D0);
        return s.D == D && s.f == f;
    };
    CHECK(split_is(-12, -3, 2));
    CHECK(split_is(-16, -4, 2));
    CHECK(split_is(-27, -3, 3));
    CHECK(split_is(8, 8, 1));
    CHECK(generalized_bernoulli(3, -4) == make_rational(3, 2));
    CHECK(generalized_bernoulli(1, -3) == make_rational(-1, 3));
}

TEST_CASE("Cohen's function") {
    // Frozen from an independent rational implementation.
    const std::vector<Rational> h3 = {make_rational(-1, 252), 0, 0, make_rational(-2, 9), make_rational(-1, 2),
                                      0, 0, make_rational(-16, 7), Rational(-3)};
    const std::vector<Rational> h5 = {make_rational(-1, 132), 0, 0, make_rational(2, 3), make_rational(5, 2),
                                      0, 0, Rational(32), Rational(57)};
    for (int N = 0; N <= 8; ++N) {
        CHECK(cohen_H(3, N) == h3[N]);
        CHECK(cohen_H(5, N) == h5[N]);
    }
    CHECK(cohen_H(3, -1) == 0);
    const CohenTable t = CohenTable::compute(3, 8);
    CHECK(t.values.at(7) == make_rational(-16, 7));
}

TEST_CASE("Eisenstein series") {
    const QSeries E4 = eisenstein(4, 4), E6 = eisenstein(6, 4);
    CHECK(E4.at({Rational(0)}) == 1);
    CHECK(E4.at({Rational(1)}) == 240);
    CHECK(E4.at({Rational(2)}) == 2160);
    CHECK(E6.at({Rational(1)}) == -504);
    CHECK(E6.at({Rational(2)}) == -16632);
    CHECK(error_kind([] { eisenstein(3, 2); }) == ErrorKind::UnsupportedWeight);
    CHECK(error_kind([] { eisenstein(2, 2); }) == ErrorKind::UnsupportedWeight);

    // E4(tau) = 1/2 sum over coprime (c, d) of (c tau + d)^-4, summed directly.
    const std::complex<double> tau(0.1, 0.9);
    std::complex<double> lattice_sum = 0;
    const int box = 400;
    for (int c = -box; c <= box; ++c)
        for (int d = -box; d <= box; ++d)
            if (std::gcd(c, d) == 1) lattice_sum += std::pow(static_cast<double>(c) * tau + static_cast<double>(d), -4);
    lattice_sum /= 2.0;
    const QSeries E4long = eisenstein(4, 40);
    const std::complex<double> q = std::exp(std::complex<double>(0, 2 * std::numbers::pi) * tau);
    std::complex<double> series = 0;
    for (const auto& [key, value] : E4long.terms()) series += value.get_d() * std::pow(q, key[0]);
    CHECK(std::abs(series - lattice_sum) < 1e-6);
}

TEST_CASE("Jacobi Eisenstein series") {
    const JacobiSeries E41 = jacobi_eisenstein(4, 2), E61 = jacobi_eisenstein(6, 2);
    CHECK(E41.c(0, 0) == 1);
    CHECK(E41.c(1, 1) == 56);
    CHECK(E41.c(1, 0) == 126);
    CHECK(E41.c(1, 2) == 1);
    CHECK(E41.c(2, 0) == 756);
    CHECK(E41.c(2, 1) == 576);
    CHECK(E61.c(1, 0) == -330);
    CHECK(E61.c(1, 1) == -88);
    CHECK(E61.c(1, -2) == 1);
    CHECK(error_kind([] { jacobi_eisenstein(8, 2); }) == ErrorKind::UnsupportedWeight);
}

TEST_CASE("cusp forms phi_{10,1}, phi_{12,1}") {
    const JacobiSeries p10 = phi_cusp(10, 3), p12 = phi_cusp(12, 3);
    CHECK(p10.c(1, 1) == 1);
    CHECK(p10.c(1, 0) == -2);
    CHECK(p10.c(2, 0) == 36);
    CHECK(p10.c(3, 0) == -272);
    CHECK(p12.c(1, 0) == 10);
    CHECK(p12.c(3, 1) == 1275);
    // c(n, r) depends only on 4n - r^2 (index 1) and on r mod 2.
    CHECK(p10.c(3, 2) == p10.c(2, 0));
    CHECK(p12.c(3, 3) == p12.c(1, 1));
    CHECK(error_kind([] { phi_cusp(8, 2); }) == ErrorKind::UnsupportedWeight);
}

TEST_CASE("Saito-Kurokawa lifts") {
    const SiegelSeries chi10 = chi_form(10, 3, 3), chi12 = chi_form(12, 3, 3);
    CHECK(chi10.weight == 10);
    CHECK(chi10.A(1, 1, 1) == 1);
    CHECK(chi10.A(1, 0, 1) == -2);
    CHECK(chi10.A(2, 2, 2) == 240);
    CHECK(chi10.A(2, 0, 2) == 32);
    CHECK(chi10.A(3, 1, 2) == 2736);
    CHECK(chi10.A(3, 3, 3) == 15399);
    CHECK(chi12.A(1, 0, 1) == 10);
    CHECK(chi12.A(2, 2, 2) == 2784);
    CHECK(chi12.A(2, 0, 2) == 17600);
    CHECK(chi12.A(3, 1, 2) == -14136);
    CHECK(chi12.A(3, 3, 3) == 48303);
    // Support: 4nm > r^2 and n, m >= 1.
    for (const auto& [key, value] : chi12.coeffs.terms()) {
        CHECK(key[0] >= 1);
        CHECK(key[2] >= 1);
        CHECK(4 * key[0] * key[2] > key[1] * key[1]);
    }
    for (int k : {10, 12}) {
        const SiegelSeries F = chi_form(k, 4, 4);
        CHECK(swap_nm(F.coeffs) == F.coeffs);
        for (const auto& [key, value] : F.coeffs.terms()) CHECK(F.coeffs.coeff({key[0], -key[1], key[2]}) == value);
    }
    CHECK(error_kind([] { sk_lift(phi_cusp(10, 3), 2, 2); }) == ErrorKind::InsufficientTruncation);
    JacobiSeries idx2 = phi_cusp(10, 4);
    idx2.index = 2;
    CHECK(error_kind([&] { sk_lift(idx2, 2, 2); }) == ErrorKind::IndexNotOne);
}

TEST_CASE("catalogue") {
    const FormsCatalogue c = FormsCatalogue::build(3);
    CHECK(c.phi121.c(3, 0) == 736);
    CHECK(c.E6.at({Rational(3)}) == -122976);
}
