#include <doctest.h>

#include "helpers.hpp"
#include "orthosym/forms.hpp"
#include "orthosym/symmetry.hpp"

using namespace orthosym;
using testing::error_kind;

TEST_CASE("(4, r, 3) tables") {
    const auto t10 = table_4_r_3(chi_form(10, 3, 3));
    const std::vector<long> v10 = {-552, 216, 222, -212};
    const auto t12 = table_4_r_3(chi_form(12, 3, 3));
    const std::vector<long> up12 = {143304, -59112, 65310, -20396}, down12 = {43512, 26424, 11850, 3364};
    for (int r = 0; r <= 3; ++r) {
        CHECK(t10.at(r).first == v10[r]);
        CHECK(t10.at(r).second == v10[r]);
        CHECK(t12.at(r).first == up12[r]);
        CHECK(t12.at(r).second == down12[r]);
    }
    SiegelSeries shallow = chi_form(10, 2, 2);
    CHECK(error_kind([&] { table_4_r_3(shallow); }) == ErrorKind::MissingCoefficients);
}

TEST_CASE("multiplicative test reproduces the (4, r, 3) verdicts") {
    const auto r10 = multiplicative_symmetry_test(chi_form(10, 3, 3), 2, table_range());
    CHECK(r10.matched);
    REQUIRE(r10.epsilon);
    CHECK(*r10.epsilon == 1);
    const auto r12 = multiplicative_symmetry_test(chi_form(12, 3, 3), 2, table_range());
    CHECK_FALSE(r12.matched);
    REQUIRE(r12.witness);
    CHECK(r12.witness->cell == Cell{4, 0, 3});
    CHECK(r12.witness->lhs == 143304);
    CHECK(r12.witness->rhs == 43512);
}

TEST_CASE("general convolution agrees with the fast path") {
    for (int k : {10, 12}) {
        const SiegelSeries F = chi_form(k, 3, 3);
        const SiegelSeries up = multiplicative_up(F, 2), down = multiplicative_down(F, 2);
        CHECK(up.weight == 3 * k);
        for (const auto& [r, ud] : table_4_r_3(F, -9, 9)) {
            CHECK(up.A(4, r, 3) == ud.first);
            CHECK(down.A(4, r, 3) == ud.second);
        }
    }
}

TEST_CASE("multisection norm agrees with the half-integral product for p = 2") {
    using Var = SiegelSubstitution::Var;
    const SiegelSeries F = chi_form(10, 4, 3);
    const SiegelCoeffs half = substitute_siegel(F.coeffs, {Var::Tau, 1, 0, 2});
    const SiegelCoeffs shifted = substitute_siegel(F.coeffs, {Var::Tau, 1, 1, 2});
    const SiegelCoeffs direct = (half * shifted).normalized();
    const SiegelCoeffs norm = tau_norm(F.coeffs, 2);
    REQUIRE(direct.den() == 1);
    const auto common = std::min(direct.trunc(0), norm.trunc(0));
    CHECK(direct.truncated({common, Rational(0), direct.trunc(2)}) ==
          norm.truncated({common, Rational(0), direct.trunc(2)}));
}

TEST_CASE("odd p multiplicative symmetry of chi_10") {
    // Both products start at q^4 q'^4 for p = 3.
    const SiegelSeries F = chi_form(10, 4, 4);
    CellRange range;
    range.n_lo = range.m_lo = 4;
    range.n_hi = range.m_hi = 4;
    const auto rep = multiplicative_symmetry_test(F, 3, range);
    CHECK(rep.matched);
    REQUIRE(rep.epsilon);
    CHECK((*rep.epsilon == 1 || *rep.epsilon == -1));
}

TEST_CASE("Maass additive symmetry") {
    for (int k : {10, 12}) {
        for (int p : {2, 3, 5}) {
            CellRange range;
            range.n_hi = range.m_hi = 3;
            const auto rep = additive_symmetry_test(chi_form(k, 3 * p, 3 * p), p, range);
            CHECK(rep.matched);
            CHECK(rep.cells_compared > 0);
        }
    }
}

TEST_CASE("additive operators: duality and a single term") {
    const SiegelSeries F = chi_form(12, 6, 6);
    for (int p : {2, 3}) {
        // B(n, r, m) = p^{k-1} A(n, r/p, m/p) [p | r, p | m] + A(n, r, pm), and the mirror for up.
        const SiegelSeries up = hecke_up_additive(F, p), down = hecke_down_additive(F, p);
        const Rational pk = pow(Rational(p), 11);
        for (std::int64_t n = 1; n <= 6 / p; ++n) {
            for (std::int64_t m = 1; m <= 6 / p; ++m) {
                for (std::int64_t r = -8; r <= 8; ++r) {
                    Rational d = F.A(n, r, p * m), u = F.A(p * n, r, m);
                    if (r % p == 0 && m % p == 0) d += pk * F.A(n, r / p, m / p);
                    if (r % p == 0 && n % p == 0) u += pk * F.A(n / p, r / p, m);
                    CHECK(down.A(n, r, m) == d);
                    CHECK(up.A(n, r, m) == u);
                }
            }
        }
    }
    // q zeta q' alone is not in the Maass space: up puts 2^9 at (2, 2, 1),
    // down at (1, 2, 2), and (1, 2, 2) comes first in (n, m, r) order.
    SiegelSeries single{10, SiegelCoeffs(1, {Rational(4), Rational(0), Rational(4)})};
    single.coeffs.set({1, 1, 1}, Rational(1));
    CHECK(hecke_up_additive(single, 2).A(2, 2, 1) == 512);
    CHECK(hecke_down_additive(single, 2).A(1, 2, 2) == 512);
    CellRange range;
    range.n_hi = range.m_hi = 2;
    const auto rep = additive_symmetry_test(single, 2, range);
    CHECK_FALSE(rep.matched);
    REQUIRE(rep.witness);
    CHECK(rep.witness->cell == Cell{1, 2, 2});
    CHECK(rep.witness->lhs == 0);
    CHECK(rep.witness->rhs == 512);
}

TEST_CASE("symmetry errors") {
    const SiegelSeries F = chi_form(10, 3, 3);
    CellRange too_far;
    too_far.n_hi = too_far.m_hi = 3;
    CHECK(error_kind([&] { additive_symmetry_test(F, 2, too_far); }) == ErrorKind::InsufficientTruncation);
    CellRange empty;
    empty.n_lo = 2;
    empty.n_hi = 1;
    CHECK(error_kind([&] { additive_symmetry_test(chi_form(10, 6, 6), 2, empty); }) == ErrorKind::EmptyRange);
    SiegelSeries zero{10, SiegelCoeffs(1, {Rational(8), Rational(0), Rational(8)})};
    zero.coeffs.set({3, 0, 3}, Rational(1));
    CellRange low;
    low.n_hi = low.m_hi = 1;
    CHECK(error_kind([&] { multiplicative_symmetry_test(zero, 2, low); }) == ErrorKind::BothZeroOnRange);
    CHECK(error_kind([&] { hecke_up_additive(F, 4); }) == ErrorKind::InvalidArgument);
}
