#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "orthosym/qseries.hpp"

using namespace orthosym;
using testing::error_kind;

namespace {

SiegelCoeffs random_siegel(std::mt19937_64& rng, int den = 1) {
    std::uniform_int_distribution<int> coef(-9, 9), e(0, 4), r(-3, 3);
    SiegelCoeffs s(den, {Rational(4), Rational(0), Rational(4)});
    for (int i = 0; i < 6; ++i) s.add_to({e(rng) * den, r(rng), e(rng) * den}, make_rational(coef(rng), 1 + e(rng)));
    return s;
}

QSeries random_q(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coef(-9, 9), e(0, 6);
    QSeries s(1, {Rational(6)});
    for (int i = 0; i < 5; ++i) s.add_to({e(rng)}, Rational(coef(rng)));
    return s;
}

// Equal on the common certified range. Cancellation can raise the minimal
// exponent of a factor, so two bracketings may certify different ranges.
template <std::size_t Vars>
bool agree(const Series<Vars>& a, const Series<Vars>& b) {
    const int den = std::max(a.den(), b.den());
    std::array<Rational, Vars> t{};
    for (std::size_t i = 0; i < Vars; ++i) t[i] = std::min(a.trunc(i), b.trunc(i));
    return a.with_den(den).truncated(t).terms() == b.with_den(den).truncated(t).terms();
}

}  // namespace

TEST_CASE("ring axioms on random series") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        const QSeries a = random_q(rng), b = random_q(rng), c = random_q(rng);
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * b == b * a);
        CHECK(agree((a * b) * c, a * (b * c)));
        CHECK(agree(a * (b + c), a * b + a * c));
        CHECK((a - a).is_zero());
        QSeries one(1, {Rational(6)});
        one.set({0}, Rational(1));
        CHECK(a * one == a);

        const SiegelCoeffs x = random_siegel(rng), y = random_siegel(rng), z = random_siegel(rng);
        CHECK(x * y == y * x);
        CHECK(agree((x * y) * z, x * (y * z)));
        CHECK(agree(x * (y + z), x * y + x * z));
    }
}

TEST_CASE("truncation bookkeeping") {
    QSeries a(1, {Rational(5)});
    a.set({2}, Rational(1));  // q^2 + O(q^6)
    QSeries b(1, {Rational(3)});
    b.set({0}, Rational(1));  // 1 + O(q^4)
    const QSeries p = a * b;
    CHECK(p.trunc(0) == 5);  // min(5 + 0, 3 + 2)
    CHECK(p.at({Rational(2)}) == 1);
    CHECK(error_kind([&] { p.at({Rational(6)}); }) == ErrorKind::InsufficientTruncation);
    CHECK(error_kind([&] { a.set({7}, Rational(1)); }) == ErrorKind::InvalidArgument);

    QSeries neg(1, {Rational(-2)});
    CHECK(error_kind([&] { neg * neg; }) == ErrorKind::TruncationUnderflow);
}

TEST_CASE("substitution") {
    std::mt19937_64 rng(29);
    using Var = SiegelSubstitution::Var;
    for (int trial = 0; trial < 10; ++trial) {
        const SiegelCoeffs f = random_siegel(rng), g = random_siegel(rng);
        for (SiegelSubstitution op : {SiegelSubstitution{Var::Tau, 2, 0, 1}, SiegelSubstitution{Var::Z, 2, 0, 1},
                                      SiegelSubstitution{Var::Tau, 1, 1, 2}, SiegelSubstitution{Var::TauPrime, 1, 0, 2}}) {
            CHECK(agree(substitute_siegel(f * g, op), substitute_siegel(f, op) * substitute_siegel(g, op)));
        }
        CHECK(swap_nm(swap_nm(f)) == f);
        CHECK(agree(swap_nm(f * g), swap_nm(f) * swap_nm(g)));
    }
    // tau -> (tau + 1)/2 gives the phase (-1)^n.
    SiegelCoeffs f(1, {Rational(3), Rational(0), Rational(3)});
    f.set({1, 0, 1}, Rational(5));
    f.set({2, 1, 1}, Rational(7));
    const SiegelCoeffs h = substitute_siegel(f, {Var::Tau, 1, 1, 2});
    CHECK(h.den() == 2);
    CHECK(h.coeff({1, 0, 2}) == -5);
    CHECK(h.coeff({2, 1, 2}) == 7);
    CHECK(h.trunc(0) == make_rational(3, 2));
    CHECK(error_kind([&] { substitute_siegel(f, {Var::Tau, 1, 1, 3}); }) == ErrorKind::InvalidArgument);
    // tau -> tau + 1/2 on q^{1/2} has phase e(1/4).
    SiegelCoeffs half(2, {Rational(2), Rational(0), Rational(2)});
    half.set({1, 0, 2}, Rational(1));
    CHECK(error_kind([&] { substitute_siegel(half, {Var::Tau, 2, 1, 2}); }) == ErrorKind::IrrationalPhase);
}

TEST_CASE("JSON round trip") {
    std::mt19937_64 rng(31);
    const SiegelCoeffs f = random_siegel(rng);
    CHECK(series_from_json<3>(to_json(f)) == f);
    const QSeries q = random_q(rng);
    CHECK(series_from_json<1>(nlohmann::json::parse(to_json(q).dump())) == q);
}
