#include "orthosym/qseries.hpp"

#include <numeric>

namespace orthosym {

JacobiCoeffs as_jacobi(const QSeries& f) {
    JacobiCoeffs out(f.den(), {f.trunc(0), Rational(0)});
    for (const auto& [key, value] : f.terms()) out.set({key[0], 0}, value);
    return out;
}

namespace {

// Phase e(x) for rational x, when it is rational.
std::optional<int> rational_phase(const Rational& x) {
    Rational f = x - Rational(floor_i64(x));
    if (f == 0) return 1;
    if (f == Rational(1, 2)) return -1;
    return std::nullopt;
}

}  // namespace

SiegelCoeffs substitute_siegel(const SiegelCoeffs& F, const SiegelSubstitution& op) {
    using Var = SiegelSubstitution::Var;
    if (op.a <= 0) throw Error(ErrorKind::InvalidArgument, "substitution scale must be positive");

    if (op.var == Var::Z) {
        SiegelCoeffs out(F.den(), F.truncs());
        for (const auto& [key, value] : F.terms()) out.set({key[0], key[1] * op.a, key[2]}, value);
        return out;
    }
    if (op.d <= 0) throw Error(ErrorKind::InvalidArgument, "substitution denominator must be positive");

    const std::size_t var = op.var == Var::Tau ? 0 : 2;
    // New exponent = old * a / d, on a grid of step a / (d * den).
    const Rational step = make_rational(op.a, op.d * F.den());
    const std::int64_t grid = std::lcm(static_cast<std::int64_t>(step.get_den().get_si()),
                                       static_cast<std::int64_t>(F.den()));
    if (grid > 2) throw Error(ErrorKind::InvalidArgument, "substitution needs an exponent denominator above 2");
    const int out_den = static_cast<int>(grid);

    std::array<Rational, 3> trunc = F.truncs();
    trunc[var] = trunc[var] * make_rational(op.a, op.d);
    SiegelCoeffs out(out_den, trunc);
    const SiegelCoeffs src = F.with_den(out_den);
    const std::int64_t src_den = src.den();

    for (const auto& [key, value] : src.terms()) {
        const Rational n = make_rational(key[var], src_den);
        Rational coeff = value;
        if (op.b != 0) {
            const auto phase = rational_phase(n * make_rational(op.b, op.d));
            if (!phase) throw Error(ErrorKind::IrrationalPhase, "phase e(n b / d) is not rational");
            if (*phase < 0) coeff = -coeff;
        }
        auto new_key = key;
        const Rational scaled = n * make_rational(op.a, op.d) * out_den;
        new_key[var] = scaled.get_num().get_si();
        const std::size_t other = var == 0 ? 2 : 0;
        new_key[other] = key[other] * out_den / src_den;
        out.set(new_key, coeff);
    }
    return out.normalized();
}

SiegelCoeffs swap_nm(const SiegelCoeffs& F) {
    SiegelCoeffs out(F.den(), {F.trunc(2), Rational(0), F.trunc(0)});
    for (const auto& [key, value] : F.terms()) out.set({key[2], key[1], key[0]}, value);
    return out;
}

}  // namespace orthosym
