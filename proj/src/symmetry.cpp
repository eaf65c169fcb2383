#include "orthosym/symmetry.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <vector>

#include "orthosym/errors.hpp"

namespace orthosym {

namespace {

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

void require_prime(int p) {
    if (!is_prime(p)) throw Error(ErrorKind::InvalidArgument, "p must be prime");
}

void require_integral(const SiegelSeries& F) {
    if (F.coeffs.den() != 1) throw Error(ErrorKind::InvalidArgument, "series must have integral exponents");
}

void require_cusp_support(const SiegelSeries& F) {
    for (const auto& [key, value] : F.coeffs.terms())
        if (key[0] < 1 || key[2] < 1)
            throw Error(ErrorKind::InvalidArgument, "multiplicative operators need a cusp expansion (n, m >= 1)");
}

SiegelSeries swap_nm(const SiegelSeries& F) { return SiegelSeries{F.weight, orthosym::swap_nm(F.coeffs)}; }

void require_certified(const SiegelSeries& G, const CellRange& range, const char* what) {
    if (Rational(range.n_hi) > G.n_trunc() || Rational(range.m_hi) > G.m_trunc())
        throw Error(ErrorKind::InsufficientTruncation, std::string(what) + " is not certified on the requested range");
}

// Cells of the range in (n, m, r) order. Without explicit r bounds the r
// values are those carrying a nonzero coefficient in either series.
std::vector<Cell> range_cells(const CellRange& range, const SiegelSeries& a, const SiegelSeries& b) {
    if (range.n_lo > range.n_hi || range.m_lo > range.m_hi || (range.r && range.r->first > range.r->second))
        throw Error(ErrorKind::EmptyRange, "comparison range is empty");
    std::vector<Cell> cells;
    for (std::int64_t n = range.n_lo; n <= range.n_hi; ++n) {
        for (std::int64_t m = range.m_lo; m <= range.m_hi; ++m) {
            std::set<std::int64_t> rs;
            if (range.r) {
                for (std::int64_t r = range.r->first; r <= range.r->second; ++r) rs.insert(r);
            } else {
                for (const SiegelSeries* s : {&a, &b}) {
                    const std::int64_t den = s->coeffs.den();
                    for (const auto& [key, value] : s->coeffs.terms())
                        if (key[0] == n * den && key[2] == m * den) rs.insert(key[1]);
                }
            }
            for (std::int64_t r : rs) cells.push_back({Rational(n), Rational(r), Rational(m)});
        }
    }
    return cells;
}

Rational value_at(const SiegelSeries& F, const Cell& c) { return F.coeffs.at({c.n, c.r, c.m}); }

}  // namespace

SiegelSeries hecke_up_additive(const SiegelSeries& F, int p) {
    require_prime(p);
    require_integral(F);
    const Rational pk = pow(Rational(p), static_cast<unsigned>(F.weight - 1));
    SiegelSeries out{F.weight, SiegelCoeffs(1, {F.n_trunc() / p, Rational(0), F.m_trunc()})};
    for (const auto& [key, value] : F.coeffs.terms()) {
        const auto [n, r, m] = key;
        out.coeffs.add_to({p * n, p * r, m}, pk * value);
        if (n % p == 0) out.coeffs.add_to({n / p, r, m}, value);
    }
    return out;
}

SiegelSeries hecke_down_additive(const SiegelSeries& F, int p) { return swap_nm(hecke_up_additive(swap_nm(F), p)); }

SymmetryReport additive_symmetry_test(const SiegelSeries& F, int p, const CellRange& range) {
    const SiegelSeries up = hecke_up_additive(F, p);
    const SiegelSeries down = hecke_down_additive(F, p);
    require_certified(up, range, "up operator");
    require_certified(down, range, "down operator");

    SymmetryReport report;
    report.kind = SymmetryReport::Kind::Additive;
    report.p = p;
    report.range = range;
    const auto cells = range_cells(range, up, down);
    report.matched = true;
    for (const Cell& c : cells) {
        ++report.cells_compared;
        const Rational lhs = value_at(up, c);
        const Rational rhs = value_at(down, c);
        if (lhs != rhs) {
            report.matched = false;
            report.witness = Witness{c, lhs, rhs};
            break;
        }
    }
    return report;
}

SiegelCoeffs tau_norm(const SiegelCoeffs& F, int p) {
    require_prime(p);
    if (F.den() != 1) throw Error(ErrorKind::InvalidArgument, "series must have integral exponents");
    if (p > 5) throw Error(ErrorKind::InvalidArgument, "multisection norm implemented for p <= 5");

    // F((tau+b)/p) = g(zeta_p^b x) with x = q^{1/p}; write g = sum_j x^j G_j(y),
    // y = x^p = q. The product over b is det of multiplication by g on
    // R[x]/(x^p - y) in the basis 1, x, ..., x^{p-1}.
    const Rational N = F.trunc(0);
    std::vector<SiegelCoeffs> parts;
    for (int j = 0; j < p; ++j) {
        // G_j holds the terms with n = j (mod p), exponent (n - j)/p.
        const Rational t = Rational(floor_i64((N - j) / p));
        SiegelCoeffs G(1, {t, Rational(0), F.trunc(2)});
        for (const auto& [key, value] : F.terms()) {
            const std::int64_t n = key[0];
            if (((n - j) % p + p) % p != 0) continue;
            G.set({(n - j) / p, key[1], key[2]}, value);
        }
        parts.push_back(std::move(G));
    }
    // Entry (row, col) = G_{row-col mod p}, times y when row < col.
    auto entry = [&](int row, int col) {
        const int j = ((row - col) % p + p) % p;
        const SiegelCoeffs& G = parts[j];
        if (row >= col) return G;
        SiegelCoeffs shifted(1, {G.trunc(0) + 1, Rational(0), G.trunc(2)});
        for (const auto& [key, value] : G.terms()) shifted.set({key[0] + 1, key[1], key[2]}, value);
        return shifted;
    };

    std::vector<int> perm(p);
    std::iota(perm.begin(), perm.end(), 0);
    std::optional<SiegelCoeffs> det;
    do {
        int inversions = 0;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j)
                if (perm[i] > perm[j]) ++inversions;
        SiegelCoeffs term = entry(0, perm[0]);
        for (int i = 1; i < p; ++i) term = term * entry(i, perm[i]);
        if (inversions % 2 == 1) term = -term;
        det = det ? *det + term : term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return *det;
}

SiegelSeries multiplicative_up(const SiegelSeries& F, int p) {
    require_prime(p);
    require_integral(F);
    require_cusp_support(F);
    using Var = SiegelSubstitution::Var;
    const SiegelCoeffs scaled =
        substitute_siegel(substitute_siegel(F.coeffs, {Var::Tau, p, 0, 1}), {Var::Z, p, 0, 1});
    SiegelCoeffs product(1, {});
    if (p == 2) {
        const SiegelCoeffs half = substitute_siegel(F.coeffs, {Var::Tau, 1, 0, 2});
        const SiegelCoeffs shifted = substitute_siegel(F.coeffs, {Var::Tau, 1, 1, 2});
        product = (scaled * half * shifted).normalized();
    } else {
        product = scaled * tau_norm(F.coeffs, p);
    }
    return SiegelSeries{F.weight * (p + 1), product};
}

SiegelSeries multiplicative_down(const SiegelSeries& F, int p) { return swap_nm(multiplicative_up(swap_nm(F), p)); }

SymmetryReport multiplicative_symmetry_test(const SiegelSeries& F, int p, const CellRange& range) {
    const SiegelSeries up = multiplicative_up(F, p);
    const SiegelSeries down = multiplicative_down(F, p);
    require_certified(up, range, "multiplicative up product");
    require_certified(down, range, "multiplicative down product");

    SymmetryReport report;
    report.kind = SymmetryReport::Kind::Multiplicative;
    report.p = p;
    report.range = range;
    const auto cells = range_cells(range, up, down);

    const auto first_down = std::find_if(cells.begin(), cells.end(), [&](const Cell& c) { return value_at(down, c) != 0; });
    if (first_down == cells.end()) {
        const auto first_up = std::find_if(cells.begin(), cells.end(), [&](const Cell& c) { return value_at(up, c) != 0; });
        if (first_up == cells.end()) throw Error(ErrorKind::BothZeroOnRange, "both products vanish on the range");
        report.matched = false;
        report.cells_compared = static_cast<std::size_t>(first_up - cells.begin()) + 1;
        report.witness = Witness{*first_up, value_at(up, *first_up), Rational(0)};
        return report;
    }

    const Rational eps = value_at(up, *first_down) / value_at(down, *first_down);
    report.epsilon = eps;
    if (eps != 1 && eps != -1) {
        // Real coefficients force a unimodular epsilon to be +-1.
        report.matched = false;
        report.cells_compared = static_cast<std::size_t>(first_down - cells.begin()) + 1;
        report.witness = Witness{*first_down, value_at(up, *first_down), value_at(down, *first_down)};
        return report;
    }
    report.matched = true;
    for (const Cell& c : cells) {
        ++report.cells_compared;
        const Rational lhs = value_at(up, c);
        const Rational rhs = value_at(down, c);
        if (lhs != eps * rhs) {
            report.matched = false;
            report.witness = Witness{c, lhs, rhs};
            break;
        }
    }
    return report;
}

std::map<std::int64_t, std::pair<Rational, Rational>> table_4_r_3(const SiegelSeries& F, std::int64_t r_lo,
                                                                   std::int64_t r_hi) {
    if (F.coeffs.den() != 1 || F.n_trunc() < 3 || F.m_trunc() < 1)
        throw Error(ErrorKind::MissingCoefficients, "need A(n, r, 1) for n <= 3");
    auto A = [&](std::int64_t n, std::int64_t r) { return F.A(n, r, 1); };

    // Nonzero A(n, r, 1) needs 4n > r^2 for cusp forms; scan a safe window.
    std::int64_t rmax = 0;
    for (const auto& [key, value] : F.coeffs.terms())
        if (key[2] == 1 && key[0] <= 3) rmax = std::max(rmax, key[1] < 0 ? -key[1] : key[1]);

    std::map<std::int64_t, std::pair<Rational, Rational>> out;
    for (std::int64_t r = r_lo; r <= r_hi; ++r) {
        Rational up(0), down(0);
        for (std::int64_t r1 = -rmax; r1 <= rmax; ++r1) {
            for (std::int64_t r2 = -rmax; r2 <= rmax; ++r2) {
                const std::int64_t r3 = r - 2 * r1 - r2;
                if (r3 < -rmax || r3 > rmax) continue;
                up += A(1, r1) * (A(2, r2) * A(2, r3) - A(3, r2) * A(1, r3) - A(1, r2) * A(3, r3));
                down -= A(2, r1) * A(1, r2) * A(1, r3) + A(1, r1) * A(2, r2) * A(1, r3) + A(1, r1) * A(1, r2) * A(2, r3);
            }
        }
        out.emplace(r, std::make_pair(up, down));
    }
    return out;
}

CellRange table_range(std::int64_t r_lo, std::int64_t r_hi) {
    CellRange range;
    range.n_lo = range.n_hi = 4;
    range.m_lo = range.m_hi = 3;
    range.r = std::make_pair(r_lo, r_hi);
    return range;
}

}  // namespace orthosym
