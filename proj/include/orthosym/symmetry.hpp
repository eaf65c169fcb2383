#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>

#include "orthosym/qseries.hpp"

namespace orthosym {

/// Exponent triple (n, r, m) of a Siegel coefficient.
struct Cell {
    Rational n, r, m;
    friend bool operator==(const Cell&, const Cell&) = default;
};

/// Cells n_lo <= n <= n_hi, m_lo <= m <= m_hi (integral). Without explicit r
/// bounds every r carrying a nonzero coefficient on either side is compared.
struct CellRange {
    std::int64_t n_lo = 1, n_hi = 1;
    std::int64_t m_lo = 1, m_hi = 1;
    std::optional<std::pair<std::int64_t, std::int64_t>> r;
};

struct Witness {
    Cell cell;
    Rational lhs;
    Rational rhs;
};

struct SymmetryReport {
    enum class Kind { Additive, Multiplicative };
    Kind kind = Kind::Additive;
    int p = 2;
    bool matched = false;
    std::optional<Rational> epsilon;  // multiplicative only
    std::optional<Witness> witness;
    CellRange range;
    std::size_t cells_compared = 0;
};

/// p^{k-1} F(p tau, p z, tau') + sum_a F((tau + a)/p, z, tau') / p after the
/// substitution z -> sqrt(p) z:
///   B(n, r, m) = p^{k-1} A(n/p, r/p, m) [p | n, p | r] + A(p n, r, m).
/// Output truncation: n <= n_trunc / p, m <= m_trunc.
SiegelSeries hecke_up_additive(const SiegelSeries& F, int p);

/// Mirror of hecke_up_additive in (tau', m):
///   B(n, r, m) = p^{k-1} A(n, r/p, m/p) [p | m, p | r] + A(n, r, p m).
SiegelSeries hecke_down_additive(const SiegelSeries& F, int p);

/// Exact comparison of the two additive operators on `range`.
SymmetryReport additive_symmetry_test(const SiegelSeries& F, int p, const CellRange& range);

/// prod_{b=0}^{p-1} F((tau + b)/p, z, tau') as a series in tau, computed with
/// rational coefficients through the norm of the p-fold multisection in q.
SiegelCoeffs tau_norm(const SiegelCoeffs& F, int p);

/// F(p tau, p z, tau') * prod_b F((tau + b)/p, z, tau'). For p = 2 the product
/// is formed on the half-integral grid; for odd p via tau_norm.
SiegelSeries multiplicative_up(const SiegelSeries& F, int p);
SiegelSeries multiplicative_down(const SiegelSeries& F, int p);

/// Checks F_up = epsilon * F_down on `range` with epsilon = +-1 taken from the
/// first nonzero F_down cell in (n, m, r) order.
SymmetryReport multiplicative_symmetry_test(const SiegelSeries& F, int p, const CellRange& range);

/// Up/down values at (4, r, 3) for p = 2 by the closed convolution formula in
/// the coefficients A(n, r, 1), n <= 3.
std::map<std::int64_t, std::pair<Rational, Rational>> table_4_r_3(const SiegelSeries& F, std::int64_t r_lo = 0,
                                                                   std::int64_t r_hi = 3);

/// The comparison range used for the (4, r, 3) table cells.
CellRange table_range(std::int64_t r_lo = 0, std::int64_t r_hi = 3);

}  // namespace orthosym
