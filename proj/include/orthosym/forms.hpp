#pragma once

#include <cstdint>
#include <map>

#include "orthosym/qseries.hpp"
#include "orthosym/rational.hpp"

namespace orthosym {

/// Bernoulli number B_n with B_1 = -1/2.
Rational bernoulli(int n);

/// Bernoulli polynomial B_n(x).
Rational bernoulli_polynomial(int n, const Rational& x);

/// Kronecker symbol (D / n) for n >= 1.
int kronecker(std::int64_t D, std::int64_t n);

/// Writes a discriminant D0 (D0 = 0, 1 mod 4, nonzero) as D * f^2 with D
/// fundamental (D = 1 allowed).
struct FundamentalSplit {
    std::int64_t D;
    std::int64_t f;
};
FundamentalSplit fundamental_split(std::int64_t D0);

/// Generalized Bernoulli number B_{r, chi_D}.
Rational generalized_bernoulli(int r, std::int64_t D);

/// Cohen's function H(r, N).
Rational cohen_H(int r, std::int64_t N);

/// Table of H(r, N) for 0 <= N <= N_max.
struct CohenTable {
    int r = 0;
    std::map<std::int64_t, Rational> values;

    static CohenTable compute(int r, std::int64_t n_max);
};

/// Normalized Eisenstein series E_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n,
/// through q^{n_trunc}.
QSeries eisenstein(int k, std::int64_t n_trunc);

/// Index-1 Jacobi Eisenstein series, c(n, r) = H(k-1, 4n - r^2) / H(k-1, 0).
JacobiSeries jacobi_eisenstein(int k, std::int64_t n_trunc);

/// phi_{10,1} = (E6 E41 - E4 E61)/144 or phi_{12,1} = (E4^2 E41 - E6 E61)/144.
JacobiSeries phi_cusp(int k, std::int64_t n_trunc);

/// Saito-Kurokawa lift of an index-1 cusp form: A(n, r, m) for
/// 1 <= n <= n_trunc, 1 <= m <= m_trunc, 4nm > r^2.
SiegelSeries sk_lift(const JacobiSeries& phi, std::int64_t n_trunc, std::int64_t m_trunc);

/// The concrete objects built together at one truncation.
struct FormsCatalogue {
    QSeries E4, E6;
    JacobiSeries E41, E61;
    JacobiSeries phi101, phi121;
    std::int64_t n_trunc = 0;

    static FormsCatalogue build(std::int64_t n_trunc);
};

/// chi_10 or chi_12 as Saito-Kurokawa lifts, through (n_trunc, m_trunc).
SiegelSeries chi_form(int k, std::int64_t n_trunc, std::int64_t m_trunc);

}  // namespace orthosym
