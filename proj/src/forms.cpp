#include "orthosym/forms.hpp"

#include <cmath>
#include <mutex>
#include <numeric>
#include <vector>

#include "orthosym/errors.hpp"

namespace orthosym {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t m) {
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

Integer binomial(int n, int k) {
    Integer out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return out;
}

Integer power(std::int64_t base, unsigned exp) {
    Integer out;
    mpz_pow_ui(out.get_mpz_t(), Integer(static_cast<long>(base)).get_mpz_t(), exp);
    return out;
}

Integer divisor_sigma(std::int64_t n, unsigned k) {
    Integer out(0);
    for (std::int64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        out += power(d, k);
        if (d != n / d) out += power(n / d, k);
    }
    return out;
}

int moebius(std::int64_t n) {
    int sign = 1;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        n /= p;
        if (n % p == 0) return 0;
        sign = -sign;
    }
    if (n > 1) sign = -sign;
    return sign;
}

// Jacobi symbol (a / n) for odd n > 0.
int jacobi_symbol(std::int64_t a, std::int64_t n) {
    a = mod(a, n);
    int result = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            const std::int64_t r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

}  // namespace

Rational bernoulli(int n) {
    static std::mutex lock;
    static std::vector<Rational> cache{Rational(1)};
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "Bernoulli index must be nonnegative");
    std::lock_guard<std::mutex> guard(lock);
    // sum_{j=0}^{n} C(n+1, j) B_j = 0
    while (static_cast<int>(cache.size()) <= n) {
        const int m = static_cast<int>(cache.size());
        Rational s(0);
        for (int j = 0; j < m; ++j) s += Rational(binomial(m + 1, j)) * cache[j];
        Rational b = -s / Rational(m + 1);
        b.canonicalize();
        cache.push_back(b);
    }
    return cache[n];
}

Rational bernoulli_polynomial(int n, const Rational& x) {
    Rational out(0);
    Rational xp(1);
    // sum_k C(n,k) B_{n-k} x^k
    for (int k = 0; k <= n; ++k) {
        out += Rational(binomial(n, k)) * bernoulli(n - k) * xp;
        xp *= x;
    }
    return out;
}

int kronecker(std::int64_t D, std::int64_t n) {
    if (n <= 0) throw Error(ErrorKind::InvalidArgument, "kronecker expects n >= 1");
    int result = 1;
    while (n % 2 == 0) {
        if (D % 2 == 0) return 0;
        const std::int64_t r = mod(D, 8);
        if (r == 3 || r == 5) result = -result;
        n /= 2;
    }
    if (n == 1) return result;
    return result * jacobi_symbol(D, n);
}

FundamentalSplit fundamental_split(std::int64_t D0) {
    if (D0 == 0 || (mod(D0, 4) != 0 && mod(D0, 4) != 1))
        throw Error(ErrorKind::InvalidArgument, "not a discriminant");
    std::int64_t d = D0 < 0 ? -1 : 1;
    std::int64_t s = 1;
    std::int64_t n = D0 < 0 ? -D0 : D0;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (int i = 0; i < e / 2; ++i) s *= p;
        if (e % 2 == 1) d *= p;
    }
    d *= n;
    if (mod(d, 4) == 1) return {d, s};
    return {4 * d, s / 2};
}

Rational generalized_bernoulli(int r, std::int64_t D) {
    const std::int64_t f = D < 0 ? -D : D;
    Rational sum(0);
    for (std::int64_t a = 1; a <= f; ++a) {
        const int chi = kronecker(D, a);
        if (chi == 0) continue;
        sum += Rational(chi) * bernoulli_polynomial(r, make_rational(a, f));
    }
    return Rational(power(f, static_cast<unsigned>(r - 1))) * sum;
}

Rational cohen_H(int r, std::int64_t N) {
    if (r < 2) throw Error(ErrorKind::InvalidArgument, "cohen_H needs r >= 2");
    if (N < 0) return Rational(0);
    if (N == 0) return -bernoulli(2 * r) / Rational(2 * r);
    const std::int64_t D0 = (r % 2 == 0) ? N : -N;
    if (mod(D0, 4) != 0 && mod(D0, 4) != 1) return Rational(0);

    const auto [D, f] = fundamental_split(D0);
    const Rational L = -generalized_bernoulli(r, D) / Rational(r);
    Rational sum(0);
    for (std::int64_t d = 1; d <= f; ++d) {
        if (f % d != 0) continue;
        const int mu = moebius(d);
        if (mu == 0) continue;
        const int chi = kronecker(D, d);
        if (chi == 0) continue;
        sum += Rational(mu * chi) * Rational(power(d, static_cast<unsigned>(r - 1))) *
               Rational(divisor_sigma(f / d, static_cast<unsigned>(2 * r - 1)));
    }
    return L * sum;
}

CohenTable CohenTable::compute(int r, std::int64_t n_max) {
    CohenTable t;
    t.r = r;
    for (std::int64_t N = 0; N <= n_max; ++N) t.values.emplace(N, cohen_H(r, N));
    return t;
}

QSeries eisenstein(int k, std::int64_t n_trunc) {
    if (k < 4 || k % 2 != 0) throw Error(ErrorKind::UnsupportedWeight, "Eisenstein series needs even k >= 4");
    QSeries out(1, {Rational(n_trunc)});
    out.set({0}, Rational(1));
    const Rational factor = -Rational(2 * k) / bernoulli(k);
    for (std::int64_t n = 1; n <= n_trunc; ++n)
        out.set({n}, factor * Rational(divisor_sigma(n, static_cast<unsigned>(k - 1))));
    return out;
}

JacobiSeries jacobi_eisenstein(int k, std::int64_t n_trunc) {
    if (k != 4 && k != 6) throw Error(ErrorKind::UnsupportedWeight, "Jacobi Eisenstein series implemented for k = 4, 6");
    const CohenTable table = CohenTable::compute(k - 1, 4 * n_trunc);
    const Rational h0 = table.values.at(0);
    JacobiSeries out{k, 1, JacobiCoeffs(1, {Rational(n_trunc), Rational(0)})};
    for (std::int64_t n = 0; n <= n_trunc; ++n) {
        for (std::int64_t r = -2 * n; r <= 2 * n; ++r) {
            const std::int64_t N = 4 * n - r * r;
            if (N < 0) continue;
            out.coeffs.set({n, r}, table.values.at(N) / h0);
        }
    }
    return out;
}

JacobiSeries phi_cusp(int k, std::int64_t n_trunc) {
    if (k != 10 && k != 12) throw Error(ErrorKind::UnsupportedWeight, "cusp form implemented for k = 10, 12");
    const QSeries E4 = eisenstein(4, n_trunc);
    const QSeries E6 = eisenstein(6, n_trunc);
    const JacobiSeries E41 = jacobi_eisenstein(4, n_trunc);
    const JacobiSeries E61 = jacobi_eisenstein(6, n_trunc);
    JacobiCoeffs combo = (k == 10) ? as_jacobi(E6) * E41.coeffs - as_jacobi(E4) * E61.coeffs
                                   : as_jacobi(E4 * E4) * E41.coeffs - as_jacobi(E6) * E61.coeffs;
    return JacobiSeries{k, 1, combo.scaled(Rational(1, 144))};
}

SiegelSeries sk_lift(const JacobiSeries& phi, std::int64_t n_trunc, std::int64_t m_trunc) {
    if (phi.index != 1) throw Error(ErrorKind::IndexNotOne, "Saito-Kurokawa lift needs an index-1 form");
    if (phi.coeffs.den() != 1) throw Error(ErrorKind::InvalidArgument, "Jacobi form must have integral exponents");
    if (phi.n_trunc() < Rational(n_trunc * m_trunc))
        throw Error(ErrorKind::InsufficientTruncation, "Jacobi form truncated below n_trunc * m_trunc");
    if (phi.c(0, 0) != 0) throw Error(ErrorKind::InvalidArgument, "Saito-Kurokawa lift needs a cusp form");

    const int k = phi.weight;
    SiegelSeries out{k, SiegelCoeffs(1, {Rational(n_trunc), Rational(0), Rational(m_trunc)})};
    for (std::int64_t n = 1; n <= n_trunc; ++n) {
        for (std::int64_t m = 1; m <= m_trunc; ++m) {
            const std::int64_t disc = 4 * n * m;
            const auto rmax = static_cast<std::int64_t>(std::sqrt(static_cast<double>(disc))) + 1;
            for (std::int64_t r = -rmax; r <= rmax; ++r) {
                if (r * r >= disc) continue;
                const std::int64_t g = std::gcd(std::gcd(n, r < 0 ? -r : r), m);
                Rational a(0);
                for (std::int64_t d = 1; d <= g; ++d) {
                    if (g % d != 0) continue;
                    a += Rational(power(d, static_cast<unsigned>(k - 1))) * phi.c(n * m / (d * d), r / d);
                }
                out.coeffs.set({n, r, m}, a);
            }
        }
    }
    return out;
}

FormsCatalogue FormsCatalogue::build(std::int64_t n_trunc) {
    FormsCatalogue c;
    c.n_trunc = n_trunc;
    c.E4 = eisenstein(4, n_trunc);
    c.E6 = eisenstein(6, n_trunc);
    c.E41 = jacobi_eisenstein(4, n_trunc);
    c.E61 = jacobi_eisenstein(6, n_trunc);
    c.phi101 = JacobiSeries{10, 1, (as_jacobi(c.E6) * c.E41.coeffs - as_jacobi(c.E4) * c.E61.coeffs).scaled(Rational(1, 144))};
    c.phi121 = JacobiSeries{12, 1, (as_jacobi(c.E4 * c.E4) * c.E41.coeffs - as_jacobi(c.E6) * c.E61.coeffs).scaled(Rational(1, 144))};
    return c;
}

SiegelSeries chi_form(int k, std::int64_t n_trunc, std::int64_t m_trunc) {
    return sk_lift(phi_cusp(k, n_trunc * m_trunc), n_trunc, m_trunc);
}

}  // namespace orthosym
