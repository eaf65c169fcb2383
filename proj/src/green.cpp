#include "orthosym/green.hpp"

#include <boost/math/special_functions/digamma.hpp>

#include <cmath>
#include <future>
#include <numeric>

#include "orthosym/errors.hpp"

namespace orthosym {

namespace {

double hyp2f1_series(double a, double b, double c, double z) {
    double term = 1.0;
    double sum = 1.0;
    // t_{k+1}/t_k = z (a+k)(b+k)/((c+k)(k+1)) tends to z, from above when
    // a + b > c + 1 and from below otherwise. Past the parameters the tail
    // after t_k is at most |t_k| rho/(1-rho), rho bounding all later ratios.
    const bool from_above = a + b - c - 1.0 >= 0.0;
    const double settle = std::abs(a) + std::abs(b) + std::abs(c) + 2.0;
    for (long k = 0; k < 50'000'000; ++k) {
        const double ratio = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        term *= ratio;
        sum += term;
        if (term == 0.0) return sum;
        if (k < settle) continue;
        const double next = (a + k + 1) * (b + k + 1) / ((c + k + 1) * (k + 2.0));
        const bool bounded = from_above ? std::abs(next * z) <= std::abs(ratio) : next <= 1.0;
        const double rho = from_above ? std::abs(ratio) : std::abs(z);
        if (bounded && rho < 1.0 && std::abs(term) * rho / (1.0 - rho) <= 1e-13 * std::abs(sum)) return sum;
    }
    throw Error(ErrorKind::Divergent, "hypergeometric series did not converge");
}

// 2F1(a, b; a+b; z) via the expansion in powers of 1 - z with log(1 - z).
double hyp2f1_log_case(double a, double b, double z) {
    const double w = 1.0 - z;
    const double lw = std::log(w);
    const double pref = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b));
    double psi1 = boost::math::digamma(1.0);
    double psia = boost::math::digamma(a);
    double psib = boost::math::digamma(b);
    double coef = 1.0;  // (a)_n (b)_n / (n!)^2 w^n
    double sum = 0.0;
    for (int n = 0; n < 100000; ++n) {
        const double t = coef * (2.0 * psi1 - psia - psib - lw);
        sum += t;
        if (n > 2 && std::abs(t) <= 1e-15 * std::abs(sum)) break;
        coef *= (a + n) * (b + n) / ((n + 1.0) * (n + 1.0)) * w;
        psi1 += 1.0 / (n + 1.0);
        psia += 1.0 / (a + n);
        psib += 1.0 / (b + n);
    }
    return pref * sum;
}

bool nonpositive_integer(double x) { return x <= 0.0 && std::floor(x) == x; }

}  // namespace

double hyp2f1(double a, double b, double c, double z) {
    if (nonpositive_integer(c)) throw Error(ErrorKind::BadC, "c must not be a nonpositive integer");
    if (!(z < 1.0) || !(z > -1.0)) throw Error(ErrorKind::Divergent, "hypergeometric series needs |z| < 1");
    if (z == 0.0) return 1.0;
    if (z > 0.75 && std::abs(c - a - b) < 1e-12 && !nonpositive_integer(a) && !nonpositive_integer(b))
        return hyp2f1_log_case(a, b, z);
    return hyp2f1_series(a, b, c, z);
}

GreenValue green_function(const LatticeSpace& lattice, const GreenParams& params) {
    const int n = lattice.rank();
    const double kappa = (lattice.m() + 4) / 2.0;
    if (!(params.n < 0)) throw Error(ErrorKind::InvalidArgument, "n must be negative");
    {
        const Rational diff = params.n - params.coset.q_mod1;
        if (diff.get_den() != 1) throw Error(ErrorKind::InvalidArgument, "n must be congruent to q(alpha) mod 1");
    }
    if (!(params.s > kappa / 2.0)) throw Error(ErrorKind::InvalidArgument, "s must exceed kappa/2");
    if (!(params.R > 0)) throw Error(ErrorKind::InvalidArgument, "R must be positive");

    const Majorant M = majorant(lattice, params.Z);
    const double nd = params.n.get_d();
    // lambda^T M lambda = 2 q(lambda_Z) - q(lambda) = 2 q(lambda_Z) - n on the quadric.
    const double bound = 2.0 * params.R - nd;

    // Exact arithmetic on D * lambda, D the common denominator of the rep.
    std::int64_t D = 1;
    for (const auto& x : params.coset.rep) D = std::lcm(D, x.get_den().get_si());
    std::vector<std::int64_t> repD(n);
    for (int i = 0; i < n; ++i) repD[i] = Rational(params.coset.rep[i] * D).get_num().get_si();
    const Rational target_r = params.n * Rational(2 * D * D);  // D^2 Q[lambda]
    if (target_r.get_den() != 1) return GreenValue{};
    const __int128 target = target_r.get_num().get_si();
    const IntMatrix& Q = lattice.Q2();

    const double sigma = params.s + kappa / 2.0 - 1.0;
    const double ha = sigma;
    const double hb = params.s - kappa / 2.0 + 1.0;
    const double hc = 2.0 * params.s;
    const double guard = params.delta * std::abs(nd);

    EllipsoidEnumerator en(M, to_double(params.coset.rep), bound, params.cap);

    auto run = [&](std::int64_t lo, std::int64_t hi) {
        double sum = 0.0;
        std::uint64_t count = 0;
        std::vector<std::int64_t> lamD(n);
        std::vector<double> lam(n);
        auto visit_point = [&](std::int64_t k0, std::span<const std::int64_t> k) {
            for (int i = 0; i < n; ++i) {
                const std::int64_t ki = i == 0 ? k0 : k[i];
                lamD[i] = repD[i] + ki * D;
                lam[i] = static_cast<double>(lamD[i]) / static_cast<double>(D);
            }
            const double qv = M.q_positive(lam);
            if (qv > params.R) return;
            if (qv < guard) throw Error(ErrorKind::OnDivisor, "Z lies within the divisor guard of H(alpha, n)");
            const double x = nd / (nd - qv);
            sum += std::pow(x, sigma) * hyp2f1(ha, hb, hc, x);
            ++count;
        };
        en.for_each_fiber(
            [&](const EllipsoidEnumerator::Fiber& f) {
                // D^2 Q[lambda] = 2 (D x_1)(D x_1') + rest, x_1 = coordinate 0.
                __int128 rest = 0;
                for (int i = 1; i < n; ++i) {
                    const __int128 li = repD[i] + f.k[i] * D;
                    for (int j = 1; j < n; ++j) {
                        if (Q(i, j) == 0) continue;
                        rest += li * Q(i, j) * (repD[j] + f.k[j] * D);
                    }
                }
                const __int128 x1p = repD[n - 1] + f.k[n - 1] * D;
                const __int128 rhs = target - rest;
                if (x1p == 0) {
                    if (rhs != 0) return;
                    for (std::int64_t k0 = f.lo; k0 <= f.hi; ++k0) visit_point(k0, f.k);
                    return;
                }
                const __int128 den = 2 * x1p * Q(0, n - 1);
                if (rhs % den != 0) return;
                const __int128 x1D = rhs / den;
                if ((x1D - repD[0]) % D != 0) return;
                const std::int64_t k0 = static_cast<std::int64_t>((x1D - repD[0]) / D);
                if (k0 < f.lo || k0 > f.hi) return;
                visit_point(k0, f.k);
            },
            std::make_pair(lo, hi));
        return std::make_pair(sum, count);
    };

    const auto [lo, hi] = en.outer_range();
    double total = 0.0;
    std::uint64_t count = 0;
    if (lo <= hi) {
        const std::int64_t span = hi - lo + 1;
        const int blocks = static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(params.threads, span)));
        std::vector<std::pair<double, std::uint64_t>> parts(blocks);
        if (blocks == 1) {
            parts[0] = run(lo, hi);
        } else {
            std::vector<std::future<std::pair<double, std::uint64_t>>> futures;
            for (int b = 0; b < blocks; ++b)
                futures.push_back(std::async(std::launch::async, run, lo + span * b / blocks, lo + span * (b + 1) / blocks - 1));
            for (int b = 0; b < blocks; ++b) parts[b] = futures[b].get();
        }
        while (parts.size() > 1) {
            std::vector<std::pair<double, std::uint64_t>> next;
            for (std::size_t i = 0; i + 1 < parts.size(); i += 2)
                next.emplace_back(parts[i].first + parts[i + 1].first, parts[i].second + parts[i + 1].second);
            if (parts.size() % 2 == 1) next.push_back(parts.back());
            parts = std::move(next);
        }
        total = parts[0].first;
        count = parts[0].second;
    }

    const double pref = 2.0 * std::exp(std::lgamma(sigma) - std::lgamma(2.0 * params.s));
    GreenValue out;
    out.value = pref * total;
    out.terms_used = count;
    // Count of lattice points grows like R^{kappa-1}; terms decay like (|n|/q)^sigma.
    const double growth = kappa - 1.0;
    out.tail_estimate = pref * static_cast<double>(count) * growth / (sigma - growth) *
                        std::pow(std::abs(nd) / params.R, sigma);
    return out;
}

GreenSymmetry green_additive_symmetry_check(const LatticeSpace& lattice, const GreenParams& params, int p) {
    if (p < 2) throw Error(ErrorKind::InvalidArgument, "p must be prime");
    const TubePoint& Z = params.Z;
    const double pd = static_cast<double>(p);
    const double sp = std::sqrt(pd);
    auto at = [&](Complex z, double w_scale, Complex zp) {
        ComplexVector w;
        for (const auto& x : Z.w) w.push_back(x * w_scale);
        GreenParams g = params;
        g.Z = tube_point(lattice, z, w, zp);
        return green_function(lattice, g).value;
    };
    double lhs = at(pd * Z.z, sp, Z.zp);
    double rhs = at(Z.z, sp, pd * Z.zp);
    for (int a = 0; a < p; ++a) {
        lhs += at((Z.z + static_cast<double>(a)) / pd, 1.0 / sp, Z.zp);
        rhs += at(Z.z, 1.0 / sp, (Z.zp + static_cast<double>(a)) / pd);
    }
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    return GreenSymmetry{lhs, rhs, scale > 0 ? std::abs(lhs - rhs) / scale : 0.0};
}

}  // namespace orthosym
