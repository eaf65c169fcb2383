#include "orthosym/theta.hpp"

#include <cmath>
#include <future>
#include <numbers>

#include "orthosym/errors.hpp"

namespace orthosym {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex e(double x) { return std::polar(1.0, kTwoPi * x); }

void require_upper(Complex tau) {
    if (!(tau.imag() > 0)) throw Error(ErrorKind::OutsideDomain, "tau must lie in the upper half plane");
}

// Sums term(k, value) over the enumerated points. The outermost coordinate
// range is split into `threads` contiguous blocks, each summed in enumeration
// order, then combined pairwise in block order.
template <typename Term>
std::pair<Complex, std::uint64_t> lattice_sum(const EllipsoidEnumerator& en, int threads, const Term& term) {
    const auto [lo, hi] = en.outer_range();
    if (lo > hi) return {0.0, 0};
    const std::int64_t span = hi - lo + 1;
    const int blocks = static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(threads, span)));

    auto run = [&](std::int64_t a, std::int64_t b) {
        Complex sum = 0.0;
        std::uint64_t count = 0;
        en.for_each(
            [&](std::span<const std::int64_t> k, double value) {
                sum += term(k, value);
                ++count;
            },
            std::make_pair(a, b));
        return std::make_pair(sum, count);
    };

    std::vector<std::pair<Complex, std::uint64_t>> parts(blocks);
    if (blocks == 1) {
        parts[0] = run(lo, hi);
    } else {
        std::vector<std::future<std::pair<Complex, std::uint64_t>>> futures;
        for (int b = 0; b < blocks; ++b) {
            const std::int64_t a0 = lo + span * b / blocks;
            const std::int64_t b0 = lo + span * (b + 1) / blocks - 1;
            futures.push_back(std::async(std::launch::async, run, a0, b0));
        }
        for (int b = 0; b < blocks; ++b) parts[b] = futures[b].get();
    }
    while (parts.size() > 1) {
        std::vector<std::pair<Complex, std::uint64_t>> next;
        for (std::size_t i = 0; i + 1 < parts.size(); i += 2)
            next.emplace_back(parts[i].first + parts[i + 1].first, parts[i].second + parts[i + 1].second);
        if (parts.size() % 2 == 1) next.push_back(parts.back());
        parts = std::move(next);
    }
    return parts[0];
}

Eigen::VectorXd with_middle(double first, const Eigen::VectorXd& middle, double last) {
    Eigen::VectorXd v(middle.size() + 2);
    v(0) = first;
    v.segment(1, middle.size()) = middle;
    v(middle.size() + 1) = last;
    return v;
}

Eigen::VectorXd middle_of(const Eigen::VectorXd& v) { return v.segment(1, v.size() - 2); }

TubePoint shifted_point(const LatticeSpace& lattice, Complex z, const ComplexVector& w, double w_scale, Complex zp) {
    ComplexVector ws;
    ws.reserve(w.size());
    for (const auto& x : w) ws.push_back(x * w_scale);
    return tube_point(lattice, z, ws, zp);
}

}  // namespace

Complex sqrt_upper(Complex tau) {
    require_upper(tau);
    return std::sqrt(tau);  // principal branch: arg in (0, pi/2) on the upper half plane
}

ThetaValue siegel_theta(const LatticeSpace& lattice, const ThetaParams& params) {
    require_upper(params.tau);
    if (!(params.tol > 0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
    const Majorant M = majorant(lattice, params.Z);
    const double a = kTwoPi * params.tau.imag();
    const double R = bound_for_tail(M, a, params.tol);
    const std::vector<double> rep = to_double(params.coset.rep);
    const Eigen::MatrixXd& Q = lattice.Q2_real();
    const int n = lattice.rank();
    const double x = params.tau.real();

    EllipsoidEnumerator en(M, rep, R, params.cap);
    auto term = [&](std::span<const std::int64_t> k, double value) {
        thread_local std::vector<double> lam;
        lam.resize(n);
        for (int i = 0; i < n; ++i) lam[i] = rep[i] + static_cast<double>(k[i]);
        double qq = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (Q(i, j) != 0.0) qq += lam[i] * Q(i, j) * lam[j];
        qq *= 0.5;
        return std::exp(-a * value) * e(x * qq);
    };
    const auto [sum, count] = lattice_sum(en, params.threads, term);
    return ThetaValue{sum, gaussian_tail_bound(M, a, R), R, count};
}

std::vector<Complex> theta_vector(const LatticeSpace& lattice, Complex tau, const TubePoint& Z, double tol,
                                  int threads) {
    std::vector<Complex> out;
    for (const auto& coset : lattice.discriminant_reps()) {
        ThetaParams p{tau, Z, coset, tol, EllipsoidEnumerator::kDefaultCap, threads};
        out.push_back(siegel_theta(lattice, p).value);
    }
    return out;
}

ThetaValue generalized_theta(const LatticeSpace& lattice, Complex tau, const Eigen::VectorXd& Y,
                             const Eigen::VectorXd& r, const Eigen::VectorXd& t, const RationalVector& alpha1,
                             double tol, std::uint64_t cap, int threads) {
    require_upper(tau);
    const int n = lattice.m() + 2;
    if (Y.size() != n || r.size() != n || t.size() != n || static_cast<int>(alpha1.size()) != n)
        throw Error(ErrorKind::InvalidArgument, "generalized theta arguments must have length m + 2");
    const Eigen::MatrixXd& Q1 = lattice.Q1_real();
    const Eigen::VectorXd Q1Y = Q1 * Y;
    const double q1y = Y.dot(Q1Y);
    if (!(q1y > 0) || !(Y(0) > 0)) throw Error(ErrorKind::OutsideCone, "Y must satisfy Q_1[Y] > 0 and y_1 > 0");

    const Ellipsoid M = Ellipsoid::from_matrix(Q1Y * Q1Y.transpose() / q1y - 0.5 * Q1);
    const double a = kTwoPi * tau.imag();
    const double R = bound_for_tail(M, a, tol);

    std::vector<double> center(n);
    const std::vector<double> al = to_double(alpha1);
    for (int i = 0; i < n; ++i) center[i] = al[i] + t(i);
    const Eigen::VectorXd Q1r = Q1 * r;
    const double x = tau.real();

    EllipsoidEnumerator en(M, center, R, cap);
    auto term = [&](std::span<const std::int64_t> k, double value) {
        // mu = lambda + t; phase x/2 Q_1[mu] - Q_1(lambda + t/2, r).
        thread_local std::vector<double> mu;
        mu.resize(n);
        double lin = 0.0;
        for (int i = 0; i < n; ++i) {
            mu[i] = center[i] + static_cast<double>(k[i]);
            lin += (al[i] + static_cast<double>(k[i]) + 0.5 * t(i)) * Q1r(i);
        }
        double qq = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (Q1(i, j) != 0.0) qq += mu[i] * Q1(i, j) * mu[j];
        return std::exp(-a * value) * e(0.5 * x * qq - lin);
    };
    const auto [sum, count] = lattice_sum(en, threads, term);
    return ThetaValue{sum, gaussian_tail_bound(M, a, R), R, count};
}

WeilRep weil_representation(const LatticeSpace& lattice) {
    const auto& reps = lattice.discriminant_reps();
    const int dim = static_cast<int>(reps.size());
    WeilRep w;
    w.dim = dim;
    w.phase_m = std::polar(1.0, std::numbers::pi * lattice.m() / 4.0);
    w.rhoT = Eigen::MatrixXcd::Zero(dim, dim);
    w.rhoS = Eigen::MatrixXcd::Zero(dim, dim);
    const Complex scale = w.phase_m / std::sqrt(static_cast<double>(dim));
    for (int a = 0; a < dim; ++a) {
        w.rhoT(a, a) = e(reps[a].q_mod1.get_d());
        for (int b = 0; b < dim; ++b) {
            Rational pairing = lattice.bilinear(reps[a].rep, reps[b].rep);
            pairing -= Rational(floor_i64(pairing));
            w.rhoS(b, a) = scale * e(-pairing.get_d());
        }
    }
    return w;
}

int reduction_cutoff(const LatticeSpace& lattice, Complex tau, const TubePoint& Z, double tol) {
    const double y = tau.imag();
    const double q1y = Z.q1_imZ;
    const Eigen::VectorXd Y = Z.imag_part();
    const Eigen::MatrixXd& Q1 = lattice.Q1_real();
    const Eigen::VectorXd Q1Y = Q1 * Y;
    const Ellipsoid M = Ellipsoid::from_matrix(Q1Y * Q1Y.transpose() / q1y - 0.5 * Q1);
    // Any shifted generalized theta is bounded by the full Gaussian sum bound.
    const double theta_bound = gaussian_tail_bound(M, kTwoPi * y, 0.0);
    const double pref = std::sqrt(q1y / (2.0 * y));

    // |c tau + d|^2 >= lmin (c^2 + d^2)
    Eigen::Matrix2d G;
    G << std::norm(tau), tau.real(), tau.real(), 1.0;
    const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(G).eigenvalues()(0);
    const double b = std::numbers::pi * q1y * lmin / (2.0 * y);
    for (int C = 0; C < 10000; ++C) {
        double tail = 0.0;
        for (int j = C + 1;; ++j) {
            const double t = 8.0 * j * std::exp(-b * j * j);
            tail += t;
            if (t < 1e-300 || (j > C + 10 && t < 1e-20 * tail)) break;
        }
        if (pref * theta_bound * tail <= tol) return C;
    }
    throw Error(ErrorKind::BudgetExceeded, "reduction cutoff did not converge");
}

Complex reduction_term(const LatticeSpace& lattice, const ThetaParams& params, int c, int d) {
    const Complex tau = params.tau;
    const double y = tau.imag();
    const Eigen::VectorXd X = params.Z.real_part();
    const Eigen::VectorXd Y = params.Z.imag_part();
    const double q1y = params.Z.q1_imZ;
    const double pref = std::sqrt(q1y / (2.0 * y));
    const double weight = std::exp(-std::numbers::pi * std::norm(static_cast<double>(c) * tau + static_cast<double>(d)) * q1y / (2.0 * y));
    const RationalVector alpha1 = lattice.alpha1(params.coset);
    const ThetaValue th = generalized_theta(lattice, tau, Y, static_cast<double>(d) * X, -static_cast<double>(c) * X,
                                            alpha1, params.tol, params.cap, params.threads);
    return pref * weight * th.value;
}

IdentityCheck borcherds_reduction_check(const LatticeSpace& lattice, const ThetaParams& params, int cd_cutoff) {
    const double tol = params.tol;
    const int C = cd_cutoff > 0 ? cd_cutoff : reduction_cutoff(lattice, params.tau, params.Z, tol / 4.0);
    ThetaParams lhs_params = params;
    lhs_params.tol = tol / 4.0;
    const Complex lhs = siegel_theta(lattice, lhs_params).value;

    const double pref = std::sqrt(params.Z.q1_imZ / (2.0 * params.tau.imag()));
    ThetaParams term_params = params;
    term_params.tol = tol / (4.0 * pref * (2.0 * C + 1) * (2.0 * C + 1));
    Complex rhs = 0.0;
    for (int c = -C; c <= C; ++c)
        for (int d = -C; d <= C; ++d) rhs += reduction_term(lattice, term_params, c, d);
    return IdentityCheck{lhs, rhs, std::abs(lhs - rhs)};
}

IdentityCheck theta_additive_symmetry_check(const LatticeSpace& lattice, const DiscCoset& coset, Complex tau,
                                            const TubePoint& Z, int p, double tol, int threads) {
    if (p < 2) throw Error(ErrorKind::InvalidArgument, "p must be prime");
    const double each = tol / (2.0 * (p + 1));
    const double sp = std::sqrt(static_cast<double>(p));
    auto theta_at = [&](const TubePoint& P) {
        return siegel_theta(lattice, ThetaParams{tau, P, coset, each, EllipsoidEnumerator::kDefaultCap, threads}).value;
    };
    Complex lhs = theta_at(shifted_point(lattice, static_cast<double>(p) * Z.z, Z.w, sp, Z.zp));
    Complex rhs = theta_at(shifted_point(lattice, Z.z, Z.w, sp, static_cast<double>(p) * Z.zp));
    for (int a = 0; a < p; ++a) {
        lhs += theta_at(shifted_point(lattice, (Z.z + static_cast<double>(a)) / static_cast<double>(p), Z.w, 1.0 / sp, Z.zp));
        rhs += theta_at(shifted_point(lattice, Z.z, Z.w, 1.0 / sp, (Z.zp + static_cast<double>(a)) / static_cast<double>(p)));
    }
    return IdentityCheck{lhs, rhs, std::abs(lhs - rhs)};
}

double theta_modularity_check(const LatticeSpace& lattice, Complex tau, const TubePoint& Z, Generator gen, double tol,
                              int threads) {
    require_upper(tau);
    const WeilRep w = weil_representation(lattice);
    const int dim = w.dim;
    Complex factor = 1.0;
    Complex new_tau = tau + 1.0;
    const Eigen::MatrixXcd* rho = &w.rhoT;
    if (gen == Generator::S) {
        const Complex phi = sqrt_upper(tau);
        factor = phi * phi * std::pow(std::conj(phi), lattice.m() + 2);
        new_tau = -1.0 / tau;
        rho = &w.rhoS;
    }
    const double each = tol / (4.0 * (1.0 + std::abs(factor)) * dim);
    const std::vector<Complex> before = theta_vector(lattice, tau, Z, each, threads);
    const std::vector<Complex> after = theta_vector(lattice, new_tau, Z, each, threads);
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = before[i];
    const Eigen::VectorXcd rhs = factor * ((*rho) * v);
    double diff = 0.0;
    for (int i = 0; i < dim; ++i) diff = std::max(diff, std::abs(after[i] - rhs(i)));
    return diff;
}

Complex spin_sum(const LatticeSpace& lattice, const DiscCoset& coset, Complex tau, const TubePoint& Z, int p,
                 SpinSide side, std::int64_t c, std::int64_t d, double tol, int threads) {
    const Eigen::VectorXd X = Z.real_part();
    const Eigen::VectorXd Y = Z.imag_part();
    const int last = static_cast<int>(X.size()) - 1;
    const double x = X(0), xp = X(last), y = Y(0), yp = Y(last);
    const Eigen::VectorXd X0 = middle_of(X), Y0 = middle_of(Y);
    const double pd = static_cast<double>(p);
    const double sp = std::sqrt(pd);
    const RationalVector alpha1 = lattice.alpha1(coset);

    std::vector<Eigen::VectorXd> xs;
    Eigen::VectorXd Ys;
    switch (side) {
        case SpinSide::UpPlus:
            xs.push_back(with_middle(pd * x, sp * X0, xp));
            Ys = with_middle(pd * y, sp * Y0, yp);
            break;
        case SpinSide::UpMinus:
            for (int a = 0; a < p; ++a) xs.push_back(with_middle((x + a) / pd, X0 / sp, xp));
            Ys = with_middle(y / pd, Y0 / sp, yp);
            break;
        case SpinSide::DownPlus:
            xs.push_back(with_middle(x, sp * X0, pd * xp));
            Ys = with_middle(y, sp * Y0, pd * yp);
            break;
        case SpinSide::DownMinus:
            for (int a = 0; a < p; ++a) xs.push_back(with_middle(x, X0 / sp, (xp + a) / pd));
            Ys = with_middle(y, Y0 / sp, yp / pd);
            break;
    }
    const double each = tol / static_cast<double>(xs.size());
    Complex sum = 0.0;
    for (const auto& Xa : xs)
        sum += generalized_theta(lattice, tau, Ys, static_cast<double>(d) * Xa, -static_cast<double>(c) * Xa, alpha1,
                                 each, EllipsoidEnumerator::kDefaultCap, threads)
                   .value;
    return sum;
}

SpinCheck spin_identity_check(const LatticeSpace& lattice, const DiscCoset& coset, Complex tau, const TubePoint& Z,
                              int p, std::int64_t c, std::int64_t d, double tol, std::optional<int> expected_case,
                              int threads) {
    if (p < 2) throw Error(ErrorKind::InvalidArgument, "p must be prime");
    const bool divisible = (c % p == 0) && (d % p == 0);
    SpinCheck out;
    out.case_number = divisible ? 2 : 1;
    if (expected_case && *expected_case != out.case_number)
        throw Error(ErrorKind::CaseMismatch, "(c, d) does not fall in the requested case");
    const double each = tol / (2.0 * (p + 1));
    auto I = [&](SpinSide side, std::int64_t cc, std::int64_t dd) {
        return spin_sum(lattice, coset, tau, Z, p, side, cc, dd, each, threads);
    };
    if (!divisible) {
        out.diffs.push_back(std::abs(I(SpinSide::UpMinus, c, d) - I(SpinSide::DownMinus, c, d)));
    } else {
        const double pd = static_cast<double>(p);
        out.diffs.push_back(std::abs(I(SpinSide::UpMinus, c, d) - pd * I(SpinSide::DownPlus, c / p, d / p)));
        out.diffs.push_back(std::abs(I(SpinSide::DownMinus, c, d) - pd * I(SpinSide::UpPlus, c / p, d / p)));
    }
    return out;
}

}  // namespace orthosym
