#include "orthosym/lattice.hpp"

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "orthosym/errors.hpp"

namespace orthosym {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

void swap_rows(IntMatrix& M, int i, int j) {
    if (i != j) M.row(i).swap(M.row(j));
}

void swap_cols(IntMatrix& M, int i, int j) {
    if (i != j) M.col(i).swap(M.col(j));
}

Rational frac(const Rational& r) { return r - Rational(floor_i64(r)); }

RationalVector reduce_mod1(std::span<const Rational> v) {
    RationalVector out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(frac(x));
    return out;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& A) {
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n) throw Error(ErrorKind::InvalidArgument, "smith_normal_form expects a square matrix");
    IntMatrix D = A;
    IntMatrix U = IntMatrix::Identity(n, n);
    IntMatrix V = IntMatrix::Identity(n, n);

    for (int t = 0; t < n; ++t) {
        while (true) {
            int pi = -1, pj = -1;
            std::int64_t best = 0;
            for (int i = t; i < n; ++i)
                for (int j = t; j < n; ++j)
                    if (D(i, j) != 0 && (pi < 0 || std::llabs(D(i, j)) < best)) {
                        best = std::llabs(D(i, j));
                        pi = i;
                        pj = j;
                    }
            if (pi < 0) break;
            swap_rows(D, t, pi);
            swap_rows(U, t, pi);
            swap_cols(D, t, pj);
            swap_cols(V, t, pj);

            bool dirty = false;
            for (int i = t + 1; i < n; ++i) {
                const std::int64_t q = floor_div(D(i, t), D(t, t));
                if (q != 0) {
                    D.row(i) -= q * D.row(t);
                    U.row(i) -= q * U.row(t);
                }
                dirty = dirty || D(i, t) != 0;
            }
            for (int j = t + 1; j < n; ++j) {
                const std::int64_t q = floor_div(D(t, j), D(t, t));
                if (q != 0) {
                    D.col(j) -= q * D.col(t);
                    V.col(j) -= q * V.col(t);
                }
                dirty = dirty || D(t, j) != 0;
            }
            if (dirty) continue;

            int bad_row = -1;
            for (int i = t + 1; i < n && bad_row < 0; ++i)
                for (int j = t + 1; j < n; ++j)
                    if (D(i, j) % D(t, t) != 0) {
                        bad_row = i;
                        break;
                    }
            if (bad_row < 0) break;
            D.row(t) += D.row(bad_row);
            U.row(t) += U.row(bad_row);
        }
        if (D(t, t) < 0) {
            D.row(t) *= -1;
            U.row(t) *= -1;
        }
    }
    return {U, V, D};
}

IntMatrix hyperbolic_gram(const IntMatrix& S, int nu) {
    const int m = static_cast<int>(S.rows());
    const int n = m + 2 * nu;
    IntMatrix Q = IntMatrix::Zero(n, n);
    for (int i = 0; i < nu; ++i) {
        Q(i, n - 1 - i) = 1;
        Q(n - 1 - i, i) = 1;
    }
    Q.block(nu, nu, m, m) = -S;
    return Q;
}

std::vector<DiscCoset> discriminant_group(const IntMatrix& Q) {
    const int n = static_cast<int>(Q.rows());
    const SmithForm snf = smith_normal_form(Q);
    for (int i = 0; i < n; ++i)
        if (snf.D(i, i) == 0) throw Error(ErrorKind::InvalidArgument, "degenerate Gram matrix");

    // alpha = V * (y_i / d_i) for 0 <= y_i < d_i runs over Q^{-1} Z^n / Z^n.
    std::vector<RationalVector> reps;
    std::vector<std::int64_t> y(n, 0);
    while (true) {
        RationalVector alpha(n, Rational(0));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (y[j] == 0) continue;
                alpha[i] += Rational(snf.V(i, j)) * make_rational(y[j], snf.D(j, j));
            }
        }
        reps.push_back(reduce_mod1(alpha));
        int pos = 0;
        while (pos < n) {
            if (++y[pos] < snf.D(pos, pos)) break;
            y[pos] = 0;
            ++pos;
        }
        if (pos == n) break;
    }
    std::sort(reps.begin(), reps.end());

    std::vector<DiscCoset> out;
    out.reserve(reps.size());
    for (auto& rep : reps) {
        Rational qq(0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (Q(i, j) != 0) qq += rep[i] * Rational(Q(i, j)) * rep[j];
        qq /= 2;
        DiscCoset c;
        c.rep = std::move(rep);
        c.q_mod1 = frac(qq);
        c.index = static_cast<int>(out.size());
        out.push_back(std::move(c));
    }
    return out;
}

LatticeSpace LatticeSpace::build(const IntMatrix& S) {
    const int m = static_cast<int>(S.rows());
    if (S.cols() != m) throw Error(ErrorKind::NotSymmetric, "S must be square");
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (S(i, j) != S(j, i)) throw Error(ErrorKind::NotSymmetric, "S is not symmetric");
    for (int i = 0; i < m; ++i)
        if (S(i, i) % 2 != 0) throw Error(ErrorKind::NotEven, "S has an odd diagonal entry");

    // Leading principal minors, exactly.
    for (int k = 1; k <= m; ++k) {
        std::vector<std::vector<Rational>> A(k, std::vector<Rational>(k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) A[i][j] = Rational(S(i, j));
        Rational det(1);
        for (int c = 0; c < k; ++c) {
            if (A[c][c] == 0) {
                det = 0;
                break;
            }
            det *= A[c][c];
            for (int r = c + 1; r < k; ++r) {
                const Rational f = A[r][c] / A[c][c];
                for (int j = c; j < k; ++j) A[r][j] -= f * A[c][j];
            }
        }
        if (det <= 0) {
            std::ostringstream os;
            os << "leading minor of order " << k << " is not positive";
            throw Error(ErrorKind::NotPositiveDefinite, os.str());
        }
    }

    LatticeSpace L;
    L.S_ = S;
    L.Q0_ = hyperbolic_gram(S, 0);
    L.Q1_ = hyperbolic_gram(S, 1);
    L.Q2_ = hyperbolic_gram(S, 2);
    L.Q2d_ = L.Q2_.cast<double>();
    L.Q1d_ = L.Q1_.cast<double>();
    L.reps_ = discriminant_group(L.Q2_);
    L.det_S_ = static_cast<std::int64_t>(L.reps_.size());
    return L;
}

Rational LatticeSpace::bilinear(std::span<const Rational> x, std::span<const Rational> y) const {
    const int n = rank();
    if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
        throw Error(ErrorKind::InvalidArgument, "vector length does not match the lattice rank");
    Rational out(0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (Q2_(i, j) != 0) out += x[i] * Rational(Q2_(i, j)) * y[j];
    return out;
}

Rational LatticeSpace::q(std::span<const Rational> x) const { return bilinear(x, x) / 2; }

RationalVector LatticeSpace::alpha0(const DiscCoset& coset) const {
    const int n = rank();
    if (coset.rep[0] != 0 || coset.rep[1] != 0 || coset.rep[n - 2] != 0 || coset.rep[n - 1] != 0)
        throw Error(ErrorKind::InvalidArgument, "coset representative is not in (0,0,alpha_0,0,0) form");
    return RationalVector(coset.rep.begin() + 2, coset.rep.begin() + 2 + m());
}

RationalVector LatticeSpace::alpha1(const DiscCoset& coset) const {
    RationalVector a0 = alpha0(coset);
    RationalVector out;
    out.reserve(a0.size() + 2);
    out.emplace_back(0);
    for (auto& x : a0) out.push_back(std::move(x));
    out.emplace_back(0);
    return out;
}

int LatticeSpace::coset_of(std::span<const Rational> v) const {
    const RationalVector r = reduce_mod1(v);
    for (const auto& c : reps_)
        if (c.rep == r) return c.index;
    throw Error(ErrorKind::InvalidArgument, "vector does not lie in the dual lattice");
}

int LatticeSpace::negate(int coset_index) const {
    RationalVector v = reps_.at(coset_index).rep;
    for (auto& x : v) x = -x;
    return coset_of(v);
}

Eigen::VectorXd TubePoint::real_part() const {
    Eigen::VectorXd X(w.size() + 2);
    X(0) = z.real();
    for (std::size_t i = 0; i < w.size(); ++i) X(i + 1) = w[i].real();
    X(w.size() + 1) = zp.real();
    return X;
}

Eigen::VectorXd TubePoint::imag_part() const {
    Eigen::VectorXd Y(w.size() + 2);
    Y(0) = z.imag();
    for (std::size_t i = 0; i < w.size(); ++i) Y(i + 1) = w[i].imag();
    Y(w.size() + 1) = zp.imag();
    return Y;
}

TubePoint tube_point(const IntMatrix& S, Complex z, const ComplexVector& w, Complex zp) {
    const int m = static_cast<int>(S.rows());
    if (static_cast<int>(w.size()) != m) throw Error(ErrorKind::InvalidArgument, "w must have length m");
    if (!(z.imag() > 0) || !(zp.imag() > 0)) throw Error(ErrorKind::OutsideDomain, "Im z and Im z' must be positive");

    double s_im = 0.0;
    Complex s_full = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            s_im += w[i].imag() * static_cast<double>(S(i, j)) * w[j].imag();
            s_full += w[i] * static_cast<double>(S(i, j)) * w[j];
        }
    const double q1 = 2.0 * z.imag() * zp.imag() - s_im;
    if (!(q1 > 0)) throw Error(ErrorKind::OutsideDomain, "Q_1[Im Z] must be positive");

    TubePoint Z;
    Z.z = z;
    Z.w = w;
    Z.zp = zp;
    Z.q1_imZ = q1;
    const Complex q1_full = 2.0 * z * zp - s_full;
    Z.lift.reserve(m + 4);
    Z.lift.push_back(-q1_full / 2.0);
    Z.lift.push_back(z);
    for (const auto& wi : w) Z.lift.push_back(wi);
    Z.lift.push_back(zp);
    Z.lift.push_back(1.0);
    return Z;
}

TubePoint tube_point(const LatticeSpace& lattice, Complex z, const ComplexVector& w, Complex zp) {
    return tube_point(lattice.S(), z, w, zp);
}

Ellipsoid Ellipsoid::from_matrix(const Eigen::MatrixXd& matrix) {
    Ellipsoid e;
    e.matrix = 0.5 * (matrix + matrix.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(e.matrix);
    if (llt.info() != Eigen::Success) throw Error(ErrorKind::NotPositiveDefinite, "quadratic form is not positive definite");
    e.cholesky_upper = llt.matrixU();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(e.matrix, Eigen::EigenvaluesOnly);
    const double mu = eig.eigenvalues()(0);
    if (!(mu > 0)) throw Error(ErrorKind::NotPositiveDefinite, "quadratic form is not positive definite");

    // Certificate: M - lb*I must still admit a Cholesky factorization.
    const double scale = e.matrix.cwiseAbs().maxCoeff();
    double lb = mu * (1.0 - 1e-8) - 1e-13 * scale;
    const int n = e.dim();
    for (int tries = 0; tries < 60; ++tries) {
        if (lb > 0) {
            Eigen::LLT<Eigen::MatrixXd> shifted(e.matrix - lb * Eigen::MatrixXd::Identity(n, n));
            if (shifted.info() == Eigen::Success) break;
        }
        lb = (lb > 0 ? lb : mu) * 0.5;
    }
    e.min_eigenvalue_lower_bound = lb;
    return e;
}

double Ellipsoid::value(std::span<const double> x) const {
    const int n = dim();
    double out = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += matrix(i, j) * x[j];
        out += x[i] * row;
    }
    return out;
}

double Majorant::q_positive(std::span<const double> lambda) const {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        re += lift_re(i) * lambda[i];
        im += lift_im(i) * lambda[i];
    }
    return (re * re + im * im) / (2.0 * q1_imZ);
}

Majorant majorant(const LatticeSpace& lattice, const TubePoint& Z) {
    const int n = lattice.rank();
    if (!(Z.q1_imZ > 0)) throw Error(ErrorKind::OutsideDomain, "Z is not in the tube domain");
    Eigen::VectorXcd lift(n);
    for (int i = 0; i < n; ++i) lift(i) = Z.lift[i];
    const Eigen::VectorXcd a = lattice.Q2_real().cast<Complex>() * lift;
    const Eigen::VectorXd re = a.real();
    const Eigen::VectorXd im = a.imag();
    const Eigen::MatrixXd M = (re * re.transpose() + im * im.transpose()) / Z.q1_imZ - 0.5 * lattice.Q2_real();

    Majorant out;
    static_cast<Ellipsoid&>(out) = Ellipsoid::from_matrix(M);
    out.lift_re = re;
    out.lift_im = im;
    out.q1_imZ = Z.q1_imZ;
    return out;
}

double gaussian_tail_bound(const Ellipsoid& ellipsoid, double a, double bound) {
    // #{x in c+Z^n : x^T M x <= t} <= V_n (sqrt(t/c_min) + sqrt(n)/2)^n, then
    // integrate the Stieltjes sum by parts against exp(-a t).
    const int n = ellipsoid.dim();
    const double c = ellipsoid.min_eigenvalue_lower_bound;
    const double delta = std::sqrt(static_cast<double>(n)) / 2.0;
    const double vn = std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
    const double x = a * std::max(bound, 0.0);
    double total = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double s = j / 2.0 + 1.0;
        const double upper = boost::math::tgamma(s, x);
        total += boost::math::binomial_coefficient<double>(n, j) * std::pow(delta, n - j) *
                 std::pow(c * a, -j / 2.0) * upper;
    }
    return vn * total;
}

double bound_for_tail(const Ellipsoid& ellipsoid, double a, double tol) {
    double hi = 1.0;
    while (gaussian_tail_bound(ellipsoid, a, hi) > tol) {
        hi *= 2.0;
        if (hi > 1e12) throw Error(ErrorKind::BudgetExceeded, "no enumeration bound reaches the requested tolerance");
    }
    double lo = 0.0;
    for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (gaussian_tail_bound(ellipsoid, a, mid) > tol)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

EllipsoidEnumerator::EllipsoidEnumerator(const Ellipsoid& ellipsoid, std::vector<double> center, double bound,
                                         std::uint64_t cap)
    : ellipsoid_(ellipsoid), center_(std::move(center)), bound_(bound), cap_(cap) {
    if (static_cast<int>(center_.size()) != ellipsoid_.dim())
        throw Error(ErrorKind::InvalidArgument, "center has the wrong dimension");
}

std::pair<std::int64_t, std::int64_t> EllipsoidEnumerator::outer_range() const {
    const int n = ellipsoid_.dim();
    const double r = ellipsoid_.cholesky_upper(n - 1, n - 1);
    const double hw = std::sqrt(std::max(bound_, 0.0)) / r * (1.0 + 1e-12) + 1e-12;
    return {static_cast<std::int64_t>(std::ceil(-hw - center_[n - 1])),
            static_cast<std::int64_t>(std::floor(hw - center_[n - 1]))};
}

void EllipsoidEnumerator::for_each_fiber(const std::function<void(const Fiber&)>& visit,
                                         std::optional<std::pair<std::int64_t, std::int64_t>> outer) const {
    const int n = ellipsoid_.dim();
    const Eigen::MatrixXd& R = ellipsoid_.cholesky_upper;
    std::vector<std::int64_t> k(n, 0);
    std::vector<double> x(n, 0.0);
    std::uint64_t count = 0;

    auto recurse = [&](auto&& self, int level, double partial) -> void {
        double center = 0.0;
        for (int j = level + 1; j < n; ++j) center -= R(level, j) / R(level, level) * x[j];
        const double rem = bound_ - partial;
        if (rem < 0) return;
        const double hw = std::sqrt(rem) / R(level, level) * (1.0 + 1e-12) + 1e-12;
        std::int64_t lo = static_cast<std::int64_t>(std::ceil(center - hw - center_[level]));
        std::int64_t hi = static_cast<std::int64_t>(std::floor(center + hw - center_[level]));
        if (level == n - 1 && outer) {
            lo = std::max(lo, outer->first);
            hi = std::min(hi, outer->second);
        }
        if (lo > hi) return;
        if (level == 0) {
            if (++count > cap_) throw Error(ErrorKind::BudgetExceeded, "enumeration cap exceeded");
            visit(Fiber{std::span<const std::int64_t>(k), lo, hi, center, partial});
            return;
        }
        for (std::int64_t ki = lo; ki <= hi; ++ki) {
            k[level] = ki;
            x[level] = center_[level] + static_cast<double>(ki);
            const double d = x[level] - center;
            self(self, level - 1, partial + R(level, level) * R(level, level) * d * d);
        }
    };
    recurse(recurse, n - 1, 0.0);
}

void EllipsoidEnumerator::for_each(const std::function<void(std::span<const std::int64_t>, double)>& visit,
                                   std::optional<std::pair<std::int64_t, std::int64_t>> outer) const {
    const double r00 = ellipsoid_.cholesky_upper(0, 0);
    std::vector<std::int64_t> k(ellipsoid_.dim(), 0);
    std::uint64_t count = 0;
    for_each_fiber(
        [&](const Fiber& f) {
            std::copy(f.k.begin(), f.k.end(), k.begin());
            for (std::int64_t k0 = f.lo; k0 <= f.hi; ++k0) {
                const double d = center_[0] + static_cast<double>(k0) - f.center0;
                const double value = f.partial + r00 * r00 * d * d;
                if (value > bound_) continue;
                if (++count > cap_) throw Error(ErrorKind::BudgetExceeded, "enumeration cap exceeded");
                k[0] = k0;
                visit(std::span<const std::int64_t>(k), value);
            }
        },
        outer);
}

std::vector<RationalVector> enumerate_coset(const LatticeSpace& lattice, const DiscCoset& coset,
                                            const Majorant& M, double bound, std::uint64_t cap) {
    if (!(bound > 0)) throw Error(ErrorKind::InvalidArgument, "bound must be positive");
    const int n = lattice.rank();
    EllipsoidEnumerator en(M, to_double(coset.rep), bound, cap);
    std::vector<RationalVector> out;
    en.for_each([&](std::span<const std::int64_t> k, double) {
        RationalVector v(n);
        for (int i = 0; i < n; ++i) v[i] = coset.rep[i] + Rational(k[i]);
        out.push_back(std::move(v));
    });
    return out;
}

std::vector<double> to_double(std::span<const Rational> v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(x.get_d());
    return out;
}

}  // namespace orthosym
