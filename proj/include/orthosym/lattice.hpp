#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "orthosym/rational.hpp"

namespace orthosym {

using Complex = std::complex<double>;
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = std::vector<Rational>;
using ComplexVector = std::vector<Complex>;

/// One class of L*/L. `rep` is reduced into [0,1)^{m+4}; with our normal form
/// the four hyperbolic coordinates are always zero.
struct DiscCoset {
    RationalVector rep;
    Rational q_mod1;
    int index = 0;
};

/// Smith normal form U*A*V = D of a square integer matrix (D diagonal, each
/// entry dividing the next, nonnegative).
struct SmithForm {
    IntMatrix U;
    IntMatrix V;
    IntMatrix D;
};

SmithForm smith_normal_form(const IntMatrix& A);

/// Gram matrix Q_nu = [[0,0,J_nu],[0,-S,0],[J_nu,0,0]] of degree m + 2*nu.
IntMatrix hyperbolic_gram(const IntMatrix& S, int nu);

/// Quadratic space of signature (2, m+2) attached to an even positive definite
/// matrix S: L = Z^{m+4} with Gram matrix Q_2.
class LatticeSpace {
public:
    /// Validates S (symmetric, even diagonal, positive leading minors) and
    /// enumerates the discriminant group.
    static LatticeSpace build(const IntMatrix& S);

    int m() const { return static_cast<int>(S_.rows()); }
    int rank() const { return m() + 4; }
    const IntMatrix& S() const { return S_; }
    const IntMatrix& Q0() const { return Q0_; }
    const IntMatrix& Q1() const { return Q1_; }
    const IntMatrix& Q2() const { return Q2_; }
    const Eigen::MatrixXd& Q2_real() const { return Q2d_; }
    const Eigen::MatrixXd& Q1_real() const { return Q1d_; }
    const std::vector<DiscCoset>& discriminant_reps() const { return reps_; }
    std::int64_t det_S() const { return det_S_; }

    /// Q(x, y) = x^T Q_2 y, exactly.
    Rational bilinear(std::span<const Rational> x, std::span<const Rational> y) const;
    /// q(x) = Q[x]/2, exactly.
    Rational q(std::span<const Rational> x) const;

    /// The middle m coordinates of a coset representative (alpha_0 with
    /// alpha = (0,0,alpha_0,0,0) mod L).
    RationalVector alpha0(const DiscCoset& coset) const;
    /// alpha_1 = (0, alpha_0, 0) in L_1^*.
    RationalVector alpha1(const DiscCoset& coset) const;

    /// Index of the coset containing -alpha.
    int negate(int coset_index) const;
    /// Index of the coset containing v (v must lie in L*).
    int coset_of(std::span<const Rational> v) const;

private:
    IntMatrix S_, Q0_, Q1_, Q2_;
    Eigen::MatrixXd Q2d_, Q1d_;
    std::int64_t det_S_ = 1;
    std::vector<DiscCoset> reps_;
};

/// One-coset enumeration: L*/L as reps reduced to [0,1), zero coset first,
/// the rest sorted lexicographically.
std::vector<DiscCoset> discriminant_group(const IntMatrix& Q);

/// A point Z = (z, w, z') of the tube domain together with its isotropic lift
/// (-Q_1[Z]/2, z, w, z', 1).
struct TubePoint {
    Complex z;
    ComplexVector w;
    Complex zp;
    ComplexVector lift;
    double q1_imZ = 0.0;

    Eigen::VectorXd real_part() const;  // X_Z in V_1
    Eigen::VectorXd imag_part() const;  // Y_Z in V_1
};

/// Throws OutsideDomain unless Im z, Im z' > 0 and 2 Im z Im z' - S[Im w] > 0.
TubePoint tube_point(const IntMatrix& S, Complex z, const ComplexVector& w, Complex zp);
TubePoint tube_point(const LatticeSpace& lattice, Complex z, const ComplexVector& w, Complex zp);

/// Positive definite quadratic form with the data needed to enumerate and
/// bound lattice sums over it.
struct Ellipsoid {
    Eigen::MatrixXd matrix;
    Eigen::MatrixXd cholesky_upper;  // matrix = R^T R
    double min_eigenvalue_lower_bound = 0.0;

    static Ellipsoid from_matrix(const Eigen::MatrixXd& matrix);
    int dim() const { return static_cast<int>(matrix.rows()); }
    double value(std::span<const double> x) const;
};

/// Majorant of Q_2 at Z: lambda^T M lambda = q(lambda_v) - q(lambda_v^perp).
struct Majorant : Ellipsoid {
    Eigen::VectorXd lift_re;  // Re(Q_2 * lift)
    Eigen::VectorXd lift_im;  // Im(Q_2 * lift)
    double q1_imZ = 0.0;

    /// q(lambda_v) = |Q(lambda, lift)|^2 / (2 Q_1[Im Z]).
    double q_positive(std::span<const double> lambda) const;
};

Majorant majorant(const LatticeSpace& lattice, const TubePoint& Z);

/// Bound on sum over a shifted lattice c + Z^n of exp(-a * x^T M x) restricted
/// to x^T M x > bound, using only the certified smallest-eigenvalue bound.
double gaussian_tail_bound(const Ellipsoid& ellipsoid, double a, double bound);

/// Smallest bound with gaussian_tail_bound(ellipsoid, a, bound) <= tol.
double bound_for_tail(const Ellipsoid& ellipsoid, double a, double tol);

/// Fincke-Pohst enumeration of the integer vectors k with
/// (c + k)^T M (c + k) <= bound for a real shift c.
class EllipsoidEnumerator {
public:
    static constexpr std::uint64_t kDefaultCap = 10'000'000;

    EllipsoidEnumerator(const Ellipsoid& ellipsoid, std::vector<double> center, double bound,
                        std::uint64_t cap = kDefaultCap);

    /// Range of the outermost (last) coordinate of k that can occur.
    std::pair<std::int64_t, std::int64_t> outer_range() const;

    /// Visits every point; the callback receives k and (c+k)^T M (c+k).
    /// `outer` restricts the last coordinate of k for partitioned runs.
    void for_each(const std::function<void(std::span<const std::int64_t>, double)>& visit,
                  std::optional<std::pair<std::int64_t, std::int64_t>> outer = std::nullopt) const;

    /// Visits each fiber of the innermost coordinate: k[1..] is fixed, k[0]
    /// ranges over [lo, hi]. `partial` is the contribution of the outer
    /// coordinates, so a point's value is partial + R00^2 (x0 - center0)^2.
    struct Fiber {
        std::span<const std::int64_t> k;  // k[0] unset
        std::int64_t lo, hi;
        double center0;  // real value of x0 minimizing the form on the fiber
        double partial;
    };
    void for_each_fiber(const std::function<void(const Fiber&)>& visit,
                        std::optional<std::pair<std::int64_t, std::int64_t>> outer = std::nullopt) const;

private:
    const Ellipsoid& ellipsoid_;
    std::vector<double> center_;
    double bound_;
    std::uint64_t cap_;
};

/// All lambda in coset.rep + Z^{m+4} with lambda^T M lambda <= bound.
std::vector<RationalVector> enumerate_coset(const LatticeSpace& lattice, const DiscCoset& coset,
                                            const Majorant& M, double bound,
                                            std::uint64_t cap = EllipsoidEnumerator::kDefaultCap);

std::vector<double> to_double(std::span<const Rational> v);

}  // namespace orthosym
