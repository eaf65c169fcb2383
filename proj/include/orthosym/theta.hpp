#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

#include "orthosym/lattice.hpp"

namespace orthosym {

struct ThetaParams {
    Complex tau;
    TubePoint Z;
    DiscCoset coset;
    double tol = 1e-10;
    std::uint64_t cap = EllipsoidEnumerator::kDefaultCap;
    int threads = 1;
};

struct ThetaValue {
    Complex value;
    double tail_bound = 0.0;  // certified bound on the omitted terms
    double bound = 0.0;       // enumeration radius (in the majorant)
    std::uint64_t terms = 0;
};

/// Theta_alpha(tau, Z) = sum over lambda in alpha + L of
/// e(i Im(tau) Q[lambda_v] + conj(tau)/2 Q[lambda]).
ThetaValue siegel_theta(const LatticeSpace& lattice, const ThetaParams& params);

/// (Theta_alpha(tau, Z))_alpha in discriminant-group order.
std::vector<Complex> theta_vector(const LatticeSpace& lattice, Complex tau, const TubePoint& Z, double tol,
                                  int threads = 1);

/// Generalized theta function of L_1:
/// sum over lambda in alpha1 + L_1 of
///   e(i Im(tau) Q_1(lambda+t, Y)^2 / Q_1[Y] + conj(tau)/2 Q_1[lambda+t] - Q_1(lambda + t/2, r)).
ThetaValue generalized_theta(const LatticeSpace& lattice, Complex tau, const Eigen::VectorXd& Y,
                             const Eigen::VectorXd& r, const Eigen::VectorXd& t, const RationalVector& alpha1,
                             double tol, std::uint64_t cap = EllipsoidEnumerator::kDefaultCap, int threads = 1);

struct WeilRep {
    int dim = 1;
    Eigen::MatrixXcd rhoT;
    Eigen::MatrixXcd rhoS;
    Complex phase_m;  // exp(pi i m / 4)
};

/// rho(T) e_a = e(q(a)) e_a, rho(S) e_a = exp(pi i m/4)/sqrt|L*/L| sum_b e(-Q(a,b)) e_b.
/// Matrices act on coordinate vectors: entry (b, a) is the e_b coefficient of rho e_a.
WeilRep weil_representation(const LatticeSpace& lattice);

struct IdentityCheck {
    Complex lhs;
    Complex rhs;
    double abs_diff = 0.0;
};

/// Compares Theta_alpha with the Borcherds reduction sum over (c, d),
/// |c|, |d| <= cd_cutoff. A zero cutoff is chosen so the omitted (c, d)
/// contribute below tol/2.
IdentityCheck borcherds_reduction_check(const LatticeSpace& lattice, const ThetaParams& params, int cd_cutoff = 0);

/// One (c, d) term of the reduction sum, including the outer square root.
Complex reduction_term(const LatticeSpace& lattice, const ThetaParams& params, int c, int d);

/// Smallest box |c|, |d| <= C for which the omitted reduction terms are below tol.
int reduction_cutoff(const LatticeSpace& lattice, Complex tau, const TubePoint& Z, double tol);

/// Additive symmetry of Theta_alpha at a prime p:
///   Theta(pz, sqrt(p) w, z') + sum_a Theta((z+a)/p, w/sqrt(p), z')
/// against the same with z and z' exchanged.
IdentityCheck theta_additive_symmetry_check(const LatticeSpace& lattice, const DiscCoset& coset, Complex tau,
                                            const TubePoint& Z, int p, double tol, int threads = 1);

enum class Generator { T, S };

/// max_alpha |Theta_L(M tau, Z) - phi^2 conj(phi)^{m+2} rho_L(M) Theta_L(tau, Z)|.
double theta_modularity_check(const LatticeSpace& lattice, Complex tau, const TubePoint& Z, Generator gen, double tol,
                              int threads = 1);

/// Sums I_+^up, I_-^up, I_+^down, I_-^down of generalized theta functions at
/// the decorated points (X, Y scaled by p in one cusp variable).
enum class SpinSide { UpPlus, UpMinus, DownPlus, DownMinus };
Complex spin_sum(const LatticeSpace& lattice, const DiscCoset& coset, Complex tau, const TubePoint& Z, int p,
                 SpinSide side, std::int64_t c, std::int64_t d, double tol, int threads = 1);

struct SpinCheck {
    int case_number = 1;  // 1: p does not divide both c and d; 2: p | c and p | d
    std::vector<double> diffs;
};

/// Case 1: |I_-^up(c,d) - I_-^down(c,d)|. Case 2: |I_-^up(c,d) - p I_+^down(c/p,d/p)|
/// and |I_-^down(c,d) - p I_+^up(c/p,d/p)|. `expected_case`, when given, must
/// match the case determined by (c, d) (CaseMismatch otherwise).
SpinCheck spin_identity_check(const LatticeSpace& lattice, const DiscCoset& coset, Complex tau, const TubePoint& Z,
                              int p, std::int64_t c, std::int64_t d, double tol,
                              std::optional<int> expected_case = std::nullopt, int threads = 1);

/// Principal square root on the upper half plane.
Complex sqrt_upper(Complex tau);

}  // namespace orthosym
