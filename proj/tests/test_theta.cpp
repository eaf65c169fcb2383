#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "orthosym/theta.hpp"

using namespace orthosym;
using testing::error_kind;

namespace {

ThetaParams params_for(const LatticeSpace& L, Complex tau, const TubePoint& Z, int coset, double tol = 1e-11) {
    ThetaParams p;
    p.tau = tau;
    p.Z = Z;
    p.coset = L.discriminant_reps()[coset];
    p.tol = tol;
    return p;
}

}  // namespace

TEST_CASE("theta limits at large Im tau") {
    const LatticeSpace L = testing::m1();
    const TubePoint Z = tube_point(L, {0.3, 1.0}, {{0.1, 0.1}}, {0.2, 1.5});
    const ThetaValue zero = siegel_theta(L, params_for(L, {0, 50}, Z, 0, 1e-10));
    CHECK(std::abs(zero.value - 1.0) < 1e-10);
    const ThetaValue other = siegel_theta(L, params_for(L, {0, 50}, Z, 1, 1e-10));
    CHECK(std::abs(other.value) < 1e-10);
}

TEST_CASE("theta against a brute-force box sum") {
    // Box ||lambda||_inf <= 12, computed independently and frozen.
    const LatticeSpace L = testing::m1();
    const TubePoint Z = tube_point(L, {0, 1}, {{0, 0.1}}, {0, 2});
    const Complex tau(0.3, 1.1);
    const Complex expected[2] = {{1.8374718692561203, -0.003502795614724119},
                                 {0.5815328784705458, -0.29623036884220305}};
    for (int c = 0; c < 2; ++c) {
        const ThetaValue v = siegel_theta(L, params_for(L, tau, Z, c));
        CHECK(std::abs(v.value - expected[c]) < 1e-8);
        CHECK(v.tail_bound <= 1e-11);
        CHECK(v.terms > 0);
    }
}

TEST_CASE("tail bound shrinks with the tolerance") {
    const LatticeSpace L = testing::m1();
    const TubePoint Z = tube_point(L, {0.2, 1.1}, {{0.1, 0.2}}, {-0.3, 1.3});
    double last_bound = 0;
    std::uint64_t last_terms = 0;
    Complex last;
    for (double tol : {1e-4, 1e-7, 1e-10}) {
        const ThetaValue v = siegel_theta(L, params_for(L, {0.1, 0.9}, Z, 1, tol));
        CHECK(v.tail_bound <= tol);
        CHECK(v.bound >= last_bound);
        CHECK(v.terms >= last_terms);
        if (last_terms) CHECK(std::abs(v.value - last) <= 2 * tol * 1e3);
        last_bound = v.bound;
        last_terms = v.terms;
        last = v.value;
    }
}

TEST_CASE("theta symmetries") {
    const LatticeSpace L = LatticeSpace::build(testing::gram({2, 0, 0, 4}, 2));
    const TubePoint Z = tube_point(L, {0.3, 1.2}, {{0.1, 0.1}, {-0.2, 0.05}}, {0.4, 1.1});
    const TubePoint Z1 = tube_point(L, {1.3, 1.2}, {{0.1, 0.1}, {-0.2, 0.05}}, {0.4, 1.1});
    const Complex tau(0.15, 0.95);
    for (const auto& c : L.discriminant_reps()) {
        const Complex v = siegel_theta(L, params_for(L, tau, Z, c.index)).value;
        // z -> z + 1 preserves the lattice.
        CHECK(std::abs(siegel_theta(L, params_for(L, tau, Z1, c.index)).value - v) < 1e-10);
        // lambda -> -lambda for diagonal S.
        CHECK(std::abs(siegel_theta(L, params_for(L, tau, Z, L.negate(c.index))).value - v) < 1e-10);
    }
}

TEST_CASE("threads only change rounding") {
    const LatticeSpace L = testing::m1();
    ThetaParams p = params_for(L, {0.1, 0.8}, tube_point(L, {0.2, 1.1}, {{0.1, 0.2}}, {-0.3, 1.3}), 1);
    const Complex one = siegel_theta(L, p).value;
    p.threads = 4;
    CHECK(std::abs(siegel_theta(L, p).value - one) < 1e-12);
}

TEST_CASE("generalized theta") {
    const LatticeSpace L = testing::m1();
    Eigen::VectorXd Y(3), zero = Eigen::VectorXd::Zero(3);
    Y << 1.0, 0.3, 1.7;
    const RationalVector a0 = {0, 0, 0}, a1 = {0, make_rational(1, 2), 0}, a1_shift = {1, make_rational(-1, 2), -2};
    // r = t = 0: frozen brute-force box sums.
    CHECK(std::abs(generalized_theta(L, {0.3, 1.1}, Y, zero, zero, a0, 1e-11).value -
                   Complex(1.2372790120487167, -0.002748662175127147)) < 1e-8);
    const Complex v1 = generalized_theta(L, {0.3, 1.1}, Y, zero, zero, a1, 1e-11).value;
    CHECK(std::abs(v1 - Complex(0.3854339340181475, -0.19507635624931616)) < 1e-8);
    CHECK(std::abs(generalized_theta(L, {0.3, 1.1}, Y, zero, zero, a1_shift, 1e-11).value - v1) < 1e-10);
    CHECK(std::abs(generalized_theta(L, {0, 50}, Y, zero, zero, a0, 1e-11).value - 1.0) < 1e-10);

    Eigen::VectorXd bad(3);
    bad << -1.0, 0.0, -1.0;  // Q_1[bad] > 0 but y_1 < 0
    CHECK(error_kind([&] { generalized_theta(L, {0, 1}, bad, zero, zero, a0, 1e-8); }) == ErrorKind::OutsideCone);
}

TEST_CASE("Weil representation") {
    const WeilRep w0 = weil_representation(testing::m0());
    CHECK(w0.dim == 1);
    CHECK(std::abs(w0.rhoT(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(w0.rhoS(0, 0) - 1.0) < 1e-15);

    const WeilRep w = weil_representation(testing::m1());
    REQUIRE(w.dim == 2);
    CHECK(std::abs(w.rhoT(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(w.rhoT(1, 1) - Complex(0, -1)) < 1e-15);
    const Complex f = std::exp(Complex(0, std::numbers::pi / 4)) / std::sqrt(2.0);
    CHECK(std::abs(w.rhoS(0, 0) - f) < 1e-15);
    CHECK(std::abs(w.rhoS(0, 1) - f) < 1e-15);
    CHECK(std::abs(w.rhoS(1, 0) - f) < 1e-15);
    CHECK(std::abs(w.rhoS(1, 1) + f) < 1e-15);

    for (const auto& S : {testing::gram({2, -1, -1, 2}, 2), testing::gram({2, 0, 0, 4}, 2), testing::gram({4}, 1)}) {
        const WeilRep r = weil_representation(LatticeSpace::build(S));
        const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(r.dim, r.dim);
        CHECK((r.rhoT * r.rhoT.adjoint() - I).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((r.rhoS * r.rhoS.adjoint() - I).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("modularity") {
    const LatticeSpace L0 = testing::m0(), L1 = testing::m1();
    const TubePoint Z0 = tube_point(L0, {0, 1}, {}, {0, 2});
    CHECK(theta_modularity_check(L0, {0.2, 0.9}, Z0, Generator::S, 1e-11) < 1e-7);
    CHECK(theta_modularity_check(L0, {0.2, 0.9}, Z0, Generator::T, 1e-11) < 1e-9);
    const TubePoint Z1 = tube_point(L1, {0.1, 1.1}, {{0.2, 0.1}}, {0.4, 1.4});
    CHECK(theta_modularity_check(L1, {-0.3, 0.8}, Z1, Generator::S, 1e-11) < 1e-7);
    CHECK(theta_modularity_check(L1, {-0.3, 0.8}, Z1, Generator::T, 1e-11) < 1e-9);
    // A non-unimodular lattice with |L*/L| = 3.
    const LatticeSpace A2 = LatticeSpace::build(testing::gram({2, -1, -1, 2}, 2));
    const TubePoint Z2 = tube_point(A2, {0.1, 1.1}, {{0.2, 0.1}, {0.0, -0.1}}, {0.4, 1.4});
    CHECK(theta_modularity_check(A2, {0.25, 1.0}, Z2, Generator::S, 1e-11) < 1e-7);
}

TEST_CASE("Borcherds reduction") {
    const LatticeSpace L0 = testing::m0();
    const ThetaParams p0 = params_for(L0, {0.2, 1.3}, tube_point(L0, {1, 1}, {}, {0.5, 2}), 0);
    CHECK(borcherds_reduction_check(L0, p0).abs_diff < 1e-8);

    const LatticeSpace L1 = testing::m1();
    for (int c = 0; c < 2; ++c) {
        const ThetaParams p1 = params_for(L1, {-0.1, 0.9}, tube_point(L1, {0.4, 1.2}, {{-0.3, 0.2}}, {0.1, 1.6}), c);
        CHECK(borcherds_reduction_check(L1, p1).abs_diff < 1e-8);
    }

    // X_Z = 0: the (0, 0) term is the plain generalized theta function.
    const TubePoint Zi = tube_point(L1, {0, 1.2}, {{0, 0.2}}, {0, 1.6});
    const ThetaParams pi = params_for(L1, {0.3, 1.1}, Zi, 1);
    const Eigen::VectorXd Y = Zi.imag_part();
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
    const double q1y = Zi.q1_imZ;
    const Complex expected =
        std::sqrt(q1y / (2 * 1.1)) * generalized_theta(L1, {0.3, 1.1}, Y, zero, zero, L1.alpha1(pi.coset), 1e-12).value;
    CHECK(std::abs(reduction_term(L1, pi, 0, 0) - expected) < 1e-10);
}

TEST_CASE("additive symmetry of theta") {
    const LatticeSpace L0 = testing::m0(), L1 = testing::m1();
    CHECK(theta_additive_symmetry_check(L0, L0.discriminant_reps()[0], {0.3, 1.1}, tube_point(L0, {0, 1}, {}, {0, 2}),
                                        2, 1e-10)
              .abs_diff < 1e-8);
    const TubePoint Z = tube_point(L1, {1, 1}, {{0.2, 0.3}}, {0.5, 2});
    for (const auto& c : L1.discriminant_reps()) {
        CHECK(theta_additive_symmetry_check(L1, c, {0.3, 1.1}, Z, 2, 1e-10).abs_diff < 1e-8);
        CHECK(theta_additive_symmetry_check(L1, c, {-0.2, 1.3}, Z, 3, 1e-10).abs_diff < 1e-8);
    }
    // z = z': both sides are the same sum.
    const TubePoint S = tube_point(L1, {0.3, 1.4}, {{0.1, 0.2}}, {0.3, 1.4});
    const IdentityCheck sym = theta_additive_symmetry_check(L1, L1.discriminant_reps()[1], {0.1, 1.0}, S, 2, 1e-10);
    CHECK(sym.abs_diff < 1e-13);
}

TEST_CASE("spin identities") {
    const LatticeSpace L0 = testing::m0(), L1 = testing::m1();
    const TubePoint Z0 = tube_point(L0, {0.2, 1.1}, {}, {-0.3, 1.4});
    const SpinCheck s1 = spin_identity_check(L0, L0.discriminant_reps()[0], {0.1, 1.0}, Z0, 2, 1, 0, 1e-10);
    CHECK(s1.case_number == 1);
    REQUIRE(s1.diffs.size() == 1);
    CHECK(s1.diffs[0] < 1e-8);

    const TubePoint Z1 = tube_point(L1, {1, 1}, {{0.2, 0.3}}, {0.5, 2});
    for (const auto& c : L1.discriminant_reps()) {
        const SpinCheck s2 = spin_identity_check(L1, c, {0.3, 1.1}, Z1, 2, 2, 2, 1e-10);
        CHECK(s2.case_number == 2);
        REQUIRE(s2.diffs.size() == 2);
        CHECK(s2.diffs[0] < 1e-8);
        CHECK(s2.diffs[1] < 1e-8);
        for (auto [cc, dd] : {std::pair{0, 1}, {1, 1}, {3, 2}})
            CHECK(spin_identity_check(L1, c, {0.3, 1.1}, Z1, 3, cc, dd, 1e-10).diffs[0] < 1e-8);
    }
    const SpinCheck degenerate = spin_identity_check(L1, L1.discriminant_reps()[0], {0.3, 1.1}, Z1, 2, 0, 0, 1e-10);
    CHECK(degenerate.case_number == 2);
    CHECK(error_kind([&] { spin_identity_check(L1, L1.discriminant_reps()[0], {0.3, 1.1}, Z1, 2, 2, 2, 1e-10, 1); }) ==
          ErrorKind::CaseMismatch);
}

TEST_CASE("principal square root") {
    CHECK(std::abs(sqrt_upper({0, 1}) - std::exp(Complex(0, std::numbers::pi / 4))) < 1e-15);
    CHECK(std::arg(sqrt_upper({-4, 1e-9})) > 0);
    CHECK(std::arg(sqrt_upper({-4, 1e-9})) < std::numbers::pi / 2 + 1e-6);
}
