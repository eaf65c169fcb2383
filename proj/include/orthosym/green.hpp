#pragma once

#include <cstdint>

#include "orthosym/lattice.hpp"

namespace orthosym {

/// Gauss hypergeometric series 2F1(a, b; c; z) for -1 < z < 1, summed to
/// relative 1e-12. Near z = 1 with c = a + b the logarithmic expansion in
/// 1 - z is used instead of the slowly converging series.
double hyp2f1(double a, double b, double c, double z);

struct GreenParams {
    DiscCoset coset;
    Rational n;           // negative, n = q(alpha) mod 1
    double s = 0.0;       // s > kappa/2, kappa = (m+4)/2
    TubePoint Z;
    double R = 100.0;     // cutoff on q(lambda_Z)
    double delta = 1e-6;  // divisor guard
    std::uint64_t cap = EllipsoidEnumerator::kDefaultCap;
    int threads = 1;
};

struct GreenValue {
    double value = 0.0;
    std::uint64_t terms_used = 0;
    double tail_estimate = 0.0;  // heuristic, not a certificate
};

/// Truncated hypergeometric lattice series for Phi_{alpha,n}(Z, s): the sum
/// over lambda in alpha + L with q(lambda) = n and q(lambda_Z) <= R.
GreenValue green_function(const LatticeSpace& lattice, const GreenParams& params);

struct GreenSymmetry {
    double lhs = 0.0;
    double rhs = 0.0;
    double rel_diff = 0.0;
};

/// Additive symmetry of the truncated Green function at a prime p, with the
/// same cutoff R at all 2(p+1) points.
GreenSymmetry green_additive_symmetry_check(const LatticeSpace& lattice, const GreenParams& params, int p);

}  // namespace orthosym
