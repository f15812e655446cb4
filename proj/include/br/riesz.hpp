#pragma once

#include <span>
#include <vector>

#include "br/spectral.hpp"
#include "br/types.hpp"

namespace br {

// The symbol phi_{beta,delta}(x) = (1 - |x|^beta)_+^delta. Value 1 at the
// origin, 0 outside the open unit ball and at |x| = 1 (the subscript +
// closes the support).
struct RieszSymbol {
    double beta;
    double delta;

    RieszSymbol(double beta_, double delta_);

    double eval(double r) const;                       // radial profile
    double eval_point(std::span<const double> x) const;
    Symbol to_symbol() const;
};

// Indicator of the closed unit ball, the delta = 0 spectral cutoff. Kept
// separate from RieszSymbol, whose delta must be strictly positive.
Symbol unit_ball_indicator();

// binom(beta, k) = beta (beta-1) ... (beta-k+1) / k!, with binom(beta,0) = 1.
double fractional_binomial(double beta, int k);
// All of binom(beta, 0..K) in one O(K) pass.
std::vector<double> fractional_binomial_sequence(double beta, int K);

// Coefficients of the generalized kernel: c_k = phi_{beta,delta}(k/n),
// |k| <= n. c_0 = 1, values in [0, 1], nonincreasing along rays.
SpectralPolynomial kernel_coefficients(int n, const RieszSymbol& s, int d);

// a_0..a_L with (1-r^beta)_+^delta = sum_nu a_nu (1-r^2)_+^{delta+nu},
// a_0 = (beta/2)^delta. Computed as Taylor coefficients in u = 1-r^2 of
// ((1-(1-u)^{beta/2})/u)^delta by truncated power-series composition.
struct ExpansionCoefficients {
    double beta;
    double delta;
    std::vector<double> a;

    // max_{r in [0,1]} |phi(r) - partial sum| over a dense sample, using the
    // first `terms` coefficients (terms < 0 means all).
    double sup_error(int terms = -1) const;
};

ExpansionCoefficients expansion_coefficients(const RieszSymbol& s, int L);

// C-infinity cutoffs built from e^{-1/t} bump ratios:
// h0 = 1 on |x| <= 4/3 and 0 on |x| > 2; h1 = 1 on |x| <= 1/2 and 0 on
// |x| >= 3/4; h2 = h0 - h1.
enum class Cutoff { h0, h1, h2 };
double cutoff_radial(Cutoff which, double r);
double cutoff_eval(Cutoff which, std::span<const double> x);

}  // namespace br
