#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "br/grid.hpp"
#include "br/riesz.hpp"
#include "br/spectral.hpp"

namespace br {

// Summation method acting as the Fourier multiplier phi(k/n) on the degree-n
// coefficient ball. The symbol must be real, centrally symmetric, supported
// in the closed unit ball, and equal to 1 at the origin; the constructor
// spot-checks those properties and rejects violations.
struct MeansSpec {
    int n;
    int d;
    Symbol symbol;

    MeansSpec(int n, int d, Symbol symbol);
    static MeansSpec riesz(int n, int d, const RieszSymbol& s);
};

// Shifted sampling operator: f is read at the (2n+1)^d nodes t_n^k + lambda,
// t_n^k = 2 pi k / (2n+1), and the samples are resummed against the
// symbol-weighted kernel. lambda is one shift per axis, stored reduced to
// [0, 2 pi).
struct FamilySpec {
    int n;
    int d;
    Symbol symbol;
    std::vector<double> lambda;

    FamilySpec(int n, int d, Symbol symbol, std::vector<double> lambda);
    static FamilySpec riesz(int n, int d, const RieszSymbol& s, std::vector<double> lambda);

    std::size_t node_count() const;  // (2n+1)^d
    MeansSpec means() const;
};

// Norm estimate with its provenance. kernel-l1 and multiplier-sup values are
// exact to quadrature; rayleigh-search and needle values are lower bounds.
struct NormEstimate {
    double value = 0.0;
    std::string method;
    int samples = 0;
    std::uint64_t seed = 0;
};

// Kernel polynomial of the means: coefficient phi(k/n) at every k with
// |k| <= n. Rejects symbols that are nonzero at box corners outside the ball.
SpectralPolynomial multiplier_kernel(const MeansSpec& spec);

// Multiplier action on coefficients. The result lives in the degree-n ball;
// a higher-degree input is truncated to its image box. Constants reproduce
// exactly because phi(0) = 1.
SpectralPolynomial apply_means(const SpectralPolynomial& f, const MeansSpec& spec);
// Grid route: coefficients of degree n are extracted first, which needs
// resolution >= 2n + 2.
SpectralPolynomial apply_means(const GridFunction& f, const MeansSpec& spec);

// Shifted sampling sum, returned by its coefficients
//   e^{-i(m,lambda)} phi(m/n) (2n+1)^{-d} sum_k f(t_n^k + lambda) e^{-i(m,t_n^k)}.
// Aliasing of out-of-band input is intentional operator behavior, so the
// input must be readable at the exact shifted nodes.
SpectralPolynomial apply_family(const Sampler& f, const FamilySpec& spec);
SpectralPolynomial apply_family(const SpectralPolynomial& f, const FamilySpec& spec);
// Grid values are accepted only when every shifted node lands exactly on a
// grid point; anything else would require silent interpolation and throws
// sampling_mismatch.
SpectralPolynomial apply_family(const GridFunction& f, const FamilySpec& spec);

// G(lambda, x) = (shifted sampling sum applied to f, shift lambda)(x) with
// lambda and x both on the N^d grid. Rows (fixed lambda) run in parallel.
BiGridFunction family_apply_bigrid(const Sampler& f, const MeansSpec& spec, int N);
// Same layout for the error f(x) - G(lambda, x).
BiGridFunction family_error_bigrid(const Sampler& f, const MeansSpec& spec, int N);

// Operator norm of the means on L_p, p in [1, inf]. Exact to quadrature at
// p in {1, inf} (kernel L1 mass times (2 pi)^{-d}) and at p = 2 (largest
// multiplier value); otherwise a seeded random-polynomial lower bound.
NormEstimate operator_norm(const MeansSpec& spec, Exponent p, int samples = 48,
                           std::uint64_t seed = 20260819u);

// Family norm sup_f (2 pi)^{-d/p} |G_f|_p / |f|_p over the joint (lambda, x)
// quasi-norm, p in (0, inf]. Estimated from below with a single-cell needle,
// the constant function, and seeded random polynomials; the reported method
// names the winning probe.
NormEstimate family_norm(const MeansSpec& spec, Exponent p, int samples = 16,
                         std::uint64_t seed = 20260819u);

struct ConvergenceReport {
    std::string verdict;  // bounded | growing | inconclusive
    double slope = 0.0;   // fitted d log(norm) / d log(n)
    double residual = 0.0;
    std::vector<double> norms;
};

// Fits log(norm) against log(n). "growing" needs slope > 0.15 with rms
// residual below slope / 2, "bounded" needs slope < 0.05; everything else is
// reported inconclusive rather than silently resolved. Needs >= 4 sizes
// spanning a factor >= 4.
ConvergenceReport convergence_probe(std::span<const double> norms, std::span<const int> ns);

// Norm sweeps feeding the probe: one estimate per n with the same symbol.
ConvergenceReport means_norm_probe(const Symbol& symbol, int d, Exponent p, std::span<const int> ns);
ConvergenceReport family_norm_probe(const Symbol& symbol, int d, Exponent p, std::span<const int> ns);

}  // namespace br
