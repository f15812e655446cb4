#pragma once

#include <span>
#include <string>
#include <vector>

#include "br/grid.hpp"
#include "br/operators.hpp"
#include "br/spectral.hpp"

namespace br {

// One admissible competitor for the realization infimum, labeled by its
// construction.
struct RealizationCandidate {
    std::string id;
    SpectralPolynomial T;
};

struct RealizationResult {
    double value = 0.0;
    std::string candidate_id;
    double approx_term = 0.0;  // the |f - T|_p addend
    double smooth_term = 0.0;  // the t^beta |smoothing operator T|_p addend
};

// Competitors in the degree-floor(1/t) ball: spherical partial sums, symbol
// means over a small (beta', delta', m) lattice, averaged partial sums, and
// (p = 2 only) the per-mode shrinkage a_k / (1 + s |k|^{2 beta}) with s tuned
// on a log grid refined by golden section.
std::vector<RealizationCandidate> realization_candidates(const GridFunction& f, double t, double beta,
                                                         Exponent p);

// min over the candidates of |f - T|_p + t^beta |fractional Laplacian of T|_p.
// Enlarging the candidate list never increases the value.
RealizationResult realization(const GridFunction& f, double t, double beta, Exponent p);
RealizationResult realization(const GridFunction& f, double t, double beta, Exponent p,
                              std::span<const RealizationCandidate> candidates);

// Upper bound for the K-functional: same objective, but every polynomial
// degree the grid resolves is admissible, so the pool is widened past
// floor(1/t). Rejects p < 1, where the functional degenerates to zero.
double k_functional_upper(const GridFunction& f, double t, double beta, Exponent p);

struct ModulusSpec {
    double beta = 0.0;
    int d = 0;
    int r = 0;            // difference order, the minimal integer r > d - 1 + beta
    double U = 0.0;       // radial truncation of the u-integral, >= 1
    int quad_points = 24;  // radial panels per unit and angular nodes of the sampler route

    // Minimal admissible r, and U resolved so that the discarded tail
    //   (2^{2r} sigma_{d-1} / beta) * f_norm_bound * U^{-beta}
    // stays below tol. U is capped at 1e7; a tolerance that would need more
    // throws tail_tolerance_unreachable.
    static ModulusSpec resolve(double beta, int d, double f_norm_bound, double tol);
};

struct ModulusResult {
    double value = 0.0;
    double error_bar = 0.0;  // truncated u-tail plus parts-bounded oscillatory remainders
};

// Smoothness gauge built from 2r-th symmetric differences averaged over all
// steps u h with |u| >= 1 against the weight |u|^{-d-beta}.
//
// Coefficient route: each mode k picks up the exact factor
//   (-4)^r integral over [1, U] of rho^{-1-beta} x (angular average of
//   sin^{2r}(rho h (k, theta) / 2)) drho,
// evaluated through the cos-expansion of sin^{2r} and the closed angular
// forms per dimension. Needs band-limited input.
ModulusResult special_modulus(const SpectralPolynomial& f, double h, const ModulusSpec& spec, Exponent p);

// Cross-check route (d <= 2): product quadrature of the u-integral with the
// finite-difference sum evaluated at every grid node through the exact
// sampler, at the fixed resolution given.
ModulusResult special_modulus(const Sampler& f, int d, double h, const ModulusSpec& spec, Exponent p,
                              int resolution);

struct EquivalenceRow {
    int n = 0;
    double err_means = 0.0;    // |f - means_n f|_p
    double err_family = 0.0;   // joint double norm of f - (shifted sampling sum of f) over the lambda grid
    double realization = 0.0;  // realization value at t = 1/n
    double modulus = 0.0;      // smoothness gauge at h = 1/n
};

struct EquivalenceReport {
    std::vector<EquivalenceRow> rows;
    // Column ratio streams that move monotonically by more than a factor 4
    // across the n-range, as "numerator/denominator" labels.
    std::vector<std::string> drift_flags;
    double c_upper = 0.0;  // max_n err_means / realization
    double c_lower = 0.0;  // max_n realization / err_means
};

// The four error gauges per n plus drift diagnostics. The (1/p, delta) point
// must lie in the everywhere-convergence region unless override_region asks
// for exploration; err_family is reported as the raw double norm, without the
// (2 pi)^{-d/p} comparison factor. tail_tol feeds ModulusSpec::resolve; a
// looser value shortens the modulus quadrature range, which matters for d >= 2.
EquivalenceReport equivalence_report(const SpectralPolynomial& f, double beta, double delta, Exponent p,
                                     std::span<const int> ns, bool override_region = false,
                                     double tail_tol = 1e-8);

}  // namespace br
