#pragma once

#include <functional>
#include <span>
#include <vector>

#include "br/riesz.hpp"
#include "br/types.hpp"

namespace br {

// Radial profile on [0, R], treated as 0 beyond R. The sample arrays are the
// persistent representation; `eval`, when present, is the exact evaluator the
// quadrature uses (sampled profiles fall back to linear interpolation).
// `breakpoints` marks interior radii where smoothness drops, so integration
// panels never straddle them.
struct RadialProfile {
    int d;
    std::vector<double> radii;
    std::vector<double> values;
    double support_radius;
    std::function<double(double)> eval;
    std::vector<double> breakpoints;

    static RadialProfile from_function(int d, double R, std::function<double(double)> f,
                                       std::vector<double> breakpoints = {},
                                       int samples = 1025);
    static RadialProfile from_samples(int d, std::vector<double> radii,
                                      std::vector<double> values);

    double operator()(double r) const;
};

// e^{-i(x,y)} has two common scalings; `plain` is that one, `two_pi` is
// e^{-2 pi i (x,y)}, i.e. the plain transform read at 2 pi y.
enum class Convention { plain, two_pi };

// F(|y|) = integral over R^d of profile(|x|) e^{-i(x,y)} dx, reduced to a
// Bessel-weighted radial integral. Composite Gauss-Legendre panels sized to
// the oscillation, with a sin-substitution on the outermost panel so that
// (R^2-r^2)^delta endpoint factors with 2*delta integral stay analytic.
// Richardson doubling until successive refinements agree to tol; throws
// quadrature_nonconvergence otherwise.
double radial_transform(const RadialProfile& profile, double y, Convention conv,
                        double tol = 1e-10);

// pi^{-delta} Gamma(delta+1) J_{d/2+delta}(2 pi y) / y^{d/2+delta}: the
// transform of (1-|x|^2)_+^delta under the two_pi convention.
double ball_transform_closed_form(double delta, int d, double y);

// Amplitude of the oscillation of ball_transform_closed_form for large y:
// pi^{-delta-1} Gamma(delta+1) y^{-(d+1)/2-delta}. The natural comparison
// scale for transform errors, since the transform itself passes through 0.
double ball_oscillation_envelope(double delta, int d, double y);

// Log-log least squares on dyadic block maxima of |F|. The block abscissa is
// the y at the block's max, which keeps oscillating envelopes honest.
struct DecayFit {
    double exponent;
    double residual;   // RMS of log-envelope deviations from the fit
    double y_lo, y_hi;
    int blocks;
};

DecayFit fit_envelope_decay(std::span<const double> y, std::span<const double> absF);

// Probes the annulus profile h2 * phi_{2,delta}: fits the envelope exponent
// of its transform, subtracts the boundary-term asymptotic
//   pi^{-delta-1} Gamma(delta+1) cos(2 pi y - pi(d/2+delta)/2 - pi/4)
//     / y^{(d+1)/2+delta}
// and fits the residual's exponent. The inner cutoff's own transform decays
// superpolynomially but dominates at small y, so the fit range is trimmed to
// start where that part measures below a tenth of the boundary envelope;
// throws insufficient_blocks when fewer than 4 octaves survive the trim.
struct AnnulusReport {
    DecayFit envelope;
    DecayFit residual;
    double leading_amplitude;
};

AnnulusReport annulus_transform_check(double delta, int d, double y_lo, double y_hi);

// Transform tail of phi_{beta,delta}: fitted envelope exponent alpha plus the
// integrability verdicts. predicted_integrable applies for 0 < p <= 1 only
// (verdict_applicable says so); numeric_integrable tests p * (-alpha) > d on
// the fitted range.
struct TailReport {
    DecayFit fit;
    bool verdict_applicable;
    bool predicted_integrable;
    bool numeric_integrable;
};

TailReport symbol_transform_tail(const RieszSymbol& s, int d, Exponent p);

}  // namespace br
