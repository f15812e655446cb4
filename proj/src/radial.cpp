#include "br/radial.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>

#include "br/bessel.hpp"
#include "br/grid.hpp"
#include "br/kernels.hpp"
#include "br/regions.hpp"

#include "quad.hpp"

namespace br {

namespace {

using quad::richardson;
using quad::sphere_area;

}  // namespace

RadialProfile RadialProfile::from_function(int d, double R, std::function<double(double)> f,
                                           std::vector<double> breakpoints, int samples) {
    if (d < 1) throw bad_config("RadialProfile: d must be at least 1");
    if (!(R > 0.0)) throw bad_config("RadialProfile: support radius must be positive");
    if (samples < 2) throw bad_config("RadialProfile: need at least 2 samples");
    RadialProfile p;
    p.d = d;
    p.support_radius = R;
    p.eval = std::move(f);
    p.breakpoints = std::move(breakpoints);
    p.radii.resize(samples);
    p.values.resize(samples);
    for (int i = 0; i < samples; ++i) {
        double r = R * i / (samples - 1);
        p.radii[i] = r;
        p.values[i] = p.eval(r);
        if (!std::isfinite(p.values[i])) throw bad_config("RadialProfile: non-finite value");
    }
    return p;
}

RadialProfile RadialProfile::from_samples(int d, std::vector<double> radii,
                                          std::vector<double> values) {
    if (d < 1) throw bad_config("RadialProfile: d must be at least 1");
    if (radii.size() != values.size() || radii.size() < 2)
        throw bad_config("RadialProfile: radii/values size mismatch");
    if (radii.front() != 0.0) throw bad_config("RadialProfile: radii must start at 0");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1]))
            throw bad_config("RadialProfile: radii must be strictly increasing");
    for (double v : values)
        if (!std::isfinite(v)) throw bad_config("RadialProfile: non-finite value");
    RadialProfile p;
    p.d = d;
    p.radii = std::move(radii);
    p.values = std::move(values);
    p.support_radius = p.radii.back();
    return p;
}

double RadialProfile::operator()(double r) const {
    r = std::abs(r);
    if (r > support_radius) return 0.0;
    if (eval) return eval(r);
    auto it = std::upper_bound(radii.begin(), radii.end(), r);
    if (it == radii.begin()) return values.front();
    if (it == radii.end()) return values.back();
    std::size_t hi = it - radii.begin();
    double t = (r - radii[hi - 1]) / (radii[hi] - radii[hi - 1]);
    return (1.0 - t) * values[hi - 1] + t * values[hi];
}

double radial_transform(const RadialProfile& profile, double y, Convention conv,
                        double tol) {
    if (!(y >= 0.0)) throw bad_config("radial_transform: y must be nonnegative");
    if (!(tol > 0.0)) throw bad_config("radial_transform: tol must be positive");
    double y_eff = conv == Convention::two_pi ? two_pi * y : y;
    double R = profile.support_radius;
    int d = profile.d;

    // integrand weight against the profile, picked by dimension
    std::function<double(double)> w;
    if (y_eff * R < 1e-8) {
        double area = sphere_area(d);
        w = [&profile, d, area](double r) {
            return area * profile(r) * std::pow(r, d - 1);
        };
    } else if (d == 1) {
        w = [&profile, y_eff](double r) { return 2.0 * profile(r) * std::cos(r * y_eff); };
    } else {
        double nu = 0.5 * d - 1.0;
        double pref = std::pow(two_pi, 0.5 * d) * std::pow(y_eff, 1.0 - 0.5 * d);
        w = [&profile, y_eff, nu, pref, d](double r) {
            return pref * profile(r) * bessel_j(nu, r * y_eff) * std::pow(r, 0.5 * d);
        };
    }

    std::vector<double> cuts{0.0, R};
    for (double b : profile.breakpoints)
        if (b > 1e-14 && b < R - 1e-14) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-14; }),
               cuts.end());

    double piece_tol = tol / (cuts.size() - 1);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        if (b == R) {
            // r = R sin(theta): turns (R^2 - r^2)^delta endpoint factors with
            // integral 2*delta into analytic cos powers
            double ta = std::asin(std::min(1.0, a / R));
            auto g = [&w, R](double th) { return w(R * std::sin(th)) * R * std::cos(th); };
            double cap = y_eff * R > 0.0 ? 3.0 * pi / (y_eff * R) : 0.0;
            total += richardson(g, ta, 0.5 * pi, cap, piece_tol);
        } else {
            double cap = y_eff > 0.0 ? 3.0 * pi / y_eff : 0.0;
            total += richardson(w, a, b, cap, piece_tol);
        }
    }
    return total;
}

double ball_transform_closed_form(double delta, int d, double y) {
    if (!(delta >= 0.0)) throw bad_config("ball_transform_closed_form: delta must be >= 0");
    if (d < 1) throw bad_config("ball_transform_closed_form: d must be at least 1");
    if (!(y > 0.0)) throw bad_config("ball_transform_closed_form: y must be positive");
    double nu = 0.5 * d + delta;
    return std::pow(pi, -delta) * std::tgamma(delta + 1.0) * bessel_j(nu, two_pi * y) /
           std::pow(y, nu);
}

double ball_oscillation_envelope(double delta, int d, double y) {
    return std::pow(pi, -delta - 1.0) * std::tgamma(delta + 1.0) *
           std::pow(y, -(0.5 * (d + 1) + delta));
}

DecayFit fit_envelope_decay(std::span<const double> y, std::span<const double> absF) {
    if (y.size() != absF.size() || y.empty())
        throw bad_config("fit_envelope_decay: size mismatch");
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] > 0.0)) throw bad_config("fit_envelope_decay: y must be positive");
        if (i > 0 && !(y[i] > y[i - 1]))
            throw bad_config("fit_envelope_decay: y must be increasing");
        if (!(absF[i] >= 0.0)) throw bad_config("fit_envelope_decay: |F| must be >= 0");
    }
    double y_lo = y.front();
    int nb = std::max(1, static_cast<int>(std::ceil(std::log2(y.back() / y_lo) - 1e-9)));
    std::vector<double> best(nb, 0.0), best_y(nb, 0.0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        int j = std::min(nb - 1, static_cast<int>(std::floor(std::log2(y[i] / y_lo) *
                                                             (1.0 + 1e-12))));
        if (absF[i] > best[j]) {
            best[j] = absF[i];
            best_y[j] = y[i];
        }
    }
    std::vector<double> lx, lz;
    for (int j = 0; j < nb; ++j)
        if (best[j] > 0.0) {
            lx.push_back(std::log(best_y[j]));
            lz.push_back(std::log(best[j]));
        }
    if (lx.size() < 4)
        throw insufficient_blocks("fit_envelope_decay: need at least 4 dyadic blocks");

    std::size_t m = lx.size();
    double mx = 0.0, mz = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += lx[i];
        mz += lz[i];
    }
    mx /= m;
    mz /= m;
    double sxx = 0.0, sxz = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxz += (lx[i] - mx) * (lz[i] - mz);
    }
    double slope = sxz / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double dev = lz[i] - (mz + slope * (lx[i] - mx));
        rss += dev * dev;
    }
    return DecayFit{slope, std::sqrt(rss / m), y.front(), y.back(),
                    static_cast<int>(m)};
}

namespace {

// log-spaced sweep of the transform of `profile`, parallel over y; exceptions
// may not escape the worker loop, so the first one is parked and rethrown
std::vector<double> transform_sweep(const RadialProfile& profile,
                                    const std::vector<double>& ys,
                                    const std::function<double(double)>& tol_at) {
    std::vector<double> F(ys.size());
    std::exception_ptr err = nullptr;
    std::mutex err_mtx;
    kern::parallel_for(ys.size(), [&](std::size_t i) {
        try {
            F[i] = radial_transform(profile, ys[i], Convention::two_pi, tol_at(ys[i]));
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mtx);
            if (!err) err = std::current_exception();
        }
    });
    if (err) std::rethrow_exception(err);
    return F;
}

std::vector<double> log_spaced(double y_lo, double y_hi, int per_octave) {
    std::vector<double> ys;
    double octaves = std::log2(y_hi / y_lo);
    int count = static_cast<int>(std::ceil(octaves * per_octave));
    for (int i = 0; i <= count; ++i)
        ys.push_back(y_lo * std::pow(2.0, octaves * i / count));
    ys.back() = y_hi;
    return ys;
}

}  // namespace

AnnulusReport annulus_transform_check(double delta, int d, double y_lo, double y_hi) {
    if (!(delta > 0.0)) throw bad_config("annulus_transform_check: delta must be positive");
    if (!(y_lo >= 1.0)) throw bad_config("annulus_transform_check: y range must start at 1 or above");
    if (!(y_hi > y_lo)) throw bad_config("annulus_transform_check: empty y range");
    RieszSymbol phi(2.0, delta);
    auto fn = [phi](double r) { return cutoff_radial(Cutoff::h2, r) * phi.eval(r); };
    RadialProfile profile = RadialProfile::from_function(d, 1.0, fn, {0.5, 0.75});

    double amp = std::pow(pi, -delta - 1.0) * std::tgamma(delta + 1.0);
    double s = 0.5 * (d + 1) + delta;

    // The inner cutoff h1 phi is C-infinity, so its transform decays faster
    // than any power, but at small y it still swamps the boundary term the
    // lemma is about. Trim the start of the fit range until the measured
    // smooth part sits below a tenth of the boundary envelope.
    RadialProfile inner = RadialProfile::from_function(
        d, 0.75, [phi](double r) { return cutoff_radial(Cutoff::h1, r) * phi.eval(r); },
        {0.5});
    // The smooth part itself oscillates through nodes, so probe several
    // phases per candidate start to estimate its antinode envelope.
    double y_start = y_lo;
    while (y_start * 16.0 <= y_hi) {
        double worst = 0.0;
        for (double f : {1.0, 1.04, 1.09, 1.14, 1.19, 1.25, 1.32, 1.41}) {
            double v = std::abs(
                radial_transform(inner, y_start * f, Convention::two_pi, 1e-12));
            worst = std::max(worst, v / (amp * std::pow(y_start * f, -s)));
        }
        if (worst <= 0.1) break;
        y_start *= 2.0;
    }
    if (y_start * 16.0 > y_hi)
        throw insufficient_blocks(
            "annulus_transform_check: smooth part dominates the requested y range");

    std::vector<double> ys = log_spaced(y_start, y_hi, 24);
    auto tol_at = [amp, s](double y) {
        return std::max(1e-13, 1e-5 * amp * std::pow(y, -s));
    };
    std::vector<double> F = transform_sweep(profile, ys, tol_at);

    std::vector<double> absF(F.size()), resid(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) {
        absF[i] = std::abs(F[i]);
        double lead = amp *
                      std::cos(two_pi * ys[i] - 0.25 * pi * (d + 2.0 * delta) - 0.25 * pi) /
                      std::pow(ys[i], s);
        resid[i] = std::abs(F[i] - lead);
    }
    AnnulusReport rep;
    rep.envelope = fit_envelope_decay(ys, absF);
    rep.residual = fit_envelope_decay(ys, resid);
    rep.leading_amplitude = amp;
    return rep;
}

TailReport symbol_transform_tail(const RieszSymbol& s, int d, Exponent p) {
    if (d < 1) throw bad_config("symbol_transform_tail: d must be at least 1");
    RadialProfile profile =
        RadialProfile::from_function(d, 1.0, [s](double r) { return s.eval(r); });
    std::vector<double> ys = log_spaced(2.0, 64.0, 16);
    std::vector<double> F = transform_sweep(profile, ys, [](double) { return 1e-11; });
    for (double& v : F) v = std::abs(v);

    TailReport rep;
    rep.fit = fit_envelope_decay(ys, F);
    rep.verdict_applicable = !p.is_inf() && p.value() <= 1.0;
    double inv_p = p.inv();
    rep.predicted_integrable = in_b_region(inv_p, s.beta, d) &&
                               s.delta > d * (inv_p - 0.5) - 0.5;
    if (p.is_inf())
        rep.numeric_integrable = rep.fit.exponent < 0.0;
    else
        rep.numeric_integrable = p.value() * (-rep.fit.exponent) > d;
    return rep;
}

}  // namespace br
