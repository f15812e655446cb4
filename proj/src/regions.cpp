#include "br/regions.hpp"

#include <cmath>

namespace br {

RegionPoint::RegionPoint(double inv_p_, double delta_, int d_)
    : inv_p(inv_p_), delta(delta_), d(d_) {
    if (!(inv_p >= 0.0)) throw bad_config("RegionPoint: inv_p must be nonnegative");
    if (!(delta >= 0.0)) throw bad_config("RegionPoint: delta must be nonnegative");
    if (d < 1) throw bad_config("RegionPoint: d must be at least 1");
}

bool in_sigma(const RegionPoint& pt) {
    double a = (pt.d - 1) / 2.0;
    double b = pt.d * (pt.inv_p - 0.5) - 0.5;
    return pt.delta > std::max(a, b);
}

bool in_gamma(const RegionPoint& pt) {
    return pt.delta <= pt.d * std::abs(pt.inv_p - 0.5) - 0.5;
}

bool in_omega(const RegionPoint& pt) {
    return pt.delta <= (pt.d - 1) / 2.0 &&
           pt.delta > pt.d * std::abs(pt.inv_p - 0.5) - 0.5;
}

Region classify(const RegionPoint& pt) {
    bool s = in_sigma(pt), g = in_gamma(pt), o = in_omega(pt);
    if (s && !g && !o) return Region::Sigma;
    if (g && !s && !o) return Region::Gamma;
    if (o && !s && !g) return Region::Omega;
    throw bad_config("classify: region clauses failed to partition");
}

bool in_b_region(double inv_p, double beta, int d) {
    if (!(beta > 0.0)) throw bad_config("in_b_region: beta must be positive");
    if (!(inv_p >= 0.0)) throw bad_config("in_b_region: inv_p must be nonnegative");
    if (d < 1) throw bad_config("in_b_region: d must be at least 1");
    double r = std::nearbyint(beta);
    bool even = (r == beta) && (std::fmod(r, 2.0) == 0.0);
    return even && beta > d * std::max(inv_p - 1.0, 0.0);
}

const char* to_string(Region r) {
    switch (r) {
        case Region::Sigma: return "Sigma";
        case Region::Gamma: return "Gamma";
        case Region::Omega: return "Omega";
        case Region::None: return "None";
    }
    return "None";
}

const char* to_string(Convergence c) {
    switch (c) {
        case Convergence::yes: return "yes";
        case Convergence::no: return "no";
        case Convergence::unknown: return "unknown";
        case Convergence::not_applicable: return "not_applicable";
    }
    return "unknown";
}

Verdict verdict(const RegionPoint& pt, double beta, Exponent p) {
    if (std::abs(p.inv() - pt.inv_p) > 1e-12)
        throw bad_config("verdict: p disagrees with pt.inv_p");
    Verdict v;
    v.region = classify(pt);
    if (p.is_inf() || p.value() >= 1.0) {
        switch (v.region) {
            case Region::Sigma:
                v.means_converge = v.family_converge = Convergence::yes;
                break;
            case Region::Gamma:
                v.means_converge = v.family_converge = Convergence::no;
                break;
            default:
                v.means_converge = v.family_converge = Convergence::unknown;
                v.note = "open problem strip";
                break;
        }
        return v;
    }
    v.means_converge = Convergence::not_applicable;
    bool ok = v.region == Region::Sigma && in_b_region(pt.inv_p, beta, pt.d);
    v.family_converge = ok ? Convergence::yes : Convergence::no;
    v.note = "p<1: family needs Sigma and an admissible even beta";
    return v;
}

}  // namespace br
