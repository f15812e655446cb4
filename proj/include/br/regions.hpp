#pragma once

#include <string>

#include "br/types.hpp"

namespace br {

// A point of the (1/p, delta) quarter-plane in dimension d. inv_p = 0
// encodes p = infinity.
struct RegionPoint {
    double inv_p;
    double delta;
    int d;

    RegionPoint(double inv_p_, double delta_, int d_);
};

enum class Region { Sigma, Gamma, Omega, None };

// The three clauses. They partition { delta >= 0 } exactly; comparisons are
// the verbatim strict/non-strict ones (Gamma keeps its upper boundary,
// Sigma is open), with no epsilon adjustment.
bool in_sigma(const RegionPoint& pt);   // delta > max{(d-1)/2, d(1/p-1/2)-1/2}
bool in_gamma(const RegionPoint& pt);   // delta <= d|1/p-1/2| - 1/2
bool in_omega(const RegionPoint& pt);   // delta <= (d-1)/2 and delta > d|1/p-1/2| - 1/2

// Exactly one of the three; Region::None is unreachable and guarded.
Region classify(const RegionPoint& pt);

// beta is a positive even integer (exact test, no rounding slack) and
// beta > d (1/p - 1)_+.
bool in_b_region(double inv_p, double beta, int d);

enum class Convergence { yes, no, unknown, not_applicable };

const char* to_string(Region r);
const char* to_string(Convergence c);

struct Verdict {
    Region region;
    Convergence means_converge;
    Convergence family_converge;
    std::string note;
};

// Convergence table. For p >= 1 both verdicts follow the region label alone
// (beta does not matter): Sigma -> yes, Gamma -> no, Omega -> unknown (open
// problem). For p < 1 the family converges iff the point is in Sigma and
// (1/p, beta) is in B(d); the means verdict is not_applicable there.
// p must agree with pt.inv_p.
Verdict verdict(const RegionPoint& pt, double beta, Exponent p);

}  // namespace br
