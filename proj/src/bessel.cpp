#include "br/bessel.hpp"

#include <cmath>

#include "br/grid.hpp"
#include "br/types.hpp"

namespace br {
namespace detail {

double bessel_series(double nu, double u) {
    if (u == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    // t_0 = (u/2)^nu / Gamma(nu+1), t_m = -t_{m-1} (u/2)^2 / (m (nu+m))
    double t = std::exp(nu * std::log(0.5 * u) - std::lgamma(nu + 1.0));
    double q = 0.25 * u * u;
    double sum = t;
    for (int m = 1; m <= 300; ++m) {
        t *= -q / (m * (nu + m));
        sum += t;
        if (std::abs(t) <= 1e-18 * (std::abs(sum) + 1e-300) && m > 4) break;
    }
    return sum;
}

// Hankel expansion J_nu(u) ~ sqrt(2/(pi u)) [P cos chi - Q sin chi],
// chi = u - nu pi/2 - pi/4, with P/Q the even/odd parts of the series in
// a_k = prod_{j<k} (4 nu^2 - (2j+1)^2) / (k! 8^k) / u^k. Truncated at the
// smallest term (the series is asymptotic, not convergent).
double bessel_asymptotic(double nu, double u) {
    double mu = 4.0 * nu * nu;
    double chi = u - nu * 0.5 * pi - 0.25 * pi;
    double P = 1.0, Q = 0.0;
    double a = 1.0;  // a_k / u^k
    double prev_mag = 1.0;
    for (int k = 1; k <= 24; ++k) {
        double odd = 2.0 * k - 1.0;
        a *= (mu - odd * odd) / (8.0 * k * u);
        double mag = std::abs(a);
        if (mag >= prev_mag) break;  // divergence onset: omit and stop
        double s = ((k / 2) % 2 == 0) ? 1.0 : -1.0;  // (-1)^{floor(k/2)}
        if (k % 2 == 1)
            Q += s * a;
        else
            P += s * a;
        if (mag < 1e-18) break;
        prev_mag = mag;
    }
    return std::sqrt(2.0 / (pi * u)) * (P * std::cos(chi) - Q * std::sin(chi));
}

}  // namespace detail

double bessel_j(double nu, double u) {
    if (!(nu >= 0.0)) throw bad_config("bessel_j: nu must be nonnegative");
    if (!(u >= 0.0)) throw bad_config("bessel_j: u must be nonnegative");
    if (u < detail::bessel_crossover) return detail::bessel_series(nu, u);
    if (nu < 2.0) return detail::bessel_asymptotic(nu, u);
    // Large order at moderate argument: the expansion's a_k blow up with nu,
    // so climb from base orders in [0, 2) by J_{s+1} = (2s/u) J_s - J_{s-1}.
    // Stable upward while the order stays below u, which holds for nu <= u/2.
    if (nu > 0.5 * u) return detail::bessel_series(nu, u);
    double frac = nu - std::floor(nu);
    double jm = detail::bessel_asymptotic(frac, u);        // J_frac
    double j = detail::bessel_asymptotic(frac + 1.0, u);   // J_{frac+1}
    double s = frac + 1.0;
    while (s < nu - 0.5) {
        double jn = (2.0 * s / u) * j - jm;
        jm = j;
        j = jn;
        s += 1.0;
    }
    return j;
}

}  // namespace br
