#pragma once

namespace br {

// J_nu(u) for nu >= 0, u >= 0. Ascending series below the crossover,
// Hankel large-argument expansion above, upward recurrence from base orders
// in [0, 2) when the expansion's order-dependent terms would be too large.
// Absolute error at the crossover is below 1e-10 for nu <= 8, the range the
// transforms use (nu = d/2 + delta at desk-scale d and delta).
double bessel_j(double nu, double u);

namespace detail {

// The two halves, exposed for crossover tests.
double bessel_series(double nu, double u);
double bessel_asymptotic(double nu, double u);
// Crossover argument between them.
inline constexpr double bessel_crossover = 14.0;

}  // namespace detail

}  // namespace br
