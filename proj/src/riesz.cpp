#include "br/riesz.hpp"

#include <cmath>
#include <cstdio>

namespace br {

namespace {

double euclid(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

}  // namespace

RieszSymbol::RieszSymbol(double beta_, double delta_) : beta(beta_), delta(delta_) {
    if (!(beta > 0.0)) throw bad_config("RieszSymbol: beta must be positive");
    if (!(delta > 0.0)) throw bad_config("RieszSymbol: delta must be positive");
}

double RieszSymbol::eval(double r) const {
    r = std::abs(r);
    if (r >= 1.0) return 0.0;
    if (r == 0.0) return 1.0;
    return std::pow(1.0 - std::pow(r, beta), delta);
}

double RieszSymbol::eval_point(std::span<const double> x) const {
    return eval(euclid(x));
}

Symbol RieszSymbol::to_symbol() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "phi(beta=%.6g,delta=%.6g)", beta, delta);
    RieszSymbol s = *this;
    return Symbol{[s](std::span<const double> x) { return s.eval_point(x); }, buf};
}

Symbol unit_ball_indicator() {
    return Symbol{[](std::span<const double> x) { return euclid(x) <= 1.0 ? 1.0 : 0.0; },
                  "unit_ball_indicator"};
}

double fractional_binomial(double beta, int k) {
    if (k < 0) throw bad_config("fractional_binomial: k must be nonnegative");
    double b = 1.0;
    for (int j = 1; j <= k; ++j) b *= (beta - (j - 1)) / j;
    return b;
}

std::vector<double> fractional_binomial_sequence(double beta, int K) {
    if (K < 0) throw bad_config("fractional_binomial_sequence: K must be nonnegative");
    std::vector<double> b(static_cast<std::size_t>(K) + 1);
    b[0] = 1.0;
    for (int j = 1; j <= K; ++j) b[j] = b[j - 1] * (beta - (j - 1)) / j;
    return b;
}

SpectralPolynomial kernel_coefficients(int n, const RieszSymbol& s, int d) {
    if (n < 1) throw bad_config("kernel_coefficients: n must be at least 1");
    SpectralPolynomial T(d, n);
    for (std::size_t flat = 0; flat < T.box_size(); ++flat) {
        double r = T.index_length(flat) / n;
        double v = s.eval(r);
        if (v != 0.0) T.set_flat(flat, v);
    }
    return T;
}

double ExpansionCoefficients::sup_error(int terms) const {
    std::size_t m = terms < 0 ? a.size() : std::min<std::size_t>(terms, a.size());
    const int samples = 2049;
    RieszSymbol phi(beta, delta);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        double r = static_cast<double>(i) / (samples - 1);
        double u = 1.0 - r * r;
        double w = std::pow(u, delta);
        double sum = 0.0;
        for (std::size_t nu = 0; nu < m; ++nu) {
            sum += a[nu] * w;
            w *= u;
        }
        worst = std::max(worst, std::abs(phi.eval(r) - sum));
    }
    return worst;
}

// Taylor coefficients of g = h^delta from those of h via the standard
// power-rule recurrence m g_m h_0 = sum_{j=1..m} ((delta+1) j - m) h_j g_{m-j},
// where h(u) = (1 - (1-u)^{beta/2}) / u has h_j = (-1)^j binom(beta/2, j+1).
ExpansionCoefficients expansion_coefficients(const RieszSymbol& s, int L) {
    if (L < 0) throw bad_config("expansion_coefficients: L must be nonnegative");
    std::vector<double> binom = fractional_binomial_sequence(s.beta / 2.0, L + 1);
    std::vector<double> h(static_cast<std::size_t>(L) + 1);
    for (int j = 0; j <= L; ++j) h[j] = (j % 2 == 0 ? 1.0 : -1.0) * binom[j + 1];

    std::vector<double> g(static_cast<std::size_t>(L) + 1);
    g[0] = std::pow(h[0], s.delta);
    for (int m = 1; m <= L; ++m) {
        double acc = 0.0;
        for (int j = 1; j <= m; ++j) acc += ((s.delta + 1.0) * j - m) * h[j] * g[m - j];
        g[m] = acc / (m * h[0]);
    }

    ExpansionCoefficients out{s.beta, s.delta, std::move(g)};
    if (L >= 4) {
        int q = L / 4;
        double full = out.sup_error();
        double part = out.sup_error(L + 1 - q);
        if (full > part * (1.0 + 1e-9))
            throw series_divergence("expansion_coefficients: sup error grew over the last quarter of terms");
    }
    return out;
}

namespace {

// exp(-1/t) glued to 0 at t <= 0; the ratio below is the C-infinity
// transition that is exactly 0 at t = 0 and exactly 1 at t = 1.
double bump_half(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = bump_half(t);
    return a / (a + bump_half(1.0 - t));
}

}  // namespace

double cutoff_radial(Cutoff which, double r) {
    r = std::abs(r);
    switch (which) {
        case Cutoff::h0:
            if (r <= 4.0 / 3.0) return 1.0;
            return smoothstep((2.0 - r) / (2.0 / 3.0));
        case Cutoff::h1:
            if (r <= 0.5) return 1.0;
            return smoothstep((0.75 - r) / 0.25);
        case Cutoff::h2:
            return cutoff_radial(Cutoff::h0, r) - cutoff_radial(Cutoff::h1, r);
    }
    throw bad_config("cutoff_radial: unknown cutoff");
}

double cutoff_eval(Cutoff which, std::span<const double> x) {
    return cutoff_radial(which, euclid(x));
}

}  // namespace br
