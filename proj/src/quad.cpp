#include "quad.hpp"

#include <cmath>

#include "br/grid.hpp"
#include "br/types.hpp"

namespace br::quad {

const GaussRule& gl16() {
    static const GaussRule rule = [] {
        GaussRule g{};
        const int m = 16;
        for (int i = 0; i < m; ++i) {
            double x = std::cos(pi * (i + 0.75) / (m + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 64; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= m; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = m * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            g.x[i] = x;
            g.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return g;
    }();
    return rule;
}

double composite_gl(const std::function<double(double)>& f, double a, double b, long panels) {
    const GaussRule& g = gl16();
    double h = (b - a) / panels;
    long double acc = 0.0L;
    for (long p = 0; p < panels; ++p) {
        double mid = a + (p + 0.5) * h;
        double half = 0.5 * h;
        long double s = 0.0L;
        for (int i = 0; i < 16; ++i) s += g.w[i] * f(mid + half * g.x[i]);
        acc += s * half;
    }
    return static_cast<double>(acc);
}

double richardson(const std::function<double(double)>& f, double a, double b, double cap, double tol) {
    if (!(b > a)) return 0.0;
    double len = b - a;
    long n0 = cap > 0.0 && cap < len ? static_cast<long>(std::ceil(len / cap)) : 1;
    if (n0 > (1L << 20)) throw quadrature_nonconvergence("composite quadrature: panel count blew up");
    double prev = composite_gl(f, a, b, n0);
    for (int level = 1; level <= 11; ++level) {
        double cur = composite_gl(f, a, b, n0 << level);
        if (std::abs(cur - prev) <= tol) return cur;
        prev = cur;
    }
    throw quadrature_nonconvergence("composite quadrature: refinement did not stabilize");
}

double sphere_area(int d) { return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d); }

}  // namespace br::quad
