#include "br/grid.hpp"

#include <cmath>

namespace br {

namespace {

std::size_t checked_total(int d, int N) {
    if (d < 1 || d > 4) throw bad_config("grid dimension must be in [1, 4]");
    if (N < 1) throw bad_config("grid resolution must be positive");
    std::size_t total = 1;
    for (int a = 0; a < d; ++a) total *= static_cast<std::size_t>(N);
    return total;
}

}  // namespace

GridFunction::GridFunction(int d, int N) : d_(d), N_(N), v_(checked_total(d, N), 0.0) {}

GridFunction GridFunction::sample(int d, int N, const Sampler& f) {
    GridFunction g(d, N);
    std::vector<double> x(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.node(i, x);
        g[i] = f(x);
    }
    return g;
}

double GridFunction::cell_volume() const {
    return std::pow(two_pi / static_cast<double>(N_), static_cast<double>(d_));
}

void GridFunction::node(std::size_t flat, std::span<double> out) const {
    const double h = two_pi / static_cast<double>(N_);
    for (int a = d_ - 1; a >= 0; --a) {
        out[static_cast<std::size_t>(a)] = h * static_cast<double>(flat % static_cast<std::size_t>(N_));
        flat /= static_cast<std::size_t>(N_);
    }
}

BiGridFunction::BiGridFunction(int d, int N)
    : d_(d), N_(N), rows_(checked_total(d, N)), v_(rows_ * rows_, 0.0) {}

double BiGridFunction::cell_volume() const {
    return std::pow(two_pi / static_cast<double>(N_), static_cast<double>(d_));
}

}  // namespace br
