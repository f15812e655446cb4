#include "br/spectral.hpp"

#include <cmath>
#include <cstdlib>

#include "br/kernels.hpp"

namespace br {

namespace {

std::size_t box_total(int d, int n) {
    if (d < 1 || d > 4) throw bad_config("polynomial dimension must be in [1, 4]");
    if (n < 0) throw bad_config("polynomial degree must be nonnegative");
    std::size_t total = 1;
    for (int a = 0; a < d; ++a) total *= static_cast<std::size_t>(2 * n + 1);
    return total;
}

// e^{-i 2 pi r / N} for r = 0..N-1.
std::vector<cd> unit_roots(int N) {
    std::vector<cd> w(static_cast<std::size_t>(N));
    for (int r = 0; r < N; ++r) w[static_cast<std::size_t>(r)] = std::polar(1.0, -two_pi * r / N);
    return w;
}

int phase_mod(long long m, long long j, int N) {
    long long r = (m * j) % N;
    if (r < 0) r += N;
    return static_cast<int>(r);
}

}  // namespace

SpectralPolynomial::SpectralPolynomial(int d, int degree)
    : d_(d), n_(degree), c_(box_total(d, degree), cd(0.0, 0.0)) {}

std::size_t SpectralPolynomial::flat_index(std::span<const int> m) const {
    std::size_t flat = 0;
    const std::size_t L = static_cast<std::size_t>(side());
    for (int a = 0; a < d_; ++a) {
        const int ma = m[static_cast<std::size_t>(a)];
        if (ma < -n_ || ma > n_) throw bad_config("coefficient index outside the box");
        flat = flat * L + static_cast<std::size_t>(ma + n_);
    }
    return flat;
}

void SpectralPolynomial::unflatten(std::size_t flat, std::span<int> m) const {
    const std::size_t L = static_cast<std::size_t>(side());
    for (int a = d_ - 1; a >= 0; --a) {
        m[static_cast<std::size_t>(a)] = static_cast<int>(flat % L) - n_;
        flat /= L;
    }
}

bool SpectralPolynomial::in_ball(std::span<const int> m) const {
    long long s = 0;
    for (int a = 0; a < d_; ++a) {
        const long long ma = m[static_cast<std::size_t>(a)];
        s += ma * ma;
    }
    return s <= static_cast<long long>(n_) * static_cast<long long>(n_);
}

double SpectralPolynomial::index_length(std::size_t flat) const {
    const std::size_t L = static_cast<std::size_t>(side());
    long long s = 0;
    for (int a = d_ - 1; a >= 0; --a) {
        const long long ma = static_cast<long long>(flat % L) - n_;
        s += ma * ma;
        flat /= L;
    }
    return std::sqrt(static_cast<double>(s));
}

void SpectralPolynomial::set(std::span<const int> m, cd v) {
    if (!in_ball(m)) throw bad_config("coefficient index outside the ball |k| <= n");
    c_[flat_index(m)] = v;
}

void SpectralPolynomial::set_flat(std::size_t i, cd v) {
    if (index_length(i) > static_cast<double>(n_)) throw bad_config("coefficient index outside the ball |k| <= n");
    c_[i] = v;
}

double SpectralPolynomial::max_abs_coeff() const {
    double m = 0.0;
    for (const cd& v : c_) m = std::max(m, std::abs(v));
    return m;
}

void SpectralPolynomial::check_hermitian(double tol) const {
    const double scale = max_abs_coeff();
    if (scale == 0.0) return;
    const std::size_t total = c_.size();
    // The mirror of multi-index m is -m, and its flat index is total-1-flat.
    for (std::size_t i = 0; i < total; ++i) {
        const cd diff = c_[i] - std::conj(c_[total - 1 - i]);
        if (std::abs(diff) > tol * scale)
            throw symmetry_violation("coefficients are not Hermitian-symmetric: |c_k - conj(c_{-k})| = " +
                                     std::to_string(std::abs(diff)));
    }
}

double SpectralPolynomial::eval(std::span<const double> x) const {
    const int L = side();
    // Per-axis phase tables e^{i m x_a}, m = -n..n.
    std::vector<cd> phase(static_cast<std::size_t>(d_) * static_cast<std::size_t>(L));
    for (int a = 0; a < d_; ++a)
        for (int mi = 0; mi < L; ++mi)
            phase[static_cast<std::size_t>(a * L + mi)] =
                std::polar(1.0, (mi - n_) * x[static_cast<std::size_t>(a)]);

    cd acc(0.0, 0.0);
    const std::size_t total = c_.size();
    for (std::size_t i = 0; i < total; ++i) {
        if (c_[i] == cd(0.0, 0.0)) continue;
        cd ph(1.0, 0.0);
        std::size_t rest = i;
        for (int a = d_ - 1; a >= 0; --a) {
            const int mi = static_cast<int>(rest % static_cast<std::size_t>(L));
            rest /= static_cast<std::size_t>(L);
            ph *= phase[static_cast<std::size_t>(a * L + mi)];
        }
        acc += c_[i] * ph;
    }
    return acc.real();
}

namespace {

// Runs the d separable contraction stages taking per-axis length len_from to
// len_to with the given table (len_to x len_from, row-major).
std::vector<cd> run_stages(std::vector<cd> buf, int d, std::size_t len_from, std::size_t len_to,
                           const std::vector<cd>& table) {
    std::vector<cd> out;
    for (int a = 0; a < d; ++a) {
        std::size_t outer = 1, inner = 1;
        for (int b = 0; b < a; ++b) outer *= len_to;
        for (int b = a + 1; b < d; ++b) inner *= len_from;
        out.assign(outer * len_to * inner, cd(0.0, 0.0));
        kern::stage(buf.data(), out.data(), outer, inner, len_from, len_to, table.data());
        buf.swap(out);
    }
    return buf;
}

}  // namespace

SpectralPolynomial analyze(const GridFunction& f, int degree) {
    if (degree < 0) throw bad_config("analysis degree must be nonnegative");
    const int N = f.resolution();
    if (N < 2 * degree + 2)
        throw resolution_too_small("analysis of degree " + std::to_string(degree) + " needs resolution >= " +
                                   std::to_string(2 * degree + 2) + ", got " + std::to_string(N));
    const int d = f.dims();
    const int L = 2 * degree + 1;

    const std::vector<cd> w = unit_roots(N);
    std::vector<cd> table(static_cast<std::size_t>(L) * static_cast<std::size_t>(N));
    for (int mi = 0; mi < L; ++mi) {
        const long long m = mi - degree;
        for (int j = 0; j < N; ++j)
            table[static_cast<std::size_t>(mi) * N + j] = w[static_cast<std::size_t>(phase_mod(m, j, N))] / static_cast<double>(N);
    }

    std::vector<cd> buf(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) buf[i] = cd(f[i], 0.0);
    buf = run_stages(std::move(buf), d, static_cast<std::size_t>(N), static_cast<std::size_t>(L), table);

    SpectralPolynomial T(d, degree);
    for (std::size_t i = 0; i < buf.size(); ++i)
        if (T.index_length(i) <= static_cast<double>(degree)) T.raw()[i] = buf[i];
    return T;
}

GridFunction synthesize(const SpectralPolynomial& T, int N) {
    const int n = T.degree();
    if (N < 2 * n + 2)
        throw resolution_too_small("synthesis of degree " + std::to_string(n) + " needs resolution >= " +
                                   std::to_string(2 * n + 2) + ", got " + std::to_string(N));
    T.check_hermitian();
    const int d = T.dims();
    const int L = T.side();

    const std::vector<cd> w = unit_roots(N);
    std::vector<cd> table(static_cast<std::size_t>(N) * static_cast<std::size_t>(L));
    for (int j = 0; j < N; ++j)
        for (int mi = 0; mi < L; ++mi)
            table[static_cast<std::size_t>(j) * L + mi] =
                std::conj(w[static_cast<std::size_t>(phase_mod(mi - n, j, N))]);

    std::vector<cd> buf =
        run_stages(std::vector<cd>(T.raw()), d, static_cast<std::size_t>(L), static_cast<std::size_t>(N), table);

    GridFunction g(d, N);
    const double scale = T.max_abs_coeff();
    double max_imag = 0.0;
    for (std::size_t i = 0; i < buf.size(); ++i) {
        g[i] = buf[i].real();
        max_imag = std::max(max_imag, std::abs(buf[i].imag()));
    }
    if (scale > 0.0 && max_imag > 1e-10 * scale)
        throw symmetry_violation("synthesis left an imaginary residue of " + std::to_string(max_imag));
    return g;
}

double lp_norm(const GridFunction& f, Exponent p) {
    if (p.is_inf()) return kern::reduce_max_abs(f.values());
    const double s = kern::reduce_pow(f.values(), p.value());
    return std::pow(f.cell_volume() * s, 1.0 / p.value());
}

double lp_norm(const SpectralPolynomial& T, Exponent p) {
    return lp_norm(synthesize(T, quad_resolution(T.degree())), p);
}

double double_norm(const BiGridFunction& F, Exponent p) {
    const std::size_t rows = F.nodes_per_axis_set();
    if (p.is_inf()) {
        double m = 0.0;
        for (std::size_t r = 0; r < rows; ++r) m = std::max(m, kern::reduce_max_abs_serial(F.row(r)));
        return m;
    }
    const double pv = p.value();
    const double cv = F.cell_volume();
    double outer = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        const double inner = std::pow(cv * kern::reduce_pow_serial(F.row(r), pv), 1.0 / pv);
        outer += std::pow(inner, pv);
    }
    return std::pow(cv * outer, 1.0 / pv);
}

SpectralPolynomial fractional_laplacian(const SpectralPolynomial& T, double beta) {
    if (!(beta > 0.0)) throw bad_config("fractional Laplacian order must be positive");
    SpectralPolynomial out(T.dims(), T.degree());
    for (std::size_t i = 0; i < T.box_size(); ++i) {
        const double len = T.index_length(i);
        out.raw()[i] = len == 0.0 ? cd(0.0, 0.0) : T.coeff_flat(i) * std::pow(len, beta);
    }
    return out;
}

Symbol Symbol::radial(std::function<double(double)> g, std::string name) {
    return Symbol{[g = std::move(g)](std::span<const double> x) {
                      double s = 0.0;
                      for (double xi : x) s += xi * xi;
                      return g(std::sqrt(s));
                  },
                  std::move(name)};
}

SpectralPolynomial apply_multiplier(const SpectralPolynomial& T, const Symbol& g, int n) {
    if (n < 1) throw bad_config("multiplier scale n must be positive");
    const int d = T.dims();
    SpectralPolynomial out(d, T.degree());
    const std::size_t total = T.box_size();
    std::vector<int> m(static_cast<std::size_t>(d));
    std::vector<double> x(static_cast<std::size_t>(d));
    std::vector<double> gval(total);
    for (std::size_t i = 0; i < total; ++i) {
        out.unflatten(i, m);
        for (int a = 0; a < d; ++a) x[static_cast<std::size_t>(a)] = static_cast<double>(m[static_cast<std::size_t>(a)]) / n;
        gval[i] = g(x);
    }
    for (std::size_t i = 0; i < total; ++i) {
        const double mirror = gval[total - 1 - i];
        if (std::abs(gval[i] - mirror) > 1e-12 * std::max(1.0, std::abs(gval[i])))
            throw symmetry_violation("multiplier symbol is not centrally symmetric at a stored index");
    }
    for (std::size_t i = 0; i < total; ++i) out.raw()[i] = T.coeff_flat(i) * gval[i];
    return out;
}

}  // namespace br
