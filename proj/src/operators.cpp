#include "br/operators.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>

#include "br/kernels.hpp"

namespace br {

namespace {

// e^{-i 2 pi r / L} for r = 0..L-1.
std::vector<cd> unit_roots(int L) {
    std::vector<cd> w(static_cast<std::size_t>(L));
    for (int r = 0; r < L; ++r) w[static_cast<std::size_t>(r)] = std::polar(1.0, -two_pi * r / L);
    return w;
}

int phase_mod(long long m, long long j, int L) {
    long long r = (m * j) % L;
    if (r < 0) r += L;
    return static_cast<int>(r);
}

// Spot checks of the symbol contract: real by type, value 1 at the origin,
// zero outside the closed unit ball, centrally symmetric. A handful of fixed
// probe points per property; apply_multiplier re-verifies symmetry on the
// whole lattice it actually touches.
void validate_symbol(const Symbol& g, int d) {
    std::vector<double> x(static_cast<std::size_t>(d), 0.0);
    if (std::abs(g(x) - 1.0) > 1e-12) throw bad_config("symbol must take the value 1 at the origin");

    std::vector<double> dir(static_cast<std::size_t>(d), 1.0 / std::sqrt(static_cast<double>(d)));
    std::uint64_t s = 88172645463325252ull;
    auto next = [&s]() {  // xorshift, fixed seed: probe points must not move between runs
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return 2.0 * (static_cast<double>(s % 1000000001ull) / 1000000000.0) - 1.0;
    };

    for (double r : {1.0 + 1e-6, 1.25, 2.0, 7.5}) {
        for (int a = 0; a < d; ++a) x[static_cast<std::size_t>(a)] = 0.0;
        x[0] = r;
        if (std::abs(g(x)) > 1e-12) throw bad_config("symbol must vanish outside the closed unit ball");
        for (int a = 0; a < d; ++a) x[static_cast<std::size_t>(a)] = r * dir[static_cast<std::size_t>(a)];
        if (std::abs(g(x)) > 1e-12) throw bad_config("symbol must vanish outside the closed unit ball");
    }

    std::vector<double> y(static_cast<std::size_t>(d));
    for (int probe = 0; probe < 8; ++probe) {
        for (int a = 0; a < d; ++a) {
            x[static_cast<std::size_t>(a)] = 0.55 * next() / std::sqrt(static_cast<double>(d));
            y[static_cast<std::size_t>(a)] = -x[static_cast<std::size_t>(a)];
        }
        const double gx = g(x);
        if (std::abs(gx - g(y)) > 1e-12 * std::max(1.0, std::abs(gx)))
            throw symmetry_violation("symbol must be centrally symmetric");
    }
}

void validate_spec(int n, int d) {
    if (n < 1) throw bad_config("spec degree n must be positive");
    if (d < 1 || d > 4) throw bad_config("spec dimension must be in [1, 4]");
}

// The (2n+1)^d forward transform of real node samples (axis-major, node index
// k = 0..2n per axis): c_m = (2n+1)^{-d} sum_k s_k e^{-i(m, t_k)}, box order.
std::vector<cd> node_dft(const std::vector<double>& s, int d, int n) {
    const int L = 2 * n + 1;
    const std::vector<cd> w = unit_roots(L);
    std::vector<cd> table(static_cast<std::size_t>(L) * static_cast<std::size_t>(L));
    for (int mi = 0; mi < L; ++mi)
        for (int k = 0; k < L; ++k)
            table[static_cast<std::size_t>(mi) * L + k] =
                w[static_cast<std::size_t>(phase_mod(mi - n, k, L))] / static_cast<double>(L);

    std::vector<cd> buf(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) buf[i] = cd(s[i], 0.0);
    std::vector<cd> out;
    const std::size_t Ls = static_cast<std::size_t>(L);
    for (int a = 0; a < d; ++a) {
        std::size_t outer = 1, inner = 1;
        for (int b = 0; b < a; ++b) outer *= Ls;
        for (int b = a + 1; b < d; ++b) inner *= Ls;
        out.assign(buf.size(), cd(0.0, 0.0));
        kern::stage(buf.data(), out.data(), outer, inner, Ls, Ls, table.data());
        buf.swap(out);
    }
    return buf;
}

SpectralPolynomial family_from_samples(const std::vector<double>& s, const FamilySpec& spec) {
    const int n = spec.n, d = spec.d;
    const std::vector<cd> c = node_dft(s, d, n);

    SpectralPolynomial out(d, n);
    std::vector<int> m(static_cast<std::size_t>(d));
    std::vector<double> xs(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (out.index_length(i) > static_cast<double>(n)) continue;  // phi vanishes there
        out.unflatten(i, m);
        double dot = 0.0;
        for (int a = 0; a < d; ++a) {
            dot += m[static_cast<std::size_t>(a)] * spec.lambda[static_cast<std::size_t>(a)];
            xs[static_cast<std::size_t>(a)] = static_cast<double>(m[static_cast<std::size_t>(a)]) / n;
        }
        out.raw()[i] = c[i] * std::polar(1.0, -dot) * spec.symbol(xs);
    }
    return out;
}

SpectralPolynomial random_hermitian(int d, int deg, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SpectralPolynomial T(d, deg);
    const std::size_t total = T.box_size();
    for (std::size_t i = 0; i < total / 2; ++i) {
        const cd v(u(rng), u(rng));
        if (T.index_length(i) <= static_cast<double>(deg)) {
            T.raw()[i] = v;
            T.raw()[total - 1 - i] = std::conj(v);
        }
    }
    T.raw()[total / 2] = cd(u(rng), 0.0);  // k = 0
    return T;
}

struct LineFit {
    double slope, residual;
};

LineFit log_line_fit(std::span<const double> lx, std::span<const double> ly) {
    const std::size_t k = lx.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double det = k * sxx - sx * sx;
    const double slope = (k * sxy - sx * sy) / det;
    const double icpt = (sy - slope * sx) / k;
    double rss = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double e = ly[i] - slope * lx[i] - icpt;
        rss += e * e;
    }
    return {slope, std::sqrt(rss / k)};
}

}  // namespace

MeansSpec::MeansSpec(int n_, int d_, Symbol symbol_) : n(n_), d(d_), symbol(std::move(symbol_)) {
    validate_spec(n, d);
    validate_symbol(symbol, d);
}

MeansSpec MeansSpec::riesz(int n, int d, const RieszSymbol& s) { return MeansSpec(n, d, s.to_symbol()); }

FamilySpec::FamilySpec(int n_, int d_, Symbol symbol_, std::vector<double> lambda_)
    : n(n_), d(d_), symbol(std::move(symbol_)), lambda(std::move(lambda_)) {
    validate_spec(n, d);
    validate_symbol(symbol, d);
    if (lambda.size() != static_cast<std::size_t>(d))
        throw bad_config("family shift must have one component per axis");
    for (double& l : lambda) {
        if (!std::isfinite(l)) throw bad_config("family shift must be finite");
        l = std::fmod(l, two_pi);
        if (l < 0.0) l += two_pi;
    }
}

FamilySpec FamilySpec::riesz(int n, int d, const RieszSymbol& s, std::vector<double> lambda) {
    return FamilySpec(n, d, s.to_symbol(), std::move(lambda));
}

std::size_t FamilySpec::node_count() const {
    std::size_t t = 1;
    for (int a = 0; a < d; ++a) t *= static_cast<std::size_t>(2 * n + 1);
    return t;
}

MeansSpec FamilySpec::means() const { return MeansSpec(n, d, symbol); }

SpectralPolynomial multiplier_kernel(const MeansSpec& spec) {
    SpectralPolynomial K(spec.d, spec.n);
    std::vector<int> m(static_cast<std::size_t>(spec.d));
    std::vector<double> x(static_cast<std::size_t>(spec.d));
    for (std::size_t i = 0; i < K.box_size(); ++i) {
        K.unflatten(i, m);
        for (int a = 0; a < spec.d; ++a)
            x[static_cast<std::size_t>(a)] = static_cast<double>(m[static_cast<std::size_t>(a)]) / spec.n;
        const double v = spec.symbol(x);
        if (K.index_length(i) > static_cast<double>(spec.n)) {
            if (std::abs(v) > 1e-12) throw bad_config("symbol is nonzero outside the unit ball");
            continue;
        }
        K.raw()[i] = cd(v, 0.0);
    }
    return K;
}

SpectralPolynomial apply_means(const SpectralPolynomial& f, const MeansSpec& spec) {
    if (f.dims() != spec.d) throw bad_config("dimension mismatch between input and spec");
    const SpectralPolynomial full = apply_multiplier(f, spec.symbol, spec.n);
    if (f.degree() <= spec.n) return full;
    // The image lives in the degree-n ball; shed the outer box.
    SpectralPolynomial out(spec.d, spec.n);
    std::vector<int> m(static_cast<std::size_t>(spec.d));
    for (std::size_t i = 0; i < out.box_size(); ++i) {
        out.unflatten(i, m);
        out.raw()[i] = full.at(m);
    }
    return out;
}

SpectralPolynomial apply_means(const GridFunction& f, const MeansSpec& spec) {
    if (f.dims() != spec.d) throw bad_config("dimension mismatch between input and spec");
    return apply_multiplier(analyze(f, spec.n), spec.symbol, spec.n);
}

SpectralPolynomial apply_family(const Sampler& f, const FamilySpec& spec) {
    const int n = spec.n, d = spec.d;
    const int L = 2 * n + 1;
    std::vector<double> s(spec.node_count());
    std::vector<double> pt(static_cast<std::size_t>(d));
    for (std::size_t flat = 0; flat < s.size(); ++flat) {
        std::size_t rest = flat;
        for (int a = d - 1; a >= 0; --a) {
            const int k = static_cast<int>(rest % static_cast<std::size_t>(L));
            rest /= static_cast<std::size_t>(L);
            double t = two_pi * k / L + spec.lambda[static_cast<std::size_t>(a)];
            t = std::fmod(t, two_pi);
            if (t < 0.0) t += two_pi;
            pt[static_cast<std::size_t>(a)] = t;
        }
        s[flat] = f(pt);
    }
    return family_from_samples(s, spec);
}

SpectralPolynomial apply_family(const SpectralPolynomial& f, const FamilySpec& spec) {
    if (f.dims() != spec.d) throw bad_config("dimension mismatch between input and spec");
    return apply_family(Sampler([&f](std::span<const double> x) { return f.eval(x); }), spec);
}

SpectralPolynomial apply_family(const GridFunction& f, const FamilySpec& spec) {
    if (f.dims() != spec.d) throw bad_config("dimension mismatch between input and spec");
    const int n = spec.n, d = spec.d, N = f.resolution();
    const int L = 2 * n + 1;

    // Per axis, node k maps to grid index k*N/L + lambda*N/(2 pi); every one
    // of them must be an integer, otherwise the values between grid points
    // would have to be invented.
    std::vector<std::vector<std::size_t>> idx(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) {
        idx[static_cast<std::size_t>(a)].resize(static_cast<std::size_t>(L));
        for (int k = 0; k < L; ++k) {
            const double u = std::fmod(static_cast<double>(k) * N / L +
                                           spec.lambda[static_cast<std::size_t>(a)] * N / two_pi,
                                       static_cast<double>(N));
            const double r = std::nearbyint(u);
            if (std::abs(u - r) > 1e-9)
                throw sampling_mismatch("family nodes fall between grid points; pass an exact sampler");
            idx[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)] =
                static_cast<std::size_t>(std::fmod(r, static_cast<double>(N)));
        }
    }

    std::vector<std::size_t> stride(static_cast<std::size_t>(d), 1);  // grid strides, axis 0 slowest
    for (int a = d - 2; a >= 0; --a)
        stride[static_cast<std::size_t>(a)] = stride[static_cast<std::size_t>(a + 1)] * static_cast<std::size_t>(N);

    std::vector<double> s(spec.node_count());
    for (std::size_t flat = 0; flat < s.size(); ++flat) {
        std::size_t rest = flat, g = 0;
        for (int a = d - 1; a >= 0; --a) {
            const std::size_t k = rest % static_cast<std::size_t>(L);
            rest /= static_cast<std::size_t>(L);
            g += idx[static_cast<std::size_t>(a)][k] * stride[static_cast<std::size_t>(a)];
        }
        s[flat] = f[g];
    }
    return family_from_samples(s, spec);
}

BiGridFunction family_apply_bigrid(const Sampler& f, const MeansSpec& spec, int N) {
    const int d = spec.d;
    if (N < 2 * spec.n + 2)
        throw resolution_too_small("the lambda/x grid must resolve degree " + std::to_string(spec.n));
    BiGridFunction G(d, N);
    const GridFunction probe(d, N);  // node coordinates only

    FamilySpec proto(spec.n, d, spec.symbol, std::vector<double>(static_cast<std::size_t>(d), 0.0));
    std::exception_ptr err = nullptr;
    std::mutex err_mtx;
    kern::parallel_for(G.nodes_per_axis_set(), [&](std::size_t lf) {
        try {
            FamilySpec fs = proto;
            std::vector<double> lam(static_cast<std::size_t>(d));
            probe.node(lf, lam);
            fs.lambda = lam;
            const GridFunction row = synthesize(apply_family(f, fs), N);
            std::copy(row.values().begin(), row.values().end(), G.row(lf).begin());
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mtx);
            if (!err) err = std::current_exception();
        }
    });
    if (err) std::rethrow_exception(err);
    return G;
}

BiGridFunction family_error_bigrid(const Sampler& f, const MeansSpec& spec, int N) {
    BiGridFunction G = family_apply_bigrid(f, spec, N);
    const GridFunction fx = GridFunction::sample(spec.d, N, f);
    for (std::size_t lf = 0; lf < G.nodes_per_axis_set(); ++lf) {
        auto row = G.row(lf);
        for (std::size_t i = 0; i < row.size(); ++i) row[i] = fx[i] - row[i];
    }
    return G;
}

NormEstimate operator_norm(const MeansSpec& spec, Exponent p, int samples, std::uint64_t seed) {
    if (!p.is_inf() && p.value() < 1.0)
        throw bad_config("operator norm is defined for p >= 1; use family_norm below p = 1");

    if (p.is_inf() || p.value() == 1.0) {
        const SpectralPolynomial K = multiplier_kernel(spec);
        const double v = std::pow(two_pi, -spec.d) * lp_norm(K, Exponent(1.0));
        return {v, "kernel-l1", 0, 0};
    }
    if (p.value() == 2.0) {
        const SpectralPolynomial K = multiplier_kernel(spec);
        double m = 0.0;
        for (std::size_t i = 0; i < K.box_size(); ++i) m = std::max(m, std::abs(K.coeff_flat(i)));
        return {m, "multiplier-sup", 0, 0};
    }

    std::mt19937_64 rng(seed);
    double best = 0.0;
    for (int t = 0; t < samples; ++t) {
        const int deg = (t % 2 == 0) ? spec.n : 2 * spec.n;
        const SpectralPolynomial T = random_hermitian(spec.d, deg, rng);
        const double den = lp_norm(T, p);
        if (den == 0.0) continue;
        best = std::max(best, lp_norm(apply_means(T, spec), p) / den);
    }
    return {best, "rayleigh-search", samples, seed};
}

NormEstimate family_norm(const MeansSpec& spec, Exponent p, int samples, std::uint64_t seed) {
    const int d = spec.d;
    const int N = quad_resolution(spec.n);
    const double pref = std::pow(two_pi, -d * p.inv());

    double best = 0.0;
    std::string best_method = "rayleigh-search";
    int evaluated = 0;

    auto consider = [&](double ratio, const char* method) {
        ++evaluated;
        if (ratio > best) {
            best = ratio;
            best_method = method;
        }
    };

    {  // constant input, exact ratio 1 by construction
        const Sampler one = [](std::span<const double>) { return 1.0; };
        const BiGridFunction G = family_apply_bigrid(one, spec, N);
        const double den = std::pow(two_pi, d * p.inv());
        consider(pref * double_norm(G, p) / den, "rayleigh-search");
    }

    {  // needle: indicator of the grid cell at the origin, width = lambda spacing
        const Sampler needle = [d, N](std::span<const double> x) {
            for (int a = 0; a < d; ++a) {
                const double u = std::floor(x[static_cast<std::size_t>(a)] * N / two_pi + 1e-9);
                if (u != 0.0 && u != static_cast<double>(N)) return 0.0;
            }
            return 1.0;
        };
        const BiGridFunction G = family_apply_bigrid(needle, spec, N);
        const double den = p.is_inf() ? 1.0 : std::pow(std::pow(two_pi / N, d), p.inv());
        consider(pref * double_norm(G, p) / den, "needle");
    }

    std::mt19937_64 rng(seed);
    for (int t = 0; t < samples; ++t) {
        const SpectralPolynomial T = random_hermitian(d, spec.n, rng);
        const double den = lp_norm(T, p);
        if (den == 0.0) continue;
        const Sampler fT = [&T](std::span<const double> x) { return T.eval(x); };
        const BiGridFunction G = family_apply_bigrid(fT, spec, N);
        consider(pref * double_norm(G, p) / den, "rayleigh-search");
    }
    return {best, best_method, evaluated, seed};
}

ConvergenceReport convergence_probe(std::span<const double> norms, std::span<const int> ns) {
    if (ns.size() != norms.size()) throw bad_config("one norm per size is required");
    if (ns.size() < 4) throw bad_config("convergence probe needs at least 4 sizes");
    int lo = ns[0], hi = ns[0];
    for (int n : ns) {
        if (n < 1) throw bad_config("sizes must be positive");
        lo = std::min(lo, n);
        hi = std::max(hi, n);
    }
    if (hi < 4 * lo) throw bad_config("sizes must span a factor of at least 4");
    for (double v : norms)
        if (!(v > 0.0)) throw bad_config("norms must be positive to fit a growth exponent");

    std::vector<double> lx(ns.size()), ly(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        lx[i] = std::log(static_cast<double>(ns[i]));
        ly[i] = std::log(norms[i]);
    }
    const LineFit fit = log_line_fit(lx, ly);

    ConvergenceReport r;
    r.slope = fit.slope;
    r.residual = fit.residual;
    r.norms.assign(norms.begin(), norms.end());
    if (fit.slope > 0.15 && fit.residual < fit.slope / 2.0)
        r.verdict = "growing";
    else if (fit.slope < 0.05)
        r.verdict = "bounded";
    else
        r.verdict = "inconclusive";
    return r;
}

ConvergenceReport means_norm_probe(const Symbol& symbol, int d, Exponent p, std::span<const int> ns) {
    std::vector<double> norms(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i)
        norms[i] = operator_norm(MeansSpec(ns[i], d, symbol), p).value;
    return convergence_probe(norms, ns);
}

ConvergenceReport family_norm_probe(const Symbol& symbol, int d, Exponent p, std::span<const int> ns) {
    std::vector<double> norms(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i)
        norms[i] = family_norm(MeansSpec(ns[i], d, symbol), p).value;
    return convergence_probe(norms, ns);
}

}  // namespace br
