// Times the serial reference kernels against their OpenMP counterparts on
// transform-shaped workloads, and checks the two paths agree while at it.
// Usage: bench_kernels [workers]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

#include "br/kernels.hpp"
#include "br/spectral.hpp"
#include "br/types.hpp"

using namespace br;

namespace {

volatile double g_sink = 0.0;

// Per-op seconds: warm up once, then repeat until the clock has seen enough.
template <class F>
double time_op(F&& op) {
    op();
    const auto t0 = std::chrono::steady_clock::now();
    double elapsed = 0.0;
    int reps = 0;
    while (elapsed < 0.25 && reps < 1000) {
        op();
        ++reps;
        elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return elapsed / reps;
}

void print_row(const char* name, const char* shape, double ser, double par, double gap) {
    std::printf("%-22s %-26s %10.3f %10.3f %7.2fx   %.1e\n", name, shape, ser * 1e3, par * 1e3,
                ser / par, gap);
}

std::vector<kern::cd> random_complex(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<kern::cd> v(n);
    for (kern::cd& z : v) z = kern::cd(g(rng), g(rng));
    return v;
}

double max_gap(std::span<const kern::cd> a, std::span<const kern::cd> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

void bench_stage(std::size_t outer, std::size_t inner, std::size_t len_in, std::size_t len_out,
                 std::mt19937_64& rng) {
    const std::vector<kern::cd> in = random_complex(outer * len_in * inner, rng);
    const std::vector<kern::cd> table = random_complex(len_out * len_in, rng);
    std::vector<kern::cd> out_s(outer * len_out * inner), out_p(out_s.size());
    const double ser = time_op([&] {
        kern::stage_serial(in.data(), out_s.data(), outer, inner, len_in, len_out, table.data());
        g_sink = g_sink + out_s[0].real();
    });
    const double par = time_op([&] {
        kern::stage_omp(in.data(), out_p.data(), outer, inner, len_in, len_out, table.data());
        g_sink = g_sink + out_p[0].real();
    });
    char shape[64];
    std::snprintf(shape, sizeof(shape), "%zux%zu->%zux%zu", outer * inner, len_in, outer * inner,
                  len_out);
    print_row("stage", shape, ser, par, max_gap(out_s, out_p));
}

void bench_reduce(std::size_t n, double p, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = g(rng);
    double rs = 0.0, rp = 0.0;
    const double ser = time_op([&] { g_sink = rs = kern::reduce_pow_serial(v, p); });
    const double par = time_op([&] { g_sink = rp = kern::reduce_pow_omp(v, p); });
    char name[32], shape[64];
    std::snprintf(name, sizeof(name), "reduce_pow p=%.1f", p);
    std::snprintf(shape, sizeof(shape), "%zu doubles", n);
    print_row(name, shape, ser, par, std::abs(rs - rp) / std::abs(rs));
}

void bench_max_abs(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = g(rng);
    double rs = 0.0, rp = 0.0;
    const double ser = time_op([&] { g_sink = rs = kern::reduce_max_abs_serial(v); });
    const double par = time_op([&] { g_sink = rp = kern::reduce_max_abs_omp(v); });
    char shape[64];
    std::snprintf(shape, sizeof(shape), "%zu doubles", n);
    print_row("reduce_max_abs", shape, ser, par, std::abs(rs - rp));
}

void bench_parallel_for(std::size_t tasks, std::size_t work) {
    std::vector<double> cell_s(tasks), cell_p(tasks);
    const auto body = [work](std::vector<double>& cells, std::size_t i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < work; ++j)
            acc += std::sin(1e-3 * static_cast<double>(i * work + j));
        cells[i] = acc;
    };
    const double ser = time_op([&] {
        for (std::size_t i = 0; i < tasks; ++i) body(cell_s, i);
        g_sink = g_sink + cell_s[0];
    });
    const double par = time_op([&] {
        kern::parallel_for(tasks, [&](std::size_t i) { body(cell_p, i); });
        g_sink = g_sink + cell_p[0];
    });
    double gap = 0.0;
    for (std::size_t i = 0; i < tasks; ++i) gap = std::max(gap, std::abs(cell_s[i] - cell_p[i]));
    char shape[64];
    std::snprintf(shape, sizeof(shape), "%zu tasks x %zu sin", tasks, work);
    print_row("parallel_for", shape, ser, par, gap);
}

// Whole-transform comparison through the execution_mode() dispatch.
void bench_synthesize(int d, int degree, int N, std::mt19937_64& rng) {
    SpectralPolynomial T(d, degree);
    std::normal_distribution<double> g(0.0, 1.0);
    const std::size_t total = T.box_size();
    for (std::size_t i = 0; i < total; ++i) {
        const std::size_t mirror = total - 1 - i;  // flat reversal negates every index
        if (i > mirror) break;
        const kern::cd z(g(rng), i == mirror ? 0.0 : g(rng));
        T.raw()[i] = z;
        T.raw()[mirror] = std::conj(z);
    }
    GridFunction out_s(1, 1), out_p(1, 1);
    execution_mode() = Exec::serial;
    const double ser = time_op([&] {
        out_s = synthesize(T, N);
        g_sink = g_sink + out_s[0];
    });
    execution_mode() = Exec::parallel;
    const double par = time_op([&] {
        out_p = synthesize(T, N);
        g_sink = g_sink + out_p[0];
    });
    double gap = 0.0;
    for (std::size_t i = 0; i < out_s.size(); ++i)
        gap = std::max(gap, std::abs(out_s[i] - out_p[i]));
    char name[32], shape[64];
    std::snprintf(name, sizeof(name), "synthesize d=%d", d);
    std::snprintf(shape, sizeof(shape), "degree %d -> %d^%d grid", degree, N, d);
    print_row(name, shape, ser, par, gap);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) set_worker_count(std::atoi(argv[1]));
    std::printf("kernel benchmark, %d workers\n", worker_count());
    std::printf("%-22s %-26s %10s %10s %8s   %s\n", "kernel", "shape", "serial ms", "omp ms",
                "speedup", "max gap");
    std::mt19937_64 rng(42u);
    bench_stage(1, 257, 257, 1024, rng);
    bench_stage(1024, 1, 257, 1024, rng);
    bench_stage(1, 1, 4097, 16384, rng);
    bench_reduce(std::size_t{1} << 22, 2.0, rng);
    bench_reduce(std::size_t{1} << 22, 0.5, rng);
    bench_max_abs(std::size_t{1} << 22, rng);
    bench_parallel_for(256, 20000);
    bench_synthesize(2, 64, 256, rng);
    bench_synthesize(1, 512, 2048, rng);
    return 0;
}
