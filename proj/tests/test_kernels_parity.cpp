#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "br/kernels.hpp"

using namespace br;
using kern::cd;

namespace {

std::vector<cd> random_complex(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cd> v(n);
    for (auto& z : v) z = cd(g(rng), g(rng));
    return v;
}

}  // namespace

TEST_CASE("stage kernel: serial and OpenMP paths agree") {
    std::mt19937_64 rng(1);
    const std::size_t outer = 6, inner = 10, len_in = 17, len_out = 9;
    auto in = random_complex(outer * len_in * inner, rng);
    auto table = random_complex(len_out * len_in, rng);
    std::vector<cd> a(outer * len_out * inner), b(outer * len_out * inner);
    kern::stage_serial(in.data(), a.data(), outer, inner, len_in, len_out, table.data());
    kern::stage_omp(in.data(), b.data(), outer, inner, len_in, len_out, table.data());
    double max_diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) max_diff = std::max(max_diff, std::abs(a[i] - b[i]));
    CHECK(max_diff < 1e-13);
}

TEST_CASE("reduction kernels: serial and OpenMP paths agree") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g(0.0, 2.0);
    std::vector<double> v(100003);
    for (auto& x : v) x = g(rng);

    for (double p : {0.5, 1.0, 2.0, 3.7}) {
        const double s = kern::reduce_pow_serial(v, p);
        const double o = kern::reduce_pow_omp(v, p);
        CHECK(std::abs(s - o) < 1e-10 * std::abs(s));
    }
    CHECK(kern::reduce_max_abs_serial(v) == kern::reduce_max_abs_omp(v));
}

TEST_CASE("parallel_for covers every index exactly once") {
    std::vector<int> hits(5000, 0);
    kern::parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
}

TEST_CASE("execution mode switch reaches the serial path") {
    auto saved = execution_mode();
    execution_mode() = Exec::serial;
    std::vector<double> v{1.0, -2.0, 3.0};
    CHECK(kern::reduce_pow(v, 1.0) == doctest::Approx(6.0));
    execution_mode() = saved;
}
