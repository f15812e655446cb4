#include "br/kernels.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace br {

Exec& execution_mode() {
#ifdef _OPENMP
    static Exec mode = Exec::parallel;
#else
    static Exec mode = Exec::serial;
#endif
    return mode;
}

namespace {
int g_workers = 0;  // 0 = OpenMP default
}

void set_worker_count(int n) {
    g_workers = n > 0 ? n : 0;
#ifdef _OPENMP
    if (g_workers > 0) omp_set_num_threads(g_workers);
#endif
}

int worker_count() {
#ifdef _OPENMP
    return g_workers > 0 ? g_workers : omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace br

namespace br::kern {

void stage_serial(const cd* in, cd* out, std::size_t outer, std::size_t inner,
                  std::size_t len_in, std::size_t len_out, const cd* table) {
    for (std::size_t o = 0; o < outer; ++o) {
        const cd* in_o = in + o * len_in * inner;
        cd* out_o = out + o * len_out * inner;
        for (std::size_t a = 0; a < len_out; ++a) {
            const cd* row = table + a * len_in;
            cd* dst = out_o + a * inner;
            std::fill(dst, dst + inner, cd(0.0, 0.0));
            for (std::size_t b = 0; b < len_in; ++b) {
                const cd w = row[b];
                const cd* src = in_o + b * inner;
                for (std::size_t i = 0; i < inner; ++i) dst[i] += w * src[i];
            }
        }
    }
}

void stage_omp(const cd* in, cd* out, std::size_t outer, std::size_t inner,
               std::size_t len_in, std::size_t len_out, const cd* table) {
#ifdef _OPENMP
    const std::size_t rows = outer * len_out;
#pragma omp parallel for schedule(static)
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t o = r / len_out;
        const std::size_t a = r % len_out;
        const cd* in_o = in + o * len_in * inner;
        const cd* row = table + a * len_in;
        cd* dst = out + (o * len_out + a) * inner;
        std::fill(dst, dst + inner, cd(0.0, 0.0));
        for (std::size_t b = 0; b < len_in; ++b) {
            const cd w = row[b];
            const cd* src = in_o + b * inner;
            for (std::size_t i = 0; i < inner; ++i) dst[i] += w * src[i];
        }
    }
#else
    stage_serial(in, out, outer, inner, len_in, len_out, table);
#endif
}

void stage(const cd* in, cd* out, std::size_t outer, std::size_t inner,
           std::size_t len_in, std::size_t len_out, const cd* table) {
    if (execution_mode() == Exec::parallel)
        stage_omp(in, out, outer, inner, len_in, len_out, table);
    else
        stage_serial(in, out, outer, inner, len_in, len_out, table);
}

double reduce_pow_serial(std::span<const double> v, double p) {
    double acc = 0.0;
    if (p == 1.0) {
        for (double x : v) acc += std::abs(x);
    } else if (p == 2.0) {
        for (double x : v) acc += x * x;
    } else {
        for (double x : v) acc += std::pow(std::abs(x), p);
    }
    return acc;
}

double reduce_pow_omp(std::span<const double> v, double p) {
#ifdef _OPENMP
    double acc = 0.0;
    const double* data = v.data();
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(v.size());
    if (p == 1.0) {
#pragma omp parallel for reduction(+ : acc) schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) acc += std::abs(data[i]);
    } else if (p == 2.0) {
#pragma omp parallel for reduction(+ : acc) schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) acc += data[i] * data[i];
    } else {
#pragma omp parallel for reduction(+ : acc) schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) acc += std::pow(std::abs(data[i]), p);
    }
    return acc;
#else
    return reduce_pow_serial(v, p);
#endif
}

double reduce_pow(std::span<const double> v, double p) {
    return execution_mode() == Exec::parallel ? reduce_pow_omp(v, p) : reduce_pow_serial(v, p);
}

double reduce_max_abs_serial(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double reduce_max_abs_omp(std::span<const double> v) {
#ifdef _OPENMP
    double m = 0.0;
    const double* data = v.data();
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(v.size());
#pragma omp parallel for reduction(max : m) schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::abs(data[i]));
    return m;
#else
    return reduce_max_abs_serial(v);
#endif
}

double reduce_max_abs(std::span<const double> v) {
    return execution_mode() == Exec::parallel ? reduce_max_abs_omp(v) : reduce_max_abs_serial(v);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
#ifdef _OPENMP
    if (execution_mode() == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
            body(static_cast<std::size_t>(i));
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace br::kern
