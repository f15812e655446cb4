#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

#include "br/types.hpp"

// Low-level compute kernels. Each has a serial reference implementation and
// an OpenMP one; the unsuffixed entry point dispatches on execution_mode().
// The parity tests compare the two paths, the bench target times them.
namespace br::kern {

using cd = std::complex<double>;

// Contraction stage of a separable grid<->coefficient transform.
// in  is viewed as [outer][len_in][inner], out as [outer][len_out][inner]:
//   out[o][a][i] = sum_b table[a*len_in + b] * in[o][b][i].
void stage_serial(const cd* in, cd* out, std::size_t outer, std::size_t inner,
                  std::size_t len_in, std::size_t len_out, const cd* table);
void stage_omp(const cd* in, cd* out, std::size_t outer, std::size_t inner,
               std::size_t len_in, std::size_t len_out, const cd* table);
void stage(const cd* in, cd* out, std::size_t outer, std::size_t inner,
           std::size_t len_in, std::size_t len_out, const cd* table);

// sum_i |v_i|^p
double reduce_pow_serial(std::span<const double> v, double p);
double reduce_pow_omp(std::span<const double> v, double p);
double reduce_pow(std::span<const double> v, double p);

// max_i |v_i|
double reduce_max_abs_serial(std::span<const double> v);
double reduce_max_abs_omp(std::span<const double> v);
double reduce_max_abs(std::span<const double> v);

// Generic index-parallel loop for coarse-grained independent tasks
// (lambda rows, transform sweeps, candidate searches). The body must be
// thread-safe under the parallel path.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace br::kern
