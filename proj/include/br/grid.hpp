#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "br/types.hpp"

namespace br {

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double two_pi = 2.0 * pi;

// Point sampler on the torus [0, 2*pi)^d.
using Sampler = std::function<double(std::span<const double>)>;

// Quadrature resolution policy: sampling a polynomial of the given degree for
// norm quadrature uses at least 4x oversampling and never fewer than 32 nodes
// per axis.
inline int quad_resolution(int degree) { return std::max(4 * degree, 32); }

// Uniform periodic samples of a real function on [0, 2*pi)^d.
// Nodes x_j = 2*pi*j/N per axis, j = 0..N-1 (left-closed cells).
// Values are row-major with axis 0 slowest.
class GridFunction {
  public:
    GridFunction(int d, int N);
    static GridFunction sample(int d, int N, const Sampler& f);

    int dims() const { return d_; }
    int resolution() const { return N_; }
    std::size_t size() const { return v_.size(); }
    double cell_volume() const;

    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }
    std::span<const double> values() const { return v_; }
    std::span<double> values() { return v_; }

    // Coordinates of the node with the given flat index.
    void node(std::size_t flat, std::span<double> out) const;

  private:
    int d_, N_;
    std::vector<double> v_;
};

// Real function of (x, lambda) with both arguments on the same N^d grid.
// One lambda row (all x for a fixed lambda node) is contiguous.
class BiGridFunction {
  public:
    BiGridFunction(int d, int N);

    int dims() const { return d_; }
    int resolution() const { return N_; }
    std::size_t nodes_per_axis_set() const { return rows_; }  // N^d

    double at(std::size_t x_flat, std::size_t lambda_flat) const {
        return v_[lambda_flat * rows_ + x_flat];
    }
    double& at(std::size_t x_flat, std::size_t lambda_flat) {
        return v_[lambda_flat * rows_ + x_flat];
    }
    std::span<double> row(std::size_t lambda_flat) {
        return std::span<double>(v_.data() + lambda_flat * rows_, rows_);
    }
    std::span<const double> row(std::size_t lambda_flat) const {
        return std::span<const double>(v_.data() + lambda_flat * rows_, rows_);
    }
    double cell_volume() const;

  private:
    int d_, N_;
    std::size_t rows_;
    std::vector<double> v_;
};

}  // namespace br
