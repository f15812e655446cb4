#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "br/grid.hpp"
#include "br/types.hpp"

namespace br {

using cd = std::complex<double>;

// Real trigonometric polynomial T(x) = sum_{|k| <= n} c_k e^{i(k,x)} on the
// d-torus. |k| is the Euclidean length; coefficients are stored on the full
// box [-n, n]^d (axis 0 slowest) with entries outside the ball kept at zero.
// Realness is the Hermitian symmetry c_{-k} = conj(c_k); it is the caller's
// invariant and is checked by the operations that depend on it.
// Instances are immutable after construction as far as the library is
// concerned; all member functions except the mutating accessors are const and
// safe to call concurrently.
class SpectralPolynomial {
  public:
    SpectralPolynomial(int d, int degree);

    int dims() const { return d_; }
    int degree() const { return n_; }
    int side() const { return 2 * n_ + 1; }
    std::size_t box_size() const { return c_.size(); }

    // Multi-index access; each m_a must lie in [-n, n].
    cd at(std::span<const int> m) const { return c_[flat_index(m)]; }
    void set(std::span<const int> m, cd v);

    cd coeff_flat(std::size_t i) const { return c_[i]; }
    void set_flat(std::size_t i, cd v);

    std::size_t flat_index(std::span<const int> m) const;
    void unflatten(std::size_t flat, std::span<int> m) const;
    bool in_ball(std::span<const int> m) const;
    // |m| of the flat index (Euclidean).
    double index_length(std::size_t flat) const;

    double max_abs_coeff() const;
    // Throws symmetry_violation when c_{-k} != conj(c_k) beyond
    // tol * max_abs_coeff().
    void check_hermitian(double tol = 1e-12) const;

    // Exact point evaluation sum c_k e^{i(k,x)} (real part; the imaginary
    // residue is the caller's Hermitian-symmetry problem).
    double eval(std::span<const double> x) const;

    const std::vector<cd>& raw() const { return c_; }
    std::vector<cd>& raw() { return c_; }

  private:
    int d_, n_;
    std::vector<cd> c_;
};

// Fourier analysis c_k = (2*pi)^{-d} \int f(x) e^{-i(k,x)} dx by the exact
// grid rule N^{-d} sum_j f(x_j) e^{-i(k,x_j)}, restricted to |k| <= degree.
// Exact on polynomials of degree <= n when N >= 2n+2 (precondition; throws
// resolution_too_small otherwise).
SpectralPolynomial analyze(const GridFunction& f, int degree);

// Grid evaluation of T on the N^d grid. Requires N >= 2*degree+2 and
// Hermitian symmetry (throws symmetry_violation); the imaginary residue of
// the synthesis must stay below 1e-10 * max|c_k|.
GridFunction synthesize(const SpectralPolynomial& T, int N);

// Quadrature L_p (quasi-)norm on the sample grid; p = infinity is the max.
double lp_norm(const GridFunction& f, Exponent p);

// Convenience: norm of a polynomial on its own quadrature grid
// (resolution quad_resolution(degree)).
double lp_norm(const SpectralPolynomial& T, Exponent p);

// Double norm ||  ||g(x,lambda)||_{p;x}  ||_{p;lambda}.
double double_norm(const BiGridFunction& F, Exponent p);

// Spectral fractional Laplacian: c_k -> |k|^beta c_k (k = 0 annihilated).
SpectralPolynomial fractional_laplacian(const SpectralPolynomial& T, double beta);

// Real-valued multiplier symbol on R^d.
struct Symbol {
    std::function<double(std::span<const double>)> fn;
    std::string name;

    double operator()(std::span<const double> x) const { return fn(x); }
    static Symbol radial(std::function<double(double)> g, std::string name = "radial");
};

// Multiplier operator c_k -> g(k/n) c_k. The symbol must be centrally
// symmetric on the stored indices (checked to 1e-12; throws
// symmetry_violation), which keeps real polynomials real. Degree unchanged.
SpectralPolynomial apply_multiplier(const SpectralPolynomial& T, const Symbol& g, int n);

}  // namespace br
