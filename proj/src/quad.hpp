#pragma once

// Internal quadrature helpers shared by the oscillatory-integral call sites.
// Not installed; include from src/ only.

#include <functional>

namespace br::quad {

struct GaussRule {
    double x[16];
    double w[16];
};

// 16-point Gauss-Legendre rule on [-1, 1], nodes by Newton on P_16.
const GaussRule& gl16();

double composite_gl(const std::function<double(double)>& f, double a, double b, long panels);

// Doubles the panel count until two refinements agree to tol. cap bounds the
// initial panel width (tie it to the local wavelength for oscillatory f);
// throws quadrature_nonconvergence when refinement stalls.
double richardson(const std::function<double(double)>& f, double a, double b, double cap, double tol);

double sphere_area(int d);  // surface measure of S^{d-1}

}  // namespace br::quad
