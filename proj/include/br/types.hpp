#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace br {

// Failure taxonomy. Everything thrown on a violated contract derives from
// br::error so callers can tell library-level failures from std:: ones.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define BR_ERROR_TYPE(name)                          \
    struct name : error {                            \
        using error::error;                          \
    }

BR_ERROR_TYPE(bad_config);
BR_ERROR_TYPE(resolution_too_small);
BR_ERROR_TYPE(symmetry_violation);
BR_ERROR_TYPE(quadrature_nonconvergence);
BR_ERROR_TYPE(insufficient_blocks);
BR_ERROR_TYPE(insufficient_points);
BR_ERROR_TYPE(sampling_mismatch);
BR_ERROR_TYPE(series_divergence);
BR_ERROR_TYPE(empty_candidates);
BR_ERROR_TYPE(tail_tolerance_unreachable);
BR_ERROR_TYPE(unsupported_dimension);
BR_ERROR_TYPE(io_failure);

#undef BR_ERROR_TYPE

// Lebesgue exponent p in (0, inf]. Infinity is the genuine IEEE infinity,
// never a large finite surrogate; inv() maps it to 1/p = 0.
class Exponent {
  public:
    explicit Exponent(double v) : v_(v) {
        if (std::isnan(v) || !(v > 0.0))
            throw bad_config("exponent must be positive (got " + std::to_string(v) + ")");
    }
    static Exponent infinity() { return Exponent(std::numeric_limits<double>::infinity()); }

    double value() const { return v_; }
    bool is_inf() const { return std::isinf(v_); }
    // 1/p, with 1/inf = 0. Used by the region predicates.
    double inv() const { return is_inf() ? 0.0 : 1.0 / v_; }
    // p* = min(1, p), the triangle-inequality exponent of the quasi-norm.
    double pstar() const { return std::min(1.0, v_); }

    bool operator==(const Exponent& o) const { return v_ == o.v_; }

  private:
    double v_;
};

enum class Exec { serial, parallel };

// Global execution mode for the compute kernels. Defaults to parallel when
// built with OpenMP; the serial reference path is kept for testing.
Exec& execution_mode();

// Worker cap for the parallel path; n <= 0 resets to the OpenMP default.
void set_worker_count(int n);
int worker_count();

}  // namespace br
