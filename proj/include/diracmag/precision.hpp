#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <boost/multiprecision/mpfr.hpp>

namespace diracmag {

namespace bmp = boost::multiprecision;

/// Fast binary64 instantiation.
using real64 = double;

/// Extended-precision instantiation: 50 significant decimal digits (MPFR, stack allocated).
using real50 = bmp::number<bmp::mpfr_float_backend<50, bmp::allocate_stack>, bmp::et_off>;

/// Runtime-selected precision for the CLI's extended:N mode.
/// Call mpreal::default_precision(N) once, before any computation.
using mpreal = bmp::number<bmp::mpfr_float_backend<0>, bmp::et_off>;

// Values of 1/alpha used by the reference tables (CODATA 2018 and 1986).
inline constexpr const char* kAlphaInverse2018 = "137.035999084";
inline constexpr const char* kAlphaInverse1986 = "137.0359895";

struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class Real>
Real real_from_string(const std::string& s) {
    if constexpr (std::is_same_v<Real, double>) {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters in number: " + s);
        return v;
    } else {
        return Real(s);
    }
}

template <class Real>
double to_double(const Real& x) {
    if constexpr (std::is_same_v<Real, double>) return x;
    else return x.template convert_to<double>();
}

/// Tolerance and truncation contract governing every series summation.
///
/// rel_tolerance is the target relative accuracy of a summation; term_cap bounds
/// the number of terms. When the cap is reached before the tail estimate drops
/// below tolerance, the result carries converged=false and the achieved accuracy
/// (strict=true upgrades that to a convergence_error).
struct PrecisionPolicy {
    double rel_tolerance = 1e-15;
    std::size_t term_cap = 500000;
    bool strict = false;

    static PrecisionPolicy fast64() { return {1e-13, 500000, false}; }
    static PrecisionPolicy extended() { return {1e-15, 2000000, false}; }
};

}  // namespace diracmag
