#pragma once

// Fixed-width numeric formatting shared by the CLI and the golden-file tests:
// 13 significant digits as d.dddddddddddde+EE (sign only when negative,
// two-digit signed exponent), so equal configurations produce identical bytes.

#include <cctype>
#include <cstdio>
#include <sstream>
#include <string>

#include "diracmag/precision.hpp"

namespace diracmag::fmt {

inline std::string normalize_sci(std::string s) {
    // harmonize exponent spelling: e+5 -> e+05, E -> e
    auto epos = s.find_first_of("eE");
    if (epos == std::string::npos) return s;
    s[epos] = 'e';
    std::string mant = s.substr(0, epos);
    std::string ex = s.substr(epos + 1);
    char sign = '+';
    if (!ex.empty() && (ex[0] == '+' || ex[0] == '-')) {
        sign = ex[0];
        ex.erase(0, 1);
    }
    while (ex.size() > 2 && ex[0] == '0') ex.erase(0, 1);
    while (ex.size() < 2) ex.insert(ex.begin(), '0');
    return mant + "e" + sign + ex;
}

template <class Real>
std::string format_sci(const Real& x) {
    if constexpr (std::is_same_v<Real, double>) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.12e", x);
        return normalize_sci(buf);
    } else {
        if (x == 0) return "0.000000000000e+00";
        std::string s = x.str(12, std::ios_base::scientific);
        return normalize_sci(s);
    }
}

/// |a - ref| measured in units of the 12th significant digit of ref.
template <class Real>
Real units_in_12th_digit(const Real& a, const Real& ref) {
    using std::abs;
    using std::floor;
    using std::log10;
    using std::pow;
    if (ref == 0) return abs(a) > 0 ? Real(1e30) : Real(0);
    Real mag = floor(log10(abs(ref)));
    return abs(a - ref) / pow(Real(10), mag - 11);
}

}  // namespace diracmag::fmt
