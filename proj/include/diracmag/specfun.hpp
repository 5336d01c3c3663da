#pragma once

// Special-function primitives: log-gamma, generalized Laguerre polynomials,
// 3F2 series at unit argument, and generalized Gauss-Laguerre quadrature.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "diracmag/precision.hpp"

namespace diracmag::specfun {

template <class Real>
Real ln_gamma(const Real& x) {
    if (!(x > 0)) throw std::domain_error("ln_gamma: argument must be positive");
    using std::lgamma;
    return lgamma(x);
}

/// Gamma(x) through the log, x > 0.
template <class Real>
Real gamma_pos(const Real& x) {
    using std::exp;
    return exp(ln_gamma(x));
}

/// Rising factorial (x)_m = x (x+1) ... (x+m-1), as a plain product so that
/// nonpositive x needs no Gamma evaluation and integer x yields exact zeros.
template <class Real>
Real pochhammer(const Real& x, long m) {
    if (m < 0) throw std::domain_error("pochhammer: negative order");
    Real p{1};
    for (long i = 0; i < m; ++i) p *= x + i;
    return p;
}

/// L_n^(beta)(x) by the forward three-term recurrence.
template <class Real>
Real laguerre_poly(long n, const Real& beta, const Real& x) {
    if (n < 0) throw std::domain_error("laguerre_poly: n must be >= 0");
    if (!(beta > -1)) throw std::domain_error("laguerre_poly: beta must exceed -1");
    if (n == 0) return Real{1};
    Real lm1{1};
    Real l = 1 + beta - x;
    for (long j = 1; j < n; ++j) {
        Real lp1 = ((2 * j + 1 + beta - x) * l - (j + beta) * lm1) / (j + 1);
        lm1 = l;
        l = lp1;
    }
    return l;
}

template <class Real>
struct HypergeometricArgs {
    Real a1, a2, a3;
    Real b1, b2;

    /// Parametric excess s = b1+b2-a1-a2-a3; the series converges at unit
    /// argument iff s > 0 or it terminates.
    Real margin() const { return b1 + b2 - a1 - a2 - a3; }
};

template <class Real>
struct Hyp3f2Result {
    Real value{};
    double rel_accuracy = 0;  // estimated achieved relative accuracy
    std::size_t terms = 0;
    bool converged = true;
};

namespace detail {

template <class Real>
bool is_nonpositive_integer(const Real& x) {
    using std::floor;
    return x <= 0 && floor(x) == x;
}

template <class Real>
struct KahanSum {
    Real sum{0}, c{0};
    void add(const Real& v) {
        Real y = v - c;
        Real t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

}  // namespace detail

/// 3F2(a1,a2,a3; b1,b2; 1), summed directly term by term with compensated
/// accumulation. Stops when the algebraic tail estimate drops below
/// policy.rel_tolerance or the series terminates. Throws convergence_error for
/// a nonterminating series with margin <= 0; a reached term cap is reported
/// through rel_accuracy/converged (or thrown if policy.strict).
template <class Real>
Hyp3f2Result<Real> hyp3f2_unit(const HypergeometricArgs<Real>& a, const PrecisionPolicy& policy) {
    using std::abs;
    for (const Real* b : {&a.b1, &a.b2}) {
        if (detail::is_nonpositive_integer(*b))
            throw std::domain_error("hyp3f2_unit: denominator parameter is a nonpositive integer");
    }
    const Real s = a.margin();
    const bool terminates = detail::is_nonpositive_integer(a.a1) ||
                            detail::is_nonpositive_integer(a.a2) ||
                            detail::is_nonpositive_integer(a.a3);
    if (!(s > 0) && !terminates)
        throw convergence_error("hyp3f2_unit: nonterminating series with margin <= 0");

    detail::KahanSum<Real> acc;
    Real t{1};
    Real n1 = a.a1, n2 = a.a2, n3 = a.a3, d1 = a.b1, d2 = a.b2;
    Real prev_abs{0};
    const double tol = policy.rel_tolerance;
    for (std::size_t j = 0; j < policy.term_cap; ++j) {
        acc.add(t);
        Real num = n1 * n2 * n3;
        if (num == 0) return {acc.sum, 0.0, j + 1, true};  // terminated exactly
        prev_abs = abs(t);
        t = t * num / (d1 * d2 * (j + 1));
        n1 += 1; n2 += 1; n3 += 1; d1 += 1; d2 += 1;
        if (j >= 8 && s > 0 && abs(t) < prev_abs) {
            // algebraic decay t_i ~ i^-(s+1): tail ~ |t_j| * j/s, kept with a 2x guard
            Real tail = 2 * abs(t) * (Real(j + 1) / s + 1);
            if (tail < tol * abs(acc.sum))
                return {acc.sum, to_double(tail / abs(acc.sum)), j + 1, true};
        }
    }
    Real tail = 2 * abs(t) * (Real(policy.term_cap) / (s > 0 ? s : Real{1}) + 1);
    double rel = to_double(tail / abs(acc.sum));
    if (policy.strict)
        throw convergence_error("hyp3f2_unit: tail " + std::to_string(rel) +
                                " above tolerance at term cap");
    return {acc.sum, rel, policy.term_cap, false};
}

namespace detail {

// Thomae relation, pivoting on numerator parameter a_i:
//   3F2(a1,a2,a3;b1,b2;1) = G(b2)G(s) / (G(b2-ai) G(s+ai))
//                           * 3F2(b1-aj, b1-ak, ai; b1, s+ai; 1)
// with s the parametric excess; the pivoted series has margin b2-ai.
template <class Real>
struct PivotPlan {
    HypergeometricArgs<Real> args;
    Real ln_prefactor{0};
    Real margin{0};
    bool terminating = false;
    bool valid = false;
};

template <class Real>
PivotPlan<Real> make_pivot(const HypergeometricArgs<Real>& a, int i) {
    const Real num[3] = {a.a1, a.a2, a.a3};
    const Real s = a.margin();
    const Real ai = num[i];
    Real rest[2];
    for (int l = 0, w = 0; l < 3; ++l)
        if (l != i) rest[w++] = num[l];
    PivotPlan<Real> p;
    p.args = {a.b1 - rest[0], a.b1 - rest[1], ai, a.b1, s + ai};
    p.margin = a.b2 - ai;
    p.terminating = is_nonpositive_integer(p.args.a1) || is_nonpositive_integer(p.args.a2) ||
                    is_nonpositive_integer(p.args.a3);
    p.valid = s > 0 && a.b2 > 0 && p.margin > 0 && (s + ai) > 0 && a.b1 > 0;
    if (p.valid)
        p.ln_prefactor = ln_gamma(a.b2) + ln_gamma(s) - ln_gamma(p.margin) - ln_gamma(s + ai);
    return p;
}

}  // namespace detail

/// 3F2(...;1) through the representation (identity or Thomae pivot) with the
/// best convergence margin. Exact algebraic identity in front of the direct
/// engine; used where the direct series converges too slowly.
template <class Real>
Hyp3f2Result<Real> hyp3f2_unit_best(const HypergeometricArgs<Real>& a, const PrecisionPolicy& policy) {
    using std::exp;
    const Real s = a.margin();
    const bool direct_terminates = detail::is_nonpositive_integer(a.a1) ||
                                   detail::is_nonpositive_integer(a.a2) ||
                                   detail::is_nonpositive_integer(a.a3);
    if (direct_terminates) return hyp3f2_unit(a, policy);

    int best = -1;
    detail::PivotPlan<Real> plans[3];
    for (int i = 0; i < 3; ++i) {
        plans[i] = detail::make_pivot(a, i);
        if (!plans[i].valid) continue;
        if (best < 0 || (plans[i].terminating && !plans[best].terminating) ||
            (plans[i].terminating == plans[best].terminating && plans[i].margin > plans[best].margin))
            best = i;
    }
    if (best < 0 || (!plans[best].terminating && !(plans[best].margin > s)))
        return hyp3f2_unit(a, policy);
    auto r = hyp3f2_unit(plans[best].args, policy);
    r.value *= exp(plans[best].ln_prefactor);
    return r;
}

/// 3F2 of the recurring shape F(d+u1, d+u2, d+u3; d+u3+1, b2; 1) with exact
/// integer shifts u_i. The Thomae pivots then carry exact integer numerator
/// parameters u3-u_l+1, so terminating representations are recognized exactly.
template <class Real>
Hyp3f2Result<Real> hyp3f2_unit_shifted(const Real& d, long u1, long u2, long u3, const Real& b2,
                                       const PrecisionPolicy& policy) {
    using std::exp;
    const Real b1 = d + (u3 + 1);
    const Real s = b2 + 1 - 2 * d - u1 - u2;
    const long u[3] = {u1, u2, u3};

    int best = -1;
    bool best_term = false;
    Real best_margin{0};
    for (int i = 0; i < 3; ++i) {
        const Real margin = b2 - d - u[i];
        bool term = false;
        for (int l = 0; l < 3; ++l)
            if (l != i && u3 - u[l] + 1 <= 0) term = true;
        const bool valid = s > 0 && b2 > 0 && margin > 0 && (s + d + u[i]) > 0 && b1 > 0;
        if (!valid) continue;
        if (best < 0 || (term && !best_term) || (term == best_term && margin > best_margin)) {
            best = i;
            best_term = term;
            best_margin = margin;
        }
    }
    HypergeometricArgs<Real> direct{d + u1, d + u2, d + u3, b1, b2};
    if (best < 0 || (!best_term && !(best_margin > s))) return hyp3f2_unit(direct, policy);

    Real rest[2];
    for (int l = 0, w = 0; l < 3; ++l)
        if (l != best) rest[w++] = Real(u3 - u[l] + 1);
    HypergeometricArgs<Real> piv{rest[0], rest[1], d + u[best], b1, s + d + u[best]};
    auto r = hyp3f2_unit(piv, policy);
    r.value *= exp(ln_gamma(b2) + ln_gamma(s) - ln_gamma(b2 - d - u[best]) - ln_gamma(s + d + u[best]));
    return r;
}

// ---------------------------------------------------------------------------
// Generalized Gauss-Laguerre quadrature for the weight x^beta e^-x on [0,inf).

template <class Real>
struct QuadratureRule {
    std::vector<Real> nodes;    // strictly increasing
    std::vector<Real> weights;  // all positive
    long order = 0;
    Real exponent{};  // beta in x^beta e^-x

    template <class F>
    Real integrate(F&& f) const {
        detail::KahanSum<Real> acc;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc.add(weights[i] * f(nodes[i]));
        return acc.sum;
    }
};

namespace detail {

// Eigenvalues of a symmetric tridiagonal matrix (QL with implicit shifts),
// diagonal d[0..n-1], off-diagonal e[0..n-2]. Double precision seeds only.
inline std::vector<double> tridiag_eigenvalues(std::vector<double> d, std::vector<double> e) {
    const int n = static_cast<int>(d.size());
    e.push_back(0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw convergence_error("gauss_laguerre_rule: tridiagonal QL did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (r == 0.0 && m - 1 >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

}  // namespace detail

/// Gauss-Laguerre rule of the given order for weight x^exponent e^-x.
/// Nodes are seeded by a binary64 Golub-Welsch pass and polished by Newton
/// iteration at working precision; weights come from the Christoffel sum of
/// orthonormal-polynomial values.
template <class Real>
QuadratureRule<Real> gauss_laguerre_rule(long order, const Real& exponent) {
    if (order < 1) throw std::domain_error("gauss_laguerre_rule: order must be >= 1");
    if (!(exponent > -1)) throw std::domain_error("gauss_laguerre_rule: exponent must exceed -1");
    using std::abs;
    using std::sqrt;
    const long q = order;
    const Real beta = exponent;
    const double bd = to_double(beta);

    std::vector<double> diag(q), off(q > 1 ? q - 1 : 0);
    for (long i = 0; i < q; ++i) diag[i] = 2.0 * i + bd + 1.0;
    for (long i = 1; i < q; ++i) off[i - 1] = std::sqrt(i * (i + bd));
    std::vector<double> seed = detail::tridiag_eigenvalues(diag, off);

    QuadratureRule<Real> rule;
    rule.order = q;
    rule.exponent = beta;
    rule.nodes.reserve(q);
    rule.weights.reserve(q);

    const Real eps = std::numeric_limits<Real>::epsilon();
    for (long i = 0; i < q; ++i) {
        Real x{seed[i]};
        // Quadratic convergence from the binary64 seed; stop on tolerance or
        // on stagnation at the rounding floor of the recurrence.
        Real prev_dx{0};
        bool ok = false;
        for (int it = 0; it < 24; ++it) {
            Real f = laguerre_poly(q, beta, x);
            Real fp = -laguerre_poly(q - 1, beta + 1, x);
            Real dx = f / fp;
            x -= dx;
            if (abs(dx) <= 8 * eps * abs(x) || (it >= 2 && abs(dx) >= abs(prev_dx))) {
                ok = abs(dx) <= Real(1e-8) * (abs(x) + 1);
                break;
            }
            prev_dx = dx;
        }
        if (!ok) throw convergence_error("gauss_laguerre_rule: Newton polish did not converge");
        // Christoffel function: w = 1 / sum_{m<q} phat_m(x)^2 with orthonormal phat.
        Real mu0 = gamma_pos(beta + 1);
        Real pm1{0};
        Real p0 = 1 / sqrt(mu0);
        detail::KahanSum<Real> k2;
        k2.add(p0 * p0);
        for (long m = 0; m < q - 1; ++m) {
            Real bm = sqrt(Real(m) * (m + beta));      // sqrt(beta_m), zero at m=0
            Real bp = sqrt(Real(m + 1) * (m + 1 + beta));
            Real p1 = ((x - (2 * m + beta + 1)) * p0 - bm * pm1) / bp;
            k2.add(p1 * p1);
            pm1 = p0;
            p0 = p1;
        }
        rule.nodes.push_back(x);
        rule.weights.push_back(1 / k2.sum);
    }
    for (long i = 0; i + 1 < q; ++i)
        if (!(rule.nodes[i] < rule.nodes[i + 1]))
            throw convergence_error("gauss_laguerre_rule: nodes not strictly increasing");
    for (const Real& w : rule.weights)
        if (!(w > 0)) throw convergence_error("gauss_laguerre_rule: nonpositive weight");
    return rule;
}

}  // namespace diracmag::specfun
