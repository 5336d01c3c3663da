#pragma once

// Independent brute-force verification of the closed forms: Gauss-Laguerre
// quadrature of the radial integrals, truncated bilateral Sturmian series for
// the R sums and for the vanishing same-kappa channel, the finite-sum
// reduction identity behind the elementary bracket, and a direct-summation
// 3F2 reference. Everything here stays off the Thomae fast path on purpose.

#include <algorithm>
#include <cstdlib>
#include <random>
#include <vector>

#include "diracmag/hydrogenic.hpp"
#include "diracmag/magnet.hpp"
#include "diracmag/precision.hpp"
#include "diracmag/specfun.hpp"

namespace diracmag::oracle {

using hydrogenic::QuantumState;
using hydrogenic::RadialFunction;
using hydrogenic::SturmianIndex;

/// x-space moment of a product of two radial closures against the implied
/// weight: integral over x of f * h * x^power. The rule's exponent must match
/// the integrand's leading power at the origin, so the evaluated factor is the
/// pure polynomial part.
template <class Real>
Real product_moment(const specfun::QuadratureRule<Real>& rule, const RadialFunction<Real>& f,
                    const RadialFunction<Real>& h, long power = 0) {
    using std::abs;
    Real expected = f.lead + h.lead + power;
    if (!(abs(rule.exponent - expected) < Real(1e-6)))
        throw std::domain_error("product_moment: rule exponent does not match integrand");
    return rule.integrate([&](const Real& x) { return f.poly(x) * h.poly(x); });
}

template <class Real>
struct QuadResult {
    Real value{};
    double rel_change = 0;  // order-doubling convergence estimate
};

/// Quadrature of f * h * x^power with an order-doubling self-check.
template <class Real>
QuadResult<Real> radial_integral_quadrature(const RadialFunction<Real>& f, const RadialFunction<Real>& h,
                                            long power, long order) {
    using std::abs;
    Real expo = f.lead + h.lead + power;
    auto r1 = specfun::gauss_laguerre_rule<Real>(order, expo);
    auto r2 = specfun::gauss_laguerre_rule<Real>(2 * order, expo);
    Real v1 = product_moment(r1, f, h, power);
    Real v2 = product_moment(r2, f, h, power);
    Real scale = abs(v2) > 0 ? abs(v2) : Real{1};
    return {v2, to_double(abs(v2 - v1) / scale)};
}

namespace detail {

// Ladder evaluating <Q_{n kappa}|T_{n' kappa'}> and <P|S> overlaps ring by
// ring (|n'| = m), with the Gamma-ratio (d-k)_{m-1} kept as an incrementally
// updated rising factorial (exact zeros included) and all factorial-scale
// magnitudes carried in log space. Z=1 scale throughout.
template <class Real>
class OverlapLadder {
public:
    OverlapLadder(const QuantumState& host, int kappa_prime, const Real& alphaZ)
        : host_(host), kp_(kappa_prime), aZ_(alphaZ) {
        using std::log;
        auto rp = hydrogenic::relativistic_params(host, alphaZ);
        g_ = rp.gamma_kappa;
        N_ = rp.N_nk;
        eps_ = rp.eps_nk;
        gp_ = hydrogenic::gamma_of_kappa(kappa_prime, alphaZ);
        d_ = gp_ - g_;
        const long n = host.n;
        ln_host_ = specfun::ln_gamma(Real(n + 1)) + log(n + 2 * g_) + log(N_) - log(Real(16)) -
                   log(N_ - host.kappa) - specfun::ln_gamma(n + 2 * g_);
        for (long k = 0; k <= n; ++k) {
            Real lg = specfun::ln_gamma(g_ + gp_ + k + 1) - specfun::ln_gamma(k + 2 * g_ + 1) -
                      specfun::ln_gamma(Real(k + 1)) - specfun::ln_gamma(Real(n - k + 1));
            Real base = (k % 2 == 0 ? 1 : -1) * exp(lg + specfun::ln_gamma(n + 2 * g_));
            cqt_.push_back(((n - k) + (N_ - host.kappa)) * base);
            cps_.push_back(((n - k) - (N_ - host.kappa)) * base);
            ln_poch_.push_back(Real{0});
            poch_sign_.push_back(1);
        }
        m_ = 0;
        ln_mfact_ = 0;                                    // ln (m-1)! at m=1
        ln_lam_ = log(2 * gp_) - specfun::ln_gamma(2 * gp_);  // lnG(m+1)+ln(m+2g')-lnG(m+2g') at m=0
    }

    /// Advance to ring m+1. Call before querying ring m >= 1.
    void step() {
        using std::log;
        ++m_;
        const long m = m_;
        // lam(m) = lnG(m+1) + ln(m+2g') - lnG(m+2g'); both Gamma steps advance.
        ln_lam_ += log(Real(m)) + log(m + 2 * gp_) - 2 * log(m - 1 + 2 * gp_);
        if (m >= 2) {
            ln_mfact_ += log(Real(m - 1));
            for (std::size_t k = 0; k < ln_poch_.size(); ++k) {
                Real f = d_ - Real(long(k)) + (m - 2);
                if (poch_sign_[k] == 0) continue;
                if (f == 0) {
                    poch_sign_[k] = 0;
                } else {
                    using std::abs;
                    ln_poch_[k] += log(abs(f));
                    if (f < 0) poch_sign_[k] = -poch_sign_[k];
                }
            }
        }
    }

    long ring() const { return m_; }

    Real mu(int sign) const {
        SturmianIndex idx{int(sign * m_), kp_};
        return (m_ + gp_ + idx.signed_N(aZ_)) / (host_.n + g_ + N_);
    }

    /// Overlap <Q|T_{sign*m, kappa'}> at the current ring (m >= 1).
    Real overlap_qt(int sign) const { return overlap(sign, true); }
    /// Overlap <P|S_{sign*m, kappa'}> at the current ring (m >= 1).
    Real overlap_ps(int sign) const { return overlap(sign, false); }

    /// n' = 0 member (single, sign fixed by kappa').
    Real overlap_qt0() const { return overlap0(true); }
    Real overlap_ps0() const { return overlap0(false); }
    Real mu0() const {
        SturmianIndex idx{0, kp_};
        return (gp_ + idx.signed_N(aZ_)) / (host_.n + g_ + N_);
    }

private:
    Real overlap(int sign, bool qt) const {
        using std::abs;
        using std::exp;
        using std::log;
        const long m = m_;
        SturmianIndex idx{int(sign * m), kp_};
        const Real Np = idx.signed_N(aZ_);
        const Real ln_xi = (ln_host_ + ln_lam_ - log(abs(Np)) - log(abs(Np - kp_))) / 2;
        const Real E = exp(ln_xi - ln_mfact_);
        const std::vector<Real>& c = qt ? cqt_ : cps_;
        specfun::detail::KahanSum<Real> acc;
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (poch_sign_[k] == 0) continue;
            Real bracket = (Np + kp_) + (qt ? 1 : -1) * (m + d_ - Real(long(k)) - 1);
            acc.add(c[k] * poch_sign_[k] * exp(ln_poch_[k]) * bracket);
        }
        return (qt ? (1 - eps_) : (1 + eps_)) * E * acc.sum / (Np + kp_);
    }

    Real overlap0(bool qt) const {
        using std::abs;
        using std::exp;
        using std::log;
        SturmianIndex idx{0, kp_};
        const Real Np = idx.signed_N(aZ_);
        const Real lam0 = log(2 * gp_) - specfun::ln_gamma(2 * gp_);
        const Real ln_xi = (ln_host_ + lam0 - log(abs(Np)) - log(abs(Np - kp_))) / 2;
        const std::vector<Real>& c = qt ? cqt_ : cps_;
        specfun::detail::KahanSum<Real> acc;
        for (const Real& ck : c) acc.add(ck);
        Real tail_coef = (qt ? (Np - kp_) : (kp_ - Np)) / (2 * gp_);
        return (qt ? (1 - eps_) : (1 + eps_)) * exp(ln_xi) * tail_coef * acc.sum;
    }

    QuantumState host_;
    int kp_;
    Real aZ_;
    Real g_{}, gp_{}, d_{}, N_{}, eps_{};
    Real ln_host_{};
    Real ln_lam_{}, ln_mfact_{};
    long m_ = 0;
    std::vector<Real> cqt_, cps_, ln_poch_;
    std::vector<int> poch_sign_;
};

}  // namespace detail

/// Closed form of the single overlap integral <Q_{n kappa}|T_{n' kappa'}> dr
/// (Z=1 scale, a0=1). Positive and negative n' and the n'=0 member included.
template <class Real>
Real sturmian_overlap_qt(const QuantumState& host, const SturmianIndex& idx, const Real& alphaZ) {
    detail::OverlapLadder<Real> lad(host, idx.kappa_prime, alphaZ);
    if (idx.n_prime == 0) return lad.overlap_qt0();
    for (long m = 0; m < std::abs(idx.n_prime); ++m) lad.step();
    return lad.overlap_qt(idx.n_prime > 0 ? 1 : -1);
}

template <class Real>
Real sturmian_overlap_ps(const QuantumState& host, const SturmianIndex& idx, const Real& alphaZ) {
    detail::OverlapLadder<Real> lad(host, idx.kappa_prime, alphaZ);
    if (idx.n_prime == 0) return lad.overlap_ps0();
    for (long m = 0; m < std::abs(idx.n_prime); ++m) lad.step();
    return lad.overlap_ps(idx.n_prime > 0 ? 1 : -1);
}

struct SeriesTruncation {
    long max_abs_nprime = 2000;
    long quadrature_order = 400;
    double spot_check_fraction = 0.05;
    int max_spot_checks = 8;
};

template <class Real>
struct SeriesResult {
    Real value{};          // truncated bilateral sum, physical scale (1/Z^2 included)
    Real tail_estimate{};  // conservative, from last-ring magnitudes
    long rings = 0;
    int spot_checks = 0;
};

/// Truncated bilateral Sturmian series for R_{-kappa+sigma}: the plus channel
/// sums [<Q|T>]^2/(mu-1), the minus channel mu [<P|S>]^2/(mu-1), over
/// |n'| <= M in rings pairing +n' with -n'. Each integral comes from the
/// closed overlap form; a deterministic sample of rings is re-integrated by
/// quadrature (restricted to rings where the rule is polynomial-exact).
template <class Real>
SeriesResult<Real> r_series_truncated(const QuantumState& st, const Real& Z, const Real& alpha,
                                      int sigma, const SeriesTruncation& trunc = {}) {
    using std::abs;
    st.validate();
    if (sigma != 1 && sigma != -1) throw std::domain_error("r_series_truncated: channel must be +-1");
    if (trunc.max_abs_nprime < 10) throw std::domain_error("r_series_truncated: need max |n'| >= 10");
    const int kp = -st.kappa + sigma;
    if (kp == 0) throw std::domain_error("r_series_truncated: channel kappa' = 0 does not exist");
    const Real aZ = alpha * Z;
    const bool qt = (sigma == 1);

    detail::OverlapLadder<Real> lad(st, kp, aZ);

    // deterministic spot-check schedule
    std::mt19937 rng(0x9e3779b9u ^ (st.n * 131 + std::abs(st.kappa) * 17 + (sigma > 0 ? 1 : 0) +
                                    static_cast<unsigned>(to_double(Z) * 256)));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const long exact_limit = 2 * trunc.quadrature_order - 1 - st.n;  // poly degree n+m integrable
    std::vector<char> check(trunc.max_abs_nprime + 1, 0);
    int budget = trunc.max_spot_checks;
    for (long m = 1; m <= trunc.max_abs_nprime && budget > 0; ++m) {
        if (m <= exact_limit && unif(rng) < trunc.spot_check_fraction) {
            check[m] = 1;
            --budget;
        }
    }
    specfun::QuadratureRule<Real> rule;
    bool have_rule = false;

    specfun::detail::KahanSum<Real> acc;
    Real last_ring{0}, prev_ring{0};
    int checks_done = 0;
    auto term_of = [&](const Real& mu, const Real& ovl) -> Real {
        Real dmu = mu - 1;
        if (!(abs(dmu) > 0)) throw convergence_error("r_series_truncated: vanishing denominator mu-1");
        return qt ? ovl * ovl / dmu : mu * ovl * ovl / dmu;
    };
    {
        Real ovl0 = qt ? lad.overlap_qt0() : lad.overlap_ps0();
        acc.add(term_of(lad.mu0(), ovl0));
    }
    for (long m = 1; m <= trunc.max_abs_nprime; ++m) {
        lad.step();
        Real ring{0};
        for (int sign : {+1, -1}) {
            Real ovl = qt ? lad.overlap_qt(sign) : lad.overlap_ps(sign);
            ring += term_of(lad.mu(sign), ovl);
            if (check[m] && sign > 0) {
                auto [P, Q] = hydrogenic::bound_radial(st, aZ);
                if (!have_rule) {
                    rule = specfun::gauss_laguerre_rule<Real>(trunc.quadrature_order,
                                                              P.lead + hydrogenic::gamma_of_kappa(kp, aZ));
                    have_rule = true;
                }
                auto [S, T] = hydrogenic::sturmian_radial(SturmianIndex{int(m), kp}, st, aZ);
                auto rp = hydrogenic::relativistic_params(st, aZ);
                Real quad = (rp.N_nk / 2) * product_moment(rule, qt ? Q : P, qt ? T : S, 0);
                Real scale = std::max(abs(ovl), Real(1e-300));
                if (!(abs(quad - ovl) <= Real(1e-9) * scale))
                    throw convergence_error("r_series_truncated: closed-form overlap failed quadrature spot check");
                ++checks_done;
            }
        }
        acc.add(ring);
        prev_ring = last_ring;
        last_ring = ring;
    }
    SeriesResult<Real> out;
    out.value = acc.sum / (Z * Z);
    out.tail_estimate = trunc.max_abs_nprime * std::max(abs(last_ring), abs(prev_ring)) / (Z * Z);
    out.rings = trunc.max_abs_nprime;
    out.spot_checks = checks_done;
    return out;
}

template <class Real>
struct CancellationResult {
    Real r_inf{}, r_a{}, r_b{}, r_c{};
    Real residual() const { return r_inf + r_a + r_b + r_c; }
    Real largest() const {
        using std::abs;
        return std::max(std::max(abs(r_inf), abs(r_a)), std::max(abs(r_b), abs(r_c)));
    }
};

/// Numerical assembly of the vanishing same-kappa channel: the bilateral
/// series plus the three Green-function remainder pieces built from I, J, K.
/// Active series terms (|n'| <= n+1) are integrated by quadrature; beyond
/// them the closed overlap form yields exact zeros (Gamma-ratio with d = 0),
/// which is asserted on a sample of rings.
template <class Real>
CancellationResult<Real> chi_p_kappa_cancellation(const QuantumState& st, const Real& Z, const Real& alpha,
                                                  const SeriesTruncation& trunc = {}) {
    using std::abs;
    st.validate();
    const Real aZ = alpha * Z;
    auto rp = hydrogenic::relativistic_params(st, aZ);
    auto [P, Q] = hydrogenic::bound_radial(st, aZ);
    auto [S, T] = hydrogenic::sturmian_radial(SturmianIndex{st.n, st.kappa}, st, aZ);
    auto ijk = hydrogenic::ijk_functions(st, aZ);
    const Real jac = rp.N_nk / 2;
    const long k = st.kappa;
    const long order = std::max<long>(16, 2 * st.n + 8);
    auto rule = specfun::gauss_laguerre_rule<Real>(order, 2 * rp.gamma_kappa);
    // I, J, K carry one extra power of x in the mass term; same rule stays
    // exact because their polynomial degree rises by one only.
    auto ip = [&](const RadialFunction<Real>& a, const RadialFunction<Real>& b) {
        return jac * product_moment(rule, a, b, 0);
    };

    const Real A = (2 * k - 1) * ip(P, S) - (2 * k + 1) * ip(Q, T);
    CancellationResult<Real> out;
    out.r_a = (rp.eps_nk - Real(1) / 2) * A * A;
    out.r_b = ((2 * k - 1) * ip(P, ijk[0]) - (2 * k + 1) * ip(Q, ijk[2])) * A;
    out.r_c = A * ((2 * k - 1) * ip(P, ijk[1]) - (2 * k + 1) * ip(Q, ijk[2]));

    specfun::detail::KahanSum<Real> inf;
    detail::OverlapLadder<Real> lad(st, st.kappa, aZ);
    auto add_term = [&](int np, const Real& ips, const Real& iqt) {
        Real mu = hydrogenic::sturmian_eigenvalue(SturmianIndex{np, st.kappa}, st, aZ);
        Real dmu = mu - 1;
        if (!(abs(dmu) > 0)) throw convergence_error("chi_p_kappa_cancellation: vanishing mu-1");
        inf.add(((2 * k - 1) * ips - (2 * k + 1) * iqt) * ((2 * k - 1) * mu * ips - (2 * k + 1) * iqt) / dmu);
    };
    if (st.n != 0) {
        // n'=0 exists for kappa < 0 hosts and is an active (quadrature) term
        auto [S0, T0] = hydrogenic::sturmian_radial(SturmianIndex{0, st.kappa}, st, aZ);
        add_term(0, ip(P, S0), ip(Q, T0));
    }
    for (long m = 1; m <= trunc.max_abs_nprime; ++m) {
        lad.step();
        for (int sign : {+1, -1}) {
            int np = int(sign * m);
            if (np == st.n) continue;
            if (m <= st.n + 1) {
                auto [Sp, Tp] = hydrogenic::sturmian_radial(SturmianIndex{np, st.kappa}, st, aZ);
                add_term(np, ip(P, Sp), ip(Q, Tp));
            } else {
                // d = 0 makes the rising-factorial ratio vanish here; the
                // ladder must report exact zeros (checked, not assumed)
                Real ips = lad.overlap_ps(sign), iqt = lad.overlap_qt(sign);
                if (!(ips == 0 && iqt == 0))
                    throw convergence_error("chi_p_kappa_cancellation: same-kappa overlap not exactly zero");
            }
        }
    }
    out.r_inf = inf.sum;
    return out;
}

/// Both sides of the finite-sum reduction identity that collapses the
/// Gamma-weighted double sum of the z coefficients to its elementary form:
///   -n! G(n+2g+1) sum_{k,p} z(k) z(p) G(2g+k+p+2) / (G(g+g'+k+1) G(g+g'+p+1))
///   = 2 (N-kappa) [n(n+2g) + kappa - 2(n+g)N].
template <class Real>
std::pair<Real, Real> zcoef_weighted_sum_identity(const QuantumState& st, const Real& alphaZ) {
    using std::exp;
    auto rp = hydrogenic::relativistic_params(st, alphaZ);
    const Real g = rp.gamma_kappa, N = rp.N_nk;
    const long n = st.n, k = st.kappa;
    const int kp = -st.kappa + 1;
    if (kp == 0)
        throw std::domain_error("zcoef_weighted_sum_identity: needs kappa' = -kappa+1 nonzero");
    const Real gp = hydrogenic::gamma_of_kappa(kp, alphaZ);
    auto zc = magnet::ztilde_coefficients(st, alphaZ, +1).z;
    specfun::detail::KahanSum<Real> acc;
    for (long kk = 0; kk <= n; ++kk)
        for (long pp = 0; pp <= n; ++pp)
            acc.add(zc[kk] * zc[pp] *
                    exp(specfun::ln_gamma(2 * g + kk + pp + 2) - specfun::ln_gamma(g + gp + kk + 1) -
                        specfun::ln_gamma(g + gp + pp + 1)));
    Real lhs = -exp(specfun::ln_gamma(Real(n + 1)) + specfun::ln_gamma(n + 2 * g + 1)) * acc.sum;
    Real rhs = 2 * (N - k) * (n * (n + 2 * g) + k - 2 * (n + g) * N);
    return {lhs, rhs};
}

/// Direct-summation 3F2 reference at >= `digits` decimal digits of working
/// precision. Never routed through a transformed representation; this is the
/// independent check on hyp3f2_unit and its Thomae selector.
template <class Real>
specfun::Hyp3f2Result<Real> hyp3f2_reference(const specfun::HypergeometricArgs<Real>& args, int digits) {
    if (std::numeric_limits<Real>::digits10 < digits + 5)
        throw std::domain_error("hyp3f2_reference: working type too narrow for requested digits");
    PrecisionPolicy pol;
    pol.rel_tolerance = std::pow(10.0, -digits);
    pol.term_cap = 20000000;
    return specfun::hyp3f2_unit(args, pol);
}

}  // namespace diracmag::oracle
