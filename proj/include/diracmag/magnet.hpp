#pragma once

// Closed-form magnetizability decomposition for a Dirac one-electron atom:
// diamagnetic part, the two paramagnetic pieces, ground-state specializations,
// and crossover-charge scans. All returned values are dimensionless
// coefficients c such that the physical contribution is c * alpha^2 a0^3,
// with the 1/Z^2 dependence folded into c.

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <utility>
#include <vector>

#include "diracmag/hydrogenic.hpp"
#include "diracmag/precision.hpp"
#include "diracmag/specfun.hpp"

namespace diracmag::magnet {

using hydrogenic::QuantumState;

template <class Real>
struct MagnetizabilityBreakdown {
    Real chi_d{};
    Real chi_p_prime_plus{};   // kappa' = -kappa+1 channel
    Real chi_p_prime_minus{};  // kappa' = -kappa-1 channel
    Real chi_p_prime{};
    Real chi_p_dprime{};
    Real chi_p{};
    Real chi_total{};
    double accuracy_estimate = 0;  // worst relative accuracy among the series used
    bool converged = true;
};

/// Diamagnetic part: elementary in n, kappa, mu, gamma, N.
template <class Real>
Real chi_d(const QuantumState& st, const Real& Z, const Real& alpha) {
    st.validate();
    auto rp = hydrogenic::relativistic_params(st, alpha * Z);
    const Real g = rp.gamma_kappa, N = rp.N_nk;
    const long k = st.kappa, tm = st.twice_mu, n = st.n;
    const Real mu_factor = Real(4 * k * k + tm * tm - 1) / (16 * (4 * k * k - 1));
    return -(mu_factor / (Z * Z)) * (n + g) *
           (N * (5 * n * n + 10 * n * g + 2 * g * g + 1) - 3 * k * (n + g));
}

/// Spin-convective paramagnetic part chi_p''. The angular factor is
/// kappa (alpha Z)^2 mu^2 / (4 kappa^2 - 1); it is pinned against the
/// independent moment route (r P Q integral) in the tests.
template <class Real>
Real chi_p_dprime(const QuantumState& st, const Real& Z, const Real& alpha) {
    st.validate();
    const Real aZ = alpha * Z;
    auto rp = hydrogenic::relativistic_params(st, aZ);
    const Real g = rp.gamma_kappa, N = rp.N_nk;
    const long k = st.kappa, tm = st.twice_mu, n = st.n;
    const Real mu2 = Real(tm * tm) / 4;
    return (k * aZ * aZ * mu2 / ((4 * k * k - 1) * Z * Z)) * (2 * k * (n + g) - N) / (2 * N);
}

/// Expansion coefficients of the paramagnetic channel sums. For channel sign
/// sigma (kappa' = -kappa + sigma):
///   z(k)  = (-1)^k/(k!(n-k)!) [(n-k) + sigma(N-kappa)] G(g+g'+k+1)/G(k+2g+1)
///   zt(k) = [(n-k) + sigma(N-kappa)] z(k)
/// Gamma ratios are evaluated in log space; the sign factors stay exact.
template <class Real>
struct ZTildeCoefficients {
    std::vector<Real> z;
    std::vector<Real> ztilde;
};

template <class Real>
ZTildeCoefficients<Real> ztilde_coefficients(const QuantumState& st, const Real& alphaZ, int sigma) {
    st.validate();
    if (sigma != 1 && sigma != -1) throw std::domain_error("ztilde_coefficients: sigma must be +-1");
    auto rp = hydrogenic::relativistic_params(st, alphaZ);
    const int kp = -st.kappa + sigma;
    if (kp == 0) throw std::domain_error("ztilde_coefficients: channel kappa' = 0");
    const Real g = rp.gamma_kappa;
    const Real gp = hydrogenic::gamma_of_kappa(kp, alphaZ);
    const Real nmk_shift = sigma * (rp.N_nk - st.kappa);
    ZTildeCoefficients<Real> out;
    out.z.reserve(st.n + 1);
    out.ztilde.reserve(st.n + 1);
    using std::exp;
    for (long k = 0; k <= st.n; ++k) {
        Real lg = specfun::ln_gamma(g + gp + k + 1) - specfun::ln_gamma(k + 2 * g + 1) -
                  specfun::ln_gamma(Real(k + 1)) - specfun::ln_gamma(Real(st.n - k + 1));
        Real bracket = (st.n - k) + nmk_shift;
        Real zk = (k % 2 == 0 ? 1 : -1) * bracket * exp(lg);
        out.z.push_back(zk);
        out.ztilde.push_back(bracket * zk);
    }
    return out;
}

template <class Real>
struct ChannelEval {
    Real value{};
    double rel_accuracy = 0;
    bool converged = true;
};

/// Closed form of the Green-function radial sum R_{-kappa+sigma} feeding the
/// chi_p' channels (coefficient of a0, 1/Z^2 included). This is the quantity
/// the truncated Sturmian series of the oracle converges to.
template <class Real>
ChannelEval<Real> r_sturmian_closed(const QuantumState& st, const Real& Z, const Real& alpha,
                                    int sigma, const PrecisionPolicy& policy = PrecisionPolicy::extended()) {
    st.validate();
    if (sigma != 1 && sigma != -1) throw std::domain_error("r_sturmian_closed: channel must be +-1");
    const long k = st.kappa, n = st.n;
    const int kp = -st.kappa + sigma;
    if (kp == 0) throw std::domain_error("r_sturmian_closed: channel kappa' = 0 does not exist");

    const Real aZ = alpha * Z;
    auto rp = hydrogenic::relativistic_params(st, aZ);
    const Real g = rp.gamma_kappa, N = rp.N_nk;
    const Real gp = hydrogenic::gamma_of_kappa(kp, aZ);
    const Real d = gp - g;

    const Real elementary = 2 * k - 4 * (n + g) * N + sigma * 2 * n * (n + 2 * g);
    using std::exp;
    const Real sum_coef = exp(specfun::ln_gamma(Real(n + 1)) + specfun::ln_gamma(n + 2 * g + 1) -
                              specfun::ln_gamma(2 * gp + 1)) /
                          ((N - k) * (d - n + 1));

    auto zt = ztilde_coefficients(st, aZ, sigma).ztilde;
    // F(k,p) is symmetric; largest-magnitude-first compensated accumulation.
    std::vector<Real> terms;
    terms.reserve((n + 1) * (n + 1));
    double worst_acc = 0;
    bool ok = true;
    for (long kk = 0; kk <= n; ++kk) {
        for (long pp = kk; pp <= n; ++pp) {
            auto F = specfun::hyp3f2_unit_shifted(d, -kk, -pp, -n + 1, 2 * gp + 1, policy);
            worst_acc = std::max(worst_acc, F.rel_accuracy);
            ok = ok && F.converged;
            Real t = zt[kk] * zt[pp] * F.value;
            terms.push_back(pp == kk ? t : 2 * t);
        }
    }
    using std::abs;
    std::sort(terms.begin(), terms.end(),
              [](const Real& a, const Real& b) { return abs(a) > abs(b); });
    specfun::detail::KahanSum<Real> acc;
    for (const Real& t : terms) acc.add(t);

    const Real value = (n + g - sigma * N) * (n + g - sigma * N) / (16 * N * (N + kp) * Z * Z) *
                       (elementary + sum_coef * acc.sum);
    return {value, worst_acc, ok};
}

/// One Green-function channel of chi_p': kappa' = -kappa + sigma. The
/// mu-dependent prefactor 1 - 4mu^2/(2kappa-sigma)^2 is tested for zero in
/// exact integer arithmetic, short-circuiting the channel before any
/// kappa'-dependent quantity (in particular gamma_{kappa'=0}) is formed.
template <class Real>
ChannelEval<Real> chi_p_prime_channel(const QuantumState& st, const Real& Z, const Real& alpha,
                                      int sigma, const PrecisionPolicy& policy = PrecisionPolicy::extended()) {
    st.validate();
    if (sigma != 1 && sigma != -1) throw std::domain_error("chi_p_prime_channel: channel must be +-1");
    const long k = st.kappa, tm = st.twice_mu;
    const long denom = (2 * k - sigma) * (2 * k - sigma);
    const long mu_num = denom - tm * tm;  // exact: zero iff the channel drops out
    if (mu_num == 0) return {Real{0}, 0.0, true};

    auto r = r_sturmian_closed(st, Z, alpha, sigma, policy);
    r.value *= Real(mu_num) / (8 * denom);
    return r;
}

/// Full decomposition; the assembled sums satisfy the definitional identities
/// exactly as floating additions.
template <class Real>
MagnetizabilityBreakdown<Real> chi_total(const QuantumState& st, const Real& Z, const Real& alpha,
                                         const PrecisionPolicy& policy = PrecisionPolicy::extended()) {
    MagnetizabilityBreakdown<Real> b;
    b.chi_d = chi_d(st, Z, alpha);
    auto plus = chi_p_prime_channel(st, Z, alpha, +1, policy);
    auto minus = chi_p_prime_channel(st, Z, alpha, -1, policy);
    b.chi_p_prime_plus = plus.value;
    b.chi_p_prime_minus = minus.value;
    b.chi_p_prime = b.chi_p_prime_plus + b.chi_p_prime_minus;
    b.chi_p_dprime = chi_p_dprime(st, Z, alpha);
    b.chi_p = b.chi_p_prime + b.chi_p_dprime;
    b.chi_total = b.chi_d + b.chi_p;
    b.accuracy_estimate = std::max(plus.rel_accuracy, minus.rel_accuracy);
    b.converged = plus.converged && minus.converged;
    return b;
}

template <class Real>
Real chi_p(const QuantumState& st, const Real& Z, const Real& alpha,
           const PrecisionPolicy& policy = PrecisionPolicy::extended()) {
    return chi_total(st, Z, alpha, policy).chi_p;
}

/// Ground-state closed forms (n=0, kappa=-1, mu=+-1/2), evaluated on their own
/// path, independent of the general channel assembly. The elementary term and
/// the Gamma-weighted series cancel to O((alpha Z)^2), so the series tolerance
/// is retightened once the cancellation level is known.
template <class Real>
std::pair<Real, Real> chi_ground_closed_forms(const Real& Z, const Real& alpha,
                                              const PrecisionPolicy& policy = PrecisionPolicy::extended()) {
    using std::abs;
    using std::exp;
    const Real aZ = alpha * Z;
    const Real g1 = hydrogenic::gamma_of_kappa(1, aZ);
    const Real g2 = hydrogenic::gamma_of_kappa(2, aZ);
    const Real cd = -(g1 * (g1 + 1) * (2 * g1 + 1) / 12) / (Z * Z);
    const Real c = g2 - g1;
    const Real pref = exp(2 * specfun::ln_gamma(g1 + g2 + 2) - specfun::ln_gamma(2 * g1 + 1) -
                          specfun::ln_gamma(2 * g2 + 1)) /
                      (72 * (g2 - g1));
    const Real elementary = (g1 + 1) * (2 * g1 + 1) * (g1 - 2) / 36;
    PrecisionPolicy pol = policy;
    Real bracket{};
    for (int pass = 0; pass < 2; ++pass) {
        auto F = specfun::hyp3f2_unit_shifted(c, -1, -1, 0, 2 * g2 + 1, pol);
        bracket = elementary + pref * F.value;
        double amplification = to_double(abs(pref * F.value) / abs(bracket));
        if (F.rel_accuracy * amplification <= policy.rel_tolerance || pass == 1) break;
        pol.rel_tolerance = policy.rel_tolerance / (2 * amplification);
    }
    return {cd, Real(-bracket / (Z * Z))};
}

/// Smallest integer Z in [z_lo, z_hi] at which |chi_d| >= |chi_p| after the
/// paramagnetic part dominated at the start of the range; nullopt when no
/// such equalization happens in range.
template <class Real>
std::optional<int> crossover_scan(const QuantumState& st, const Real& alpha, int z_lo, int z_hi,
                                  const PrecisionPolicy& policy = {1e-12, 500000, false}) {
    if (z_lo < 1 || z_hi < z_lo) throw std::domain_error("crossover_scan: invalid Z range");
    using std::abs;
    bool prev_para = false;
    for (int z = z_lo; z <= z_hi; ++z) {
        auto b = chi_total(st, Real(z), alpha, policy);
        const bool dia = abs(b.chi_d) >= abs(b.chi_p);
        if (prev_para && dia) return z;
        prev_para = !dia;
    }
    return std::nullopt;
}

}  // namespace diracmag::magnet
