#pragma once

// Quantum-number algebra, bound-state radial functions P/Q, and the
// Dirac-Coulomb Sturmian functions S/T with their I/J/K companions.
//
// Radial closures are functions of the dimensionless variable
// x = 2 Z r / (a0 N_{n kappa}) and are stored at the Z=1, a0=1 scale; every
// physical integral picks up its explicit powers of Z at the use site
// (dr = (N/2Z) dx, bound functions scale like sqrt(Z), Sturmians like
// 1/sqrt(Z)). Each function is kept factored as poly(x) * x^lead * e^(-x/2),
// so that products integrate exactly against a Gauss-Laguerre weight.

#include <array>
#include <cctype>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "diracmag/precision.hpp"
#include "diracmag/specfun.hpp"

namespace diracmag::hydrogenic {

/// Eigenstate labels: radial quantum number n, Dirac quantum number kappa,
/// magnetic quantum number mu stored exactly as 2*mu.
struct QuantumState {
    int n = 0;
    int kappa = -1;
    int twice_mu = 1;

    void validate() const {
        if (kappa == 0) throw std::domain_error("QuantumState: kappa must be nonzero");
        if (n < 0) throw std::domain_error("QuantumState: n must be >= 0");
        if (n == 0 && kappa > 0)
            throw std::domain_error("QuantumState: no n=0 bound state with kappa > 0");
        if (std::abs(twice_mu) % 2 == 0)
            throw std::domain_error("QuantumState: mu must be a half-odd integer");
        if (std::abs(twice_mu) > 2 * std::abs(kappa) - 1)
            throw std::domain_error("QuantumState: |mu| exceeds j");
    }
    int principal() const { return n + std::abs(kappa); }
};

/// Map a spectroscopic label ("2p3/2") plus mu to (n, kappa, mu).
inline QuantumState parse_state_label(const std::string& label, int twice_mu) {
    const char* ell_letters = "spdfghiklm";
    std::size_t i = 0;
    while (i < label.size() && std::isdigit(static_cast<unsigned char>(label[i]))) ++i;
    if (i == 0 || i >= label.size()) throw std::invalid_argument("bad state label: " + label);
    const int principal = std::stoi(label.substr(0, i));
    int ell = -1;
    for (int l = 0; ell_letters[l]; ++l)
        if (label[i] == ell_letters[l]) ell = l;
    if (ell < 0) throw std::invalid_argument("bad orbital letter in label: " + label);
    const std::string jpart = label.substr(i + 1);
    const std::size_t slash = jpart.find('/');
    if (slash == std::string::npos || jpart.substr(slash + 1) != "2")
        throw std::invalid_argument("bad j in label (expected p/2): " + label);
    const int twice_j = std::stoi(jpart.substr(0, slash));
    if (!(twice_j == 2 * ell + 1 || twice_j == 2 * ell - 1) || twice_j < 1)
        throw std::invalid_argument("j must be l +/- 1/2 in label: " + label);
    if (principal < ell + 1) throw std::invalid_argument("principal < l+1 in label: " + label);
    QuantumState st;
    st.kappa = (twice_j == 2 * ell - 1) ? ell : -(ell + 1);
    st.n = principal - std::abs(st.kappa);
    st.twice_mu = twice_mu;
    st.validate();
    return st;
}

template <class Real>
struct RelativisticParams {
    Real gamma_kappa{};  // sqrt(kappa^2 - (alpha Z)^2)
    Real N_nk{};         // sqrt(n^2 + 2 n gamma + kappa^2)
    Real eps_nk{};       // (n + gamma)/N
    Real alphaZ{};
};

template <class Real>
Real gamma_of_kappa(int kappa, const Real& alphaZ) {
    using std::sqrt;
    Real disc = Real(kappa) * kappa - alphaZ * alphaZ;
    if (!(disc > 0))
        throw std::domain_error("gamma_kappa: alpha*Z >= |kappa|, state does not exist");
    return sqrt(disc);
}

template <class Real>
RelativisticParams<Real> relativistic_params(const QuantumState& st, const Real& alphaZ) {
    st.validate();
    using std::sqrt;
    RelativisticParams<Real> p;
    p.alphaZ = alphaZ;
    p.gamma_kappa = gamma_of_kappa(st.kappa, alphaZ);
    p.N_nk = sqrt(Real(st.n) * st.n + 2 * st.n * p.gamma_kappa + Real(st.kappa) * st.kappa);
    p.eps_nk = (st.n + p.gamma_kappa) / p.N_nk;
    return p;
}

/// Sturmian basis label (n', kappa'). The apparent principal quantum number
/// N_{n'kappa'} carries a sign: + for n'>0, - for n'<0, and for n'=0 the sign
/// is + when kappa'<0 and - when kappa'>0. That rule lives here and nowhere
/// else.
struct SturmianIndex {
    int n_prime = 0;
    int kappa_prime = -1;

    void validate() const {
        if (kappa_prime == 0) throw std::domain_error("SturmianIndex: kappa' must be nonzero");
    }
    int sign() const { return n_prime > 0 ? 1 : n_prime < 0 ? -1 : (kappa_prime < 0 ? 1 : -1); }
    template <class Real>
    Real signed_N(const Real& alphaZ) const {
        using std::sqrt;
        validate();
        const long m = std::abs(n_prime);
        Real g = gamma_of_kappa(kappa_prime, alphaZ);
        Real mag = sqrt(Real(m) * m + 2 * m * g + Real(kappa_prime) * kappa_prime);
        return sign() * mag;
    }
};

enum class RadialKind { P, Q, S, T, I, J, K };

/// A radial function factored as poly(x) * x^lead * e^(-x/2). poly is a
/// polynomial for P/Q/S/T/I/J/K, which makes products exactly integrable by a
/// Gauss-Laguerre rule of exponent lead1+lead2+monomial power.
template <class Real>
struct RadialFunction {
    RadialKind kind;
    Real lead{};
    std::function<Real(const Real&)> poly;

    Real operator()(const Real& x) const {
        using std::exp;
        using std::pow;
        return poly(x) * pow(x, lead) * exp(-x / 2);
    }
};

namespace detail {

// c * [L_{m-1}^(2g)(x) + t L_m^(2g)(x)]
template <class Real>
std::function<Real(const Real&)> laguerre_pair(Real c, Real g, long m, Real t) {
    return [c, g, m, t](const Real& x) -> Real {
        Real two_g = 2 * g;
        return c * ((m >= 1 ? specfun::laguerre_poly(m - 1, two_g, x) : Real{0}) +
                    t * specfun::laguerre_poly(m, two_g, x));
    };
}

}  // namespace detail

/// Bound radial functions P, Q at the Z=1 scale (see file comment).
template <class Real>
std::pair<RadialFunction<Real>, RadialFunction<Real>> bound_radial(const QuantumState& st,
                                                                   const Real& alphaZ) {
    using std::exp;
    using std::sqrt;
    auto rp = relativistic_params(st, alphaZ);
    const Real g = rp.gamma_kappa, N = rp.N_nk, eps = rp.eps_nk;
    const long n = st.n;
    const Real common = (n + 2 * g) *
                        exp(specfun::ln_gamma(Real(n + 1)) - specfun::ln_gamma(n + 2 * g)) /
                        (2 * N * N * (N - st.kappa));
    const Real t = (st.kappa - N) / (n + 2 * g);
    return {RadialFunction<Real>{RadialKind::P, g, detail::laguerre_pair(sqrt((1 + eps) * common), g, n, t)},
            RadialFunction<Real>{RadialKind::Q, g, detail::laguerre_pair(sqrt((1 - eps) * common), g, n, -t)}};
}

/// Sturmian radial functions S, T associated with the host state's energy,
/// at the Z=1 scale. For (n', kappa') = (n, kappa): S = N_{n kappa} P and
/// T = N_{n kappa} Q in this scale (sqrt(a0) N/Z physically).
template <class Real>
std::pair<RadialFunction<Real>, RadialFunction<Real>> sturmian_radial(const SturmianIndex& idx,
                                                                      const QuantumState& host,
                                                                      const Real& alphaZ) {
    using std::exp;
    using std::sqrt;
    idx.validate();
    auto rp = relativistic_params(host, alphaZ);
    const long m = std::abs(idx.n_prime);
    const Real gp = gamma_of_kappa(idx.kappa_prime, alphaZ);
    const Real Np = idx.signed_N(alphaZ);
    // N'(N'-kappa') > 0 for every admissible index, so the root is real.
    const Real common = rp.N_nk * (m + 2 * gp) *
                        exp(specfun::ln_gamma(Real(m + 1)) - specfun::ln_gamma(m + 2 * gp)) /
                        (2 * Np * (Np - idx.kappa_prime));
    const Real t = (idx.kappa_prime - Np) / (m + 2 * gp);
    return {RadialFunction<Real>{RadialKind::S, gp, detail::laguerre_pair(sqrt((1 + rp.eps_nk) * common), gp, m, t)},
            RadialFunction<Real>{RadialKind::T, gp, detail::laguerre_pair(sqrt((1 - rp.eps_nk) * common), gp, m, -t)}};
}

/// Sturmian eigenvalue mu_{n'kappa'} = (|n'| + gamma' + N_{n'kappa'}) / (n + gamma + N).
template <class Real>
Real sturmian_eigenvalue(const SturmianIndex& idx, const QuantumState& host, const Real& alphaZ) {
    auto rp = relativistic_params(host, alphaZ);
    Real gp = gamma_of_kappa(idx.kappa_prime, alphaZ);
    return (std::abs(idx.n_prime) + gp + idx.signed_N(alphaZ)) /
           (host.n + rp.gamma_kappa + rp.N_nk);
}

/// The I, J, K companions of the host-state Sturmians (same x convention);
/// the mass term r m c (1 +/- eps)/hbar equals (1 +/- eps) N x / (2 alpha Z)
/// in these units, so all three stay (polynomial) * x^gamma * e^(-x/2).
template <class Real>
std::array<RadialFunction<Real>, 3> ijk_functions(const QuantumState& host, const Real& alphaZ) {
    auto rp = relativistic_params(host, alphaZ);
    auto [S, T] = sturmian_radial(SturmianIndex{host.n, host.kappa}, host, alphaZ);
    const Real eps = rp.eps_nk, N = rp.N_nk, aZ = alphaZ;
    const Real kap = Real(host.kappa);
    auto Sp = S.poly, Tp = T.poly;
    const Real g = S.lead;
    auto Ip = [=](const Real& x) -> Real {
        return eps * (-(kap + 1 / (2 * eps)) * Sp(x) + ((1 + eps) * N * x / (2 * aZ) + aZ) * Tp(x));
    };
    auto Jp = [=](const Real& x) -> Real {
        return eps * (-(kap - 1 / (2 * eps)) * Sp(x) + ((1 + eps) * N * x / (2 * aZ) + aZ) * Tp(x));
    };
    auto Kp = [=](const Real& x) -> Real {
        return eps * (((1 - eps) * N * x / (2 * aZ) - aZ) * Sp(x) + (kap + 1 / (2 * eps)) * Tp(x));
    };
    return {RadialFunction<Real>{RadialKind::I, g, Ip}, RadialFunction<Real>{RadialKind::J, g, Jp},
            RadialFunction<Real>{RadialKind::K, g, Kp}};
}

}  // namespace diracmag::hydrogenic
