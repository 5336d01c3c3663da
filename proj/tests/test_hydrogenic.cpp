#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diracmag/hydrogenic.hpp"
#include "diracmag/oracle.hpp"
#include "test_util.hpp"

using namespace diracmag;
using namespace diracmag::hydrogenic;
using testutil::R;

namespace {

const std::vector<std::pair<int, int>> kGridStates = {{0, -1}, {1, -1}, {1, 1}, {0, -2}, {2, -3}};
const std::vector<int> kGridZ = {1, 20, 80, 137};

}  // namespace

TEST_CASE("state label parsing") {
    auto s1 = parse_state_label("1s1/2", 1);
    CHECK(s1.n == 0);
    CHECK(s1.kappa == -1);
    auto s2 = parse_state_label("2s1/2", 1);
    CHECK(s2.n == 1);
    CHECK(s2.kappa == -1);
    auto s3 = parse_state_label("2p3/2", 3);
    CHECK(s3.n == 0);
    CHECK(s3.kappa == -2);
    CHECK(s3.twice_mu == 3);
    auto s4 = parse_state_label("2p1/2", -1);
    CHECK(s4.n == 1);
    CHECK(s4.kappa == 1);
    auto s5 = parse_state_label("3d5/2", 5);
    CHECK(s5.n == 0);
    CHECK(s5.kappa == -3);

    CHECK_THROWS_AS(parse_state_label("xyz", 1), std::invalid_argument);
    CHECK_THROWS_AS(parse_state_label("2q1/2", 1), std::invalid_argument);
    CHECK_THROWS_AS(parse_state_label("2p5/2", 1), std::invalid_argument);   // j != l +/- 1/2
    CHECK_THROWS_AS(parse_state_label("1p1/2", 1), std::invalid_argument);   // principal < l+1
    CHECK_THROWS_AS(parse_state_label("2p1/2", 3), std::domain_error);       // |mu| > j
    CHECK_THROWS_AS(parse_state_label("1s1/2", 2), std::domain_error);       // mu not half-odd
}

TEST_CASE("relativistic parameters") {
    // nonrelativistic limit of the ground state
    auto p0 = relativistic_params(QuantumState{0, -1, 1}, R(1e-20));
    CHECK(testutil::rel(p0.gamma_kappa, R(1)) < 1e-39);
    CHECK(testutil::rel(p0.N_nk, R(1)) < 1e-39);
    CHECK(testutil::rel(p0.eps_nk, R(1)) < 1e-39);
    // N = sqrt(2 + 2 gamma) at n=1, kappa=-1
    R aZ = R(20) * testutil::alpha2018();
    auto p1 = relativistic_params(QuantumState{1, -1, 1}, aZ);
    using std::sqrt;
    CHECK(testutil::rel(p1.N_nk, R(sqrt(2 + 2 * p1.gamma_kappa))) < 1e-49);
    // gamma_1 at Z=137
    auto p137 = relativistic_params(QuantumState{0, -1, 1}, R(137) * testutil::alpha2018());
    CHECK(testutil::rel(p137.gamma_kappa, real_from_string<R>(testutil::kGamma1Z137)) < 1e-41);
    // state does not exist at alpha Z >= |kappa|
    CHECK_THROWS_AS(relativistic_params(QuantumState{0, -1, 1}, R(1)), std::domain_error);
    // eps strictly increases with n at fixed kappa, matching the level ordering
    R prev{-1};
    for (int n = 0; n <= 6; ++n) {
        auto p = relativistic_params(QuantumState{n, -1, 1}, aZ);
        CHECK(p.eps_nk > prev);
        CHECK(p.eps_nk <= 1);
        prev = p.eps_nk;
    }
}

TEST_CASE("bound radial functions: normalization and closed moments") {
    R alpha = testutil::alpha2018();
    for (auto [n, kappa] : kGridStates) {
        for (int z : kGridZ) {
            QuantumState st{n, kappa, 1};
            R aZ = alpha * z;
            auto rp = relativistic_params(st, aZ);
            auto [P, Q] = bound_radial(st, aZ);
            const long order = 2 * n + 10;
            // norm: (N/2) * int (P^2 + Q^2) dx = 1  (Z=1 scale)
            auto qp = oracle::radial_integral_quadrature(P, P, 0, order);
            auto qq = oracle::radial_integral_quadrature(Q, Q, 0, order);
            CHECK(testutil::rel(R(rp.N_nk / 2 * (qp.value + qq.value)), R(1)) < 1e-10);
            // r^2 (P^2 - Q^2) moment against its elementary form
            auto m2p = oracle::radial_integral_quadrature(P, P, 2, order);
            auto m2q = oracle::radial_integral_quadrature(Q, Q, 2, order);
            R jac = rp.N_nk / (2 * R(z));
            R got2 = jac * jac * jac * (m2p.value - m2q.value) * R(z);  // bound fns carry sqrt(Z)
            R g = rp.gamma_kappa, N = rp.N_nk;
            R want2 = (n + g) *
                      (N * (5 * n * n + 10 * n * g + 2 * g * g + 1) - 3 * kappa * (n + g)) /
                      (2 * R(z) * z);
            CHECK(testutil::rel(got2, want2) < 1e-10);
            // r P Q moment
            auto m1 = oracle::radial_integral_quadrature(P, Q, 1, order);
            R got1 = jac * jac * m1.value * R(z);
            R want1 = (2 * kappa * (n + g) - N) / (4 * N * (1 / alpha));
            CHECK(testutil::rel(got1, want1) < 1e-10);
            CHECK(qp.rel_change < 1e-12);
        }
    }
}

TEST_CASE("sturmian functions: proportionality, eigenvalues, sign rule") {
    R alpha = testutil::alpha2018();
    QuantumState st{1, -1, 1};
    R aZ = alpha * 30;
    auto rp = relativistic_params(st, aZ);
    auto [P, Q] = bound_radial(st, aZ);
    auto [S, T] = sturmian_radial(SturmianIndex{st.n, st.kappa}, st, aZ);
    for (const char* xs : {"0.2", "2", "10", "40"}) {
        R x = real_from_string<R>(xs);
        CHECK(testutil::rel(S(x), R(rp.N_nk * P(x))) < 1e-12);
        CHECK(testutil::rel(T(x), R(rp.N_nk * Q(x))) < 1e-12);
    }
    // eigenvalue 1 on the host index
    CHECK(testutil::rel(sturmian_eigenvalue(SturmianIndex{st.n, st.kappa}, st, aZ), R(1)) < 1e-49);
    // monotone growth with |n'|
    R prev = sturmian_eigenvalue(SturmianIndex{1, -1}, st, aZ);
    for (int np = 2; np <= 100; ++np) {
        R mu = sturmian_eigenvalue(SturmianIndex{np, -1}, st, aZ);
        CHECK(mu > prev);
        prev = mu;
    }
    // n'=0 sign rule: minus for kappa'>0, plus for kappa'<0
    SturmianIndex plus2{0, 2}, minus2{0, -2};
    CHECK(to_double(plus2.signed_N(R(1e-20))) == doctest::Approx(-2.0));
    CHECK(to_double(minus2.signed_N(R(1e-20))) == doctest::Approx(2.0));
    // frozen eigenvalue example: host 2s1/2 at Z=1, (n',kappa') = (0,+2)
    QuantumState host2s{1, -1, 1};
    R mu0 = sturmian_eigenvalue(SturmianIndex{0, 2}, host2s, alpha * 1);
    CHECK(testutil::rel(mu0, real_from_string<R>(testutil::kMu02Host2sZ1)) < 1e-12);
}

TEST_CASE("I, J, K companions") {
    R alpha = testutil::alpha2018();
    for (auto [n, kappa] : {std::pair{1, -1}, std::pair{0, -2}}) {
        QuantumState st{n, kappa, 1};
        R aZ = alpha * 30;
        auto [S, T] = sturmian_radial(SturmianIndex{n, kappa}, st, aZ);
        auto ijk = ijk_functions(st, aZ);
        for (const char* xs : {"0.5", "3", "12"}) {
            R x = real_from_string<R>(xs);
            CHECK(testutil::rel(R(ijk[1](x) - ijk[0](x)), S(x)) < 1e-45);  // J - I = S
        }
        CHECK(ijk[2](R(0)) == 0);  // K vanishes at the origin
    }
}
