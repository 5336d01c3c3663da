#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diracmag/magnet.hpp"
#include "diracmag/oracle.hpp"
#include "test_util.hpp"

using namespace diracmag;
using namespace diracmag::magnet;
using hydrogenic::QuantumState;
using testutil::R;

namespace {

R fixture_value(const std::string& file, int z, int col) {
    for (const auto& row : testutil::load_fixture(file))
        if (row.z == z) return real_from_string<R>(row.cols[col]);
    throw std::runtime_error("row not found");
}

}  // namespace

TEST_CASE("chi_d: elementary form and ground-state specialization") {
    R alpha = testutil::alpha2018();
    // alpha Z -> 0 ground state: Z^2 chi_d -> -1/2
    {
        R tiny_alpha = R(1e-12);
        R v = chi_d(QuantumState{0, -1, 1}, R(1), tiny_alpha);
        CHECK(testutil::rel(v, R(-0.5)) < 1e-20);
    }
    // general formula equals the ground closed form over Z
    for (int z : {1, 60, 137}) {
        R general = chi_d(QuantumState{0, -1, 1}, R(z), alpha);
        auto [cd, cp] = chi_ground_closed_forms(R(z), alpha);
        CHECK(testutil::rel(general, cd) < 1e-48);
    }
    // reference ratio at Z=1, state 2s1/2
    auto b = chi_total(QuantumState{1, -1, 1}, R(1), alpha);
    CHECK(to_double(fmt::units_in_12th_digit(R(b.chi_d / b.chi_total),
                                             fixture_value("table_2s12.tsv", 1, 0))) <= 1.0);
}

TEST_CASE("chi_p_dprime against the independent moment route") {
    // chi_p'' must equal alpha^3 a0^2 * 2 kappa mu^2/(4kappa^2-1) * <r P Q>,
    // with the moment taken by quadrature. This pins the angular factor.
    R alpha = testutil::alpha2018();
    for (auto [n, kappa, z] : {std::tuple{1, -1, 50}, {0, -2, 90}, {1, 1, 40}, {2, -3, 120}}) {
        QuantumState st{n, kappa, 1};
        R aZ = alpha * z;
        auto rp = hydrogenic::relativistic_params(st, aZ);
        auto [P, Q] = hydrogenic::bound_radial(st, aZ);
        auto m1 = oracle::radial_integral_quadrature(P, Q, 1, 2 * n + 8);
        R jac = rp.N_nk / (2 * R(z));
        R moment = jac * jac * m1.value * R(z);  // physical <r P Q> in a0, a0=1
        R mu2 = R(1) / 4;
        R via_moment = alpha * (2 * kappa * mu2 / R(4 * kappa * kappa - 1)) * moment;
        R direct = chi_p_dprime(st, R(z), alpha);
        CHECK(testutil::rel(direct, via_moment) < 1e-30);
    }
    // reference ratios
    R a = alpha;
    auto b1 = chi_total(QuantumState{1, -1, 1}, R(1), a);
    CHECK(to_double(fmt::units_in_12th_digit(R(b1.chi_p_dprime / b1.chi_total),
                                             fixture_value("table_2s12.tsv", 1, 2))) <= 1.0);
    auto b4 = chi_total(QuantumState{0, -2, 3}, R(100), a);
    CHECK(to_double(fmt::units_in_12th_digit(R(b4.chi_p_dprime / b4.chi_total),
                                             fixture_value("table_2p32_mu32.tsv", 100, 2))) <= 1.0);
}

TEST_CASE("expansion coefficients z and z-tilde") {
    R alpha = testutil::alpha2018();
    // n=0: single coefficient +-(N-kappa) G(g+g'+1)/G(2g+1)
    {
        QuantumState st{0, -2, 1};
        R aZ = alpha * 40;
        auto rp = hydrogenic::relativistic_params(st, aZ);
        R gp = hydrogenic::gamma_of_kappa(3, aZ);
        auto zc = ztilde_coefficients(st, aZ, +1);
        using std::exp;
        R want = (rp.N_nk - st.kappa) *
                 exp(specfun::ln_gamma(rp.gamma_kappa + gp + 1) -
                     specfun::ln_gamma(2 * rp.gamma_kappa + 1));
        CHECK(zc.z.size() == 1);
        CHECK(testutil::rel(zc.z[0], want) < 1e-47);
    }
    // tilde ratio (n-k) + (N-kappa) for (n,kappa) = (2,-1)
    {
        QuantumState st{2, -1, 1};
        R aZ = alpha * 25;
        auto rp = hydrogenic::relativistic_params(st, aZ);
        auto zc = ztilde_coefficients(st, aZ, +1);
        for (std::size_t k = 0; k < zc.z.size(); ++k) {
            R want = (R(2) - R(long(k))) + (rp.N_nk - st.kappa);
            CHECK(testutil::rel(R(zc.ztilde[k] / zc.z[k]), want) < 1e-46);
        }
    }
    // alternating sign when the bracket keeps its sign: (n,kappa) = (3,-2), Z=30
    {
        QuantumState st{3, -2, 1};
        R aZ = alpha * 30;
        auto zc = ztilde_coefficients(st, aZ, +1);
        for (std::size_t k = 0; k + 1 < zc.z.size(); ++k)
            CHECK(to_double(zc.z[k] * zc.z[k + 1]) < 0);
    }
}

TEST_CASE("channel prefactor zeros are exact short-circuits") {
    R alpha = testutil::alpha2018();
    // kappa=-1, mu=+-1/2: the kappa'=-kappa-1=0 channel has vanishing prefactor
    auto r1 = chi_p_prime_channel(QuantumState{1, -1, 1}, R(137), alpha, -1);
    CHECK(r1.value == 0);
    CHECK(r1.converged);
    // kappa=+1, mu=+-1/2: the kappa'=0 channel is now -kappa+1
    auto r2 = chi_p_prime_channel(QuantumState{1, 1, 1}, R(137), alpha, +1);
    CHECK(r2.value == 0);
    // kappa=-2, mu=+-3/2: the minus channel prefactor (2kappa+1)^2 = 9 = 4mu^2
    auto r3 = chi_p_prime_channel(QuantumState{0, -2, 3}, R(80), alpha, -1);
    CHECK(r3.value == 0);
    // ... while mu=+-1/2 keeps it alive
    auto r4 = chi_p_prime_channel(QuantumState{0, -2, 1}, R(80), alpha, -1);
    CHECK(r4.value != 0);
}

TEST_CASE("reference table rows across all four states") {
    R alpha = testutil::alpha2018();
    struct Probe {
        const char* file;
        int n, kappa, tm, z;
    };
    for (const Probe& p : {Probe{"table_2s12.tsv", 1, -1, 1, 10},
                           Probe{"table_2s12.tsv", 1, -1, 1, 137},
                           Probe{"table_2p12.tsv", 1, 1, 1, 40},
                           Probe{"table_2p12.tsv", 1, 1, 1, 110},
                           Probe{"table_2p32_mu12.tsv", 0, -2, 1, 1},
                           Probe{"table_2p32_mu12.tsv", 0, -2, 1, 50},
                           Probe{"table_2p32_mu32.tsv", 0, -2, 3, 137}}) {
        auto b = chi_total(QuantumState{p.n, p.kappa, p.tm}, R(p.z), alpha);
        R ratios[4] = {b.chi_d / b.chi_total, b.chi_p_prime / b.chi_total,
                       b.chi_p_dprime / b.chi_total, b.chi_p / b.chi_total};
        for (int c = 0; c < 4; ++c) {
            CAPTURE(p.file);
            CAPTURE(p.z);
            CAPTURE(c);
            CHECK(to_double(fmt::units_in_12th_digit(ratios[c], fixture_value(p.file, p.z, c))) <= 1.0);
        }
    }
}

TEST_CASE("breakdown identities hold as assembled floating sums") {
    R alpha = testutil::alpha2018();
    for (auto [n, kappa, tm, z] : {std::tuple{1, -1, 1, 90}, {1, 1, 1, 25}, {0, -2, 3, 137}}) {
        auto b = chi_total(QuantumState{n, kappa, tm}, R(z), alpha);
        CHECK(b.chi_p_prime == b.chi_p_prime_plus + b.chi_p_prime_minus);
        CHECK(b.chi_p == b.chi_p_prime + b.chi_p_dprime);
        CHECK(b.chi_total == b.chi_d + b.chi_p);
    }
}

TEST_CASE("ground-state closed forms match the general path") {
    R alpha = testutil::alpha2018();
    for (int z = 1; z <= 137; z += 8) {
        auto b = chi_total(QuantumState{0, -1, 1}, R(z), alpha);
        auto [cd, cp] = chi_ground_closed_forms(R(z), alpha);
        CHECK(testutil::rel(b.chi_d, cd) < 1e-12);
        CHECK(testutil::rel(b.chi_p, cp) < 1e-12);
    }
    // documented Z=120 reference point under both alpha conventions
    {
        auto b18 = chi_total(QuantumState{0, -1, 1}, R(120), testutil::alpha2018());
        CHECK(testutil::rel(R(b18.chi_p_dprime / b18.chi_total),
                            real_from_string<R>(testutil::kZ120pdd2018)) < 1e-13);
        auto b86 = chi_total(QuantumState{0, -1, 1}, R(120), testutil::alpha1986());
        CHECK(testutil::rel(R(b86.chi_p_dprime / b86.chi_total),
                            real_from_string<R>(testutil::kZ120pdd1986)) < 1e-13);
    }
    // |chi_p| is far below |chi_d| at Z=1
    auto b1 = chi_total(QuantumState{0, -1, 1}, R(1), alpha);
    CHECK(to_double(b1.chi_p / b1.chi_d) < 1e-5);
}

TEST_CASE("sign structure of the paramagnetic pieces across the tables") {
    R alpha = testutil::alpha2018();
    using std::abs;
    for (const auto& row : testutil::load_fixture("table_2s12.tsv")) {
        auto b = chi_total(QuantumState{1, -1, 1}, R(row.z), alpha);
        CHECK(abs(b.chi_p_prime) < abs(b.chi_p_dprime));
    }
    for (const auto& row : testutil::load_fixture("table_2p32_mu32.tsv")) {
        auto b = chi_total(QuantumState{0, -2, 3}, R(row.z), alpha);
        CHECK(abs(b.chi_p_prime) < abs(b.chi_p_dprime));
    }
    for (const auto& row : testutil::load_fixture("table_2p12.tsv")) {
        auto b = chi_total(QuantumState{1, 1, 1}, R(row.z), alpha);
        CHECK(abs(b.chi_p_dprime) < abs(b.chi_p_prime));
    }
    for (const auto& row : testutil::load_fixture("table_2p32_mu12.tsv")) {
        auto b = chi_total(QuantumState{0, -2, 1}, R(row.z), alpha);
        CHECK(abs(b.chi_p_dprime) < abs(b.chi_p_prime));
    }
}

TEST_CASE("nonrelativistic limit: Z^2 chi_d approaches a negative constant") {
    QuantumState st{1, 1, 1};
    R alpha = testutil::alpha2018();
    R prev_val{0}, prev_gap{1e30};
    for (int halvings = 0; halvings <= 6; ++halvings) {
        R a = alpha;
        for (int i = 0; i < halvings; ++i) a /= 2;
        R v = chi_d(st, R(30), a) * 900;
        if (halvings > 0) {
            using std::abs;
            R gap = abs(v - prev_val);
            CHECK(gap < prev_gap);
            prev_gap = gap;
        }
        prev_val = v;
        CHECK(v < 0);
    }
}

TEST_CASE("crossover charges") {
    R alpha = testutil::alpha2018();
    auto zc1 = crossover_scan(hydrogenic::parse_state_label("2p1/2", 1), alpha, 1, 137);
    REQUIRE(zc1.has_value());
    CHECK(*zc1 == 117);
    auto zc2 = crossover_scan(hydrogenic::parse_state_label("2p3/2", 1), alpha, 1, 137);
    REQUIRE(zc2.has_value());
    CHECK(*zc2 == 103);
    // diamagnetic dominance from the start: no crossover reported
    auto none = crossover_scan(hydrogenic::parse_state_label("2s1/2", 1), alpha, 1, 137);
    CHECK(!none.has_value());
    CHECK_THROWS_AS(crossover_scan(QuantumState{1, -1, 1}, alpha, 0, 10), std::domain_error);
}
