// diracmag: magnetizability decomposition of Dirac one-electron atoms.
//
// Modes: breakdown (full decomposition per state and Z), table (relative
// contributions, reference-table layout), crossover (equalization charge per
// state), verify (independent series/quadrature cross-checks).

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diracmag/format.hpp"
#include "diracmag/magnet.hpp"
#include "diracmag/oracle.hpp"

using namespace diracmag;
using hydrogenic::QuantumState;

namespace {

struct Config {
    std::string alpha_inverse = kAlphaInverse2018;
    std::string precision = "extended:50";
    std::string mode = "table";
    std::string format = "tsv";
    std::string out = "stdout";
    std::vector<std::string> states;
    std::vector<std::string> mus;
    std::vector<std::string> zspecs;
    long series_m = 2000;
    long quad_order = 400;
};

int parse_twice_mu(const std::string& s) {
    std::string t = s;
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    auto slash = t.find('/');
    if (slash == std::string::npos || t.substr(slash + 1) != "2")
        throw CLI::ValidationError("--mu", "mu must be a half-integer like 1/2 or -3/2");
    return std::stoi(t.substr(0, slash));
}

std::vector<int> parse_z_list(const std::vector<std::string>& specs) {
    std::set<int> zs;
    for (const auto& s : specs) {
        auto dots = s.find("..");
        if (dots == std::string::npos) {
            zs.insert(std::stoi(s));
        } else {
            int a = std::stoi(s.substr(0, dots));
            int b = std::stoi(s.substr(dots + 2));
            if (a > b || a < 1) throw CLI::ValidationError("--z", "bad range " + s);
            for (int z = a; z <= b; ++z) zs.insert(z);
        }
    }
    return {zs.begin(), zs.end()};
}

const std::vector<int> kTableZ = {1,  2,  3,  4,  5,  10,  20,  30,  40,  50, 60,
                                  70, 80, 90, 100, 110, 120, 130, 135, 136, 137};

struct StateSpec {
    std::string label;
    int twice_mu;
};

std::vector<StateSpec> resolve_states(const Config& cfg) {
    std::vector<StateSpec> out;
    if (cfg.states.empty()) {
        if (cfg.mode == "crossover")
            return {{"2p1/2", 1}, {"2p3/2", 1}, {"3p1/2", 1}, {"3p3/2", 1}};
        if (cfg.mode == "verify")
            return {{"2s1/2", 1}, {"2p1/2", 1}, {"2p3/2", 1}, {"2p3/2", 3}, {"3p1/2", 1}};
        return {{"2s1/2", 1}, {"2p1/2", 1}, {"2p3/2", 1}, {"2p3/2", 3}};
    }
    for (std::size_t i = 0; i < cfg.states.size(); ++i) {
        int tm = i < cfg.mus.size() ? parse_twice_mu(cfg.mus[i]) : 1;
        out.push_back({cfg.states[i], tm});
    }
    return out;
}

std::string mu_string(int twice_mu) { return std::to_string(twice_mu) + "/2"; }

template <class Real>
struct Context {
    Real alpha;
    Real alpha_inv;
    PrecisionPolicy policy;
    std::string sep;
    bool jsonl = false;
    bool all_converged = true;
};

template <class Real>
bool state_in_range(const QuantumState& st, int z, const Context<Real>& ctx) {
    return ctx.alpha * z < std::abs(st.kappa);
}

template <class Real>
void emit_table(const Config& cfg, const std::vector<StateSpec>& states, const std::vector<int>& zs,
                Context<Real>& ctx, std::ostream& os) {
    for (const auto& sp : states) {
        QuantumState st = hydrogenic::parse_state_label(sp.label, sp.twice_mu);
        if (!ctx.jsonl)
            os << "# state " << sp.label << " mu " << mu_string(sp.twice_mu) << " alpha_inverse "
               << cfg.alpha_inverse << "\n"
               << "# Z" << ctx.sep << "chi_d_over_chi" << ctx.sep << "chi_p_prime_over_chi" << ctx.sep
               << "chi_p_dprime_over_chi" << ctx.sep << "chi_p_over_chi\n";
        for (int z : zs) {
            if (!state_in_range(st, z, ctx)) {
                std::cerr << "warning: skipping " << sp.label << " Z=" << z
                          << " (alpha*Z >= |kappa|)\n";
                continue;
            }
            auto b = magnet::chi_total(st, Real(z), ctx.alpha, ctx.policy);
            ctx.all_converged = ctx.all_converged && b.converged;
            Real rd = b.chi_d / b.chi_total, rp = b.chi_p_prime / b.chi_total,
                 rpp = b.chi_p_dprime / b.chi_total, rptot = b.chi_p / b.chi_total;
            if (ctx.jsonl) {
                os << "{\"z\":" << z << ",\"state\":\"" << sp.label << "\",\"mu\":\""
                   << mu_string(sp.twice_mu) << "\",\"ratios\":{\"chi_d\":" << fmt::format_sci(rd)
                   << ",\"chi_p_prime\":" << fmt::format_sci(rp)
                   << ",\"chi_p_dprime\":" << fmt::format_sci(rpp)
                   << ",\"chi_p\":" << fmt::format_sci(rptot) << "}}\n";
            } else {
                os << z << ctx.sep << fmt::format_sci(rd) << ctx.sep << fmt::format_sci(rp) << ctx.sep
                   << fmt::format_sci(rpp) << ctx.sep << fmt::format_sci(rptot) << "\n";
            }
        }
    }
}

template <class Real>
void emit_breakdown(const Config& cfg, const std::vector<StateSpec>& states, const std::vector<int>& zs,
                    Context<Real>& ctx, std::ostream& os) {
    if (!ctx.jsonl)
        os << "# z" << ctx.sep << "state" << ctx.sep << "mu" << ctx.sep << "chi_d" << ctx.sep
           << "chi_p_prime_plus" << ctx.sep << "chi_p_prime_minus" << ctx.sep << "chi_p_dprime"
           << ctx.sep << "chi_p" << ctx.sep << "chi_total" << ctx.sep << "accuracy_estimate\n";
    for (const auto& sp : states) {
        QuantumState st = hydrogenic::parse_state_label(sp.label, sp.twice_mu);
        for (int z : zs) {
            if (!state_in_range(st, z, ctx)) {
                std::cerr << "warning: skipping " << sp.label << " Z=" << z
                          << " (alpha*Z >= |kappa|)\n";
                continue;
            }
            auto b = magnet::chi_total(st, Real(z), ctx.alpha, ctx.policy);
            ctx.all_converged = ctx.all_converged && b.converged;
            char acc[32];
            std::snprintf(acc, sizeof(acc), "%.3e", b.accuracy_estimate);
            if (ctx.jsonl) {
                os << "{\"z\":" << z << ",\"state\":\"" << sp.label << "\",\"mu\":\""
                   << mu_string(sp.twice_mu) << "\",\"chi_d\":" << fmt::format_sci(b.chi_d)
                   << ",\"chi_p_prime_plus\":" << fmt::format_sci(b.chi_p_prime_plus)
                   << ",\"chi_p_prime_minus\":" << fmt::format_sci(b.chi_p_prime_minus)
                   << ",\"chi_p_dprime\":" << fmt::format_sci(b.chi_p_dprime)
                   << ",\"chi_p\":" << fmt::format_sci(b.chi_p)
                   << ",\"chi_total\":" << fmt::format_sci(b.chi_total) << ",\"ratios\":{\"chi_d\":"
                   << fmt::format_sci(Real(b.chi_d / b.chi_total))
                   << ",\"chi_p_prime\":" << fmt::format_sci(Real(b.chi_p_prime / b.chi_total))
                   << ",\"chi_p_dprime\":" << fmt::format_sci(Real(b.chi_p_dprime / b.chi_total))
                   << ",\"chi_p\":" << fmt::format_sci(Real(b.chi_p / b.chi_total))
                   << "},\"accuracy_estimate\":" << acc << "}\n";
            } else {
                os << z << ctx.sep << sp.label << ctx.sep << mu_string(sp.twice_mu) << ctx.sep
                   << fmt::format_sci(b.chi_d) << ctx.sep << fmt::format_sci(b.chi_p_prime_plus)
                   << ctx.sep << fmt::format_sci(b.chi_p_prime_minus) << ctx.sep
                   << fmt::format_sci(b.chi_p_dprime) << ctx.sep << fmt::format_sci(b.chi_p)
                   << ctx.sep << fmt::format_sci(b.chi_total) << ctx.sep << acc << "\n";
            }
        }
    }
}

template <class Real>
void emit_crossover(const std::vector<StateSpec>& states, const std::vector<int>& zs,
                    Context<Real>& ctx, std::ostream& os) {
    int zlo = zs.empty() ? 1 : zs.front();
    int zhi = zs.empty() ? 137 : zs.back();
    for (const auto& sp : states) {
        QuantumState st = hydrogenic::parse_state_label(sp.label, sp.twice_mu);
        int hi = zhi;
        while (hi >= zlo && !state_in_range(st, hi, ctx)) --hi;
        auto zc = magnet::crossover_scan(st, ctx.alpha, zlo, hi);
        os << sp.label << ctx.sep << mu_string(sp.twice_mu) << ctx.sep
           << (zc ? std::to_string(*zc) : std::string("none")) << "\n";
    }
}

struct VerifyReport {
    int failures = 0;
    int warnings = 0;
};

template <class Real>
void report_check(std::ostream& os, VerifyReport& rep, const std::string& name, double dev,
                  double tol) {
    bool pass = dev <= tol;
    if (!pass) ++rep.failures;
    char line[160];
    std::snprintf(line, sizeof(line), "%s %s deviation=%.3e tolerance=%.3e", pass ? "PASS" : "FAIL",
                  name.c_str(), dev, tol);
    os << line << "\n";
}

template <class Real>
void run_verify(const Config& cfg, const std::vector<StateSpec>& states, const std::vector<int>& zs,
                Context<Real>& ctx, std::ostream& os, VerifyReport& rep) {
    using std::abs;
    const bool fast = std::is_same_v<Real, double>;
    oracle::SeriesTruncation trunc{cfg.series_m, cfg.quad_order, 0.05, 4};

    for (const auto& sp : states) {
        QuantumState st = hydrogenic::parse_state_label(sp.label, sp.twice_mu);
        for (int z : zs) {
            if (!state_in_range(st, z, ctx)) continue;
            const Real Z{z};
            const Real aZ = ctx.alpha * Z;
            std::string tag = sp.label + "/" + mu_string(sp.twice_mu) + " Z=" + std::to_string(z);

            // closed radial moments vs quadrature
            auto rp = hydrogenic::relativistic_params(st, aZ);
            auto [P, Q] = hydrogenic::bound_radial(st, aZ);
            const Real g = rp.gamma_kappa, N = rp.N_nk;
            auto q1 = oracle::radial_integral_quadrature(P, P, 2, 2 * st.n + 8);
            auto q2 = oracle::radial_integral_quadrature(Q, Q, 2, 2 * st.n + 8);
            Real jac = N / (2 * Z);
            Real mom2 = jac * jac * jac * (q1.value - q2.value) * Z * Z * 2 /
                        ((st.n + g) * (N * (5 * st.n * st.n + 10 * st.n * g + 2 * g * g + 1) -
                                       3 * st.kappa * (st.n + g)));
            report_check<Real>(os, rep, "radial-moment-r2 " + tag, to_double(abs(mom2 - 1)),
                               fast ? 1e-8 : 1e-9);
            auto q3 = oracle::radial_integral_quadrature(P, Q, 1, 2 * st.n + 8);
            Real mom1 = jac * jac * q3.value * 4 * ctx.alpha_inv * N / (2 * st.kappa * (st.n + g) - N);
            report_check<Real>(os, rep, "radial-moment-rpq " + tag, to_double(abs(mom1 - 1)),
                               fast ? 1e-8 : 1e-9);

            for (int sigma : {+1, -1}) {
                if (-st.kappa + sigma == 0) continue;
                auto closed = magnet::r_sturmian_closed(st, Z, ctx.alpha, sigma, ctx.policy);
                try {
                    auto series = oracle::r_series_truncated(st, Z, ctx.alpha, sigma, trunc);
                    double dev = to_double(abs(series.value - closed.value) / abs(closed.value));
                    report_check<Real>(os, rep,
                                       "series-vs-closed " + tag + " channel=" +
                                           (sigma > 0 ? std::string("+1") : std::string("-1")),
                                       dev, fast ? 1e-5 : 1e-8);
                    if (to_double(series.tail_estimate) > 1e-8 * std::abs(to_double(closed.value))) {
                        ++rep.warnings;
                        os << "WARN series tail estimate " << to_double(series.tail_estimate)
                           << " above target for " << tag << "\n";
                    }
                } catch (const convergence_error& e) {
                    ++rep.failures;
                    os << "FAIL series-vs-closed " << tag << " error: " << e.what() << "\n";
                }
            }

            auto canc = oracle::chi_p_kappa_cancellation(st, Z, ctx.alpha, trunc);
            report_check<Real>(os, rep, "same-kappa-cancellation " + tag,
                               to_double(abs(canc.residual()) / canc.largest()), fast ? 1e-6 : 1e-8);

            auto id = oracle::zcoef_weighted_sum_identity(st, aZ);
            report_check<Real>(os, rep, "zsum-identity " + tag,
                               to_double(abs(id.first - id.second) / abs(id.second)),
                               fast ? 1e-10 : 1e-12);
        }
    }

    // ground-state specializations against the general path
    double worst = 0;
    for (int z = 1; z <= 137; ++z) {
        QuantumState gs{0, -1, 1};
        if (!state_in_range(gs, z, ctx)) continue;
        auto b = magnet::chi_total(gs, Real(z), ctx.alpha, ctx.policy);
        auto [cd, cp] = magnet::chi_ground_closed_forms(Real(z), ctx.alpha, ctx.policy);
        worst = std::max(worst, to_double(abs(b.chi_d - cd) / abs(cd)));
        worst = std::max(worst, to_double(abs(b.chi_p - cp) / abs(cp)));
    }
    report_check<Real>(os, rep, "ground-closed-vs-general Z=1..137", worst, fast ? 1e-8 : 1e-12);

    // documented Z=120 reference point: printed value matches the 2018 alpha
    {
        Real a2018 = 1 / real_from_string<Real>(kAlphaInverse2018);
        Real a1986 = 1 / real_from_string<Real>(kAlphaInverse1986);
        auto b18 = magnet::chi_total(QuantumState{0, -1, 1}, Real(120), a2018, ctx.policy);
        auto b86 = magnet::chi_total(QuantumState{0, -1, 1}, Real(120), a1986, ctx.policy);
        Real ref = real_from_string<Real>("-1.136288773734");
        double dev = to_double(fmt::units_in_12th_digit(Real(b18.chi_p_dprime / b18.chi_total), ref));
        report_check<Real>(os, rep, "ground-Z120 chi_p_dprime/chi (alpha_inv=137.035999084)", dev,
                           fast ? 1e4 : 1.0);
        os << "NOTE ground Z=120 with alpha_inv=137.0359895: chi_p_dprime/chi = "
           << fmt::format_sci(Real(b86.chi_p_dprime / b86.chi_total))
           << " (reference value corresponds to alpha_inv=137.035999084; an earlier literature"
              " value -1.28 disagrees and is not adjudicated here)\n";
    }
}

template <class Real>
int run(const Config& cfg) {
    Context<Real> ctx;
    ctx.alpha_inv = real_from_string<Real>(cfg.alpha_inverse);
    ctx.alpha = 1 / ctx.alpha_inv;
    ctx.policy = std::is_same_v<Real, double> ? PrecisionPolicy::fast64() : PrecisionPolicy::extended();
    ctx.sep = cfg.format == "csv" ? "," : "\t";
    ctx.jsonl = cfg.format == "jsonl";

    std::ofstream file;
    if (cfg.out != "stdout" && cfg.out != "-") {
        file.open(cfg.out);
        if (!file) {
            std::cerr << "error: cannot open " << cfg.out << "\n";
            return 2;
        }
    }
    std::ostream& os = file.is_open() ? file : std::cout;

    auto states = resolve_states(cfg);
    std::vector<int> zs = cfg.zspecs.empty()
                              ? (cfg.mode == "crossover" ? parse_z_list({"1..137"})
                                 : cfg.mode == "verify"  ? std::vector<int>{1, 20, 80, 137}
                                                         : kTableZ)
                              : parse_z_list(cfg.zspecs);

    if (cfg.mode == "table") {
        emit_table(cfg, states, zs, ctx, os);
    } else if (cfg.mode == "breakdown") {
        emit_breakdown(cfg, states, zs, ctx, os);
    } else if (cfg.mode == "crossover") {
        emit_crossover(states, zs, ctx, os);
    } else if (cfg.mode == "verify") {
        VerifyReport rep;
        run_verify(cfg, states, zs, ctx, os, rep);
        os << (rep.failures == 0 ? "VERIFY PASS" : "VERIFY FAIL") << " (failures=" << rep.failures
           << ", warnings=" << rep.warnings << ")\n";
        return rep.failures == 0 ? 0 : 1;
    }
    return ctx.all_converged ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    Config cfg;
    CLI::App app{"Magnetizability decomposition of Dirac one-electron atoms"};
    app.add_option("--state", cfg.states, "spectroscopic state label(s), e.g. 2p3/2");
    app.add_option("--mu", cfg.mus, "magnetic quantum number(s) as p/2, paired with --state");
    app.add_option("--z", cfg.zspecs, "nuclear charge(s): integer or range a..b");
    app.add_option("--alpha-inverse", cfg.alpha_inverse, "inverse fine-structure constant");
    app.add_option("--precision", cfg.precision, "fast64 | extended[:N]  (N >= 30 decimal digits)");
    app.add_option("--mode", cfg.mode, "breakdown | table | crossover | verify")
        ->check(CLI::IsMember({"breakdown", "table", "crossover", "verify"}));
    app.add_option("--format", cfg.format, "tsv | csv | jsonl")
        ->check(CLI::IsMember({"tsv", "csv", "jsonl"}));
    app.add_option("--out", cfg.out, "output path or stdout");
    app.add_option("--series-m", cfg.series_m, "bilateral series truncation |n'| <= M (verify)");
    app.add_option("--quad-order", cfg.quad_order, "quadrature order for verification integrals");
    CLI11_PARSE(app, argc, argv);

    try {
        if (cfg.precision == "fast64") return run<double>(cfg);
        long digits = 50;
        if (cfg.precision.rfind("extended", 0) == 0) {
            auto colon = cfg.precision.find(':');
            if (colon != std::string::npos) digits = std::stol(cfg.precision.substr(colon + 1));
        } else {
            std::cerr << "error: unknown precision mode " << cfg.precision << "\n";
            return 2;
        }
        if (digits < 30) {
            std::cerr << "error: extended precision requires at least 30 digits\n";
            return 2;
        }
        mpreal::default_precision(digits);
        return run<mpreal>(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
