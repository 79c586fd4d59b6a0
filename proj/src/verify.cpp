#include "hyperasym/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

#include "hyperasym/borel_engine.hpp"
#include "hyperasym/contour.hpp"
#include "hyperasym/driver.hpp"
#include "hyperasym/heat_engine.hpp"
#include "hyperasym/oracle.hpp"
#include "hyperasym/special_fn.hpp"

namespace hyperasym {

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

struct Context {
    const ProblemConfig& config;
    AnalyticDatum datum;
    std::unique_ptr<HyperEngine> engine;
    double t_max;
    double t_min;
    cplx z0;
};

using Check = std::function<CheckResult(Context&)>;

CheckResult kernel_closed_form(Context& c) {
    const int q = c.config.q();
    double worst = 0.0;
    if (q == 2) {
        for (int i = 0; i <= 600; ++i) {
            const double tau = 0.01 * i;
            const double exact = std::exp(-0.25 * tau * tau) / std::sqrt(std::numbers::pi);
            worst = std::max(worst, std::abs(ecalle_kernel_series(2.0, tau) - exact));
        }
        return {"kernel closed form", worst <= 1e-10, fmt("max |C_2 - exp(-tau^2/4)/sqrt(pi)| = %.3g", worst)};
    }
    for (int i = 0; i <= 100; ++i) {
        const double tau = 0.5 + 0.025 * i;
        const double a = ecalle_kernel_series(q, tau).real(), b = ecalle_kernel_steepest(q, tau);
        worst = std::max(worst, std::abs(a - b));
    }
    return {"kernel closed form", worst <= 1e-10, fmt("max |series - steepest descent| = %.3g", worst)};
}

CheckResult kernel_bound(Context& c) {
    const KernelBoundFit fit = fit_kernel_bound(c.config.q(), 6.0, 0.01, c.config.c_q_override);
    return {"kernel bound", fit.within(2.0),
            fmt("C = %.6g with exponent constant c = %.6g (cap 2)", fit.C, fit.c)};
}

CheckResult moments(Context& c) {
    double worst = 0.0;
    for (double t : {c.t_max, c.t_min})
        for (int l = 0; l <= 10; ++l) {
            const double exact = gamma_moment(l, c.config.q(), t, 0.0).real();
            worst = std::max(worst, std::abs(kernel_moment_quadrature(l, c.config.q(), t) - exact) / exact);
        }
    return {"moment identities", worst <= 1e-8, fmt("max relative error %.3g for l <= 10", worst)};
}

CheckResult round_trip(Context& c) {
    const int q = c.config.q();
    double worst = 0.0;
    for (int l = 0; l <= 6; ++l) {
        const double coef = factorial(l) / std::tgamma(1.0 + q * l);
        const cplx got =
            laplace_sum([&](cplx s) { return coef * std::pow(s, l); }, q, c.config.theta, c.t_max);
        const cplx want = std::pow(std::polar(c.t_max, c.config.theta), l);
        worst = std::max(worst, std::abs(got - want) / std::abs(want));
    }
    return {"Borel-Laplace round trip", worst <= 1e-8, fmt("max relative error %.3g for t^l, l <= 6", worst)};
}

CheckResult datum_taylor(Context& c) {
    double rho = 1.0;
    for (const PoleTerm& p : c.datum.poles()) rho = std::min(rho, 0.5 * std::abs(p.location - c.z0));
    const ContourSpec circle = two_disc_boundary(c.z0, rho, c.z0, rho);
    const std::vector<cplx> a = c.datum.taylor_coeffs(c.z0, 12);
    double worst = 0.0;
    for (int j = 0; j < 12; ++j) {
        const cplx v = cauchy_integral(circle, [&](cplx w) { return c.datum.eval(w) / std::pow(w - c.z0, j + 1); });
        worst = std::max(worst, std::abs(v - a[j]) * std::pow(rho, j));
    }
    return {"datum Taylor coefficients", worst <= 1e-11, fmt("max scaled deviation from Cauchy integrals %.3g", worst)};
}

CheckResult f0_series(Context& c) {
    const std::vector<cplx> b = c.engine->b0(c.z0, 40);
    const double r = 0.1 * std::min(c.engine->r_eff(), 1.0);
    double worst = 0.0;
    for (int i = 0; i < 8; ++i) {
        const cplx s = std::polar(r, 2.0 * std::numbers::pi * i / 8.0);
        cplx acc = 0.0;
        for (int j = 39; j >= 0; --j) acc = acc * s + b[j];
        const cplx f = c.engine->f0(s, c.z0);
        worst = std::max(worst, std::abs(acc - f) / std::max(1.0, std::abs(f)));
    }
    return {"f_0 Taylor series", worst <= 1e-10, fmt("max deviation %.3g on |s| = 0.1 r_eff", worst)};
}

CheckResult schedules(Context& c) {
    for (double t : c.config.t_grid) {
        const TruncationSchedule s = c.engine->schedule(t, c.config.levels);
        if (s.Ns[0] < 1) return {"truncation schedule", false, fmt("N_0 < 1 at |t| = %.6g", t)};
        for (std::size_t m = 1; m < s.sigmas.size(); ++m)
            if (!(s.sigmas[m] > s.sigmas[m - 1])) return {"truncation schedule", false, fmt("sigma not increasing at |t| = %.6g", t)};
        for (std::size_t m = 1; m < s.etas.size(); ++m)
            if (!(s.etas[m] > s.etas[m - 1])) return {"truncation schedule", false, fmt("eta not increasing at |t| = %.6g", t)};
    }
    return {"truncation schedule", true, "N_0 >= 1, sigma_m and eta_m strictly increasing on the grid"};
}

CheckResult clearance(Context& c) {
    if (c.datum.is_entire()) return {"singularity clearance", true, "entire datum, nothing to clear"};
    const TruncationSchedule s = c.engine->schedule(c.t_max, c.config.levels);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = s.level();
    const double s_max = n > 0 ? 1.5 * s.sigmas[n] : 2.0 * s.sigmas[0];
    int passed = 0;
    const int total = 200;
    for (int i = 0; i < total; ++i) {
        const int level = static_cast<int>(u(rng) * (n + 1));
        const auto chain = sample_chain(s_max * u(rng), std::span(s.sigmas).first(level),
                                        std::span(s.big_radii).first(level + 1), s.eps, rng);
        passed += clearance_check(chain, s.eps, c.engine->geometry());
    }
    return {"singularity clearance", passed == total, std::to_string(passed) + "/" + std::to_string(total) +
                                                          " random chains keep distance >= eps"};
}

CheckResult dual_path(Context& c) {
    const TruncationSchedule s = c.engine->schedule(c.t_max, std::max(1, std::min(c.config.levels, 1)));
    const auto chain = c.engine->chain(s, c.z0);
    const double sigma = s.sigmas[0];
    double worst = 0.0;
    int used = 0;
    for (int i = 0; used < 20 && i < 200; ++i) {
        const cplx x = std::polar(0.85 * s.big_radii[0] * (0.3 + 0.035 * (i % 20)), 0.7 * i);
        if (std::abs(x - sigma) < 0.05 * sigma) continue;
        const cplx a = chain->f(1, x, EvalMode::divided_difference);
        const cplx b = chain->f(1, x, EvalMode::contour);
        worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-300));
        ++used;
    }
    return {"dual-path f_1", worst <= 1e-8, fmt("max relative deviation %.3g at 20 points", worst)};
}

CheckResult oracle_polynomial(Context& c) {
    const cplx z(0.1, -0.05);
    const cplx t = std::polar(c.t_max, c.config.theta);
    cplx got, want;
    if (c.config.heat) {
        got = heat_direct(AnalyticDatum({}, {0.0, 0.0, 1.0}), c.config.theta, c.t_max, z);
        want = z * z + 2.0 * t;
    } else {
        const SimpleEquation& eq = c.config.equation;
        // phi = z^{2q}: finite series with phi^{(q)} and phi^{(2q)}
        std::vector<cplx> poly(2 * eq.q + 1, 0.0);
        poly.back() = 1.0;
        got = simple_direct(eq, AnalyticDatum({}, poly), c.config.theta, c.t_max, z);
        const std::vector<cplx> u = formal_solution(eq, AnalyticDatum({}, poly), z, 3);
        want = u[0] + u[1] * t + u[2] * t * t / 2.0;
    }
    const double err = std::abs(got - want) / std::abs(want);
    return {"oracle on polynomial data", err <= 1e-10, fmt("relative error %.3g", err)};
}

struct SweepChecks {
    std::vector<SweepRow> rows;
    std::string csv;
};

CheckResult remainder_bound(const SweepChecks& sw) {
    // errors at the oracle's rounding level carry no information about the bound
    double worst = 0.0;
    int checked = 0;
    for (const SweepRow& r : sw.rows) {
        if (!(r.bound > 0.0) || r.abs_err <= 1e-13 * std::abs(r.exact)) continue;
        worst = std::max(worst, r.abs_err / r.bound);
        ++checked;
    }
    return {"remainder bound", worst <= 2.0,
            fmt("max |error| / calibrated bound = %.3g (limit 2) over %.0f rows above rounding", worst, checked)};
}

CheckResult improvement(const SweepChecks& sw) {
    for (std::size_t i = 1; i < sw.rows.size(); ++i) {
        const SweepRow& a = sw.rows[i - 1];
        const SweepRow& b = sw.rows[i];
        if (b.level != a.level + 1) continue;
        if (b.abs_err > a.abs_err && b.abs_err > 1e-13 * std::abs(b.exact))
            return {"hyperasymptotic improvement", false,
                    fmt("level error grows at |t| = %.6g (%.3g)", a.t_abs, b.abs_err)};
    }
    return {"hyperasymptotic improvement", true, "error nonincreasing in the level for every (t, z)"};
}

CheckResult telescoping(Context& c) {
    double worst = 0.0;
    for (double t : c.config.t_grid) {
        const cplx u = exact_solution(c.config, t, c.z0);
        for (int n = 0; n <= std::min(1, c.config.levels); ++n) {
            const HyperResult r = c.engine->hyper_expand(t, c.z0, n);
            worst = std::max(worst, std::abs(r.expansion.value + r.remainder.value - u) / std::abs(u));
        }
    }
    return {"telescoping", worst <= 1e-6, fmt("max |sum + remainder - u| / |u| = %.3g", worst)};
}

CheckResult engine_consistency(Context& c) {
    const ProblemConfig& cfg = c.config;
    const bool q2 = cfg.heat || (cfg.equation.q == 2 && cfg.equation.beta == 1 && cfg.equation.lambda == 1.0);
    if (!q2) return {"heat / generalized consistency", true, "not a heat-type problem, skipped"};
    const SimpleEquation eq = SimpleEquation::heat();
    const HeatEngine heat(c.datum, Direction::heat(cfg.theta, cfg.delta, c.datum), cfg.engine_options());
    const BorelEngine gen(eq, c.datum, BorelEngine::direction(eq, c.datum, cfg.theta, cfg.delta), cfg.engine_options());
    double worst = 0.0;
    for (double t : cfg.t_grid)
        for (int n = 0; n <= std::min(cfg.levels, 1); ++n) {
            const cplx a = heat.hyper_expand(t, c.z0, n).expansion.value;
            const cplx b = gen.hyper_expand(t, c.z0, n).expansion.value;
            worst = std::max(worst, std::abs(a - b) / std::abs(a));
        }
    int mismatches = 0;
    for (int i = 0; i < 20; ++i) {
        const double t = c.t_min + (c.t_max - c.t_min) * i / 19.0;
        mismatches += heat.level0_schedule(t).Ns != gen.level0_schedule(t).Ns;
    }
    return {"heat / generalized consistency", worst <= 1e-6 && mismatches == 0,
            fmt("max relative deviation %.3g, N_0 mismatches %.0f of 20", worst, mismatches)};
}

}  // namespace

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::summary() const {
    std::string s;
    int ok = 0;
    for (const CheckResult& c : checks) {
        s += (c.passed ? "PASS " : "FAIL ") + c.name + ": " + c.detail + "\n";
        ok += c.passed;
    }
    s += std::to_string(ok) + "/" + std::to_string(checks.size()) + " checks passed\n";
    return s;
}

VerifyReport run_verify(const ProblemConfig& config) {
    Context ctx{config, config.datum(), config.make_engine(),
                *std::max_element(config.t_grid.begin(), config.t_grid.end()),
                *std::min_element(config.t_grid.begin(), config.t_grid.end()), config.z_points.front()};
    calibrate_engine(*ctx.engine, config);

    VerifyReport report;
    auto guarded = [&](const std::string& name, const std::function<CheckResult()>& f) {
        try {
            report.checks.push_back(f());
        } catch (const std::exception& e) {
            report.checks.push_back({name, false, std::string("threw: ") + e.what()});
        }
    };
    const std::vector<std::pair<std::string, Check>> simple = {
        {"kernel closed form", kernel_closed_form},
        {"kernel bound", kernel_bound},
        {"moment identities", moments},
        {"Borel-Laplace round trip", round_trip},
        {"datum Taylor coefficients", datum_taylor},
        {"f_0 Taylor series", f0_series},
        {"truncation schedule", schedules},
        {"singularity clearance", clearance},
        {"dual-path f_1", dual_path},
        {"oracle on polynomial data", oracle_polynomial},
        {"telescoping", telescoping},
        {"heat / generalized consistency", engine_consistency},
    };
    for (const auto& [name, check] : simple) guarded(name, [&] { return check(ctx); });

    SweepChecks sw;
    bool have_sweep = false;
    guarded("sweep", [&] {
        sw.rows = sweep(config);
        sw.csv = format_csv(sw.rows);
        have_sweep = true;
        return CheckResult{"sweep", true, std::to_string(sw.rows.size()) + " rows"};
    });
    if (have_sweep) {
        guarded("remainder bound", [&] { return remainder_bound(sw); });
        guarded("hyperasymptotic improvement", [&] { return improvement(sw); });
        guarded("determinism", [&] {
            const bool same = format_csv(sweep(config)) == sw.csv;
            return CheckResult{"determinism", same, same ? "repeated sweep is byte-identical" : "sweep output differs"};
        });
    }
    return report;
}

}  // namespace hyperasym
