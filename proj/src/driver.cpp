#include "hyperasym/driver.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <thread>

#include <json.hpp>

#include "hyperasym/oracle.hpp"

namespace hyperasym {

namespace {

using nlohmann::json;

json to_json(cplx c) { return json::array({c.real(), c.imag()}); }

json to_json(const std::vector<cplx>& v) {
    json a = json::array();
    for (cplx c : v) a.push_back(to_json(c));
    return a;
}

json to_json(const TruncationSchedule& s) {
    return {{"t_abs", s.t_abs},         {"decay", s.decay}, {"r_eff", s.r_eff},   {"eps", s.eps},
            {"B_tilde", s.B_tilde},     {"N", s.Ns},        {"sigma", s.sigmas}, {"big_radius", s.big_radii},
            {"eta", s.etas}};
}

json to_json(const RemainderReport& r) {
    return {{"quadrature", to_json(r.value)},
            {"quadrature_error", r.quadrature_error},
            {"bound", r.bound},
            {"eta", r.eta},
            {"shape", r.shape},
            {"A", r.A},
            {"calibrated", r.calibrated}};
}

std::string g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double largest_t(const ProblemConfig& c) { return *std::max_element(c.t_grid.begin(), c.t_grid.end()); }

}  // namespace

cplx exact_solution(const ProblemConfig& config, double t_abs, cplx z) {
    OracleOptions o;
    o.rel_tol = config.tolerances.series;
    if (config.heat) return heat_direct(config.datum(), config.theta, t_abs, z, o);
    return simple_direct(config.equation, config.datum(), config.theta, t_abs, z, o);
}

void calibrate_engine(HyperEngine& engine, const ProblemConfig& config) {
    for (int n = 0; n <= config.levels; ++n) engine.calibrate(n, largest_t(config), config.z_points.front());
}

std::vector<SweepRow> sweep(const ProblemConfig& config, unsigned threads) {
    auto engine = config.make_engine();
    calibrate_engine(*engine, config);

    const std::size_t nt = config.t_grid.size();
    std::vector<std::vector<SweepRow>> rows(nt);
    std::vector<std::exception_ptr> errors(nt);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < nt; i = next++) {
            try {
                const double t = config.t_grid[i];
                for (cplx z : config.z_points) {
                    const cplx exact = exact_solution(config, t, z);
                    for (int n = 0; n <= config.levels; ++n) {
                        const HyperResult r = engine->hyper_expand(t, z, n);
                        SweepRow row;
                        row.t_abs = t;
                        row.theta = config.theta;
                        row.z = z;
                        row.level = n;
                        row.approx = r.expansion.value;
                        row.exact = exact;
                        row.abs_err = std::abs(row.approx - exact);
                        row.bound = r.remainder.bound;
                        rows[i].push_back(row);
                    }
                }
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, nt));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < threads; ++k) pool.emplace_back(work);
    work();
    for (std::thread& th : pool) th.join();

    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<SweepRow> out;
    for (auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
}

std::string format_csv(const std::vector<SweepRow>& rows) {
    std::string s = std::string(kSweepHeader) + "\n";
    for (const SweepRow& r : rows) {
        s += g17(r.t_abs) + ',' + g17(r.theta) + ',' + g17(r.z.real()) + ',' + g17(r.z.imag()) + ',' +
             std::to_string(r.level) + ',' + g17(r.approx.real()) + ',' + g17(r.approx.imag()) + ',' +
             g17(r.exact.real()) + ',' + g17(r.exact.imag()) + ',' + g17(r.abs_err) + ',' + g17(r.bound) + '\n';
    }
    return s;
}

std::string format_json(const std::vector<SweepRow>& rows) {
    json a = json::array();
    for (const SweepRow& r : rows)
        a.push_back({{"t_abs", r.t_abs},
                     {"theta", r.theta},
                     {"z", to_json(r.z)},
                     {"level", r.level},
                     {"approx", to_json(r.approx)},
                     {"exact", to_json(r.exact)},
                     {"abs_err", r.abs_err},
                     {"bound", r.bound}});
    return a.dump(2) + "\n";
}

std::string run_sweep(const ProblemConfig& config, unsigned threads) {
    const std::vector<SweepRow> rows = sweep(config, threads);
    return config.output_format == "json" ? format_json(rows) : format_csv(rows);
}

std::string run_expand(const ProblemConfig& config) {
    auto engine = config.make_engine();
    calibrate_engine(*engine, config);
    json runs = json::array();
    for (double t : config.t_grid) {
        json run = {{"t_abs", t}, {"theta", config.theta}};
        run["schedule"] = to_json(engine->schedule(t, config.levels));
        json points = json::array();
        for (cplx z : config.z_points) {
            json levels = json::array();
            for (int n = 0; n <= config.levels; ++n) {
                const HyperResult r = engine->hyper_expand(t, z, n);
                json b = json::array();
                for (const auto& bm : r.expansion.b) b.push_back(to_json(bm));
                levels.push_back({{"level", n},
                                  {"N", r.schedule.Ns},
                                  {"b", b},
                                  {"psi", to_json(r.expansion.psi)},
                                  {"level_values", to_json(r.expansion.level_values)},
                                  {"value", to_json(r.expansion.value)},
                                  {"remainder", to_json(r.remainder)}});
            }
            points.push_back({{"z", to_json(z)}, {"levels", levels}});
        }
        run["points"] = points;
        runs.push_back(run);
    }
    json out = {{"equation", config.heat ? "heat" : "simple"},
                {"eps", engine->eps()},
                {"B_tilde", engine->B_tilde()},
                {"runs", runs}};
    if (!config.heat) {
        out["q"] = config.equation.q;
        out["beta"] = config.equation.beta;
        out["lambda"] = to_json(config.equation.lambda);
    }
    return out.dump(2) + "\n";
}

}  // namespace hyperasym
