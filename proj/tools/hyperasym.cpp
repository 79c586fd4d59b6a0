#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hyperasym/config.hpp"
#include "hyperasym/driver.hpp"
#include "hyperasym/errors.hpp"
#include "hyperasym/verify.hpp"

using namespace hyperasym;

namespace {

struct Flags {
    std::string config;
    std::optional<int> level;
    std::optional<double> theta;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<double> tol;
};

void add_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "problem file (YAML)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--level", f.level, "highest hyperasymptotic level")->check(CLI::NonNegativeNumber);
    cmd->add_option("--theta", f.theta, "direction arg t");
    cmd->add_option("--out", f.out, "output file, '-' for stdout");
    cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--tol", f.tol, "relative tolerance of the remainder and oracle quadratures")
        ->check(CLI::PositiveNumber);
}

ProblemConfig load(const Flags& f) {
    ProblemConfig c = load_config(f.config);
    if (f.level) c.levels = *f.level;
    if (f.theta) c.theta = *f.theta;
    if (f.format) c.output_format = *f.format;
    if (f.out) c.output_path = *f.out;
    if (f.tol) c.tolerances.quadrature = c.tolerances.series = *f.tol;
    if (f.theta) c.make_engine();   // re-validates the direction
    return c;
}

void write(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperasymptotic expansions of heat-type equations"};
    app.require_subcommand(1);
    Flags expand_flags, sweep_flags, verify_flags;
    CLI::App* expand = app.add_subcommand("expand", "dump schedules, coefficients and remainder reports as JSON");
    CLI::App* sweep = app.add_subcommand("sweep", "compare expansions with the oracle over the t grid");
    CLI::App* verify = app.add_subcommand("verify", "run the property suite on the problem");
    add_flags(expand, expand_flags);
    add_flags(sweep, sweep_flags);
    add_flags(verify, verify_flags);
    CLI11_PARSE(app, argc, argv);

    try {
        if (expand->parsed()) {
            const ProblemConfig c = load(expand_flags);
            if (expand_flags.format && *expand_flags.format != "json")
                throw InputError("expand writes JSON only");
            write(expand_flags.out.value_or("-"), run_expand(c));
        } else if (sweep->parsed()) {
            const ProblemConfig c = load(sweep_flags);
            write(sweep_flags.out ? *sweep_flags.out : c.output_path, run_sweep(c));
        } else if (verify->parsed()) {
            const ProblemConfig c = load(verify_flags);
            const VerifyReport r = run_verify(c);
            write(verify_flags.out.value_or("-"), r.summary());
            return r.passed() ? 0 : 2;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
