#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hyperasym/borel_engine.hpp"
#include "hyperasym/chain.hpp"
#include "hyperasym/datum.hpp"
#include "hyperasym/errors.hpp"

namespace hyperasym {

// Validation failure in a problem file; what() carries "source:line: message".
class ConfigError : public InputError {
public:
    using InputError::InputError;
};

struct Tolerances {
    double quadrature = 1e-10;   // remainder quadrature, relative
    double series = 1e-12;       // oracle quadrature, relative
    double scan_cap = 4.0;       // truncation scan runs up to scan_cap * N_0
};

struct ProblemConfig {
    std::vector<PoleTerm> poles;
    std::vector<cplx> polynomial;
    std::optional<double> eps_tilde;
    bool heat = true;
    SimpleEquation equation;     // used when heat is false
    double theta = 0.0;
    double delta = 0.1;
    std::vector<double> t_grid;
    std::vector<cplx> z_points{cplx(0.0)};
    int levels = 1;
    std::optional<double> eps;
    Tolerances tolerances;
    std::optional<double> c_q_override;
    std::string output_path;
    std::string output_format = "csv";

    AnalyticDatum datum() const;
    // Throws StokesDirectionError for an inadmissible theta.
    Direction direction() const;
    EngineOptions engine_options() const;
    std::unique_ptr<HyperEngine> make_engine() const;
    int q() const { return heat ? 2 : equation.q; }
};

// YAML problem description. Throws ConfigError with the offending line.
ProblemConfig parse_config(const std::string& text, const std::string& source = "<config>");
ProblemConfig load_config(const std::string& path);
// Serializes back to YAML; parse_config(dump_config(c)) reproduces c.
std::string dump_config(const ProblemConfig& config);

}  // namespace hyperasym
