#pragma once

#include <complex>
#include <string>
#include <vector>

#include "hyperasym/chain.hpp"
#include "hyperasym/config.hpp"

namespace hyperasym {

struct SweepRow {
    double t_abs = 0.0;
    double theta = 0.0;
    cplx z;
    int level = 0;
    cplx approx;
    cplx exact;
    double abs_err = 0.0;
    double bound = 0.0;
};

inline constexpr const char* kSweepHeader =
    "t_abs,theta,z_re,z_im,level,approx_re,approx_im,exact_re,exact_im,abs_err,bound";

// Oracle value of u at |t| on the configured ray.
cplx exact_solution(const ProblemConfig& config, double t_abs, cplx z);

// Calibrates A_n for n = 0..levels at the largest |t| of the grid and the first z point.
void calibrate_engine(HyperEngine& engine, const ProblemConfig& config);

// One row per (t, z, level) in grid order; t values are processed in parallel.
std::vector<SweepRow> sweep(const ProblemConfig& config, unsigned threads = 0);
std::string format_csv(const std::vector<SweepRow>& rows);
std::string format_json(const std::vector<SweepRow>& rows);

// Serialized sweep in the configured output format.
std::string run_sweep(const ProblemConfig& config, unsigned threads = 0);
// JSON dump of schedules, b_{m,j}, psi_l and remainder reports for every (t, z, level).
std::string run_expand(const ProblemConfig& config);

}  // namespace hyperasym
