#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "hyperasym/contour.hpp"
#include "hyperasym/datum.hpp"
#include "hyperasym/quadrature.hpp"

namespace hyperasym {

using cplx = std::complex<double>;

// Weight K(tau) of the Laplace-type integral u = int_0^inf K(tau) f_0(|t| tau^q) dtau.
// The Gaussian variant uses exp(-tau^2/4)/sqrt(pi) and the heat schedule formulas; the
// Ecalle variant uses C_q and the generalized ones.
class LaplaceKernel {
public:
    static LaplaceKernel gaussian();
    static LaplaceKernel ecalle(int q);

    bool is_gaussian() const { return gaussian_; }
    int q() const { return q_; }
    double k() const { return k_; }
    double c_q() const { return c_q_; }

    double weight(double tau) const;
    // log of the large-tau envelope, -tau^{k+1}/c_q
    double log_envelope(double tau) const { return -std::pow(tau, k_ + 1.0) / c_q_; }
    // 1/(4|t|) - B (Gaussian) or 1/(c_q |t|^k) - B
    double decay(double t_abs, double B) const;
    int optimal_n0(double r_eff, double L) const;
    double first_sigma(int N0, double L) const;
    // exponent of s in the level-0 integrand: N0 - 1/2 or N0 - 1 + 1/q
    double lead(int N0) const;
    // Gamma(1 + q l) / l!
    double moment(int l) const;
    // the prefactor of exp(-eta^k L) in the remainder bound
    double bound_prefactor(double t_abs, double B, double L) const;

private:
    bool gaussian_ = true;
    int q_ = 2;
    double k_ = 1.0;
    double c_q_ = 4.0;
};

struct TruncationSchedule {
    double r_eff = 0.0;
    double eps = 0.0;
    double B_tilde = 0.0;
    double t_abs = 0.0;
    double decay = 0.0;               // L
    std::vector<double> sigmas;       // sigma_1 .. sigma_{n+1}
    std::vector<int> Ns;              // N_0 .. N_n
    std::vector<double> big_radii;    // radius of Omega_m for m = 0..n
    std::vector<double> etas;         // eta_0 .. eta_n

    int level() const { return static_cast<int>(Ns.size()) - 1; }
    // sigma_m with sigma_0 = 0
    double sigma(int m) const { return m == 0 ? 0.0 : sigmas.at(m - 1); }
    int total_order() const;
};

struct ScanPoint {
    int N = 0;
    double root = 0.0;
    double log_g = 0.0;
};

struct NextTruncation {
    int N = 0;
    double sigma = 0.0;
    double log_g = 0.0;
    std::vector<ScanPoint> scan;
};

// Right side minus left side of the critical-point condition for the level-n integrand,
// with N_n = N: lead/s + sum_m N_m/(s - sigma_m) - k s^{k-1} L.
double critical_residual(const TruncationSchedule& sched, const LaplaceKernel& kernel, int N, double s);
// log of the level-n integrand estimate at s with N_n = N, including the Cauchy
// estimates on the radii of Omega_0..Omega_n.
double log_integrand_estimate(const TruncationSchedule& sched, const LaplaceKernel& kernel, int N, double s);

// Schedule through level 0. Throws InputError when N_0 < 1 or the decay is nonpositive.
TruncationSchedule level0_schedule(double t_abs, double r_eff, double eps, double B_tilde,
                                   const LaplaceKernel& kernel);

// Scan N_n in 1..scan_cap; returns the argmin of the integrand estimate. Requires
// sched.big_radii to contain the radius of Omega_n. Throws ConvergenceError when the
// minimum sits on the scan cap.
NextTruncation next_truncation(const TruncationSchedule& sched, const LaplaceKernel& kernel, int scan_cap);

// Appends level n+1 to a schedule through level n.
void extend_schedule(TruncationSchedule& sched, const LaplaceKernel& kernel, const SingularGeometry& geom,
                     int scan_cap);

enum class EvalMode { automatic, divided_difference, contour };

struct ChainOptions {
    // b_{m,j} are extracted on a circle of this fraction of the Omega_m radius
    double taylor_radius_fraction = 0.9;
    // the cached Cauchy sum serves |s - sigma_{m-1}| below this fraction of the radius
    double cache_fraction = 0.9;
    int cache_min_nodes = 256;
    int cache_max_nodes = 1 << 15;
    double cache_tol = 1e-14;
    ContourOptions contour{};
};

// The remainders f_0, ..., f_{n+1} of the iterated Taylor re-expansion
//   f_m(s) = sum_{j<N_m} b_{m,j} (s - sigma_m)^j + (s - sigma_m)^{N_m} f_{m+1}(s).
// All caches are built in the constructor; the object is immutable afterwards.
class RemainderChain {
public:
    RemainderChain(std::function<cplx(cplx)> f0, std::vector<cplx> b0, const TruncationSchedule& sched,
                   ChainOptions opts = {});

    int level() const { return level_; }
    cplx f(int m, cplx s, EvalMode mode = EvalMode::automatic) const;
    const std::vector<cplx>& b(int m) const { return b_.at(m); }
    cplx taylor(int m, cplx s) const;
    // s^{N_0} (s - sigma_1)^{N_1} ... (s - sigma_n)^{N_n} f_{n+1}(s)
    cplx remainder_integrand(cplx s) const;
    int cache_nodes(int m) const { return static_cast<int>(caches_.at(m - 1).nodes.size()); }

private:
    struct Cache {
        std::vector<cplx> nodes;
        std::vector<cplx> weights;
        double scale = 0.0;   // typical sum of |terms|, the roundoff scale of f_m
    };

    cplx f_auto(int m, cplx s) const;
    cplx f_divided(int m, cplx s) const;
    cplx f_contour(int m, cplx s) const;
    void build_cache(int m);
    void build_taylor(int m);

    std::function<cplx(cplx)> f0_;
    int level_;
    std::vector<double> sigma_;   // sigma_0 .. sigma_n
    std::vector<int> N_;
    std::vector<double> radius_;  // Omega_0 .. Omega_n
    double eps_;
    ChainOptions opts_;
    std::vector<std::vector<cplx>> b_;
    std::vector<Cache> caches_;   // caches_[m-1] serves f_m
};

struct HyperExpansion {
    int level = 0;
    double theta = 0.0;
    double t_abs = 0.0;
    std::vector<std::vector<cplx>> b;                       // b[m][j]
    // a[m][j][l]: coefficients of s^{N_0} (s - sigma_1)^{N_1} ... (s - sigma_{m-1})^{N_{m-1}} (s - sigma_m)^j
    std::vector<std::vector<std::vector<double>>> a;
    std::vector<cplx> psi;                                  // t^l coefficients
    std::vector<cplx> level_values;                         // contribution of each level at t
    cplx value;

    cplx partial(int m) const;
};

// Exact (multiprecision) assembly of the expansion at |t| = sched.t_abs on the ray theta.
HyperExpansion assemble_psi(const TruncationSchedule& sched, const std::vector<std::vector<cplx>>& b,
                            const LaplaceKernel& kernel, double theta);

struct RemainderQuadrature {
    cplx value;
    double error = 0.0;
    double tau_max = 0.0;
    bool converged = true;
};

// int_0^inf K(tau) Pi_{n+1}(s) f_{n+1}(s) dtau with s = |t| tau^q.
RemainderQuadrature remainder_quadrature(const RemainderChain& chain, const TruncationSchedule& sched,
                                         const LaplaceKernel& kernel, double rel_tol = 1e-10);

struct RemainderReport {
    cplx value;
    double quadrature_error = 0.0;
    double bound = 0.0;
    double eta = 0.0;
    double shape = 0.0;     // bound / A_n
    double A = 1.0;
    bool calibrated = false;
};

struct EngineOptions {
    std::optional<double> eps;
    std::optional<double> B_tilde;
    double scan_cap_factor = 4.0;
    double quad_rel_tol = 1e-10;
    ChainOptions chain{};
};

struct HyperResult {
    TruncationSchedule schedule;
    HyperExpansion expansion;
    RemainderReport remainder;
};

// Shared pipeline of the heat and generalized engines. Subclasses provide the Borel-plane
// function f_0 and its Taylor coefficients at 0.
class HyperEngine {
public:
    virtual ~HyperEngine() = default;

    virtual cplx f0(cplx s, cplx z) const = 0;
    virtual std::vector<cplx> b0(cplx z, int count) const = 0;
    // f_0(., z) as a callable; engines may precompute per-z data here
    virtual std::function<cplx(cplx)> f0_function(cplx z) const;

    const AnalyticDatum& datum() const { return datum_; }
    const Direction& direction() const { return direction_; }
    const LaplaceKernel& kernel() const { return kernel_; }
    const SingularGeometry& geometry() const { return geom_; }
    double eps() const { return eps_; }
    double B_tilde() const { return B_; }
    double r_eff() const { return geom_.level0_radius() - eps_; }

    TruncationSchedule level0_schedule(double t_abs) const;
    NextTruncation next_truncation(const TruncationSchedule& sched) const;
    TruncationSchedule schedule(double t_abs, int level) const;
    std::shared_ptr<const RemainderChain> chain(const TruncationSchedule& sched, cplx z) const;
    HyperExpansion assemble_psi(const TruncationSchedule& sched, const RemainderChain& chain) const;
    RemainderQuadrature remainder_quadrature(const RemainderChain& chain, const TruncationSchedule& sched) const;
    // exp(-eta_n^k L) times the kernel prefactor
    double remainder_shape(const TruncationSchedule& sched) const;
    double remainder_bound(const TruncationSchedule& sched) const;

    HyperResult hyper_expand(double t_abs, cplx z, int level) const;
    // Sets A_n = |R_n| / shape at t_cal.
    double calibrate(int level, double t_cal, cplx z);
    std::optional<double> A(int level) const;
    void set_A(int level, double A);

protected:
    HyperEngine(AnalyticDatum datum, Direction direction, LaplaceKernel kernel, double q, cplx lambda,
                EngineOptions opts);

    AnalyticDatum datum_;
    Direction direction_;
    LaplaceKernel kernel_;
    SingularGeometry geom_;
    EngineOptions opts_;
    double eps_ = 0.0;
    double B_ = 0.0;
    std::vector<std::optional<double>> A_;
};

// eps = min(L_0 / 4, dist(image, [0, inf)) / 2) / 2
double auto_eps(const SingularGeometry& geom);

}  // namespace hyperasym
