#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "hyperasym/chain.hpp"
#include "hyperasym/datum.hpp"
#include "hyperasym/special_fn.hpp"

namespace hyperasym {

// (d_t - lambda d_z^q)^beta u = 0, d_t^j u(0) = 0 for j < beta - 1,
// d_t^{beta-1} u(0) = lambda^{beta-1} phi^{(q (beta-1))}.
struct SimpleEquation {
    cplx lambda = 1.0;
    int q = 2;
    int beta = 1;

    static SimpleEquation heat() { return {}; }
    double k() const { return 1.0 / (q - 1.0); }
    KernelParams kernel() const { return KernelParams::from_q(q); }
    void validate() const;
};

// u_n / Gamma(1 + q n) for a formal series sum u_n t^n / n!
std::vector<cplx> borel_transform(const std::vector<cplx>& u, int q);

// u_n of the formal solution sum u_n t^n / n!: binom(n, beta-1) lambda^n phi^{(q n)}(z)
std::vector<cplx> formal_solution(const SimpleEquation& eq, const AnalyticDatum& datum, cplx z, int count);

// v(T, z) = sum_n binom(n, beta-1) lambda^n phi^{(qn)}(z) T^n / (qn)!, for fixed z.
class BorelFunction {
public:
    BorelFunction(SimpleEquation eq, AnalyticDatum datum, cplx z);

    // coefficient of T^n
    cplx coefficient(int n) const;
    cplx series(cplx T) const;
    // closed form through the q-th roots of lambda T; series near T = 0 when beta > 1
    cplx operator()(cplx T) const;
    // double-contour integral representation
    cplx integral(cplx T) const;
    // radius of holomorphy (r - eps_tilde)^q / |lambda|
    double radius() const;

private:
    cplx closed_form(cplx T) const;
    void ensure_coefficients(int count) const;

    SimpleEquation eq_;
    AnalyticDatum datum_;
    cplx z_;
    double pole_distance_;
    mutable std::vector<cplx> coeffs_;
    // T-derivative terms c y^e phi^{(b)}(z + y)
    struct Term {
        cplx c;
        int e;
        int b;
    };
    std::vector<Term> terms_;
};

struct LaplaceOptions {
    double rel_tol = 1e-12;
    double tau_max = 0.0;   // 0: chosen from the kernel envelope
};

// int_0^inf C_q(tau) v(t_abs tau^q e^{i theta}) dtau
cplx laplace_sum(const std::function<cplx(cplx)>& v, int q, double theta, double t_abs,
                 const LaplaceOptions& opts = {});

class BorelEngine : public HyperEngine {
public:
    BorelEngine(SimpleEquation eq, AnalyticDatum datum, Direction direction, EngineOptions opts = {});
    // Direction gate for the simple equation
    static Direction direction(const SimpleEquation& eq, const AnalyticDatum& datum, double theta, double delta);

    const SimpleEquation& equation() const { return eq_; }
    cplx f0(cplx s, cplx z) const override;
    std::vector<cplx> b0(cplx z, int count) const override;
    std::function<cplx(cplx)> f0_function(cplx z) const override;

private:
    SimpleEquation eq_;
};

}  // namespace hyperasym
