#include "hyperasym/borel_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "hyperasym/errors.hpp"
#include "hyperasym/quadrature.hpp"

namespace hyperasym {

namespace {

constexpr double kPi = std::numbers::pi;

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

cplx ipow(cplx x, int n) {
    cplx r = 1.0;
    for (int e = n < 0 ? -n : n; e > 0; e >>= 1) {
        if (e & 1) r *= x;
        x *= x;
    }
    return n < 0 ? 1.0 / r : r;
}

}  // namespace

void SimpleEquation::validate() const {
    if (q < 2) throw InputError("simple equation: q must be an integer >= 2");
    if (beta < 1) throw InputError("simple equation: beta must be a positive integer");
    if (lambda == 0.0) throw InputError("simple equation: lambda must be nonzero");
}

std::vector<cplx> borel_transform(const std::vector<cplx>& u, int q) {
    std::vector<cplx> v(u.size());
    for (std::size_t n = 0; n < u.size(); ++n) v[n] = u[n] * std::exp(-std::lgamma(1.0 + q * static_cast<double>(n)));
    return v;
}

std::vector<cplx> formal_solution(const SimpleEquation& eq, const AnalyticDatum& datum, cplx z, int count) {
    eq.validate();
    const std::vector<cplx> c = datum.taylor_coeffs(z, eq.q * (count - 1) + 1);
    std::vector<cplx> u(count);
    cplx lp = 1.0;
    for (int n = 0; n < count; ++n) {
        if (n > 0) lp *= eq.lambda;
        u[n] = binom(n, eq.beta - 1) * lp * c[eq.q * n] * factorial(eq.q * n);
    }
    return u;
}

// ---------------------------------------------------------------- BorelFunction

BorelFunction::BorelFunction(SimpleEquation eq, AnalyticDatum datum, cplx z)
    : eq_(eq), datum_(std::move(datum)), z_(z) {
    eq_.validate();
    pole_distance_ = std::numeric_limits<double>::infinity();
    for (const PoleTerm& p : datum_.poles()) pole_distance_ = std::min(pole_distance_, std::abs(p.location - z_));
    terms_ = {{1.0, 0, 0}};
    for (int d = 0; d < eq_.beta - 1; ++d) {
        std::vector<Term> next;
        for (const Term& t : terms_) {
            if (t.e != 0) next.push_back({t.c * eq_.lambda * static_cast<double>(t.e) / static_cast<double>(eq_.q),
                                          t.e - eq_.q, t.b});
            next.push_back({t.c * eq_.lambda / static_cast<double>(eq_.q), t.e - eq_.q + 1, t.b + 1});
        }
        terms_ = std::move(next);
    }
}

void BorelFunction::ensure_coefficients(int count) const {
    if (static_cast<int>(coeffs_.size()) >= count) return;
    const std::vector<cplx> c = datum_.taylor_coeffs(z_, eq_.q * (count - 1) + 1);
    coeffs_.resize(count);
    cplx lp = 1.0;
    for (int n = 0; n < count; ++n) {
        if (n > 0) lp *= eq_.lambda;
        coeffs_[n] = binom(n, eq_.beta - 1) * lp * c[eq_.q * n];
    }
}

cplx BorelFunction::coefficient(int n) const {
    ensure_coefficients(n + 1);
    return coeffs_[n];
}

cplx BorelFunction::series(cplx T) const {
    int count;
    if (datum_.is_entire()) {
        count = datum_.polynomial_degree() / eq_.q + 1;
    } else {
        const double ratio = std::pow(std::abs(eq_.lambda * T), 1.0 / eq_.q) / pole_distance_;
        if (ratio >= 0.95) throw InputError("BorelFunction::series: argument outside the convergence disc");
        const double per_term = -eq_.q * std::log10(std::max(ratio, 1e-300));
        count = static_cast<int>(std::ceil(18.0 / per_term)) + 2 * eq_.beta + 4;
        count = std::min(std::max(count, eq_.beta + 1), 4000);
    }
    ensure_coefficients(count);
    cplx acc = 0.0;
    for (int n = count - 1; n >= 0; --n) acc = acc * T + coeffs_[n];
    return acc;
}

cplx BorelFunction::closed_form(cplx T) const {
    if (T == 0.0) return eq_.beta == 1 ? datum_.eval(z_) : cplx(0.0);
    const cplx x = eq_.lambda * T;
    const cplx y0 = std::polar(std::pow(std::abs(x), 1.0 / eq_.q), std::arg(x) / eq_.q);
    cplx total = 0.0;
    for (int m = 0; m < eq_.q; ++m) {
        const cplx y = y0 * std::polar(1.0, 2.0 * kPi * m / eq_.q);
        for (const Term& t : terms_) {
            const cplx g = t.b == 0 ? datum_.eval(z_ + y) : datum_.derivative(z_ + y, t.b);
            total += t.c * ipow(y, t.e) * g;
        }
    }
    total /= static_cast<double>(eq_.q);
    if (eq_.beta > 1) total *= ipow(T, eq_.beta - 1) / factorial(eq_.beta - 1);
    return total;
}

cplx BorelFunction::operator()(cplx T) const {
    if (eq_.beta == 1) return closed_form(T);
    if (datum_.is_entire()) return series(T);
    if (std::pow(std::abs(eq_.lambda * T), 1.0 / eq_.q) <= 0.5 * pole_distance_) return series(T);
    return closed_form(T);
}

double BorelFunction::radius() const {
    const double r = datum_.singularities().r();
    if (!std::isfinite(r)) return std::numeric_limits<double>::infinity();
    return std::pow(std::max(0.0, r - datum_.eps_tilde()), eq_.q) / std::abs(eq_.lambda);
}

cplx BorelFunction::integral(cplx T) const {
    const int q = eq_.q;
    const int p = eq_.beta - 1;
    const double a = std::pow(std::abs(eq_.lambda * T), 1.0 / q);
    const double r = datum_.singularities().r();
    const double need = a + std::abs(z_);
    double radius;
    if (std::isfinite(r)) {
        if (!(need < r)) throw InputError("v_integral: argument outside the holomorphy radius");
        radius = 0.5 * (need + r);
    } else {
        radius = need + 1.0;
    }
    const double margin = radius - need;
    // inner integrand decays like exp(-margin rho) times a polynomial of degree q p
    const double rho_max = (40.0 + q * p * std::log(1.0 + (40.0 + q * p) / margin)) / margin;

    auto inner = [&](cplx w) {
        const cplx dir = std::polar(1.0, -std::arg(w));
        auto f = [&](double rho) -> cplx {
            const cplx zeta = dir * rho;
            const cplx lz = eq_.lambda * ipow(zeta, q);
            const cplx x = T * lz;
            const cplx e = mittag_leffler_derivative(q, p, x, zeta * (z_ - w));
            return (p == 0 ? e : ipow(lz, p) * e) * dir;
        };
        std::vector<double> bp;
        for (int i = 0; i <= 16; ++i) bp.push_back(rho_max * i / 16.0);
        QuadOptions qo;
        qo.rel_tol = 1e-12;
        return integrate_adaptive(f, bp, qo).value;
    };

    int M = 32;
    double abs_sum = 0.0;
    auto trapezoid = [&](int nodes, int start, int step) {
        cplx acc = 0.0;
        for (int k = start; k < nodes; k += step) {
            const cplx w = std::polar(radius, 2.0 * kPi * k / nodes);
            // (1 / 2 pi i) dw = w dphi / 2 pi
            const cplx term = datum_.eval(w) * inner(w) * w;
            acc += term;
            abs_sum += std::abs(term);
        }
        return acc;
    };
    cplx sum = trapezoid(M, 0, 1);
    cplx prev = sum / static_cast<double>(M);
    for (;;) {
        if (M >= 16384) throw ConvergenceError("v_integral: outer trapezoid did not converge");
        sum += trapezoid(2 * M, 1, 2);
        M *= 2;
        const cplx cur = sum / static_cast<double>(M);
        const double noise = 1e-12 * abs_sum / M;
        if (std::abs(cur - prev) <= std::max(1e-11 * std::abs(cur), noise)) {
            prev = cur;
            break;
        }
        prev = cur;
    }
    cplx v = prev;
    if (p > 0) v *= ipow(T, p) / factorial(p);
    return v;
}

// ---------------------------------------------------------------- Laplace summation

cplx laplace_sum(const std::function<cplx(cplx)>& v, int q, double theta, double t_abs, const LaplaceOptions& opts) {
    if (q < 2) throw InputError("laplace_sum: q must be an integer >= 2");
    const KernelParams kp = KernelParams::from_q(q);
    const cplx rot = std::polar(1.0, theta);
    auto f = [&](double tau) -> cplx {
        const double c = ecalle_kernel(static_cast<double>(q), tau);
        if (c == 0.0) return 0.0;
        return c * v(rot * (t_abs * std::pow(tau, q)));
    };
    double tau_max = opts.tau_max > 0.0 ? opts.tau_max : std::pow(90.0 * kp.c_q, 1.0 / (kp.k + 1.0));
    QuadOptions qo;
    qo.rel_tol = opts.rel_tol;
    qo.max_intervals = 20000;
    auto panels = [](double a, double b) {
        std::vector<double> bp;
        for (int i = 0; i <= 16; ++i) bp.push_back(a + (b - a) * i / 16.0);
        return bp;
    };
    Integral I = integrate_adaptive(f, panels(0.0, tau_max), qo);
    for (int it = 0; it < 6; ++it) {
        const Integral tail = integrate_adaptive(f, panels(tau_max, 2.0 * tau_max), qo);
        I.value += tail.value;
        I.converged = I.converged && tail.converged;
        tau_max *= 2.0;
        if (std::abs(tail.value) <= 1e-16 * std::abs(I.value) || tail.abs_integral == 0.0) break;
        if (it == 5) throw ConvergenceError("laplace_sum: Borel function growth exceeds the kernel decay");
    }
    if (!std::isfinite(std::abs(I.value)))
        throw ConvergenceError("laplace_sum: Borel function growth exceeds the kernel decay");
    if (!I.converged) throw ConvergenceError("laplace_sum: quadrature did not converge");
    return I.value;
}

// ---------------------------------------------------------------- engine

Direction BorelEngine::direction(const SimpleEquation& eq, const AnalyticDatum& datum, double theta, double delta) {
    return Direction(theta, delta, stokes_directions(datum, eq.q, std::arg(eq.lambda)));
}

BorelEngine::BorelEngine(SimpleEquation eq, AnalyticDatum datum, Direction direction, EngineOptions opts)
    : HyperEngine(std::move(datum), std::move(direction), LaplaceKernel::ecalle((eq.validate(), eq.q)), eq.q,
                  eq.lambda, opts),
      eq_(eq) {}

cplx BorelEngine::f0(cplx s, cplx z) const {
    return BorelFunction(eq_, datum_, z)(s * std::polar(1.0, direction_.theta()));
}

std::function<cplx(cplx)> BorelEngine::f0_function(cplx z) const {
    auto bf = std::make_shared<BorelFunction>(eq_, datum_, z);
    const cplx rot = std::polar(1.0, direction_.theta());
    return [bf, rot](cplx s) { return (*bf)(s * rot); };
}

std::vector<cplx> BorelEngine::b0(cplx z, int count) const {
    const BorelFunction bf(eq_, datum_, z);
    std::vector<cplx> b(count);
    for (int j = 0; j < count; ++j) b[j] = bf.coefficient(j) * std::polar(1.0, j * direction_.theta());
    return b;
}

}  // namespace hyperasym
