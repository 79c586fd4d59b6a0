#include "hyperasym/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "hyperasym/errors.hpp"
#include "hyperasym/quadrature.hpp"

namespace hyperasym {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

bool is_integer(double x) { return x == std::floor(x); }

// Neumaier summation for complex terms.
struct CompensatedSum {
    double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;
    static void add(double& s, double& c, double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    void add(cplx z) {
        add(re, cre, z.real());
        add(im, cim, z.imag());
    }
    cplx value() const { return {re + cre, im + cim}; }
};

// log|1/Gamma(x)| and its sign; x must not be a pole.
void log_rgamma(double x, double& logabs, double& sign) {
    if (x > 0.0) {
        logabs = -std::lgamma(x);
        sign = 1.0;
        return;
    }
    // 1/Gamma(x) = Gamma(1 - x) sin(pi x) / pi
    const double s = sin_pi(x);
    logabs = std::lgamma(1.0 - x) + std::log(std::abs(s)) - std::log(kPi);
    sign = s < 0.0 ? -1.0 : 1.0;
}

}  // namespace

KernelParams KernelParams::from_q(double q) {
    if (!(q > 1.0)) throw InputError("kernel order q must exceed 1");
    KernelParams p;
    p.q = q;
    p.k = 1.0 / (q - 1.0);
    p.alpha = q;
    p.c_q = std::pow(p.k + 1.0, p.k + 1.0) * std::pow(p.k, -p.k);
    return p;
}

double sin_pi(double x) {
    double r = std::fmod(x, 2.0);
    if (r < 0.0) r += 2.0;
    if (r == 0.0 || r == 1.0) return 0.0;
    if (r == 0.5) return 1.0;
    if (r == 1.5) return -1.0;
    return std::sin(kPi * r);
}

double gamma_real(double x) {
    if (is_nonpositive_integer(x)) throw SingularityError("gamma function pole at " + std::to_string(x));
    return std::tgamma(x);
}

double rgamma(double x) {
    if (is_nonpositive_integer(x)) return 0.0;
    if (x > 0.0 && x < 170.0) return 1.0 / std::tgamma(x);
    double la, sg;
    log_rgamma(x, la, sg);
    return sg * std::exp(la);
}

cplx mittag_leffler_series(double beta, cplx z) {
    if (!(beta > 0.0)) throw InputError("Mittag-Leffler order must be positive");
    if (z == 0.0) return 1.0;
    CompensatedSum sum;
    const double lz = std::log(std::abs(z));
    const double az = std::arg(z);
    double max_term = 0.0;
    int small_run = 0;
    for (int n = 0; n < 100000; ++n) {
        const double g = 1.0 + beta * n;
        const double mag = g < 170.0 ? std::pow(std::abs(z), n) / std::tgamma(g) : std::exp(n * lz - std::lgamma(g));
        const cplx term = std::polar(mag, n * az);
        sum.add(term);
        max_term = std::max(max_term, mag);
        const double s = std::abs(sum.value());
        if (n > 2 && mag <= 1e-17 * std::max(s, 1e-300) && (beta * n) > std::pow(std::abs(z), 1.0 / beta)) {
            if (++small_run >= 3) break;
        } else {
            small_run = 0;
        }
    }
    return sum.value();
}

cplx mittag_leffler_asymptotic(double beta, cplx z) {
    const double az = std::abs(z);
    const double arg = std::arg(z);
    cplx exp_part = 0.0;
    double dropped = 0.0;
    const int mmax = static_cast<int>(std::ceil(beta)) + 2;
    for (int m = -mmax; m <= mmax; ++m) {
        const double a = arg + 2.0 * kPi * m;
        const cplx e = std::exp(std::polar(std::pow(az, 1.0 / beta), a / beta));
        if (std::abs(a) <= 0.75 * beta * kPi)
            exp_part += e;
        else if (std::abs(a) <= 1.05 * beta * kPi)
            dropped = std::max(dropped, std::exp(std::pow(az, 1.0 / beta) * std::cos(std::abs(a) / beta)));
    }
    exp_part /= beta;
    cplx alg = 0.0;
    double last = 0.0, prev = INFINITY;
    for (int n = 1; n < 200; ++n) {
        const double x = 1.0 - beta * n;
        if (is_nonpositive_integer(x)) continue;
        const double rg = rgamma(x);
        const cplx term = std::pow(z, -static_cast<double>(n)) * rg;
        const double mag = std::abs(term);
        if (mag > prev) break;
        alg -= term;
        last = mag;
        prev = mag;
        if (mag < 1e-18 * std::abs(exp_part + alg)) break;
    }
    const cplx value = exp_part + alg;
    const double err = last + dropped;
    if (!(err <= 1e-10 * std::abs(value)))
        throw ConvergenceError("Mittag-Leffler asymptotic expansion cannot reach 1e-10 at |z|=" + std::to_string(az));
    return value;
}

cplx mittag_leffler(double beta, cplx z) {
    if (!(beta > 0.0)) throw InputError("Mittag-Leffler order must be positive");
    if (is_integer(beta) && beta <= 64.0) {
        // E_q(z) = (1/q) sum over the q-th roots y of z of exp(y)
        const int q = static_cast<int>(beta);
        const cplx y0 = std::pow(z, 1.0 / q);
        cplx s = 0.0;
        for (int m = 0; m < q; ++m) s += std::exp(y0 * std::polar(1.0, 2.0 * kPi * m / q));
        return s / static_cast<double>(q);
    }
    const double az = std::abs(z);
    if (az <= 30.0) {
        // estimate cancellation from the sum of moduli
        const cplx v = mittag_leffler_series(beta, z);
        const double mod = std::abs(mittag_leffler_series(beta, cplx(az, 0.0)));
        if (mod * 1e-16 <= 1e-10 * std::abs(v)) return v;
        try {
            return mittag_leffler_asymptotic(beta, z);
        } catch (const ConvergenceError&) {
            throw ConvergenceError("Mittag-Leffler series loses accuracy to cancellation at |z|=" + std::to_string(az));
        }
    }
    return mittag_leffler_asymptotic(beta, z);
}

cplx mittag_leffler_derivative(int q, int p, cplx z, cplx log_scale) {
    if (q < 1 || p < 0) throw InputError("Mittag-Leffler derivative needs q >= 1, p >= 0");
    if (p == 0 && log_scale == 0.0) return mittag_leffler(q, z);
    if (p == 0 && std::abs(z) <= 1.0) return mittag_leffler(q, z) * std::exp(log_scale);
    if (std::abs(z) <= 1.0) {
        CompensatedSum sum;
        cplx zn = 1.0;
        for (int n = p; n < 400; ++n) {
            // n!/(n-p)! z^{n-p} / Gamma(1 + q n)
            const double lc = std::lgamma(n + 1.0) - std::lgamma(n - p + 1.0) - std::lgamma(1.0 + q * n);
            const cplx term = std::exp(lc) * zn;
            sum.add(term);
            if (std::abs(term) < 1e-18 * std::abs(sum.value()) && n > p + 4) break;
            zn *= z;
        }
        return sum.value() * std::exp(log_scale);
    }
    // Each branch y (y^q = z) contributes sum_e c_e y^e exp(y); d/dz acts as
    // y^e e^y -> (1/q)(e y^{e-q} + y^{e-q+1}) e^y.
    const int lo = -p * q;
    std::vector<double> c(p * q + 1, 0.0), nxt(p * q + 1, 0.0);
    c[0 - lo] = 1.0;
    for (int step = 0; step < p; ++step) {
        std::fill(nxt.begin(), nxt.end(), 0.0);
        for (int e = lo; e <= 0; ++e) {
            const double ce = c[e - lo];
            if (ce == 0.0) continue;
            if (e != 0) nxt[e - q - lo] += ce * e / q;
            nxt[e - q + 1 - lo] += ce / q;
        }
        std::swap(c, nxt);
    }
    const cplx y0 = std::pow(z, 1.0 / q);
    cplx total = 0.0;
    for (int m = 0; m < q; ++m) {
        const cplx y = y0 * std::polar(1.0, 2.0 * kPi * m / q);
        cplx poly = 0.0;
        for (int e = lo; e <= 0; ++e)
            if (c[e - lo] != 0.0) poly += c[e - lo] * std::pow(y, static_cast<double>(e));
        total += poly * std::exp(y + log_scale);
    }
    return total / static_cast<double>(q);
}

cplx ecalle_kernel_series(double alpha, cplx tau, double tol) {
    if (!(alpha > 1.0)) throw InputError("Ecalle kernel needs alpha > 1");
    if (tau == 0.0) return rgamma(1.0 - 1.0 / alpha);
    CompensatedSum sum;
    const double lt = std::log(std::abs(tau));
    const cplx dir = -tau / std::abs(tau);
    const double k1 = alpha / (alpha - 1.0);
    const double n_min = std::pow(std::abs(tau), k1) + 4.0;
    int small_run = 0;
    cplx phase = 1.0;
    for (int n = 0; n < 20000; ++n) {
        const double x = 1.0 - (n + 1.0) / alpha;
        double mag = 0.0;
        cplx term = 0.0;
        if (!is_nonpositive_integer(x)) {
            double la, sg;
            log_rgamma(x, la, sg);
            mag = std::exp(n * lt - std::lgamma(n + 1.0) + la);
            term = sg * mag * phase;
            sum.add(term);
        }
        phase *= dir;
        if (n > n_min && mag < tol * std::max(std::abs(sum.value()), 1e-300)) {
            if (++small_run >= 3) break;
        } else {
            small_run = 0;
        }
    }
    return sum.value();
}

double ecalle_kernel_steepest(double alpha, double tau) {
    if (!(alpha > 1.0)) throw InputError("Ecalle kernel needs alpha > 1");
    if (!(tau > 0.0)) throw InputError("steepest-descent evaluation needs tau > 0");
    const double q = alpha;
    const double xs = std::pow(tau / q, 1.0 / (q - 1.0));
    const double lam = tau * xs;
    const double h0 = 1.0 / q - 1.0;
    // path w = rho(psi) e^{i psi}, rho^{q-1} = q sin(psi) / sin(q psi)
    auto rho_of = [q](double psi) {
        if (psi < 1e-8) return 1.0 + (q + 1.0) * psi * psi / 6.0;
        return std::pow(q * std::sin(psi) / std::sin(q * psi), 1.0 / (q - 1.0));
    };
    auto dlog_rho = [q](double psi) {
        if (psi < 1e-4) return (q + 1.0) * psi / 3.0;
        return (1.0 / std::tan(psi) - q / std::tan(q * psi)) / (q - 1.0);
    };
    auto h_of = [q](double rho, double psi) { return std::pow(rho, q) * std::cos(q * psi) / q - rho * std::cos(psi); };
    auto integrand = [&](double psi) -> cplx {
        const double rho = rho_of(psi);
        const double ex = lam * (h_of(rho, psi) - h0);
        if (ex < -745.0) return 0.0;
        const double im_dw = rho * (dlog_rho(psi) * std::sin(psi) + std::cos(psi));
        return std::exp(ex) * im_dw;
    };
    // cut where the exponent has dropped below -60
    const double top = kPi / q;
    double lo = 0.0, hi = top * (1.0 - 1e-12);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double rho = rho_of(mid);
        if (lam * (h_of(rho, mid) - h0) < -60.0)
            hi = mid;
        else
            lo = mid;
        if (hi - lo < 1e-15) break;
    }
    QuadOptions opts;
    opts.rel_tol = 1e-14;
    const Integral r = integrate_adaptive(integrand, 0.0, hi, opts);
    return (q / kPi) * xs * std::exp(lam * h0) * r.value.real();
}

cplx ecalle_kernel(double alpha, cplx tau) {
    if (!(alpha > 1.0)) throw InputError("Ecalle kernel needs alpha > 1");
    if (tau.imag() == 0.0 && tau.real() > 1.0) return ecalle_kernel_steepest(alpha, tau.real());
    return ecalle_kernel_series(alpha, tau);
}

double ecalle_kernel(double alpha, double tau) {
    if (!(alpha > 1.0)) throw InputError("Ecalle kernel needs alpha > 1");
    if (tau < 0.0) return ecalle_kernel_series(alpha, cplx(tau, 0.0)).real();
    if (tau > 1.0) return ecalle_kernel_steepest(alpha, tau);
    return ecalle_kernel_series(alpha, cplx(tau, 0.0)).real();
}

cplx gamma_moment(int l, double q, double t_abs, double theta) {
    if (l < 0) throw InputError("moment index must be nonnegative");
    const double mag = std::exp(std::lgamma(1.0 + q * l) - std::lgamma(l + 1.0) + l * std::log(t_abs));
    return std::polar(mag, -theta * l);
}

double kernel_moment_quadrature(int l, double q, double t_abs) {
    const KernelParams kp = KernelParams::from_q(q);
    // integrand peaks near tau ~ (c l)^{1/(k+1)}; the kernel bound is below 1e-40 past tau_max
    const double peak = std::pow(std::max(1.0, q * kp.c_q * l / (kp.k + 1.0)), 1.0 / (kp.k + 1.0));
    const double tau_max = std::pow(kp.c_q * (95.0 + q * l * std::log(std::max(peak, 1.0) + 1.0)), 1.0 / (kp.k + 1.0)) + peak;
    std::vector<double> bp{0.0, 1.0};
    for (double x = 2.0; x < tau_max; x *= 1.5) bp.push_back(x);
    bp.push_back(tau_max);
    auto f = [&](double tau) -> cplx {
        const double w = ecalle_kernel(q, tau);
        return w * std::pow(t_abs * std::pow(tau, q), l);
    };
    QuadOptions opts;
    opts.rel_tol = 1e-13;
    return integrate_adaptive(f, bp, opts).value.real();
}

KernelBoundFit fit_kernel_bound(double q, double tau_max, double step, std::optional<double> c_override) {
    const KernelParams kp = KernelParams::from_q(q);
    KernelBoundFit fit;
    fit.c = c_override.value_or(kp.c_q);
    const int n = static_cast<int>(std::floor(tau_max / step + 0.5));
    for (int i = 0; i <= n; ++i) {
        const double tau = i * step;
        const double ratio = std::abs(ecalle_kernel(q, tau)) * std::exp(std::pow(tau, kp.k + 1.0) / fit.c);
        if (ratio > fit.C) {
            fit.C = ratio;
            fit.worst_tau = tau;
        }
    }
    return fit;
}

}  // namespace hyperasym
