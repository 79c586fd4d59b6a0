#include "hyperasym/chain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <tuple>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "hyperasym/errors.hpp"
#include "hyperasym/simd.hpp"
#include "hyperasym/special_fn.hpp"

namespace hyperasym {

namespace {

using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<250>,
                                           boost::multiprecision::et_off>;

constexpr double kPi = std::numbers::pi;

cplx ipow(cplx x, int n) {
    cplx r = 1.0;
    cplx b = x;
    for (int e = n < 0 ? -n : n; e > 0; e >>= 1) {
        if (e & 1) r *= b;
        b *= b;
    }
    return n < 0 ? 1.0 / r : r;
}

// Radius of Omega_n around sigma_n. Entire data have no singular image; any radius is
// admissible there and we use distance sigma + 1.
double omega_radius(const SingularGeometry& geom, int n, double sigma, double eps) {
    double d = geom.distance(sigma);
    if (!std::isfinite(d)) d = sigma + 1.0;
    return d - omega_rho(n) * eps;
}

double finite_level0_radius(const SingularGeometry& geom) {
    const double L0 = geom.level0_radius();
    return std::isfinite(L0) ? L0 : 1.0;
}

}  // namespace

// ---------------------------------------------------------------- LaplaceKernel

LaplaceKernel LaplaceKernel::gaussian() { return LaplaceKernel{}; }

LaplaceKernel LaplaceKernel::ecalle(int q) {
    if (q < 2) throw InputError("kernel order q must be an integer >= 2");
    const KernelParams p = KernelParams::from_q(q);
    LaplaceKernel k;
    k.gaussian_ = false;
    k.q_ = q;
    k.k_ = p.k;
    k.c_q_ = p.c_q;
    return k;
}

double LaplaceKernel::weight(double tau) const {
    if (gaussian_) return std::exp(-0.25 * tau * tau) / std::sqrt(kPi);
    return ecalle_kernel(static_cast<double>(q_), tau);
}

double LaplaceKernel::decay(double t_abs, double B) const {
    if (gaussian_) return 1.0 / (4.0 * t_abs) - B;
    return 1.0 / (c_q_ * std::pow(t_abs, k_)) - B;
}

int LaplaceKernel::optimal_n0(double r_eff, double L) const {
    if (gaussian_) return static_cast<int>(std::floor(r_eff * L + 0.5));
    return static_cast<int>(std::floor(k_ * std::pow(r_eff, k_) * L + 1.0 - 1.0 / q_));
}

double LaplaceKernel::first_sigma(int N0, double L) const {
    if (gaussian_) return (N0 - 0.5) / L;
    return std::pow((N0 + 1.0 / q_ - 1.0) / (k_ * L), 1.0 / k_);
}

double LaplaceKernel::lead(int N0) const {
    if (gaussian_) return N0 - 0.5;
    return N0 - 1.0 + 1.0 / q_;
}

double LaplaceKernel::moment(int l) const {
    return std::exp(std::lgamma(1.0 + q_ * l) - std::lgamma(l + 1.0));
}

double LaplaceKernel::bound_prefactor(double t_abs, double B, double L) const {
    if (gaussian_) return 1.0 / std::sqrt(1.0 - 4.0 * B * t_abs);
    return 1.0 / (std::pow(t_abs, 1.0 / q_) * std::sqrt(L));
}

// ---------------------------------------------------------------- schedule

int TruncationSchedule::total_order() const {
    int s = 0;
    for (int N : Ns) s += N;
    return s;
}

double critical_residual(const TruncationSchedule& sched, const LaplaceKernel& kernel, int N, double s) {
    const int n = static_cast<int>(sched.Ns.size());
    double r = kernel.lead(sched.Ns[0]) / s;
    for (int m = 1; m < n; ++m) r += sched.Ns[m] / (s - sched.sigmas[m - 1]);
    r += N / (s - sched.sigmas[n - 1]);
    return r - kernel.k() * std::pow(s, kernel.k() - 1.0) * sched.decay;
}

double log_integrand_estimate(const TruncationSchedule& sched, const LaplaceKernel& kernel, int N, double s) {
    const int n = static_cast<int>(sched.Ns.size());
    double g = -std::pow(s, kernel.k()) * sched.decay + kernel.lead(sched.Ns[0]) * std::log(s) -
               sched.Ns[0] * std::log(sched.big_radii[0]);
    for (int m = 1; m < n; ++m)
        g += sched.Ns[m] * (std::log(std::abs(s - sched.sigmas[m - 1])) - std::log(sched.big_radii[m]));
    g += N * (std::log(std::abs(s - sched.sigmas[n - 1])) - std::log(sched.big_radii[n]));
    return g;
}

TruncationSchedule level0_schedule(double t_abs, double r_eff, double eps, double B_tilde,
                                   const LaplaceKernel& kernel) {
    if (!(t_abs > 0.0)) throw InputError("|t| must be positive");
    if (!(r_eff > 0.0)) throw InputError("eps leaves no room below the level-0 radius");
    TruncationSchedule s;
    s.r_eff = r_eff;
    s.eps = eps;
    s.B_tilde = B_tilde;
    s.t_abs = t_abs;
    s.decay = kernel.decay(t_abs, B_tilde);
    if (!(s.decay > 0.0)) throw InputError("|t| too large: the kernel decay does not dominate the growth bound");
    const int N0 = kernel.optimal_n0(r_eff, s.decay);
    if (N0 < 1) {
        std::ostringstream os;
        os << "|t| = " << t_abs << " too large: optimal truncation N0 < 1";
        throw InputError(os.str());
    }
    s.Ns = {N0};
    s.sigmas = {kernel.first_sigma(N0, s.decay)};
    s.big_radii = {r_eff};
    s.etas = {s.sigmas[0]};
    return s;
}

NextTruncation next_truncation(const TruncationSchedule& sched, const LaplaceKernel& kernel, int scan_cap) {
    const int n = static_cast<int>(sched.Ns.size());
    if (n < 1 || static_cast<int>(sched.sigmas.size()) != n || static_cast<int>(sched.big_radii.size()) != n + 1)
        throw InputError("next_truncation: inconsistent schedule");
    const double sig = sched.sigmas[n - 1];
    NextTruncation out;
    for (int N = 1; N <= scan_cap; ++N) {
        auto res = [&](double s) { return critical_residual(sched, kernel, N, s); };
        const double lo = sig + 1e-12 * std::max(1.0, sig);
        double width = std::max(1.0, sig);
        double hi = sig + width;
        while (res(hi) >= 0.0) {
            width *= 2.0;
            hi = sig + width;
            if (width > 1e12) throw ConvergenceError("next_truncation: no sign change of the critical condition");
        }
        // last sign change on a geometric grid in (lo, hi], then bisection
        const int grid = 256;
        double a = lo, b = hi;
        double prev_x = hi;
        for (int i = grid - 1; i >= 0; --i) {
            const double x = sig + (lo - sig) * std::pow((hi - sig) / (lo - sig), static_cast<double>(i) / grid);
            if (res(x) > 0.0) {
                a = x;
                b = prev_x;
                break;
            }
            prev_x = x;
        }
        for (int it = 0; it < 200 && b - a > 4e-16 * b; ++it) {
            const double mid = 0.5 * (a + b);
            (res(mid) > 0.0 ? a : b) = mid;
        }
        const double root = 0.5 * (a + b);
        out.scan.push_back({N, root, log_integrand_estimate(sched, kernel, N, root)});
    }
    auto best = std::min_element(out.scan.begin(), out.scan.end(),
                                 [](const ScanPoint& x, const ScanPoint& y) { return x.log_g < y.log_g; });
    if (best->N == scan_cap) {
        std::ostringstream os;
        os << "next_truncation: no interior minimum up to N = " << scan_cap << " at level " << n
           << " (log g at cap " << best->log_g << ")";
        throw ConvergenceError(os.str());
    }
    out.N = best->N;
    out.sigma = best->root;
    out.log_g = best->log_g;
    return out;
}

void extend_schedule(TruncationSchedule& sched, const LaplaceKernel& kernel, const SingularGeometry& geom,
                     int scan_cap) {
    const int n = static_cast<int>(sched.Ns.size());
    const double R = omega_radius(geom, n, sched.sigmas.back(), sched.eps);
    if (!(R > 0.0)) throw GeometryError("degenerate contour at level " + std::to_string(n));
    sched.big_radii.push_back(R);
    const NextTruncation nt = next_truncation(sched, kernel, scan_cap);
    sched.Ns.push_back(nt.N);
    sched.sigmas.push_back(nt.sigma);
    sched.etas.push_back(std::pow(std::max(0.0, -nt.log_g / sched.decay), 1.0 / kernel.k()));
}

// ---------------------------------------------------------------- RemainderChain

RemainderChain::RemainderChain(std::function<cplx(cplx)> f0, std::vector<cplx> b0, const TruncationSchedule& sched,
                               ChainOptions opts)
    : f0_(std::move(f0)), level_(sched.level()), N_(sched.Ns), radius_(sched.big_radii), eps_(sched.eps),
      opts_(opts) {
    if (static_cast<int>(radius_.size()) < level_ + 1) throw InputError("RemainderChain: missing contour radii");
    if (static_cast<int>(b0.size()) != N_[0]) throw InputError("RemainderChain: need N0 level-0 coefficients");
    sigma_.push_back(0.0);
    for (int m = 1; m <= level_; ++m) sigma_.push_back(sched.sigmas[m - 1]);
    b_.resize(level_ + 1);
    b_[0] = std::move(b0);
    caches_.resize(level_ + 1);
    for (int m = 1; m <= level_ + 1; ++m) {
        build_cache(m);
        if (m <= level_) build_taylor(m);
    }
}

void RemainderChain::build_cache(int m) {
    const double c = sigma_[m - 1];
    const double R = radius_[m - 1];
    const int N = N_[m - 1];
    auto sample = [&](int k, int M) {
        const double phi = 2.0 * kPi * k / M;
        const cplx x = c + std::polar(R, phi);
        // f_{m-1}(x) (x - c)^{1 - N}
        return std::pair{x, f_auto(m - 1, x) * std::polar(std::pow(R, 1.0 - N), (1.0 - N) * phi)};
    };
    const double pr = opts_.cache_fraction * R;
    const std::array<cplx, 4> probes{cplx(c), c + std::polar(pr, 0.3), c + std::polar(pr, 2.4),
                                     c + std::polar(pr, 4.4)};
    int M = opts_.cache_min_nodes;
    std::vector<cplx> nodes(M), vals(M);
    for (int k = 0; k < M; ++k) std::tie(nodes[k], vals[k]) = sample(k, M);
    auto sums = [&](std::vector<cplx>& w, std::array<double, 4>& scale) {
        std::array<cplx, 4> out;
        w.resize(vals.size());
        for (std::size_t k = 0; k < vals.size(); ++k) w[k] = vals[k] / static_cast<double>(vals.size());
        for (int p = 0; p < 4; ++p) {
            out[p] = simd::cauchy_sum(w, nodes, probes[p]);
            double sc = 0.0;
            for (std::size_t k = 0; k < w.size(); ++k) sc += std::abs(w[k]) / std::abs(nodes[k] - probes[p]);
            scale[p] = sc;
        }
        return out;
    };
    std::vector<cplx> weights;
    std::array<double, 4> scale{};
    std::array<cplx, 4> prev = sums(weights, scale);
    while (true) {
        if (2 * M > opts_.cache_max_nodes) {
            std::ostringstream os;
            os << "Cauchy cache for f_" << m << " did not converge with " << M << " nodes";
            throw ConvergenceError(os.str());
        }
        std::vector<cplx> n2(2 * M), v2(2 * M);
        for (int k = 0; k < M; ++k) {
            n2[2 * k] = nodes[k];
            v2[2 * k] = vals[k];
            std::tie(n2[2 * k + 1], v2[2 * k + 1]) = sample(2 * k + 1, 2 * M);
        }
        nodes.swap(n2);
        vals.swap(v2);
        M *= 2;
        const std::array<cplx, 4> cur = sums(weights, scale);
        bool ok = true;
        for (int p = 0; p < 4; ++p)
            if (std::abs(cur[p] - prev[p]) > opts_.cache_tol * scale[p]) ok = false;
        prev = cur;
        if (ok) break;
    }
    caches_[m - 1] = Cache{std::move(nodes), std::move(weights), *std::max_element(scale.begin(), scale.end())};
}

void RemainderChain::build_taylor(int m) {
    const double c = sigma_[m];
    const double rho = opts_.taylor_radius_fraction * radius_[m];
    const int N = N_[m];
    if (!(rho > 0.0)) throw GeometryError("Taylor circle radius is not positive at level " + std::to_string(m));
    int M = 64;
    while (M < 4 * N) M *= 2;
    std::vector<cplx> vals(M);
    for (int k = 0; k < M; ++k) vals[k] = f_auto(m, c + std::polar(rho, 2.0 * kPi * k / M));
    auto extract = [&] {
        const int Mv = static_cast<int>(vals.size());
        std::vector<cplx> coeffs(N), tw(Mv);
        for (int j = 0; j < N; ++j) {
            for (int k = 0; k < Mv; ++k) tw[k] = std::polar(1.0, -2.0 * kPi * static_cast<double>((1LL * j * k) % Mv) / Mv);
            coeffs[j] = simd::dot(vals, tw) / static_cast<double>(Mv) / std::pow(rho, j);
        }
        return coeffs;
    };
    std::vector<cplx> prev = extract();
    while (true) {
        if (2 * M > opts_.cache_max_nodes)
            throw ConvergenceError("Taylor coefficients at level " + std::to_string(m) + " did not converge");
        std::vector<cplx> v2(2 * M);
        for (int k = 0; k < M; ++k) {
            v2[2 * k] = vals[k];
            v2[2 * k + 1] = f_auto(m, c + std::polar(rho, 2.0 * kPi * (2 * k + 1) / (2 * M)));
        }
        vals.swap(v2);
        M *= 2;
        std::vector<cplx> cur = extract();
        double fmax = 0.0, diff = 0.0;
        for (const cplx& v : vals) fmax = std::max(fmax, std::abs(v));
        for (int j = 0; j < N; ++j) diff = std::max(diff, std::abs(cur[j] - prev[j]) * std::pow(rho, j));
        prev.swap(cur);
        if (diff <= 1e-13 * std::max(fmax, caches_[m - 1].scale)) break;
    }
    b_[m] = std::move(prev);
}

cplx RemainderChain::taylor(int m, cplx s) const {
    const std::vector<cplx>& b = b_.at(m);
    const cplx d = s - sigma_[m];
    cplx acc = 0.0;
    for (auto it = b.rbegin(); it != b.rend(); ++it) acc = acc * d + *it;
    return acc;
}

cplx RemainderChain::f_auto(int m, cplx s) const {
    if (m == 0) return f0_(s);
    const double c = sigma_[m - 1];
    if (std::abs(s - c) < opts_.cache_fraction * radius_[m - 1]) {
        const Cache& cache = caches_[m - 1];
        if (!cache.nodes.empty()) return simd::cauchy_sum(cache.weights, cache.nodes, s);
    }
    return f_divided(m, s);
}

cplx RemainderChain::f_divided(int m, cplx s) const {
    const double c = sigma_[m - 1];
    return (f_auto(m - 1, s) - taylor(m - 1, s)) / ipow(s - c, N_[m - 1]);
}

cplx RemainderChain::f_contour(int m, cplx s) const {
    const double c = sigma_[m - 1];
    const int N = N_[m - 1];
    const ContourSpec spec = two_disc_boundary(c, radius_[m - 1], s, std::ldexp(eps_, -m));
    auto g = [&](cplx x) { return f_auto(m - 1, x) / (ipow(x - c, N) * (x - s)); };
    return cauchy_integral(spec, g, opts_.contour);
}

cplx RemainderChain::f(int m, cplx s, EvalMode mode) const {
    if (m < 0 || m > level_ + 1) throw InputError("RemainderChain::f: level out of range");
    if (m == 0) return f0_(s);
    switch (mode) {
        case EvalMode::automatic:
            return f_auto(m, s);
        case EvalMode::divided_difference: {
            const double c = sigma_[m - 1];
            const double d = std::abs(s - c);
            if (d == 0.0 || d < 0.05 * c) return f_contour(m, s);
            return f_divided(m, s);
        }
        case EvalMode::contour:
            return f_contour(m, s);
    }
    return f_auto(m, s);
}

cplx RemainderChain::remainder_integrand(cplx s) const {
    cplx p = ipow(s, N_[0]);
    for (int m = 1; m <= level_; ++m) p *= ipow(s - sigma_[m], N_[m]);
    return p * f_auto(level_ + 1, s);
}

// ---------------------------------------------------------------- assembly

cplx HyperExpansion::partial(int m) const {
    cplx acc = 0.0;
    for (int i = 0; i <= m && i < static_cast<int>(level_values.size()); ++i) acc += level_values[i];
    return acc;
}

HyperExpansion assemble_psi(const TruncationSchedule& sched, const std::vector<std::vector<cplx>>& b,
                            const LaplaceKernel& kernel, double theta) {
    const int n = sched.level();
    if (static_cast<int>(b.size()) < n + 1) throw InputError("assemble_psi: missing coefficients");
    const int D = sched.total_order();
    const int q = kernel.q();

    // moments Gamma(1 + q l)/l! |t|^l, exact for integer q
    std::vector<Real> moment(D), moment_t(D);
    {
        Real m = 1, tp = 1;
        const Real t = sched.t_abs;
        for (int l = 0; l < D; ++l) {
            if (l > 0) {
                for (int i = 1; i <= q; ++i) m *= Real(q * (l - 1) + i);
                m /= Real(l);
                tp *= t;
            }
            moment[l] = m;
            moment_t[l] = m * tp;
        }
    }

    HyperExpansion out;
    out.level = n;
    out.theta = theta;
    out.t_abs = sched.t_abs;
    out.b = std::vector<std::vector<cplx>>(b.begin(), b.begin() + n + 1);
    out.a.resize(n + 1);
    out.level_values.resize(n + 1);
    std::vector<Real> S_re(D), S_im(D);

    const int N0 = sched.Ns[0];
    {
        Real vr = 0, vi = 0;
        out.a[0].resize(N0);
        for (int j = 0; j < N0; ++j) {
            out.a[0][j].assign(j + 1, 0.0);
            out.a[0][j][j] = 1.0;
            S_re[j] += Real(b[0][j].real());
            S_im[j] += Real(b[0][j].imag());
            vr += moment_t[j] * Real(b[0][j].real());
            vi += moment_t[j] * Real(b[0][j].imag());
        }
        out.level_values[0] = {static_cast<double>(vr), static_cast<double>(vi)};
    }

    std::vector<Real> P(N0 + 1, Real(0));   // s^{N0}
    P[N0] = 1;
    for (int m = 1; m <= n; ++m) {
        const Real sig = sched.sigmas[m - 1];
        const int Nm = sched.Ns[m];
        if (static_cast<int>(b[m].size()) != Nm) throw InputError("assemble_psi: coefficient count mismatch");
        Real vr = 0, vi = 0;
        out.a[m].resize(Nm);
        std::vector<Real> Q = P;
        for (int j = 0; j < Nm; ++j) {
            std::vector<double>& aj = out.a[m][j];
            aj.resize(Q.size());
            Real mom = 0;
            const Real br = b[m][j].real(), bi = b[m][j].imag();
            for (std::size_t l = 0; l < Q.size(); ++l) {
                aj[l] = static_cast<double>(Q[l]);
                if (Q[l] == 0) continue;
                S_re[l] += br * Q[l];
                S_im[l] += bi * Q[l];
                mom += Q[l] * moment_t[l];
            }
            vr += br * mom;
            vi += bi * mom;
            // Q <- Q (s - sigma_m)
            Q.push_back(Real(0));
            for (std::size_t l = Q.size() - 1; l > 0; --l) Q[l] = Q[l - 1] - sig * Q[l];
            Q[0] = -sig * Q[0];
        }
        out.level_values[m] = {static_cast<double>(vr), static_cast<double>(vi)};
        P.swap(Q);
    }

    out.psi.resize(D);
    for (int l = 0; l < D; ++l) {
        const double mr = static_cast<double>(moment[l] * S_re[l]);
        const double mi = static_cast<double>(moment[l] * S_im[l]);
        out.psi[l] = cplx(mr, mi) * std::polar(1.0, -theta * l);
    }
    out.value = out.partial(n);
    return out;
}

// ---------------------------------------------------------------- remainder

RemainderQuadrature remainder_quadrature(const RemainderChain& chain, const TruncationSchedule& sched,
                                         const LaplaceKernel& kernel, double rel_tol) {
    const int n = sched.level();
    const double t = sched.t_abs;
    const double q = kernel.q();
    auto tau_of = [&](double s) { return std::pow(s / t, 1.0 / q); };
    auto envelope = [&](double tau) {
        const double s = t * std::pow(tau, q);
        double g = kernel.log_envelope(tau) + sched.Ns[0] * std::log(s);
        for (int m = 1; m <= n; ++m) g += sched.Ns[m] * std::log(std::abs(s - sched.sigmas[m - 1]));
        return g;
    };
    const double tau_peak = tau_of(sched.sigmas[n]);
    double peak = envelope(tau_peak);
    for (int i = 1; i <= 200; ++i) peak = std::max(peak, envelope(tau_peak * 4.0 * i / 200.0));
    const double drop = 60.0;
    double lo = tau_peak, hi = 2.0 * tau_peak + 1.0;
    while (envelope(hi) > peak - drop) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e8) throw ConvergenceError("remainder quadrature: tail bound failure");
    }
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (envelope(mid) > peak - drop ? lo : hi) = mid;
    }
    const double tau_max = hi;

    std::vector<double> knots{0.0, tau_max};
    for (int m = 1; m <= n + 1; ++m) {
        const double tk = tau_of(sched.sigmas[m - 1]);
        if (tk < tau_max) knots.push_back(tk);
    }
    std::sort(knots.begin(), knots.end());
    std::vector<double> bp;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        for (int k = 0; k < 4; ++k) bp.push_back(knots[i] + (knots[i + 1] - knots[i]) * k / 4.0);
    bp.push_back(tau_max);

    auto integrand = [&](double tau) -> cplx {
        const double w = kernel.weight(tau);
        if (w == 0.0) return 0.0;
        return w * chain.remainder_integrand(t * std::pow(tau, q));
    };
    QuadOptions qo;
    qo.rel_tol = rel_tol;
    qo.max_intervals = 20000;
    const Integral I = integrate_adaptive(integrand, bp, qo);
    return {I.value, I.error, tau_max, I.converged};
}

// ---------------------------------------------------------------- engine

double auto_eps(const SingularGeometry& geom) {
    const double L0 = finite_level0_radius(geom);
    return 0.5 * std::min(0.25 * L0, 0.5 * geom.distance_to_positive_axis());
}

HyperEngine::HyperEngine(AnalyticDatum datum, Direction direction, LaplaceKernel kernel, double q, cplx lambda,
                         EngineOptions opts)
    : datum_(std::move(datum)), direction_(std::move(direction)), kernel_(kernel),
      geom_(datum_, direction_.theta(), q, lambda), opts_(opts) {
    eps_ = opts_.eps ? *opts_.eps : auto_eps(geom_);
    const double L0 = finite_level0_radius(geom_);
    if (!(eps_ > 0.0) || !(eps_ < L0)) throw InputError("eps must lie in (0, level-0 radius)");
    if (opts_.eps && 2.0 * eps_ > geom_.distance_to_positive_axis())
        throw InputError("eps exceeds half the distance of the singular image to the positive axis");
    if (opts_.B_tilde) {
        B_ = *opts_.B_tilde;
    } else {
        const double p = kernel_.k() * q;
        B_ = growth_bound(datum_, p).B * std::pow(std::abs(lambda), kernel_.k());
    }
}

std::function<cplx(cplx)> HyperEngine::f0_function(cplx z) const {
    return [this, z](cplx s) { return f0(s, z); };
}

TruncationSchedule HyperEngine::level0_schedule(double t_abs) const {
    return hyperasym::level0_schedule(t_abs, finite_level0_radius(geom_) - eps_, eps_, B_, kernel_);
}

NextTruncation HyperEngine::next_truncation(const TruncationSchedule& sched) const {
    TruncationSchedule s = sched;
    const int n = static_cast<int>(s.Ns.size());
    if (static_cast<int>(s.big_radii.size()) == n) {
        const double R = omega_radius(geom_, n, s.sigmas.back(), s.eps);
        if (!(R > 0.0)) throw GeometryError("degenerate contour at level " + std::to_string(n));
        s.big_radii.push_back(R);
    }
    return hyperasym::next_truncation(s, kernel_, static_cast<int>(std::ceil(opts_.scan_cap_factor * s.Ns[0])));
}

TruncationSchedule HyperEngine::schedule(double t_abs, int level) const {
    if (level < 0) throw InputError("level must be nonnegative");
    TruncationSchedule s = level0_schedule(t_abs);
    const int cap = static_cast<int>(std::ceil(opts_.scan_cap_factor * s.Ns[0]));
    for (int n = 1; n <= level; ++n) extend_schedule(s, kernel_, geom_, std::max(cap, 2));
    return s;
}

std::shared_ptr<const RemainderChain> HyperEngine::chain(const TruncationSchedule& sched, cplx z) const {
    return std::make_shared<const RemainderChain>(f0_function(z), b0(z, sched.Ns[0]), sched, opts_.chain);
}

HyperExpansion HyperEngine::assemble_psi(const TruncationSchedule& sched, const RemainderChain& ch) const {
    std::vector<std::vector<cplx>> b;
    for (int m = 0; m <= sched.level(); ++m) b.push_back(ch.b(m));
    return hyperasym::assemble_psi(sched, b, kernel_, direction_.theta());
}

RemainderQuadrature HyperEngine::remainder_quadrature(const RemainderChain& ch, const TruncationSchedule& sched) const {
    return hyperasym::remainder_quadrature(ch, sched, kernel_, opts_.quad_rel_tol);
}

double HyperEngine::remainder_shape(const TruncationSchedule& sched) const {
    const double eta = sched.etas.back();
    return std::exp(-std::pow(eta, kernel_.k()) * sched.decay) *
           kernel_.bound_prefactor(sched.t_abs, sched.B_tilde, sched.decay);
}

double HyperEngine::remainder_bound(const TruncationSchedule& sched) const {
    const auto a = A(sched.level());
    return (a ? *a : 1.0) * remainder_shape(sched);
}

HyperResult HyperEngine::hyper_expand(double t_abs, cplx z, int level) const {
    if (!(std::abs(z) < geom_.eps_tilde()) && !datum_.is_entire())
        throw InputError("|z| must be below eps_tilde");
    HyperResult r;
    r.schedule = schedule(t_abs, level);
    const auto ch = chain(r.schedule, z);
    r.expansion = assemble_psi(r.schedule, *ch);
    const RemainderQuadrature rq = remainder_quadrature(*ch, r.schedule);
    r.remainder.value = rq.value;
    r.remainder.quadrature_error = rq.error;
    r.remainder.eta = r.schedule.etas.back();
    r.remainder.shape = remainder_shape(r.schedule);
    const auto a = A(level);
    r.remainder.calibrated = a.has_value();
    r.remainder.A = a ? *a : 1.0;
    r.remainder.bound = r.remainder.A * r.remainder.shape;
    return r;
}

double HyperEngine::calibrate(int level, double t_cal, cplx z) {
    const HyperResult r = hyper_expand(t_cal, z, level);
    const double A = std::abs(r.remainder.value) / r.remainder.shape;
    set_A(level, A);
    return A;
}

std::optional<double> HyperEngine::A(int level) const {
    if (level < 0 || level >= static_cast<int>(A_.size())) return std::nullopt;
    return A_[level];
}

void HyperEngine::set_A(int level, double A) {
    if (level >= static_cast<int>(A_.size())) A_.resize(level + 1);
    A_[level] = A;
}

}  // namespace hyperasym
