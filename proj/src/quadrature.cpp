#include "hyperasym/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

#include "hyperasym/simd.hpp"

namespace hyperasym {

namespace {

GaussRule make_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    cplx value;
    double error;
    double abs_value;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel kronrod(const RealLineFn& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::array<cplx, 15> fv;
    std::array<double, 15> wk{}, wg{};
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        fv[j] = f(c - dx);
        fv[14 - j] = f(c + dx);
        wk[j] = wk[14 - j] = kWgk[j];
        if (j % 2 == 1) wg[j] = wg[14 - j] = kWg[j / 2];
    }
    fv[7] = f(c);
    wk[7] = kWgk[7];
    wg[7] = kWg[3];
    const cplx k15 = simd::weighted_sum(wk, fv) * h;
    const cplx g7 = simd::weighted_sum(wg, fv) * h;
    double absv = 0.0;
    for (int j = 0; j < 15; ++j) absv += wk[j] * std::abs(fv[j]);
    absv *= std::abs(h);
    return {a, b, k15, std::abs(k15 - g7), absv};
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
    return it->second;
}

Integral integrate_adaptive(const RealLineFn& f, std::span<const double> breakpoints, const QuadOptions& opts) {
    std::priority_queue<Panel> heap;
    Integral out;
    cplx total{};
    double err = 0.0, absv = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] == breakpoints[i]) continue;
        Panel p = kronrod(f, breakpoints[i], breakpoints[i + 1]);
        total += p.value;
        err += p.error;
        absv += p.abs_value;
        heap.push(p);
        out.evaluations += 15;
    }
    int intervals = static_cast<int>(heap.size());
    auto target = [&] {
        return std::max({opts.abs_tol, opts.rel_tol * std::abs(total),
                         opts.noise_floor * std::numeric_limits<double>::epsilon() * absv, 1e-300});
    };
    while (!heap.empty() && err > target()) {
        if (intervals >= opts.max_intervals) {
            out.converged = false;
            break;
        }
        Panel p = heap.top();
        const double mid = 0.5 * (p.a + p.b);
        if (mid <= p.a || mid >= p.b) {
            out.converged = false;
            break;
        }
        heap.pop();
        Panel l = kronrod(f, p.a, mid);
        Panel r = kronrod(f, mid, p.b);
        out.evaluations += 30;
        ++intervals;
        total += l.value + r.value - p.value;
        err += l.error + r.error - p.error;
        absv += l.abs_value + r.abs_value - p.abs_value;
        heap.push(l);
        heap.push(r);
    }
    // Re-sum to remove drift from the incremental updates.
    total = 0.0;
    err = 0.0;
    absv = 0.0;
    std::vector<Panel> panels;
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    for (const Panel& p : panels) {
        total += p.value;
        err += p.error;
        absv += p.abs_value;
    }
    out.value = total;
    out.error = err;
    out.abs_integral = absv;
    return out;
}

Integral integrate_adaptive(const RealLineFn& f, double a, double b, const QuadOptions& opts) {
    const std::array<double, 2> bp{a, b};
    return integrate_adaptive(f, bp, opts);
}

}  // namespace hyperasym
