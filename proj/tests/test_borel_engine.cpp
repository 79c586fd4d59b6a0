#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hyperasym/borel_engine.hpp"
#include "hyperasym/errors.hpp"
#include "hyperasym/heat_engine.hpp"
#include "hyperasym/oracle.hpp"

using namespace hyperasym;
using std::numbers::pi;

namespace {

AnalyticDatum geometric(double eps_tilde = 0.001) { return AnalyticDatum({{1.0, 1.0, 1}}, {}, eps_tilde); }

AnalyticDatum two_poles() {
    return AnalyticDatum({{1.0, cplx(1.2, 0.4), 1}, {cplx(0.5, -0.3), cplx(-0.8, 1.1), 2}}, {cplx(0.2), cplx(0.0, 0.1)},
                         0.05);
}

EngineOptions reference_options() {
    EngineOptions o;
    o.eps = 0.02;
    return o;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

TEST_CASE("k-Borel transform") {
    std::vector<cplx> u(8);
    for (int n = 0; n < 8; ++n) u[n] = factorial(n);
    const std::vector<cplx> v = borel_transform(u, 2);
    for (int n = 0; n < 8; ++n) CHECK(std::abs(v[n] - factorial(n) / factorial(2 * n)) < 1e-14 * std::abs(v[n]));
    for (int q : {2, 3})
        for (int l = 0; l <= 6; ++l) {
            std::vector<cplx> m(l + 1, 0.0);
            m[l] = factorial(l);
            const cplx c = borel_transform(m, q)[l];
            CHECK(std::abs(c - factorial(l) / std::tgamma(1.0 + q * l)) < 1e-14 * std::abs(c));
        }
    // heat, phi = 1/(1-z), z = 0: all coefficients 1
    const BorelFunction v0(SimpleEquation::heat(), geometric(), 0.0);
    for (int n = 0; n < 20; ++n) CHECK(std::abs(v0.coefficient(n) - 1.0) < 1e-13);
}

TEST_CASE("Borel function closed form, series and integral") {
    const BorelFunction v(SimpleEquation::heat(), geometric(), 0.0);
    for (cplx T : {cplx(0.25), cplx(0.1, 0.3), cplx(-0.5, 0.2), cplx(3.0, 1.0)})
        CHECK(std::abs(v(T) - 1.0 / (1.0 - T)) < 1e-14 * std::abs(1.0 / (1.0 - T)));
    CHECK(std::abs(v.series(0.25) - 4.0 / 3.0) < 1e-14);
    CHECK(std::abs(v.integral(0.25) - 4.0 / 3.0) < 1e-6);
    CHECK(std::abs(v(0.0) - 1.0) < 1e-15);
    CHECK(v.radius() == doctest::Approx(0.999 * 0.999));

    // q = 3, complex lambda, two poles plus a polynomial part
    SimpleEquation eq;
    eq.q = 3;
    eq.lambda = cplx(1.0, 0.5);
    const AnalyticDatum d = two_poles();
    const cplx z(0.02, -0.01);
    const BorelFunction w(eq, d, z);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ur(0.05, 0.9), ua(0.0, 2.0 * pi);
    for (int i = 0; i < 10; ++i) {
        const cplx T = std::polar(ur(rng) * w.radius(), ua(rng));
        const cplx s = w.series(T);
        CHECK(std::abs(w(T) - s) <= 1e-10 * std::abs(s));
        CHECK(std::abs(w.integral(T) - s) <= 1e-6 * std::abs(s));
    }
    CHECK_THROWS_AS(w.integral(2.0 * w.radius()), InputError);
}

TEST_CASE("beta = 2") {
    SimpleEquation eq;
    eq.beta = 2;
    const AnalyticDatum d = geometric(0.1);
    const cplx z(0.01, 0.02);
    const BorelFunction v(eq, d, z);
    CHECK(v.coefficient(0) == 0.0);
    const std::vector<cplx> c = d.taylor_coeffs(z, 12);
    for (int j = 1; j < 6; ++j) CHECK(std::abs(v.coefficient(j) - static_cast<double>(j) * c[2 * j]) < 1e-12);
    CHECK(v(0.0) == 0.0);
    CHECK(v.integral(0.0) == 0.0);
    for (cplx T : {cplx(0.05), cplx(0.2, 0.1), cplx(-0.3, 0.2), cplx(0.6)}) {
        const cplx s = v.series(T);
        CHECK(std::abs(v(T) - s) <= 1e-11 * std::abs(s));
        CHECK(std::abs(v.integral(T) - s) <= 1e-6 * std::abs(s));
    }
    // beyond the series disc the closed form is the only path; compare with the derivative of the beta = 1 case
    const BorelFunction v1(SimpleEquation::heat(), d, z);
    for (cplx T : {cplx(2.0, 1.0), cplx(-3.0, 0.5)}) {
        const cplx h = 1e-4 * std::abs(T);
        const cplx deriv = (v1(T + h) - v1(T - h)) / (2.0 * h);
        CHECK(std::abs(v(T) - T * deriv) <= 1e-7 * std::abs(v(T)));
    }

    // the formal solution satisfies (d_t - lambda d_z^q)^beta u = 0 coefficientwise:
    // sum_i binom(beta, i) (-lambda)^{beta-i} d_z^{q(beta-i)} u_{n+i} = 0
    SimpleEquation e3;
    e3.q = 3;
    e3.beta = 3;
    e3.lambda = cplx(0.7, -0.4);
    const AnalyticDatum dd = two_poles();
    const int count = 8;
    const std::vector<cplx> u = formal_solution(e3, dd, z, count);
    for (int n = 0; n + e3.beta < count; ++n) {
        // u_m = binom(m, beta-1) lambda^m phi^{(qm)}, so d_z^{q(beta-i)} u_{n+i} = u_{n+i} phi^{(q(n+beta))} / phi^{(q(n+i))}
        cplx acc = 0.0;
        double scale = 0.0;
        const cplx top = dd.derivative(z, e3.q * (n + e3.beta));
        for (int i = 0; i <= e3.beta; ++i) {
            const double binom_b = std::tgamma(e3.beta + 1.0) / (std::tgamma(i + 1.0) * std::tgamma(e3.beta - i + 1.0));
            const double binom_u = (n + i) >= e3.beta - 1
                                       ? std::tgamma(n + i + 1.0) /
                                             (std::tgamma(e3.beta + 0.0) * std::tgamma(n + i - e3.beta + 2.0))
                                       : 0.0;
            const cplx term = binom_b * std::pow(-e3.lambda, e3.beta - i) * binom_u * std::pow(e3.lambda, n + i) * top;
            acc += term;
            scale += std::abs(term);
            // the library coefficients agree with the closed form
            const cplx lib = u[n + i];
            const cplx ref = binom_u * std::pow(e3.lambda, n + i) * dd.derivative(z, e3.q * (n + i));
            CHECK(std::abs(lib - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
        }
        CHECK(std::abs(acc) <= 1e-12 * scale);
    }
}

TEST_CASE("Laplace summation") {
    // round trip on monomials
    for (int q : {2, 3})
        for (int l = 0; l <= 6; ++l) {
            const double c = factorial(l) / std::tgamma(1.0 + q * l);
            const double theta = 0.4, t = 0.1;
            const cplx got = laplace_sum([&](cplx s) { return c * std::pow(s, l); }, q, theta, t);
            const cplx want = std::pow(std::polar(t, theta), l);
            CHECK(std::abs(got - want) <= 1e-8 * std::abs(want));
        }
    CHECK(laplace_sum([](cplx) { return cplx(0.0); }, 3, 1.0, 0.2) == 0.0);
    // heat specialization against the line integral
    const AnalyticDatum d = geometric(0.1);
    for (double theta : {pi, 2.0}) {
        const cplx z(0.02, 0.01);
        const BorelFunction v(SimpleEquation::heat(), d, z);
        const cplx got = laplace_sum([&](cplx s) { return v(s); }, 2, theta, 0.03);
        const cplx want = heat_direct(d, theta, 0.03, z);
        CHECK(std::abs(got - want) <= 1e-6 * std::abs(want));
    }
    // growth beyond the kernel decay is reported
    CHECK_THROWS_AS(laplace_sum([](cplx s) { return std::exp(s * s); }, 2, 0.0, 1.0), ConvergenceError);
}

TEST_CASE("generalized schedule") {
    const LaplaceKernel e2 = LaplaceKernel::ecalle(2);
    const TruncationSchedule s = level0_schedule(1.0 / 40, 1.0, 0.02, 0.0, e2);
    CHECK(s.Ns[0] == 10);
    CHECK(s.sigmas[0] == doctest::Approx(0.95).epsilon(1e-14));
    CHECK(e2.c_q() == 4.0);

    // q = 3: k = 1/2, c_q = 3 sqrt(3) / 2
    const LaplaceKernel e3 = LaplaceKernel::ecalle(3);
    CHECK(e3.c_q() == doctest::Approx(1.5 * std::sqrt(3.0)).epsilon(1e-14));
    const double t = 0.001;
    const double L = 1.0 / (1.5 * std::sqrt(3.0) * std::sqrt(t));
    const TruncationSchedule s3 = level0_schedule(t, 1.0, 0.02, 0.0, e3);
    CHECK(s3.Ns[0] == static_cast<int>(std::floor(0.5 * L + 2.0 / 3.0)));
    CHECK(s3.Ns[0] == 6);
    CHECK(s3.sigmas[0] == doctest::Approx(std::pow((6.0 - 2.0 / 3.0) / (0.5 * L), 2.0)).epsilon(1e-13));
    CHECK(s3.sigmas[0] <= 1.0);

    // q = 2 reduces to the heat formulas, integer for integer
    const AnalyticDatum d = geometric();
    const HeatEngine heat(d, Direction::heat(pi, 0.1, d), reference_options());
    const BorelEngine gen(SimpleEquation::heat(), d, BorelEngine::direction(SimpleEquation::heat(), d, pi, 0.1),
                          reference_options());
    for (int i = 0; i < 20; ++i) {
        const double ti = 1.0 / (12.0 + 3.0 * i);
        const TruncationSchedule a = heat.schedule(ti, 1), b = gen.schedule(ti, 1);
        CHECK(a.Ns == b.Ns);
        CHECK(a.sigmas[0] == doctest::Approx(b.sigmas[0]).epsilon(1e-14));
        CHECK(a.sigmas[1] == doctest::Approx(b.sigmas[1]).epsilon(1e-12));
    }
    // the generalized critical condition is the heat condition at q = 2
    const TruncationSchedule h = heat.schedule(1.0 / 40, 1);
    for (double x : {1.2, 2.0, 3.7, 8.0})
        CHECK(critical_residual(h, LaplaceKernel::gaussian(), 13, x) ==
              doctest::Approx(critical_residual(h, e2, 13, x)).epsilon(1e-14));
    // interlacing for n = 1
    TruncationSchedule h0 = heat.level0_schedule(1.0 / 40);
    h0.big_radii.push_back(h.big_radii[1]);
    const NextTruncation nt = gen.next_truncation(h0);
    CHECK(nt.sigma > h0.sigmas[0]);
    int changes = 0;
    double prev = critical_residual(h0, e2, nt.N, 1e-6);
    for (int i = 1; i < 1000; ++i) {
        const double r = critical_residual(h0, e2, nt.N, 0.95 * i / 1000.0);
        if ((r > 0) != (prev > 0)) ++changes;
        prev = r;
    }
    CHECK(changes == 1);
}

TEST_CASE("generalized expansion agrees with the heat engine") {
    const AnalyticDatum d = geometric();
    const HeatEngine heat(d, Direction::heat(pi, 0.1, d), reference_options());
    const BorelEngine gen(SimpleEquation::heat(), d, BorelEngine::direction(SimpleEquation::heat(), d, pi, 0.1),
                          reference_options());
    for (double t : {1.0 / 20, 1.0 / 30, 1.0 / 40, 1.0 / 50, 1.0 / 60})
        for (int n = 0; n <= 2; ++n) {
            const cplx a = heat.hyper_expand(t, 0.0, n).expansion.value;
            const cplx b = gen.hyper_expand(t, 0.0, n).expansion.value;
            CHECK(std::abs(a - b) <= 1e-6 * std::abs(a));
        }
    const double t = 1.0 / 40;
    const cplx u = simple_direct(SimpleEquation::heat(), d, pi, t, 0.0);
    const double e0 = std::abs(gen.hyper_expand(t, 0.0, 0).expansion.value - u);
    const double e1 = std::abs(gen.hyper_expand(t, 0.0, 1).expansion.value - u);
    CHECK(e1 < e0);
    CHECK_THROWS_AS(BorelEngine::direction(SimpleEquation::heat(), d, 0.05, 0.1), StokesDirectionError);
}

TEST_CASE("beta = 2 leading sum") {
    SimpleEquation eq;
    eq.beta = 2;
    const AnalyticDatum d = geometric(0.1);
    const BorelEngine gen(eq, d, BorelEngine::direction(eq, d, pi, 0.1));
    const std::vector<cplx> b = gen.b0(0.0, 6);
    CHECK(b[0] == 0.0);
    for (int j = 1; j < 6; ++j) CHECK(std::abs(b[j] - static_cast<double>(j) * std::polar(1.0, j * pi)) < 1e-12);
    // u = t d/dt of the heat solution
    const double t = 1.0 / 40, h = 1e-4 * t;
    const cplx heat_dt = (heat_direct(d, pi, t + h, 0.0) - heat_direct(d, pi, t - h, 0.0)) / (2.0 * h);
    const cplx u = simple_direct(eq, d, pi, t, 0.0);
    CHECK(std::abs(u - t * heat_dt) <= 1e-6 * std::abs(u));
    const double e0 = std::abs(gen.hyper_expand(t, 0.0, 0).expansion.value - u);
    const HyperResult r1 = gen.hyper_expand(t, 0.0, 1);
    CHECK(std::abs(r1.expansion.value - u) < e0);
    CHECK(std::abs(r1.expansion.value + r1.remainder.value - u) <= 1e-6 * std::abs(u));
}

TEST_CASE("q = 3 expansion") {
    SimpleEquation eq;
    eq.q = 3;
    const AnalyticDatum d = geometric(0.1);
    BorelEngine gen(eq, d, BorelEngine::direction(eq, d, pi, 0.1));
    const std::vector<double> grid{0.002, 0.0015, 0.001, 0.0007, 0.0005};
    for (double t : grid) {
        const cplx u = simple_direct(eq, d, pi, t, 0.0);
        double prev = 1e300;
        for (int n = 0; n <= 2; ++n) {
            const HyperResult r = gen.hyper_expand(t, 0.0, n);
            const double err = std::abs(r.expansion.value - u);
            CHECK(err < prev);
            prev = err;
            CHECK(std::abs(r.expansion.value + r.remainder.value - u) <= 1e-6 * std::abs(u));
        }
    }
    // bound envelope after calibration at the largest |t|
    for (int n = 0; n <= 1; ++n) {
        gen.calibrate(n, grid.front(), 0.0);
        for (double t : grid) {
            const HyperResult r = gen.hyper_expand(t, 0.0, n);
            CHECK(std::abs(r.remainder.value) <= 2.0 * r.remainder.bound);
        }
    }
}
