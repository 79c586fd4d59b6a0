#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hyperasym/borel_engine.hpp"
#include "hyperasym/errors.hpp"
#include "hyperasym/heat_engine.hpp"
#include "hyperasym/oracle.hpp"

using namespace hyperasym;
using std::numbers::pi;

namespace {

AnalyticDatum geometric() { return AnalyticDatum({{1.0, 1.0, 1}}, {}, 0.001); }

// (2k)!/k! t^k summed below N
cplx level0_sum(cplx t, int N) {
    cplx acc = 0.0, term = 1.0;
    for (int k = 0; k < N; ++k) {
        acc += term;
        term *= t * (2.0 * k + 1.0) * (2.0 * k + 2.0) / (k + 1.0);
    }
    return acc;
}

}  // namespace

TEST_CASE("heat_direct on polynomial data") {
    const AnalyticDatum one = AnalyticDatum::constant(1.0);
    for (double th : {pi, 0.3, -2.0})
        for (double t : {0.01, 0.1, 0.7})
            CHECK(std::abs(heat_direct(one, th, t, cplx(0.1, -0.2)) - 1.0) < 1e-12);

    // z^2 -> z^2 + 2t
    const AnalyticDatum sq({}, {0.0, 0.0, 1.0});
    CHECK(std::abs(heat_direct(sq, pi, 0.1, 0.0) - cplx(-0.2, 0.0)) < 1e-12);
    const cplx z(0.3, 0.4);
    for (double th : {0.0, 1.0, pi}) {
        const cplx t = std::polar(0.05, th);
        CHECK(std::abs(heat_direct(sq, th, 0.05, z) - (z * z + 2.0 * t)) < 1e-12);
    }
    // z^4 -> z^4 + 12 t z^2 + 12 t^2
    const AnalyticDatum q4({}, {0.0, 0.0, 0.0, 0.0, 1.0});
    const cplx t = std::polar(0.2, 0.5);
    CHECK(std::abs(heat_direct(q4, 0.5, 0.2, z) - (std::pow(z, 4) + 12.0 * t * z * z + 12.0 * t * t)) < 1e-12);
}

TEST_CASE("heat_direct reference value") {
    const AnalyticDatum d = geometric();
    const cplx u = heat_direct(d, pi, 1.0 / 40, 0.0);
    CHECK(std::abs(u - 0.95608661293027672695759663) < 1e-12);
    const cplx tight = heat_direct(d, pi, 1.0 / 40, 0.0, {1e-14, 50000});
    CHECK(std::abs(u - tight) < 1e-13);
    // level-0 sum is within the e^{-9.5} scale
    const double err = std::abs(u - level0_sum(-1.0 / 40, 10));
    CHECK(err < 10.0 * std::exp(-9.5));
    CHECK(err > 0.1 * std::exp(-9.5));
}

TEST_CASE("heat_direct node doubling contracts") {
    const AnalyticDatum d = geometric();
    const cplx exact = heat_direct(d, pi, 1.0 / 40, 0.0, {1e-14, 50000});
    double prev = std::abs(heat_direct_fixed(d, pi, 1.0 / 40, 0.0, 2) - exact);
    for (int panels = 4; panels <= 32; panels *= 2) {
        const double e = std::abs(heat_direct_fixed(d, pi, 1.0 / 40, 0.0, panels) - exact);
        if (prev < 1e-12) break;
        CHECK(e <= 1e-2 * prev);
        prev = e;
    }
    CHECK(prev < 1e-12);
}

TEST_CASE("heat_direct rejects bad input") {
    const AnalyticDatum d = geometric();
    CHECK_THROWS_AS(heat_direct(d, 0.0, 0.1, 0.0), StokesDirectionError);
    const AnalyticDatum off({{1.0, cplx(0.0, 0.5), 1}});
    CHECK_THROWS_AS(heat_direct(off, pi, 0.1, 0.0), StokesDirectionError);
    CHECK_NOTHROW(heat_direct(off, pi - 0.3, 0.1, 0.0));
}

TEST_CASE("simple_direct") {
    const AnalyticDatum d = geometric();
    for (double t : {1.0 / 20, 1.0 / 40, 1.0 / 60})
        CHECK(std::abs(simple_direct(SimpleEquation::heat(), d, pi, t, 0.0) - heat_direct(d, pi, t, 0.0)) < 1e-8);
    const AnalyticDatum two({{1.0, cplx(1.2, 0.4), 1}, {cplx(0.5, -0.3), cplx(-0.8, 1.1), 2}}, {}, 0.05);
    const double th = 2.2;
    CHECK(std::abs(simple_direct(SimpleEquation::heat(), two, th, 0.03, cplx(0.01, 0.02)) -
                   heat_direct(two, th, 0.03, cplx(0.01, 0.02))) < 1e-8);

    CHECK(std::abs(simple_direct(SimpleEquation::heat(), AnalyticDatum::constant(0.0), pi, 0.1, 0.0)) == 0.0);

    // polynomial data give the finite series sum_n lambda^n phi^{(qn)} t^n / n!
    SimpleEquation eq;
    eq.q = 3;
    eq.lambda = cplx(0.5, 1.0);
    const AnalyticDatum p6({}, {1.0, 0.0, 0.0, 2.0, 0.0, 0.0, 1.0});
    const cplx z(0.2, -0.1);
    const double theta = 0.4;
    const cplx t = std::polar(0.3, theta);
    const cplx lt = eq.lambda * t;
    // phi''' = 12 + 120 z^3, phi^{(6)} = 720
    const cplx exact = 1.0 + 2.0 * std::pow(z, 3) + std::pow(z, 6) + lt * (12.0 + 120.0 * std::pow(z, 3)) +
                       lt * lt * 720.0 / 2.0;
    CHECK(std::abs(simple_direct(eq, p6, theta, 0.3, z) - exact) < 1e-10 * std::abs(exact));
}

TEST_CASE("compare") {
    const ErrorReport same = compare(1.0, 1.0, 0.3);
    CHECK(same.abs_err == 0.0);
    CHECK(same.predicted_bound == 0.3);
    const ErrorReport r = compare(1.0, 1.5, 2.0, cplx(0.1, 0.0), cplx(0.0, 1.0), 2);
    CHECK(r.abs_err == doctest::Approx(0.5));
    CHECK(r.predicted_bound == 2.0);
    CHECK(r.level == 2);
    CHECK(r.z == cplx(0.0, 1.0));
}
