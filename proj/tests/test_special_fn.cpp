#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hyperasym/errors.hpp"
#include "hyperasym/special_fn.hpp"

using namespace hyperasym;
using std::numbers::pi;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Airy function from the modified Bessel function, y > 0.
double airy_ai(double y) {
    if (y == 0.0) return 1.0 / (std::pow(3.0, 2.0 / 3.0) * std::tgamma(2.0 / 3.0));
    return std::sqrt(y / 3.0) * std::cyl_bessel_k(1.0 / 3.0, 2.0 / 3.0 * std::pow(y, 1.5)) / pi;
}

}  // namespace

TEST_CASE("kernel parameters") {
    const KernelParams p2 = KernelParams::from_q(2.0);
    CHECK(p2.k == 1.0);
    CHECK(p2.c_q == doctest::Approx(4.0).epsilon(1e-15));
    const KernelParams p3 = KernelParams::from_q(3.0);
    CHECK(p3.k == doctest::Approx(0.5));
    CHECK(p3.c_q == doctest::Approx(std::pow(3.0, 1.5) / 2.0).epsilon(1e-14));
    CHECK_THROWS_AS(KernelParams::from_q(1.0), InputError);
}

TEST_CASE("gamma") {
    CHECK(gamma_real(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gamma_real(0.5) == doctest::Approx(1.7724538509055160).epsilon(1e-14));
    CHECK(gamma_real(5.0) == doctest::Approx(24.0).epsilon(1e-14));
    CHECK_THROWS_AS(gamma_real(0.0), SingularityError);
    CHECK_THROWS_AS(gamma_real(-3.0), SingularityError);
    CHECK(rgamma(-2.0) == 0.0);
    CHECK(rgamma(-0.5) == doctest::Approx(-1.0 / (2.0 * std::sqrt(pi))).epsilon(1e-14));
    CHECK(rgamma(-150.5) == doctest::Approx(std::sin(pi * -150.5) * std::exp(std::lgamma(151.5)) / pi).epsilon(1e-10));
}

TEST_CASE("Mittag-Leffler examples and closed forms") {
    CHECK(rel(mittag_leffler(1.0, 1.0), std::exp(1.0)) < 1e-14);
    CHECK(rel(mittag_leffler(2.0, 1.0), std::cosh(1.0)) < 1e-14);
    CHECK(rel(mittag_leffler(2.0, 0.0), 1.0) < 1e-15);
    CHECK(rel(mittag_leffler_series(2.0, 1.0), std::cosh(1.0)) < 1e-14);
    for (double r = 0.5; r <= 10.0; r += 0.5)
        for (double a = 0.0; a < 2 * pi; a += 0.3) {
            const cplx z = std::polar(r, a);
            CHECK(std::abs(mittag_leffler(1.0, z) - std::exp(z)) <= 1e-12 * std::abs(std::exp(z)));
            CHECK(std::abs(mittag_leffler_series(1.0, z) - std::exp(z)) <= 1e-14 * std::exp(r));
            CHECK(rel(mittag_leffler(2.0, z), std::cosh(std::sqrt(z))) < 1e-12);
        }
}

TEST_CASE("Mittag-Leffler of non-integer order") {
    // E_{1/2}(x) = exp(x^2) erfc(-x)
    for (double x : {0.3, 1.0, 2.5})
        CHECK(rel(mittag_leffler(0.5, x), std::exp(x * x) * std::erfc(-x)) < 1e-11);
    // E_{1/2}(-x) = exp(x^2) erfc(x) ~ (1/(x sqrt(pi))) sum (-1)^n (2n-1)!!/(2x^2)^n
    const double x = 40.0;
    double s = 0.0, term = 1.0;
    for (int n = 0; n < 30; ++n) {
        s += term;
        term *= -(2.0 * n + 1.0) / (2.0 * x * x);
    }
    CHECK(rel(mittag_leffler(0.5, -x), s / (x * std::sqrt(pi))) < 1e-11);
    // series and asymptotic branches agree near the switch
    for (double a : {0.0, 0.7, 1.2}) {
        const cplx z = std::polar(60.0, a);
        CHECK(rel(mittag_leffler_series(1.5, z), mittag_leffler_asymptotic(1.5, z)) < 1e-9);
    }
    // asymptotic accuracy is out of reach at |z| = 29 for this order
    CHECK_THROWS_AS(mittag_leffler_asymptotic(1.5, 29.0), ConvergenceError);
    CHECK_THROWS_AS(mittag_leffler(-1.0, 1.0), InputError);
}

TEST_CASE("Mittag-Leffler derivatives") {
    for (cplx z : {cplx(0.3, 0.2), cplx(0.9, -0.1), cplx(1.5, 0.7), cplx(-6.0, 2.0), cplx(20.0, 1.0)}) {
        CHECK(rel(mittag_leffler_derivative(1, 3, z), std::exp(z)) < 1e-12);
        const cplx r = std::sqrt(z);
        CHECK(rel(mittag_leffler_derivative(2, 1, z), std::sinh(r) / (2.0 * r)) < 1e-12);
        // second derivative of cosh(sqrt z)
        const cplx d2 = std::cosh(r) / (4.0 * z) - std::sinh(r) / (4.0 * z * r);
        CHECK(rel(mittag_leffler_derivative(2, 2, z), d2) < 1e-10);
    }
    // series branch and root branch agree across |z| = 1
    for (double a = 0.1; a < 6.0; a += 0.9) {
        const cplx lo = std::polar(0.999999, a), hi = std::polar(1.000001, a);
        CHECK(rel(mittag_leffler_derivative(3, 2, lo), mittag_leffler_derivative(3, 2, hi)) < 1e-5);
    }
}

TEST_CASE("Ecalle kernel examples") {
    CHECK(ecalle_kernel(2.0, 0.0) == doctest::Approx(0.5641895835).epsilon(1e-10));
    CHECK(ecalle_kernel(2.0, 1.0) == doctest::Approx(0.4393912894).epsilon(1e-9));
    CHECK(ecalle_kernel(2.0, 2.0) == doctest::Approx(0.2075537487).epsilon(1e-9));
    CHECK_THROWS_AS(ecalle_kernel(1.0, 1.0), InputError);
}

TEST_CASE("Ecalle kernel of order 2 is the Gaussian weight") {
    double worst = 0.0;
    for (int i = 0; i <= 600; ++i) {
        const double tau = 0.01 * i;
        const double g = std::exp(-tau * tau / 4.0) / std::sqrt(pi);
        worst = std::max(worst, std::abs(ecalle_kernel_series(2.0, tau).real() - g));
    }
    CHECK(worst <= 1e-10);
    for (double tau = 1.1; tau < 40.0; tau *= 1.3) {
        const double g = std::exp(-tau * tau / 4.0) / std::sqrt(pi);
        CHECK(std::abs(ecalle_kernel_steepest(2.0, tau) - g) <= 1e-12 * g);
    }
}

TEST_CASE("Ecalle kernel of order 3 is a scaled Airy function") {
    for (double tau = 0.0; tau <= 12.0; tau += 0.37) {
        const double ref = std::pow(3.0, 2.0 / 3.0) * airy_ai(std::pow(3.0, -1.0 / 3.0) * tau);
        CHECK(std::abs(ecalle_kernel(3.0, tau) - ref) <= 1e-12 * std::max(ref, 1e-3));
        if (tau > 0.5 && tau < 5.0) CHECK(std::abs(ecalle_kernel_steepest(3.0, tau) - ref) <= 1e-12 * ref);
    }
}

TEST_CASE("Ecalle kernel series for complex argument") {
    // C_2 is entire; check the closed form off the real axis
    const cplx tau(1.0, 0.8);
    CHECK(rel(ecalle_kernel(2.0, tau), std::exp(-tau * tau / 4.0) / std::sqrt(pi)) < 1e-12);
}

TEST_CASE("gamma moments") {
    CHECK(rel(gamma_moment(0, 2.0, 0.1, 0.0), 1.0) < 1e-15);
    CHECK(rel(gamma_moment(1, 2.0, 0.1, 0.0), 0.2) < 1e-14);
    CHECK(rel(gamma_moment(2, 2.0, 0.1, pi), 0.12) < 1e-13);
    for (double q : {2.0, 3.0})
        for (double t : {0.1, 0.025})
            for (int l = 0; l <= 10; ++l) {
                CAPTURE(q);
                CAPTURE(l);
                const double exact = gamma_moment(l, q, t, 0.0).real();
                CHECK(std::abs(kernel_moment_quadrature(l, q, t) - exact) <= 1e-8 * exact);
            }
}

TEST_CASE("kernel decay bound") {
    for (double q : {2.0, 3.0}) {
        const KernelBoundFit fit = fit_kernel_bound(q);
        CAPTURE(q);
        CHECK(fit.within(2.0));
        CHECK(fit.C > 0.0);
    }
    // negative control: an exponent constant that is too small breaks the bound
    const KernelBoundFit bad = fit_kernel_bound(2.0, 6.0, 0.01, 2.0);
    CHECK_FALSE(bad.within(2.0));
}
