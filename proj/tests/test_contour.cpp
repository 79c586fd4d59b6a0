#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hyperasym/contour.hpp"
#include "hyperasym/errors.hpp"

using namespace hyperasym;
using std::numbers::pi;

namespace {

AnalyticDatum geometric(double eps_tilde) { return AnalyticDatum({{1.0, 1.0, 1}}, {}, eps_tilde); }

}  // namespace

TEST_CASE("two-disc boundary geometry") {
    // s outside the big disc: two arcs
    const ContourSpec c = two_disc_boundary(0.0, 1.0, 1.02, 0.05);
    CHECK(c.arcs.size() == 2);
    CHECK(c.winding_number(0.0) == 1);
    CHECK(c.winding_number(1.02) == 1);
    CHECK(c.winding_number(1.08) == 0);
    // s deep inside: single circle
    const ContourSpec d = two_disc_boundary(0.0, 1.0, 0.5, 0.05);
    REQUIRE(d.arcs.size() == 1);
    CHECK(d.arcs[0].full_circle());
    CHECK(d.winding_number(0.5) == 1);
    // disjoint discs: two full circles
    const ContourSpec e = two_disc_boundary(0.0, 1.0, 1.2, 0.05);
    REQUIRE(e.arcs.size() == 2);
    CHECK(e.arcs[1].full_circle());
    CHECK(e.winding_number(1.2) == 1);
    CHECK(e.winding_number(0.0) == 1);
    // arcs join continuously
    const Arc& a0 = c.arcs[0];
    const Arc& a1 = c.arcs[1];
    CHECK(std::abs(a0.point(a0.start + a0.sweep) - a1.point(a1.start)) < 1e-12);
    CHECK(std::abs(a1.point(a1.start + a1.sweep) - a0.point(a0.start)) < 1e-12);
    CHECK_THROWS_AS(two_disc_boundary(0.0, 0.0, 1.0, 0.1), GeometryError);
}

TEST_CASE("omega builder") {
    // r = 1.1 - 0.0, eps = 0.21 gives level-0 radius r^2 - eps = 1
    const AnalyticDatum d({{1.0, std::sqrt(1.21) + 1e-3, 1}}, {}, 1e-3);
    const SingularGeometry g(d, pi, 2.0, 1.0);
    const double eps = g.level0_radius() - 1.0;
    const ContourSpec c = build_omega(0, 0.0, 1.2, eps, g);
    CHECK(c.big_radius == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.small_radius == doctest::Approx(eps / 2));
    CHECK(c.arcs.size() == 2);
    const ContourSpec in = build_omega(0, 0.0, 0.5, eps, g);
    CHECK(in.arcs.size() == 1);
    CHECK(omega_rho(0) == 1.0);
    CHECK(omega_rho(3) == 1.875);
    const ContourSpec c1 = build_omega(1, 0.95, 2.0, 0.02, SingularGeometry(geometric(0.001), pi));
    CHECK(c1.big_radius == doctest::Approx(0.95 + 0.999 * 0.999 - 1.5 * 0.02).epsilon(1e-10));
    CHECK(c1.small_radius == doctest::Approx(0.005));
    CHECK_THROWS_AS(build_omega(0, 0.0, 1.0, 5.0, g), GeometryError);
}

TEST_CASE("residue calculus") {
    const ContourSpec unit = two_disc_boundary(0.0, 1.0, 0.0, 0.5);
    CHECK(std::abs(cauchy_integral(unit, [](cplx w) { return 1.0 / w; }) - 1.0) < 1e-14);
    CHECK(std::abs(integrate(unit, [](cplx w) { return w; }).value) < 1e-14);
    const std::vector<ContourSpec> shapes{two_disc_boundary(0.3, 1.0, 1.1, 0.2), two_disc_boundary(0.3, 1.0, 2.0, 0.3),
                                          two_disc_boundary(0.3, 0.7, 0.35, 0.1)};
    for (const ContourSpec& c : shapes)
        for (cplx sigma : {cplx(0.3, 0.0), cplx(0.5, 0.2)})
            for (int j = 0; j < 5; ++j) {
                const cplx v = cauchy_integral(c, [&](cplx w) { return std::pow(w - sigma, -j - 1); });
                CHECK(std::abs(v - (j == 0 ? 1.0 : 0.0)) < 1e-10);
            }
}

TEST_CASE("trapezoid rule converges spectrally on circles") {
    const Arc a{0.0, 1.0, 0.0, 2 * pi};
    auto f = [](cplx w) { return std::exp(w) / (w * (w - 1.6)); };
    // only the pole at 0 is inside the unit circle
    const cplx exact = cplx(0.0, 2 * pi) * (1.0 / -1.6);
    ContourOptions o;
    o.rel_tol = 1.0;
    double prev = 0.0;
    for (int M : {4, 8, 16}) {
        o.initial_nodes = M;
        const double err = std::abs(integrate(a, f, o).value - exact);
        if (prev > 0.0 && err > 1e-14) CHECK(prev / err >= 10.0);
        prev = err;
    }
    CHECK(std::abs(integrate(a, f).value - exact) < 1e-13);
    ContourOptions tight;
    tight.max_nodes = 128;
    CHECK_THROWS_AS(integrate(Arc{0.0, 1.0, 0.0, 2 * pi}, [](cplx w) { return 1.0 / (w - 1.0001); }, tight),
                    ConvergenceError);
}

TEST_CASE("first remainder of the geometric datum by contour integration") {
    const SingularGeometry g(geometric(0.001), pi);
    const double eps = 0.02;
    auto f0 = [](cplx x) { return 1.0 / (1.0 + x); };
    for (int N0 : {2, 5})
        for (double s : {1.0, 0.98, 0.5, 3.0}) {
            const ContourSpec c = build_omega(0, 0.0, s, eps, g);
            const cplx v = cauchy_integral(c, [&](cplx x) { return f0(x) / (std::pow(x, N0) * (x - s)); });
            CAPTURE(N0);
            CAPTURE(s);
            CHECK(std::abs(v - std::pow(-1.0, N0) / (1.0 + s)) < 1e-11);
        }
}

TEST_CASE("clearance on random chains") {
    const double eps = 0.02;
    const SingularGeometry ref(geometric(0.001), pi);
    const std::vector<double> sig{0.95, 2.8874393189583733, 6.6884011534473113};
    const AnalyticDatum two({{1.0, cplx(1.0, 0.8), 1}, {cplx(0.0, 1.0), cplx(-1.5, 0.4), 2}}, {}, 0.05);
    const Direction dir = Direction::heat(4.0, 0.1, two);
    const SingularGeometry g2(two, dir.theta());
    const double eps2 = 0.25 * std::min(g2.level0_radius() / 4.0, 0.5 * g2.distance_to_positive_axis());
    const std::vector<double> sig2{0.4 * g2.level0_radius(), 1.5 * g2.level0_radius()};
    std::vector<double> radii{omega_big_radius(0, 0.0, eps, ref)}, radii2{omega_big_radius(0, 0.0, eps2, g2)};
    for (std::size_t k = 0; k < sig.size(); ++k) radii.push_back(omega_big_radius(k + 1, sig[k], eps, ref));
    for (std::size_t k = 0; k < sig2.size(); ++k) radii2.push_back(omega_big_radius(k + 1, sig2[k], eps2, g2));
    // the overload that computes the radii itself
    std::mt19937_64 rng0(1);
    CHECK(clearance_check(sample_chain(2.0, sig, eps, ref, rng0), eps, ref));
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int passed = 0;
    for (int i = 0; i < 1000; ++i) {
        const int n = static_cast<int>(u(rng) * 4);
        const double s = 10.0 * u(rng);
        const auto chain = sample_chain(s, std::span(sig).first(n), std::span(radii).first(n + 1), eps, rng);
        passed += clearance_check(chain, eps, ref);
    }
    CHECK(passed == 1000);
    passed = 0;
    for (int i = 0; i < 1000; ++i) {
        const int n = static_cast<int>(u(rng) * 3);
        const double s = 3.0 * u(rng);
        const auto chain = sample_chain(s, std::span(sig2).first(n), std::span(radii2).first(n + 1), eps2, rng);
        passed += clearance_check(chain, eps2, g2);
    }
    CHECK(passed == 1000);
}

TEST_CASE("clearance examples") {
    const double eps = 0.02;
    const SingularGeometry ref(geometric(0.001), pi);
    // small-disc hops only
    const std::vector<cplx> hops{cplx(1.0, 0.0) + std::polar(eps / 2, 2.0) + std::polar(eps / 4, 1.0), 1.0 + std::polar(eps / 4, 1.0), 1.0};
    CHECK(clearance_check(hops, eps, ref));
    // hitting the level-1 big circle
    const double R1 = omega_big_radius(1, 0.95, eps, ref);
    const cplx x1 = 0.95 + std::polar(R1, pi);
    CHECK(ref.distance(x1) >= omega_rho(1) * eps - 1e-12);
    CHECK(clearance_check(std::vector<cplx>{x1 + std::polar(eps / 2, 0.3), x1, 2.0}, eps, ref));
    // negative control: x0 next to the singular image
    CHECK_FALSE(clearance_check(std::vector<cplx>{cplx(-0.99, 0.005), 0.5}, eps, ref));
}
