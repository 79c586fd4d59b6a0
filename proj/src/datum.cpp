#include "hyperasym/datum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hyperasym/errors.hpp"

namespace hyperasym {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r -= kTwoPi;
    return r;
}

cplx ipow(cplx z, double q) {
    const double rq = std::round(q);
    if (rq == q && rq >= 1.0 && rq <= 64.0) {
        cplx r = 1.0;
        for (int i = 0; i < static_cast<int>(rq); ++i) r *= z;
        return r;
    }
    return std::pow(z, q);
}

double distance_to_segment_ray(cplx w, cplx start) {
    // ray {start * t : t >= 1}
    const double len = std::abs(start);
    const cplx u = start / len;
    const double proj = (w * std::conj(u)).real();
    if (proj <= len) return std::abs(w - start);
    return std::abs((w * std::conj(u)).imag());
}

template <class F>
double golden_min(F&& f, double a, double b, double& xmin, int iters = 60) {
    constexpr double g = 0.6180339887498949;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if (fc < fd) {
        xmin = c;
        return fc;
    }
    xmin = d;
    return fd;
}

}  // namespace

SingularitySet::SingularitySet(const std::vector<cplx>& points) : points_(points) {
    for (const cplx& p : points) {
        if (std::abs(p) == 0.0) throw InputError("a singular point at the origin is not allowed");
        const double ang = wrap_angle(std::arg(p));
        auto it = std::find_if(rays_.begin(), rays_.end(), [&](const SingularRay& r) {
            return circular_distance(r.angle, ang) < 1e-12;
        });
        if (it == rays_.end()) {
            rays_.push_back({ang, {}});
            it = rays_.end() - 1;
        }
        it->radii.push_back(std::abs(p));
    }
    for (auto& ray : rays_) {
        std::sort(ray.radii.begin(), ray.radii.end());
        ray.radii.erase(std::unique(ray.radii.begin(), ray.radii.end(),
                                    [](double x, double y) { return std::abs(x - y) <= 1e-14 * y; }),
                        ray.radii.end());
    }
    std::sort(rays_.begin(), rays_.end(), [](const SingularRay& a, const SingularRay& b) { return a.angle < b.angle; });
}

double SingularitySet::r() const {
    double r = kInf;
    for (const auto& ray : rays_) r = std::min(r, ray.radii.front());
    return r;
}

std::vector<cplx> SingularitySet::ray_starts() const {
    std::vector<cplx> out;
    for (const auto& ray : rays_) out.push_back(std::polar(ray.radii.front(), ray.angle));
    return out;
}

double SingularitySet::distance_to_H(cplx w) const {
    double d = kInf;
    for (const cplx& s : ray_starts()) d = std::min(d, distance_to_segment_ray(w, s));
    return d;
}

AnalyticDatum::AnalyticDatum(std::vector<PoleTerm> poles, std::vector<cplx> polynomial, std::optional<double> eps_tilde)
    : poles_(std::move(poles)), polynomial_(std::move(polynomial)) {
    std::vector<cplx> pts;
    for (const auto& p : poles_) {
        if (p.order < 1) throw InputError("pole order must be a positive integer");
        pts.push_back(p.location);
    }
    sing_ = SingularitySet(pts);
    while (!polynomial_.empty() && polynomial_.back() == 0.0) polynomial_.pop_back();
    const double r = sing_.r();
    if (eps_tilde) {
        if (!(*eps_tilde > 0.0) || !(*eps_tilde < r)) throw InputError("eps_tilde must lie in (0, r)");
        eps_tilde_ = *eps_tilde;
    } else {
        eps_tilde_ = std::isfinite(r) ? 0.1 * r : 1.0;
    }
}

AnalyticDatum AnalyticDatum::constant(cplx c) { return AnalyticDatum({}, {c}); }

int AnalyticDatum::polynomial_degree() const { return static_cast<int>(polynomial_.size()) - 1; }

cplx AnalyticDatum::eval(cplx z) const {
    cplx s = 0.0;
    for (const auto& p : poles_) {
        const cplx d = p.location - z;
        if (d == 0.0) throw SingularityError("datum evaluated at a pole");
        s += p.coefficient / ipow(d, p.order);
    }
    cplx poly = 0.0;
    for (auto it = polynomial_.rbegin(); it != polynomial_.rend(); ++it) poly = poly * z + *it;
    return s + poly;
}

std::vector<cplx> AnalyticDatum::taylor_coeffs(cplx z0, int count) const {
    std::vector<cplx> c(std::max(count, 0), 0.0);
    for (const auto& p : poles_) {
        const cplx d = p.location - z0;
        if (d == 0.0) throw SingularityError("Taylor expansion centred at a pole");
        // c (a - z0)^{-m} sum_n C(n + m - 1, m - 1) ((z - z0)/(a - z0))^n
        cplx term = p.coefficient / ipow(d, p.order);
        for (int n = 0; n < count; ++n) {
            c[n] += term;
            term *= static_cast<double>(n + p.order) / (n + 1.0) / d;
        }
    }
    // polynomial shift: repeated synthetic division by (z - z0)
    std::vector<cplx> work(polynomial_);
    for (int n = 0; n < count && !work.empty(); ++n) {
        cplx carry = 0.0;
        for (auto it = work.rbegin(); it != work.rend(); ++it) {
            carry = carry * z0 + *it;
            *it = carry;
        }
        c[n] += work.front();
        work.erase(work.begin());
    }
    return c;
}

cplx AnalyticDatum::derivative(cplx z0, int n) const {
    const auto c = taylor_coeffs(z0, n + 1);
    return c[n] * std::exp(std::lgamma(n + 1.0));
}

std::vector<double> stokes_directions(const AnalyticDatum& datum, double q, double arg_lambda) {
    std::vector<double> out;
    for (const auto& ray : datum.singularities().rays()) {
        const double s = wrap_angle(q * ray.angle - arg_lambda);
        if (std::none_of(out.begin(), out.end(), [&](double x) { return circular_distance(x, s) < 1e-12; }))
            out.push_back(circular_distance(s, 0.0) < 1e-12 ? 0.0 : s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double circular_distance(double a, double b) {
    const double d = wrap_angle(a - b);
    return std::min(d, kTwoPi - d);
}

bool Direction::admissible(double theta, double delta, const std::vector<double>& stokes) {
    return std::all_of(stokes.begin(), stokes.end(), [&](double s) { return circular_distance(theta, s) >= delta; });
}

Direction::Direction(double theta, double delta, std::vector<double> stokes)
    : theta_(wrap_angle(theta)), delta_(delta), stokes_(std::move(stokes)) {
    if (!(delta > 0.0)) throw InputError("delta must be positive");
    if (!admissible(theta_, delta_, stokes_))
        throw StokesDirectionError("direction theta=" + std::to_string(theta) + " lies within delta=" +
                                   std::to_string(delta) + " of a Stokes direction");
}

Direction Direction::heat(double theta, double delta, const AnalyticDatum& datum) {
    return Direction(theta, delta, stokes_directions(datum, 2.0, 0.0));
}

EnvelopeReport check_growth_envelope(const std::function<cplx(cplx)>& f, const SingularitySet& sing,
                                     const GrowthBound& bound, double xi, double r_max) {
    EnvelopeReport rep;
    for (double r = 0.25; r <= r_max * (1.0 + 1e-12); r *= 2.0) {
        for (int k = 0; k < 96; ++k) {
            const cplx z = std::polar(r, kTwoPi * (k + 0.5) / 96.0);
            if (sing.distance_to_H(z) < xi) continue;
            const double env = std::log(bound.C) + bound.B * std::pow(r, bound.p);
            const double lr = std::log(std::abs(f(z))) - env;
            const double ratio = std::exp(std::min(lr, 700.0));
            if (ratio > rep.worst_ratio) {
                rep.worst_ratio = ratio;
                rep.worst_point = z;
            }
        }
    }
    rep.ok = rep.worst_ratio <= 1.0 + 1e-12;
    return rep;
}

GrowthFit fit_growth_envelope(const std::function<cplx(cplx)>& f, const SingularitySet& sing, double p, double xi,
                              double r_fit) {
    GrowthFit fit;
    fit.bound.p = p;
    // log max|f| on a circle, sampled off H_xi
    auto log_max = [&](double r) {
        double m = -kInf;
        for (int k = 0; k < 96; ++k) {
            const cplx z = std::polar(r, kTwoPi * (k + 0.5) / 96.0);
            if (sing.distance_to_H(z) < xi) continue;
            m = std::max(m, std::log(std::abs(f(z))));
        }
        return m;
    };
    // B from the growth slope between the two outermost fit circles, C from all samples
    const double r1 = 0.5 * r_fit;
    const double B = std::max(0.0, (log_max(r_fit) - log_max(r1)) / (std::pow(r_fit, p) - std::pow(r1, p)));
    double logC = -kInf;
    for (double r = 0.25; r <= r_fit * (1.0 + 1e-12); r *= 2.0) logC = std::max(logC, log_max(r) - B * std::pow(r, p));
    fit.bound.B = B;
    fit.bound.C = std::exp(logC) * (1.0 + 1e-9);
    fit.validation = check_growth_envelope(f, sing, fit.bound, xi, 16.0 * r_fit);
    return fit;
}

GrowthBound growth_bound(const AnalyticDatum& datum, double p, double xi) {
    auto f = [&](cplx z) { return datum.eval(z); };
    if (datum.polynomial_degree() <= 0) {
        GrowthBound b;
        b.p = p;
        b.B = 0.0;
        for (double r = 0.25; r <= 256.0; r *= 2.0)
            for (int k = 0; k < 96; ++k) {
                const cplx z = std::polar(r, kTwoPi * (k + 0.5) / 96.0);
                if (datum.singularities().distance_to_H(z) < xi) continue;
                b.C = std::max(b.C, std::abs(datum.eval(z)));
            }
        // the xi-neighbourhood boundary of each ray start
        for (const cplx& a : datum.singularities().ray_starts())
            for (int k = 0; k < 96; ++k) b.C = std::max(b.C, std::abs(datum.eval(a + std::polar(xi, kTwoPi * k / 96.0))));
        return b;
    }
    return fit_growth_envelope(f, datum.singularities(), p, xi).bound;
}

SingularGeometry::SingularGeometry(const AnalyticDatum& datum, double theta, double q, cplx lambda,
                                   std::optional<double> eps_tilde)
    : starts_(datum.singularities().ray_starts()),
      theta_(theta),
      q_(q),
      lambda_(lambda),
      eps_tilde_(eps_tilde.value_or(datum.eps_tilde())),
      r_(datum.singularities().r()) {
    if (lambda == 0.0) throw InputError("lambda must be nonzero");
    rot_ = std::polar(1.0, -theta) / lambda;
    if (eps_tilde_ < 0.0 || (!starts_.empty() && eps_tilde_ >= r_)) throw InputError("eps_tilde must lie in [0, r)");
}

cplx SingularGeometry::image(cplx zeta, cplx z) const { return rot_ * ipow(zeta - z, q_); }

double SingularGeometry::level0_radius() const {
    if (starts_.empty()) return kInf;
    return std::pow(r_ - eps_tilde_, q_) / std::abs(lambda_);
}

double SingularGeometry::minimize(const std::function<double(cplx)>& objective, double x_max_hint) const {
    double best = kInf;
    const int n_phi = eps_tilde_ > 0.0 ? 48 : 1;
    const int n_x = 64;
    for (const cplx& a : starts_) {
        // a(1 + x), x in [0, X], squared spacing to resolve the ray start
        const double X = std::max(x_max_hint, 0.0);
        auto inner = [&](double phi) {
            const cplx z = eps_tilde_ > 0.0 ? std::polar(eps_tilde_, phi) : cplx(0.0);
            auto at = [&](double, double x) { return objective(image(a * (1.0 + x), z)); };
            double bx = 0.0, bv = kInf;
            int bi = 0;
            for (int i = 0; i <= n_x; ++i) {
                const double u = static_cast<double>(i) / n_x;
                const double x = X * u * u;
                const double v = at(phi, x);
                if (v < bv) {
                    bv = v;
                    bx = x;
                    bi = i;
                }
            }
            if (X > 0.0) {
                const double ul = std::max(0.0, (bi - 1.0) / n_x), uh = std::min(1.0, (bi + 1.0) / n_x);
                double um;
                const double v = golden_min([&](double u) { return at(phi, X * u * u); }, ul, uh, um);
                if (v < bv) bv = v;
            }
            (void)bx;
            return bv;
        };
        double bphi = 0.0, bv = kInf;
        int bj = 0;
        for (int j = 0; j < n_phi; ++j) {
            const double phi = kTwoPi * j / n_phi;
            const double v = inner(phi);
            if (v < bv) {
                bv = v;
                bphi = phi;
                bj = j;
            }
        }
        if (n_phi > 1) {
            double pm;
            const double v = golden_min(inner, kTwoPi * (bj - 1.0) / n_phi, kTwoPi * (bj + 1.0) / n_phi, pm, 50);
            if (v < bv) bv = v;
        }
        (void)bphi;
        best = std::min(best, bv);
    }
    return best;
}

double SingularGeometry::distance(cplx w) const {
    if (starts_.empty()) return kInf;
    // w is in the image iff a q-th root y of w lambda e^{i theta} lies within eps_tilde of H
    const cplx target = w * lambda_ * std::polar(1.0, theta_);
    const int nroots = static_cast<int>(std::ceil(q_ - 1e-12));
    for (int m = 0; m < nroots; ++m) {
        const cplx y = std::polar(std::pow(std::abs(target), 1.0 / q_), (std::arg(target) + kTwoPi * m) / q_);
        double dh = kInf;
        for (const cplx& a : starts_) dh = std::min(dh, distance_to_segment_ray(y, a));
        if (dh <= eps_tilde_ + 1e-13 * (1.0 + std::abs(y))) return 0.0;
    }
    // |image| >= (|a|(1+x) - eps_tilde)^q/|lambda| bounds the useful ray range
    double d0 = kInf;
    for (const cplx& a : starts_) d0 = std::min(d0, std::abs(w - image(a, 0.0)));
    double X = 0.0;
    for (const cplx& a : starts_) {
        const double need = (std::pow(std::abs(lambda_) * (std::abs(w) + d0), 1.0 / q_) + eps_tilde_) / std::abs(a) - 1.0;
        X = std::max(X, need);
    }
    return minimize([&](cplx f) { return std::abs(w - f); }, X + 1e-3);
}

double SingularGeometry::distance_to_positive_axis() const {
    if (starts_.empty()) return kInf;
    auto dist = [](cplx f) { return f.real() >= 0.0 ? std::abs(f.imag()) : std::abs(f); };
    return minimize(dist, 20.0);
}

}  // namespace hyperasym
