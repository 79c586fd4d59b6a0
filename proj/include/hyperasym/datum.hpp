#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace hyperasym {

using cplx = std::complex<double>;

// c / (a - z)^order
struct PoleTerm {
    cplx coefficient;
    cplx location;
    int order = 1;
};

struct SingularRay {
    double angle = 0.0;           // in [0, 2 pi)
    std::vector<double> radii;    // strictly increasing
};

class SingularitySet {
public:
    SingularitySet() = default;
    explicit SingularitySet(const std::vector<cplx>& points);

    const std::vector<SingularRay>& rays() const { return rays_; }
    const std::vector<cplx>& points() const { return points_; }
    std::size_t K() const { return rays_.size(); }
    bool empty() const { return rays_.empty(); }
    // min |a_{i1}|; infinity when empty
    double r() const;
    // first point a_{i1} of each ray
    std::vector<cplx> ray_starts() const;
    // distance from w to H = union of {a_{i1} t : t >= 1}
    double distance_to_H(cplx w) const;

private:
    std::vector<SingularRay> rays_;
    std::vector<cplx> points_;
};

class AnalyticDatum {
public:
    AnalyticDatum(std::vector<PoleTerm> poles, std::vector<cplx> polynomial = {},
                  std::optional<double> eps_tilde = std::nullopt);

    static AnalyticDatum constant(cplx c);

    cplx operator()(cplx z) const { return eval(z); }
    cplx eval(cplx z) const;
    // phi^{(n)}(z0) / n! for n < count
    std::vector<cplx> taylor_coeffs(cplx z0, int count) const;
    cplx derivative(cplx z0, int n) const;

    const std::vector<PoleTerm>& poles() const { return poles_; }
    const std::vector<cplx>& polynomial() const { return polynomial_; }
    const SingularitySet& singularities() const { return sing_; }
    double eps_tilde() const { return eps_tilde_; }
    bool is_entire() const { return poles_.empty(); }
    int polynomial_degree() const;

private:
    std::vector<PoleTerm> poles_;
    std::vector<cplx> polynomial_;
    SingularitySet sing_;
    double eps_tilde_;
};

// Sorted, de-duplicated {q lambda_i - arg_lambda mod 2 pi}.
std::vector<double> stokes_directions(const AnalyticDatum& datum, double q, double arg_lambda);

double circular_distance(double a, double b);

class Direction {
public:
    // Throws StokesDirectionError when theta is within delta of a Stokes direction.
    Direction(double theta, double delta, std::vector<double> stokes);
    static Direction heat(double theta, double delta, const AnalyticDatum& datum);

    double theta() const { return theta_; }
    double delta() const { return delta_; }
    const std::vector<double>& stokes() const { return stokes_; }
    static bool admissible(double theta, double delta, const std::vector<double>& stokes);

private:
    double theta_, delta_;
    std::vector<double> stokes_;
};

struct GrowthBound {
    double C = 0.0;
    double B = 0.0;
    double p = 2.0;
};

struct EnvelopeReport {
    bool ok = true;
    double worst_ratio = 0.0;   // max |f| / (C e^{B|z|^p})
    cplx worst_point{};
};

// Samples |f| on circles off the xi-neighbourhood of the rays.
EnvelopeReport check_growth_envelope(const std::function<cplx(cplx)>& f, const SingularitySet& sing,
                                     const GrowthBound& bound, double xi = 0.05, double r_max = 256.0);

// Fits (C, B) on |z| <= r_fit and validates on larger circles; ok = false when the
// envelope cannot hold for the requested growth order.
struct GrowthFit {
    GrowthBound bound;
    EnvelopeReport validation;
};
GrowthFit fit_growth_envelope(const std::function<cplx(cplx)>& f, const SingularitySet& sing, double p,
                              double xi = 0.05, double r_fit = 16.0);

// For pole data B = 0 and C = max sampled |phi| off H_xi.
GrowthBound growth_bound(const AnalyticDatum& datum, double p, double xi = 0.05);

// Image of the singular rays under zeta -> e^{-i theta} (zeta - z)^q / lambda, z in the disc of
// radius eps_tilde.
class SingularGeometry {
public:
    SingularGeometry(const AnalyticDatum& datum, double theta, double q = 2.0, cplx lambda = 1.0,
                     std::optional<double> eps_tilde = std::nullopt);

    double distance(cplx w) const;
    // inf over the image of dist(., [0, inf))
    double distance_to_positive_axis() const;
    // r^q / |lambda| with r = min |a_{i1}| - eps_tilde
    double level0_radius() const;
    cplx image(cplx zeta, cplx z) const;

    double theta() const { return theta_; }
    double q() const { return q_; }
    cplx lambda() const { return lambda_; }
    double eps_tilde() const { return eps_tilde_; }
    const std::vector<cplx>& starts() const { return starts_; }

private:
    double minimize(const std::function<double(cplx)>& objective, double scale_hint) const;

    std::vector<cplx> starts_;
    double theta_, q_;
    cplx lambda_;
    cplx rot_;   // e^{-i theta} / lambda
    double eps_tilde_;
    double r_;
};

}  // namespace hyperasym
