#include "cso/stability.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cso {

Mat3 jacobian(double theta, const Vec3& x) {
    validate_theta(theta);
    const double a = 3.0 * theta;
    const double b = 3.0 * (1.0 - theta);
    Mat3 jac;
    for (int r = 0; r < 3; ++r) {
        const int i = r, j = (r + 1) % 3, k = (r + 2) % 3;
        const double xi = x(i), xj = x(j), xk = x(k);
        const double w = xi * xi + a * xi * (xj + xk) + b * (xj * xj + xk * xk) + 2.0 * xj * xk;
        Vec3 grad;
        grad(i) = 2.0 * xi + a * (xj + xk);
        grad(j) = a * xi + 2.0 * b * xj + 2.0 * xk;
        grad(k) = a * xi + 2.0 * b * xk + 2.0 * xj;
        for (int c = 0; c < 3; ++c) jac(r, c) = xi * grad(c) + (r == c ? w : 0.0);
    }
    return jac;
}

std::vector<double> vertex_eigenvalues(double theta, FixedPointLabel vertex) {
    validate_theta(theta);
    switch (vertex) {
        case FixedPointLabel::Center: {
            const double lam = 1.0 / 3.0 + theta;
            return {lam, lam};
        }
        case FixedPointLabel::E1: {
            const double lam = 3.0 * (1.0 - theta);
            return {lam, lam};
        }
        case FixedPointLabel::C12:
            return {1.5 * theta, 2.0 - 1.5 * theta};
        default:
            throw std::invalid_argument(
                "vertex_eigenvalues expects one of E1, C12, Center");
    }
}

StabilityReport exact_exponents(const ThetaDistribution& dist) {
    StabilityReport rep{};
    rep.e1_exponent = expect_log(dist, LogIntegrand::E1);
    rep.center_exponent = expect_log(dist, LogIntegrand::Center);
    rep.saddle_in_exponent = expect_log(dist, LogIntegrand::SaddleIn);
    rep.saddle_out_exponent = expect_log(dist, LogIntegrand::SaddleOut);
    return rep;
}

namespace {

bool concentrated_on_identity(const ThetaDistribution& dist) {
    if (!dist.intervals.empty()) return false;
    for (const auto& a : dist.atoms)
        if (a.theta != 2.0 / 3.0) return false;
    return true;
}

}  // namespace

StabilityReport classify_attractors(const ThetaDistribution& dist) {
    if (concentrated_on_identity(dist))
        throw std::domain_error(
            "excluded case: the parameter law is concentrated on 2/3, where the map "
            "is the identity and every point is fixed");
    StabilityReport rep = exact_exponents(dist);
    const bool e1_neg = rep.e1_exponent < 0.0;
    const bool cen_neg = rep.center_exponent < 0.0;
    const bool sin_neg = rep.saddle_in_exponent < 0.0;
    const bool sout_neg = rep.saddle_out_exponent < 0.0;

    if (e1_neg) rep.regions.int_g1.push_back(FixedPointLabel::E1);
    if (sin_neg && sout_neg) rep.regions.int_g1.push_back(FixedPointLabel::C12);
    if (cen_neg) rep.regions.int_g1.push_back(FixedPointLabel::Center);

    // On the median x1 = x2 the saddle attracts along the edge whenever the
    // outgoing gain contracts; on x2 = x3 only E1 and the center compete;
    // on the boundary x3 = 0 the incoming gain decides the saddle.
    if (sout_neg) rep.regions.m12.push_back(FixedPointLabel::C12);
    if (cen_neg) rep.regions.m12.push_back(FixedPointLabel::Center);

    if (e1_neg) rep.regions.m23.push_back(FixedPointLabel::E1);
    if (cen_neg) rep.regions.m23.push_back(FixedPointLabel::Center);

    if (e1_neg) rep.regions.gamma12.push_back(FixedPointLabel::E1);
    if (sin_neg) rep.regions.gamma12.push_back(FixedPointLabel::C12);

    return rep;
}

double empirical_exponent(const ThetaDistribution& dist, const Vec3& x0, SeedSpec seed,
                          std::size_t n_steps) {
    if (n_steps < 1000)
        throw std::invalid_argument("empirical_exponent needs at least 1000 steps");
    validate_distribution(dist);
    Vec3 x = validate_point(x0);
    RandomStream stream(seed);

    // Random unit vector in the tangent plane, drawn before any parameter
    // so the direction and the parameter sequence stay decoupled.
    static const Vec3 u1 = Vec3(1.0, -1.0, 0.0).normalized();
    static const Vec3 u2 = Vec3(1.0, 1.0, -2.0).normalized();
    const double phi = 2.0 * std::numbers::pi * stream.uniform01();
    Vec3 t = std::cos(phi) * u1 + std::sin(phi) * u2;

    double acc = 0.0;
    for (std::size_t n = 0; n < n_steps; ++n) {
        const double theta = stream.sample(dist);
        t = jacobian(theta, x) * t;
        x = apply_operator(theta, x);
        // Gains stay within [0,3] per step, so 16 steps cannot overflow;
        // renormalize on that cadence and fold the residual at the end.
        if (n % 16 == 15) {
            const double r = t.norm();
            acc += std::log(r);
            t /= r;
            t.array() -= t.sum() / 3.0;  // kill rounding drift off the tangent plane
        }
    }
    acc += std::log(t.norm());
    return acc / static_cast<double>(n_steps);
}

std::vector<ScanRow> scan_two_point(double from, double to, double step, double offset) {
    if (!(step > 0.0) || !(to >= from))
        throw std::invalid_argument("scan needs from <= to and step > 0");
    if (!(offset >= 0.0) || from - offset < 0.0 || to + offset > 1.0)
        throw std::invalid_argument(
            "scan atoms leave [0,1]: need 0 <= from-offset and to+offset <= 1");
    const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9));
    std::vector<ScanRow> rows;
    rows.reserve(count + 1);
    for (std::size_t i = 0; i <= count; ++i) {
        const double t = from + static_cast<double>(i) * step;
        const ThetaDistribution dist =
            offset > 0.0 ? mixture({{0.5, t - offset}, {0.5, t + offset}}, {})
                         : dirac_dist(t);
        const StabilityReport rep = classify_attractors(dist);
        rows.push_back({t, rep.e1_exponent, rep.center_exponent, rep.saddle_in_exponent,
                        rep.saddle_out_exponent, rep.regions.int_g1});
    }
    return rows;
}

}  // namespace cso
