#include "cso/normal_form.hpp"

#include <cmath>
#include <stdexcept>

namespace cso {

namespace {

// Quadratic monomial pattern shared by the Taylor and composed maps; the
// scalar prefactor is all that changes.
Vec2 quad_pattern(const Vec2& p) {
    const double x = p(0), y = p(1);
    return {-x * x + 2.0 * x * y + 2.0 * y * y, 2.0 * x * x + 2.0 * x * y - y * y};
}

// Coefficient of the conjugacy correction U = cu(θ)·pattern. The generic
// form is -(1/3)(2-3θ)/(λ-λ²) with λ = 1/3+θ; the factor 2/3-θ cancels
// between numerator and denominator, leaving -1/(1/3+θ), which is the
// numerically stable evaluation. The θ = 2/3 exclusion stays: there the
// uncancelled expression is 0/0 and the normal form is meaningless.
double conjugacy_coefficient(double theta) {
    validate_theta(theta);
    if (theta == 2.0 / 3.0)
        throw std::domain_error(
            "conjugacy undefined at 2/3: the linear part has eigenvalue 1");
    return -1.0 / (1.0 / 3.0 + theta);
}

void require_ball(const Vec2& p, double radius, const char* what) {
    if (!(p.norm() <= radius))
        throw std::invalid_argument(std::string(what) +
                                    ": point outside the validity ball");
}

}  // namespace

Vec3 lift_from_chart(const Vec2& p) {
    return {p(0) + 1.0 / 3.0, p(1) + 1.0 / 3.0, 1.0 / 3.0 - p(0) - p(1)};
}

Vec2 chart_from_simplex(const Vec3& x) {
    return {x(0) - 1.0 / 3.0, x(1) - 1.0 / 3.0};
}

Vec2 reduced_map(double theta, const Vec2& p) {
    validate_theta(theta);
    const double x1 = p(0) + 1.0 / 3.0;
    const double x2 = p(1) + 1.0 / 3.0;
    const double x3 = 1.0 - x1 - x2;
    if (x1 < -kSimplexTol || x2 < -kSimplexTol || x3 < -kSimplexTol)
        throw std::invalid_argument("chart violation: lifted point leaves the simplex");
    // Raw map in the chart; x2+x3 = 1-x1 holds identically here, and the
    // coordinate sum is preserved exactly, so no renormalization is needed.
    const double b = 3.0 * (1.0 - theta);
    const double f1 = x1 * (x1 * x1 + 3.0 * theta * x1 * (1.0 - x1) +
                            b * (x2 * x2 + x3 * x3) + 2.0 * x2 * x3);
    const double f2 = x2 * (x2 * x2 + 3.0 * theta * x2 * (1.0 - x2) +
                            b * (x1 * x1 + x3 * x3) + 2.0 * x1 * x3);
    return {f1 - 1.0 / 3.0, f2 - 1.0 / 3.0};
}

QuadraticMapCoefficients taylor_map(double theta) {
    validate_theta(theta);
    QuadraticMapCoefficients c;
    c.linear = 1.0 / 3.0 + theta;
    const double f = (1.0 / 3.0) * (2.0 - 3.0 * theta);
    c.quad << -f, 2.0 * f, 2.0 * f,
              2.0 * f, 2.0 * f, -f;
    return c;
}

Vec2 conjugacy(double theta, const Vec2& p) {
    const double cu = conjugacy_coefficient(theta);
    require_ball(p, 0.1, "conjugacy");
    return p + cu * quad_pattern(p);
}

Vec2 conjugacy_inverse(double theta, const Vec2& q) {
    const double cu = conjugacy_coefficient(theta);
    require_ball(q, 0.2, "conjugacy_inverse");
    Vec2 p = q;
    Vec2 residual = p + cu * quad_pattern(p) - q;
    for (int it = 0; it < 50 && residual.cwiseAbs().maxCoeff() >= 1e-16; ++it) {
        // Closed-form 2x2 solve. Written out (rather than a pivoted LU) so
        // that inputs symmetric across the diagonal produce bitwise
        // symmetric steps, keeping the invariant line y = x exact.
        const double x = p(0), y = p(1);
        const double a11 = 1.0 + cu * (-2.0 * x + 2.0 * y);
        const double a12 = cu * (2.0 * x + 4.0 * y);
        const double a21 = cu * (4.0 * x + 2.0 * y);
        const double a22 = 1.0 + cu * (2.0 * x - 2.0 * y);
        const double det = a11 * a22 - a12 * a21;
        const Vec2 step((a22 * residual(0) - a12 * residual(1)) / det,
                        (a11 * residual(1) - a21 * residual(0)) / det);
        // Damping: halve the step until the residual actually shrinks.
        double scale = 1.0;
        Vec2 next = p - step;
        Vec2 next_res = next + cu * quad_pattern(next) - q;
        for (int d = 0; d < 4 && next_res.norm() > residual.norm(); ++d) {
            scale *= 0.5;
            next = p - scale * step;
            next_res = next + cu * quad_pattern(next) - q;
        }
        p = next;
        residual = next_res;
    }
    if (residual.cwiseAbs().maxCoeff() > 1e-13)
        throw std::runtime_error("conjugacy inverse: Newton residual above 1e-13");
    return p;
}

Vec2 composed_map(double theta, double nu, const Vec2& p) {
    validate_theta(nu);
    return conjugacy_inverse(theta, reduced_map(nu, conjugacy(theta, p)));
}

QuadraticMapCoefficients composed_quadratic(double theta, double nu) {
    validate_theta(nu);
    conjugacy_coefficient(theta);  // validates θ and rejects 2/3
    QuadraticMapCoefficients c;
    c.linear = 1.0 / 3.0 + nu;
    const double f =
        (1.0 / 3.0) * (2.0 - 3.0 * nu) * (theta - nu) / (1.0 / 3.0 + theta);
    c.quad << -f, 2.0 * f, 2.0 * f,
              2.0 * f, 2.0 * f, -f;
    return c;
}

double slope_drift(double theta, double nu, double k, double x) {
    if (!(k >= -0.5 && k <= 1.0))
        throw std::invalid_argument("slope parameter k must lie in [-1/2, 1]");
    if (!(x > 0.0 && x <= 1e-2))
        throw std::invalid_argument("offset x must lie in (0, 1e-2]");
    const Vec2 q = composed_map(theta, nu, Vec2(x, k * x));
    if (q(0) == 0.0)
        throw std::domain_error("image landed on the vertical axis; slope undefined");
    return q(1) / q(0);
}

double slope_drift_prediction(double theta, double nu, double k, double x) {
    const double c2 = (1.0 / 3.0) * (2.0 - 3.0 * nu) * (theta - nu) /
                      ((1.0 / 3.0 + nu) * (1.0 / 3.0 + theta));
    return k - x * c2 * (k - 1.0) * (2.0 * k + 1.0) * (k + 2.0);
}

Vec2 saddle_coordinates(const Vec3& x) {
    const Vec3 y = validate_point(x);
    return {y(0) - y(1), 1.0 - y(0) - y(1)};
}

Vec2 saddle_recursion(double theta, const Vec2& u) {
    validate_theta(theta);
    const double u1 = u(0), u2 = u(1);
    const double g1 = 1.5 * theta;
    const double g2 = 2.0 - 1.5 * theta;
    const double q = u1 * u1 + 3.0 * u2 * u2;
    return {g1 * u1 * (1.0 - q) + u1 * q,
            g2 * u2 * (1.0 - 4.0 * u2 + q) + u2 * (4.0 * u2 - q)};
}

Vec2 saddle_corrections(double theta, const Vec2& u) {
    validate_theta(theta);
    if (theta == 0.0)
        throw std::domain_error(
            "saddle_corrections needs θ > 0: the first gain vanishes at 0");
    const double u1 = u(0), u2 = u(1);
    const double g1 = 1.5 * theta;
    const double g2 = 2.0 - 1.5 * theta;
    const double q = u1 * u1 + 3.0 * u2 * u2;
    return {1.0 + (1.0 / g1 - 1.0) * q,
            1.0 + (1.0 / g2 - 1.0) * (4.0 * u2 - q)};
}

QuadraticMapCoefficients fd_quadratic(const std::function<Vec2(const Vec2&)>& f,
                                      double h) {
    if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
    const auto ev = [&](double a, double b) { return f(Vec2(a, b)); };
    const Vec2 f0 = ev(0.0, 0.0);

    // Plain central stencils carry O(h²) truncation error; one Richardson
    // step per quantity upgrades them to O(h⁴).
    const auto second = [&](int axis, double hh) -> Vec2 {
        const Vec2 fp = axis == 0 ? ev(hh, 0.0) : ev(0.0, hh);
        const Vec2 fm = axis == 0 ? ev(-hh, 0.0) : ev(0.0, -hh);
        return (fp - 2.0 * f0 + fm) / (hh * hh);
    };
    const auto cross = [&](double hh) -> Vec2 {
        return (ev(hh, hh) - ev(hh, -hh) - ev(-hh, hh) + ev(-hh, -hh)) /
               (4.0 * hh * hh);
    };
    const auto first = [&](int axis, double hh) -> Vec2 {
        const Vec2 fp = axis == 0 ? ev(hh, 0.0) : ev(0.0, hh);
        const Vec2 fm = axis == 0 ? ev(-hh, 0.0) : ev(0.0, -hh);
        return (fp - fm) / (2.0 * hh);
    };
    const Vec2 fxx = (4.0 * second(0, h) - second(0, 2.0 * h)) / 3.0;
    const Vec2 fyy = (4.0 * second(1, h) - second(1, 2.0 * h)) / 3.0;
    const Vec2 fxy = (4.0 * cross(h) - cross(2.0 * h)) / 3.0;
    const Vec2 gx = (4.0 * first(0, h) - first(0, 2.0 * h)) / 3.0;
    const Vec2 gy = (4.0 * first(1, h) - first(1, 2.0 * h)) / 3.0;

    QuadraticMapCoefficients c;
    c.linear = 0.5 * (gx(0) + gy(1));
    c.quad << 0.5 * fxx(0), fxy(0), 0.5 * fyy(0),
              0.5 * fxx(1), fxy(1), 0.5 * fyy(1);
    return c;
}

}  // namespace cso
