#pragma once

#include <functional>

#include "cso/simplex.hpp"

namespace cso {

// Local coordinates around the interior fixed point: p = (x1-1/3, x2-1/3)
// in the chart x3 = 1 - x1 - x2.
Vec3 lift_from_chart(const Vec2& p);
Vec2 chart_from_simplex(const Vec3& x);

// Second-order data of a planar map fixing the origin whose linear part is
// a scalar multiple of the identity.
struct QuadraticMapCoefficients {
    double linear;                    // eigenvalue of the (diagonal) linear part
    Eigen::Matrix<double, 2, 3> quad; // per component: coefficients of x², xy, y²
};

// The operator in chart coordinates (exact cubic, not a truncation);
// agrees with lifting, applying the operator, and re-charting. Throws when
// the lifted point leaves the simplex.
Vec2 reduced_map(double theta, const Vec2& p);

// Second-order Taylor data of reduced_map at the origin: linear part
// (1/3+θ)·I, quadratic coefficients (1/3)(2-3θ)·(-1,2,2) and
// (1/3)(2-3θ)·(2,2,-1).
QuadraticMapCoefficients taylor_map(double theta);

// Quadratic near-identity change of variables H(p) = p + U(p) that removes
// the quadratic terms of reduced_map: U = -P/(λ-λ²) with P the quadratic
// part and λ = 1/3+θ. Undefined at θ = 2/3 where λ = 1. Valid on the ball
// ‖p‖ ≤ 0.1.
Vec2 conjugacy(double theta, const Vec2& p);

// Local inverse of the conjugacy by damped Newton iteration; accepts
// ‖q‖ ≤ 0.2, which covers images of the validity ball under one map
// application. Throws std::runtime_error if the residual cannot be
// driven below 1e-13.
Vec2 conjugacy_inverse(double theta, const Vec2& q);

// H_θ⁻¹ ∘ F_ν ∘ H_θ evaluated exactly: the composition seen by orbits
// after the change of variables adapted to parameter θ is applied to the
// map with parameter ν.
Vec2 composed_map(double theta, double nu, const Vec2& p);

// Analytic second-order coefficients of the composed map: linear part
// 1/3+ν, quadratic part (1/3)(2-3ν)·(θ-ν)/(1/3+θ) times the fixed monomial
// pattern. Zero when ν = θ (the conjugacy removes its own quadratic terms)
// and when ν = 2/3.
QuadraticMapCoefficients composed_quadratic(double theta, double nu);

// Slope v/u of the image of (x, kx) under the exact composed map. Lines
// k = 1 and k = -1/2 are invariant; for -1/2 < k < 1 and the parameter
// signs of the intermingled regime the slope drifts upward. Requires
// k ∈ [-1/2, 1] and 0 < x ≤ 1e-2.
double slope_drift(double theta, double nu, double k, double x);

// First-order-in-x prediction for slope_drift:
// k - x·c₂·(k-1)(2k+1)(k+2) with c₂ = (1/3)(2-3ν)(θ-ν)/((1/3+ν)(1/3+θ)).
double slope_drift_prediction(double theta, double nu, double k, double x);

// Edge-adapted coordinates near the sector's saddle corner:
// u1 = x1 - x2, u2 = 1 - x1 - x2; both nonnegative on the sector.
Vec2 saddle_coordinates(const Vec3& x);

// One-step image of the saddle coordinates predicted by the closed-form
// recursions with gains γ1 = (3/2)θ and γ2 = 2-(3/2)θ.
Vec2 saddle_recursion(double theta, const Vec2& u);

// Correction factors s_i defined by u_i(V_θ(x)) = γ_i·u_i·s_i: exactly
// s1 = 1 + (1/γ1-1)(u1²+3u2²) and s2 = 1 + (1/γ2-1)(4u2-u1²-3u2²). Note
// the exact linear u2 term in s2. Requires θ > 0 (γ1 vanishes at 0).
Vec2 saddle_corrections(double theta, const Vec2& u);

// Step for the fourth-order finite-difference extraction below; chosen so
// truncation and rounding both stay far below 1e-6 even where the inverse
// conjugacy has large higher derivatives (θ near 0).
inline constexpr double kFdStep = 3e-4;

// Fourth-order finite-difference second-order Taylor data of a planar map
// at the origin. The linear field is the mean of the two diagonal
// derivatives (our maps have scalar linear part).
QuadraticMapCoefficients fd_quadratic(const std::function<Vec2(const Vec2&)>& f,
                                      double h = kFdStep);

}  // namespace cso
