#pragma once

#include <cstddef>
#include <vector>

#include "cso/distribution.hpp"
#include "cso/simplex.hpp"

namespace cso {

// Derivative of the raw (unnormalized) cubic map at x. On the simplex the
// raw and normalized maps agree, and this matrix acts as the derivative of
// the normalized map on tangent vectors (components summing to zero). Its
// column sums are identically 3 on the simplex because the coordinate sum
// maps to its cube.
Mat3 jacobian(double theta, const Vec3& x);

// Tangent-plane eigenvalues at the three corners of the fundamental
// sector: Center -> {1/3+θ, 1/3+θ}, E1 -> {3(1-θ), 3(1-θ)},
// C12 -> {(3/2)θ, 2-(3/2)θ}. Other labels are rejected.
std::vector<double> vertex_eigenvalues(double theta, FixedPointLabel vertex);

// Almost-sure limit sets per region of the fundamental sector, decided by
// strict negativity of the exact Lyapunov exponents (-infinity counts as
// negative). Sets are listed in enum order (E1 before C12 before Center).
struct RegionSets {
    std::vector<FixedPointLabel> int_g1;   // candidates {E1, C12, Center}
    std::vector<FixedPointLabel> m12;      // candidates {C12, Center}
    std::vector<FixedPointLabel> m23;      // candidates {E1, Center}
    std::vector<FixedPointLabel> gamma12;  // candidates {E1, C12}
};

struct StabilityReport {
    double e1_exponent;          // E log 3(1-Θ)
    double center_exponent;      // E log(1/3+Θ)
    double saddle_in_exponent;   // E log((3/2)Θ)
    double saddle_out_exponent;  // E log(2-(3/2)Θ)
    RegionSets regions;          // empty until classify_attractors fills it
};

// Exponent fields only; regions left empty. Values may be -infinity.
StabilityReport exact_exponents(const ThetaDistribution& dist);

// Full report including the region sets. Rejects the degenerate law
// concentrated on the identity map (all mass exactly at 2/3) with a
// std::domain_error mentioning "excluded case".
StabilityReport classify_attractors(const ThetaDistribution& dist);

// Time average of log ||DV_Θ ... DV_Θ applied to a random unit tangent
// vector|| along the orbit of x0; the carried vector is renormalized and
// reprojected onto the tangent plane every 16 steps to avoid drift and
// overflow. Requires n_steps >= 1000.
double empirical_exponent(const ThetaDistribution& dist, const Vec3& x0, SeedSpec seed,
                          std::size_t n_steps);

// One row of the two-point-mixture parameter scan.
struct ScanRow {
    double center;  // mixture center: atoms at center-offset and center+offset
    double exp_e1;
    double exp_center;
    double exp_saddle_in;
    double exp_saddle_out;
    std::vector<FixedPointLabel> int_g1;
};

// Scans the family ½δ_{t-offset} + ½δ_{t+offset} for t = from, from+step,
// ..., to. Both atoms must stay inside [0,1] across the whole range.
std::vector<ScanRow> scan_two_point(double from, double to, double step, double offset);

}  // namespace cso
