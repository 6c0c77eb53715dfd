#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>

// Core geometry of the 2-simplex and the cubic volterra operator family
// V_theta, theta in [0,1]. All functions are pure; everything is safe to
// call concurrently.

namespace cso {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;

// Admission tolerance for points claiming to lie on the simplex, and the
// edge tolerance used by region classification. Both sit far above
// accumulated roundoff and far below any dynamical scale.
inline constexpr double kSimplexTol = 1e-9;
inline constexpr double kEdgeTol = 1e-9;

// The seven fixed points of every V_theta: three vertices, three edge
// midpoints, and the barycenter. Undecided is the explicit "none" value.
enum class FixedPointLabel { E1, E2, E3, C12, C13, C23, Center, Undecided };
inline constexpr int kLabelCount = 8;  // including Undecided

const std::array<FixedPointLabel, 7>& fixed_points();
Vec3 fixed_point_coords(FixedPointLabel label);
const char* label_name(FixedPointLabel label);
FixedPointLabel parse_label(const std::string& name);  // throws std::invalid_argument

// Throws std::domain_error unless theta lies in [0,1].
void validate_theta(double theta);

// Admits points off the simplex by at most kSimplexTol: negatives within
// tolerance are clamped to 0 and the point is renormalized to sum 1.
// Larger violations throw std::invalid_argument.
Vec3 validate_point(const Vec3& x);
Vec3 make_point(double x1, double x2, double x3);

// The raw cubic polynomial map, with no domain checks and no
// renormalization. This is the object the analytic Jacobian differentiates;
// finite-difference probes perturb off the simplex and must use this form.
Vec3 apply_operator_raw(double theta, const Vec3& x);

// V_theta: validates the input, applies the cubic map, renormalizes the
// result to sum exactly 1 (the exact map preserves the sum, so the divisor
// is 1 + O(ulp)).
Vec3 apply_operator(double theta, const Vec3& x);

// Heredity tensor p[i][j][k][l]: probability that parents of types i,j,k
// produce type l. Row sums are 1, the entry vanishes whenever l is not
// among {i,j,k} (volterra property), and the first three indices commute.
struct HeredityTensor {
    double p[3][3][3][3];
};

HeredityTensor build_tensor(double theta);
void validate_tensor(const HeredityTensor& t);  // throws std::invalid_argument

// The 27-term sum (V(x))_l = sum_{ijk} p[i][j][k][l] x_i x_j x_k.
// Independent oracle for apply_operator; validates both arguments.
Vec3 tensor_apply(const HeredityTensor& t, const Vec3& x);

// Coordinate permutations: result[i] = x[sigma[i]].
using Permutation = std::array<int, 3>;
inline constexpr Permutation kIdentityPerm{0, 1, 2};
inline constexpr Permutation kCyclePerm{1, 2, 0};  // (x1,x2,x3) -> (x2,x3,x1)
const std::array<Permutation, 6>& all_permutations();
Vec3 permute(const Vec3& x, const Permutation& sigma);

// Which of the six ordering sectors contain x (boundary points belong to
// several), plus edge flags for the three boundary pieces of G1 and
// interior/vertex flags. Tolerance kEdgeTol throughout.
struct RegionLabel {
    std::array<bool, 6> sectors;  // G1..G6
    bool interior;                // strictly inside a single sector
    bool m12;                     // x1 = x2 >= x3
    bool m23;                     // x1 >= x2 = x3
    bool gamma12;                 // x3 = 0, x1 >= x2
    bool vertex;                  // coincides with one of the 7 fixed points
};

RegionLabel classify_region(const Vec3& x);

// Label of the unique fixed point within Euclidean distance eps of x, or
// Undecided. Requires eps < 0.1 so uniqueness is automatic (the minimal
// pairwise distance between fixed points is sqrt(1/6) ~ 0.41).
FixedPointLabel nearest_fixed_point(const Vec3& x, double eps);

}  // namespace cso
