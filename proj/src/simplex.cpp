#include "cso/simplex.hpp"

#include <cmath>
#include <stdexcept>

namespace cso {

const std::array<FixedPointLabel, 7>& fixed_points() {
    static const std::array<FixedPointLabel, 7> pts = {
        FixedPointLabel::E1,  FixedPointLabel::E2,  FixedPointLabel::E3,
        FixedPointLabel::C12, FixedPointLabel::C13, FixedPointLabel::C23,
        FixedPointLabel::Center};
    return pts;
}

Vec3 fixed_point_coords(FixedPointLabel label) {
    switch (label) {
        case FixedPointLabel::E1: return {1.0, 0.0, 0.0};
        case FixedPointLabel::E2: return {0.0, 1.0, 0.0};
        case FixedPointLabel::E3: return {0.0, 0.0, 1.0};
        case FixedPointLabel::C12: return {0.5, 0.5, 0.0};
        case FixedPointLabel::C13: return {0.5, 0.0, 0.5};
        case FixedPointLabel::C23: return {0.0, 0.5, 0.5};
        case FixedPointLabel::Center: return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
        case FixedPointLabel::Undecided: break;
    }
    throw std::invalid_argument("Undecided has no coordinates");
}

const char* label_name(FixedPointLabel label) {
    switch (label) {
        case FixedPointLabel::E1: return "E1";
        case FixedPointLabel::E2: return "E2";
        case FixedPointLabel::E3: return "E3";
        case FixedPointLabel::C12: return "C12";
        case FixedPointLabel::C13: return "C13";
        case FixedPointLabel::C23: return "C23";
        case FixedPointLabel::Center: return "Center";
        case FixedPointLabel::Undecided: return "Undecided";
    }
    return "?";
}

FixedPointLabel parse_label(const std::string& name) {
    for (int i = 0; i < kLabelCount; ++i) {
        auto label = static_cast<FixedPointLabel>(i);
        if (name == label_name(label)) return label;
    }
    throw std::invalid_argument("unknown fixed-point label: " + name);
}

void validate_theta(double theta) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::domain_error("theta must lie in [0,1]");
}

Vec3 validate_point(const Vec3& x) {
    if (!x.allFinite())
        throw std::invalid_argument("simplex point has a non-finite coordinate");
    if (x.minCoeff() < -kSimplexTol)
        throw std::invalid_argument("simplex point has a negative coordinate");
    if (std::abs(x.sum() - 1.0) > kSimplexTol)
        throw std::invalid_argument("simplex point coordinates do not sum to 1");
    Vec3 y = x.cwiseMax(0.0);
    return y / y.sum();
}

Vec3 make_point(double x1, double x2, double x3) {
    return validate_point(Vec3(x1, x2, x3));
}

Vec3 apply_operator_raw(double theta, const Vec3& x) {
    const double a = 3.0 * theta;
    const double b = 3.0 * (1.0 - theta);
    const double x1 = x(0), x2 = x(1), x3 = x(2);
    const double w1 = x1 * x1 + a * x1 * (x2 + x3) + b * (x2 * x2 + x3 * x3) + 2.0 * x2 * x3;
    const double w2 = x2 * x2 + a * x2 * (x3 + x1) + b * (x3 * x3 + x1 * x1) + 2.0 * x3 * x1;
    const double w3 = x3 * x3 + a * x3 * (x1 + x2) + b * (x1 * x1 + x2 * x2) + 2.0 * x1 * x2;
    return {x1 * w1, x2 * w2, x3 * w3};
}

Vec3 apply_operator(double theta, const Vec3& x) {
    validate_theta(theta);
    Vec3 v = apply_operator_raw(theta, validate_point(x));
    return v / v.sum();
}

HeredityTensor build_tensor(double theta) {
    validate_theta(theta);
    HeredityTensor t{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    const int matches = (i == l) + (j == l) + (k == l);
                    double v = 0.0;
                    if (matches == 3) {
                        v = 1.0;
                    } else if (matches == 2) {
                        v = theta;
                    } else if (matches == 1) {
                        // l appears once among the parents; the value depends
                        // on whether the other two parents form a pair.
                        const bool pair = (i == j) || (j == k) || (i == k);
                        v = pair ? 1.0 - theta : 1.0 / 3.0;
                    }
                    t.p[i][j][k][l] = v;
                }
    return t;
}

void validate_tensor(const HeredityTensor& t) {
    constexpr double tol = 1e-12;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                double row = 0.0;
                for (int l = 0; l < 3; ++l) {
                    const double v = t.p[i][j][k][l];
                    row += v;
                    if (l != i && l != j && l != k && std::abs(v) > tol)
                        throw std::invalid_argument("tensor violates the volterra zero-pattern");
                    if (std::abs(v - t.p[j][i][k][l]) > tol ||
                        std::abs(v - t.p[i][k][j][l]) > tol)
                        throw std::invalid_argument("tensor is not symmetric in its parent indices");
                }
                if (std::abs(row - 1.0) > tol)
                    throw std::invalid_argument("tensor row sums must equal 1");
            }
}

Vec3 tensor_apply(const HeredityTensor& t, const Vec3& x) {
    validate_tensor(t);
    const Vec3 y = validate_point(x);
    Vec3 out = Vec3::Zero();
    for (int l = 0; l < 3; ++l) {
        double acc = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    acc += t.p[i][j][k][l] * y(i) * y(j) * y(k);
        out(l) = acc;
    }
    return out;
}

const std::array<Permutation, 6>& all_permutations() {
    static const std::array<Permutation, 6> perms = {{
        {0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}}};
    return perms;
}

Vec3 permute(const Vec3& x, const Permutation& sigma) {
    return {x(sigma[0]), x(sigma[1]), x(sigma[2])};
}

RegionLabel classify_region(const Vec3& x) {
    const Vec3 y = validate_point(x);
    // Orderings for G1..G6, counterclockwise around the center:
    // G1: x1>=x2>=x3, G2: x1>=x3>=x2, G3: x3>=x1>=x2,
    // G4: x3>=x2>=x1, G5: x2>=x3>=x1, G6: x2>=x1>=x3.
    static constexpr int order[6][3] = {
        {0, 1, 2}, {0, 2, 1}, {2, 0, 1}, {2, 1, 0}, {1, 2, 0}, {1, 0, 2}};
    RegionLabel r{};
    int n_sectors = 0;
    for (int s = 0; s < 6; ++s) {
        const bool in = y(order[s][0]) >= y(order[s][1]) - kEdgeTol &&
                        y(order[s][1]) >= y(order[s][2]) - kEdgeTol;
        r.sectors[s] = in;
        n_sectors += in;
    }
    r.interior = (n_sectors == 1) && y.minCoeff() > kEdgeTol;
    r.m12 = std::abs(y(0) - y(1)) <= kEdgeTol && y(2) <= std::min(y(0), y(1)) + kEdgeTol;
    r.m23 = std::abs(y(1) - y(2)) <= kEdgeTol && y(0) >= std::max(y(1), y(2)) - kEdgeTol;
    r.gamma12 = y(2) <= kEdgeTol && y(0) >= y(1) - kEdgeTol;
    r.vertex = false;
    for (auto label : fixed_points())
        if ((y - fixed_point_coords(label)).cwiseAbs().maxCoeff() <= kEdgeTol)
            r.vertex = true;
    return r;
}

FixedPointLabel nearest_fixed_point(const Vec3& x, double eps) {
    if (!(eps > 0.0 && eps < 0.1))
        throw std::invalid_argument("nearest_fixed_point requires 0 < eps < 0.1");
    for (auto label : fixed_points())
        if ((x - fixed_point_coords(label)).norm() < eps) return label;
    return FixedPointLabel::Undecided;
}

}  // namespace cso
