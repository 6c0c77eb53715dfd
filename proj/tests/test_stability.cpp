#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "cso/distribution.hpp"
#include "cso/simplex.hpp"
#include "cso/stability.hpp"

using namespace cso;

namespace {

Vec3 random_simplex_point(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double e1 = -std::log(1.0 - u(gen));
    double e2 = -std::log(1.0 - u(gen));
    double e3 = -std::log(1.0 - u(gen));
    const double s = e1 + e2 + e3;
    return Vec3(e1 / s, e2 / s, e3 / s);
}

bool contains(const std::vector<FixedPointLabel>& set, FixedPointLabel l) {
    return std::find(set.begin(), set.end(), l) != set.end();
}

}  // namespace

TEST_CASE("jacobian matches finite differences of the raw map") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double h = 1e-6;
    for (int trial = 0; trial < 1000; ++trial) {
        const double theta = u(gen);
        const Vec3 x = random_simplex_point(gen);
        const Mat3 j = jacobian(theta, x);
        for (int c = 0; c < 3; ++c) {
            Vec3 hi = x, lo = x;
            hi(c) += h;
            lo(c) -= h;
            const Vec3 col =
                (apply_operator_raw(theta, hi) - apply_operator_raw(theta, lo)) /
                (2.0 * h);
            CHECK((j.col(c) - col).cwiseAbs().maxCoeff() <= 1e-5);
        }
    }
}

TEST_CASE("jacobian columns sum to three on the simplex") {
    // d/dx of sum(V_raw) = d/dx (sum x)^3 = 3 (sum x)^2 = 3 on the simplex
    std::mt19937_64 gen(22);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Mat3 j = jacobian(u(gen), random_simplex_point(gen));
        for (int c = 0; c < 3; ++c)
            CHECK(j.col(c).sum() == doctest::Approx(3.0).epsilon(1e-10));
    }
}

TEST_CASE("jacobian acts as the tangent derivative of the normalized map") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double h = 1e-7;
    for (int trial = 0; trial < 200; ++trial) {
        const double theta = u(gen);
        Vec3 x = random_simplex_point(gen);
        // keep the probe interior so x +- h t stays on the simplex
        x = (x + Vec3(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)) / 2.0;
        Vec3 t(u(gen) - 0.5, u(gen) - 0.5, 0.0);
        t(2) = -t.sum();
        t.normalize();
        const Vec3 fd =
            (apply_operator(theta, x + h * t) - apply_operator(theta, x - h * t)) /
            (2.0 * h);
        CHECK((jacobian(theta, x) * t - fd).cwiseAbs().maxCoeff() <= 1e-5);
    }
}

TEST_CASE("vertex eigenvalues match the numerically extracted tangent spectrum") {
    // tangent-plane basis used to restrict the 3x3 jacobian
    Eigen::Matrix<double, 3, 2> basis;
    basis.col(0) = Vec3(1.0, -1.0, 0.0).normalized();
    basis.col(1) = Vec3(1.0, 1.0, -2.0).normalized();
    const Eigen::Matrix<double, 2, 3> lift =
        (basis.transpose() * basis).inverse() * basis.transpose();

    for (const double theta : {0.0, 0.2, 2.0 / 3.0, 0.8, 1.0}) {
        for (const auto label :
             {FixedPointLabel::Center, FixedPointLabel::E1, FixedPointLabel::C12}) {
            std::vector<double> expected = vertex_eigenvalues(theta, label);
            std::sort(expected.begin(), expected.end());

            const Mat3 j = jacobian(theta, fixed_point_coords(label));
            const Eigen::Matrix2d restricted = lift * j * basis;
            const Eigen::EigenSolver<Eigen::Matrix2d> es(restricted);
            std::vector<double> got = {es.eigenvalues()(0).real(),
                                       es.eigenvalues()(1).real()};
            CHECK(std::abs(es.eigenvalues()(0).imag()) <= 1e-10);
            CHECK(std::abs(es.eigenvalues()(1).imag()) <= 1e-10);
            std::sort(got.begin(), got.end());

            REQUIRE(expected.size() == 2);
            CHECK(got[0] == doctest::Approx(expected[0]).epsilon(1e-8));
            CHECK(got[1] == doctest::Approx(expected[1]).epsilon(1e-8));
        }
    }
    CHECK_THROWS_AS((void)vertex_eigenvalues(0.5, FixedPointLabel::E2),
                    std::invalid_argument);
}

TEST_CASE("closed-form eigenvalue formulas") {
    for (const double theta : {0.0, 0.3, 2.0 / 3.0, 0.9, 1.0}) {
        const auto c = vertex_eigenvalues(theta, FixedPointLabel::Center);
        CHECK(c[0] == doctest::Approx(1.0 / 3.0 + theta).epsilon(1e-15));
        CHECK(c[1] == c[0]);
        const auto e = vertex_eigenvalues(theta, FixedPointLabel::E1);
        CHECK(e[0] == doctest::Approx(3.0 * (1.0 - theta)).epsilon(1e-15));
        CHECK(e[1] == e[0]);
        auto s = vertex_eigenvalues(theta, FixedPointLabel::C12);
        std::sort(s.begin(), s.end());
        CHECK(std::min(1.5 * theta, 2.0 - 1.5 * theta) ==
              doctest::Approx(s[0]).epsilon(1e-15));
        CHECK(std::max(1.5 * theta, 2.0 - 1.5 * theta) ==
              doctest::Approx(s[1]).epsilon(1e-15));
    }
}

TEST_CASE("exact exponents for a point mass are plain logs") {
    const StabilityReport r = exact_exponents(dirac_dist(0.9));
    CHECK(r.e1_exponent == doctest::Approx(std::log(0.3)).epsilon(1e-15));
    CHECK(r.center_exponent ==
          doctest::Approx(std::log(1.0 / 3.0 + 0.9)).epsilon(1e-15));
    CHECK(r.saddle_in_exponent == doctest::Approx(std::log(1.35)).epsilon(1e-15));
    CHECK(r.saddle_out_exponent == doctest::Approx(std::log(0.65)).epsilon(1e-15));
    CHECK(r.regions.int_g1.empty());
}

TEST_CASE("classifier reproduces the canonical examples") {
    SUBCASE("full-range uniform law: center attracts alone") {
        const RegionSets s = classify_attractors(uniform_dist(0.0, 1.0)).regions;
        CHECK(s.int_g1 == std::vector<FixedPointLabel>{FixedPointLabel::Center});
        CHECK(s.m12 == std::vector<FixedPointLabel>{FixedPointLabel::Center});
        CHECK(s.m23 == std::vector<FixedPointLabel>{FixedPointLabel::Center});
        CHECK(s.gamma12 == std::vector<FixedPointLabel>{FixedPointLabel::C12});
    }
    SUBCASE("point mass above 2/3: vertex attracts") {
        const RegionSets s = classify_attractors(dirac_dist(0.9)).regions;
        CHECK(s.int_g1 == std::vector<FixedPointLabel>{FixedPointLabel::E1});
        CHECK(s.m12 == std::vector<FixedPointLabel>{FixedPointLabel::C12});
        CHECK(s.m23 == std::vector<FixedPointLabel>{FixedPointLabel::E1});
        CHECK(s.gamma12 == std::vector<FixedPointLabel>{FixedPointLabel::E1});
    }
    SUBCASE("point mass below 2/3: center attracts") {
        const RegionSets s = classify_attractors(dirac_dist(0.4)).regions;
        CHECK(s.int_g1 == std::vector<FixedPointLabel>{FixedPointLabel::Center});
    }
    SUBCASE("symmetric windows around 2/3: all three coexist") {
        for (const double a : {0.1, 0.2, 1.0 / 3.0}) {
            const RegionSets s =
                classify_attractors(uniform_dist(2.0 / 3.0 - a, 2.0 / 3.0 + a))
                    .regions;
            CHECK(s.int_g1 ==
                  std::vector<FixedPointLabel>{FixedPointLabel::E1,
                                               FixedPointLabel::C12,
                                               FixedPointLabel::Center});
        }
    }
}

TEST_CASE("classifier rejects the law concentrated on the identity map") {
    CHECK_THROWS_WITH_AS(classify_attractors(dirac_dist(2.0 / 3.0)),
                         doctest::Contains("excluded case"), std::domain_error);
    CHECK_THROWS_AS(
        classify_attractors(parse_distribution("mix:0.5*dirac:2/3+0.5*dirac:2/3")),
        std::domain_error);
    // mass elsewhere, however small the window, is fine
    CHECK_NOTHROW(classify_attractors(
        parse_distribution("mix:0.999*dirac:2/3+0.001*uniform:0.6,0.7")));
}

TEST_CASE("classifier is invariant under atom splitting") {
    const RegionSets a = classify_attractors(dirac_dist(0.71)).regions;
    const RegionSets b =
        classify_attractors(parse_distribution("mix:0.25*dirac:0.71+0.75*dirac:0.71"))
            .regions;
    CHECK(a.int_g1 == b.int_g1);
    CHECK(a.m12 == b.m12);
    CHECK(a.m23 == b.m23);
    CHECK(a.gamma12 == b.gamma12);
}

TEST_CASE("membership flips exactly at the exponent zero crossing") {
    // two-point mixture with offset 0.1: the E1 exponent vanishes at
    // theta* = 1 - sqrt(1/9 + 0.01)
    const double theta_star = 1.0 - std::sqrt(1.0 / 9.0 + 0.01);
    const auto at = [&](double t) {
        return classify_attractors(
                   mixture({{0.5, t - 0.1}, {0.5, t + 0.1}}, {}))
            .regions.int_g1;
    };
    CHECK_FALSE(contains(at(theta_star - 1e-9), FixedPointLabel::E1));
    CHECK(contains(at(theta_star + 1e-9), FixedPointLabel::E1));
}

TEST_CASE("empirical exponent tracks the exact one") {
    SUBCASE("degenerate identity law gives exactly zero") {
        CHECK(std::abs(empirical_exponent(dirac_dist(2.0 / 3.0),
                                          Vec3(0.5, 0.3, 0.2), SeedSpec{5, 0},
                                          5000)) <= 1e-12);
    }
    SUBCASE("contracting vertex: exponent of the orbit limit") {
        // orbit from near e1 stays near e1, so the time average approaches
        // log 3(1-theta)
        const double v = empirical_exponent(dirac_dist(0.9),
                                            Vec3(0.999, 0.0006, 0.0004),
                                            SeedSpec{5, 1}, 20000);
        CHECK(v == doctest::Approx(std::log(0.3)).epsilon(0.01));
    }
    SUBCASE("random law converging to the center") {
        const ThetaDistribution d = uniform_dist(1.0 / 3.0, 1.0);
        const double exact = expect_log(d, LogIntegrand::Center);
        const double v = empirical_exponent(d, Vec3(0.5, 0.3, 0.2),
                                            SeedSpec{5, 2}, 40000);
        CHECK(std::abs(v - exact) <= 0.05);
    }
    SUBCASE("rejects orbits too short to average") {
        CHECK_THROWS_AS((void)empirical_exponent(dirac_dist(0.5),
                                                 Vec3(0.5, 0.3, 0.2),
                                                 SeedSpec{5, 3}, 999),
                        std::invalid_argument);
    }
}

TEST_CASE("two-point scan") {
    SUBCASE("row count and grid") {
        const auto rows = scan_two_point(0.6, 0.61, 0.005, 0.1);
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].center == 0.6);
        CHECK(rows[1].center == doctest::Approx(0.605).epsilon(1e-12));
        CHECK(rows[2].center == doctest::Approx(0.61).epsilon(1e-12));
    }
    SUBCASE("rows agree with direct classification of the mixture") {
        const auto rows = scan_two_point(0.6, 0.6, 0.001, 0.1);
        REQUIRE(rows.size() == 1);
        const StabilityReport direct =
            classify_attractors(mixture({{0.5, 0.5}, {0.5, 0.7}}, {}));
        CHECK(rows[0].exp_e1 == direct.e1_exponent);
        CHECK(rows[0].exp_center == direct.center_exponent);
        CHECK(rows[0].exp_saddle_in == direct.saddle_in_exponent);
        CHECK(rows[0].exp_saddle_out == direct.saddle_out_exponent);
        CHECK(rows[0].int_g1 == direct.regions.int_g1);
    }
    SUBCASE("zero offset degenerates to a point-mass scan") {
        const auto rows = scan_two_point(0.4, 0.4, 0.001, 0.0);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].exp_e1 ==
              doctest::Approx(std::log(3.0 * 0.6)).epsilon(1e-15));
    }
    SUBCASE("rejects ranges whose atoms leave the parameter interval") {
        CHECK_THROWS_AS((void)scan_two_point(0.05, 0.5, 0.01, 0.1),
                        std::invalid_argument);
        CHECK_THROWS_AS((void)scan_two_point(0.5, 0.95, 0.01, 0.1),
                        std::invalid_argument);
        CHECK_THROWS_AS((void)scan_two_point(0.5, 0.4, 0.01, 0.1),
                        std::invalid_argument);
        CHECK_THROWS_AS((void)scan_two_point(0.4, 0.5, 0.0, 0.1),
                        std::invalid_argument);
    }
}
