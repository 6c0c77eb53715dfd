// Acceptance gate: one line per criterion, PASS/FAIL with the measured
// value and its tolerance. Exit code equals the number of failed criteria.
// Master seed for every randomized criterion is 42, fixed up front.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cso/commands.hpp"
#include "cso/distribution.hpp"
#include "cso/format.hpp"
#include "cso/normal_form.hpp"
#include "cso/orbit.hpp"
#include "cso/simplex.hpp"
#include "cso/stability.hpp"

using namespace cso;

namespace {

constexpr std::uint64_t kMasterSeed = 42;

struct Outcome {
    bool ok;
    std::string detail;
};

Vec3 random_simplex_point(RandomStream& rng) {
    double e1 = -std::log(1.0 - rng.uniform01());
    double e2 = -std::log(1.0 - rng.uniform01());
    double e3 = -std::log(1.0 - rng.uniform01());
    const double s = e1 + e2 + e3;
    return validate_point(Vec3(e1 / s, e2 / s, e3 / s));
}

// --- 1: the midpoint parameter is the identity map ------------------------

Outcome identity_case() {
    RandomStream rng(SeedSpec{kMasterSeed, 101});
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Vec3 x = random_simplex_point(rng);
        worst = std::max(worst,
                         (apply_operator(2.0 / 3.0, x) - x).cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-12,
            "identity map deviation " + format_double(worst) + " (tol 1e-12)"};
}

// --- 2: closed form vs heredity-tensor sum --------------------------------

Outcome tensor_equivalence() {
    RandomStream rng(SeedSpec{kMasterSeed, 102});
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double theta = rng.uniform01();
        const Vec3 x = random_simplex_point(rng);
        const HeredityTensor t = build_tensor(theta);
        worst = std::max(
            worst, (tensor_apply(t, x) - apply_operator(theta, x)).cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-12,
            "tensor vs closed form deviation " + format_double(worst) + " (tol 1e-12)"};
}

// --- 3: jacobian closed forms and finite differences ----------------------

Outcome jacobian_forms() {
    double worst_exact = 0.0;
    for (const double th : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        Mat3 at_center;
        at_center.setConstant(8.0 / 9.0 - th / 3.0);
        at_center.diagonal().setConstant(11.0 / 9.0 + 2.0 * th / 3.0);

        Mat3 at_vertex;
        at_vertex << 3.0, 3.0 * th, 3.0 * th,
                     0.0, 3.0 * (1.0 - th), 0.0,
                     0.0, 0.0, 3.0 * (1.0 - th);

        Mat3 at_midpoint;
        at_midpoint << 1.5 + 0.75 * th, 1.5 - 0.75 * th, 0.5 + 0.75 * th,
                       1.5 - 0.75 * th, 1.5 + 0.75 * th, 0.5 + 0.75 * th,
                       0.0, 0.0, 2.0 - 1.5 * th;

        const auto dev = [&](FixedPointLabel l, const Mat3& want) {
            return (jacobian(th, fixed_point_coords(l)) - want).cwiseAbs().maxCoeff();
        };
        worst_exact = std::max({worst_exact, dev(FixedPointLabel::Center, at_center),
                                dev(FixedPointLabel::E1, at_vertex),
                                dev(FixedPointLabel::C12, at_midpoint)});
    }

    RandomStream rng(SeedSpec{kMasterSeed, 103});
    double worst_fd = 0.0;
    const double h = 1e-6;
    for (int i = 0; i < 1000; ++i) {
        const double theta = rng.uniform01();
        const Vec3 x = random_simplex_point(rng);
        const Mat3 j = jacobian(theta, x);
        for (int c = 0; c < 3; ++c) {
            Vec3 hi = x, lo = x;
            hi(c) += h;
            lo(c) -= h;
            const Vec3 col =
                (apply_operator_raw(theta, hi) - apply_operator_raw(theta, lo)) /
                (2.0 * h);
            worst_fd = std::max(worst_fd, (j.col(c) - col).cwiseAbs().maxCoeff());
        }
    }
    return {worst_exact <= 1e-12 && worst_fd <= 1e-5,
            "closed-form deviation " + format_double(worst_exact) +
                " (tol 1e-12), finite-difference deviation " + format_double(worst_fd) +
                " (tol 1e-5)"};
}

// --- 4: exact log-expectations for the full-range uniform law -------------

Outcome uniform_expectations() {
    const ThetaDistribution u = uniform_dist(0.0, 1.0);
    const double want[4] = {std::log(3.0) - 1.0, std::log(1.5) - 1.0,
                            5.0 / 3.0 * std::log(2.0) - 1.0,
                            std::log(4.0 / 3.0 * std::cbrt(4.0)) - 1.0};
    const double got[4] = {expect_log(u, LogIntegrand::E1),
                           expect_log(u, LogIntegrand::SaddleIn),
                           expect_log(u, LogIntegrand::SaddleOut),
                           expect_log(u, LogIntegrand::Center)};
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
    return {worst <= 1e-12,
            "four closed forms, deviation " + format_double(worst) + " (tol 1e-12)"};
}

// --- 5: classifier on the canonical laws -----------------------------------

Outcome classifier_cases() {
    using L = FixedPointLabel;
    const std::vector<std::pair<std::string, std::vector<L>>> cases = {
        {"uniform:0,1", {L::Center}},
        {"uniform:17/30,23/30", {L::E1, L::C12, L::Center}},
        {"uniform:7/15,13/15", {L::E1, L::C12, L::Center}},
        {"uniform:1/3,1", {L::E1, L::C12, L::Center}},
        {"dirac:0.9", {L::E1}},
        {"dirac:0.4", {L::Center}},
    };
    int bad = 0;
    std::string first_bad;
    for (const auto& [text, want] : cases) {
        const auto got = classify_attractors(parse_distribution(text)).regions.int_g1;
        if (got != want && first_bad.empty()) first_bad = text;
        bad += got != want;
    }
    return {bad == 0, bad == 0 ? "6/6 interior limit sets exact"
                               : "wrong set for " + first_bad};
}

// --- 6: two-point scan, set sequence and sign change ----------------------

Outcome scan_sequence() {
    const auto rows = scan_two_point(0.567, 0.767, 1e-3, 0.1);
    std::vector<std::string> sequence;
    for (const auto& r : rows) {
        const std::string s = join_labels(r.int_g1);
        if (sequence.empty() || sequence.back() != s) sequence.push_back(s);
    }
    const std::vector<std::string> want = {"Center", "E1;Center", "E1;C12;Center",
                                           "E1;C12", "E1"};
    double flip = -1.0;
    for (const auto& r : rows)
        if (r.exp_e1 < 0.0) {
            flip = r.center;
            break;
        }
    const double root = 1.0 - std::sqrt(1.0 / 9.0 + 0.01);
    const bool ok = sequence == want && flip >= 0.0 && std::abs(flip - root) <= 2e-3;
    std::string seq_text;
    for (const auto& s : sequence) seq_text += "{" + s + "} ";
    return {ok, "sequence " + seq_text + "sign change at " + format_double(flip) +
                    " vs root " + format_double(root) + " (tol 2e-3)"};
}

// --- 7: every observed limit lies in the predicted set --------------------

Outcome convergence_support() {
    const std::vector<std::string> dists = {
        "uniform:0,1",     "uniform:17/30,23/30", "uniform:7/15,13/15",
        "uniform:1/3,1",   "dirac:0.9",           "dirac:0.4"};
    const auto grid = sector_grid(7);  // 15 interior points
    const std::size_t trials = 100;
    std::string problems;
    double worst_undecided = 0.0;
    for (std::size_t d = 0; d < dists.size(); ++d) {
        const ThetaDistribution dist = parse_distribution(dists[d]);
        const auto predicted = classify_attractors(dist).regions.int_g1;
        std::uint64_t undecided = 0;
        bool outside = false;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const BasinEstimate est =
                estimate_basin(dist, grid[g], trials, kMasterSeed, 100000, 1e-6, 20,
                               8, (d * grid.size() + g) * trials);
            undecided += est.hits[static_cast<int>(FixedPointLabel::Undecided)];
            for (int l = 0; l + 1 < kLabelCount; ++l)
                if (est.hits[l] > 0 &&
                    std::find(predicted.begin(), predicted.end(),
                              static_cast<FixedPointLabel>(l)) == predicted.end())
                    outside = true;
        }
        const double undecided_frac =
            static_cast<double>(undecided) / static_cast<double>(grid.size() * trials);
        worst_undecided = std::max(worst_undecided, undecided_frac);
        if (outside) problems += " observed label outside prediction for " + dists[d];
        if (undecided_frac > 0.01) problems += " undecided > 1% for " + dists[d];
    }
    return {problems.empty(),
            "6 laws x 15 points x 100 trials, worst undecided fraction " +
                format_double(worst_undecided) + " (tol 0.01)" + problems};
}

// --- 8: intermingled basins ------------------------------------------------

Outcome intermingled_basins() {
    const ThetaDistribution dist = uniform_dist(1.0 / 3.0, 1.0);
    const BasinEstimate est = estimate_basin(dist, Vec3(0.5, 0.3, 0.2), 1000,
                                             kMasterSeed, 100000, 1e-6, 20, 8, 0);
    const double fe = est.fraction(FixedPointLabel::E1);
    const double fc = est.fraction(FixedPointLabel::C12);
    const double fm = est.fraction(FixedPointLabel::Center);
    return {fe >= 0.01 && fc >= 0.01 && fm >= 0.01,
            "frequencies E1 " + format_double(fe) + ", C12 " + format_double(fc) +
                ", Center " + format_double(fm) + " (each >= 0.01)"};
}

// --- 9: escape from repelling and marginal balls ---------------------------

Outcome escape_fractions() {
    const EscapeResult away = escape_experiment(dirac_dist(0.4), FixedPointLabel::E1,
                                                1e-3, 1e-2, 100, 10000, kMasterSeed, 8);
    const EscapeResult center = escape_experiment(dirac_dist(0.9),
                                                  FixedPointLabel::Center, 1e-3, 1e-2,
                                                  100, 10000, kMasterSeed, 8);

    const ThetaDistribution marginal =
        parse_distribution("mix:0.5*dirac:0.5+0.5*dirac:7/9");
    const double exponent = expect_log(marginal, LogIntegrand::E1);
    const EscapeResult mixed = escape_experiment(marginal, FixedPointLabel::E1, 1e-3,
                                                 1e-2, 1000, 1000000, kMasterSeed, 8);
    const bool ok = away.fraction == 1.0 && center.fraction == 1.0 &&
                    std::abs(exponent) <= 1e-12 && mixed.fraction >= 0.99;
    return {ok, "deterministic fractions " + format_double(away.fraction) + ", " +
                    format_double(center.fraction) +
                    " (need 1); zero-exponent mixture (|E log| = " +
                    format_double(std::abs(exponent)) + ") fraction " +
                    format_double(mixed.fraction) + " (need >= 0.99)"};
}

// --- 10: normal-form pipeline ----------------------------------------------

Outcome normal_form_checks() {
    double worst_vanish = 0.0;
    for (const double th : {0.0, 0.3, 0.9, 1.0})
        worst_vanish = std::max(worst_vanish,
                                fd_quadratic([&](const Vec2& p) {
                                    return composed_map(th, th, p);
                                }).quad.cwiseAbs().maxCoeff());

    RandomStream rng(SeedSpec{kMasterSeed, 110});
    double worst_pair = 0.0;
    for (int i = 0; i < 20; ++i) {
        double theta = rng.uniform01();
        while (theta == 2.0 / 3.0) theta = rng.uniform01();
        const double nu = rng.uniform01();
        const auto fd =
            fd_quadratic([&](const Vec2& p) { return composed_map(theta, nu, p); });
        const auto an = composed_quadratic(theta, nu);
        worst_pair = std::max(worst_pair, (fd.quad - an.quad).cwiseAbs().maxCoeff());
        worst_pair = std::max(worst_pair, std::abs(fd.linear - an.linear));
    }

    double min_margin = 1.0;
    for (const double k : {-0.4, -0.2, 0.0, 0.2, 0.5, 0.8, 0.99})
        for (const double x : {1e-4, 1e-3})
            min_margin = std::min(min_margin, slope_drift(0.8, 0.4, k, x) - k);

    double worst_inv = 0.0;
    for (const double k : {1.0, -0.5})
        for (const double x : {1e-4, 1e-3, 1e-2})
            worst_inv = std::max(worst_inv, std::abs(slope_drift(0.8, 0.4, k, x) - k));

    const bool ok = worst_vanish <= 1e-6 && worst_pair <= 1e-6 && min_margin > 0.0 &&
                    worst_inv <= 1e-12;
    return {ok, "vanishing quadratic " + format_double(worst_vanish) +
                    " (tol 1e-6), composed coefficients " + format_double(worst_pair) +
                    " (tol 1e-6), slope margin " + format_double(min_margin) +
                    " (> 0), invariance " + format_double(worst_inv) + " (tol 1e-12)"};
}

// --- 11: worker-count determinism ------------------------------------------

Outcome determinism() {
    BasinConfig cfg;
    cfg.dist = "uniform:0.4,0.9";
    cfg.grid = 6;
    cfg.trials = 25;
    cfg.seed = kMasterSeed;
    cfg.steps = 30000;

    std::ostringstream one, eight;
    cfg.threads = 1;
    run_basin(cfg, one);
    cfg.threads = 8;
    run_basin(cfg, eight);
    const bool ok = one.str() == eight.str() && !one.str().empty();
    return {ok, ok ? "basin CSV byte-identical at 1 and 8 workers"
                   : "basin CSV differs between 1 and 8 workers"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"identity parameter", identity_case},
        {"tensor oracle", tensor_equivalence},
        {"jacobian forms", jacobian_forms},
        {"uniform expectations", uniform_expectations},
        {"classifier", classifier_cases},
        {"scan sequence", scan_sequence},
        {"convergence support", convergence_support},
        {"intermingled basins", intermingled_basins},
        {"escape fractions", escape_fractions},
        {"normal form", normal_form_checks},
        {"determinism", determinism},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        std::printf("%s criterion %2zu (%s): %s [%lld ms]\n",
                    out.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    out.detail.c_str(), static_cast<long long>(ms));
        std::fflush(stdout);
        failures += !out.ok;
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
