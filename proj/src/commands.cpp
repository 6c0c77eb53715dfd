#include "cso/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "cso/distribution.hpp"
#include "cso/format.hpp"
#include "cso/normal_form.hpp"
#include "cso/orbit.hpp"
#include "cso/stability.hpp"

namespace cso {

namespace {

std::string format_point(const Vec3& x) {
    return format_double(x(0)) + "," + format_double(x(1)) + "," + format_double(x(2));
}

// Uniform draw from the fundamental sector: normalized exponentials sorted
// into descending order.
Vec3 random_sector_point(RandomStream& rng) {
    double e[3];
    for (auto& v : e) v = -std::log(1.0 - rng.uniform01());
    std::sort(e, e + 3, std::greater<>());
    return validate_point(Vec3(e[0], e[1], e[2]) / (e[0] + e[1] + e[2]));
}

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double cov = 0.0, var = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        cov += (xs[i] - mx) * (ys[i] - my);
        var += (xs[i] - mx) * (xs[i] - mx);
    }
    return cov / var;
}

// The exponent that decides whether the target ball repels: the local gain
// at the vertex for E1/Center, and the larger of the two edge gains at the
// saddle (escape needs only one expanding direction).
double relevant_exponent(const ThetaDistribution& dist, FixedPointLabel target) {
    switch (target) {
        case FixedPointLabel::E1: return expect_log(dist, LogIntegrand::E1);
        case FixedPointLabel::Center: return expect_log(dist, LogIntegrand::Center);
        case FixedPointLabel::C12:
            return std::max(expect_log(dist, LogIntegrand::SaddleIn),
                            expect_log(dist, LogIntegrand::SaddleOut));
        default:
            throw std::invalid_argument("escape target must be one of E1, C12, Center");
    }
}

}  // namespace

Vec3 parse_point(const std::string& text) {
    const std::string_view s = text;
    const auto c1 = s.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : s.find(',', c1 + 1);
    if (c2 == std::string_view::npos || s.find(',', c2 + 1) != std::string_view::npos)
        throw std::invalid_argument("point must be three comma-separated numbers: '" +
                                    text + "'");
    return make_point(parse_real(s.substr(0, c1)),
                      parse_real(s.substr(c1 + 1, c2 - c1 - 1)),
                      parse_real(s.substr(c2 + 1)));
}

std::string join_labels(const std::vector<FixedPointLabel>& labels) {
    std::string out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i > 0) out += ';';
        out += label_name(labels[i]);
    }
    return out;
}

void run_simulate(const SimulateConfig& cfg, std::ostream& csv) {
    const ThetaDistribution dist = parse_distribution(cfg.dist);
    const Vec3 x0 = parse_point(cfg.x0);
    csv << "# command=simulate\n"
        << "# dist=" << format_distribution(dist) << '\n'
        << "# x0=" << format_point(x0) << '\n'
        << "# steps=" << cfg.steps << '\n'
        << "# eps=" << format_double(cfg.eps) << '\n'
        << "# dwell=" << cfg.dwell << '\n'
        << "# seed=" << cfg.seed << '\n';
    const TrajectoryRecord rec =
        iterate(dist, x0, SeedSpec{cfg.seed, 0}, cfg.steps, cfg.eps, cfg.dwell);
    csv << "x1,x2,x3,seed,steps,final_x1,final_x2,final_x3,verdict\n"
        << format_point(rec.initial) << ',' << cfg.seed << ',' << rec.steps_taken << ','
        << format_point(rec.final) << ',' << label_name(rec.verdict) << '\n';
}

void run_classify(const ClassifyConfig& cfg, std::ostream& csv, std::ostream& report) {
    const ThetaDistribution dist = parse_distribution(cfg.dist);
    const StabilityReport rep = classify_attractors(dist);
    csv << "# command=classify\n"
        << "# dist=" << format_distribution(dist) << '\n'
        << "quantity,value\n"
        << "exponent_e1," << format_double(rep.e1_exponent) << '\n'
        << "exponent_center," << format_double(rep.center_exponent) << '\n'
        << "exponent_saddle_in," << format_double(rep.saddle_in_exponent) << '\n'
        << "exponent_saddle_out," << format_double(rep.saddle_out_exponent) << '\n'
        << "set_intG1," << join_labels(rep.regions.int_g1) << '\n'
        << "set_M12," << join_labels(rep.regions.m12) << '\n'
        << "set_M23," << join_labels(rep.regions.m23) << '\n'
        << "set_Gamma12," << join_labels(rep.regions.gamma12) << '\n';

    report << "parameter law " << format_distribution(dist) << '\n'
           << "  E log 3(1-T)     = " << format_double(rep.e1_exponent)
           << "   (gain at E1)\n"
           << "  E log (1/3+T)    = " << format_double(rep.center_exponent)
           << "   (gain at Center)\n"
           << "  E log (3T/2)     = " << format_double(rep.saddle_in_exponent)
           << "   (saddle, along the equal-pair edge)\n"
           << "  E log (2-3T/2)   = " << format_double(rep.saddle_out_exponent)
           << "   (saddle, across it)\n"
           << "limit sets by region\n"
           << "  int G1  : {" << join_labels(rep.regions.int_g1) << "}\n"
           << "  M12     : {" << join_labels(rep.regions.m12) << "}\n"
           << "  M23     : {" << join_labels(rep.regions.m23) << "}\n"
           << "  Gamma12 : {" << join_labels(rep.regions.gamma12) << "}\n";
}

void run_scan(const ScanConfig& cfg, std::ostream& csv) {
    const auto rows = scan_two_point(cfg.from, cfg.to, cfg.step, cfg.offset);
    csv << "# command=scan\n"
        << "# from=" << format_double(cfg.from) << '\n'
        << "# to=" << format_double(cfg.to) << '\n'
        << "# step=" << format_double(cfg.step) << '\n'
        << "# offset=" << format_double(cfg.offset) << '\n'
        << "theta,exp_e1,exp_center,exp_saddle_in,exp_saddle_out,set_intG1\n";
    for (const auto& r : rows)
        csv << format_double(r.center) << ',' << format_double(r.exp_e1) << ','
            << format_double(r.exp_center) << ',' << format_double(r.exp_saddle_in) << ','
            << format_double(r.exp_saddle_out) << ',' << join_labels(r.int_g1) << '\n';
}

void run_basin(const BasinConfig& cfg, std::ostream& csv) {
    const ThetaDistribution dist = parse_distribution(cfg.dist);
    const auto grid = sector_grid(cfg.grid);
    csv << "# command=basin\n"
        << "# dist=" << format_distribution(dist) << '\n'
        << "# grid=" << cfg.grid << '\n'
        << "# trials=" << cfg.trials << '\n'
        << "# steps=" << cfg.steps << '\n'
        << "# eps=" << format_double(cfg.eps) << '\n'
        << "# dwell=" << cfg.dwell << '\n'
        << "# seed=" << cfg.seed << '\n'
        << "x1,x2,x3,trials,E1,E2,E3,C12,C13,C23,Center,Undecided\n";
    for (std::size_t g = 0; g < grid.size(); ++g) {
        // Disjoint stream ranges per grid point keep every trajectory's
        // parameter sequence independent of the grid layout.
        const BasinEstimate est =
            estimate_basin(dist, grid[g], cfg.trials, cfg.seed, cfg.steps, cfg.eps,
                           cfg.dwell, cfg.threads, g * cfg.trials);
        csv << format_point(est.initial) << ',' << est.trials;
        for (int l = 0; l < kLabelCount; ++l) csv << ',' << est.hits[l];
        csv << '\n';
    }
}

void run_escape(const EscapeConfig& cfg, std::ostream& csv) {
    const ThetaDistribution dist = parse_distribution(cfg.dist);
    const FixedPointLabel target = parse_label(cfg.target);
    const double exponent = relevant_exponent(dist, target);
    csv << "# command=escape\n"
        << "# dist=" << format_distribution(dist) << '\n'
        << "# target=" << label_name(target) << '\n'
        << "# start=" << format_double(cfg.start) << '\n'
        << "# eps=" << format_double(cfg.eps) << '\n'
        << "# trials=" << cfg.trials << '\n'
        << "# steps=" << cfg.steps << '\n'
        << "# seed=" << cfg.seed << '\n';
    if (exponent < 0.0)
        csv << "# note=target exponent is negative: the ball attracts on average and "
               "full escape is not expected\n";
    const EscapeResult res = escape_experiment(dist, target, cfg.start, cfg.eps,
                                               cfg.trials, cfg.steps, cfg.seed,
                                               cfg.threads);
    csv << "target,exponent,start_distance,eps,trials,max_steps,escaped,fraction,"
           "median_steps\n"
        << label_name(target) << ',' << format_double(exponent) << ','
        << format_double(cfg.start) << ',' << format_double(cfg.eps) << ',' << res.trials
        << ',' << cfg.steps << ',' << res.escaped << ',' << format_double(res.fraction)
        << ',' << format_double(res.median_steps) << '\n';
}

int run_normalform_check(const NormalFormCheckConfig& cfg, std::ostream& csv) {
    csv << "# command=normalform-check\n"
        << "# seed=" << cfg.seed << '\n'
        << "check,value,threshold,status\n";
    int failures = 0;
    // A flag row reports an observation without gating the exit code.
    const auto emit = [&](const char* name, double value, const char* threshold,
                          bool ok, bool flag_only = false) {
        const char* status = ok ? "pass" : (flag_only ? "flag" : "fail");
        if (!ok && !flag_only) ++failures;
        csv << name << ',' << format_double(value) << ',' << threshold << ',' << status
            << '\n';
    };

    {  // the chart origin is fixed for every parameter
        double worst = 0.0;
        for (int i = 0; i <= 10; ++i)
            worst = std::max(
                worst, reduced_map(i / 10.0, Vec2::Zero()).cwiseAbs().maxCoeff());
        emit("origin_fixed", worst, "1e-15", worst <= 1e-15);
    }
    {  // the map at 2/3 is the identity in the chart
        const Vec2 pts[] = {{0.05, 0.03}, {-0.04, 0.06}, {0.02, -0.07},
                            {0.0, 0.09},  {-0.08, -0.01}};
        double worst = 0.0;
        for (const auto& p : pts)
            worst = std::max(worst,
                             (reduced_map(2.0 / 3.0, p) - p).cwiseAbs().maxCoeff());
        emit("identity_at_two_thirds", worst, "1e-14", worst <= 1e-14);
    }
    {  // charted map agrees with the operator through the chart
        RandomStream rng(SeedSpec{cfg.seed, 1});
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double theta = rng.uniform01();
            const Vec3 x = random_sector_point(rng);
            const Vec3 lifted = lift_from_chart(reduced_map(theta, chart_from_simplex(x)));
            worst = std::max(worst,
                             (lifted - apply_operator(theta, x)).cwiseAbs().maxCoeff());
        }
        emit("chart_conjugacy", worst, "1e-14", worst <= 1e-14);
    }
    {  // closed-form Taylor data vs finite differences
        double worst = 0.0;
        for (const double theta : {0.0, 0.3, 0.5, 0.9, 1.0}) {
            const auto fd =
                fd_quadratic([&](const Vec2& p) { return reduced_map(theta, p); });
            const auto an = taylor_map(theta);
            worst = std::max(worst, (fd.quad - an.quad).cwiseAbs().maxCoeff());
            worst = std::max(worst, std::abs(fd.linear - an.linear));
        }
        emit("taylor_vs_fd", worst, "1e-06", worst <= 1e-6);
    }
    {  // conjugating by the map's own parameter kills the quadratic terms
        double worst = 0.0;
        for (const double theta : {0.0, 0.3, 0.9, 1.0})
            worst = std::max(worst, fd_quadratic([&](const Vec2& p) {
                                        return composed_map(theta, theta, p);
                                    }).quad.cwiseAbs().maxCoeff());
        emit("vanishing_quadratic", worst, "1e-06", worst <= 1e-6);
    }
    {  // analytic composed coefficients vs finite differences
        RandomStream rng(SeedSpec{cfg.seed, 2});
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            double theta = rng.uniform01();
            while (theta == 2.0 / 3.0) theta = rng.uniform01();
            const double nu = rng.uniform01();
            const auto fd = fd_quadratic(
                [&](const Vec2& p) { return composed_map(theta, nu, p); });
            const auto an = composed_quadratic(theta, nu);
            worst = std::max(worst, (fd.quad - an.quad).cwiseAbs().maxCoeff());
            worst = std::max(worst, std::abs(fd.linear - an.linear));
        }
        emit("composed_vs_fd", worst, "1e-06", worst <= 1e-6);
    }
    {  // Newton inverse round-trips the conjugacy
        double worst = 0.0;
        for (int i = 0; i <= 10; ++i) {
            const double theta = i / 10.0;
            for (int a = 0; a < 8; ++a) {
                const double ang = 2.0 * std::numbers::pi * a / 8.0;
                const Vec2 p(0.05 * std::cos(ang), 0.05 * std::sin(ang));
                worst = std::max(
                    worst,
                    (conjugacy_inverse(theta, conjugacy(theta, p)) - p)
                        .cwiseAbs()
                        .maxCoeff());
            }
        }
        emit("inverse_roundtrip", worst, "1e-12", worst <= 1e-12);
    }
    {  // slope drifts strictly upward strictly between the invariant lines
        double margin = std::numeric_limits<double>::infinity();
        for (const double k : {-0.4, -0.2, 0.0, 0.2, 0.5, 0.8, 0.99})
            for (const double x : {1e-4, 1e-3})
                margin = std::min(margin, slope_drift(0.8, 0.4, k, x) - k);
        emit("slope_monotone_margin", margin, ">0", margin > 0.0);
    }
    {  // the two edge lines stay invariant
        double worst = 0.0;
        for (const double k : {1.0, -0.5})
            for (const double x : {1e-4, 1e-3, 1e-2})
                worst = std::max(worst, std::abs(slope_drift(0.8, 0.4, k, x) - k));
        emit("slope_invariance", worst, "1e-12", worst <= 1e-12);
    }
    {  // saddle-coordinate recursions, product form (robust for tiny u)
        RandomStream rng(SeedSpec{cfg.seed, 3});
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double theta = rng.uniform01();
            const Vec3 x = random_sector_point(rng);
            const Vec2 predicted = saddle_recursion(theta, saddle_coordinates(x));
            const Vec2 actual = saddle_coordinates(apply_operator(theta, x));
            worst = std::max(worst, (predicted - actual).cwiseAbs().maxCoeff());
        }
        emit("u_recursion", worst, "1e-12", worst <= 1e-12);
    }
    {  // correction factors, ratio form; probes keep u and the gains away
       // from zero so the division does not amplify rounding
        RandomStream rng(SeedSpec{cfg.seed, 4});
        double worst = 0.0;
        int done = 0;
        while (done < 200) {
            const double theta = 0.1 + 0.8 * rng.uniform01();
            const Vec3 x = random_sector_point(rng);
            const Vec2 u = saddle_coordinates(x);
            if (u(0) < 0.05 || u(1) < 0.05) continue;
            const Vec2 un = saddle_coordinates(apply_operator(theta, x));
            const Vec2 s = saddle_corrections(theta, u);
            const double g1 = 1.5 * theta, g2 = 2.0 - 1.5 * theta;
            worst = std::max(worst, std::abs(un(0) / (g1 * u(0)) - s(0)));
            worst = std::max(worst, std::abs(un(1) / (g2 * u(1)) - s(1)));
            ++done;
        }
        emit("saddle_corrections", worst, "1e-12", worst <= 1e-12);
    }
    {  // envelope exponents of |s_i - 1| along a probe ray into the sector.
       // s1 - 1 is exactly quadratic in (u1,u2), so its fitted exponent is
       // 2. s2 - 1 carries an exact linear u2 term (see saddle_corrections),
       // so its generic-ray exponent is 1; that row is informational — the
       // sharp statement is the exact identity checked above.
        const Vec3 corner = fixed_point_coords(FixedPointLabel::C12);
        const Vec3 barycenter(11.0 / 18.0, 5.0 / 18.0, 2.0 / 18.0);
        const Vec3 dir = (barycenter - corner).normalized();
        const double theta = 0.37, g1 = 1.5 * theta, g2 = 2.0 - 1.5 * theta;
        std::vector<double> lr, l1, l2;
        for (int j = 0; j < 12; ++j) {
            const double t =
                std::exp(std::log(1e-4) + std::log(100.0) * j / 11.0);
            const Vec3 x = corner + t * dir;
            const Vec2 u = saddle_coordinates(x);
            const Vec2 un = saddle_coordinates(apply_operator(theta, x));
            lr.push_back(std::log(u.norm()));
            l1.push_back(std::log(std::abs(un(0) / (g1 * u(0)) - 1.0)));
            l2.push_back(std::log(std::abs(un(1) / (g2 * u(1)) - 1.0)));
        }
        const double slope1 = least_squares_slope(lr, l1);
        const double slope2 = least_squares_slope(lr, l2);
        emit("s1_envelope_fit", slope1, ">=1.9", slope1 >= 1.9);
        emit("s2_envelope_fit", slope2, ">=1.9", slope2 >= 1.9, /*flag_only=*/true);
    }
    return failures;
}

}  // namespace cso
