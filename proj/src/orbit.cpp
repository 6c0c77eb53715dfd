#include "cso/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace cso {

namespace {

// Static strided work split: worker t handles indices t, t+T, t+2T, ...
// Every index writes only its own slot, so results cannot depend on the
// thread count. The first worker exception is rethrown after joining.
template <typename Body>
void run_strided(std::size_t n, unsigned n_threads, const Body& body) {
    const unsigned workers =
        std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(n)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n; i += workers) body(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

TrajectoryRecord iterate(const ThetaDistribution& dist, const Vec3& x0, SeedSpec seed,
                         std::size_t max_steps, double eps_conv, std::size_t dwell,
                         bool record_history) {
    if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
    if (!(eps_conv > 0.0 && eps_conv <= 0.05))
        throw std::invalid_argument("eps_conv must lie in (0, 0.05]");
    if (dwell < 1) throw std::invalid_argument("dwell must be >= 1");
    validate_distribution(dist);

    TrajectoryRecord rec;
    rec.initial = validate_point(x0);
    rec.seed = seed;
    rec.verdict = FixedPointLabel::Undecided;

    Vec3 x = rec.initial;
    std::size_t stride = 1;
    if (record_history) rec.history.push_back(x);

    RandomStream stream(seed);
    FixedPointLabel candidate = FixedPointLabel::Undecided;
    std::size_t streak = 0;
    std::size_t n = 0;
    try {
        for (n = 1; n <= max_steps; ++n) {
            x = apply_operator(stream.sample(dist), x);
            if (record_history && n % stride == 0) {
                rec.history.push_back(x);
                if (rec.history.size() == 1024) {
                    // Buffer full: keep every other entry and double the stride.
                    for (std::size_t k = 0; 2 * k < rec.history.size(); ++k)
                        rec.history[k] = rec.history[2 * k];
                    rec.history.resize((rec.history.size() + 1) / 2);
                    stride *= 2;
                }
            }
            const FixedPointLabel near = nearest_fixed_point(x, eps_conv);
            if (near != FixedPointLabel::Undecided && near == candidate) {
                ++streak;
            } else {
                candidate = near;
                streak = (near == FixedPointLabel::Undecided) ? 0 : 1;
            }
            if (streak >= dwell) {
                rec.verdict = candidate;
                break;
            }
        }
    } catch (const std::invalid_argument& e) {
        // The orbit can only leave the simplex through an internal bug.
        throw std::runtime_error(std::string("orbit left the simplex: ") + e.what());
    }
    rec.steps_taken = std::min(n, max_steps);
    rec.final = x;
    return rec;
}

BasinEstimate estimate_basin(const ThetaDistribution& dist, const Vec3& x0,
                             std::size_t trials, std::uint64_t master_seed,
                             std::size_t max_steps, double eps_conv, std::size_t dwell,
                             unsigned n_threads, std::uint64_t stream_base) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    validate_distribution(dist);
    const Vec3 start = validate_point(x0);

    std::vector<FixedPointLabel> verdicts(trials);
    run_strided(trials, n_threads, [&](std::size_t i) {
        verdicts[i] = iterate(dist, start, SeedSpec{master_seed, stream_base + i},
                              max_steps, eps_conv, dwell)
                          .verdict;
    });

    BasinEstimate est{start, trials, {}};
    for (const auto v : verdicts) ++est.hits[static_cast<int>(v)];
    return est;
}

std::vector<Vec3> sector_grid(std::size_t resolution) {
    if (resolution < 3)
        throw std::invalid_argument("sector grid needs resolution >= 3");
    const Vec3 e1 = fixed_point_coords(FixedPointLabel::E1);
    const Vec3 c = fixed_point_coords(FixedPointLabel::C12);
    const Vec3 center = fixed_point_coords(FixedPointLabel::Center);
    std::vector<Vec3> grid;
    grid.reserve((resolution - 1) * (resolution - 2) / 2);
    const auto n = static_cast<double>(resolution);
    for (std::size_t i = 1; i + 2 <= resolution; ++i)
        for (std::size_t j = 1; i + j + 1 <= resolution; ++j) {
            const std::size_t k = resolution - i - j;
            grid.push_back((static_cast<double>(i) * e1 + static_cast<double>(j) * c +
                            static_cast<double>(k) * center) /
                           n);
        }
    return grid;
}

Vec3 escape_start_point(FixedPointLabel target, double start_distance) {
    if (target != FixedPointLabel::E1 && target != FixedPointLabel::C12 &&
        target != FixedPointLabel::Center)
        throw std::invalid_argument("escape target must be one of E1, C12, Center");
    if (!(start_distance > 0.0 && start_distance < 0.1))
        throw std::invalid_argument("start_distance must lie in (0, 0.1)");
    const Vec3 fp = fixed_point_coords(target);
    const Vec3 barycenter(11.0 / 18.0, 5.0 / 18.0, 2.0 / 18.0);
    return validate_point(fp + start_distance * (barycenter - fp).normalized());
}

EscapeResult escape_experiment(const ThetaDistribution& dist, FixedPointLabel target,
                               double start_distance, double eps, std::size_t trials,
                               std::size_t max_steps, std::uint64_t master_seed,
                               unsigned n_threads) {
    if (!(start_distance > 0.0 && start_distance < eps && eps <= 0.05))
        throw std::invalid_argument("need 0 < start_distance < eps <= 0.05");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
    validate_distribution(dist);
    const Vec3 fp = fixed_point_coords(target);
    const Vec3 start = escape_start_point(target, start_distance);

    // Slot i holds the first step at which trial i left the ball; 0 means
    // it never did.
    std::vector<std::size_t> exit_step(trials, 0);
    run_strided(trials, n_threads, [&](std::size_t i) {
        RandomStream stream(SeedSpec{master_seed, i});
        Vec3 x = start;
        for (std::size_t n = 1; n <= max_steps; ++n) {
            x = apply_operator(stream.sample(dist), x);
            if ((x - fp).norm() > eps) {
                exit_step[i] = n;
                break;
            }
        }
    });

    std::vector<std::size_t> exits;
    exits.reserve(trials);
    for (const auto s : exit_step)
        if (s > 0) exits.push_back(s);
    std::sort(exits.begin(), exits.end());

    EscapeResult res;
    res.trials = trials;
    res.escaped = exits.size();
    res.fraction = static_cast<double>(res.escaped) / static_cast<double>(trials);
    if (exits.empty()) {
        res.median_steps = std::numeric_limits<double>::quiet_NaN();
    } else if (exits.size() % 2 == 1) {
        res.median_steps = static_cast<double>(exits[exits.size() / 2]);
    } else {
        res.median_steps = 0.5 * (static_cast<double>(exits[exits.size() / 2 - 1]) +
                                  static_cast<double>(exits[exits.size() / 2]));
    }
    return res;
}

}  // namespace cso
